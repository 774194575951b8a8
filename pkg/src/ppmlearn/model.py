"""Data model: examples with privacy bits, datasets, and empirical error.

Empirical errors are kept as exact integer mistake counts so that argmin
and selection-probability logic downstream never touches floating point;
the exponential mechanism's sensitivity argument needs the exact 1/n
granularity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class EmptySampleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Example:
    """One example: feature vector x, binary label y, privacy bit p.

    p is True for private examples. Under the label-determined privacy
    model, p == (y == 1).
    """

    x: np.ndarray
    y: int
    p: bool

    def __post_init__(self):
        x = np.array(np.asarray(self.x, dtype=float))
        if x.ndim != 1 or not np.all(np.isfinite(x)):
            raise ValueError("x must be a finite vector")
        if self.y not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.y}")
        x.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", int(self.y))
        object.__setattr__(self, "p", bool(self.p))


@dataclass(frozen=True, eq=False)
class LabeledSample:
    """Ordered labeled examples (no privacy bits), as arrays.

    ``indices`` cites each example's position in the parent dataset so that
    derived structures stay traceable to the original order.
    """

    X: np.ndarray
    y: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        X = np.array(np.asarray(self.X, dtype=float))
        y = np.array(np.asarray(self.y, dtype=np.uint8))
        idx = np.array(np.asarray(self.indices, dtype=np.int64))
        if X.ndim != 2:
            raise ValueError("X must be 2-d")
        if y.shape != (X.shape[0],) or idx.shape != (X.shape[0],):
            raise ValueError("y/indices lengths must match X")
        for arr in (X, y, idx):
            arr.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "indices", idx)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def __len__(self):
        return self.n

    def __iter__(self):
        for i in range(self.n):
            yield self.X[i], int(self.y[i])


@dataclass(frozen=True, eq=False)
class PPMDataset:
    """Ordered sample of (x, y, p) triples in R^d.

    Order is significant and preserved; the public/private partition and
    the label-only view are derived from it deterministically.
    """

    dim: int
    X: np.ndarray
    y: np.ndarray
    p: np.ndarray  # True = private

    def __post_init__(self):
        X = np.array(np.asarray(self.X, dtype=float))
        y = np.array(np.asarray(self.y))
        p = np.array(np.asarray(self.p))
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise ValueError(f"X must have shape (n, {self.dim})")
        if X.shape[0] == 0:
            raise EmptySampleError("empty dataset rejected")
        if not np.all(np.isfinite(X)):
            raise ValueError("coordinates must be finite")
        if not np.isin(y, (0, 1)).all():
            raise ValueError("labels must be 0/1")
        if p.dtype != np.bool_ and not np.isin(p, (0, 1)).all():
            raise ValueError("privacy bits must be 0/1")
        y = y.astype(np.uint8)
        p = p.astype(bool)
        if y.shape != (X.shape[0],) or p.shape != (X.shape[0],):
            raise ValueError("y/p lengths must match X")
        for arr in (X, y, p):
            arr.flags.writeable = False
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_examples(cls, dim: int, examples) -> "PPMDataset":
        ex = list(examples)
        if not ex:
            raise EmptySampleError("empty dataset rejected")
        X = np.vstack([e.x for e in ex])
        y = np.array([e.y for e in ex], dtype=np.uint8)
        p = np.array([e.p for e in ex], dtype=bool)
        return cls(dim=dim, X=X, y=y, p=p)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def n_priv(self) -> int:
        return int(self.p.sum())

    @property
    def n_pub(self) -> int:
        return self.n - self.n_priv

    @property
    def examples(self):
        return [Example(self.X[i], int(self.y[i]), bool(self.p[i])) for i in range(self.n)]

    def example(self, i: int) -> Example:
        return Example(self.X[i], int(self.y[i]), bool(self.p[i]))


def partition(dataset: PPMDataset):
    """Split into (S_pub, S_priv, S_prime), all in original order.

    S_prime is the label-only view of the whole dataset (privacy bits
    dropped). Empty partitions are legal.
    """
    idx = np.arange(dataset.n)
    pub = ~dataset.p
    s_pub = LabeledSample(dataset.X[pub], dataset.y[pub], idx[pub])
    s_priv = LabeledSample(dataset.X[dataset.p], dataset.y[dataset.p], idx[dataset.p])
    s_prime = LabeledSample(dataset.X, dataset.y, idx)
    return s_pub, s_priv, s_prime


@dataclass(frozen=True)
class ErrorCount:
    """Exact empirical error: integer mistakes out of an integer total.

    Comparisons require a common total and compare mistake counts, so no
    floating-point ordering can creep into argmin logic.
    """

    mistakes: int
    total: int

    def __post_init__(self):
        if self.total < 1:
            raise EmptySampleError("empty sample")
        if not 0 <= self.mistakes <= self.total:
            raise ValueError(f"mistakes {self.mistakes} outside [0, {self.total}]")

    @property
    def value(self) -> Fraction:
        return Fraction(self.mistakes, self.total)

    def as_float(self) -> float:
        return self.mistakes / self.total

    def _check(self, other: "ErrorCount"):
        if self.total != other.total:
            raise ValueError("cannot compare errors over different totals")

    def __lt__(self, other):
        self._check(other)
        return self.mistakes < other.mistakes

    def __le__(self, other):
        self._check(other)
        return self.mistakes <= other.mistakes

    def __gt__(self, other):
        self._check(other)
        return self.mistakes > other.mistakes

    def __ge__(self, other):
        self._check(other)
        return self.mistakes >= other.mistakes


def empirical_error(predict, sample: LabeledSample) -> ErrorCount:
    """Exact mistake count of a point classifier over a labeled sample.

    ``predict`` maps a point of R^d to a 0/1 label. This is the plain
    per-point reference implementation; hot paths use vectorized scoring
    and are tested against this one.
    """
    if sample.n == 0:
        raise EmptySampleError("empty sample")
    mistakes = 0
    for x, y in sample:
        if int(predict(x)) != y:
            mistakes += 1
    return ErrorCount(mistakes, sample.n)
