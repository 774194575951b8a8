"""Halfspace-family construction and private hypothesis selection.

Two stages: build a finite halfspace family from the public points (one
supported pair per point subset of size <= d, plus the public affine
span), then select among all intersections of <= d family members (and
the distinguished empty-region hypothesis) with an exponential mechanism
scored by exact mistake counts on the full labeled sample.

Scoring never leaves integer arithmetic: mistake counts are computed with
0/1 matrix products (exact in float32 up to 2^24) and compared as ints.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import (
    AffineSubspace,
    Halfspace,
    MEM_TOL,
    RANK_TOL,
    affine_span,
    dedup_halfspaces,
    supporting_halfspace_pair,
)
from .model import EmptySampleError, ErrorCount, LabeledSample, PPMDataset, partition

DEFAULT_HYPOTHESIS_BUDGET = 50_000_000
_CHUNK_ENTRIES = 1 << 22       # per-block count-array size target
_CACHE_LIMIT = 1 << 24         # materialize count blocks below this class size


class BudgetExceededError(RuntimeError):
    pass


def default_pool_cap(dim: int):
    """Construction pool caps used by the sweep harness and CLI.

    The class size grows like n_pub^(d^2), so d >= 2 sweeps cap the pool;
    d = 1 stays uncapped. Library calls default to uncapped.
    """
    return {1: None, 2: 40, 3: 16}.get(dim, 12)


@dataclass(frozen=True, eq=False)
class HalfspaceFamily:
    """Deduplicated halfspaces built from public points, plus their span.

    Construction reads only public examples: two datasets with identical
    public parts produce bit-identical families.
    """

    halfspaces: tuple[Halfspace, ...]
    aff: AffineSubspace
    pool_indices: tuple[int, ...]
    dim: int

    @property
    def size(self) -> int:
        return len(self.halfspaces)

    def stacked(self):
        """(W, w0) arrays for vectorized membership."""
        if not self.halfspaces:
            return np.zeros((0, self.dim)), np.zeros(0)
        W = np.vstack([h.normal for h in self.halfspaces])
        w0 = np.array([h.offset for h in self.halfspaces])
        return W, w0


@dataclass(frozen=True)
class IntersectionHypothesis:
    """Hypothesis g(x) = 1(x outside the intersection of member halfspaces
    and the public span); members=None is the empty-region hypothesis that
    labels every point 1."""

    members: tuple[int, ...] | None

    def __post_init__(self):
        if self.members is not None:
            m = tuple(int(i) for i in self.members)
            if not m:
                raise ValueError("region hypothesis needs at least one member")
            if any(b <= a for a, b in zip(m, m[1:])):
                raise ValueError("member indices must be strictly increasing")
            object.__setattr__(self, "members", m)

    @property
    def is_empty_region(self) -> bool:
        return self.members is None


EMPTY_REGION = IntersectionHypothesis(None)


def class_cardinality(family_size: int, dim: int) -> int:
    return 1 + sum(math.comb(family_size, j) for j in range(1, dim + 1))


@dataclass(frozen=True, eq=False)
class ClassG:
    """The finite hypothesis class: empty-region first, then every strictly
    increasing member tuple of size 1..d, smaller sizes first and
    lexicographic within a size. Iteration is restartable."""

    family: HalfspaceFamily
    dim: int

    @property
    def cardinality(self) -> int:
        return class_cardinality(self.family.size, self.dim)

    def __iter__(self):
        yield EMPTY_REGION
        for size in range(1, self.dim + 1):
            for combo in itertools.combinations(range(self.family.size), size):
                yield IntersectionHypothesis(combo)


def construct_halfspace_family(S_pub: LabeledSample, dim: int,
                               pool_cap: int | None = None) -> HalfspaceFamily:
    """Supported halfspace pairs for every public-point subset of size <= d.

    Only the first ``pool_cap`` public points (dataset order) feed the
    construction when a cap is given. An empty public sample yields an
    empty family with a sentinel full-space span.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    X = S_pub.X
    idx = S_pub.indices
    if pool_cap is not None and X.shape[0] > pool_cap:
        X = X[:pool_cap]
        idx = idx[:pool_cap]
    m = X.shape[0]
    if m == 0:
        return HalfspaceFamily((), AffineSubspace.full_space(dim), (), dim)
    halfspaces: list[Halfspace] = []
    for size in range(1, dim + 1):
        for combo in itertools.combinations(range(m), size):
            src = tuple(int(idx[i]) for i in combo)
            h, h_op = supporting_halfspace_pair(X[list(combo)], dim, source=src)
            halfspaces.append(h)
            halfspaces.append(h_op)
    deduped = tuple(dedup_halfspaces(halfspaces))
    return HalfspaceFamily(deduped, affine_span(X, dim), tuple(int(i) for i in idx), dim)


def enumerate_class(family: HalfspaceFamily, dim: int) -> ClassG:
    return ClassG(family=family, dim=dim)


def predict(g: IntersectionHypothesis, family: HalfspaceFamily, x) -> int:
    """0 iff x lies in every member halfspace AND the public span."""
    if g.is_empty_region:
        return 1
    x = np.asarray(x, dtype=float)
    if not family.aff.contains(x):
        return 1
    for i in g.members:
        if not family.halfspaces[i].contains(x):
            return 1
    return 0


def predict_many(g: IntersectionHypothesis, family: HalfspaceFamily, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if g.is_empty_region:
        return np.ones(X.shape[0], dtype=np.uint8)
    inside = family.aff.contains_many(X)
    for i in g.members:
        inside &= family.halfspaces[i].contains_many(X)
    return (~inside).astype(np.uint8)


def hypothesis_error(g: IntersectionHypothesis, family: HalfspaceFamily,
                     sample: LabeledSample) -> ErrorCount:
    """Vectorized exact mistake count of one hypothesis."""
    if sample.n == 0:
        raise EmptySampleError("empty sample")
    pred = predict_many(g, family, sample.X)
    return ErrorCount(int(np.sum(pred != sample.y)), sample.n)


# ---------------------------------------------------------------------------
# Vectorized mistake counts over the whole class, in enumeration order
# ---------------------------------------------------------------------------


def _membership_matrix(family: HalfspaceFamily, X) -> np.ndarray:
    """(F, n) booleans: point in halfspace AND in the public span."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    F = family.size
    if F == 0:
        return np.zeros((0, n), dtype=bool)
    W, w0 = family.stacked()
    tol = MEM_TOL * (1.0 + np.linalg.norm(X, axis=1))
    M = np.empty((F, n), dtype=bool)
    chunk = max(1, _CHUNK_ENTRIES // max(n, 1))
    for lo in range(0, F, chunk):
        hi = min(F, lo + chunk)
        M[lo:hi] = (X @ W[lo:hi].T - w0[lo:hi] >= -tol[:, None]).T
    M &= family.aff.contains_many(X)[None, :]
    return M


def _block_descriptors(F: int, dim: int, chunk: int = _CHUNK_ENTRIES):
    """Blocks covering member tuples of sizes 1..dim in enumeration order."""
    descs = []
    if F == 0:
        return descs
    descs.append(("single", 0, F))
    if dim >= 2 and F >= 2:
        rows = max(1, chunk // F)
        lo = 0
        while lo < F - 1:
            hi = min(F - 1, lo + rows)
            descs.append(("pair", lo, hi))
            lo = hi
    if dim >= 3 and F >= 3:
        for i in range(F - 2):
            descs.append(("triple", i))
    if dim >= 4:
        for size in range(4, dim + 1):
            if F < size:
                break
            combos = itertools.combinations(range(F), size)
            while True:
                block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
                if block.size == 0:
                    break
                descs.append(("tuple", size, block))
    return descs


def _block_length(desc, F: int) -> int:
    kind = desc[0]
    if kind == "single":
        return desc[2] - desc[1]
    if kind == "pair":
        lo, hi = desc[1], desc[2]
        return sum(F - 1 - i for i in range(lo, hi))
    if kind == "triple":
        return math.comb(F - 1 - desc[1], 2)
    return desc[2].shape[0]


def _block_counts(desc, M0, M1, n0: int) -> np.ndarray:
    """int64 mistake counts for one block.

    mistakes(T) = #(y=0 outside region) + #(y=1 inside region)
                = n0 - |intersection on y=0| + |intersection on y=1|.
    """
    kind = desc[0]
    F = M0.shape[0]
    if kind == "single":
        lo, hi = desc[1], desc[2]
        in0 = M0[lo:hi].sum(axis=1)
        in1 = M1[lo:hi].sum(axis=1)
        return np.rint(n0 - in0 + in1).astype(np.int64)
    if kind == "pair":
        lo, hi = desc[1], desc[2]
        C = (n0 - M0[lo:hi] @ M0.T) + M1[lo:hi] @ M1.T
        parts = [C[r, lo + r + 1:] for r in range(hi - lo)]
        return np.rint(np.concatenate(parts)).astype(np.int64)
    if kind == "triple":
        i = desc[1]
        B0 = M0[i + 1: F - 1] * M0[i]
        B1 = M1[i + 1: F - 1] * M1[i]
        C = (n0 - B0 @ M0.T) + B1 @ M1.T
        parts = [C[r, i + 2 + r:] for r in range(F - 2 - i)]
        return np.rint(np.concatenate(parts)).astype(np.int64)
    combos = desc[2]
    in0 = M0[combos[:, 0]].copy()
    in1 = M1[combos[:, 0]].copy()
    for t in range(1, desc[1]):
        in0 *= M0[combos[:, t]]
        in1 *= M1[combos[:, t]]
    return np.rint(n0 - in0.sum(axis=1) + in1.sum(axis=1)).astype(np.int64)


def _unrank_in_block(desc, offset: int, F: int) -> tuple[int, ...]:
    kind = desc[0]
    if kind == "single":
        return (desc[1] + offset,)
    if kind == "pair":
        i = desc[1]
        while offset >= F - 1 - i:
            offset -= F - 1 - i
            i += 1
        return (i, i + 1 + offset)
    if kind == "triple":
        i = desc[1]
        j = i + 1
        while offset >= F - 1 - j:
            offset -= F - 1 - j
            j += 1
        return (i, j, j + 1 + offset)
    return tuple(int(v) for v in desc[2][offset])


def _split_by_label(M: np.ndarray, y: np.ndarray, dim: int):
    # matrix products only happen for member tuples of size >= 2; with a
    # single-member class boolean row sums suffice and save the float copy
    dtype = np.float32 if dim >= 2 else bool
    M0 = np.ascontiguousarray(M[:, y == 0], dtype=dtype)
    M1 = np.ascontiguousarray(M[:, y == 1], dtype=dtype)
    return M0, M1


def all_mistake_counts(family: HalfspaceFamily, sample: LabeledSample, dim: int,
                       limit: int | None = None) -> np.ndarray:
    """Mistake counts of every hypothesis in enumeration order (rank 0 is
    the empty-region hypothesis). Materializes the whole vector; guard with
    ``limit``."""
    card = class_cardinality(family.size, dim)
    if limit is not None and card > limit:
        raise BudgetExceededError(
            f"class too large; reduce pool_cap (|G| = {card} > {limit})")
    M = _membership_matrix(family, sample.X)
    M0, M1 = _split_by_label(M, sample.y, dim)
    n0 = int(np.sum(sample.y == 0))
    out = [np.array([n0], dtype=np.int64)]
    for desc in _block_descriptors(family.size, dim):
        out.append(_block_counts(desc, M0, M1, n0))
    return np.concatenate(out)


def unrank_hypothesis(rank: int, family_size: int, dim: int) -> IntersectionHypothesis:
    """Hypothesis at a given enumeration rank."""
    if rank == 0:
        return EMPTY_REGION
    rank -= 1
    for size in range(1, dim + 1):
        block = math.comb(family_size, size)
        if rank < block:
            combo = []
            prev = -1
            for slot in range(size):
                i = prev + 1
                while True:
                    rest = math.comb(family_size - i - 1, size - slot - 1)
                    if rank < rest:
                        break
                    rank -= rest
                    i += 1
                combo.append(i)
                prev = i
            return IntersectionHypothesis(tuple(combo))
        rank -= block
    raise IndexError("rank outside the class")


# ---------------------------------------------------------------------------
# ERM halfspace
# ---------------------------------------------------------------------------


def _candidate_halfspaces(X: np.ndarray, dim: int):
    """ERM candidate rows (W, w0): supported hyperplanes of every point
    subset of size <= d in four variants (both orientations, boundary
    nudged in/out), plus the two constant classifiers."""
    n = X.shape[0]
    scale = 1.0 + float(np.max(np.linalg.norm(X, axis=1), initial=0.0))
    delta = 4.0 * MEM_TOL * scale
    rows_w: list[np.ndarray] = []
    rows_b: list[np.ndarray] = []

    def add_variants(W, w0):
        rows_w.extend([W, W, -W, -W])
        rows_b.extend([w0 - delta, w0 + delta, -w0 - delta, -w0 + delta])

    e1 = np.zeros(dim)
    e1[0] = 1.0
    proj = X @ e1
    # constant classifiers: everything inside (all label 1) / nothing inside
    rows_w.extend([e1[None, :], e1[None, :]])
    rows_b.extend([np.array([float(proj.min()) - scale]),
                   np.array([float(proj.max()) + scale])])

    if dim == 1:
        t = X[:, 0]
        add_variants(np.ones((n, 1)), t)
        return np.vstack(rows_w), np.concatenate(rows_b)

    if dim == 2:
        # singletons: deterministic rule gives normal e1 through the point
        add_variants(np.tile(e1, (n, 1)), X[:, 0].copy())
        ii, jj = np.triu_indices(n, k=1)
        diff = X[jj] - X[ii]
        nrm = np.linalg.norm(diff, axis=1)
        ok = nrm > RANK_TOL * scale
        if np.any(ok):
            d_ok = diff[ok] / nrm[ok, None]
            W = np.stack([-d_ok[:, 1], d_ok[:, 0]], axis=1)
            lead = np.where(np.abs(W[:, 0]) > 1e-12, W[:, 0], W[:, 1])
            W *= np.sign(lead)[:, None]
            w0 = np.einsum("ij,ij->i", W, X[ii[ok]])
            add_variants(W, w0)
        if np.any(~ok):
            # coincident pairs degrade to the single-point rule
            add_variants(np.tile(e1, (int(np.sum(~ok)), 1)), X[ii[~ok], 0])
        return np.vstack(rows_w), np.concatenate(rows_b)

    for size in range(1, dim + 1):
        for combo in itertools.combinations(range(n), size):
            h, _ = supporting_halfspace_pair(X[list(combo)], dim)
            add_variants(h.normal[None, :], np.array([h.offset]))
    return np.vstack(rows_w), np.concatenate(rows_b)


def _halfspace_mistakes(W, w0, X, y, chunk_rows: int = 8192) -> np.ndarray:
    """Mistake counts of halfspace classifiers (rows of W, w0) on (X, y).

    A candidate errs on a 0-label inside it and a 1-label outside it. The
    per-point tolerance rides along as an extra GEMM column, and chunk
    buffers are reused to keep the scan memory-bandwidth bound.
    """
    tol = MEM_TOL * (1.0 + np.linalg.norm(X, axis=1))
    mask1 = y.astype(bool)
    # membership test: w.x + tol_x >= w0, via augmented inner product
    Q0 = np.column_stack([X[~mask1], tol[~mask1]]).T.copy()
    Q1 = np.column_stack([X[mask1], tol[mask1]]).T.copy()
    n1 = Q1.shape[1]
    C = W.shape[0]
    chunk = min(chunk_rows, C)
    Waug = np.column_stack([W, np.ones(C)])
    out = np.empty(C, dtype=np.int64)
    buf0 = np.empty((chunk, Q0.shape[1]))
    buf1 = np.empty((chunk, n1))
    bits0 = np.empty(buf0.shape, dtype=bool)
    bits1 = np.empty(buf1.shape, dtype=bool)
    for lo in range(0, C, chunk):
        hi = min(C, lo + chunk)
        k = hi - lo
        off = w0[lo:hi, None]
        in0 = 0
        if Q0.size:
            np.matmul(Waug[lo:hi], Q0, out=buf0[:k])
            np.greater_equal(buf0[:k], off, out=bits0[:k])
            in0 = np.count_nonzero(bits0[:k], axis=1)
        in1 = 0
        if Q1.size:
            np.matmul(Waug[lo:hi], Q1, out=buf1[:k])
            np.greater_equal(buf1[:k], off, out=bits1[:k])
            in1 = np.count_nonzero(bits1[:k], axis=1)
        out[lo:hi] = in0 + (n1 - in1)
    return out


def erm_halfspace(S_prime: LabeledSample, dim: int):
    """Exact empirical-risk-minimizing halfspace over the support-realized
    candidate set; ties broken by lexicographic (w, w0)."""
    if S_prime.n == 0:
        raise EmptySampleError("empty sample")
    W, w0 = _candidate_halfspaces(S_prime.X, dim)
    mistakes = _halfspace_mistakes(W, w0, S_prime.X, S_prime.y)
    best = int(mistakes.min())
    ties = np.flatnonzero(mistakes == best)
    R = np.column_stack([W[ties], w0[ties]])
    keys = tuple(R[:, c] for c in reversed(range(R.shape[1])))
    pick = ties[np.lexsort(keys)[0]]
    h = Halfspace(W[pick], float(w0[pick]))
    return h, ErrorCount(best, S_prime.n)


# ---------------------------------------------------------------------------
# Exhaustive best-in-class
# ---------------------------------------------------------------------------


def best_in_class(classG: ClassG, S_prime: LabeledSample):
    """Exact minimum mistake count over the class; first minimizer in
    enumeration order.

    Halfspaces with identical membership patterns on the sample collapse to
    their first-index representative before subsets are scanned; any member
    tuple realizes the same region pattern as a representative tuple that
    enumerates no later, so both the minimum and the identity of the first
    minimizer are preserved.
    """
    if S_prime.n == 0:
        raise EmptySampleError("empty sample")
    family = classG.family
    n = S_prime.n
    n0 = int(np.sum(S_prime.y == 0))
    best_count = n0  # empty-region hypothesis, rank 0
    best_members: tuple[int, ...] | None = None
    if family.size == 0:
        return EMPTY_REGION, ErrorCount(best_count, n)

    M = _membership_matrix(family, S_prime.X)
    packed = np.packbits(M, axis=1)
    _, first = np.unique(packed, axis=0, return_index=True)
    reps = np.sort(first)
    M0, M1 = _split_by_label(M[reps], S_prime.y, classG.dim)
    R = reps.size
    for desc in _block_descriptors(R, classG.dim):
        counts = _block_counts(desc, M0, M1, n0)
        if counts.size == 0:
            continue
        local_best = int(counts.min())
        if local_best < best_count:
            offset = int(np.argmin(counts))
            best_count = local_best
            local = _unrank_in_block(desc, offset, R)
            best_members = tuple(int(reps[i]) for i in local)
    if best_members is None:
        return EMPTY_REGION, ErrorCount(best_count, n)
    return IntersectionHypothesis(best_members), ErrorCount(best_count, n)


# ---------------------------------------------------------------------------
# The learning algorithm
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LearnDiagnostics:
    """Selection bookkeeping for reports and the DP auditor."""

    n: int
    n_pub: int
    n_priv: int
    dim: int
    epsilon: float
    pool_cap: int | None
    pool_size: int
    family_size: int
    class_size: int
    aff_dim: int
    method: str
    selected_rank: int
    selected_mistakes: int
    min_mistakes: int
    error: ErrorCount
    mistake_histogram: np.ndarray  # index = mistake count, value = multiplicity
    log_normalizer: float          # log sum of exp(-eps*(c - min)/2)
    uniform_draw: float | None
    notes: tuple[str, ...] = ()


class LearnResult(NamedTuple):
    hypothesis: IntersectionHypothesis
    family: HalfspaceFamily
    diagnostics: LearnDiagnostics


def _exact_select(descs, counts_of, lengths, n0, eps, rng):
    """Three-pass exact exponential-mechanism draw over the streamed class.

    Pass 1 finds the best (minimum) mistake count and the count histogram;
    pass 2 accumulates the max-shifted normalizer; pass 3 re-streams to
    invert the CDF at a uniform draw.
    """
    c_min = n0
    hist: dict[int, int] = {n0: 1}
    for desc in descs:
        c = counts_of(desc)
        c_min = min(c_min, int(c.min())) if c.size else c_min
        vals, cnts = np.unique(c, return_counts=True)
        for v, k in zip(vals, cnts):
            hist[int(v)] = hist.get(int(v), 0) + int(k)

    w_empty = math.exp(-eps * (n0 - c_min) / 2.0)
    block_sums = []
    for desc in descs:
        w = np.exp(-(eps / 2.0) * (counts_of(desc) - c_min))
        block_sums.append(float(w.sum()))
    Z = w_empty + math.fsum(block_sums)

    u = float(rng.random())
    t = u * Z
    rank, offset_desc = 0, None
    if t > w_empty:
        cum = w_empty
        rank_base = 1
        for desc, s, length in zip(descs, block_sums, lengths):
            if cum + s < t and desc is not descs[-1]:
                cum += s
                rank_base += length
                continue
            w = np.exp(-(eps / 2.0) * (counts_of(desc) - c_min))
            cw = cum + np.cumsum(w)
            local = int(np.searchsorted(cw, t, side="left"))
            local = min(local, length - 1)
            rank = rank_base + local
            offset_desc = (desc, local)
            break
    return rank, offset_desc, hist, c_min, Z, u


def learn_half(dataset: PPMDataset, epsilon: float, pool_cap: int | None = None,
               seed=0, budget: int = DEFAULT_HYPOTHESIS_BUDGET,
               method: str = "exact") -> LearnResult:
    """Private halfspace-mixture learning.

    Builds the public family, scores every hypothesis in the intersection
    class by exact mistake count on the full labeled sample, and samples
    one via the exponential mechanism with score -err and sensitivity 1/n,
    i.e. selection probability proportional to exp(-eps * mistakes / 2).

    ``method="gumbel"`` switches to a single-pass Gumbel-max draw (same
    distribution, different stream of randomness); privacy-audited runs use
    the exact path only.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    notes = []
    if epsilon > 1:
        msg = f"epsilon {epsilon} outside (0, 1]; guarantees degrade"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    if method not in ("exact", "gumbel"):
        raise ValueError(f"unknown selection method {method!r}")

    s_pub, s_priv, s_prime = partition(dataset)
    family = construct_halfspace_family(s_pub, dataset.dim, pool_cap)
    card = class_cardinality(family.size, dataset.dim)
    if card > budget:
        raise BudgetExceededError(
            f"class too large; reduce pool_cap (|G| = {card} > budget {budget})")

    n = dataset.n
    n0 = int(np.sum(dataset.y == 0))
    rng = np.random.default_rng(seed)

    M = _membership_matrix(family, s_prime.X)
    M0, M1 = _split_by_label(M, s_prime.y, dataset.dim)
    descs = _block_descriptors(family.size, dataset.dim)
    lengths = [_block_length(d, family.size) for d in descs]

    if card <= _CACHE_LIMIT:
        cache = {id(d): _block_counts(d, M0, M1, n0) for d in descs}
        counts_of = lambda d: cache[id(d)]
    else:
        counts_of = lambda d: _block_counts(d, M0, M1, n0)

    u = None
    if method == "exact":
        rank, offset_desc, hist, c_min, Z, u = _exact_select(
            descs, counts_of, lengths, n0, epsilon, rng)
    else:
        best_key = -epsilon * n0 / 2.0 + float(rng.gumbel())
        rank = 0
        offset_desc = None
        hist = {n0: 1}
        c_min = n0
        rank_base = 1
        for desc, length in zip(descs, lengths):
            c = counts_of(desc)
            c_min = min(c_min, int(c.min())) if c.size else c_min
            vals, cnts = np.unique(c, return_counts=True)
            for v, k in zip(vals, cnts):
                hist[int(v)] = hist.get(int(v), 0) + int(k)
            keys = -epsilon * c / 2.0 + rng.gumbel(size=length)
            local = int(np.argmax(keys))
            if float(keys[local]) > best_key:
                best_key = float(keys[local])
                rank = rank_base + local
                offset_desc = (desc, local)
            rank_base += length
        Z = math.fsum(v * math.exp(-epsilon * (k - c_min) / 2.0)
                      for k, v in hist.items())

    if offset_desc is None:
        g_hat = EMPTY_REGION
        selected = n0
    else:
        desc, local = offset_desc
        members = _unrank_in_block(desc, local, family.size)
        g_hat = IntersectionHypothesis(members)
        selected = int(counts_of(desc)[local])

    hist_arr = np.zeros(n + 1, dtype=np.int64)
    for v, k in hist.items():
        hist_arr[v] = k
    hist_arr.flags.writeable = False

    diag = LearnDiagnostics(
        n=n, n_pub=dataset.n_pub, n_priv=dataset.n_priv, dim=dataset.dim,
        epsilon=float(epsilon), pool_cap=pool_cap,
        pool_size=len(family.pool_indices), family_size=family.size,
        class_size=card, aff_dim=family.aff.k, method=method,
        selected_rank=rank, selected_mistakes=selected,
        min_mistakes=c_min, error=ErrorCount(selected, n),
        mistake_histogram=hist_arr, log_normalizer=float(np.log(Z)),
        uniform_draw=u, notes=tuple(notes),
    )
    return LearnResult(g_hat, family, diag)
