"""Convex-geometry kernel in low dimension.

Halfspaces and affine subspaces with tolerant membership, deterministic
supporting hyperplanes through small point sets, brute-force convex-hull
facet enumeration, LP feasibility of halfspace intersections inside an
affine chart, and search for small infeasibility witnesses.

All tolerances are relative to the data scale: a point x is "on" a unit
hyperplane when |w.x - w0| <= MEM_TOL * (1 + ||x||).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

MEM_TOL = 1e-9    # halfspace membership, relative
AFF_TOL = 1e-9    # affine-subspace distance, relative
LP_TOL = 1e-9     # LP feasibility slack
DEDUP_TOL = 1e-9  # canonical (w, w0) equality
RANK_TOL = 1e-10  # orthonormalization / numerical-rank threshold

_LP_SEED = 0x5E1DE1  # fixed seed: randomized LP insertion order is reproducible


class DimensionMismatch(ValueError):
    pass


def point_tolerance(x) -> float:
    """Membership tolerance for a point: MEM_TOL * (1 + ||x||)."""
    return MEM_TOL * (1.0 + float(np.linalg.norm(x)))


def canonicalize(normal, offset):
    """Return (w, w0) with ||w|| = 1, rescaling offset to match.

    Bit-idempotent: if ||w|| is already within 1e-12 of 1 the input is
    returned unchanged, so canonicalize(canonicalize(...)) is exact.
    """
    w = np.asarray(normal, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("normal must be a nonempty vector")
    if not np.all(np.isfinite(w)) or not np.isfinite(offset):
        raise ValueError("halfspace coefficients must be finite")
    norm = float(np.linalg.norm(w))
    if norm == 0.0:
        raise ValueError("normal must be nonzero")
    if abs(norm - 1.0) <= 1e-12:
        return w, float(offset)
    return w / norm, float(offset) / norm


def _sign_canonical(w):
    """Flip sign so the first coordinate with |w_i| > 1e-12 is positive."""
    for v in w:
        if abs(v) > 1e-12:
            return w if v > 0 else -w
    return w


@dataclass(frozen=True, eq=False)
class Halfspace:
    """Closed halfspace {x : w.x >= w0} with unit normal w.

    Doubles as a binary classifier: label(x) = 1 iff x is in the halfspace.
    ``source`` optionally records the dataset indices of the point subset
    supporting the bounding hyperplane.
    """

    normal: np.ndarray
    offset: float
    source: tuple[int, ...] | None = None

    def __post_init__(self):
        w, w0 = canonicalize(self.normal, self.offset)
        w = np.array(w, dtype=float)
        w.flags.writeable = False
        object.__setattr__(self, "normal", w)
        object.__setattr__(self, "offset", float(w0))
        if self.source is not None:
            object.__setattr__(self, "source", tuple(int(i) for i in self.source))

    @property
    def dim(self) -> int:
        return self.normal.size

    def signed_value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"point has shape {x.shape}, expected ({self.dim},)")
        return float(self.normal @ x - self.offset)

    def contains(self, x) -> bool:
        return self.signed_value(x) >= -point_tolerance(x)

    def on_boundary(self, x) -> bool:
        return abs(self.signed_value(x)) <= point_tolerance(x)

    def label(self, x) -> int:
        """Classifier value 1(x in halfspace)."""
        return int(self.contains(x))

    def contains_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise DimensionMismatch(f"points have shape {X.shape}, expected (n, {self.dim})")
        tol = MEM_TOL * (1.0 + np.linalg.norm(X, axis=1))
        return X @ self.normal - self.offset >= -tol

    def opposite(self) -> "Halfspace":
        """The halfspace {x : w.x <= w0}; shares the bounding hyperplane."""
        return Halfspace(-self.normal, -self.offset, source=self.source)

    def canonical_row(self) -> np.ndarray:
        return np.concatenate([self.normal, [self.offset]])

    def __repr__(self):
        w = ", ".join(f"{v:.6g}" for v in self.normal)
        return f"Halfspace([{w}] . x >= {self.offset:.6g})"


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """Affine subspace base + span(rows of basis), with orthonormal rows.

    k = 0 is a single point, k = d is all of R^d.
    """

    base: np.ndarray
    basis: np.ndarray  # shape (k, d), orthonormal rows

    def __post_init__(self):
        base = np.array(np.asarray(self.base, dtype=float), dtype=float)
        basis = np.array(np.asarray(self.basis, dtype=float), dtype=float)
        if base.ndim != 1:
            raise ValueError("base must be a vector")
        if basis.ndim != 2 or basis.shape[1] != base.size:
            basis = basis.reshape(-1, base.size)
        if not np.all(np.isfinite(base)) or not np.all(np.isfinite(basis)):
            raise ValueError("affine subspace data must be finite")
        if basis.shape[0] > 0:
            gram = basis @ basis.T
            if np.max(np.abs(gram - np.eye(basis.shape[0]))) > 1e-10:
                raise ValueError("basis rows must be orthonormal within 1e-10")
        base.flags.writeable = False
        basis.flags.writeable = False
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def full_space(cls, dim: int) -> "AffineSubspace":
        return cls(np.zeros(dim), np.eye(dim))

    @classmethod
    def single_point(cls, p) -> "AffineSubspace":
        p = np.asarray(p, dtype=float)
        return cls(p, np.zeros((0, p.size)))

    @property
    def dim(self) -> int:
        return self.base.size

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @property
    def is_full(self) -> bool:
        return self.k == self.dim

    def to_chart(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return (X - self.base) @ self.basis.T

    def from_chart(self, Z) -> np.ndarray:
        Z = np.asarray(Z, dtype=float)
        return self.base + Z @ self.basis

    def distance(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"point has shape {x.shape}, expected ({self.dim},)")
        v = x - self.base
        residual = v - self.basis.T @ (self.basis @ v)
        return float(np.linalg.norm(residual))

    def contains(self, x) -> bool:
        return self.distance(x) <= AFF_TOL * (1.0 + float(np.linalg.norm(x)))

    def contains_many(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        V = X - self.base
        residual = V - (V @ self.basis.T) @ self.basis
        dist = np.linalg.norm(residual, axis=1)
        return dist <= AFF_TOL * (1.0 + np.linalg.norm(X, axis=1))

    def __repr__(self):
        return f"AffineSubspace(dim={self.dim}, k={self.k})"


def _orthonormalize(vectors, dim: int) -> np.ndarray:
    """Orthonormal basis of span(vectors) by modified Gram-Schmidt.

    Processes vectors in the given order (deterministic); directions with
    residual norm below RANK_TOL * scale are treated as dependent.
    """
    basis: list[np.ndarray] = []
    vecs = np.asarray(vectors, dtype=float).reshape(-1, dim)
    scale = 1.0 + (float(np.max(np.abs(vecs))) if vecs.size else 0.0)
    for v in vecs:
        u = v.astype(float)
        for b in basis:
            u = u - (b @ u) * b
        # second MGS pass for numerical orthogonality
        for b in basis:
            u = u - (b @ u) * b
        norm = float(np.linalg.norm(u))
        if norm > RANK_TOL * scale:
            basis.append(u / norm)
        if len(basis) == dim:
            break
    if not basis:
        return np.zeros((0, dim))
    return np.vstack(basis)


def _complement_basis(span: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(rows).

    Extends with standard basis vectors e_1, e_2, ... in index order, so the
    result is deterministic for a fixed span.
    """
    comp: list[np.ndarray] = []
    k = span.shape[0]
    for i in range(dim):
        u = np.zeros(dim)
        u[i] = 1.0
        for b in itertools.chain(span, comp):
            u = u - (b @ u) * b
        for b in itertools.chain(span, comp):
            u = u - (b @ u) * b
        norm = float(np.linalg.norm(u))
        if norm > RANK_TOL:
            comp.append(u / norm)
        if len(comp) == dim - k:
            break
    return np.vstack(comp) if comp else np.zeros((0, dim))


def supporting_halfspace_pair(points, dim: int, source=None):
    """One halfspace supported by the given points, and its opposite.

    The points (1 <= count <= dim) all lie on the shared bounding
    hyperplane. For underdetermined sets the hyperplane is chosen
    deterministically: the normal is the first orthogonal-complement vector
    of the points' direction span, extended in standard-basis order, with
    its sign fixed so the first nonzero coordinate is positive.
    """
    P = np.asarray(points, dtype=float).reshape(-1, dim)
    if P.shape[0] == 0:
        raise ValueError("empty supporting set")
    if P.shape[0] > dim:
        raise ValueError(f"oversized supporting set: {P.shape[0]} points in dimension {dim}")
    if not np.all(np.isfinite(P)):
        raise ValueError("supporting points must be finite")
    center = P.mean(axis=0)
    span = _orthonormalize(P - center, dim)
    comp = _complement_basis(span, dim)
    if comp.shape[0] == 0:
        raise ValueError("supporting points already span the full space")
    w = _sign_canonical(comp[0])
    w0 = float(w @ P[0])
    h = Halfspace(w, w0, source=tuple(source) if source is not None else None)
    return h, h.opposite()


def affine_span(points, dim: int | None = None) -> AffineSubspace:
    """Minimal affine subspace containing the points.

    Base point is the first point; the basis comes from deterministic
    Gram-Schmidt over the differences in input order, so k equals the
    numerical rank of the centered point matrix.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim == 1:
        P = P.reshape(1, -1)
    if P.shape[0] == 0:
        raise ValueError("affine span of an empty point set is undefined")
    d = P.shape[1] if dim is None else dim
    basis = _orthonormalize(P[1:] - P[0], d)
    return AffineSubspace(P[0], basis)


def dedup_halfspaces(halfspaces, tol: float = DEDUP_TOL):
    """Drop halfspaces whose canonical (w, w0) row matches an earlier one.

    Near-equality within ``tol`` in the max norm; first occurrence wins.
    Grid-bucket probing keeps this O(n) with a 3^(d+1) neighborhood scan.
    """
    kept: list = []
    rows: list[np.ndarray] = []
    buckets: dict[tuple, list[int]] = {}
    offsets = None
    for h in halfspaces:
        row = h.canonical_row()
        if offsets is None:
            m = row.size
            offsets = list(itertools.product((-1, 0, 1), repeat=m))
        key = tuple(np.floor(row / tol).astype(np.int64))
        dup = False
        for off in offsets:
            probe = tuple(k + o for k, o in zip(key, off))
            for idx in buckets.get(probe, ()):
                if float(np.max(np.abs(rows[idx] - row))) <= tol:
                    dup = True
                    break
            if dup:
                break
        if not dup:
            buckets.setdefault(key, []).append(len(rows))
            rows.append(row)
            kept.append(h)
    return kept


def hull_facet_halfspaces(points, aff: AffineSubspace) -> list[Halfspace]:
    """Facet halfspaces of the convex hull of the points inside ``aff``.

    The points must span ``aff`` (k = rank of the centered point matrix).
    Brute force: every size-k subset spanning a hyperplane of the chart is
    tested; orientations placing all points on one closed side are kept.
    The intersection of the returned halfspaces with ``aff`` is the hull.
    Each facet records the spanning subset (positions into ``points``) as
    its source.
    """
    P = np.asarray(points, dtype=float).reshape(-1, aff.dim)
    if P.shape[0] == 0:
        raise ValueError("hull of an empty point set is undefined")
    in_aff = aff.contains_many(P)
    if not np.all(in_aff):
        raise ValueError("all points must lie inside the affine subspace")
    k = aff.k
    if k == 0:
        h, h_op = supporting_halfspace_pair(P[:1], aff.dim, source=(0,))
        return [h, h_op]
    Z = aff.to_chart(P)
    span = _orthonormalize(Z - Z[0], k)
    if span.shape[0] != k:
        raise ValueError("points do not span the affine subspace")
    tol = MEM_TOL * (1.0 + np.linalg.norm(Z, axis=1))
    facets: list[Halfspace] = []
    for combo in itertools.combinations(range(P.shape[0]), k):
        sub = Z[list(combo)]
        dirs = _orthonormalize(sub[1:] - sub[0], k)
        if dirs.shape[0] != k - 1:
            continue  # subset does not span a hyperplane of the chart
        comp = _complement_basis(dirs, k)
        if comp.shape[0] != 1:
            continue
        a = comp[0]
        b = float(a @ sub[0])
        vals = Z @ a - b
        w = aff.basis.T @ a
        w0 = b + float(w @ aff.base)
        if np.all(vals >= -tol):
            facets.append(Halfspace(w, w0, source=combo))
        if np.all(vals <= tol):
            facets.append(Halfspace(-w, -w0, source=combo))
    return dedup_halfspaces(facets)


# ---------------------------------------------------------------------------
# LP feasibility (incremental, randomized insertion order, fixed seed)
# ---------------------------------------------------------------------------


def _interval_feasible(A, b, tol):
    """1-d system a*z >= b. Returns witness z or None."""
    lo, hi = -np.inf, np.inf
    for a, rhs in zip(A[:, 0], b):
        if abs(a) <= RANK_TOL:
            if rhs > tol:
                return None
        elif a > 0:
            lo = max(lo, rhs / a)
        else:
            hi = min(hi, rhs / a)
    if lo > hi + tol:
        return None
    if np.isfinite(lo):
        return np.array([lo])
    if np.isfinite(hi):
        return np.array([hi])
    return np.array([0.0])


def _feasible_chart(A, b, tol, rng):
    """Find z with A z >= b - tol, or None if the system is infeasible.

    Incremental: maintains a feasible point of the constraints inserted so
    far; a violated constraint forces the point onto its hyperplane and the
    prefix system is re-solved in one fewer dimension. If the restricted
    system is infeasible, so is the prefix including the new constraint.
    """
    m, k = A.shape
    if k == 0:
        return np.zeros(0) if np.all(b <= tol) else None
    if m == 0:
        return np.zeros(k)
    if k == 1:
        return _interval_feasible(A, b, tol)
    order = rng.permutation(m)
    z = np.zeros(k)
    for pos, idx in enumerate(order):
        if A[idx] @ z >= b[idx] - tol:
            continue
        # restrict to the hyperplane A[idx] . z = b[idx]
        a = A[idx]
        nrm = float(np.linalg.norm(a))
        if nrm <= RANK_TOL:
            return None  # unsatisfiable degenerate constraint
        unit = a / nrm
        p = (b[idx] / nrm) * unit
        Q = _complement_basis(unit.reshape(1, -1), k)  # (k-1, k)
        prev = order[: pos + 1]
        A_sub = A[prev] @ Q.T
        b_sub = b[prev] - A[prev] @ p
        y = _feasible_chart(A_sub, b_sub, tol, rng)
        if y is None:
            return None
        z = p + Q.T @ y
    return z


def region_feasible(halfspaces, aff: AffineSubspace):
    """Whether the halfspace intersection meets ``aff``; witness if so.

    Returns (feasible, witness), witness a point of R^d or None. Halfspaces
    effectively parallel to ``aff`` reduce to constant constraints on the
    chart and are resolved directly.
    """
    hs = list(halfspaces)
    if not hs:
        return True, np.array(aff.base)
    dim = aff.dim
    rows = []
    rhs = []
    scale = 1.0
    for h in hs:
        if h.dim != dim:
            raise DimensionMismatch("halfspace dimension does not match the affine subspace")
        a = aff.basis @ h.normal  # chart-normal
        c = h.offset - float(h.normal @ aff.base)
        scale = max(scale, abs(c))
        nrm = float(np.linalg.norm(a))
        if nrm <= RANK_TOL:
            # halfspace parallel to aff: the whole chart is in or out
            if c > LP_TOL * scale:
                return False, None
            continue
        rows.append(a / nrm)
        rhs.append(c / nrm)
    if not rows:
        return True, np.array(aff.base)
    A = np.vstack(rows)
    b = np.asarray(rhs)
    tol = LP_TOL * scale
    rng = np.random.default_rng(_LP_SEED)
    z = _feasible_chart(A, b, tol, rng)
    if z is None:
        return False, None
    return True, aff.from_chart(z)


@dataclass(frozen=True)
class HellyWitness:
    """Sub-collection of family members (plus possibly the affine subspace)
    whose intersection misses the target halfspace."""

    indices: tuple[int, ...]  # positions into the family; len(family) denotes aff
    members: tuple
    includes_aff: bool


def helly_witness(family, aff: AffineSubspace, target: Halfspace, dim: int) -> HellyWitness:
    """Smallest-first search for <= dim members of family + {aff} whose
    intersection misses ``target``.

    Preconditions: the full family intersected with ``aff`` is nonempty but
    adding ``target`` empties it. Existence of a witness of size <= dim then
    follows from Helly's theorem in R^dim. Subsets are scanned in increasing
    size, lexicographically by member index (aff last).
    """
    members = list(family)
    F = len(members)
    feasible_all, _ = region_feasible(members, aff)
    if not feasible_all:
        raise ValueError("region already empty")
    with_target, _ = region_feasible(members + [target], aff)
    if with_target:
        raise ValueError("target intersects region")
    full = AffineSubspace.full_space(dim)
    for size in range(1, dim + 1):
        for combo in itertools.combinations(range(F + 1), size):
            hs = [members[i] for i in combo if i < F]
            sub_aff = aff if F in combo else full
            feas, _ = region_feasible(hs + [target], sub_aff)
            if not feas:
                chosen = tuple(members[i] if i < F else aff for i in combo)
                return HellyWitness(indices=tuple(combo), members=chosen,
                                    includes_aff=F in combo)
    raise RuntimeError("no witness of size <= dim found within tolerance")
