
import numpy as np
import pytest

from ppmlearn.geometry import (
    AffineSubspace,
    DimensionMismatch,
    Halfspace,
    affine_span,
    canonicalize,
    dedup_halfspaces,
    helly_witness,
    hull_facet_halfspaces,
    region_feasible,
    supporting_halfspace_pair,
)

from oracles import (
    convex_hull_2d,
    feasible_2d,
    matrix_rank_elimination,
    point_in_hull_2d,
)

RT2 = np.sqrt(2.0)


# --- canonical form -------------------------------------------------------


def test_canonicalize_idempotent_bit_exact():
    rng = np.random.default_rng(1)
    for _ in range(200):
        d = int(rng.integers(1, 5))
        w = rng.standard_normal(d) * 10.0 ** rng.integers(-3, 4)
        w0 = float(rng.standard_normal())
        w1, b1 = canonicalize(w, w0)
        w2, b2 = canonicalize(w1, b1)
        assert np.array_equal(w1, w2)
        assert b1 == b2


def test_halfspace_constructor_normalizes():
    h = Halfspace([3.0, 4.0], 10.0)
    assert np.allclose(h.normal, [0.6, 0.8], atol=1e-15)
    assert h.offset == pytest.approx(2.0, abs=1e-15)
    with pytest.raises(ValueError):
        Halfspace([0.0, 0.0], 1.0)
    with pytest.raises(ValueError):
        Halfspace([np.nan, 1.0], 0.0)


def test_opposite_involution_bit_exact():
    rng = np.random.default_rng(2)
    for _ in range(100):
        h = Halfspace(rng.standard_normal(3), float(rng.standard_normal()))
        back = h.opposite().opposite()
        assert np.array_equal(back.normal, h.normal)
        assert back.offset == h.offset


# --- supporting pairs ------------------------------------------------------


def test_supporting_pair_two_points_d2():
    h, hop = supporting_halfspace_pair([(1.0, 0.0), (0.0, 1.0)], 2)
    assert np.allclose(h.normal, [1 / RT2, 1 / RT2], atol=1e-12)
    assert h.offset == pytest.approx(1 / RT2, abs=1e-12)
    assert np.allclose(hop.normal, -h.normal, atol=0)
    assert hop.offset == pytest.approx(-h.offset, abs=0)


def test_supporting_pair_single_point():
    h, hop = supporting_halfspace_pair([(3.0, 0.0)], 2)
    assert h.on_boundary([3.0, 0.0])
    assert hop.on_boundary([3.0, 0.0])
    assert h.contains([3.0, 0.0]) and hop.contains([3.0, 0.0])


def test_supporting_pair_underdetermined_d3_residuals():
    pts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    h, hop = supporting_halfspace_pair(pts, 3)
    for p in pts:
        # independent residual check
        assert abs(float(h.normal @ p) - h.offset) <= 1e-9 * (1 + np.linalg.norm(p))
        assert abs(float(hop.normal @ p) - hop.offset) <= 1e-9 * (1 + np.linalg.norm(p))


def test_supporting_pair_errors():
    with pytest.raises(ValueError, match="oversized"):
        supporting_halfspace_pair([(0.0,), (1.0,)], 1)
    with pytest.raises(ValueError, match="empty"):
        supporting_halfspace_pair(np.zeros((0, 2)), 2)


def test_supporting_pair_boundary_property_random():
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = int(rng.integers(1, 5))
        m = int(rng.integers(1, d + 1))
        pts = rng.standard_normal((m, d)) * 3
        h, hop = supporting_halfspace_pair(pts, d)
        for p in pts:
            assert h.on_boundary(p)
            assert hop.on_boundary(p)


def test_supporting_pair_deterministic():
    pts = [(0.5, -1.0, 2.0), (1.0, 1.0, 1.0)]
    a1 = supporting_halfspace_pair(pts, 3)
    a2 = supporting_halfspace_pair(pts, 3)
    assert np.array_equal(a1[0].normal, a2[0].normal)
    assert a1[0].offset == a2[0].offset


# --- affine span -----------------------------------------------------------


def test_affine_span_examples():
    aff = affine_span([(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)], 3)
    assert np.array_equal(aff.base, [0, 0, 0])
    assert aff.k == 1
    assert np.allclose(aff.basis, [[1.0, 0.0, 0.0]], atol=1e-12)

    single = affine_span([(2.0, 5.0)], 2)
    assert single.k == 0
    assert np.array_equal(single.base, [2.0, 5.0])


def test_affine_span_rank_matches_elimination_oracle():
    rng = np.random.default_rng(4)
    for _ in range(50):
        d = int(rng.integers(2, 5))
        pts = rng.standard_normal((d, d))
        interior = pts.mean(axis=0)  # affine combination keeps the rank
        allpts = np.vstack([pts, interior])
        aff = affine_span(allpts, d)
        oracle = matrix_rank_elimination(allpts[1:] - allpts[0])
        assert aff.k == oracle
        for p in allpts:
            assert aff.contains(p)


# --- membership ------------------------------------------------------------


def test_contains_examples():
    h = Halfspace([1.0, 1.0], 1.0)
    assert h.contains([1.0, 1.0])
    hop = h.opposite()
    boundary = [0.5, 0.5]
    assert h.contains(boundary) and hop.contains(boundary)
    assert h.on_boundary(boundary) and hop.on_boundary(boundary)

    aff = AffineSubspace(np.zeros(3), np.array([[1.0, 0.0, 0.0]]))
    assert aff.contains([5.0, 0.0, 1e-12])
    assert not aff.contains([5.0, 0.1, 0.0])


def test_dimension_mismatch():
    h = Halfspace([1.0, 0.0], 0.0)
    with pytest.raises(DimensionMismatch):
        h.contains([1.0, 2.0, 3.0])
    aff = AffineSubspace.full_space(2)
    with pytest.raises(DimensionMismatch):
        aff.distance([1.0])


# --- hull facets ------------------------------------------------------------


def test_hull_facets_triangle():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    facets = hull_facet_halfspaces(pts, affine_span(pts, 2))
    assert len(facets) == 3
    for h in facets:
        assert all(h.contains(p) for p in pts)
        assert any(h.on_boundary(p) for p in pts)


def test_hull_facets_collinear_segment():
    pts = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [0.5, 0.5]])
    aff = affine_span(pts, 2)
    assert aff.k == 1
    facets = hull_facet_halfspaces(pts, aff)
    assert len(facets) == 2
    for h in facets:
        assert all(h.contains(p) for p in pts)
    # the two cuts pin exactly the extreme points
    boundary_pts = {tuple(p) for p in pts for h in facets if h.on_boundary(p)}
    assert boundary_pts == {(0.0, 0.0), (2.0, 2.0)}


def test_hull_facets_single_point():
    pts = np.array([[2.0, -1.0]])
    facets = hull_facet_halfspaces(pts, affine_span(pts, 2))
    assert len(facets) == 2
    for h in facets:
        assert h.on_boundary(pts[0])


def test_hull_facets_random_vs_orientation_oracle():
    rng = np.random.default_rng(5)
    for trial in range(25):
        pts = rng.standard_normal((8, 2)) * 2
        aff = affine_span(pts, 2)
        facets = hull_facet_halfspaces(pts, aff)
        hull_idx = convex_hull_2d(pts)
        assert len(facets) == len(hull_idx)
        for h in facets:
            assert np.all(h.contains_many(pts))
            assert any(h.on_boundary(p) for p in pts)
        # membership through the facets agrees with the oracle polygon
        hull_pts = [pts[i] for i in hull_idx]
        probes = rng.uniform(-3, 3, size=(40, 2))
        for q in probes:
            in_facets = all(h.signed_value(q) >= -1e-7 for h in facets)
            assert in_facets == point_in_hull_2d(q, hull_pts, tol=1e-7)


def test_hull_facets_requires_spanning_points():
    pts = np.array([[0.0, 0.0], [1.0, 1.0]])
    with pytest.raises(ValueError, match="span"):
        hull_facet_halfspaces(pts, AffineSubspace.full_space(2))


# --- dedup -------------------------------------------------------------------


def test_dedup_keeps_first_and_drops_near_equal():
    h1 = Halfspace([1.0, 0.0], 0.5, source=(0,))
    h2 = Halfspace([1.0, 1e-13], 0.5 + 1e-13, source=(1,))  # within 1e-9
    h3 = Halfspace([0.0, 1.0], 0.5)
    out = dedup_halfspaces([h1, h2, h3])
    assert len(out) == 2
    assert out[0] is h1 and out[1] is h3
    assert dedup_halfspaces(out) == out


# --- region feasibility -------------------------------------------------------


def test_region_feasible_1d_examples():
    full = AffineSubspace.full_space(1)
    box = [Halfspace([1.0], 0.0), Halfspace([-1.0], -1.0)]
    feas, wit = region_feasible(box, full)
    assert feas and 0.0 - 1e-9 <= wit[0] <= 1.0 + 1e-9

    feas, wit = region_feasible([Halfspace([1.0], 1.0), Halfspace([-1.0], 0.0)], full)
    assert not feas and wit is None

    feas, wit = region_feasible([], full)
    assert feas and np.array_equal(wit, full.base)


def test_region_feasible_witness_satisfies_constraints():
    rng = np.random.default_rng(6)
    full = AffineSubspace.full_space(2)
    for _ in range(300):
        m = int(rng.integers(1, 9))
        hs = []
        for _ in range(m):
            w = rng.standard_normal(2)
            point = rng.uniform(-1, 1, 2)
            hs.append(Halfspace(w, float(w @ point) / np.linalg.norm(w)))
        feas, wit = region_feasible(hs, full)
        oracle = feasible_2d([(h.normal, h.offset) for h in hs])
        assert feas == oracle
        if feas:
            assert all(h.signed_value(wit) >= -1e-6 for h in hs)


def test_region_feasible_in_lower_chart():
    # constraints restricted to the x-axis of R^2
    aff = AffineSubspace(np.zeros(2), np.array([[1.0, 0.0]]))
    hs = [Halfspace([1.0, 0.0], 2.0), Halfspace([-1.0, -1.0], -10.0)]
    feas, wit = region_feasible(hs, aff)
    assert feas
    assert abs(wit[1]) <= 1e-9 and wit[0] >= 2.0 - 1e-9
    # halfspace parallel to the chart and excluding it
    feas, _ = region_feasible([Halfspace([0.0, 1.0], 1.0)], aff)
    assert not feas


def test_region_feasible_dim3():
    full = AffineSubspace.full_space(3)
    rng = np.random.default_rng(7)
    for _ in range(60):
        m = int(rng.integers(1, 8))
        hs = []
        for _ in range(m):
            w = rng.standard_normal(3)
            point = rng.uniform(-1, 1, 3)
            hs.append(Halfspace(w, float(w @ point) / np.linalg.norm(w)))
        feas, wit = region_feasible(hs, full)
        if feas:
            assert all(h.signed_value(wit) >= -1e-6 for h in hs)
        else:
            # spot-check emptiness on a coarse grid
            grid = rng.uniform(-4, 4, size=(500, 3))
            vals = np.stack([g.contains_many(grid) for g in hs])
            assert not np.any(vals.all(axis=0))


# --- Helly witness -------------------------------------------------------------


def test_helly_witness_1d():
    full = AffineSubspace.full_space(1)
    family = [Halfspace([-1.0], 0.0)]  # x <= 0
    target = Halfspace([1.0], 1.0)     # x >= 1
    wit = helly_witness(family, full, target, 1)
    assert wit.indices == (0,)
    assert not wit.includes_aff
    feas, _ = region_feasible(list(wit.members) + [target], full)
    assert not feas


def test_helly_witness_triangle():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    aff = affine_span(pts, 2)
    facets = hull_facet_halfspaces(pts, aff)
    target = Halfspace([1.0, 0.0], 5.0)  # x >= 5, far from the triangle
    wit = helly_witness(facets, aff, target, 2)
    assert len(wit.indices) <= 2
    hs = [m for m in wit.members if isinstance(m, Halfspace)]
    feas, _ = region_feasible(hs + [target], aff if wit.includes_aff
                              else AffineSubspace.full_space(2))
    assert not feas
    assert not feasible_2d([(h.normal, h.offset) for h in hs + [target]])


def test_helly_witness_preconditions():
    full = AffineSubspace.full_space(2)
    family = [Halfspace([1.0, 0.0], 0.0)]
    overlapping = Halfspace([0.0, 1.0], 0.0)
    with pytest.raises(ValueError, match="target intersects region"):
        helly_witness(family, full, overlapping, 2)
    empty_family = [Halfspace([1.0, 0.0], 1.0), Halfspace([-1.0, 0.0], 0.0)]
    with pytest.raises(ValueError, match="region already empty"):
        helly_witness(empty_family, full, overlapping, 2)


def test_helly_witness_d3_instance():
    rng = np.random.default_rng(88)
    pts = rng.standard_normal((10, 3))
    aff = affine_span(pts, 3)
    assert aff.k == 3
    facets = hull_facet_halfspaces(pts, aff)
    w = rng.standard_normal(3)
    w /= np.linalg.norm(w)
    target = Halfspace(w, float(np.max(pts @ w)) + 0.5)
    wit = helly_witness(facets, aff, target, 3)
    assert len(wit.indices) <= 3
    hs = [m for m in wit.members if isinstance(m, Halfspace)]
    sub_aff = aff if wit.includes_aff else AffineSubspace.full_space(3)
    feas, _ = region_feasible(hs + [target], sub_aff)
    assert not feas


def test_helly_witness_random_instances():
    rng = np.random.default_rng(8)
    done = 0
    attempts = 0
    while done < 40 and attempts < 400:
        attempts += 1
        pts = rng.standard_normal((int(rng.integers(3, 9)), 2))
        aff = affine_span(pts, 2)
        if aff.k != 2:
            continue
        facets = hull_facet_halfspaces(pts, aff)
        w = rng.standard_normal(2)
        w /= np.linalg.norm(w)
        offset = float(np.max(pts @ w)) + float(rng.uniform(0.2, 2.0))
        target = Halfspace(w, offset)
        wit = helly_witness(facets, aff, target, 2)
        assert len(wit.indices) <= 2
        hs = [m for m in wit.members if isinstance(m, Halfspace)]
        sub_aff = aff if wit.includes_aff else AffineSubspace.full_space(2)
        feas, _ = region_feasible(hs + [target], sub_aff)
        assert not feas
        done += 1
    assert done == 40
