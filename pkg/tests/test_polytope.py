import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from conftest import box_union_exact, brute_vertices
from gtomo.errors import (
    DegeneratePolytope,
    DimensionError,
    EmptyPolytope,
    PieceCountTooLarge,
    UnboundedPolytope,
)
from gtomo.fixtures import (
    corner_squares,
    crosspolytope,
    crosspolytope_volume,
    cube_with_void,
    random_polytope,
    random_rotation,
    simplex,
    two_disjoint_cubes,
    unit_cube,
)
from gtomo.polytope import (
    AffineFlat,
    ConvexPolytope,
    PolyconvexSet,
    enumerate_vertices,
    facets,
    intersect_flat,
    project,
    section_volume,
    union_surface_area,
    union_volume,
)

seeds = st.integers(0, 2**32 - 1)


def _same_points(P, Q):
    P = P[np.lexsort(P.T)]
    Q = Q[np.lexsort(Q.T)]
    return P.shape == Q.shape and np.allclose(P, Q, atol=1e-9)


def test_cube_basics():
    C = unit_cube(3)
    assert C.volume == pytest.approx(1.0, abs=1e-12)
    assert C.surface_area == pytest.approx(6.0, abs=1e-12)
    assert len(C.vertices) == 8
    assert len(C.facets) == 6


@pytest.mark.parametrize("n", [2, 3, 4])
def test_crosspolytope_volume_and_vertices(n):
    P = crosspolytope(n)
    assert P.volume == pytest.approx(crosspolytope_volume(n), rel=1e-12)
    assert _same_points(enumerate_vertices(P), brute_vertices(P.A, P.b))


def test_crosspolytope_facets():
    fs = facets(crosspolytope(3))
    assert len(fs) == 8
    for normal, area in fs:
        assert area == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
        assert np.allclose(np.abs(normal), 1 / math.sqrt(3))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_simplex_volume(n):
    assert simplex(n).volume == pytest.approx(1 / math.factorial(n), rel=1e-12)


def test_simplex_edges():
    lengths = sorted(area for _, area in facets(simplex(2)))
    assert lengths == pytest.approx([1.0, 1.0, math.sqrt(2)], abs=1e-12)


def test_rejects_bad_input():
    with pytest.raises(UnboundedPolytope):
        ConvexPolytope([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0])
    with pytest.raises(EmptyPolytope):
        ConvexPolytope([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0.0, -1.0, 1.0, 1.0])
    with pytest.raises(DegeneratePolytope):
        ConvexPolytope.box([0.0, 0.0], [1.0, 0.0])


def test_vertices_match_brute_force(rng):
    for _ in range(10):
        P = random_polytope(rng, 3, 10)
        assert _same_points(P.vertices, brute_vertices(P.A, P.b))


def test_volume_matches_hull_of_points(rng):
    for _ in range(10):
        pts = rng.normal(size=(15, 3))
        assert ConvexPolytope.from_vertices(pts).volume == pytest.approx(ConvexHull(pts).volume, rel=1e-10)


def test_divergence_identity(rng):
    # n V = sum over facets of (support number) * (facet area)
    for _ in range(5):
        P = random_polytope(rng, 3)
        c = P.interior_point
        total = sum(area * (normal @ (pts[0] - c)) for normal, area, pts in P.facets)
        assert total == pytest.approx(3 * P.volume, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_rotation_invariance(seed):
    rng = np.random.default_rng(seed)
    P = random_polytope(rng, 3)
    Q = P.linear_map(random_rotation(rng, 3), shift=rng.normal(size=3))
    assert Q.volume == pytest.approx(P.volume, rel=1e-9)
    assert Q.surface_area == pytest.approx(P.surface_area, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(seeds, st.sampled_from([0.5, 2.0]))
def test_scaling_law(seed, lam):
    P = random_polytope(np.random.default_rng(seed), 3)
    Q = P.scale(lam)
    assert Q.volume == pytest.approx(lam**3 * P.volume, rel=1e-9)
    assert Q.surface_area == pytest.approx(lam**2 * P.surface_area, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(seeds)
def test_split_by_hyperplane(seed):
    rng = np.random.default_rng(seed)
    P = random_polytope(rng, 3)
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    proj = P.vertices @ u
    t = rng.uniform(proj.min() + 0.1 * np.ptp(proj), proj.max() - 0.1 * np.ptp(proj))
    lower = ConvexPolytope(np.vstack([P.A, u]), np.append(P.b, t))
    upper = ConvexPolytope(np.vstack([P.A, -u]), np.append(P.b, -t))
    assert lower.volume + upper.volume == pytest.approx(P.volume, rel=1e-9)
    # the cut face is the section
    cut = [area for normal, area, _ in lower.facets if np.allclose(normal, u)]
    assert sum(cut) == pytest.approx(section_volume(P, u, t), rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_minkowski_relation(seed):
    # facet normals weighted by area sum to zero
    P = random_polytope(np.random.default_rng(seed), 3)
    total = sum(area * normal for normal, area in facets(P))
    assert np.allclose(total, 0, atol=1e-9 * P.surface_area)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_brunn_minkowski_midpoint(seed):
    rng = np.random.default_rng(seed)
    P = random_polytope(rng, 3)
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    proj = P.vertices @ u
    a, c = np.sort(rng.uniform(proj.min(), proj.max(), size=2))
    root = lambda t: section_volume(P, u, t) ** 0.5
    assert root((a + c) / 2) >= (root(a) + root(c)) / 2 - 1e-9


def test_intersect_flat_and_project():
    C = unit_cube(3)
    sq = intersect_flat(C, AffineFlat.hyperplane([0, 0, 1], 0.5))
    assert sq.ambient_dim == 2 and sq.volume == pytest.approx(1.0)
    assert intersect_flat(C, AffineFlat.hyperplane([0, 0, 1], 2.0)) is None
    diag = intersect_flat(C, AffineFlat.hyperplane(np.ones(3) / math.sqrt(3), math.sqrt(3) / 2))
    # regular hexagon with side sqrt(2)/2
    assert diag.volume == pytest.approx(3 * math.sqrt(3) / 2 * 0.5, rel=1e-9)
    shadow = project(crosspolytope(3), np.eye(3)[:2])
    assert shadow.volume == pytest.approx(2.0)
    with pytest.raises(DimensionError):
        intersect_flat(C, AffineFlat.hyperplane([0, 1], 0.5))


def test_cube_with_void():
    U = cube_with_void(3)
    assert U.volume == pytest.approx(26.0, abs=1e-9)
    assert U.surface_area == pytest.approx(60.0, abs=1e-9)
    assert sum(area for _, area in U.boundary_facets) == pytest.approx(60.0, abs=1e-9)


def test_touching_and_disjoint_unions():
    cs = corner_squares()
    assert cs.volume == pytest.approx(0.5)
    assert cs.surface_area == pytest.approx(4.0)
    two = two_disjoint_cubes(3)
    assert union_volume(two) == pytest.approx(2.0)
    assert union_surface_area(two) == pytest.approx(12.0)
    stacked = PolyconvexSet.of(unit_cube(3), unit_cube(3).translate([0, 0, 1]))
    assert stacked.volume == pytest.approx(2.0)
    assert stacked.surface_area == pytest.approx(10.0)


def test_box_unions_against_cell_grid(rng):
    from gtomo.fixtures import random_box_union

    for _ in range(30):
        U = random_box_union(rng, 3)
        boxes = [(p.bbox[0], p.bbox[1]) for p in U.pieces]
        vol, surf = box_union_exact(boxes)
        assert U.volume == pytest.approx(vol, rel=1e-9)
        assert U.surface_area == pytest.approx(surf, rel=1e-9)
        assert sum(a for _, a in U.boundary_facets) == pytest.approx(surf, rel=1e-9)


def test_union_of_overlapping_polytopes_against_monte_carlo(rng):
    P = crosspolytope(3)
    U = PolyconvexSet.of(P, P.translate([0.5, 0.2, 0.0]))
    pts = rng.uniform(-1.5, 1.5, size=(400_000, 3)) + [0.25, 0.1, 0.0]
    est = 27 * U.contains(pts).mean()
    assert U.volume == pytest.approx(est, rel=0.02)


def test_piece_cap():
    pieces = [unit_cube(2).translate([0.1 * k, 0]) for k in range(21)]
    with pytest.raises(PieceCountTooLarge):
        PolyconvexSet(pieces).volume


def test_transformations_on_unions():
    U = cube_with_void(3)
    assert U.translate([1, 2, 3]).volume == pytest.approx(26.0)
    assert U.scale(2.0).surface_area == pytest.approx(240.0)
    assert U.contains([[0.5, 0.5, 0.5]])[0]
    assert not U.contains([[1.5, 1.5, 1.5]])[0]
