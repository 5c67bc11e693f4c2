import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from gtomo.errors import DimensionError, GeometryError, NonMonotoneInterval
from gtomo.fixtures import (
    crosspolytope,
    cube_with_void,
    random_box_union,
    random_polytope,
    regular_simplex,
    simplex,
    two_disjoint_cubes,
    unit_cube,
)
from gtomo.polytope import PolyconvexSet, section_volume
from gtomo.slicing import (
    PiecewiseDensity,
    SliceSamples,
    line_interval_count,
    marginal_profile,
    max_slice,
    max_slice_along,
    midpoint_samples,
    sample_slices,
    slice_volume,
)

E1 = np.array([1.0, 0.0, 0.0])


def test_void_cube_slices():
    U = cube_with_void(3)
    s = sample_slices(U, E1, [0.5, 1.5, 2.5])
    assert s.areas == pytest.approx([9.0, 8.0, 9.0], abs=1e-12)
    # on the void's faces the slice is the full square
    assert slice_volume(U, E1, 1.0) == pytest.approx(9.0)
    assert slice_volume(U, E1, 3.5) == 0.0


def test_void_cube_profile():
    f = marginal_profile(cube_with_void(3), E1)
    assert f.breakpoints == pytest.approx([0, 1, 2, 3])
    assert f.left_limits * 26 == pytest.approx([0, 9, 8, 9], abs=1e-9)
    assert f.right_limits * 26 == pytest.approx([9, 8, 9, 0], abs=1e-9)
    assert f.total_mass == pytest.approx(1.0, abs=1e-12)


def test_simplex_profile_is_linear():
    f = marginal_profile(simplex(2), [1.0, 0.0])
    for t in np.linspace(0.01, 0.99, 9):
        assert f(t) == pytest.approx(2 * (1 - t), abs=1e-12)
    assert f.right_limits[0] == pytest.approx(2.0)


@pytest.mark.parametrize("u", [E1, np.ones(3) / math.sqrt(3), np.array([0.6, 0.8, 0.0])])
def test_profile_mass_and_quadrature(u):
    U = PolyconvexSet.of(crosspolytope(3))
    f = marginal_profile(U, u)
    assert f.total_mass == pytest.approx(1.0, abs=1e-9)
    # independent integration of the raw slice function
    lo, hi = f.support
    raw, _ = integrate.quad(lambda t: slice_volume(U, u, t), lo, hi, points=list(f.breakpoints), limit=200)
    assert raw == pytest.approx(U.volume, rel=1e-8)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_profile_monotone_pieces(seed):
    rng = np.random.default_rng(seed)
    P = random_polytope(rng, 3)
    u = rng.normal(size=3)
    u /= np.linalg.norm(u)
    f = marginal_profile(P, u)
    f.check_monotone()
    assert f.total_mass == pytest.approx(1.0, abs=1e-8)


def test_profile_of_box_union_is_piecewise_constant(rng):
    for _ in range(10):
        U = random_box_union(rng, 3)
        f = marginal_profile(U, E1)
        for poly in f.polynomials:
            assert np.allclose(poly.deriv().coef, 0, atol=1e-8)


def test_piecewise_density_from_function():
    f = PiecewiseDensity.from_function(lambda t: 1.0 if 0 <= t <= 1 else 0.0, [0.0, 1.0])
    assert f.right_limits[0] == pytest.approx(1.0)
    assert f.left_limits[1] == pytest.approx(1.0)
    assert f.total_mass == pytest.approx(1.0)
    mass = 0.5 - math.sin(12) / 24
    bad = PiecewiseDensity.from_function(lambda t: math.sin(6 * t) ** 2 / mass, [0.0, 1.0])
    with pytest.raises(NonMonotoneInterval):
        bad.check_monotone()


def test_slice_samples_validation():
    with pytest.raises(GeometryError):
        SliceSamples([1.0, 0.0], [1.0, 0.5], [1.0, 1.0])
    with pytest.raises(GeometryError):
        SliceSamples([1.0, 0.0], [0.0], [-1.0])
    with pytest.raises(GeometryError):
        SliceSamples([2.0, 0.0], [0.0], [1.0])
    s = SliceSamples([1.0, 0.0], [0.0], [1.0]).with_sample(-1.0, 2.0)
    assert list(s.positions) == [-1.0, 0.0]


def test_midpoint_samples_avoid_breakpoints():
    s = midpoint_samples(cube_with_void(3), E1)
    assert list(s.positions) == pytest.approx([0.5, 1.5, 2.5])


def test_max_slice_known_values():
    assert max_slice(unit_cube(3), E1[None, :]) == pytest.approx(1.0)
    assert max_slice(crosspolytope(3), E1[None, :]) == pytest.approx(2.0, abs=1e-9)
    t, area = max_slice_along(simplex(3), E1)
    assert t == pytest.approx(0.0, abs=1e-7) and area == pytest.approx(0.5)
    # line sections of the cube: the main diagonal is longest
    assert max_slice(unit_cube(3), np.eye(3)[:2]) == pytest.approx(1.0, abs=1e-7)


def test_max_slice_against_grid_search():
    P = regular_simplex(3)
    rng = np.random.default_rng(4)
    for _ in range(3):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        proj = P.vertices @ u
        grid = np.linspace(proj.min(), proj.max(), 4001)
        best = max(section_volume(P, u, t) for t in grid)
        found = max_slice(P, u[None, :])
        assert found >= best - 1e-9
        assert found == pytest.approx(best, rel=1e-4)


def test_max_slice_rank_two_against_grid():
    # line sections of a box along e3: every line through the square hits full height
    P = unit_cube(3).linear_map(np.diag([1.0, 2.0, 3.0]))
    assert max_slice(P, np.eye(3)[:2]) == pytest.approx(3.0, abs=1e-7)
    Q = crosspolytope(3)
    assert max_slice(Q, np.eye(3)[:2]) == pytest.approx(2.0, abs=1e-7)


def test_max_slice_errors():
    with pytest.raises(DimensionError):
        max_slice(unit_cube(3), np.eye(3))
    with pytest.raises(TypeError):
        max_slice(two_disjoint_cubes(3), E1[None, :])


def test_line_interval_counts():
    U = cube_with_void(3)
    assert line_interval_count(U, 0, [1.5, 1.5]) == 2
    assert line_interval_count(U, 0, [0.5, 1.5]) == 1
    assert line_interval_count(two_disjoint_cubes(3), 0, [0.5, 0.5]) == 2
    assert line_interval_count(two_disjoint_cubes(3), 0, [5.0, 0.5]) == 0
    # touching pieces merge into one interval
    stacked = PolyconvexSet.of(unit_cube(3), unit_cube(3).translate([1, 0, 0]))
    assert line_interval_count(stacked, 0, [0.5, 0.5]) == 1
