import math

import numpy as np
import pytest

from gtomo.bounds import (
    BoundReport,
    betke_mcmullen_bounds,
    direction_constant,
    meyer_bound,
    meyer_constant_ratio,
    surface_bound_reports,
    surface_lower_bound,
    surface_lower_bound_general,
    volume_bound_reports,
    volume_lower_bound,
    volume_upper_bound_projections,
)
from gtomo.brascamp_lieb import BLDatum
from gtomo.errors import DegenerateWeights, DiscontinuousSamplePoint, TooManyDirections
from gtomo.fixtures import corner_squares, crosspolytope, cube_with_void, random_polytope, unit_cube
from gtomo.polytope import ConvexPolytope, PolyconvexSet
from gtomo.slicing import SliceSamples, marginal_profile, sample_slices


def test_volume_lower_bound_examples():
    assert volume_lower_bound([1, 1, 1], BLDatum.axes(3), 0.0) == pytest.approx(math.exp(-1.5))
    assert volume_lower_bound([2, 2, 2], BLDatum.axes(3), 0.0) == pytest.approx(math.sqrt(8 / math.e**3))


def test_volume_lower_bound_needs_total_weight_above_one():
    D = BLDatum.rank_one([[1.0]], [1.0])
    with pytest.raises(DegenerateWeights):
        volume_lower_bound([1.0], D, 0.0)


def test_meyer_examples():
    assert meyer_bound([2, 2, 2], 3) == pytest.approx(4 / 3, abs=1e-12)
    assert meyer_bound([2, 2], 2) == pytest.approx(2.0, abs=1e-12)
    assert meyer_bound([1, 1, 1], 3) == pytest.approx(math.sqrt(6 / 27))
    assert meyer_bound([1, 0, 1], 3) == 0.0


def test_projection_upper_examples():
    lw = BLDatum.coordinate_hyperplanes(3)
    assert volume_upper_bound_projections([1, 1, 1], lw, 0.0) == pytest.approx(1.0)
    assert volume_upper_bound_projections([2, 2, 2], lw, 0.0) == pytest.approx(2 * math.sqrt(2))


def test_surface_lower_bound_examples():
    assert surface_lower_bound([[9, 8, 9]] * 3) == pytest.approx(60 / math.sqrt(3))
    assert surface_lower_bound([[1.0]] * 3) == pytest.approx(2 * math.sqrt(3))
    assert surface_lower_bound([[], [], []]) == 0.0


def test_surface_lower_bound_checks_continuity():
    U = corner_squares()
    s = sample_slices(U, [1.0, 0.0], [0.5])
    with pytest.raises(DiscontinuousSamplePoint):
        surface_lower_bound([s, []], body=U)


def test_direction_constant():
    assert direction_constant(np.eye(3)) == pytest.approx(math.sqrt(3))
    assert direction_constant([[1.0, 0.0]]) == 1.0
    assert direction_constant([[1.0, 0.0], [1.0, 0.0]]) == pytest.approx(2.0)
    with pytest.raises(TooManyDirections):
        direction_constant(np.tile([1.0, 0.0], (25, 1)))


def test_direction_constant_against_sphere_search(rng):
    us = rng.normal(size=(5, 3))
    us /= np.linalg.norm(us, axis=1, keepdims=True)
    v = rng.normal(size=(200_000, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    sampled = np.abs(v @ us.T).sum(axis=1).max()
    exact = direction_constant(us)
    assert sampled <= exact + 1e-12
    assert sampled == pytest.approx(exact, rel=1e-3)


def test_general_directions_unit_square():
    sq = PolyconvexSet.of(ConvexPolytope.box([0, 0], [1, 1]))
    d = np.array([1.0, 1.0]) / math.sqrt(2)
    samples = []
    for u in (np.array([1.0, 0.0]), d):
        bp = marginal_profile(sq, u).breakpoints
        samples.append(sample_slices(sq, u, (bp[:-1] + bp[1:]) / 2))
    bound = surface_lower_bound_general(samples, 1.0, body=sq)
    assert 0 < bound <= 4.0


def test_general_reduces_to_axes():
    U = cube_with_void(3)
    samples = [sample_slices(U, np.eye(3)[i], [0.5, 1.5, 2.5]) for i in range(3)]
    assert surface_lower_bound_general(samples, 26.0) == pytest.approx(surface_lower_bound(samples))


def test_betke_mcmullen():
    up, lo = betke_mcmullen_bounds(unit_cube(3))
    assert up == pytest.approx(6.0) and lo == pytest.approx(math.sqrt(12))
    up, lo = betke_mcmullen_bounds(crosspolytope(3))
    assert up == pytest.approx(12.0)
    assert lo == pytest.approx(crosspolytope(3).surface_area, abs=1e-9)


def test_meyer_constant_ratio_trend():
    ratios = [meyer_constant_ratio(n) for n in range(2, 31)]
    assert all(r > 1 for r in ratios)
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_report_validity_tolerance():
    assert BoundReport("x", "lower", 1.0 + 5e-10, 1.0).valid
    assert not BoundReport("x", "lower", 1.0 + 5e-9, 1.0).valid
    assert BoundReport("x", "upper", 1.0, 1.0 + 5e-10).valid
    big = BoundReport("x", "lower", 1e6 * (1 + 1e-13), 1e6)
    assert big.valid
    assert BoundReport("x", "lower", 1.0, None).slack is None


def test_reports_on_random_polytopes(rng):
    for _ in range(5):
        P = random_polytope(rng, 3)
        for r in volume_bound_reports(P) + surface_bound_reports(P):
            assert r.valid, r.to_dict()


def test_refinement_monotonicity():
    U = cube_with_void(3)
    u = np.eye(3)[0]
    coarse = sample_slices(U, u, [1.5])
    fine = sample_slices(U, u, [0.5, 1.5, 2.5])
    finer = sample_slices(U, u, [0.25, 0.5, 1.5, 2.5, 2.75])
    vals = [surface_lower_bound([s, [], []], body=U) for s in (coarse, fine, finer)]
    assert vals[0] <= vals[1] <= vals[2] + 1e-12


def test_meyer_beats_max_slice_bound_when_origin_slice_is_maximal():
    for n in (2, 3, 4):
        P = crosspolytope(n)
        slices = [2.0 ** (n - 1) / math.factorial(n - 1)] * n
        assert meyer_bound(slices, n) >= volume_lower_bound(slices, BLDatum.axes(n), 0.0)
