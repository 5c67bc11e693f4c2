"""Named test bodies used by the CLI, the acceptance suite and the docs."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .polytope import ConvexPolytope, PolyconvexSet


def unit_cube(n: int = 3, side: float = 1.0) -> ConvexPolytope:
    return ConvexPolytope.box(np.zeros(n), np.full(n, side))


def box(lo, hi) -> ConvexPolytope:
    return ConvexPolytope.box(lo, hi)


def simplex(n: int = 3) -> ConvexPolytope:
    """``{x >= 0, sum x <= 1}``."""
    A = np.vstack([-np.eye(n), np.ones((1, n))])
    b = np.concatenate([np.zeros(n), [1.0]])
    return ConvexPolytope(A, b)


def crosspolytope(n: int = 3, radius: float = 1.0) -> ConvexPolytope:
    """The l1 ball ``sum |x_i| <= radius``; 2^n facets."""
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    return ConvexPolytope(signs, np.full(len(signs), radius))


def regular_simplex(n: int = 3) -> ConvexPolytope:
    """Regular simplex centred at the origin with unit circumradius."""
    pts = np.eye(n + 1) - 1.0 / (n + 1)
    basis = np.linalg.svd(pts)[2][:n]
    coords = pts @ basis.T
    coords /= np.linalg.norm(coords[0])
    return ConvexPolytope.from_vertices(coords)


def cube_with_void(n: int = 3) -> PolyconvexSet:
    """``[0,3]^n`` minus the open cube ``(1,2)^n`` as 2n slabs."""
    pieces = []
    for axis in range(n):
        for lo, hi in ((0.0, 1.0), (2.0, 3.0)):
            low = np.zeros(n)
            high = np.full(n, 3.0)
            low[axis], high[axis] = lo, hi
            pieces.append(ConvexPolytope.box(low, high))
    return PolyconvexSet(pieces)


def corner_squares() -> PolyconvexSet:
    """Two half-unit squares touching at the corner (0.5, 0.5)."""
    return PolyconvexSet.of(
        ConvexPolytope.box([0.0, 0.0], [0.5, 0.5]),
        ConvexPolytope.box([0.5, 0.5], [1.0, 1.0]),
    )


def two_disjoint_cubes(n: int = 3) -> PolyconvexSet:
    """Unit cubes at ``[0,1]`` and ``[2,3]`` along the first axis."""
    shift = np.zeros(n)
    shift[0] = 2.0
    return PolyconvexSet.of(unit_cube(n), unit_cube(n).translate(shift))


def random_box_union(rng: np.random.Generator, n: int = 3, max_boxes: int = 4, span: float = 4.0) -> PolyconvexSet:
    """Union of 1..max_boxes random axis-aligned boxes with integer-free corners."""
    k = int(rng.integers(1, max_boxes + 1))
    pieces = []
    for _ in range(k):
        lo = rng.uniform(0.0, span * 0.7, size=n)
        hi = lo + rng.uniform(0.3, span * 0.5, size=n)
        pieces.append(ConvexPolytope.box(lo, hi))
    return PolyconvexSet(pieces)


def random_polytope(rng: np.random.Generator, n: int = 3, n_points: int = 12) -> ConvexPolytope:
    """Hull of Gaussian points, randomly stretched and shifted."""
    pts = rng.normal(size=(n_points, n)) * rng.uniform(0.5, 2.0, size=n)
    pts += rng.normal(size=n)
    return ConvexPolytope.from_vertices(pts)


def random_rotation(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


FIXTURES = {
    "unit_cube": lambda: PolyconvexSet.of(unit_cube(3)),
    "cube_with_void": cube_with_void,
    "crosspolytope": lambda: PolyconvexSet.of(crosspolytope(3)),
    "simplex": lambda: PolyconvexSet.of(simplex(3)),
    "two_disjoint_cubes": two_disjoint_cubes,
    "corner_squares": corner_squares,
}


def crosspolytope_volume(n: int) -> float:
    return 2.0**n / math.factorial(n)
