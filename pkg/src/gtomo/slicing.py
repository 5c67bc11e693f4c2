"""Hyperplane sections, marginal densities and maximal slices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from .errors import DimensionError, GeometryError, NonMonotoneInterval
from .polytope import (
    EPS_GEOM,
    AffineFlat,
    ConvexPolytope,
    PolyconvexSet,
    as_union,
    dedupe_points,
    intersect_flat,
    orthonormal_complement,
    section_volume,
)


def _unit(u) -> np.ndarray:
    u = np.asarray(u, dtype=float).ravel()
    norm = np.linalg.norm(u)
    if not np.isfinite(norm) or norm == 0:
        raise GeometryError("direction must be a nonzero finite vector")
    if abs(norm - 1.0) > 1e-8:
        raise GeometryError(f"direction must be a unit vector (norm {norm:.12g})")
    return u / norm


@dataclass(frozen=True)
class PiecewiseDensity:
    """A compactly supported 1-D density, monotone between breakpoints.

    ``left_limits[i]`` and ``right_limits[i]`` are the one-sided limits at
    ``breakpoints[i]``; the density vanishes left of the first breakpoint and
    right of the last.  ``polynomials`` (optional) holds the closed form on
    each bounded interval.
    """

    breakpoints: np.ndarray
    evaluate: Callable[[float], float]
    left_limits: np.ndarray
    right_limits: np.ndarray
    total_mass: float
    polynomials: tuple = field(default=(), repr=False)
    mass_tol: float = 1e-8

    def __post_init__(self):
        bp = np.asarray(self.breakpoints, dtype=float)
        left = np.asarray(self.left_limits, dtype=float)
        right = np.asarray(self.right_limits, dtype=float)
        if bp.ndim != 1 or len(bp) == 0:
            raise GeometryError("a density needs at least one breakpoint")
        if np.any(np.diff(bp) <= 0):
            raise GeometryError("breakpoints must be strictly increasing")
        if left.shape != bp.shape or right.shape != bp.shape:
            raise GeometryError("one-sided limits must match the breakpoints")
        if not (np.all(np.isfinite(left)) and np.all(np.isfinite(right))):
            raise GeometryError("one-sided limits must be finite")
        if abs(self.total_mass - 1.0) > self.mass_tol:
            raise GeometryError(f"density has mass {self.total_mass!r}, not 1")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "left_limits", left)
        object.__setattr__(self, "right_limits", right)

    def __call__(self, t: float) -> float:
        return float(self.evaluate(t))

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @classmethod
    def from_function(cls, func, breakpoints, *, delta: float | None = None, total_mass: float | None = None, **kwargs):
        """Build from a callable, taking one-sided limits at ``a ± delta``.

        ``delta`` defaults to 1e-6 times the support width; the mass is
        integrated numerically unless given.
        """
        bp = np.asarray(sorted(breakpoints), dtype=float)
        width = bp[-1] - bp[0] if len(bp) > 1 else 1.0
        delta = 1e-6 * width if delta is None else delta
        left = np.array([func(a - delta) for a in bp])
        right = np.array([func(a + delta) for a in bp])
        left[0] = 0.0
        right[-1] = 0.0
        if total_mass is None:
            total_mass = sum(integrate.quad(func, a, c, limit=200)[0] for a, c in zip(bp[:-1], bp[1:]))
        return cls(bp, func, left, right, float(total_mass), **kwargs)

    def check_monotone(self, points_per_interval: int = 64, rtol: float = 1e-9) -> None:
        """Raise NonMonotoneInterval unless each interval samples monotone."""
        bp = self.breakpoints
        scale = max(np.max(np.abs(self.left_limits)), np.max(np.abs(self.right_limits)), 1e-300)
        for a, c in zip(bp[:-1], bp[1:]):
            grid = np.linspace(a, c, points_per_interval + 2)[1:-1]
            vals = np.array([self.evaluate(t) for t in grid])
            steps = np.diff(vals)
            slack = rtol * max(scale, float(np.max(np.abs(vals))))
            if not (np.all(steps >= -slack) or np.all(steps <= slack)):
                raise NonMonotoneInterval(f"density is not monotone on ({a:.12g}, {c:.12g})")


@dataclass(frozen=True)
class SliceSamples:
    """Slice areas ``areas[j]`` of hyperplanes ``{x . direction = positions[j]}``."""

    direction: np.ndarray
    positions: np.ndarray
    areas: np.ndarray

    def __post_init__(self):
        u = _unit(self.direction)
        pos = np.asarray(self.positions, dtype=float).ravel()
        areas = np.asarray(self.areas, dtype=float).ravel()
        if pos.shape != areas.shape:
            raise GeometryError("positions and areas differ in length")
        if np.any(np.diff(pos) <= 0):
            raise GeometryError("sample positions must be strictly increasing")
        if not np.all(np.isfinite(areas)) or np.any(areas < 0):
            raise GeometryError("slice areas must be finite and nonnegative")
        object.__setattr__(self, "direction", u)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "areas", areas)

    def __len__(self):
        return len(self.positions)

    def with_sample(self, position: float, area: float) -> "SliceSamples":
        pos = np.append(self.positions, position)
        areas = np.append(self.areas, area)
        order = np.argsort(pos)
        return SliceSamples(self.direction, pos[order], areas[order])

    def to_dict(self) -> dict:
        return {
            "direction": self.direction.tolist(),
            "positions": self.positions.tolist(),
            "areas": self.areas.tolist(),
        }


# ---------------------------------------------------------------------------
# sections of unions


def _term_ranges(U: PolyconvexSet, u: np.ndarray):
    out = []
    for term in U.terms:
        if term.polytope is not None:
            proj = term.polytope.vertices @ u
        else:
            proj = term.flat.flat.to_ambient(term.flat.polytope.vertices) @ u
        out.append((term, proj.min(), proj.max()))
    return out


def _slice_from_ranges(ranges, u, t, tol) -> float:
    total = 0.0
    for term, lo, hi in ranges:
        if t < lo - tol or t > hi + tol:
            continue
        if term.polytope is not None:
            total += term.sign * section_volume(term.polytope, u, t)
        else:
            flat = term.flat
            along = float(flat.normal @ u)
            if abs(abs(along) - 1.0) <= 1e-12 and abs(flat.offset * along - t) <= tol:
                total += term.sign * flat.area
    return max(total, 0.0)


def slice_volume(U, u, t: float) -> float:
    """(n-1)-volume of ``U ∩ {x . u = t}``, by inclusion-exclusion over pieces."""
    U = as_union(U)
    u = _unit(u)
    if len(u) != U.ambient_dim:
        raise DimensionError("direction and body dimensions differ")
    tol = U.tol * max(1.0, abs(t))
    return _slice_from_ranges(_term_ranges(U, u), u, float(t), tol)


def sample_slices(U, u, positions) -> SliceSamples:
    """Exact slice areas of ``U`` at the given positions."""
    U = as_union(U)
    u = _unit(u)
    ranges = _term_ranges(U, u)
    pos = np.asarray(sorted(positions), dtype=float)
    areas = [_slice_from_ranges(ranges, u, t, U.tol * max(1.0, abs(t))) for t in pos]
    return SliceSamples(u, pos, np.asarray(areas))


def marginal_profile(U, u) -> PiecewiseDensity:
    """Density of ``X . u`` for X uniform on ``U``.

    Breakpoints are the projections of every inclusion-exclusion vertex; the
    density is a polynomial of degree <= n-1 between them, which is fitted
    exactly and split further at its interior critical points so that every
    interval is monotone.  One-sided limits are the fitted polynomials
    evaluated at the interval ends.
    """
    U = as_union(U)
    u = _unit(u)
    n = U.ambient_dim
    if n < 2:
        raise DimensionError("marginal profiles need ambient dimension >= 2")
    if len(u) != n:
        raise DimensionError("direction and body dimensions differ")
    # unions are immutable, so profiles can be memoized per direction
    cache = U.__dict__.setdefault("_profiles", {})
    key = u.tobytes()
    if key not in cache:
        cache[key] = _marginal_profile(U, u)
    return cache[key]


def _marginal_profile(U: PolyconvexSet, u: np.ndarray) -> PiecewiseDensity:
    n = U.ambient_dim
    vol = U.volume
    ranges = _term_ranges(U, u)
    proj = U.vertices @ u
    span = float(proj.max() - proj.min())
    tol = U.tol * max(1.0, float(np.max(np.abs(proj))))
    bp = dedupe_points(proj[:, None], tol=tol)[:, 0]

    def section(t):
        return _slice_from_ranges(ranges, u, t, tol) / vol

    nodes = np.cos(np.pi * (np.arange(n + 2) + 0.5) / (n + 2))
    breaks: list[float] = [float(bp[0])]
    polys: list[Polynomial] = []
    for a, c in zip(bp[:-1], bp[1:]):
        mid, half = (a + c) / 2, (c - a) / 2
        xs = mid + half * nodes
        poly = Polynomial.fit(xs, [section(x) for x in xs], n - 1, domain=[a, c])
        probe = poly(np.linspace(a, c, 33))
        crit = []
        if n > 2 and np.ptp(probe) > 1e-10 * max(1e-300, float(np.max(np.abs(probe)))):
            crit = [
                r.real
                for r in poly.deriv().roots()
                if abs(r.imag) <= 1e-9 * half and a + 1e-6 * half < r.real < c - 1e-6 * half
            ]
        for r in sorted(crit):
            breaks.append(float(r))
            polys.append(poly)
        breaks.append(float(c))
        polys.append(poly)

    breaks_arr = np.asarray(breaks)
    left = np.zeros(len(breaks_arr))
    right = np.zeros(len(breaks_arr))
    for i, poly in enumerate(polys):
        right[i] = poly(breaks_arr[i])
        left[i + 1] = poly(breaks_arr[i + 1])
    left = np.maximum(left, 0.0)
    right = np.maximum(right, 0.0)
    mass = 0.0
    for i, poly in enumerate(polys):
        anti = poly.integ()
        mass += anti(breaks_arr[i + 1]) - anti(breaks_arr[i])

    def evaluate(t: float) -> float:
        t = float(t)
        if t < breaks_arr[0] - tol or t > breaks_arr[-1] + tol:
            return 0.0
        k = int(np.searchsorted(breaks_arr, t))
        near = [j for j in (k - 1, k) if 0 <= j < len(breaks_arr) and abs(breaks_arr[j] - t) <= tol]
        if near:
            return section(t)
        return float(polys[k - 1](t))

    return PiecewiseDensity(breaks_arr, evaluate, left, right, float(mass), polynomials=tuple(polys))


def midpoint_samples(U, u) -> SliceSamples:
    """Slices at the midpoints between consecutive marginal breakpoints."""
    U = as_union(U)
    profile = marginal_profile(U, u)
    bp = profile.breakpoints
    return sample_slices(U, u, (bp[:-1] + bp[1:]) / 2)


# ---------------------------------------------------------------------------
# maximal slices


def _ternary_max(func, lo: float, hi: float, tol: float, max_iter: int = 200):
    a, c = lo, hi
    for _ in range(max_iter):
        if c - a <= tol:
            break
        m1 = a + (c - a) / 3
        m2 = c - (c - a) / 3
        if func(m1) < func(m2):
            a = m1
        else:
            c = m2
    t = (a + c) / 2
    return t, func(t)


def max_slice_along(P: ConvexPolytope, u) -> tuple[float, float]:
    """(position, area) of the largest hyperplane section orthogonal to ``u``."""
    u = _unit(u)
    n = P.ambient_dim
    proj = P.vertices @ u
    lo, hi = float(proj.min()), float(proj.max())
    power = 1.0 / (n - 1)

    def g(t):
        return section_volume(P, u, t) ** power

    t, _ = _ternary_max(g, lo, hi, 1e-8 * (hi - lo))
    best_t, best = t, section_volume(P, u, t)
    # the maximum of a piecewise polynomial may sit on a vertex projection
    for cand in np.unique(proj):
        val = section_volume(P, u, cand)
        if val > best:
            best_t, best = float(cand), val
    return best_t, best


def max_slice(P, E) -> float:
    """Largest ``(n-r)``-volume of ``P ∩ (E^perp + t)`` over ``t`` in ``span(E)``.

    ``E`` holds r orthonormal rows.  For r = 1 this is a ternary search on the
    Brunn-Minkowski concave profile; for r >= 2 a cyclic ternary line search
    over coordinate and pairwise-diagonal directions of ``span(E)``.
    """
    if isinstance(P, PolyconvexSet):
        if len(P.pieces) != 1:
            raise TypeError("max_slice is defined for a single convex polytope, not a union")
        P = P.pieces[0]
    if not isinstance(P, ConvexPolytope):
        raise TypeError("max_slice expects a ConvexPolytope")
    E = np.atleast_2d(np.asarray(E, dtype=float))
    n = P.ambient_dim
    r = E.shape[0]
    if E.shape[1] != n:
        raise DimensionError("subspace basis lives in a different dimension")
    if r >= n or r < 1:
        raise DimensionError(f"subspace dimension r={r} must satisfy 1 <= r < n={n}")
    if not np.allclose(E @ E.T, np.eye(r), atol=1e-8):
        raise GeometryError("subspace basis is not orthonormal")
    if r == 1:
        return max_slice_along(P, E[0])[1]
    return _max_slice_flat(P, E)[1]


def _max_slice_flat(P: ConvexPolytope, E: np.ndarray, max_sweeps: int = 100):
    n, r = P.ambient_dim, E.shape[0]
    comp = orthonormal_complement(E)
    shadow = ConvexPolytope.from_vertices(P.vertices @ E.T)
    power = 1.0 / (n - r)

    def vol(t):
        sub = intersect_flat(P, AffineFlat(E.T @ t, comp))
        return 0.0 if sub is None else sub.volume

    dirs = [np.eye(r)[k] for k in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            for s in (1.0, -1.0):
                d = np.zeros(r)
                d[i], d[j] = 1.0, s
                dirs.append(d / np.sqrt(2.0))
    width = float(np.max(np.ptp(shadow.vertices, axis=0)))
    tol = 1e-8 * width
    t = shadow.vertices.mean(axis=0)
    best = vol(t)
    for _ in range(max_sweeps):
        moved = 0.0
        for d in dirs:
            # chord of the shadow along t + s d
            slope = shadow.A @ d
            room = shadow.b - shadow.A @ t
            with np.errstate(divide="ignore", invalid="ignore"):
                bounds = room / slope
            s_hi = np.min(bounds[slope > 1e-14], initial=np.inf)
            s_lo = np.max(bounds[slope < -1e-14], initial=-np.inf)
            s_lo, s_hi = min(s_lo, 0.0), max(s_hi, 0.0)
            s, _ = _ternary_max(lambda s: vol(t + s * d) ** power, s_lo, s_hi, tol)
            val = vol(t + s * d)
            if val > best:
                moved = max(moved, abs(s))
                best, t = val, t + s * d
        if moved < tol:
            break
    return t, best


# ---------------------------------------------------------------------------
# line intersections


def line_interval_counts(U, axis: int, bases, tol: float | None = None) -> np.ndarray:
    """Number of disjoint closed intervals cut from ``U`` by axis-parallel lines.

    ``bases`` has shape (N, n-1): the coordinates other than ``axis``.
    Intervals closer than ``tol`` are merged, so touching intervals count once.
    """
    U = as_union(U)
    n = U.ambient_dim
    tol = U.tol if tol is None else tol
    bases = np.atleast_2d(np.asarray(bases, dtype=float))
    if bases.shape[1] != n - 1:
        raise DimensionError(f"line bases need {n - 1} coordinates")
    others = [k for k in range(n) if k != axis]
    N = bases.shape[0]
    los, his = [], []
    for piece in U.pieces:
        coef = piece.A[:, axis]
        rhs = piece.b[None, :] - bases @ piece.A[:, others].T
        lo = np.full(N, -np.inf)
        hi = np.full(N, np.inf)
        ok = np.ones(N, dtype=bool)
        for k, c in enumerate(coef):
            if c > 1e-14:
                hi = np.minimum(hi, rhs[:, k] / c)
            elif c < -1e-14:
                lo = np.maximum(lo, rhs[:, k] / c)
            else:
                ok &= rhs[:, k] >= -tol
        ok &= hi >= lo - tol
        los.append(np.where(ok, lo, np.inf))
        his.append(np.where(ok, hi, -np.inf))
    lo = np.stack(los, axis=1)
    hi = np.stack(his, axis=1)
    order = np.argsort(lo, axis=1)
    lo = np.take_along_axis(lo, order, axis=1)
    hi = np.take_along_axis(hi, order, axis=1)
    count = np.zeros(N, dtype=int)
    reach = np.full(N, -np.inf)
    for k in range(lo.shape[1]):
        valid = np.isfinite(lo[:, k])
        fresh = valid & (lo[:, k] > reach + tol)
        count += fresh
        reach = np.where(valid, np.maximum(reach, hi[:, k]), reach)
    return count


def line_interval_count(U, axis: int, base: Sequence[float]) -> int:
    return int(line_interval_counts(U, axis, np.asarray(base, dtype=float)[None, :])[0])
