"""L1-Fisher information of uniform densities on polyconvex sets.

Three routes are provided: the closed form for piecewise monotone 1-D
densities (jumps plus monotone variation), the certified lower bound from
finitely many slices, and the facet form ``(1/V) sum_F |n_F . u| area(F)``
over the boundary of the union.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DimensionError, DiscontinuousSamplePoint, GeometryError, SuperadditivityViolation
from .polytope import as_union
from .slicing import PiecewiseDensity, SliceSamples, _unit, marginal_profile

FORMS = ("closed_form", "surface_integral", "sampled_lower_bound", "epsilon_quotient")


@dataclass(frozen=True)
class FisherResult:
    value: float
    form: str
    direction: object = None
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        if self.form not in FORMS:
            raise ValueError(f"unknown Fisher form {self.form!r}")
        if not self.value >= -1e-12:
            raise ValueError(f"L1-Fisher information must be nonnegative, got {self.value}")

    def to_dict(self) -> dict:
        direction = self.direction
        if isinstance(direction, np.ndarray):
            direction = direction.tolist()
        return {
            "value": float(self.value),
            "form": self.form,
            "direction": direction,
            "diagnostics": [[_jsonable(loc), float(mag)] for loc, mag in self.diagnostics],
        }


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    return x


def l1_fisher_piecewise(f: PiecewiseDensity, *, check: bool = True, direction=None) -> FisherResult:
    """Total variation of a piecewise monotone density from its one-sided limits."""
    if check:
        f.check_monotone()
    bp, left, right = f.breakpoints, f.left_limits, f.right_limits
    diagnostics = []
    total = 0.0
    # monotone variation on (-inf, a_1), (a_i, a_{i+1}), (a_M, inf)
    starts = np.concatenate([[0.0], right])
    ends = np.concatenate([left, [0.0]])
    edges = np.concatenate([[-np.inf], bp, [np.inf]])
    for k, (s, e) in enumerate(zip(starts, ends)):
        var = abs(e - s)
        total += var
        if var > 0:
            lo, hi = edges[k], edges[k + 1]
            loc = float((lo + hi) / 2) if np.isfinite(lo) and np.isfinite(hi) else float(lo if np.isfinite(lo) else hi)
            diagnostics.append((loc, var))
    for a, lft, rgt in zip(bp, left, right):
        jump = abs(rgt - lft)
        total += jump
        if jump > 0:
            diagnostics.append((float(a), jump))
    return FisherResult(float(total), "closed_form", direction, diagnostics)


def _check_continuity(samples: SliceSamples, total_volume: float, profile: PiecewiseDensity, rtol: float) -> None:
    bp = profile.breakpoints
    width = max(float(bp[-1] - bp[0]), 1.0)
    near_tol = 1e-9 * width
    for theta, area in zip(samples.positions, samples.areas):
        k = int(np.argmin(np.abs(bp - theta)))
        if abs(bp[k] - theta) > near_tol:
            continue
        value = area / total_volume
        lft, rgt = profile.left_limits[k], profile.right_limits[k]
        scale = max(abs(lft), abs(rgt), abs(value), 1e-300)
        if max(abs(lft - rgt), abs(value - lft), abs(value - rgt)) > rtol * scale:
            raise DiscontinuousSamplePoint(
                f"sample at {theta:.12g} sits on a discontinuity of the marginal "
                f"(left {lft:.12g}, right {rgt:.12g}, sampled {value:.12g})",
                position=float(theta), left=float(lft), right=float(rgt), value=float(value),
            )


def l1_fisher_sampled(
    samples: SliceSamples,
    total_volume: float,
    *,
    body=None,
    profile: PiecewiseDensity | None = None,
    rtol: float = 1e-8,
) -> FisherResult:
    """Lower bound ``sum_j |alpha_{j+1} - alpha_j| / V`` with zero padding.

    When the body (or its marginal along the sample direction) is supplied,
    every sample position is checked against the marginal's breakpoints and
    a DiscontinuousSamplePoint is raised where the bound would be unsound.
    """
    if not total_volume > 0:
        raise GeometryError("total volume must be positive")
    if profile is None and body is not None:
        profile = marginal_profile(body, samples.direction)
    if profile is not None and len(samples):
        _check_continuity(samples, total_volume, profile, rtol)
    padded = np.concatenate([[0.0], samples.areas, [0.0]])
    steps = np.abs(np.diff(padded)) / total_volume
    locs = np.concatenate([samples.positions, [np.inf]])
    diagnostics = [(float(loc), float(s)) for loc, s in zip(locs, steps) if s > 0]
    return FisherResult(float(steps.sum()), "sampled_lower_bound", samples.direction, diagnostics)


def l1_fisher_surface_form(U, u) -> FisherResult:
    """``(1/V) * sum over boundary facets of |n . u| * area``."""
    U = as_union(U)
    u = _unit(u)
    if len(u) != U.ambient_dim:
        raise DimensionError("direction and body dimensions differ")
    vol = U.volume
    diagnostics = []
    total = 0.0
    for normal, area in U.boundary_facets:
        contrib = abs(float(normal @ u)) * area / vol
        if contrib > 0:
            diagnostics.append((normal, contrib))
        total += contrib
    return FisherResult(float(total), "surface_integral", u, diagnostics)


def l1_fisher_total(U) -> FisherResult:
    """Sum of the facet form over the coordinate axes, ``(1/V) int ||n||_1 dS``."""
    U = as_union(U)
    n = U.ambient_dim
    parts = [l1_fisher_surface_form(U, np.eye(n)[i]) for i in range(n)]
    diagnostics = [(i, p.value) for i, p in enumerate(parts)]
    return FisherResult(float(sum(p.value for p in parts)), "surface_integral", "total", diagnostics)


def l1_fisher_marginal(U, u) -> FisherResult:
    """Closed form of I_1(X . u) from the exact marginal profile."""
    u = _unit(u)
    return l1_fisher_piecewise(marginal_profile(U, u), direction=u)


@dataclass
class SuperadditivityReport:
    directions: list
    marginal: list
    body: list
    sum_marginal: float | None
    sum_body: float | None
    tol: float

    @property
    def gaps(self) -> list:
        return [b - m for m, b in zip(self.marginal, self.body)]

    @property
    def passed(self) -> bool:
        ok = all(m <= b + self.tol * max(1.0, abs(b)) for m, b in zip(self.marginal, self.body))
        if self.sum_body is not None:
            ok = ok and self.sum_marginal <= self.sum_body + self.tol * max(1.0, abs(self.sum_body))
        return ok

    def to_dict(self) -> dict:
        return {
            "directions": [np.asarray(d).tolist() for d in self.directions],
            "marginal": self.marginal,
            "body": self.body,
            "gaps": self.gaps,
            "sum_marginal": self.sum_marginal,
            "sum_body": self.sum_body,
            "passed": self.passed,
        }


def check_superadditivity(U, directions: Sequence | None = None, tol: float = 1e-8) -> SuperadditivityReport:
    """Compare I_1(X . u) with I_1(X)_u per direction; sums when all axes are given."""
    U = as_union(U)
    n = U.ambient_dim
    if directions is None:
        directions = list(np.eye(n))
    directions = [_unit(d) for d in directions]
    marg, body = [], []
    for u in directions:
        m = l1_fisher_marginal(U, u).value
        b = l1_fisher_surface_form(U, u).value
        if m > b + tol * max(1.0, abs(b)):
            raise SuperadditivityViolation(
                f"I_1(X.u) = {m:.12g} exceeds I_1(X)_u = {b:.12g} for u = {u.tolist()}",
                direction=u, marginal=m, body=b,
            )
        marg.append(m)
        body.append(b)
    axes = {int(np.argmax(np.abs(d))) for d in directions if np.isclose(np.max(np.abs(d)), 1.0)}
    sum_m = sum_b = None
    if axes == set(range(n)) and len(directions) == n:
        sum_m, sum_b = float(sum(marg)), float(sum(body))
        if sum_m > sum_b + tol * max(1.0, sum_b):
            raise SuperadditivityViolation(
                f"sum of marginal informations {sum_m:.12g} exceeds I_1(X) = {sum_b:.12g}",
                marginal=sum_m, body=sum_b,
            )
    return SuperadditivityReport(directions, marg, body, sum_m, sum_b, tol)
