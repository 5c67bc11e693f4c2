"""Volume and surface-area inequalities evaluated on raw slice/projection data.

The evaluators take numbers, not bodies, so they apply to measured data.
The ``*_reports`` helpers wire them to a geometry and compare every bound
with the exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .brascamp_lieb import BLDatum, mg_optimize
from .errors import DegenerateWeights, GeometryError, TooManyDirections
from .fisher import l1_fisher_sampled
from .polytope import ConvexPolytope, PolyconvexSet, as_union, project, section_volume
from .slicing import SliceSamples, max_slice, midpoint_samples

MAX_DIRECTIONS = 24


def validity_tolerance(value: float) -> float:
    """Additive 1e-9 up to magnitude 1e3, relative 1e-12 * |value| beyond."""
    return 1e-9 if abs(value) <= 1e3 else 1e-12 * abs(value)


@dataclass
class BoundReport:
    bound_name: str
    kind: str  # "lower" or "upper"
    bound_value: float
    true_value: float | None = None
    reference: str = ""
    inputs_digest: dict = field(default_factory=dict)

    @property
    def slack(self) -> float | None:
        if self.true_value is None:
            return None
        if self.kind == "lower":
            return self.true_value - self.bound_value
        return self.bound_value - self.true_value

    @property
    def ratio(self) -> float | None:
        if self.true_value in (None, 0):
            return None
        return self.bound_value / self.true_value

    @property
    def valid(self) -> bool:
        if self.true_value is None:
            return True
        return self.slack >= -validity_tolerance(max(abs(self.true_value), abs(self.bound_value)))

    def to_dict(self) -> dict:
        return {
            "bound_name": self.bound_name,
            "kind": self.kind,
            "reference": self.reference,
            "bound_value": self.bound_value,
            "true_value": self.true_value,
            "slack": self.slack,
            "ratio": self.ratio,
            "valid": self.valid,
            "inputs_digest": self.inputs_digest,
        }


# ---------------------------------------------------------------------------
# raw evaluators


def volume_lower_bound(smax: Sequence[float], D: BLDatum, mg: float) -> float:
    """``(prod S_j^{c_j} / e^{n + M_g})^{1/(C-1)}`` from maximal slices."""
    smax = np.asarray(smax, dtype=float)
    if len(smax) != len(D.weights):
        raise GeometryError("need one maximal slice per subspace of the datum")
    if np.any(smax <= 0):
        raise GeometryError("maximal slices must be positive")
    C = D.total_weight
    if C <= 1 + 1e-12:
        raise DegenerateWeights(f"total weight C = {C} must exceed 1")
    log_num = float(np.dot(D.weights, np.log(smax)))
    return math.exp((log_num - D.ambient_dim - mg) / (C - 1))


def meyer_bound(origin_slices: Sequence[float], n: int) -> float:
    """``((n!/n^n) prod V_{n-1}(K ∩ e_i^perp))^{1/(n-1)}``."""
    s = np.asarray(origin_slices, dtype=float)
    if len(s) != n:
        raise GeometryError(f"need {n} coordinate slices")
    if np.any(s < 0):
        raise GeometryError("slice volumes must be nonnegative")
    if np.any(s == 0):
        return 0.0
    log_const = math.lgamma(n + 1) - n * math.log(n)
    return math.exp((log_const + float(np.log(s).sum())) / (n - 1))


def volume_upper_bound_projections(proj_volumes: Sequence[float], D: BLDatum, mg: float) -> float:
    """``e^{M_g} prod V_{r_j}(P_{E_j} K)^{c_j}``."""
    p = np.asarray(proj_volumes, dtype=float)
    if len(p) != len(D.weights):
        raise GeometryError("need one projection volume per subspace of the datum")
    if np.any(p <= 0):
        raise GeometryError("projection volumes must be positive")
    return math.exp(mg + float(np.dot(D.weights, np.log(p))))


def _areas(samples) -> np.ndarray:
    if isinstance(samples, SliceSamples):
        return samples.areas
    return np.asarray(samples, dtype=float).ravel()


def _variation(areas: np.ndarray) -> float:
    return float(np.abs(np.diff(np.concatenate([[0.0], areas, [0.0]]))).sum())


def surface_lower_bound(samples_per_axis: Sequence, body=None) -> float:
    """``(1/sqrt n) sum_i sum_j |alpha^i_j - alpha^i_{j+1}|`` over the n axes.

    Entries are SliceSamples or plain area sequences, one per coordinate
    axis (empty for an axis without slices).  With ``body`` every sample
    position is checked for continuity of the marginal.
    """
    n = len(samples_per_axis)
    if n == 0:
        return 0.0
    total = 0.0
    for samples in samples_per_axis:
        if body is not None and isinstance(samples, SliceSamples) and len(samples):
            U = as_union(body)
            total += U.volume * l1_fisher_sampled(samples, U.volume, body=U).value
        else:
            total += _variation(_areas(samples))
    return total / math.sqrt(n)


def direction_constant(us) -> float:
    """``max_{|v|=1} sum_j |v . u_j|``, by enumerating sign patterns."""
    U = np.atleast_2d(np.asarray(us, dtype=float))
    m = U.shape[0]
    if m < 1:
        raise GeometryError("need at least one direction")
    if m > MAX_DIRECTIONS:
        raise TooManyDirections(f"{m} directions exceed the sign-enumeration cap of {MAX_DIRECTIONS}")
    if m == 1:
        return float(np.linalg.norm(U[0]))
    # the first sign can be fixed: s and -s give the same norm
    best = 0.0
    rest = U[1:]
    chunk = 1 << 16
    total = 1 << (m - 1)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total))
        bits = ((codes[:, None] >> np.arange(m - 1)) & 1).astype(float)
        signs = 1.0 - 2.0 * bits
        sums = U[0] + signs @ rest
        best = max(best, float(np.max(np.linalg.norm(sums, axis=1))))
    return best


def surface_lower_bound_general(samples: Sequence[SliceSamples], total_volume: float, body=None) -> float:
    """``sum_j B_j / C`` for slices along arbitrary unit directions."""
    if not samples:
        return 0.0
    B = [total_volume * l1_fisher_sampled(s, total_volume, body=body).value for s in samples]
    return float(sum(B)) / direction_constant([s.direction for s in samples])


def coordinate_projection_areas(P: ConvexPolytope) -> np.ndarray:
    n = P.ambient_dim
    eye = np.eye(n)
    return np.array([project(P, np.delete(eye, i, axis=0)).volume for i in range(n)])


def betke_mcmullen_bounds(P: ConvexPolytope) -> tuple[float, float]:
    """(upper, lower) surface-area bounds from coordinate shadows."""
    proj = coordinate_projection_areas(P)
    return 2.0 * float(proj.sum()), math.sqrt(4.0 * float(np.sum(proj**2)))


def meyer_constant_ratio(n: int) -> float:
    """``(n!/n^n)^{1/(n-1)} / e^{-n/(n-1)}``: Meyer's constant over the max-slice one."""
    return math.exp((math.lgamma(n + 1) - n * math.log(n) + n) / (n - 1))


# ---------------------------------------------------------------------------
# wiring to geometry


def _single_convex(body) -> ConvexPolytope:
    if isinstance(body, ConvexPolytope):
        return body
    if isinstance(body, PolyconvexSet) and len(body.pieces) == 1:
        return body.pieces[0]
    raise TypeError("volume bounds need a single convex polytope")


def volume_bound_reports(body, datum: BLDatum | None = None, mg: float | None = None) -> list[BoundReport]:
    """Max-slice lower bound, Meyer, and projection upper bounds for a convex body."""
    P = _single_convex(body)
    n = P.ambient_dim
    vol = P.volume
    datum = BLDatum.axes(n) if datum is None else datum
    mg = mg_optimize(datum) if mg is None else mg
    reports = []

    smax = [max_slice(P, B) for B in datum.bases]
    reports.append(BoundReport(
        "max_slice_volume_lower", "lower", volume_lower_bound(smax, datum, mg), vol,
        "Brascamp-Lieb maximal-slice volume lower bound",
        {"smax": smax, "weights": list(datum.weights), "ranks": list(datum.ranks), "mg": mg},
    ))

    # Meyer needs central sections; recentre bodies that miss the origin
    origin = np.zeros(n)
    if not P.contains(origin)[0]:
        origin = np.array(P.interior_point)
    axis_slices = [section_volume(P, np.eye(n)[i], float(origin[i])) for i in range(n)]
    reports.append(BoundReport(
        "meyer_lower", "lower", meyer_bound(axis_slices, n), vol,
        "Meyer dual Loomis-Whitney (coordinate sections through the origin)",
        {"slices": axis_slices, "origin": origin.tolist()},
    ))

    proj = [project(P, B).volume for B in datum.bases]
    reports.append(BoundReport(
        "projection_volume_upper", "upper", volume_upper_bound_projections(proj, datum, mg), vol,
        "Ball projection upper bound",
        {"projections": proj, "weights": list(datum.weights), "mg": mg},
    ))

    if n >= 2:
        lw = BLDatum.coordinate_hyperplanes(n)
        shadows = coordinate_projection_areas(P).tolist()
        reports.append(BoundReport(
            "loomis_whitney_upper", "upper", volume_upper_bound_projections(shadows, lw, 0.0), vol,
            "Loomis-Whitney", {"projections": shadows},
        ))
    return reports


def surface_bound_reports(body, samples: Sequence[SliceSamples] | None = None) -> list[BoundReport]:
    """Slice-based surface lower bounds (and Betke-McMullen for convex bodies)."""
    U = as_union(body)
    n = U.ambient_dim
    area = U.surface_area
    vol = U.volume
    eye = np.eye(n)
    if samples is None:
        samples = [midpoint_samples(U, eye[i]) for i in range(n)]
    reports = []

    per_axis: list = [None] * n
    general = []
    for s in samples:
        axis = int(np.argmax(np.abs(s.direction)))
        if np.isclose(abs(s.direction[axis]), 1.0, atol=1e-12) and per_axis[axis] is None:
            per_axis[axis] = s
        else:
            general.append(s)
    if any(s is not None for s in per_axis):
        filled = [s if s is not None else [] for s in per_axis]
        reports.append(BoundReport(
            "slice_surface_lower", "lower", surface_lower_bound(filled, body=U), area,
            "L1-Fisher slice surface lower bound (coordinate hyperplanes)",
            {"samples": [s.to_dict() if isinstance(s, SliceSamples) else [] for s in filled], "volume": vol},
        ))
    if general:
        everything = [s for s in per_axis if s is not None] + general
        reports.append(BoundReport(
            "slice_surface_lower_general", "lower", surface_lower_bound_general(everything, vol, body=U), area,
            "L1-Fisher slice surface lower bound (general directions)",
            {"directions": [s.direction.tolist() for s in everything],
             "direction_constant": direction_constant([s.direction for s in everything])},
        ))
    if len(U.pieces) == 1:
        upper, lower = betke_mcmullen_bounds(U.pieces[0])
        reports.append(BoundReport("betke_mcmullen_upper", "upper", upper, area, "Betke-McMullen upper"))
        reports.append(BoundReport("betke_mcmullen_lower", "lower", lower, area, "Betke-McMullen reverse"))
    return reports
