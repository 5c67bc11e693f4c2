"""Brascamp-Lieb data and the Gaussian constant M_g.

For a Gaussian with covariance A the entropy gap ``h(X) - sum c_j h(P_j X)``
reduces, once ``sum c_j r_j = n``, to

    F(A) = 1/2 [log det A - sum_j c_j log det(B_j A B_j^T)]

where the rows of ``B_j`` are an orthonormal basis of ``E_j``.  F is
invariant under ``A -> lam A``; M_g is its supremum over A > 0.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import GeometryError, InvariantViolation, NonConvergence

SCALING_TOL = 1e-10
JOHN_TOL = 1e-10


class FinitenessStatus(enum.Enum):
    CERTIFIED = "Certified"
    PLAUSIBLY_FINITE = "PlausiblyFinite"
    INFINITE = "Infinite"

    @property
    def finite(self) -> bool:
        return self is not FinitenessStatus.INFINITE


@dataclass(frozen=True)
class BLDatum:
    """Subspaces ``E_j`` (orthonormal row bases) with weights ``c_j > 0``."""

    ambient_dim: int
    bases: tuple
    weights: tuple

    def __post_init__(self):
        n = int(self.ambient_dim)
        bases = tuple(np.atleast_2d(np.asarray(B, dtype=float)) for B in self.bases)
        weights = tuple(float(c) for c in self.weights)
        if len(bases) != len(weights) or not bases:
            raise GeometryError("a datum needs one weight per subspace and at least one subspace")
        for B in bases:
            if B.shape[1] != n:
                raise GeometryError(f"subspace basis has {B.shape[1]} columns, expected {n}")
            if not np.allclose(B @ B.T, np.eye(B.shape[0]), atol=1e-9):
                raise GeometryError("subspace basis is not orthonormal")
        if any(not c > 0 for c in weights):
            raise GeometryError("weights must be strictly positive")
        for B in bases:
            B.setflags(write=False)
        object.__setattr__(self, "ambient_dim", n)
        object.__setattr__(self, "bases", bases)
        object.__setattr__(self, "weights", weights)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(B.shape[0] for B in self.bases)

    @property
    def total_weight(self) -> float:
        """C = sum c_j."""
        return float(sum(self.weights))

    @property
    def scaling_sum(self) -> float:
        return float(sum(c * r for c, r in zip(self.weights, self.ranks)))

    @classmethod
    def axes(cls, n: int, weight: float = 1.0) -> "BLDatum":
        """The coordinate lines ``span(e_i)``."""
        eye = np.eye(n)
        return cls(n, tuple(eye[i : i + 1] for i in range(n)), (weight,) * n)

    @classmethod
    def coordinate_hyperplanes(cls, n: int, weight: float | None = None) -> "BLDatum":
        """``E_i = e_i^perp``, by default with the Loomis-Whitney weight 1/(n-1)."""
        eye = np.eye(n)
        weight = 1.0 / (n - 1) if weight is None else weight
        return cls(n, tuple(np.delete(eye, i, axis=0) for i in range(n)), (weight,) * n)

    @classmethod
    def rank_one(cls, directions, weights) -> "BLDatum":
        dirs = np.atleast_2d(np.asarray(directions, dtype=float))
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
        return cls(dirs.shape[1], tuple(d[None, :] for d in dirs), tuple(weights))

    def to_dict(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "subspaces": [{"basis": B.tolist(), "weight": c} for B, c in zip(self.bases, self.weights)],
        }


def john_matrix(D: BLDatum) -> np.ndarray:
    return sum(c * B.T @ B for B, c in zip(D.bases, D.weights))


def john_condition(D: BLDatum, tol: float = JOHN_TOL) -> bool:
    """True when ``sum c_j P_{E_j} = I`` entrywise within ``tol``."""
    return bool(np.max(np.abs(john_matrix(D) - np.eye(D.ambient_dim))) <= tol)


def _probe_subspaces(D: BLDatum, dim: int, rng: np.random.Generator, n_random: int, max_structured: int):
    n = D.ambient_dim
    for _ in range(n_random):
        q, _ = np.linalg.qr(rng.normal(size=(n, dim)))
        yield q
    # spans of datum basis vectors and their complements are where the
    # dimension condition is tight; random subspaces are generic
    pool = [row for B in D.bases for row in B]
    for B in D.bases:
        if B.shape[0] < n:
            pool.extend(np.linalg.svd(B)[2][B.shape[0]:])
    pool = np.asarray(pool)
    for count, combo in enumerate(itertools.combinations(range(len(pool)), dim)):
        if count >= max_structured:
            break
        vecs = pool[list(combo)].T
        if np.linalg.matrix_rank(vecs, tol=1e-9) < dim:
            continue
        q, _ = np.linalg.qr(vecs)
        yield q


def validate_datum(D: BLDatum, n_probes: int = 200, seed: int = 0, max_structured: int = 2000) -> FinitenessStatus:
    """Classify finiteness of M_g.

    The scaling condition is checked exactly; John data are certified; the
    subspace-dimension condition is probed on random and structured
    subspaces, so a pass is only ever PLAUSIBLY_FINITE.
    """
    n = D.ambient_dim
    if abs(D.scaling_sum - n) > SCALING_TOL:
        return FinitenessStatus.INFINITE
    if john_condition(D):
        return FinitenessStatus.CERTIFIED
    rng = np.random.default_rng(seed)
    for dim in range(1, n):
        for Q in _probe_subspaces(D, dim, rng, n_probes, max_structured):
            projected = sum(c * np.linalg.matrix_rank(B @ Q, tol=1e-9) for B, c in zip(D.bases, D.weights))
            if dim > projected + SCALING_TOL:
                return FinitenessStatus.INFINITE
    return FinitenessStatus.PLAUSIBLY_FINITE


def gaussian_objective(D: BLDatum, A: np.ndarray) -> float:
    """``1/2 [log det A - sum c_j log det(B_j A B_j^T)]``."""
    sign, logdet = np.linalg.slogdet(A)
    if sign <= 0:
        return -np.inf
    total = logdet
    for B, c in zip(D.bases, D.weights):
        s, ld = np.linalg.slogdet(B @ A @ B.T)
        if s <= 0:
            return -np.inf
        total -= c * ld
    return 0.5 * total


def _objective_gradient(D: BLDatum, A: np.ndarray) -> np.ndarray:
    G = np.linalg.inv(A)
    for B, c in zip(D.bases, D.weights):
        G = G - c * B.T @ np.linalg.solve(B @ A @ B.T, B)
    return 0.5 * (G + G.T) / 2


@dataclass
class MgRun:
    start: str
    value: float
    iterations: int
    last_improvement: float
    covariance: np.ndarray = field(repr=False)


def _ascend(D: BLDatum, L: np.ndarray, iterations: int, start: str) -> MgRun:
    n = D.ambient_dim

    def value(L):
        return gaussian_objective(D, L @ L.T)

    def normalize(L):
        # the objective is scale invariant; pin det L = 1 to stop drift
        det = abs(np.linalg.det(L))
        return L / det ** (1.0 / n) if det > 0 else L

    L = normalize(L)
    f = value(L)
    step = 1.0
    last = 0.0
    it = 0
    for it in range(1, iterations + 1):
        grad = 2.0 * _objective_gradient(D, L @ L.T) @ L
        gnorm2 = float(np.sum(grad * grad))
        if gnorm2 < 1e-28:
            last = 0.0
            break
        while True:
            trial = normalize(L + step * grad)
            ft = value(trial)
            if np.isfinite(ft) and ft >= f + 1e-4 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-16:
                trial, ft = L, f
                break
        last = ft - f
        L, f = trial, ft
        if last <= 0:
            break
        step = min(step * 2.0, 1e6)
    return MgRun(start, float(f), it, float(last), L @ L.T)


def mg_runs(D: BLDatum, n_starts: int = 8, iterations: int = 500, seed: int = 0) -> list[MgRun]:
    """Gradient ascent on ``A = L L^T`` from the identity and seeded random starts."""
    n = D.ambient_dim
    runs = [_ascend(D, np.eye(n), iterations, "identity")]
    rng = np.random.default_rng(seed)
    for k in range(n_starts):
        L = np.tril(rng.normal(size=(n, n)))
        L[np.diag_indices(n)] = np.abs(L[np.diag_indices(n)]) + 0.1
        runs.append(_ascend(D, L, iterations, f"seed{k}"))
    return runs


def mg_optimize(
    D: BLDatum,
    *,
    n_starts: int = 8,
    iterations: int = 500,
    seed: int = 0,
    shortcut: bool = True,
    improvement_tol: float = 1e-7,
) -> float:
    """Best value of the Gaussian objective over multi-start ascent.

    John data return 0 without iterating when ``shortcut`` is set.  Raises
    NonConvergence if the best run is still improving by more than
    ``improvement_tol`` at the iteration cap.
    """
    status = validate_datum(D)
    if not status.finite:
        raise InvariantViolation("Brascamp-Lieb datum is infinite; M_g = +inf")
    if shortcut and status is FinitenessStatus.CERTIFIED:
        return 0.0
    runs = mg_runs(D, n_starts=n_starts, iterations=iterations, seed=seed)
    best = max(runs, key=lambda r: r.value)
    if best.iterations >= iterations and best.last_improvement > improvement_tol:
        raise NonConvergence(
            f"objective still improving by {best.last_improvement:.3g} after {iterations} iterations"
        )
    return best.value
