"""Brute-force estimators used to cross-check the exact computations."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, EpsilonTooLarge, GeometryError
from .polytope import PolyconvexSet, as_union
from .slicing import _unit, line_interval_counts

BLOCK = 65536
MAX_EPSILON = 0.1


@dataclass(frozen=True)
class OracleConfig:
    """Oracle settings.

    ``epsilon`` is relative to the support width along the perturbation
    direction, so the same config suits bodies of any size.
    """

    seed: int = 20240607
    n_samples: int = 1_000_000
    epsilon: float = 1e-3
    grid_resolution: int = 512

    def __post_init__(self):
        if int(self.n_samples) < 10_000:
            raise GeometryError("n_samples must be at least 1e4")
        if not self.epsilon > 0:
            raise GeometryError("epsilon must be positive")
        if int(self.grid_resolution) < 64:
            raise GeometryError("grid_resolution must be at least 64")
        object.__setattr__(self, "seed", int(self.seed) & (2**64 - 1))
        object.__setattr__(self, "n_samples", int(self.n_samples))
        object.__setattr__(self, "grid_resolution", int(self.grid_resolution))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_samples": self.n_samples,
            "epsilon": self.epsilon,
            "grid_resolution": self.grid_resolution,
        }


def _block_hits(U: PolyconvexSet, lo, hi, seed: int, k: int, size: int) -> int:
    rng = np.random.default_rng(seed ^ k)
    pts = rng.uniform(lo, hi, size=(size, len(lo)))
    return int(np.count_nonzero(U.contains(pts, tol=0.0)))


def mc_volume(U, cfg: OracleConfig, workers: int = 1) -> tuple[float, float]:
    """Rejection sampling in the bounding box; returns (estimate, std error).

    Samples are drawn in fixed blocks and block k uses seed ``seed ^ k``,
    so the result does not depend on ``workers``.
    """
    U = as_union(U)
    lo, hi = U.bbox
    box_vol = float(np.prod(hi - lo))
    sizes = [BLOCK] * (cfg.n_samples // BLOCK)
    if cfg.n_samples % BLOCK:
        sizes.append(cfg.n_samples % BLOCK)
    jobs = list(enumerate(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(lambda job: _block_hits(U, lo, hi, cfg.seed, *job), jobs))
    else:
        hits = [_block_hits(U, lo, hi, cfg.seed, k, size) for k, size in jobs]
    p = sum(hits) / cfg.n_samples
    return box_vol * p, box_vol * float(np.sqrt(p * (1 - p) / cfg.n_samples))


def epsilon_tv_quotient(U, u, cfg: OracleConfig) -> float:
    """``V(U Δ (U + eps u)) / (eps V(U))`` computed exactly.

    The symmetric difference has volume ``2 (V(U ∪ (U + eps u)) - V(U))``;
    the union is evaluated by inclusion-exclusion over both copies.
    """
    U = as_union(U)
    u = _unit(u)
    if len(u) != U.ambient_dim:
        raise DimensionError("direction and body dimensions differ")
    if cfg.epsilon > MAX_EPSILON:
        raise EpsilonTooLarge(f"epsilon {cfg.epsilon} exceeds {MAX_EPSILON} of the support width")
    proj = U.vertices @ u
    eps = cfg.epsilon * float(proj.max() - proj.min())
    vol = U.volume
    both = PolyconvexSet(list(U.pieces) + [p.translate(eps * u) for p in U.pieces], max_pieces=2 * len(U.pieces))
    return 2.0 * (both.volume - vol) / (eps * vol)


def nslice_integral(U, axis: int, cfg: OracleConfig, chunk: int = 1 << 18) -> float:
    """Midpoint rule for ``(1/V) ∫ 2 N_axis(y) dy`` over the shadow's bounding box."""
    U = as_union(U)
    n = U.ambient_dim
    if not 0 <= axis < n:
        raise DimensionError(f"axis {axis} out of range for dimension {n}")
    lo, hi = U.bbox
    others = [k for k in range(n) if k != axis]
    res = cfg.grid_resolution
    axes = [lo[k] + (np.arange(res) + 0.5) * (hi[k] - lo[k]) / res for k in others]
    cell = float(np.prod([(hi[k] - lo[k]) / res for k in others]))
    shape = (res,) * (n - 1)
    count = res ** (n - 1)
    total = 0
    for start in range(0, count, chunk):
        idx = np.unravel_index(np.arange(start, min(start + chunk, count)), shape)
        bases = np.stack([ax[i] for ax, i in zip(axes, idx)], axis=1)
        total += int(line_interval_counts(U, axis, bases).sum())
    return 2.0 * total * cell / U.volume
