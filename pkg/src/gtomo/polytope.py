"""Convex polytopes, affine flats and finite unions of polytopes.

Polytopes are stored in H-representation (``A x <= b`` with unit-norm rows);
vertices are enumerated lazily with qhull.  Unions carry their
inclusion-exclusion expansion, computed once by a depth-first walk over the
nonempty intersections of their pieces.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from .errors import (
    DegeneratePolytope,
    DimensionError,
    EmptyPolytope,
    GeometryError,
    PieceCountTooLarge,
    UnboundedPolytope,
)

EPS_GEOM = 1e-9
MAX_PIECES = 20


# ---------------------------------------------------------------------------
# small numerical helpers


def orthonormal_complement(basis: np.ndarray) -> np.ndarray:
    """Rows spanning the orthogonal complement of the row space of ``basis``."""
    basis = np.atleast_2d(np.asarray(basis, dtype=float))
    return null_space(basis).T


def dedupe_points(points: np.ndarray, tol: float = EPS_GEOM) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return points
    # lexicographic order keeps the output deterministic
    order = np.lexsort(points.T[::-1])
    kept: list[np.ndarray] = []
    for p in points[order]:
        if not kept or np.min(np.max(np.abs(np.asarray(kept) - p), axis=1)) > tol:
            kept.append(p)
    return np.asarray(kept)


def hull_volume(points: np.ndarray) -> float:
    """k-volume of the convex hull of points in R^k (0 for degenerate input).

    Triangulates the hull boundary with qhull and sums the simplices of the
    fan from the vertex centroid.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or len(points) == 0:
        return 0.0
    k = points.shape[1]
    if k == 0:
        return 1.0
    if k == 1:
        return float(np.ptp(points[:, 0]))
    if len(points) <= k:
        return 0.0
    try:
        hull = ConvexHull(points)
    except (QhullError, ValueError):
        return 0.0
    centroid = points[hull.vertices].mean(axis=0)
    simplices = points[hull.simplices] - centroid
    return float(np.abs(np.linalg.det(simplices)).sum() / math.factorial(k))


def _normalize_rows(A: np.ndarray, b: np.ndarray, tol: float):
    norms = np.linalg.norm(A, axis=1)
    zero = norms <= tol
    if np.any(zero & (b < -tol)):
        return None
    keep = ~zero
    return A[keep] / norms[keep, None], b[keep] / norms[keep]


def chebyshev_center(A: np.ndarray, b: np.ndarray):
    """Center and radius of the largest inscribed ball; None if infeasible.

    Rows of ``A`` must have unit norm.  The radius is ``inf`` when the LP is
    unbounded, which only happens for unbounded polyhedra.
    """
    m, n = A.shape
    cost = np.zeros(n + 1)
    cost[-1] = -1.0
    A_ub = np.hstack([A, np.ones((m, 1))])
    bounds = [(None, None)] * n + [(0, None)]
    res = linprog(cost, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status == 2:
        return None
    if res.status == 3:
        return np.zeros(n), math.inf
    if res.status != 0:
        raise GeometryError(f"Chebyshev LP failed: {res.message}")
    return res.x[:n], float(res.x[-1])


def _is_bounded(A: np.ndarray) -> bool:
    # Stiemke: {d : A d <= 0} = {0}  iff  rank A = n and A^T lam = 0 for some lam > 0
    m, n = A.shape
    if m <= n or np.linalg.matrix_rank(A) < n:
        return False
    res = linprog(np.zeros(m), A_eq=A.T, b_eq=np.zeros(n), bounds=[(1, None)] * m, method="highs")
    return res.status == 0


def _axis_aligned(A: np.ndarray, tol: float) -> bool:
    big = np.abs(A) > tol
    return bool(np.all(big.sum(axis=1) == 1) and np.all(np.abs(np.abs(A[big]) - 1.0) <= tol))


def _box_bounds(A: np.ndarray, b: np.ndarray, tol: float):
    n = A.shape[1]
    lo = np.full(n, -np.inf)
    hi = np.full(n, np.inf)
    axis = np.argmax(np.abs(A), axis=1)
    for k, row, off in zip(axis, A, b):
        if row[k] > 0:
            hi[k] = min(hi[k], off)
        else:
            lo[k] = max(lo[k], -off)
    return lo, hi


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class AffineFlat:
    """``basepoint + span(basis rows)``; the basis is orthonormal."""

    basepoint: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        base = np.asarray(self.basepoint, dtype=float).ravel()
        B = np.atleast_2d(np.asarray(self.basis, dtype=float))
        if B.shape[1] != base.shape[0]:
            raise DimensionError("flat basis and basepoint live in different dimensions")
        if B.shape[0] < 1 or B.shape[0] > base.shape[0]:
            raise DimensionError("flat dimension must satisfy 1 <= k <= n")
        if not np.allclose(B @ B.T, np.eye(B.shape[0]), atol=1e-8):
            raise GeometryError("flat basis is not orthonormal")
        object.__setattr__(self, "basepoint", base)
        object.__setattr__(self, "basis", B)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @classmethod
    def hyperplane(cls, normal, offset: float) -> "AffineFlat":
        """The hyperplane ``{x : normal . x = offset}``."""
        normal = np.asarray(normal, dtype=float)
        scale = np.linalg.norm(normal)
        normal, offset = normal / scale, offset / scale
        return cls(normal * offset, orthonormal_complement(normal[None, :]))

    @classmethod
    def orthogonal_to(cls, subspace, point) -> "AffineFlat":
        """``subspace^perp + point``, the slicing flat for a subspace basis."""
        comp = orthonormal_complement(subspace)
        return cls(np.asarray(point, dtype=float), comp)

    def to_local(self, points: np.ndarray) -> np.ndarray:
        return (np.asarray(points, dtype=float) - self.basepoint) @ self.basis.T

    def to_ambient(self, coords: np.ndarray) -> np.ndarray:
        return self.basepoint + np.asarray(coords, dtype=float) @ self.basis


class ConvexPolytope:
    """Bounded, full-dimensional intersection of half-spaces ``A x <= b``.

    Rows are normalized on construction.  Empty, unbounded and
    lower-dimensional inputs are rejected.
    """

    def __init__(self, A, b, *, tol: float = EPS_GEOM, _center=None):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        b = np.asarray(b, dtype=float).ravel()
        if A.shape[0] != b.shape[0]:
            raise GeometryError("halfspace normals and offsets differ in count")
        normalized = _normalize_rows(A, b, tol)
        if normalized is None:
            raise EmptyPolytope("a constraint 0 <= b with b < 0 is infeasible")
        A, b = normalized
        self.tol = tol
        self._dim = A.shape[1]
        if _center is None:
            if A.shape[0] == 0:
                raise UnboundedPolytope("no constraints")
            found = chebyshev_center(A, b)
            if found is None:
                raise EmptyPolytope("half-spaces have empty intersection")
            center, radius = found
            if math.isinf(radius) or not _is_bounded(A):
                raise UnboundedPolytope("polytope has a recession direction")
            if radius <= tol * max(1.0, float(np.max(np.abs(b)))):
                raise DegeneratePolytope("polytope has empty interior")
            _center = center
        A.setflags(write=False)
        b.setflags(write=False)
        self.A = A
        self.b = b
        self._center = np.asarray(_center, dtype=float)

    # -- constructors -----------------------------------------------------

    @classmethod
    def box(cls, lo, hi) -> "ConvexPolytope":
        lo = np.asarray(lo, dtype=float).ravel()
        hi = np.asarray(hi, dtype=float).ravel()
        n = lo.shape[0]
        if np.any(hi - lo <= 0):
            raise DegeneratePolytope("box has a nonpositive side")
        eye = np.eye(n)
        A = np.vstack([eye, -eye])
        b = np.concatenate([hi, -lo])
        poly = cls(A, b, _center=(lo + hi) / 2)
        poly.__dict__["vertices"] = np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
        return poly

    @classmethod
    def from_vertices(cls, points, tol: float = EPS_GEOM) -> "ConvexPolytope":
        """Hull of a point cloud (V-representation input)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        n = points.shape[1]
        if n == 1:
            return cls.box([points.min()], [points.max()])
        try:
            hull = ConvexHull(points)
        except (QhullError, ValueError) as exc:
            raise DegeneratePolytope(f"vertex set is not full-dimensional: {exc}") from None
        A = hull.equations[:, :-1]
        b = -hull.equations[:, -1]
        keep = dedupe_points(np.hstack([A, b[:, None]]), tol=1e-10)
        return cls(keep[:, :-1], keep[:, -1], tol=tol)

    # -- basic properties -------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return self._dim

    @property
    def halfspaces(self):
        return [(a.copy(), float(c)) for a, c in zip(self.A, self.b)]

    @property
    def interior_point(self) -> np.ndarray:
        return self._center.copy()

    @cached_property
    def vertices(self) -> np.ndarray:
        return _enumerate_vertices(self.A, self.b, self._center, self.tol)

    @cached_property
    def bbox(self):
        V = self.vertices
        return V.min(axis=0), V.max(axis=0)

    @cached_property
    def volume(self) -> float:
        V = self.vertices
        if self._dim == 1:
            return float(np.ptp(V[:, 0]))
        vol = hull_volume(V)
        if vol <= 0:
            raise DegeneratePolytope("affine hull has dimension < n")
        return vol

    @cached_property
    def facets(self) -> list[tuple[np.ndarray, float, np.ndarray]]:
        """(unit outward normal, (n-1)-volume, facet vertices) per facet."""
        V = self.vertices
        n = self._dim
        scale = self.tol * max(1.0, float(np.max(np.abs(V))))
        rows = dedupe_points(np.hstack([self.A, self.b[:, None]]), tol=1e-12)
        out = []
        for row in rows:
            a, off = row[:-1], row[-1]
            on = np.abs(V @ a - off) <= scale
            pts = V[on]
            if len(pts) < n:
                continue
            comp = orthonormal_complement(a[None, :])
            area = hull_volume((pts - a * off) @ comp.T)
            if area > scale:
                out.append((a.copy(), area, pts))
        return out

    @property
    def surface_area(self) -> float:
        return float(sum(area for _, area, _ in self.facets))

    def contains(self, points, tol: float | None = None) -> np.ndarray:
        tol = self.tol if tol is None else tol
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(points @ self.A.T <= self.b + tol, axis=1)

    # -- transformations ----------------------------------------------------

    def translate(self, shift) -> "ConvexPolytope":
        shift = np.asarray(shift, dtype=float)
        out = ConvexPolytope(self.A, self.b + self.A @ shift, tol=self.tol, _center=self._center + shift)
        if "vertices" in self.__dict__:
            out.__dict__["vertices"] = self.vertices + shift
        return out

    def scale(self, factor: float) -> "ConvexPolytope":
        if factor <= 0:
            raise GeometryError("scale factor must be positive")
        out = ConvexPolytope(self.A, self.b * factor, tol=self.tol, _center=self._center * factor)
        if "vertices" in self.__dict__:
            out.__dict__["vertices"] = self.vertices * factor
        return out

    def linear_map(self, M, shift=None) -> "ConvexPolytope":
        """Image under ``x -> M x + shift`` for invertible ``M``."""
        M = np.asarray(M, dtype=float)
        shift = np.zeros(self._dim) if shift is None else np.asarray(shift, dtype=float)
        Minv = np.linalg.inv(M)
        A = self.A @ Minv
        out = ConvexPolytope(A, self.b + A @ shift, tol=self.tol, _center=M @ self._center + shift)
        return out

    def to_dict(self) -> dict:
        return {
            "dim": self._dim,
            "kind": "hrep",
            "halfspaces": [list(map(float, a)) + [float(c)] for a, c in zip(self.A, self.b)],
        }

    def __repr__(self):
        return f"ConvexPolytope(dim={self._dim}, halfspaces={len(self.b)})"


def _enumerate_vertices(A, b, center, tol) -> np.ndarray:
    n = A.shape[1]
    if n == 1:
        lo, hi = _box_bounds(A, b, tol)
        return np.array([[lo[0]], [hi[0]]])
    if _axis_aligned(A, tol):
        lo, hi = _box_bounds(A, b, tol)
        return np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
    try:
        hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
        pts = hs.intersections
    except QhullError:
        pts = _vertices_by_pivoting(A, b, tol)
    pts = pts[np.all(np.isfinite(pts), axis=1)]
    scale = max(1.0, float(np.max(np.abs(pts)))) if len(pts) else 1.0
    return dedupe_points(pts, tol=tol * scale * 10)


def _vertices_by_pivoting(A, b, tol) -> np.ndarray:
    """Fallback enumeration over all n-subsets of constraints."""
    m, n = A.shape
    found = []
    for rows in itertools.combinations(range(m), n):
        sub = A[list(rows)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, b[list(rows)])
        if np.all(A @ x <= b + tol * max(1.0, np.max(np.abs(x)))):
            found.append(x)
    return np.asarray(found).reshape(-1, n)


# ---------------------------------------------------------------------------
# functional surface


def enumerate_vertices(P: ConvexPolytope) -> np.ndarray:
    return P.vertices


def volume(P: ConvexPolytope) -> float:
    return P.volume


def facets(P: ConvexPolytope) -> list[tuple[np.ndarray, float]]:
    return [(normal, area) for normal, area, _ in P.facets]


def _restrict(A, b, flat: AffineFlat, tol):
    """Half-spaces ``A x <= b`` rewritten in the flat's coordinates."""
    A2 = A @ flat.basis.T
    b2 = b - A @ flat.basepoint
    norms = np.linalg.norm(A2, axis=1)
    zero = norms <= 1e-12
    if np.any(b2[zero] < -tol * max(1.0, float(np.max(np.abs(b))))):
        return None
    return A2[~zero], b2[~zero]


def _full_or_none(A, b, tol) -> ConvexPolytope | None:
    """A full-dimensional polytope, or None when empty or lower-dimensional."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return None
    normalized = _normalize_rows(A, b, tol)
    if normalized is None:
        return None
    A, b = normalized
    scale = tol * max(1.0, float(np.max(np.abs(b)))) if len(b) else tol
    if n == 1 or _axis_aligned(A, tol):
        lo, hi = _box_bounds(A, b, tol)
        if np.any(hi - lo <= scale):
            return None
        return ConvexPolytope.box(lo, hi)
    found = chebyshev_center(A, b)
    if found is None:
        return None
    center, radius = found
    if radius <= scale:
        return None
    return ConvexPolytope(A, b, tol=tol, _center=center)


def intersect_flat(P: ConvexPolytope, F: AffineFlat) -> ConvexPolytope | None:
    """``P ∩ F`` in flat coordinates; None if empty or lower-dimensional."""
    if F.basis.shape[1] != P.ambient_dim:
        raise DimensionError("flat and polytope dimensions differ")
    restricted = _restrict(P.A, P.b, F, P.tol)
    if restricted is None:
        return None
    return _full_or_none(*restricted, P.tol)


def intersect_flat_volume(P: ConvexPolytope, F: AffineFlat) -> float:
    sub = intersect_flat(P, F)
    return 0.0 if sub is None else sub.volume


def project(P: ConvexPolytope, S) -> ConvexPolytope:
    """Orthogonal projection onto ``span(S rows)``, in S coordinates."""
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if not np.allclose(S @ S.T, np.eye(S.shape[0]), atol=1e-8):
        raise GeometryError("projection basis is not orthonormal")
    return ConvexPolytope.from_vertices(P.vertices @ S.T, tol=P.tol)


def section_volume(P: ConvexPolytope, u, t: float) -> float:
    """(n-1)-volume of ``P ∩ {x . u = t}`` for unit ``u``.

    The section is the hull of the vertices on the hyperplane and of the
    crossing points of every segment joining vertices on opposite sides.
    """
    u = np.asarray(u, dtype=float)
    V = P.vertices
    s = V @ u - t
    scale = P.tol * max(1.0, float(np.max(np.abs(V))))
    on = np.abs(s) <= scale
    pos = np.flatnonzero(s > scale)
    neg = np.flatnonzero(s < -scale)
    n = P.ambient_dim
    if n == 1:
        return 1.0 if (on.any() or (len(pos) and len(neg))) else 0.0
    pts = [V[on]]
    if len(pos) and len(neg):
        sp = s[pos][:, None]
        sn = s[neg][None, :]
        w = (sp / (sp - sn))[..., None]
        cross = V[pos][:, None, :] + w * (V[neg][None, :, :] - V[pos][:, None, :])
        pts.append(cross.reshape(-1, n))
    pts = np.vstack(pts)
    if len(pts) < n:
        return 0.0
    comp = orthonormal_complement(u[None, :])
    return hull_volume(pts @ comp.T)


# ---------------------------------------------------------------------------
# unions


@dataclass(frozen=True)
class FlatPiece:
    """An (n-1)-dimensional intersection lying in ``{normal . x = offset}``."""

    normal: np.ndarray
    offset: float
    flat: AffineFlat
    polytope: ConvexPolytope
    A: np.ndarray
    b: np.ndarray

    @property
    def area(self) -> float:
        return self.polytope.volume


@dataclass(frozen=True)
class IETerm:
    """One nonempty intersection of pieces with its inclusion-exclusion sign."""

    indices: tuple[int, ...]
    polytope: ConvexPolytope | None = None
    flat: FlatPiece | None = None

    @property
    def sign(self) -> int:
        return 1 if len(self.indices) % 2 else -1


def _bboxes_meet(p, q, tol) -> bool:
    plo, phi = p
    qlo, qhi = q
    return bool(np.all(plo <= qhi + tol) and np.all(qlo <= phi + tol))


def _classify_intersection(A, b, tol):
    """('full', polytope) | ('flat', FlatPiece) | None for ``A x <= b``."""
    normalized = _normalize_rows(A, b, tol)
    if normalized is None:
        return None
    A, b = normalized
    n = A.shape[1]
    scale = tol * max(1.0, float(np.max(np.abs(b))))
    if _axis_aligned(A, tol):
        lo, hi = _box_bounds(A, b, tol)
        width = hi - lo
        if np.any(width < -scale):
            return None
        thin = np.flatnonzero(width <= scale)
        if len(thin) == 0:
            return "full", ConvexPolytope.box(lo, hi)
        if len(thin) > 1 or n == 1:
            return None
        k = thin[0]
        normal = np.zeros(n)
        normal[k] = 1.0
        return _make_flat(A, b, normal, (lo[k] + hi[k]) / 2, tol)
    found = chebyshev_center(A, b)
    if found is None:
        return None
    center, radius = found
    if radius > scale:
        return "full", ConvexPolytope(A, b, tol=tol, _center=center)
    if n == 1:
        return None
    # a positive-area contact needs an opposing pair of constraints
    gram = A @ A.T
    for i, j in zip(*np.nonzero(np.triu(gram < -1 + 1e-9, k=1))):
        if abs(b[i] + b[j]) <= scale:
            found_flat = _make_flat(A, b, A[i], b[i], tol)
            if found_flat is not None:
                return found_flat
    return None


def _make_flat(A, b, normal, offset, tol):
    flat = AffineFlat.hyperplane(normal, offset)
    restricted = _restrict(A, b, flat, tol)
    if restricted is None:
        return None
    poly = _full_or_none(*restricted, tol)
    if poly is None:
        return None
    return "flat", FlatPiece(np.asarray(normal, float), float(offset), flat, poly, A, b)


def _extend(node, piece: ConvexPolytope, tol):
    kind, data = node
    if kind == "full":
        if not _bboxes_meet(data.bbox, piece.bbox, tol * 10):
            return None
        return _classify_intersection(np.vstack([data.A, piece.A]), np.concatenate([data.b, piece.b]), tol)
    restricted = _restrict(piece.A, piece.b, data.flat, tol)
    if restricted is None:
        return None
    A = np.vstack([data.polytope.A, restricted[0]])
    b = np.concatenate([data.polytope.b, restricted[1]])
    poly = _full_or_none(A, b, tol)
    if poly is None:
        return None
    return "flat", FlatPiece(
        data.normal, data.offset, data.flat, poly,
        np.vstack([data.A, piece.A]), np.concatenate([data.b, piece.b]),
    )


def inclusion_exclusion_terms(pieces: Sequence[ConvexPolytope], tol: float = EPS_GEOM) -> list[IETerm]:
    """Every intersection of pieces that has positive n- or (n-1)-volume.

    Lower-dimensional intersections are pruned together with all their
    supersets, which cannot contribute to volumes, surface areas or
    hyperplane sections.
    """
    terms: list[IETerm] = []
    m = len(pieces)

    def visit(node, indices):
        kind, data = node
        if kind == "full":
            terms.append(IETerm(indices, polytope=data))
        else:
            terms.append(IETerm(indices, flat=data))
        for k in range(indices[-1] + 1, m):
            child = _extend(node, pieces[k], tol)
            if child is not None:
                visit(child, indices + (k,))

    for i, piece in enumerate(pieces):
        visit(("full", piece), (i,))
    return terms


class PolyconvexSet:
    """Finite union of full-dimensional convex polytopes."""

    def __init__(self, pieces: Iterable[ConvexPolytope], *, max_pieces: int = MAX_PIECES, tol: float = EPS_GEOM):
        pieces = tuple(pieces)
        if not pieces:
            raise GeometryError("a polyconvex set needs at least one piece")
        dims = {p.ambient_dim for p in pieces}
        if len(dims) != 1:
            raise DimensionError(f"pieces have mixed ambient dimensions {sorted(dims)}")
        self.pieces = pieces
        self.max_pieces = max_pieces
        self.tol = tol
        self._dim = dims.pop()

    @classmethod
    def of(cls, *pieces: ConvexPolytope, **kwargs) -> "PolyconvexSet":
        return cls(pieces, **kwargs)

    @property
    def ambient_dim(self) -> int:
        return self._dim

    def __len__(self):
        return len(self.pieces)

    def __repr__(self):
        return f"PolyconvexSet(dim={self._dim}, pieces={len(self.pieces)})"

    @cached_property
    def terms(self) -> list[IETerm]:
        if len(self.pieces) > self.max_pieces:
            raise PieceCountTooLarge(
                f"{len(self.pieces)} pieces exceed the inclusion-exclusion cap of {self.max_pieces}"
            )
        return inclusion_exclusion_terms(self.pieces, self.tol)

    @cached_property
    def volume(self) -> float:
        return float(sum(t.sign * t.polytope.volume for t in self.terms if t.polytope is not None))

    @cached_property
    def surface_area(self) -> float:
        total = 0.0
        for t in self.terms:
            if t.polytope is not None:
                total += t.sign * t.polytope.surface_area
            else:
                total += t.sign * 2.0 * t.flat.area
        return float(total)

    @cached_property
    def bbox(self):
        los, his = zip(*(p.bbox for p in self.pieces))
        return np.min(los, axis=0), np.max(his, axis=0)

    @cached_property
    def vertices(self) -> np.ndarray:
        """Vertices of every intersection term (a superset of the union's corners)."""
        pts = [t.polytope.vertices for t in self.terms if t.polytope is not None]
        pts += [t.flat.flat.to_ambient(t.flat.polytope.vertices) for t in self.terms if t.flat is not None]
        return np.vstack(pts)

    def contains(self, points, tol: float | None = None) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        inside = np.zeros(len(points), dtype=bool)
        for p in self.pieces:
            inside |= p.contains(points, tol)
        return inside

    def translate(self, shift) -> "PolyconvexSet":
        return PolyconvexSet([p.translate(shift) for p in self.pieces], max_pieces=self.max_pieces, tol=self.tol)

    def scale(self, factor: float) -> "PolyconvexSet":
        return PolyconvexSet([p.scale(factor) for p in self.pieces], max_pieces=self.max_pieces, tol=self.tol)

    def linear_map(self, M, shift=None) -> "PolyconvexSet":
        return PolyconvexSet([p.linear_map(M, shift) for p in self.pieces], max_pieces=self.max_pieces, tol=self.tol)

    def union(self, other: "PolyconvexSet") -> "PolyconvexSet":
        return PolyconvexSet(self.pieces + other.pieces, max_pieces=max(self.max_pieces, len(self.pieces) + len(other.pieces)), tol=self.tol)

    def to_dict(self) -> dict:
        if len(self.pieces) == 1:
            return self.pieces[0].to_dict()
        return {"dim": self._dim, "kind": "union", "pieces": [p.to_dict() for p in self.pieces]}

    @cached_property
    def boundary_facets(self) -> list[tuple[np.ndarray, float]]:
        """(outward normal, area) of the parts of piece facets on the union's boundary.

        A facet portion is discarded where another piece covers its outer
        side; coplanar duplicates are kept only for the lowest piece index.
        """
        if self._dim < 2:
            raise DimensionError("boundary facets need ambient dimension >= 2")
        out = []
        for i, piece in enumerate(self.pieces):
            for normal, area, _ in piece.facets:
                offset = float(np.max(piece.vertices @ normal))
                kept = area - self._covered_area(i, normal, offset)
                if kept > self.tol * max(1.0, area):
                    out.append((normal, kept))
        return out

    def _covered_area(self, i: int, normal: np.ndarray, offset: float) -> float:
        flat = AffineFlat.hyperplane(normal, offset)
        piece = self.pieces[i]
        face = intersect_flat(piece, flat)
        if face is None:
            return 0.0
        scale = self.tol * max(1.0, abs(offset)) * 10
        covers = []
        for j, other in enumerate(self.pieces):
            if j == i:
                continue
            heights = other.vertices @ normal
            if heights.max() > offset + scale:
                pass
            elif j < i and heights.max() >= offset - scale:
                pass
            else:
                continue
            restricted = _restrict(other.A, other.b, flat, self.tol)
            if restricted is None:
                continue
            shadow = _full_or_none(
                np.vstack([face.A, restricted[0]]), np.concatenate([face.b, restricted[1]]), self.tol
            )
            if shadow is not None:
                covers.append(shadow)
        if not covers:
            return 0.0
        return PolyconvexSet(covers, max_pieces=max(self.max_pieces, len(covers)), tol=self.tol).volume


def as_union(body) -> PolyconvexSet:
    if isinstance(body, PolyconvexSet):
        return body
    if isinstance(body, ConvexPolytope):
        return PolyconvexSet([body])
    raise TypeError(f"expected a polytope or polyconvex set, got {type(body).__name__}")


def union_volume(U) -> float:
    return as_union(U).volume


def union_surface_area(U) -> float:
    return as_union(U).surface_area
