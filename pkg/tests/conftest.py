import itertools

import numpy as np
import pytest

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record(key: str, passed: bool, detail: str) -> None:
    ACCEPTANCE[key] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
        passed, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {key}: {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def brute_vertices(A, b, tol=1e-9):
    """Every feasible intersection of n constraint hyperplanes."""
    n = A.shape[1]
    pts = []
    for rows in itertools.combinations(range(len(b)), n):
        M = A[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, b[list(rows)])
        if np.all(A @ x <= b + tol):
            pts.append(x)
    pts = np.array(pts)
    keep = []
    for p in pts:
        if not any(np.allclose(p, q, atol=1e-8) for q in keep):
            keep.append(p)
    return np.array(keep)


def box_union_exact(boxes):
    """Volume and surface area of a union of axis-aligned boxes on the compressed grid.

    ``boxes`` is a list of (lo, hi) pairs.  Every cell of the grid spanned by
    all box coordinates is either inside or outside; the surface is the total
    area of cell faces separating inside from outside.
    """
    n = len(boxes[0][0])
    coords = [np.unique(np.concatenate([[lo[k], hi[k]] for lo, hi in boxes])) for k in range(n)]
    mids = [(c[:-1] + c[1:]) / 2 for c in coords]
    widths = [np.diff(c) for c in coords]
    grids = np.meshgrid(*mids, indexing="ij")
    inside = np.zeros(grids[0].shape, dtype=bool)
    for lo, hi in boxes:
        cell = np.ones_like(inside)
        for k in range(n):
            cell &= (grids[k] > lo[k]) & (grids[k] < hi[k])
        inside |= cell
    w = np.meshgrid(*widths, indexing="ij")
    cell_vol = np.prod(w, axis=0)
    volume = float(cell_vol[inside].sum())
    surface = 0.0
    for k in range(n):
        face = cell_vol / w[k]
        padded = np.pad(inside, [(1, 1) if j == k else (0, 0) for j in range(n)])
        change = np.diff(padded.astype(int), axis=k) != 0
        # each changing face borders exactly one cell; take its cross-section
        face_pad = np.concatenate([face.take([0], axis=k), face], axis=k)
        surface += float(face_pad[change].sum())
    return volume, surface
