"""JSON and CSV (de)serialization for geometry, data and reports."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .brascamp_lieb import BLDatum
from .errors import GeometryError, GtomoError, InvariantViolation, ParseError
from .polytope import ConvexPolytope, PolyconvexSet
from .slicing import SliceSamples


def _read_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _matrix(value, where: str, width: int | None = None) -> np.ndarray:
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{where}: expected a list of numeric rows") from exc
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise ParseError(f"{where}: expected a non-empty list of rows")
    if width is not None and arr.shape[1] != width:
        raise ParseError(f"{where}: rows have {arr.shape[1]} entries, expected {width}")
    if not np.all(np.isfinite(arr)):
        raise ParseError(f"{where}: non-finite number")
    return arr


def _piece(doc: dict, dim: int, where: str) -> ConvexPolytope:
    kind = doc.get("kind")
    try:
        if kind == "hrep":
            rows = _matrix(doc.get("halfspaces"), f"{where}.halfspaces", dim + 1)
            A, b = rows[:, :dim], rows[:, dim]
            norms = np.linalg.norm(A, axis=1)
            zero = np.flatnonzero(norms == 0)
            if zero.size:
                raise ParseError(f"{where}.halfspaces[{zero[0]}]: zero normal vector")
            return ConvexPolytope(A / norms[:, None], b / norms)
        if kind == "vrep":
            pts = _matrix(doc.get("vertices"), f"{where}.vertices", dim)
            return ConvexPolytope.from_vertices(pts)
    except ParseError:
        raise
    except GeometryError as exc:
        raise InvariantViolation(f"{where}: {exc.code}: {exc}") from exc
    raise ParseError(f"{where}.kind: expected 'hrep' or 'vrep', got {kind!r}")


def parse_geometry(doc) -> PolyconvexSet:
    """Build a polyconvex set from a geometry document (hrep, vrep or union)."""
    if not isinstance(doc, dict):
        raise ParseError("geometry: expected a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"geometry.dim: expected a positive integer, got {dim!r}")
    if doc.get("kind") == "union":
        pieces = doc.get("pieces")
        if not isinstance(pieces, list) or not pieces:
            raise ParseError("geometry.pieces: expected a non-empty list")
        for i, p in enumerate(pieces):
            if not isinstance(p, dict):
                raise ParseError(f"geometry.pieces[{i}]: expected an object")
            if p.get("dim", dim) != dim:
                raise ParseError(f"geometry.pieces[{i}].dim: {p.get('dim')} differs from {dim}")
        parts = [_piece(p, dim, f"geometry.pieces[{i}]") for i, p in enumerate(pieces)]
    else:
        parts = [_piece(doc, dim, "geometry")]
    return PolyconvexSet(parts)


def load_geometry(path) -> PolyconvexSet:
    return parse_geometry(_read_json(path))


def dump_geometry(U, path=None) -> dict:
    doc = U.to_dict()
    if path is not None:
        Path(path).write_text(json.dumps(doc, indent=2))
    return doc


def parse_datum(doc) -> BLDatum:
    if not isinstance(doc, dict):
        raise ParseError("datum: expected a JSON object")
    dim = doc.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"datum.dim: expected a positive integer, got {dim!r}")
    subs = doc.get("subspaces")
    if not isinstance(subs, list) or not subs:
        raise ParseError("datum.subspaces: expected a non-empty list")
    bases, weights = [], []
    for i, s in enumerate(subs):
        if not isinstance(s, dict) or "basis" not in s or "weight" not in s:
            raise ParseError(f"datum.subspaces[{i}]: expected an object with 'basis' and 'weight'")
        bases.append(_matrix(s["basis"], f"datum.subspaces[{i}].basis", dim))
        try:
            weights.append(float(s["weight"]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"datum.subspaces[{i}].weight: not a number") from exc
    try:
        return BLDatum(dim, bases, weights)
    except GeometryError as exc:
        raise InvariantViolation(f"datum: {exc}") from exc


def load_datum(path) -> BLDatum:
    return parse_datum(_read_json(path))


def parse_samples(doc) -> list[SliceSamples]:
    """A single samples object or a list of them."""
    docs = doc if isinstance(doc, list) else [doc]
    out = []
    for i, d in enumerate(docs):
        if not isinstance(d, dict) or not {"direction", "positions", "areas"} <= d.keys():
            raise ParseError(f"samples[{i}]: expected 'direction', 'positions' and 'areas'")
        try:
            out.append(SliceSamples(np.asarray(d["direction"], dtype=float), d["positions"], d["areas"]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"samples[{i}]: non-numeric entry") from exc
        except GtomoError as exc:
            raise InvariantViolation(f"samples[{i}]: {exc}") from exc
    return out


def load_samples(path) -> list[SliceSamples]:
    return parse_samples(_read_json(path))


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, default=_default)


CSV_FIELDS = ["bound_name", "kind", "reference", "bound_value", "true_value", "slack", "ratio", "valid"]


def bounds_csv(bounds: list[dict]) -> str:
    """One row per bound report."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in bounds:
        writer.writerow(row)
    return buf.getvalue()
