"""The ``gtomo`` command line tool.

Exit codes: 0 when every bound and check is valid, 2 when a validity flag
failed, 1 on input errors.  Errors are reported as JSON with a
machine-readable ``code``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import surface_bound_reports, volume_bound_reports
from .brascamp_lieb import BLDatum, mg_optimize, validate_datum
from .errors import GtomoError, InvariantViolation, ParseError
from .fisher import check_superadditivity, l1_fisher_marginal, l1_fisher_sampled, l1_fisher_surface_form
from .io import bounds_csv, load_datum, load_geometry, load_samples, report_json
from .oracle import OracleConfig, epsilon_tv_quotient, mc_volume, nslice_integral
from .slicing import midpoint_samples

DEFAULT_SEED = OracleConfig.seed
ORACLE_RTOL = 0.01
MC_SIGMAS = 3.0


def body_summary(U) -> dict:
    lo, hi = U.bbox
    return {
        "dim": U.ambient_dim,
        "pieces": len(U.pieces),
        "volume": U.volume,
        "surface_area": U.surface_area,
        "bbox": [lo.tolist(), hi.tolist()],
    }


def fisher_results(U, samples=None, cfg: OracleConfig | None = None) -> list[dict]:
    """Every I_1 form along each coordinate axis (and each sampled direction)."""
    n = U.ambient_dim
    directions = [np.eye(n)[i] for i in range(n)]
    by_dir = {}
    for s in samples or []:
        key = tuple(np.round(s.direction, 12))
        by_dir[key] = s
        if not any(np.allclose(s.direction, d) for d in directions):
            directions.append(s.direction)
    out = []
    vol = U.volume
    for u in directions:
        out.append(l1_fisher_marginal(U, u).to_dict())
        out.append(l1_fisher_surface_form(U, u).to_dict())
        s = by_dir.get(tuple(np.round(u, 12))) or midpoint_samples(U, u)
        out.append(l1_fisher_sampled(s, vol, body=U).to_dict())
        if cfg is not None:
            out.append({"value": epsilon_tv_quotient(U, u, cfg), "form": "epsilon_quotient",
                        "direction": u.tolist(), "diagnostics": [["epsilon", cfg.epsilon]]})
    return out


def oracle_checks(U, cfg: OracleConfig, workers: int = 1) -> dict:
    """Cross-check exact values against Monte Carlo, the ε-quotient and the N_i integral."""
    n = U.ambient_dim
    est, se = mc_volume(U, cfg, workers=workers)
    vol = U.volume
    checks = [{
        "check": "mc_volume",
        "exact": vol,
        "estimate": est,
        "std_error": se,
        "passed": abs(est - vol) <= max(MC_SIGMAS * se, 1e-12 * max(vol, 1.0)),
    }]
    for i in range(n):
        u = np.eye(n)[i]
        surface = l1_fisher_surface_form(U, u).value
        eps = epsilon_tv_quotient(U, u, cfg)
        grid = nslice_integral(U, i, cfg)
        vals = [surface, eps, grid]
        spread = max(abs(a - b) / max(abs(a), abs(b), 1e-300) for a in vals for b in vals)
        checks.append({
            "check": f"fisher_axis_{i}",
            "surface_form": surface,
            "epsilon_quotient": eps,
            "nslice_integral": grid,
            "max_relative_gap": spread,
            "passed": spread <= ORACLE_RTOL,
        })
    sup = check_superadditivity(U)
    checks.append({"check": "superadditivity", **sup.to_dict()})
    return {"config": cfg.to_dict(), "checks": checks, "passed": all(c["passed"] for c in checks)}


def _single_piece(U) -> bool:
    return len(U.pieces) == 1


def _load_samples_arg(value):
    return load_samples(value) if value else None


def _cfg(args) -> OracleConfig:
    n_samples = args.mc_samples
    # ``verify --samples 1e6`` names a sample count rather than a samples file
    if args.command == "verify" and args.samples is not None and _is_number(args.samples):
        n_samples = int(float(args.samples))
    try:
        return OracleConfig(seed=args.seed, n_samples=n_samples, epsilon=args.epsilon, grid_resolution=args.grid)
    except GtomoError as exc:
        raise ParseError(f"oracle config: {exc}") from exc


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return not Path(text).exists()


def run(args) -> tuple[int, dict]:
    U = load_geometry(args.geometry)
    report: dict = {"body": body_summary(U), "bounds": [], "fisher": [], "oracle": {}}
    cmd = args.command
    samples = None
    if cmd != "verify" or (args.samples and not _is_number(args.samples)):
        samples = _load_samples_arg(args.samples)
    if samples:
        for s in samples:
            if len(s.direction) != U.ambient_dim:
                raise ParseError("samples: direction dimension differs from geometry")

    if cmd in ("volume-bound", "report"):
        if _single_piece(U):
            datum = load_datum(args.datum) if args.datum else BLDatum.axes(U.ambient_dim)
            if datum.ambient_dim != U.ambient_dim:
                raise ParseError("datum: dimension differs from geometry")
            status = validate_datum(datum)
            mg = mg_optimize(datum)
            report["datum"] = {**datum.to_dict(), "status": status.value, "mg": mg}
            report["bounds"] += [r.to_dict() for r in volume_bound_reports(U.pieces[0], datum, mg)]
        elif cmd == "volume-bound":
            raise InvariantViolation("volume bounds need a single convex polytope")
    if cmd in ("surface-bound", "report"):
        report["bounds"] += [r.to_dict() for r in surface_bound_reports(U, samples)]
    if cmd in ("fisher", "report"):
        report["fisher"] = fisher_results(U, samples, _cfg(args) if cmd == "fisher" else None)
    if cmd in ("verify", "report"):
        report["oracle"] = oracle_checks(U, _cfg(args), workers=args.workers)

    ok = all(b["valid"] for b in report["bounds"])
    if report["oracle"]:
        ok = ok and report["oracle"]["passed"]
    report["valid"] = ok
    return (0 if ok else 2), report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gtomo", description="Slice- and projection-based bounds for polytopes.")
    parser.add_argument("--version", action="version", version=f"gtomo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "volume-bound": "maximal-slice, Meyer and projection volume bounds",
        "surface-bound": "slice-based surface-area lower bounds",
        "fisher": "L1-Fisher information in every available form",
        "verify": "cross-check exact values against the brute-force oracles",
        "report": "everything above in one document",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("geometry", help="geometry JSON file")
        p.add_argument("--datum", help="Brascamp-Lieb datum JSON (default: coordinate axes)")
        p.add_argument("--samples", help="slice samples JSON; for verify a number sets the Monte Carlo count")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"oracle seed (default {DEFAULT_SEED})")
        p.add_argument("--mc-samples", type=lambda s: int(float(s)), default=OracleConfig.n_samples)
        p.add_argument("--epsilon", type=float, default=OracleConfig.epsilon,
                       help="perturbation as a fraction of the support width")
        p.add_argument("--grid", type=int, default=OracleConfig.grid_resolution)
        p.add_argument("--workers", type=int, default=1, help="threads for Monte Carlo sampling")
    return parser


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return report_json(report)
    if report["bounds"]:
        return bounds_csv(report["bounds"])
    rows = ["form,direction,value"]
    for f in report["fisher"]:
        rows.append(f"{f['form']},\"{json.dumps(f['direction'])}\",{f['value']!r}")
    for c in report.get("oracle", {}).get("checks", []):
        rows.append(f"{c['check']},,{c['passed']}")
    return "\n".join(rows) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = run(args)
    except GtomoError as exc:
        error = {"error": {"code": exc.code, "message": str(exc)}}
        for attr in ("position", "left", "right", "value"):
            if getattr(exc, attr, None) is not None:
                error["error"][attr] = getattr(exc, attr)
        print(json.dumps(error), file=sys.stdout)
        print(f"gtomo: {exc.code}: {exc}", file=sys.stderr)
        return 1
    text = _render(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
