"""Command line workbench.

Exit codes: 0 computed (whatever the verdict), 1 theorem-consistency violation,
2 invalid input. Reports are JSON on stdout; timing goes to stderr so that
reports stay byte-stable.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import DEFAULT_CATALOG, fixture_path
from .checkers import (
    SUITE_TITLES,
    exact_rokhlin_search,
    group_action_free,
    is_free,
    is_outer,
    is_saturated,
    theorem_suite,
    watatani_dims,
)
from .crossed import (
    build,
    check_expectation,
    comatrix_product_residual,
    dual_coaction,
    haar_projection_defect,
)
from .cstar import wedderburn
from .errors import (
    ConstructionError,
    HopfCrossError,
    InconsistencyError,
    InvalidInputError,
    NotCStarError,
    UnsupportedSizeError,
)
from .hopf import dual_dual_residual, verify_hopf_axioms
from .workbench import coaction_document, dumps, load

EXIT_OK, EXIT_INCONSISTENT, EXIT_INVALID = 0, 1, 2


def residual(x: float) -> float:
    """Two significant figures; anything below 1e-12 is reported as 0."""
    x = abs(float(x))
    return 0.0 if x < 1e-12 else float(f"{x:.2g}")


def vector(v, digits: int = 10) -> list:
    out = []
    for z in np.asarray(v, dtype=complex).ravel():
        re, im = round(float(z.real), digits), round(float(z.imag), digits)
        out.append([re + 0.0, im + 0.0])
    return out


def _residuals(d: dict) -> dict:
    return {k: residual(v) for k, v in sorted(d.items())}


def _need_coaction(wb):
    if wb.coaction is None:
        raise InvalidInputError([f"{wb.source or wb.name}: input defines no coaction"])
    return wb.coaction


# --------------------------------------------------------------------------- commands


def cmd_validate(wb, args) -> tuple[dict, int]:
    rep = {"valid": True}
    if wb.group is not None:
        rep["group"] = {"order": wb.group.order, "names": wb.group.names,
                        "abelian": wb.group.is_abelian()}
    if wb.algebra is not None:
        w = wedderburn(wb.algebra, wb.cfg)
        rep["algebra"] = {"dim": wb.algebra.dim, "blocks": list(w.block_sizes)}
    if wb.hopf0 is not None:
        h = verify_hopf_axioms(wb.hopf0, wb.cfg)
        hd = verify_hopf_axioms(wb.hopf0.dual, wb.cfg)
        rep["hopf"] = {"N": wb.hopf0.N, "axioms_ok": h.ok, "dual_axioms_ok": hd.ok,
                       "max_residual": residual(max(h.max_residual, hd.max_residual)),
                       "dual_dual_residual": residual(dual_dual_residual(wb.hopf0))}
    if wb.coaction is not None:
        cr = wb.coaction.report
        rep["coaction"] = {"ok": cr.ok, "span_dim": cr.span_dim, "expected_span_dim": cr.expected_span_dim,
                           "residuals": _residuals({k: v for k, v in cr.residuals.items()
                                                    if k != "nondegenerate"}),
                           "group_action": wb.coaction.group_action is not None}
    return rep, EXIT_OK


def cmd_free(wb, args):
    c = _need_coaction(wb)
    fr = is_free(c, cfg=wb.cfg)
    rep = {"free": fr.free, "intertwiner_dim": fr.intertwiner_dim, "expected_dim": fr.expected_space_dim,
           "commutant_route_free": fr.commutant_route_free, "relative_commutant_dim": fr.commutant_dim,
           "cond_exp_unique": fr.cond_exp_unique, "slice_dim": fr.slice_dim, "agreement": fr.agreement,
           "containment_residual": residual(fr.containment_residual),
           "witness": None if fr.witness is None else vector(fr.witness)}
    if c.group_action is not None:
        gf = group_action_free(c.group_action, wb.cfg)
        rep["group_action"] = {"free": gf.free, "element_intertwiner_dims": gf.dims}
    return rep, EXIT_OK


def cmd_outer(wb, args):
    c = _need_coaction(wb)
    ov = is_outer(c, wb.cfg, use_shortcut=not args.no_shortcut)
    rep = {"verdict": ov.verdict, "reason": ov.reason, "tier": ov.tier,
           "findings": [{"subgroup": f.subgroup, "status": f.status, "reason": f.reason,
                         "intertwiner_dims": f.intertwiner_dims} for f in ov.findings]}
    if ov.witness is not None:
        rep["witness"] = {"subgroup": ov.witness_subgroup, "u": vector(ov.witness),
                          "unitary_defect": residual(ov.witness_report.unitary_defect),
                          "conjugation_residual": residual(ov.witness_report.conjugation_residual),
                          "cocycle_residual": residual(ov.witness_report.cocycle_residual),
                          "verified": ov.witness_report.ok}
    return rep, EXIT_OK


def cmd_saturated(wb, args):
    c = _need_coaction(wb)
    sr = is_saturated(c, cfg=wb.cfg)
    return {"saturated": sr.saturated, "rank_vector_dual_image": list(sr.rank_vector_dual),
            "rank_vector_trivial_image": list(sr.rank_vector_trivial),
            "block_sizes": list(sr.block_sizes)}, EXIT_OK


def cmd_crossed(wb, args):
    c = _need_coaction(wb)
    cp = build(c, wb.cfg)
    er = check_expectation(cp)
    dc = dual_coaction(cp, wb.cfg)
    rep = {"dim": cp.dim, "blocks": list(cp.wedderburn.block_sizes),
           "presentation_residuals": _residuals(cp.residuals),
           "haar_projection_defect": residual(haar_projection_defect(cp)),
           "comatrix_product_residual": residual(comatrix_product_residual(cp)),
           "expectation": {"idempotence": residual(er.idempotence), "unital": residual(er.unital),
                           "bimodule": residual(er.bimodule),
                           "gram_min_eigenvalue": round(er.gram_min_eigenvalue, 10),
                           "ok": er.ok(wb.cfg)},
           "dual_coaction": {"ok": dc.report.ok, "residuals": _residuals(
               {k: v for k, v in dc.report.residuals.items() if k != "nondegenerate"})}}
    if args.emit:
        out = Path(args.emit)
        out.write_text(dumps(coaction_document(dc, name=f"dual-{wb.name}")), encoding="utf-8")
        rep["emitted"] = out.name
    return rep, EXIT_OK


def cmd_commutant(wb, args):
    c = _need_coaction(wb)
    cp = build(c, wb.cfg)
    left, right = watatani_dims(cp, cfg=wb.cfg)
    return {"relative_commutant_dim": left, "center_dim": len(wedderburn(c.algebra, wb.cfg).block_sizes),
            "dual_relative_commutant_dim": right, "dimensions_equal": left == right}, EXIT_OK


def cmd_cond_exp(wb, args):
    c = _need_coaction(wb)
    cp = build(c, wb.cfg)
    fr = is_free(c, cp, wb.cfg)
    er = check_expectation(cp)
    return {"unique": fr.cond_exp_unique, "slice_dim": fr.slice_dim,
            "relative_commutant_dim": fr.commutant_dim,
            "idempotence": residual(er.idempotence), "bimodule": residual(er.bimodule),
            "gram_min_eigenvalue": round(er.gram_min_eigenvalue, 10), "ok": er.ok(wb.cfg)}, EXIT_OK


def cmd_rokhlin(wb, args):
    c = _need_coaction(wb)
    rr = exact_rokhlin_search(c, wb.cfg)
    return {"found": rr.found, "projection": None if rr.projection is None else vector(rr.projection),
            "subset": None if rr.subset is None else list(rr.subset),
            "averaged": None if rr.averaged is None else vector(rr.averaged),
            "candidates_checked": rr.candidates,
            "note": "finite diagnostic over central projections, not a decision of the Rokhlin property"}, EXIT_OK


def cmd_suite(wb_list, args):
    entries = [(wb.name, _need_coaction(wb)) for wb in wb_list]
    cfg = wb_list[0].cfg if wb_list else None
    report = theorem_suite(entries, cfg) if cfg else theorem_suite(entries)
    rows = []
    for row in report.rows:
        rows.append({"name": row.name,
                     "cells": {k: {"status": cell.status, **_clean(cell.details)}
                               for k, cell in sorted(row.cells.items())}})
    counts = {s: sum(1 for r in report.rows for c in r.cells.values() if c.status == s)
              for s in ("pass", "fail", "n/a")}
    rep = {"checks": SUITE_TITLES, "entries": rows, "counts": counts, "all_pass": report.all_pass}
    return rep, EXIT_OK if report.all_pass else EXIT_INCONSISTENT


def _clean(d):
    if isinstance(d, dict):
        return {str(k): _clean(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_clean(v) for v in d]
    if isinstance(d, (np.bool_,)):
        return bool(d)
    if isinstance(d, (np.integer,)):
        return int(d)
    return d


COMMANDS = {
    "validate": (cmd_validate, "parse and verify an input file"),
    "free": (cmd_free, "decide freeness by three independent routes"),
    "outer": (cmd_outer, "three-valued outerness verdict with inner witnesses"),
    "saturated": (cmd_saturated, "compare the two images of 1 x| e by rank vectors"),
    "crossed": (cmd_crossed, "build the crossed product and check its structure"),
    "commutant": (cmd_commutant, "relative commutant dimensions for the basic and dual inclusions"),
    "cond-exp": (cmd_cond_exp, "uniqueness and properties of the canonical conditional expectation"),
    "rokhlin-diagnostic": (cmd_rokhlin, "search central projections with e . p = 1/N"),
    "suite": (cmd_suite, "run the theorem cross-checks on a catalog"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, metavar="RANK_TOL",
                        help="relative singular-value cutoff for rank decisions")
    common.add_argument("--eq-tol", type=float, default=None, metavar="EQ_TOL",
                        help="absolute tolerance for identities")
    parser = argparse.ArgumentParser(prog="hopfcross",
                                     description="Coactions of finite-dimensional C*-Hopf algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "suite":
            p.add_argument("files", nargs="*", help="input files (default: the built-in catalog)")
        else:
            p.add_argument("file", help="input JSON file (built-in fixtures may be named by file name)")
        if name == "crossed":
            p.add_argument("--emit", metavar="OUT", help="write the dual coaction on the crossed product")
        if name == "outer":
            p.add_argument("--no-shortcut", action="store_true",
                           help="skip the freeness shortcut and enumerate subgroups")
    return parser


def _overrides(args) -> dict:
    out = {}
    if args.tol is not None:
        out["rank_tol"] = args.tol
    if args.eq_tol is not None:
        out["eq_tol"] = args.eq_tol
    return out


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    start = time.perf_counter()
    func = COMMANDS[args.command][0]
    try:
        over = _overrides(args)
        try:
            from .linalg import ToleranceConfig
            ToleranceConfig(**over)
        except ValueError as exc:
            raise InvalidInputError([str(exc)]) from exc
        if args.command == "suite":
            files = args.files or [fixture_path(n) for n in DEFAULT_CATALOG]
            payload = [load(f, over) for f in files]
        else:
            payload = load(args.file, over)
        report, code = func(payload, args)
    except InvalidInputError as exc:
        for msg in exc.errors:
            print(f"invalid input: {msg}", file=stderr)
        return EXIT_INVALID
    except (InconsistencyError, ConstructionError) as exc:
        print(f"consistency violation: {exc}", file=stderr)
        return EXIT_INCONSISTENT
    except (NotCStarError, UnsupportedSizeError, HopfCrossError) as exc:
        print(f"invalid input: {exc}", file=stderr)
        return EXIT_INVALID
    report = {"command": args.command, **report}
    if args.command != "suite":
        report["input"] = payload.name
    stdout.write(json.dumps(report, sort_keys=True, indent=1) + "\n")
    print(f"runtime: {time.perf_counter() - start:.3f} s", file=stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
