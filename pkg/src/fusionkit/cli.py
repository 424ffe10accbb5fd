"""``fusionkit`` command-line interface.

Exit codes: 0 every check passed, 1 a check failed, 2 bad input,
3 a capacity or numerical limit was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import fixtures
from .canonical import canonical_key
from .characters import FiniteGroup
from .checks import Check
from .classifier import DimensionProfile, classify
from .doubles import double_modular_data
from .errors import (CapacityError, FusionkitError, InputError, NumericalError,
                     VerificationError)
from .fusion_core import FusionRing, _read_json, fp_dimensions, invertibles, is_nilpotent, \
    validate_fusion_ring
from .grading import PointedCochain, component_dimensions, graded_twist, universal_grading, \
    validate_cochain
from .modular_data import (ModularData, group_theoretical_certificate, twist_equation_check,
                           verify_modular, verlinde_fusion)
from .reports import Report, file_digest, render_text
from .ring_search import SearchSpec, complete_fusion_rings, spec_satisfied

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3


def resolve_input(name: str) -> Path:
    """A path on disk, or the name of a bundled fixture (``.json`` optional)."""
    p = Path(name)
    if p.is_file():
        return p
    base = p.name if p.name.endswith(".json") else p.name + ".json"
    if base in fixtures.bundled_names():
        return fixtures.data_path(base)
    raise InputError(f"{name}: no such file or bundled fixture")


def _load(report: Report, name: str, loader):
    path = resolve_input(name)
    report.inputs[name] = file_digest(path)
    return loader(_read_json(path))


def _bundled_ring_matches(key: str) -> list[str]:
    out = []
    for name in fixtures.bundled_names():
        data = fixtures.load_json(name)
        if not (isinstance(data, dict) and {"labels", "dual", "N"} <= data.keys()):
            continue
        try:
            ring = FusionRing.from_dict(data)
            if validate_fusion_ring(ring).valid and canonical_key(ring) == key:
                out.append(name)
        except FusionkitError:
            continue
    return out


def _write_out(args, name: str, obj) -> str | None:
    if not args.out:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(json.dumps(obj, indent=1) + "\n")
    return str(path)


def _without_timing(d):
    # timings go in wall_time_seconds only, so reports of equal runs compare equal
    return {k: v for k, v in d.items() if k != "seconds"} if isinstance(d, dict) else d


# -- subcommands ----------------------------------------------------------------


def cmd_check(args, report: Report):
    ring = _load(report, args.ring, FusionRing.from_dict)
    val = validate_fusion_ring(ring)
    report.extend(val.checks)
    report.data["rank"] = ring.rank
    if not val.valid:
        return
    dims = fp_dimensions(ring)
    report.data["dimensions"] = dims.to_dict()
    inv, _ = invertibles(ring)
    report.data["invertibles"] = inv.labels(ring)
    try:
        g = universal_grading(ring)
        report.data["universal_grading"] = g.to_dict()
        report.data["component_dimensions"] = [float(x) for x in component_dimensions(ring, g)]
    except CapacityError as exc:
        report.data["universal_grading"] = {"unsupported": str(exc)}
    nil, chain = is_nilpotent(ring)
    report.data["nilpotent"] = nil
    report.data["adjoint_chain"] = [list(s.indices) for s in chain]
    report.data["canonical_key"] = canonical_key(ring)


def cmd_modular(args, report: Report):
    md = _load(report, args.data, ModularData.from_dict).with_tolerance(args.tol)
    rep = verify_modular(md)
    report.extend(rep.checks)
    report.data["global_dim"] = rep.global_dim
    report.data["t_order"] = rep.t_order
    report.data["gauss_sums"] = rep.gauss.to_dict()
    if not rep.valid:
        return
    ring = verlinde_fusion(md)
    key = canonical_key(ring)
    report.data["verlinde_ring"] = {"canonical_key": key,
                                    "matches_bundled": _bundled_ring_matches(key)}
    resid = twist_equation_check(md, ring)
    report.add(Check("twist_equation", resid < args.tol, residual=resid))
    dims = md.dims
    if np.abs(dims - np.rint(dims)).max() < 1e-6:
        cert = group_theoretical_certificate(md, ring)
        report.data["group_theoretical_certificate"] = cert.to_dict()
    _write_out(args, "verlinde_ring.json", ring.to_dict())


def cmd_classify(args, report: Report):
    profile = DimensionProfile(args.p, args.q, args.shape)
    rep = classify(profile)
    report.data.update(rep.to_dict())
    decided = all(c.verdict.rule for c in rep.cases)
    report.add(Check("every_candidate_decided", decided, detail=f"{len(rep.cases)} candidates"))


def cmd_search(args, report: Report):
    spec = _load(report, args.spec, SearchSpec.from_dict)
    res = complete_fusion_rings(spec, node_cap=args.node_cap)
    report.data["raw_completions"] = len(res.raw)
    report.data["classes"] = len(res.rings)
    report.data["keys"] = list(res.keys)
    report.data["stats"] = _without_timing(res.stats.to_dict())
    report.data["bundled_matches"] = {k: _bundled_ring_matches(k) for k in res.keys}
    for i, ring in enumerate(res.rings):
        ok = validate_fusion_ring(ring).valid and spec_satisfied(ring, spec)
        report.add(Check(f"completion_{i}", ok, detail=res.keys[i][:16]))
        _write_out(args, f"completion_{i}.json", ring.to_dict())


def cmd_double(args, report: Report):
    G = _load(report, args.group, FiniteGroup.from_dict)
    dd = double_modular_data(G)
    md = dd.modular.with_tolerance(args.tol)
    rep = verify_modular(md)
    report.extend(rep.checks)
    d = md.dims
    total = float((d ** 2).sum())
    report.add(Check("global_dim_is_order_squared", abs(total - G.order ** 2) < 1e-6,
                     residual=abs(total - G.order ** 2)))
    cert = group_theoretical_certificate(md, dd.ring)
    report.add(Check("certificate_found", cert.found))
    report.data["group_order"] = G.order
    report.data["rank"] = md.rank
    report.data["dimensions"] = [int(round(x)) for x in d]
    report.data["labels"] = list(md.label_list())
    report.data["group_theoretical_certificate"] = cert.to_dict()
    _write_out(args, "double_modular_data.json", md.to_dict())
    _write_out(args, "double_ring.json", dd.ring.to_dict())


def cmd_twist(args, report: Report):
    ring = _load(report, args.ring, FusionRing.from_dict)
    chi = _load(report, args.cochain, PointedCochain.from_dict)
    val = validate_cochain(ring, chi)
    report.extend(val.checks)
    if not val.valid:
        return
    out = graded_twist(ring, chi)
    report.add(Check("twisted_ring_valid", validate_fusion_ring(out).valid))
    key = canonical_key(out)
    report.data["dual"] = {ring.labels[i]: out.labels[out.dual[i]] for i in range(ring.rank)}
    report.data["canonical_key"] = key
    report.data["matches_bundled"] = _bundled_ring_matches(key)
    _write_out(args, "twisted_ring.json", out.to_dict())


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--out", metavar="DIR", help="write report and artifacts here")

    ap = argparse.ArgumentParser(prog="fusionkit", description="Fusion ring and modular data toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="validate a fusion ring file")
    p.add_argument("ring")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("modular", parents=[common], help="verify S/T modular data")
    p.add_argument("data")
    p.set_defaults(func=cmd_modular)

    p = sub.add_parser("classify", parents=[common], help="case analysis for pq^4 or p^2q^2")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--shape", choices=["pq4", "p2q2"], required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("search", parents=[common], help="complete a partial fusion ring spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--node-cap", type=int, default=1_000_000)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("double", parents=[common], help="modular data of a Drinfeld double")
    p.add_argument("--group", required=True)
    p.set_defaults(func=cmd_double)

    p = sub.add_parser("twist", parents=[common], help="twist a graded ring by a cochain")
    p.add_argument("--ring", required=True)
    p.add_argument("--cochain", required=True)
    p.set_defaults(func=cmd_twist)
    return ap


def run(argv=None) -> tuple[int, Report, argparse.Namespace]:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report = Report(command=argv)
    t0 = time.perf_counter()
    try:
        args.func(args, report)
        code = EXIT_PASS if report.passed else EXIT_FAIL
    except InputError as exc:
        report.error = {"type": "input", "message": str(exc)}
        code = EXIT_INPUT
    except (CapacityError, NumericalError) as exc:
        details = _without_timing(getattr(exc, "stats", None) or getattr(exc, "diagnostics", None))
        report.error = {"type": "capacity" if isinstance(exc, CapacityError) else "numerical",
                        "message": str(exc), "details": details}
        code = EXIT_LIMIT
    except VerificationError as exc:
        report.error = {"type": "verification", "message": str(exc),
                        "details": {"witness": exc.witness}}
        code = EXIT_FAIL
    report.seconds = time.perf_counter() - t0
    if report.error is not None:
        report.error = json.loads(json.dumps(report.error, default=str))
    return code, report, args


def main(argv=None) -> int:
    code, report, args = run(argv)
    sys.stdout.write(report.to_json() if args.json else render_text(report))
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(report.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
