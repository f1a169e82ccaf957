"""Command-line front end: ``qiso <subcommand> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage, parse or parameter errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import __version__
from .cyclotomic import CyclotomicScalar, format_rational, format_scalar
from .dirac import heat_trace, spectrum
from .dsl import ParseError, load_model, load_presentation
from .groups import CAP_ENV, GroupError, parse_group_spec
from .laplacian import admissibility_report, free_bounds
from .models import PRESETS, PresetError, build_action, check_action, preset, preset_report
from .real_structure import real_extension, support_certificate
from .relations import check, coproduct_check


class UsageError(Exception):
    pass


def jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, CyclotomicScalar):
        return format_scalar(x)
    if isinstance(x, float):
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return float(f"{x:.15g}")
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__}")


def render_json(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"


def render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([jsonable(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands; each returns (ok, report, csv table or None)


def cmd_spheres(args):
    group = parse_group_spec(args.group)
    max_n = args.max_n
    if max_n is None:
        if not group.finite:
            raise UsageError("--max-n is required for infinite groups")
        max_n = group.diameter()
    sizes = [len(group.sphere(n)) for n in range(max_n + 1)]
    report = {
        "group": group.spec,
        "generators": list(group.labels),
        "spheres": [{"n": n, "size": k} for n, k in enumerate(sizes)],
        "spectrum": [{"eigenvalue": n, "multiplicity": k} for n, k in spectrum(group, max_n)],
    }
    return True, report, (["n", "size"], list(enumerate(sizes)))


def cmd_heat_trace(args):
    group = parse_group_spec(args.group)
    result = heat_trace(group, args.t, args.max_n)
    report = {
        "group": group.spec,
        "t": args.t,
        "max_n": args.max_n,
        "value": result.value,
        "tail_bound": result.tail_bound,
        "terms": list(result.terms),
    }
    return True, report, None


def _laplacian_report_dict(rep) -> dict:
    out: dict[str, Any] = {
        "group": rep.group,
        "coefficients": [{"length": m, "c": c} for m, c in sorted(rep.coefficients.items())],
        "flags": {
            "constant_on_spheres": rep.constant_on_spheres,
            "injective_across_lengths": rep.injective_across_lengths,
            "kernel_dim_one": rep.kernel_dim_one,
            "increasing": rep.increasing,
            "within_bounds": rep.within_bounds,
        },
        "ok": rep.ok,
    }
    if rep.stabilization:
        out["stabilization"] = [
            {
                "m": ev.m,
                "value": ev.value,
                "n_range": list(ev.n_range),
                "stable_in_n": ev.stable_in_n,
                "independent_of_gamma": ev.independent_of_gamma,
                "representatives": ev.representatives,
                "within_bounds": ev.within_bounds,
                "note": ev.note,
            }
            for ev in rep.stabilization
        ]
    if rep.formal:
        out["formal_readings"] = [
            {
                "m": m,
                "junction": f["junction"],
                "junction_stable": f["junction_stable"],
                "walk": [{"n": n, "r": v} for n, v in sorted(f["walk"].items())],
                "walk_stable": f["walk_stable"],
                "differs_from_reduced": f["differs_from_reduced"],
            }
            for m, f in sorted(rep.formal.items())
        ]
    if rep.notes:
        out["notes"] = rep.notes
    return out


def cmd_laplacian(args):
    if args.kind == "finite":
        group = parse_group_spec(args.group)
        if not group.finite:
            raise UsageError(f"{group.spec} is infinite; use 'laplacian free'")
        rep = admissibility_report(group, args.max_len if args.max_len is not None else group.diameter())
    else:
        group = parse_group_spec(f"free:{args.rank}")
        if args.probe_depth is not None and args.probe_depth < args.max_len:
            raise UsageError("--probe-depth must be at least --max-len")
        rep = admissibility_report(group, args.max_len, args.probe_depth)
    report = _laplacian_report_dict(rep)
    if args.kind == "free":
        report["bounds"] = [
            {"m": m, "lower": free_bounds(args.rank, m)[0], "upper": free_bounds(args.rank, m)[1]}
            for m in range(args.max_len + 1)
        ]
    rows = [(m, c) for m, c in sorted(rep.coefficients.items())]
    return rep.ok, report, (["length", "c"], rows)


def cmd_verify(args):
    pres = load_presentation(args.presentation)
    model = load_model(args.model)
    rep = check(pres, model)
    report = {"presentation": args.presentation, "model": args.model, "check": rep.to_dict()}
    ok = rep.ok
    if pres.corep_grid is not None and args.coproduct:
        cop = coproduct_check(pres, model)
        report["coproduct"] = cop.to_dict()
        ok &= cop.ok
    report["ok"] = ok
    return ok, report, None


def cmd_verify_preset(args):
    p = preset(args.name, *args.params)
    report = preset_report(p)
    return report["ok"], report, None


def cmd_action_check(args):
    p = preset(args.preset, *args.params)
    radius = args.radius
    if radius is None:
        radius = p.group.diameter() if p.group.finite else 3
    table = build_action(p.group, p.coefficient_grid(), radius)
    rep = check_action(table)
    report = {"preset": p.name, "group": p.group.spec, "radius": radius, **rep.to_dict()}
    if p.closed_form:
        from .models import cyclic_closed_form, rows_equal

        n = p.group.n
        bad = [k for k in range(1, n) if not rows_equal(table.rows[k], cyclic_closed_form(p, k))]
        report["closed_form"] = {"ok": not bad, "failing_k": bad}
        report["ok"] = report["ok"] and not bad
    return report["ok"], report, None


def cmd_t_operator(args):
    group = parse_group_spec(args.group)
    g, h = group.parse(args.g), group.parse(args.h)
    r0 = args.r0 if args.r0 is not None else group.length(g) + group.length(h)
    r = args.r if args.r is not None else r0 + 4
    cert = support_certificate(group, g, h, r0, r)
    return cert.ok, cert.to_dict(), None


def cmd_real_check(args):
    p = preset(args.preset, *args.params)
    ext = real_extension(p, trivial=args.trivial)
    report = {"preset": p.name, "trivial": args.trivial, **ext.to_dict()}
    return ext.ok, report, None


def cmd_presets(args):
    report = {
        "presets": [
            {"name": name, "parameters": list(sig), "description": desc}
            for name, (_, sig, desc) in PRESETS.items()
        ]
    }
    return True, report, None


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qiso",
        description="Word-metric spectral triples on group algebras and their quantum isometry groups.",
        epilog=f"Set {CAP_ENV} to change the ball-radius cap for infinite groups (default 12).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    sp = sub.add_parser("spheres", parents=[fmt], help="sphere sizes |W_n| and the Dirac spectrum")
    sp.add_argument("--group", required=True)
    sp.add_argument("--max-n", type=int)
    sp.set_defaults(func=cmd_spheres, csv_ok=True)

    sp = sub.add_parser("heat-trace", parents=[fmt], help="truncated heat trace with certified tail bound")
    sp.add_argument("--group", required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--max-n", type=int, required=True)
    sp.set_defaults(func=cmd_heat_trace, csv_ok=False)

    sp = sub.add_parser("laplacian", help="Laplacian coefficients and admissibility")
    lsub = sp.add_subparsers(dest="kind", required=True, metavar="kind")
    lf = lsub.add_parser("finite", parents=[fmt], help="finite group, exact average over the group")
    lf.add_argument("--group", required=True)
    lf.add_argument("--max-len", type=int)
    lf.set_defaults(func=cmd_laplacian, csv_ok=True)
    lr = lsub.add_parser("free", parents=[fmt], help="free group, stabilized sphere ratios")
    lr.add_argument("--rank", type=int, required=True)
    lr.add_argument("--max-len", type=int, required=True)
    lr.add_argument("--probe-depth", type=int)
    lr.set_defaults(func=cmd_laplacian, csv_ok=True)

    sp = sub.add_parser("verify", parents=[fmt], help="check a presentation file against a model file")
    sp.add_argument("--presentation", required=True)
    sp.add_argument("--model", required=True)
    sp.add_argument("--coproduct", action="store_true", help="also run the coproduct check")
    sp.set_defaults(func=cmd_verify, csv_ok=False)

    sp = sub.add_parser("verify-preset", parents=[fmt], help="check a built-in preset")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*")
    sp.set_defaults(func=cmd_verify_preset, csv_ok=False)

    sp = sub.add_parser("action-check", parents=[fmt], help="build and check the induced action")
    sp.add_argument("--preset", required=True)
    sp.add_argument("--radius", type=int)
    sp.add_argument("params", nargs="*")
    sp.set_defaults(func=cmd_action_check, csv_ok=False)

    sp = sub.add_parser("t-operator", parents=[fmt], help="support certificate for T_{g,h}")
    sp.add_argument("--group", required=True)
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--r0", type=int)
    sp.add_argument("--r", type=int)
    sp.set_defaults(func=cmd_t_operator, csv_ok=False)

    sp = sub.add_parser("real-check", parents=[fmt], help="real-structure extension of a preset")
    sp.add_argument("--preset", required=True)
    sp.add_argument("--trivial", action="store_true", help="use q = I instead of I (+) -I")
    sp.add_argument("params", nargs="*")
    sp.set_defaults(func=cmd_real_check, csv_ok=False)

    sp = sub.add_parser("presets", parents=[fmt], help="list the built-in presets")
    sp.set_defaults(func=cmd_presets, csv_ok=False)
    return parser


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.format == "csv" and not args.csv_ok:
            raise UsageError(f"csv output is available for spheres and laplacian only, not {args.command}")
        ok, report, table = args.func(args)
    except (UsageError, GroupError, ParseError, PresetError, OSError, ValueError) as exc:
        err.write(f"qiso {args.command}: error: {exc}\n")
        return 2
    if args.format == "csv":
        text = render_csv(*table)
    else:
        text = render_json({"command": ["qiso", *argv], "version": __version__, "ok": ok, **report})
    out.write(text)
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
