"""Command-line front end: reproducible runs with CSV/JSON output.

Subcommands: simulate | check | crosscheck | bifurcation | period | params.
Exit codes: 0 success, 1 validation or suite failure, 2 usage error.
All files are UTF-8 with LF line endings; CSV numbers use 17 significant
digits so identical inputs give byte-identical outputs.  Every run also
emits a manifest (<out>.manifest.json next to --out, else one JSON line
on stderr).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__, _hooks
from .bifurcation import classify, diagram_grid, separating_lines
from .checks import run_check_suites
from .dynamics import IntegratorConfig, integrate
from .elliptic import period, period_ode, quartic_spec
from .manifold import ChartDomainError, F1_F2, state_to_chart
from .poisson import integral_FML
from .separation import (
    SeparatedPoint,
    SeparationConstants,
    admissible_intervals,
    crosscheck,
    reconstruct,
)
from .statespace import PhaseState, make_params

_SIM_HEADER = (
    "t,omega1,omega2,omega3,alpha1,alpha2,alpha3,beta1,beta2,beta3,"
    "H,K,G,F,M,L,resF1,resF2"
)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def _write_text(path: str | None, text: str, outputs: list[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        outputs.append(path)


def _emit_json(obj, path: str | None, outputs: list[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"
    _write_text(path, text, outputs)


def _sidecar(args, suffix: str) -> str | None:
    return args.out + suffix if args.out else None


def _emit_aux(obj, args, suffix: str, outputs: list[str]) -> None:
    path = _sidecar(args, suffix)
    if path is None:
        print(json.dumps(obj, sort_keys=True), file=sys.stderr)
    else:
        _emit_json(obj, path, outputs)


def _parse_state(text: str) -> PhaseState:
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 9:
        raise ValueError(f"--state needs 9 comma-separated numbers, got {len(parts)}")
    return PhaseState.from_array(np.array(parts))


def _initial_state(args, params):
    if args.state is not None:
        return _parse_state(args.state)
    if args.m is None or args.l is None or args.s1 is None or args.s2 is None:
        raise ValueError("give either --state or all of --m --l --s1 --s2")
    c = SeparationConstants(m=args.m, l=args.l)
    p = SeparatedPoint(s1=args.s1, s2=args.s2, eps1=args.eps1, eps2=args.eps2,
                       sig1=args.sig1, sig2=args.sig2)
    return reconstruct(p, c, params)


def cmd_simulate(args, outputs) -> int:
    params = make_params(args.a, args.b)
    state0 = _initial_state(args, params)
    cfg = IntegratorConfig(t_end=args.t_end, sample_dt=args.dt,
                           rel_tol=args.rel_tol, abs_tol=args.abs_tol)
    traj = integrate(state0, cfg, params)
    lines = [_SIM_HEADER]
    for i, t in enumerate(traj.times):
        st = traj.state(i)
        vals = integral_FML(st, params)
        try:
            f1, f2 = F1_F2(state_to_chart(st))
            rf1, rf2 = abs(f1), abs(f2)
        except ChartDomainError:
            rf1 = rf2 = math.nan
        cells = [t, *st.omega, *st.alpha, *st.beta, vals.h, vals.k, vals.g,
                 vals.f, vals.m, vals.l if vals.l is not None else math.nan, rf1, rf2]
        lines.append(",".join(_fmt(v) for v in cells))
    if args.format == "json":
        header = _SIM_HEADER.split(",")
        rows = [dict(zip(header, [float(v) for v in line.split(",")])) for line in lines[1:]]
        _emit_json(rows, args.out, outputs)
    else:
        _write_text(args.out, "\n".join(lines) + "\n", outputs)
    _emit_aux({"drift": traj.drift}, args, ".drift.json", outputs)
    return 0


def cmd_check(args, outputs) -> int:
    if (rc := _json_only(args)) is not None:
        return rc
    params = make_params(args.a, args.b)
    if args.inject:
        with _hooks.inject(args.inject):
            report = run_check_suites(params, args.seed, args.n_samples)
    else:
        report = run_check_suites(params, args.seed, args.n_samples)
    _emit_json(report, args.out, outputs)
    if report.get("warning"):
        print(f"warning: {report['warning']}", file=sys.stderr)
    return 0 if report["all_pass"] else 1


def cmd_crosscheck(args, outputs) -> int:
    params = make_params(args.a, args.b)
    c = SeparationConstants(m=args.m, l=args.l)
    region = classify(c, params)
    if not region.admissible:
        comps1, comps2 = admissible_intervals(c, params)
        empty = "s1" if not comps1 else "s2"
        print(f"error: (m, l) = ({args.m:g}, {args.l:g}) not admissible: "
              f"{empty} interval empty (n_s1={region.n_s1}, n_s2={region.n_s2})",
              file=sys.stderr)
        return 1
    p0 = SeparatedPoint(s1=args.s1, s2=args.s2, eps1=args.eps1, eps2=args.eps2,
                        sig1=args.sig1, sig2=args.sig2)
    if region.degenerate_s1 and region.degenerate_s2:
        t_end = args.t_end if args.t_end else 10.0
    else:
        t2 = period(quartic_spec(c, params, "s2"))
        if not math.isfinite(t2):
            t2 = period(quartic_spec(c, params, "s1"))
        t_end = args.t_end if args.t_end else args.periods * t2
    rep = crosscheck(p0, c, params, t_end=t_end, sample_dt=args.dt)
    lines = ["t,s1_full,s1_sep,s2_full,s2_sep,delta"]
    for i, t in enumerate(rep.times):
        d = max(abs(rep.s1_full[i] - rep.s1_sep[i]), abs(rep.s2_full[i] - rep.s2_sep[i]))
        cells = [t, rep.s1_full[i], rep.s1_sep[i], rep.s2_full[i], rep.s2_sep[i], d]
        lines.append(",".join(_fmt(v) for v in cells))
    if args.format == "json":
        header = lines[0].split(",")
        rows = [dict(zip(header, [float(v) for v in line.split(",")])) for line in lines[1:]]
        _emit_json(rows, args.out, outputs)
    else:
        _write_text(args.out, "\n".join(lines) + "\n", outputs)
    _emit_aux({"max_ds1": rep.max_ds1, "max_ds2": rep.max_ds2, "t_end": t_end},
              args, ".summary.json", outputs)
    return 0


def cmd_bifurcation(args, outputs) -> int:
    params = make_params(args.a, args.b)
    rows = diagram_grid((args.m_min, args.m_max), (args.l_min, args.l_max),
                        args.resolution, params)
    lines = ["m,l,n_s1,n_s2,admissible,on_set,lines_active"]
    for r in rows:
        lines.append(",".join([_fmt(r.m), _fmt(r.l), str(r.n_s1), str(r.n_s2),
                               _fmt(r.admissible), _fmt(r.on_set), r.lines_active]))
    if args.format == "json":
        _emit_json([r.__dict__ for r in rows], args.out, outputs)
    else:
        _write_text(args.out, "\n".join(lines) + "\n", outputs)
    return 0


def cmd_period(args, outputs) -> int:
    if (rc := _json_only(args)) is not None:
        return rc
    params = make_params(args.a, args.b)
    c = SeparationConstants(m=args.m, l=args.l)
    spec = quartic_spec(c, params, args.which, component=args.component)
    t_closed = period(spec)
    if not math.isfinite(t_closed):
        _emit_json({"which": args.which, "degenerate": True,
                    "interval": list(spec.interval)}, args.out, outputs)
        print(f"error: {args.which} interval {spec.interval} is degenerate or a separatrix",
              file=sys.stderr)
        return 1
    t_mes = period_ode(spec)
    rel = abs(t_closed - t_mes) / t_closed
    _emit_json({"which": args.which, "degenerate": False,
                "period_closed_form": t_closed, "period_ode": t_mes,
                "rel_diff": rel, "interval": list(spec.interval)}, args.out, outputs)
    return 0


def cmd_params(args, outputs) -> int:
    if (rc := _json_only(args)) is not None:
        return rc
    params = make_params(args.a, args.b)
    lines = separating_lines(params)
    _emit_json({
        "a": params.a, "b": params.b, "p2": params.p2, "r2": params.r2,
        "separating_lines": [
            {"label": ln.label, "slope": ln.slope, "intercept": ln.intercept}
            for ln in lines.lines
        ],
        "half_line": lines.half_line,
    }, args.out, outputs)
    return 0


def _add_common(sp, *, seed=True):
    sp.add_argument("--a", type=float, required=True, help="larger field magnitude")
    sp.add_argument("--b", type=float, required=True, help="smaller field magnitude")
    sp.add_argument("--out", type=str, default=None, help="output file (default stdout)")
    sp.add_argument("--format", choices=("csv", "json"), default=None,
                    help="csv for tabular commands (their default); json elsewhere")
    if seed:
        sp.add_argument("--seed", type=int, default=0)


def _json_only(args) -> int | None:
    if args.format == "csv":
        print(f"usage error: {args.command} emits JSON only", file=sys.stderr)
        return 2
    return None


def _add_point(sp):
    sp.add_argument("--m", type=float, default=None)
    sp.add_argument("--l", type=float, default=None)
    sp.add_argument("--s1", type=float, default=None)
    sp.add_argument("--s2", type=float, default=None)
    sp.add_argument("--eps1", type=int, choices=(-1, 1), default=1)
    sp.add_argument("--eps2", type=int, choices=(-1, 1), default=1)
    sp.add_argument("--sig1", type=int, choices=(-1, 1), default=1)
    sp.add_argument("--sig2", type=int, choices=(-1, 1), default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kovtop",
                                 description="Kovalevskaya top in a double force field")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="integrate the full equations of motion")
    _add_common(sp)
    _add_point(sp)
    sp.add_argument("--state", type=str, default=None,
                    help="9 comma-separated values omega1..3,alpha1..3,beta1..3")
    sp.add_argument("--t-end", type=float, required=True)
    sp.add_argument("--dt", type=float, required=True)
    sp.add_argument("--rel-tol", type=float, default=1e-10)
    sp.add_argument("--abs-tol", type=float, default=1e-12)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("check", help="run the seeded invariant suites")
    _add_common(sp)
    sp.add_argument("--n-samples", type=int, default=20)
    sp.add_argument("--inject", choices=_hooks.MUTATIONS, default=None,
                    help=argparse.SUPPRESS)  # fault-injection hook for mutation tests
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("crosscheck", help="full flow vs separated system")
    _add_common(sp)
    _add_point(sp)
    sp.add_argument("--periods", type=float, default=3.0,
                    help="run length in s2 oscillation periods")
    sp.add_argument("--t-end", type=float, default=None)
    sp.add_argument("--dt", type=float, default=None)
    sp.set_defaults(func=cmd_crosscheck)

    sp = sub.add_parser("bifurcation", help="classify a grid in the (m, l) plane")
    _add_common(sp)
    sp.add_argument("--m-min", type=float, required=True)
    sp.add_argument("--m-max", type=float, required=True)
    sp.add_argument("--l-min", type=float, required=True)
    sp.add_argument("--l-max", type=float, required=True)
    sp.add_argument("--resolution", type=int, required=True)
    sp.set_defaults(func=cmd_bifurcation)

    sp = sub.add_parser("period", help="closed-form vs ODE oscillation period")
    _add_common(sp)
    sp.add_argument("--m", type=float, required=True)
    sp.add_argument("--l", type=float, required=True)
    sp.add_argument("--which", choices=("s1", "s2"), required=True)
    sp.add_argument("--component", type=int, default=0)
    sp.set_defaults(func=cmd_period)

    sp = sub.add_parser("params", help="echo derived constants and separating lines")
    _add_common(sp)
    sp.set_defaults(func=cmd_params)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    t0 = time.perf_counter()
    outputs: list[str] = []
    try:
        code = args.func(args, outputs)
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 1
    manifest = {
        "command": args.command,
        "parameters": {k: v for k, v in vars(args).items() if k != "func"},
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "duration_s": time.perf_counter() - t0,
        "outputs": list(outputs),
        "exit_code": code,
    }
    if args.out:
        with open(args.out + ".manifest.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        print(json.dumps(manifest, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
