"""Command-line front end (``lmg``).

Exit codes: 0 success, 2 usage error, 3 numeric-domain error (for example a
query exactly on the phase boundary).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional, Sequence

from . import limit, scans
from .errors import DomainError, LMGError, UsageError
from .metric_finite import bures_dense, metric_fd_free_energy, metric_fluctuations
from .spectrum import ModelParams, check_size, ground_state, spectrum
from .thermal import ThermalEnsemble

EXIT_USAGE = 2
EXIT_DOMAIN = 3


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".12g")
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def rows_to_csv(rows: List[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in columns])
    return buf.getvalue()


def rows_to_json(rows: List[dict], columns: Sequence[str]) -> str:
    data = [{c: _jsonable(r.get(c)) for c in columns} for r in rows]
    return json.dumps(data, indent=2) + "\n"


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_rows(args, rows, columns) -> None:
    _emit(args, rows_to_json(rows, columns) if args.json else rows_to_csv(rows, columns))


# -- subcommands ------------------------------------------------------------


def cmd_spectrum(args) -> None:
    N = check_size(args.n)
    sectors = spectrum(N, args.h)
    gs = ground_state(N, args.h)
    if args.csv:
        rows = [
            {"S": s.S, "log_multiplicity": s.log_multiplicity, "M": M, "E": E}
            for s in sectors
            for M, E in s.levels
        ]
        _emit(args, rows_to_csv(rows, ["S", "log_multiplicity", "M", "E"]))
        return
    if args.json:
        data = {
            "N": N,
            "h": args.h,
            "sectors": [
                {
                    "S": s.S,
                    "log_multiplicity": s.log_multiplicity,
                    "multiplicity": s.multiplicity_exact,
                    "levels": [{"M": M, "E": E} for M, E in s.levels],
                }
                for s in sectors
            ],
            "ground_state": {
                "S0": gs.S0,
                "M0": gs.M0,
                "energy": gs.energy,
                "degenerate": gs.degenerate,
            },
        }
        _emit(args, json.dumps(data, indent=2) + "\n")
        return
    lines = [f"{'S':>6} {'d_S':>24} {'E_min':>14} {'E_max':>14}"]
    for s in sectors:
        energies = [E for _, E in s.levels]
        d = str(s.multiplicity_exact) if s.multiplicity_exact is not None else (
            f"exp({s.log_multiplicity:.6f})"
        )
        lines.append(f"{s.S:>6} {d:>24} {_fmt(min(energies)):>14} {_fmt(max(energies)):>14}")
    lines.append(
        f"ground state: S0={gs.S0} M0={gs.M0} E={_fmt(gs.energy)}"
        + (" (level crossing)" if gs.degenerate else "")
    )
    _emit(args, "\n".join(lines) + "\n")


THERMAL_COLUMNS = [
    "N", "beta", "h", "log_Z", "f_N", "mean_H", "var_H", "mean_Sz", "var_Sz", "cov_H_Sz",
]


def cmd_thermal(args) -> None:
    p = ModelParams(args.n, args.beta, args.h)
    ens = ThermalEnsemble(p)
    m = ens.moments()
    row = {
        "N": p.N,
        "beta": p.beta,
        "h": p.h,
        "log_Z": ens.log_Z,
        "f_N": -ens.log_Z / (p.N * p.beta),
        "mean_H": m.mean_H,
        "var_H": m.var_H,
        "mean_Sz": m.mean_Sz,
        "var_Sz": m.var_Sz,
        "cov_H_Sz": m.cov_H_Sz,
    }
    _emit_rows(args, [row], THERMAL_COLUMNS)


FINITE_COLUMNS = ["N", "beta", "h", "g_bb", "g_bh", "g_hh", "det"]


def cmd_finite_metric(args) -> None:
    p = ModelParams(args.n, args.beta, args.h)
    if args.method == "fluct":
        g = metric_fluctuations(p)
    elif args.method == "fd":
        g = metric_fd_free_energy(p)
    else:
        g = bures_dense(p.N, p.beta, p.h).total
    row = {"N": p.N, "beta": p.beta, "h": p.h, "g_bb": g.g_bb, "g_bh": g.g_bh,
           "g_hh": g.g_hh, "det": g.det}
    _emit_rows(args, [row], FINITE_COLUMNS)


LIMIT_COLUMNS = ["beta", "h", "phase", "mu_xy", "variant", "g_bb", "g_bh", "g_hh", "det",
                 "degenerate"]


def cmd_limit_metric(args) -> None:
    pt = limit.classify(args.beta, args.h)
    lm = limit.metric_limit(args.beta, args.h, args.variant)
    t = lm.tensor
    row = {"beta": args.beta, "h": args.h, "phase": pt.phase.value, "mu_xy": pt.mu_xy,
           "variant": args.variant, "g_bb": t.g_bb, "g_bh": t.g_bh, "g_hh": t.g_hh,
           "det": lm.det, "degenerate": lm.degenerate}
    _emit_rows(args, [row], LIMIT_COLUMNS)


def cmd_ricci(args) -> None:
    R = limit.ricci_limit(args.beta, args.h, args.method)
    row = {"beta": args.beta, "h": args.h, "method": args.method, "ricci": R}
    _emit_rows(args, [row], ["beta", "h", "method", "ricci"])


def _scan_request(args, with_ricci: bool) -> scans.ScanRequest:
    return scans.ScanRequest(
        args.t_min, args.t_max, args.steps, args.h_min, args.h_max, args.steps,
        with_ricci=with_ricci,
    )


def cmd_phase_diagram(args) -> None:
    rows = scans.run_phase_diagram(_scan_request(args, not args.no_ricci), args.threads)
    _emit_rows(args, rows, scans.PHASE_COLUMNS)


def cmd_metric_scan(args) -> None:
    rows = scans.run_metric_scan(_scan_request(args, False), args.threads)
    _emit_rows(args, rows, scans.METRIC_COLUMNS)


def _parse_n_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse N list {text!r}") from None


def cmd_converge(args) -> None:
    rows = scans.run_convergence(args.beta, args.h, _parse_n_list(args.n_list), args.threads)
    _emit_rows(args, rows, scans.CONVERGENCE_COLUMNS)
    verdict = scans.convergence_verdict(rows)
    verdict = verdict or "undecided (variants coincide or tie)"
    sys.stderr.write(f"closest limit variant at N={rows[-1]['N']}: {verdict}\n")


def cmd_audit(args) -> None:
    items = scans.run_audit()
    if args.json:
        data = [
            {"item": it.name, "verdict": it.verdict, "passed": it.passed,
             "details": _jsonable(it.details)}
            for it in items
        ]
        _emit(args, json.dumps(data, indent=2) + "\n")
        return
    lines = [f"{'item':<24} {'verdict':<12} {'status':<6} notes"]
    for it in items:
        lines.append(
            f"{it.name:<24} {it.verdict or '-':<12} {'PASS' if it.passed else 'FAIL':<6} "
            + _audit_note(it)
        )
    _emit(args, "\n".join(lines) + "\n")


def _audit_note(it: scans.AuditItem) -> str:
    d = it.details
    if it.name == "ordered g_bb":
        m = d["matches"]
        err = d["max_rel_error"]
        return (
            f"matches {m} of {d['grid_points']}; max rel err "
            + ", ".join(f"{k}={v:.1e}" for k, v in err.items())
            + f"; finite-N trend {d['finite_N_trend']}; vanishes as T->0: {d['vanishes_as_T_to_0']}"
        )
    if it.name == "reduced 1D coefficient":
        c = d["coefficient_at_hbar_2"]
        return (
            f"oracles agree: {d['oracles_agree']}; at hbar=2: "
            + ", ".join(f"{k}={v:.6f}" for k, v in c.items())
        )
    return (
        f"christoffel~orthogonal: {d['christoffel_matches_orthogonal']}; "
        f"negative: {d['negative_everywhere']}; printed formula positive at "
        f"{d['printed_formula_positive_at']}/{len(d['samples'])} samples"
    )


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
    common.add_argument("--out", metavar="FILE", help="write output to FILE")
    common.add_argument("--threads", type=int, default=1, metavar="K", help="worker count")

    parser = _Parser(prog="lmg", description="Fidelity metric of the isotropic LMG model")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", parents=[common], help="sector table and ground state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--csv", action="store_true", help="one row per (S, M) level")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("thermal", parents=[common], help="partition function and moments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.set_defaults(func=cmd_thermal)

    p = sub.add_parser("finite-metric", parents=[common], help="finite-N metric")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--method", choices=["fluct", "fd", "dense"], default="fluct")
    p.set_defaults(func=cmd_finite_metric)

    p = sub.add_parser("limit-metric", parents=[common], help="per-spin limit metric")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--variant", choices=[v.value for v in limit.Variant], default="corrected")
    p.set_defaults(func=cmd_limit_metric)

    p = sub.add_parser("ricci", parents=[common], help="Ricci scalar in the ordered phase")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--method", choices=[m.value for m in limit.RicciMethod],
                   default="christoffel")
    p.set_defaults(func=cmd_ricci)

    for name, func, helptext in (
        ("phase-diagram", cmd_phase_diagram, "phase, order parameter, metric, Ricci on a grid"),
        ("metric-scan", cmd_metric_scan, "limit metric on a (T, h) grid"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--t-min", type=float, default=0.05)
        p.add_argument("--t-max", type=float, default=1.5)
        p.add_argument("--h-min", type=float, default=0.0)
        p.add_argument("--h-max", type=float, default=1.5)
        p.add_argument("--steps", type=int, default=50)
        if name == "phase-diagram":
            p.add_argument("--no-ricci", action="store_true", help="leave the ricci column empty")
        p.set_defaults(func=func)

    p = sub.add_parser("converge", parents=[common], help="finite-N approach to the limit")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--n-list", default="50,100,200,400,800")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("audit", parents=[common], help="compare closed-form variants")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"lmg: usage error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        sys.stderr.write(f"lmg: {exc}\n")
        return EXIT_DOMAIN
    except LMGError as exc:
        sys.stderr.write(f"lmg: {exc}\n")
        return EXIT_DOMAIN
    return 0


if __name__ == "__main__":
    sys.exit(main())
