"""Command-line frontend.

Commands:
  compute    closed-form values (matching / intersect)
  audit      exact oracle vs closed-form agreement for one instance
  sweep      lemma2 equality sweep / monotonicity audit, CSV output
  oracle     exact branch-and-bound search for one instance
  construct  extremal families and canonical witnesses, family line format
  smooth     smoothed-count maximizer with KKT diagnostics
  report     render matplotlib figures from sweep/trace CSV files

Exit codes: 0 success, 1 usage, 2 domain/capacity error, 3 budget exhausted.
Exact counts are emitted as decimal strings; they exceed 64-bit range well
inside the sweep grid.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExhausted, CapacityError, DegenerateError, DomainError
from . import formulas
from .families import (
    build_intersect_extremal,
    build_matching_extremal,
    canonical_matching_witness,
    canonical_swise_witness,
    dump_family,
    SetFamily,
)
from .formulas import IntersectParams, MatchingParams
from . import oracle as oracle_mod
from . import smoothing

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_BUDGET = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _jdump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _read_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    return value


def build_parser() -> _Parser:
    top = _Parser(prog="extremal", description=__doc__.splitlines()[0])
    top.add_argument("--config", help="key=value file overriding flag defaults")
    sub = top.add_subparsers(dest="command", required=True)

    def add_matching_flags(p):
        p.add_argument("--l", type=int, required=True, dest="ell")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)

    def add_intersect_flags(p):
        p.add_argument("--s", type=int, required=True)
        p.add_argument("--t", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)

    def add_format(p):
        p.add_argument("--format", choices=["json", "csv", "text"], default="json")

    # compute
    comp = sub.add_parser("compute", help="closed-form values")
    csub = comp.add_subparsers(dest="problem", required=True)
    cm = csub.add_parser("matching")
    add_matching_flags(cm)
    add_format(cm)
    ci = csub.add_parser("intersect")
    add_intersect_flags(ci)
    add_format(ci)

    # audit
    aud = sub.add_parser("audit", help="oracle vs closed-form agreement")
    asub = aud.add_subparsers(dest="problem", required=True)
    am = asub.add_parser("matching")
    add_matching_flags(am)
    am.add_argument("--budget-nodes", type=int, default=10**8)
    am.add_argument("--budget-seconds", type=float, default=300.0)
    ai = asub.add_parser("intersect")
    add_intersect_flags(ai)
    ai.add_argument("--budget-nodes", type=int, default=10**8)
    ai.add_argument("--budget-seconds", type=float, default=300.0)

    # sweep
    sw = sub.add_parser("sweep", help="parameter sweeps, CSV")
    ssub = sw.add_subparsers(dest="target", required=True)
    sl = ssub.add_parser("lemma2")
    sl.add_argument("--l-max", type=int, default=6, dest="l_max")
    sl.add_argument("--k-max", type=int, default=8, dest="k_max")
    sl.add_argument("--n-max", type=int, default=100, dest="n_max")
    add_format(sl)
    sm = ssub.add_parser("monotonicity")
    sm.add_argument("--l-max", type=int, default=6, dest="l_max")
    sm.add_argument("--k-max", type=int, default=8, dest="k_max")
    sm.add_argument("--n-max", type=int, default=100, dest="n_max")
    add_format(sm)

    # oracle
    orc = sub.add_parser("oracle", help="exact branch-and-bound search")
    osub = orc.add_subparsers(dest="problem", required=True)
    om = osub.add_parser("matching")
    add_matching_flags(om)
    for p in (om,):
        p.add_argument("--budget-nodes", type=int, default=10**8)
        p.add_argument("--budget-seconds", type=float, default=300.0)
        p.add_argument("--compressed", action="store_true")
        p.add_argument("--timing", action="store_true", help="include elapsed seconds")
    oi = osub.add_parser("intersect")
    add_intersect_flags(oi)
    oi.add_argument("--budget-nodes", type=int, default=10**8)
    oi.add_argument("--budget-seconds", type=float, default=300.0)
    oi.add_argument("--compressed", action="store_true")
    oi.add_argument("--timing", action="store_true")

    # construct
    con = sub.add_parser("construct", help="extremal families and witnesses")
    gsub = con.add_subparsers(dest="target", required=True)
    gm = gsub.add_parser("matching")
    add_matching_flags(gm)
    gm.add_argument("--i", type=int, required=True)
    gm.add_argument("--out")
    gi = gsub.add_parser("intersect")
    add_intersect_flags(gi)
    gi.add_argument("--r", type=int, required=True)
    gi.add_argument("--out")
    gw = gsub.add_parser("witness-matching")
    gw.add_argument("--l", type=int, required=True, dest="ell")
    gw.add_argument("--k", type=int, required=True)
    gw.add_argument("--n", type=int)
    gw.add_argument("--out")
    gs = gsub.add_parser("witness-swise")
    add_intersect_flags(gs)
    gs.add_argument("--out")

    # smooth
    smo = sub.add_parser("smooth", help="smoothed-count maximizer")
    msub = smo.add_subparsers(dest="problem", required=True)
    mm = msub.add_parser("matching")
    add_matching_flags(mm)
    mi = msub.add_parser("intersect")
    add_intersect_flags(mi)
    for p in (mm, mi):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--sigma", type=float, default=1e-3)
        p.add_argument("--sigma-initial", type=float, default=0.5)
        p.add_argument("--step", type=float, default=0.2)
        p.add_argument("--max-iter", type=int, default=2000)
        p.add_argument("--trace", help="write iteration trace CSV here")

    # report
    rep = sub.add_parser("report", help="render figures from CSV output")
    rsub = rep.add_subparsers(dest="target", required=True)
    rl = rsub.add_parser("sweep")
    rl.add_argument("--csv", required=True)
    rl.add_argument("--out", required=True, help="output PNG path")
    rt = rsub.add_parser("trace")
    rt.add_argument("--csv", required=True)
    rt.add_argument("--out", required=True, help="output PNG path")

    return top


def _cmd_compute(args) -> int:
    if args.problem == "matching":
        p = MatchingParams(ell=args.ell, n=args.n, k=args.k)
        value, argmax_i = formulas.matching_formula_value(p)
        erdos = formulas.erdos_value(p)
        row = {"formula": str(value), "erdos": str(erdos), "argmax_i": argmax_i}
    else:
        q = IntersectParams(s=args.s, t=args.t, n=args.n, k=args.k)
        value, argmax_r = formulas.intersect_value(q)
        row = {"conjecture": str(value), "argmax_r": argmax_r}
    _emit_row(row, args.format)
    return EXIT_OK


def _emit_row(row: dict, fmt: str) -> None:
    if fmt == "json":
        print(_jdump(row))
    elif fmt == "csv":
        print(",".join(row.keys()))
        print(",".join(str(v) for v in row.values()))
    else:
        for key, val in row.items():
            print(f"{key}: {val}")


def _cmd_audit(args) -> int:
    budget = oracle_mod.Budget(args.budget_nodes, args.budget_seconds)
    if args.problem == "matching":
        params = MatchingParams(ell=args.ell, n=args.n, k=args.k)
    else:
        params = IntersectParams(s=args.s, t=args.t, n=args.n, k=args.k)
    rec = oracle_mod.audit(params, budget)
    for key in ("formula", "erdos", "conjecture"):
        if key in rec:
            rec[key] = str(rec[key])
    print(_jdump(rec))
    return EXIT_OK if rec["optimal"] else EXIT_BUDGET


def lemma2_rows(l_max: int, k_max: int, n_max: int):
    # below n = l*k - 1 no l-matching exists at all and the closed form's
    # C(lk-1, k) construction does not fit, so the comparison starts there
    for ell in range(2, l_max + 1):
        for k in range(1, k_max + 1):
            for n in range(max(k, ell * k - 1), n_max + 1):
                p = MatchingParams(ell=ell, n=n, k=k)
                rep = formulas.lemma2_check(p)
                yield {
                    "l": ell,
                    "k": k,
                    "n": n,
                    "formula": str(rep.lhs),
                    "erdos": str(rep.rhs),
                    "equal": str(rep.equal).lower(),
                    "argmax_i": rep.argmax_index,
                }


def monotonicity_findings(l_max: int, k_max: int, n_max: int):
    """Adjacent a-sweep pairs inside one i-window where the claim fails."""
    for ell in range(2, l_max + 1):
        for k in range(1, k_max + 1):
            for n in range(max(k, ell * k - 1), n_max + 1):
                for i in range(1, k + 1):
                    hi = min(ell * i - 1, n)
                    lo = ell * (i - 1) + 1
                    for a in range(hi, lo, -1):
                        v_hi = formulas.a_sweep_term(a, n, k, ell)
                        v_lo = formulas.a_sweep_term(a - 1, n, k, ell)
                        if v_lo > v_hi:
                            yield {
                                "l": ell,
                                "k": k,
                                "n": n,
                                "i": i,
                                "a": a,
                                "term_a": str(v_hi),
                                "term_a_minus_1": str(v_lo),
                            }


def _emit_rows(rows, header: list[str], fmt: str) -> None:
    if fmt == "csv":
        print(",".join(header))
        for row in rows:
            print(",".join(str(row[h]) for h in header))
    elif fmt == "json":
        for row in rows:
            print(_jdump(row))
    else:
        for row in rows:
            print(" ".join(f"{h}={row[h]}" for h in header))


def _cmd_sweep(args) -> int:
    if args.target == "lemma2":
        rows = lemma2_rows(args.l_max, args.k_max, args.n_max)
        _emit_rows(rows, ["l", "k", "n", "formula", "erdos", "equal", "argmax_i"], args.format)
    else:
        rows = monotonicity_findings(args.l_max, args.k_max, args.n_max)
        _emit_rows(
            rows, ["l", "k", "n", "i", "a", "term_a", "term_a_minus_1"], args.format
        )
    return EXIT_OK


def _cmd_oracle(args) -> int:
    budget = oracle_mod.Budget(args.budget_nodes, args.budget_seconds)
    if args.problem == "matching":
        res = oracle_mod.max_no_matching(
            args.n, args.k, args.ell, budget, compressed=args.compressed
        )
    else:
        res = oracle_mod.max_swise_t_intersecting(
            args.n, args.k, args.s, args.t, budget, compressed=args.compressed
        )
    print(res.to_json(include_elapsed=args.timing))
    return EXIT_OK if res.optimal else EXIT_BUDGET


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_construct(args) -> int:
    if args.target == "matching":
        fam = build_matching_extremal(MatchingParams(ell=args.ell, n=args.n, k=args.k), args.i)
        _write_or_print(dump_family(fam), args.out)
    elif args.target == "intersect":
        fam = build_intersect_extremal(
            IntersectParams(s=args.s, t=args.t, n=args.n, k=args.k), args.r
        )
        _write_or_print(dump_family(fam), args.out)
    elif args.target == "witness-matching":
        witness = canonical_matching_witness(args.ell, args.k, args.n)
        fam = SetFamily(tuple(sorted(witness, key=lambda m: m.mask)), witness[0].n, args.k)
        _write_or_print(dump_family(fam), args.out)
    else:
        witness = canonical_swise_witness(args.s, args.t, args.k, args.n)
        fam = SetFamily(tuple(sorted(witness, key=lambda m: m.mask)), args.n, args.k)
        _write_or_print(dump_family(fam), args.out)
    return EXIT_OK


def _cmd_smooth(args) -> int:
    config = smoothing.SmoothingConfig(
        sigma=args.sigma,
        sigma_initial=args.sigma_initial,
        step=args.step,
        max_iter=args.max_iter,
        seed=args.seed,
    )
    if args.problem == "matching":
        problem = MatchingParams(ell=args.ell, n=args.n, k=args.k)
    else:
        problem = IntersectParams(s=args.s, t=args.t, n=args.n, k=args.k)
    res = smoothing.maximize(problem, config)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(smoothing.trace_to_csv(res.trace))
    summary = {
        "count": f"{res.count:.9f}",
        "delta": f"{res.delta:.9f}",
        "beta": [f"{v:.9f}" for v in res.beta],
        "step_deviation": f"{smoothing._step_deviation(res.beta):.3e}",
        "converged": res.converged,
        "kkt": {
            "stationarity_residual": f"{res.kkt.stationarity_residual:.3e}",
            "slackness_violation": f"{res.kkt.slackness_violation:.3e}",
            "delta_residual": f"{res.kkt.delta_residual:.3e}",
            "min_lambda": f"{res.kkt.min_lambda:.3e}",
        },
    }
    print(_jdump(summary))
    return EXIT_OK if res.converged else EXIT_BUDGET


def _cmd_report(args) -> int:
    from . import report

    if args.target == "sweep":
        report.render_sweep_figure(args.csv, args.out)
    else:
        report.render_trace_figure(args.csv, args.out)
    print(_jdump({"figure": args.out}))
    return EXIT_OK


_DISPATCH = {
    "compute": _cmd_compute,
    "audit": _cmd_audit,
    "sweep": _cmd_sweep,
    "oracle": _cmd_oracle,
    "construct": _cmd_construct,
    "smooth": _cmd_smooth,
    "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()

    # config file supplies defaults; explicit flags win because defaults are
    # installed before the real parse
    if "--config" in argv:
        cfg_path = argv[argv.index("--config") + 1]
        overrides = {k: _coerce(v) for k, v in _read_config(cfg_path).items()}
        parser.set_defaults(**overrides)
        for sp_action in parser._subparsers._group_actions:
            for sp in sp_action.choices.values():
                sp.set_defaults(**{
                    k: v for k, v in overrides.items()
                    if any(k == a.dest for a in sp._actions)
                })
                if sp._subparsers:
                    for ssp_action in sp._subparsers._group_actions:
                        for ssp in ssp_action.choices.values():
                            ssp.set_defaults(**{
                                k: v for k, v in overrides.items()
                                if any(k == a.dest for a in ssp._actions)
                            })

    args = parser.parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (DomainError, CapacityError, DegenerateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
