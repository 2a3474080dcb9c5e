"""Command-line surface: table generation, critical-value queries, combined
test decisions, and simulation diagnostics.

Exit codes are a stable contract: 0 success, 1 numeric failure, 2 usage
error, 3 not-found / unsupported combination.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .diagnostics import ecdf, ks_critical_value, ks_distance, write_ecdf_csv
from .estimation import SIMULATED, simulate_quantiles
from .exact import UnsupportedExactError, exact_quantile, has_exact_quantile
from .methods import Method, MethodSpec, Tail, evaluate_statistic, parse_method
from .sampling import (
    DEFAULT_N_REPLICAS,
    DEFAULT_N_SAMPLES,
    DEFAULT_Q_LEVELS,
    DEFAULT_SEED,
    SimConfig,
)
from .special import BracketError, ConvergenceError, DomainError
from .tables import (
    TableGenerationError,
    TableLookupError,
    TableParseError,
    generate_table,
    lookup,
    read_csv,
    write_csv,
)

__all__ = ["main", "Decision", "CriticalValue"]

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_USAGE = 2
EXIT_NOT_FOUND = 3

SEED_ENV_VAR = "METACRIT_SEED"


class CliError(ValueError):
    # ValueError so argparse turns a bad flag value into its usage error
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@dataclasses.dataclass(frozen=True)
class CriticalValue:
    """One resolved rejection threshold with its provenance."""

    q: float
    value: float
    source: str  # exact | table | simulated
    stderr: float | None = None


@dataclasses.dataclass(frozen=True)
class Decision:
    """Verdict on the overall null: all individual nulls true."""

    method: str
    tail: str
    n: int
    n_f: int
    alpha: float
    statistic: float
    criticals: tuple
    reject: bool

    def to_json(self) -> str:
        rec = {
            "method": self.method,
            "tail": self.tail,
            "n": self.n,
            "n_f": self.n_f,
            "alpha": self.alpha,
            "statistic": self.statistic,
            "criticals": [dataclasses.asdict(c) for c in self.criticals],
            "reject": self.reject,
        }
        return json.dumps(rec)


def _parse_seed(text: str) -> int:
    try:
        seed = int(text, 0)
    except ValueError:
        raise CliError(f"seed {text!r} is not a decimal or 0x-hex integer", EXIT_USAGE)
    if seed < 0:
        raise CliError("seed must be nonnegative", EXIT_USAGE)
    return seed


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env:
        return _parse_seed(env)
    return DEFAULT_SEED


def _parse_q_list(text: str):
    try:
        qs = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise CliError(f"bad q list {text!r}", EXIT_USAGE)
    if not qs:
        raise CliError("empty q list", EXIT_USAGE)
    return tuple(sorted(qs))


def _parse_pvalues(args) -> list:
    if args.p is not None and args.p_file is not None:
        raise CliError("give --p or --p-file, not both", EXIT_USAGE)
    if args.p is not None:
        tokens = [tok for tok in args.p.split(",") if tok.strip()]
    elif args.p_file is not None:
        try:
            with open(args.p_file) as f:
                tokens = [ln.strip() for ln in f if ln.strip()]
        except OSError as err:
            raise CliError(f"cannot read {args.p_file}: {err}", EXIT_USAGE)
    else:
        raise CliError("p-values required: --p or --p-file", EXIT_USAGE)
    try:
        values = [float(tok) for tok in tokens]
    except ValueError:
        raise CliError("p-values must be numeric", EXIT_USAGE)
    return values


def _resolve_critical(spec: MethodSpec, n: int, n_f: int, q: float, args) -> CriticalValue:
    """Resolution order: exact law, then table file, then fresh simulation."""
    if has_exact_quantile(spec, n, n_f):
        return CriticalValue(q=q, value=exact_quantile(spec, n, n_f, q), source="exact")
    table_path = getattr(args, "table", None)
    if table_path:
        try:
            cell = lookup(read_csv(table_path), spec.method, n, n_f, q)
            return CriticalValue(q=q, value=cell.estimate, source="table", stderr=cell.stderr)
        except TableLookupError:
            pass  # off-grid keys fall through to simulation, never interpolation
    cfg = SimConfig(n=n, n_f=n_f, N=args.N, R=args.R, seed=args.seed, q_list=(q,))
    est = simulate_quantiles(spec, cfg)[0]
    return CriticalValue(q=q, value=est.estimate, source=SIMULATED, stderr=est.stderr)


def _fmt_critical(c: CriticalValue) -> str:
    text = f"critical[q={c.q:g}] = {c.value:.6g} ({c.source}"
    if c.stderr is not None:
        text += f", stderr={c.stderr:.3g}"
    return text + ")"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_gen_table(args) -> int:
    spec = MethodSpec(parse_method(args.method))
    q_list = _parse_q_list(args.q_list) if args.q_list else DEFAULT_Q_LEVELS
    table = generate_table(
        spec,
        n_min=args.n_min,
        n_max=args.n_max,
        N=args.N,
        R=args.R,
        seed=args.seed,
        q_list=q_list,
        use_exact=args.exact,
        workers=args.workers,
    )
    write_csv(table, args.out)
    print(f"wrote {len(table.cells)} cells to {args.out}")
    return EXIT_OK


def _cmd_critical(args) -> int:
    spec = MethodSpec(parse_method(args.method))
    chosen = [name for name, on in
              (("--exact", args.exact), ("--table", args.table is not None),
               ("--simulate", args.simulate)) if on]
    if len(chosen) != 1:
        raise CliError("choose exactly one of --exact, --table PATH, --simulate", EXIT_USAGE)

    if args.exact:
        if not has_exact_quantile(spec, args.n, args.nf):
            print(
                f"no exact law for {spec.method.token} with n={args.n}, n_f={args.nf}; "
                "rerun with --simulate",
                file=sys.stderr,
            )
            return EXIT_NOT_FOUND
        value = exact_quantile(spec, args.n, args.nf, args.q)
        print(f"{value:.6g} (exact)")
        return EXIT_OK

    if args.table is not None:
        cell = lookup(read_csv(args.table), spec.method, args.n, args.nf, args.q)
        se = "" if cell.stderr is None else f" stderr={cell.stderr:.3g}"
        print(f"{cell.estimate:.6g} ({cell.provenance}, table){se}")
        return EXIT_OK

    cfg = SimConfig(n=args.n, n_f=args.nf, N=args.N, R=args.R, seed=args.seed, q_list=(args.q,))
    est = simulate_quantiles(spec, cfg)[0]
    se = "" if est.stderr is None else f" stderr={est.stderr:.3g}"
    print(f"{est.estimate:.6g} (simulated){se}")
    return EXIT_OK


def _cmd_combine(args) -> int:
    spec = MethodSpec(parse_method(args.method))
    if args.tail:
        spec = MethodSpec(spec.method, tail=Tail(args.tail))
    values = _parse_pvalues(args)
    n = len(values)
    if not (0 <= args.nf <= n):
        raise CliError(f"n_f={args.nf} outside 0..{n}", EXIT_USAGE)
    if not (0.0 < args.alpha < 1.0):
        raise CliError("alpha must lie strictly inside (0, 1)", EXIT_USAGE)
    try:
        statistic = evaluate_statistic(spec, values)
    except DomainError as err:
        raise CliError(str(err), EXIT_USAGE)

    if spec.tail is Tail.LOWER:
        criticals = (_resolve_critical(spec, n, args.nf, args.alpha, args),)
        reject = statistic <= criticals[0].value
    elif spec.tail is Tail.UPPER:
        criticals = (_resolve_critical(spec, n, args.nf, 1.0 - args.alpha, args),)
        reject = statistic >= criticals[0].value
    else:
        lo = _resolve_critical(spec, n, args.nf, args.alpha / 2.0, args)
        hi = _resolve_critical(spec, n, args.nf, 1.0 - args.alpha / 2.0, args)
        criticals = (lo, hi)
        reject = statistic <= lo.value or statistic >= hi.value

    decision = Decision(
        method=spec.method.token,
        tail=spec.tail.value,
        n=n,
        n_f=args.nf,
        alpha=args.alpha,
        statistic=statistic,
        criticals=criticals,
        reject=reject,
    )
    if args.json:
        print(decision.to_json())
    else:
        print(f"method={decision.method} tail={decision.tail} n={n} n_f={args.nf} "
              f"alpha={args.alpha:g}")
        print(f"statistic = {statistic:.6g}")
        for c in criticals:
            print(_fmt_critical(c))
        print(f"decision: {'reject' if reject else 'retain'} the overall null")
    return EXIT_OK


def _cmd_validate(args) -> int:
    spec = MethodSpec(parse_method(args.method))
    if not has_exact_quantile(spec, args.n, args.nf):
        print(
            f"no exact law to validate against for {spec.method.token} "
            f"with n={args.n}, n_f={args.nf}",
            file=sys.stderr,
        )
        return EXIT_NOT_FOUND
    dump = ecdf(spec, args.n, args.nf, args.N, args.seed)
    dist = ks_distance(dump)
    c05 = ks_critical_value(args.N, 0.05)
    c01 = ks_critical_value(args.N, 0.01)
    verdict = "consistent" if dist <= c01 else "INCONSISTENT"
    print(f"method={spec.method.token} n={args.n} n_f={args.nf} N={args.N} seed={args.seed}")
    print(f"ks_distance = {dist:.6f}  critical[5%] = {c05:.6f}  critical[1%] = {c01:.6f}")
    print(f"fit at the 1% level: {verdict}")
    if args.out:
        write_ecdf_csv(dump, args.out, include_exact=True)
        print(f"wrote ECDF dump to {args.out}")
    return EXIT_OK


def _cmd_ecdf(args) -> int:
    spec = MethodSpec(parse_method(args.method))
    dump = ecdf(spec, args.n, args.nf, args.N, args.seed)
    include_exact = has_exact_quantile(spec, args.n, args.nf)
    write_ecdf_csv(dump, args.out, include_exact=include_exact)
    print(f"wrote {args.N} ECDF rows to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_sim_flags(p, with_R=True):
    p.add_argument("--N", type=int, default=DEFAULT_N_SAMPLES, help="samples per replica")
    if with_R:
        p.add_argument("--R", type=int, default=DEFAULT_N_REPLICAS, help="replicas")
    p.add_argument("--seed", type=_parse_seed, default=None,
                   help=f"master seed, decimal or 0x-hex (default {DEFAULT_SEED}, "
                        f"or ${SEED_ENV_VAR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metacrit",
        description="Critical values and decisions for combined p-value tests "
                    "with genuine and fake (Beta(1,2)) p-values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-table", help="generate a critical-value table CSV")
    g.add_argument("--method", required=True)
    g.add_argument("--n-min", type=int, default=3)
    g.add_argument("--n-max", type=int, default=26)
    g.add_argument("--q-list", default=None, help="comma-separated quantile levels")
    g.add_argument("--exact", action=argparse.BooleanOptionalAction, default=True,
                   help="use exact values where available (--no-exact simulates everything)")
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("--out", required=True)
    _add_sim_flags(g)
    g.set_defaults(func=_cmd_gen_table)

    c = sub.add_parser("critical", help="query one critical value")
    c.add_argument("--method", required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--nf", type=int, required=True)
    c.add_argument("--q", type=float, required=True)
    c.add_argument("--exact", action="store_true")
    c.add_argument("--table", default=None, help="CSV from gen-table")
    c.add_argument("--simulate", action="store_true")
    _add_sim_flags(c)
    c.set_defaults(func=_cmd_critical)

    m = sub.add_parser("combine", help="combine observed p-values and decide")
    m.add_argument("--method", required=True)
    m.add_argument("--alpha", type=float, required=True)
    m.add_argument("--nf", type=int, required=True,
                   help="assumed number of fake p-values among the inputs")
    m.add_argument("--p", default=None, help="comma-separated p-values")
    m.add_argument("--p-file", default=None, help="file with one p-value per line")
    m.add_argument("--tail", choices=[t.value for t in Tail], default=None)
    m.add_argument("--table", default=None, help="CSV to look critical values up in")
    m.add_argument("--json", action="store_true")
    _add_sim_flags(m)
    m.set_defaults(func=_cmd_combine)

    v = sub.add_parser("validate", help="KS check of one simulated ECDF vs the exact law")
    v.add_argument("--method", required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--nf", type=int, required=True)
    v.add_argument("--out", default=None, help="optionally dump the ECDF CSV here")
    _add_sim_flags(v, with_R=False)
    v.set_defaults(func=_cmd_validate)

    e = sub.add_parser("ecdf", help="dump one replica's ECDF as CSV")
    e.add_argument("--method", required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--nf", type=int, required=True)
    e.add_argument("--out", required=True)
    _add_sim_flags(e, with_R=False)
    e.set_defaults(func=_cmd_ecdf)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None and hasattr(args, "seed"):
        args.seed = _default_seed()
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except (TableLookupError, UnsupportedExactError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except (TableParseError, DomainError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (TableGenerationError, ConvergenceError, BracketError, OSError, ArithmeticError) as err:
        print(f"numeric failure: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
