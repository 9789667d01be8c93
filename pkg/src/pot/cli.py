"""Command-line entry point: ``pot <command> ...``.

Exit codes: 0 success, 1 invalid input or unwritable output, 2 a check or
fuzz run found a violation.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__, bounds, repro
from .distributions import Discrete, ThreePointHard, parse_distribution
from .dp_optimal import compute_dp
from .mediant import fuzz
from .oracle import (
    MAX_SEQUENCES,
    enumerate_small,
    exact_optimal_value,
    exact_policy_value,
    exact_prophet_value,
)
from .policies import (
    DEFAULT_A,
    DEFAULT_C,
    ThresholdPolicy,
    expected_policy_value,
    policy_from_name,
    prophet_value,
    trace_policy,
)
from .simulation import simulate

OUTPUT_DIR_ENV = "POT_OUTPUT_DIR"

EXIT_OK, EXIT_INVALID, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


# -- output -----------------------------------------------------------------

def _num(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2) + "\n"


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_num(v) for v in row])
    return buf.getvalue()


def write_atomic(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(args, text: str, default_name: str) -> None:
    """``--out`` wins; else ``$POT_OUTPUT_DIR/default_name``; else stdout."""
    out = getattr(args, "out", None)
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = Path(os.environ[OUTPUT_DIR_ENV]) / default_name
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        write_atomic(Path(out), text)


# -- commands ---------------------------------------------------------------

def cmd_thresholds(args) -> int:
    d = parse_distribution(args.dist)
    dp = compute_dp(d, args.n)
    rows = ((k, dp.G[k], dp.tau[k]) for k in range(dp.n + 1))
    emit(args, dumps_csv(("k", "G", "tau"), rows), "thresholds.csv")
    return EXIT_OK


def cmd_policy(args) -> int:
    d = parse_distribution(args.dist)
    pol = policy_from_name(args.policy, d, args.n, args.a, args.c)
    emit(args, pol.dumps(), f"policy_{args.policy}.json")
    return EXIT_OK


def _read_xs(spec: str) -> list[float]:
    p = Path(spec)
    text = p.read_text() if p.exists() else spec
    vals = []
    for row in csv.reader(io.StringIO(text)):
        for cell in row:
            cell = cell.strip()
            if not cell:
                continue
            try:
                vals.append(float(cell))
            except ValueError:
                raise ValueError(f"non-numeric realization {cell!r}") from None
    return vals


def cmd_replay(args) -> int:
    pol = ThresholdPolicy.loads(Path(args.policy).read_text())
    xs = _read_xs(args.xs)
    if any(x < 0 for x in xs):
        raise ValueError("realizations must be non-negative")
    rows = trace_policy(pol, xs)
    body = dumps_csv(("step", "x", "theta", "action", "steps", "total"),
                     ((r["step"], r["x"], r["theta"], r["action"], r["steps"], r["total"]) for r in rows))
    total = rows[-1]["total"] if rows else 0.0
    body += f"# total={_num(total)} prophet={_num(prophet_value(xs))}\n"
    emit(args, body, "replay.csv")
    return EXIT_OK


def cmd_simulate(args) -> int:
    d = parse_distribution(args.dist)
    pol = policy_from_name(args.policy, d, args.n, args.a, args.c)
    r = simulate(pol, d, args.n, args.trials, args.seed, workers=args.workers)
    rec = {"dist": d.describe(), "policy": args.policy, "n": args.n, **r.to_dict()}
    if args.policy == "simple":
        rec["a"] = args.a
    if args.policy == "onl":
        rec["c"] = args.c
    emit(args, dumps_json(rec), "simulate.json")
    return EXIT_OK


def cmd_bounds_simple(args) -> int:
    n = None if args.n is None else int(args.n)
    if args.optimize:
        a, ratio = bounds.optimize_simple_a(n)
    else:
        a = args.a
        ratio = bounds.simple_ratio_bound(n, a)
    rec = {"n": "inf" if n is None else n, "a": a, "ratio": ratio,
           "alg_coefficient": bounds.simple_alg_lower(n, a),
           "opt_coefficient": bounds.simple_opt_upper(n, a)}
    emit(args, dumps_json(rec), "bounds_simple.json")
    return EXIT_OK


def cmd_bounds_onl(args) -> int:
    t = bounds.alpha_tables(args.n, args.c)
    body = dumps_csv(("s", "prefix_alpha", "prefix_alpha_star", "ratio"), t.rows())
    emit(args, body, "bounds_onl.csv")
    print(f"min_ratio={_num(t.min_ratio)} argmin_s={t.argmin_s}", file=sys.stderr)
    return EXIT_OK


def cmd_bounds_hard(args) -> int:
    ev = bounds.hard_instance_ratio(args.n)
    emit(args, dumps_json(ev.to_dict()), "bounds_hard.json")
    return EXIT_OK


def cmd_bounds_limits(args) -> int:
    got = bounds.limit_checks(args.a, args.n)
    want = bounds.limit_targets(args.a)
    rec = {"a": args.a, "n": args.n,
           "values": list(got), "targets": list(want),
           "abs_errors": [abs(g - w) for g, w in zip(got, want)]}
    emit(args, dumps_json(rec), "bounds_limits.json")
    return EXIT_OK


def cmd_mediant_fuzz(args) -> int:
    rep = fuzz(args.instances, args.seed)
    lines = [f"instances={rep.instances} order_checks={rep.order_checks} "
             f"violations={len(rep.violations)} order_violations={len(rep.order_violations)}"]
    for inst in rep.violations:
        lines.append("violation " + inst.to_text())
    for s, inst in rep.order_violations:
        lines.append(f"order_violation s={s} " + inst.to_text())
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def _agree(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def cmd_oracle_check(args) -> int:
    d = parse_distribution(args.dist)
    if not isinstance(d, Discrete):
        raise ValueError("oracle check needs a discrete distribution (kind=discrete or kind=hard)")
    n = args.n
    full = exact_optimal_value(d, n)
    dp = compute_dp(d, n)
    prophet = exact_prophet_value(d, n)
    rows = [
        ("split DP == full DP", _agree(full.value, dp.G[n], 1e-12), f"{_num(dp.G[n])} vs {_num(full.value)}"),
        ("durations in {1, remaining}", full.structure_ok, ""),
        ("tau nondecreasing", bool(np.all(np.diff(dp.tau) >= 0)), ""),
        ("prophet >= optimum", prophet >= full.value - 1e-12, f"{_num(prophet)} vs {_num(full.value)}"),
    ]
    names = [args.policy] if args.policy else ["optimal", "simple", "onl"]
    policies = {}
    for name in names:
        try:
            policies[name] = policy_from_name(name, d, n, args.a, args.c)
        except ValueError as exc:
            rows.append((f"{name}: skipped", True, str(exc)))
    for name, pol in policies.items():
        v = exact_policy_value(pol, d, n)
        rows.append((f"{name}: recursion == oracle", _agree(v, expected_policy_value(pol, d), 1e-12), _num(v)))
        rows.append((f"{name}: optimum >= policy", full.value >= v - 1e-12, ""))
    if d.support_size ** n <= MAX_SEQUENCES:
        e = enumerate_small(d, n, workers=args.workers)
        rows.append(("enumeration == prophet", _agree(e.value, prophet, 1e-12), _num(e.value)))
        for name, pol in policies.items():
            e = enumerate_small(d, n, pol, workers=args.workers)
            v = exact_policy_value(pol, d, n)
            rows.append((f"{name}: enumeration == oracle", _agree(e.policy_value, v, 1e-12), ""))
    else:
        rows.append(("enumeration", True, f"skipped ({d.support_size}^{n} sequences)"))
    if isinstance(d, ThreePointHard) and n == d.n and n >= bounds.hard.MIN_N:
        rows.append(("hard closed form E[ALG]", _agree(bounds.hard_instance_alg(n), full.value, 1e-10), ""))
        rows.append(("hard closed form E[OPT]", _agree(bounds.hard_instance_opt(n), prophet, 1e-10), ""))
    width = max(len(r[0]) for r in rows)
    out = [f"{'check':<{width}}  result  detail"]
    for name, ok, detail in rows:
        out.append(f"{name:<{width}}  {'PASS' if ok else 'FAIL':<6}  {detail}".rstrip())
    sys.stdout.write("\n".join(out) + "\n")
    return EXIT_OK if all(r[1] for r in rows) else EXIT_VIOLATION


def cmd_repro(args) -> int:
    checks = []
    for cid, fn in repro.CRITERIA.items():
        t0 = time.perf_counter()
        checks.extend(fn(args.seed, args.trials, args.workers))
        print(f"criterion {cid}: {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    table = repro.summary_table(checks, args.seed, args.trials)
    sys.stdout.write(table)
    out = args.out or os.environ.get(OUTPUT_DIR_ENV)
    if out:
        out = Path(out)
        write_atomic(out / "summary.txt", table)
        write_atomic(out / "checks.json", dumps_json(repro.checks_to_json(checks)))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VIOLATION


# -- parser -----------------------------------------------------------------

def _positive_int(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text!r}")
    return v


def _n_or_inf(text: str):
    return None if text.lower() in ("inf", "infinity") else _positive_int(text)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value config file; its values override flags")
    common.add_argument("--workers", type=_positive_int, default=1, help="worker threads (results do not depend on it)")

    p = _Parser(prog="pot", description="Threshold policies and bounds for stopping with lock-in durations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("thresholds", parents=[common], help="optimal-policy table k,G,tau")
    s.add_argument("--dist", required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_thresholds, section="thresholds")

    s = sub.add_parser("policy", parents=[common], help="write a policy file")
    s.add_argument("--dist", required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--policy", choices=("optimal", "simple", "onl"), required=True)
    s.add_argument("--a", type=float, default=DEFAULT_A)
    s.add_argument("--c", type=float, default=DEFAULT_C)
    s.add_argument("--out")
    s.set_defaults(func=cmd_policy, section="policy")

    s = sub.add_parser("replay", parents=[common], help="trace a policy file on a realization")
    s.add_argument("--policy", required=True, help="policy file")
    s.add_argument("--xs", required=True, help="CSV file or inline comma list")
    s.add_argument("--out")
    s.set_defaults(func=cmd_replay, section="replay")

    s = sub.add_parser("simulate", parents=[common], help="paired Monte Carlo")
    s.add_argument("--dist", required=True)
    s.add_argument("--policy", choices=("optimal", "simple", "onl"), required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--trials", type=_positive_int, required=True)
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--a", type=float, default=DEFAULT_A)
    s.add_argument("--c", type=float, default=DEFAULT_C)
    s.add_argument("--out")
    s.set_defaults(func=cmd_simulate, section="simulate")

    b = sub.add_parser("bounds", help="closed-form bounds").add_subparsers(dest="which", required=True,
                                                                           parser_class=_Parser)
    s = b.add_parser("simple", parents=[common])
    s.add_argument("--n", type=_n_or_inf, default=None, help="horizon, or inf (default)")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--a", type=float, default=DEFAULT_A)
    g.add_argument("--optimize", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds_simple, section="bounds.simple")

    s = b.add_parser("onl", parents=[common])
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--c", type=float, default=DEFAULT_C)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds_onl, section="bounds.onl")

    s = b.add_parser("hard", parents=[common])
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds_hard, section="bounds.hard")

    s = b.add_parser("limits", parents=[common])
    s.add_argument("--a", type=float, required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds_limits, section="bounds.limits")

    m = sub.add_parser("mediant", help="weighted-mediant checks").add_subparsers(dest="which", required=True,
                                                                                 parser_class=_Parser)
    s = m.add_parser("fuzz", parents=[common])
    s.add_argument("--instances", type=_positive_int, default=10**5)
    s.add_argument("--seed", type=_seed, default=0)
    s.set_defaults(func=cmd_mediant_fuzz, section="mediant.fuzz")

    o = sub.add_parser("oracle", help="exact cross-checks").add_subparsers(dest="which", required=True,
                                                                          parser_class=_Parser)
    s = o.add_parser("check", parents=[common])
    s.add_argument("--dist", required=True)
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--policy", choices=("optimal", "simple", "onl"))
    s.add_argument("--a", type=float, default=DEFAULT_A)
    s.add_argument("--c", type=float, default=DEFAULT_C)
    s.set_defaults(func=cmd_oracle_check, section="oracle.check")

    s = sub.add_parser("repro", parents=[common], help="recompute the headline numbers")
    s.add_argument("--seed", type=_seed, default=repro.DEFAULT_SEED)
    s.add_argument("--trials", type=_positive_int, default=repro.DEFAULT_TRIALS)
    s.add_argument("--out", help="directory for summary.txt and checks.json")
    s.set_defaults(func=cmd_repro, section="repro")
    return p


def _find_action(parser: argparse.ArgumentParser, args, dest: str):
    # walk down to the subparser that produced these args
    stack = [parser]
    while stack:
        cur = stack.pop()
        for act in cur._actions:
            if isinstance(act, argparse._SubParsersAction):
                stack.extend(act.choices.values())
            elif act.dest == dest and cur.get_default("section") == args.section:
                return act
    return None


def _all_dests(parser: argparse.ArgumentParser) -> set[str]:
    out, stack = set(), [parser]
    while stack:
        cur = stack.pop()
        for act in cur._actions:
            if isinstance(act, argparse._SubParsersAction):
                stack.extend(act.choices.values())
            else:
                out.add(act.dest)
    return out


def apply_config(parser, args) -> None:
    """Overlay ``[pot]`` and ``[<section>]`` entries of the config file onto args."""
    cp = configparser.ConfigParser()
    if not cp.read(args.config):
        raise UsageError(f"cannot read config file {args.config!r}")
    for section in ("pot", args.section):
        if not cp.has_section(section):
            continue
        for key, raw in cp.items(section, raw=True):
            dest = key.replace("-", "_")
            act = _find_action(parser, args, dest)
            if act is None and section == "pot" and dest in _all_dests(parser):
                continue  # shared section: option belongs to another command
            if act is None or dest in ("config", "help"):
                raise UsageError(f"config [{section}] sets unknown option {key!r} for '{args.section}'")
            if isinstance(act, argparse._StoreTrueAction):
                val = cp.getboolean(section, key)
            else:
                try:
                    val = act.type(raw) if act.type else raw
                except (argparse.ArgumentTypeError, ValueError) as exc:
                    raise UsageError(f"config [{section}] {key}: {exc}") from None
                if act.choices is not None and val not in act.choices:
                    raise UsageError(f"config [{section}] {key}: {val!r} not in {sorted(act.choices)}")
            setattr(args, dest, val)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "config", None):
            apply_config(parser, args)
        return args.func(args)
    except (UsageError, ValueError, TypeError, OSError) as exc:
        print(f"pot: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
