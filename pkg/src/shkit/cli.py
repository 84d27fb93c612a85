"""``shkit`` command line: compute, verify, compare, replay, list.

Exit codes: 0 success, 1 a bound violation or identity failure was found, 2 usage,
parse, dimension or compatibility error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import matrixfile
from .catalog import compare_bounds, evaluate_bound, get_spec, registry
from .core import compatible, make_space
from .errors import ShkitError
from .harness import TrialConfig, check_identity, gen_trial, identity_ids, run_suite
from .numerics import DEFAULT_RTOL

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(ShkitError):
    pass


def format_scalar(x: float) -> str:
    """Positional decimal with 12 significant digits, independent of locale."""
    x = float(x)
    if x == 0.0:
        return "0." + "0" * 12
    exponent = int(f"{x:.11e}".split("e")[1])
    return f"{x:.{max(11 - exponent, 0)}f}"


def _csv_list(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _selection(text: str | None):
    if text is None or text == "all":
        return None
    return tuple(_csv_list(text))


# --- compute -----------------------------------------------------------------

def cmd_compute(args) -> int:
    space = make_space(matrixfile.read(args.metric), args.rtol)
    T = compatible(space, matrixfile.read(args.op))
    if args.quantity == "wa":
        print(format_scalar(T.omega))
    elif args.quantity == "norm":
        print(format_scalar(T.norm))
    elif args.quantity == "sr":
        print(format_scalar(T.radius))
    elif args.quantity == "sharp":
        print(matrixfile.dumps(T.sharp.T))
    else:
        print(matrixfile.dumps(T.compressed))
    return EXIT_OK


# --- verify ------------------------------------------------------------------

def cmd_verify(args) -> int:
    config = TrialConfig(
        dim=args.dim, rank=args.rank, trials=args.trials, master_seed=args.seed, tol=args.tol,
        bound_ids=_selection(args.bounds), identity_ids=_selection(args.identities),
        stress=args.stress)
    report = run_suite(config)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{config.trials} trials, {len(report.bounds)} bounds, {len(report.identities)} identities: "
          f"{report.total_violations} violations, {report.identity_failures} identity failures, "
          f"{len(report.errors)} errors ({report.wall_time:.1f} s)", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_VIOLATION


# --- compare -----------------------------------------------------------------

def _write_rows(rows, target) -> None:
    writer = csv.writer(target, lineterminator="\r\n")
    writer.writerow(["bound_id", "lhs", "rhs", "slack"])
    for row in rows:
        writer.writerow([row.bound_id, repr(row.lhs), repr(row.rhs), repr(row.slack)])


def cmd_compare(args) -> int:
    ids = _csv_list(args.bounds)
    if not ids:
        raise UsageError("--bounds needs at least one id")
    specs = [get_spec(b) for b in ids]
    space = make_space(matrixfile.read(args.metric), args.rtol)
    roles = specs[0].roles
    if len(args.ops) != len(roles):
        raise UsageError(f"expected {len(roles)} operand files for roles {roles}, got {len(args.ops)}")
    ops = [matrixfile.read(f) for f in args.ops]
    params = {"lam": args.lam, "sign": args.sign}
    rows = compare_bounds(space, ids, ops, params)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            _write_rows(rows, fh)
    else:
        _write_rows(rows, sys.stdout)
    return EXIT_OK


# --- replay ------------------------------------------------------------------

def _replay_one(cx: dict, tol: float) -> tuple[str, bool]:
    kind = cx.get("kind", "bound")
    if kind == "identity":
        o = gen_trial(cx["dim"], cx["rank"], cx["trial_seed"], cx["spread"])
        res = check_identity(cx["id"], o)
        return f"identity {cx['id']} trial {cx.get('trial')}: residual {res!r}", res <= tol
    space = make_space(matrixfile.from_dict(cx["metric"]))
    spec = get_spec(cx["id"])
    ops = {role: matrixfile.from_dict(cx["operands"][role]) for role in spec.roles}
    res = evaluate_bound(space, cx["id"], ops, cx.get("params"), tol)
    line = (f"bound {res.bound_id} params {json.dumps(res.params, sort_keys=True)}: "
            f"lhs {res.lhs!r} rhs {res.rhs!r} slack {res.slack!r} holds {res.holds}")
    return line, res.holds


def cmd_replay(args) -> int:
    try:
        doc = json.loads(Path(args.file).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"invalid JSON in {args.file}: {exc}") from None
    if isinstance(doc, dict) and "counterexamples" in doc:
        items = doc["counterexamples"]
        tol = doc.get("config", {}).get("effective_tol", args.tol)
    elif isinstance(doc, dict) and "id" in doc:
        items, tol = [doc], args.tol
    else:
        raise UsageError("expected a report or a single counterexample object")
    try:
        results = [_replay_one(cx, tol) for cx in items]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed counterexample: {exc!r}") from None
    for line, _ in results:
        print(line)
    print(f"{len(results)} replayed, {sum(not ok for _, ok in results)} still failing", file=sys.stderr)
    return EXIT_OK if all(ok for _, ok in results) else EXIT_VIOLATION


# --- list --------------------------------------------------------------------

def cmd_list(args) -> int:
    for spec in registry():
        params = ",".join(spec.params) or "-"
        print(f"{spec.bound_id}\t{','.join(spec.roles)}\t{spec.direction}\t{params}\t{spec.statement}")
    if args.identities:
        for iid in identity_ids():
            print(f"{iid}\tidentity")
    return EXIT_OK


def _lam(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(value):
        raise argparse.ArgumentTypeError("lambda must be finite")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="one A-quantity of one operator")
    p.add_argument("quantity", choices=["wa", "norm", "sr", "sharp", "compress"])
    p.add_argument("--metric", required=True, help="MatrixFile with the PSD metric A")
    p.add_argument("--op", required=True, help="MatrixFile with the operator T")
    p.add_argument("--rtol", type=float, default=DEFAULT_RTOL, help="rank tolerance relative to max eigenvalue")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="fuzz the identity and bound suites")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--rank", type=int, default=None, help="defaults to --dim")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--bounds", default="all", help="comma separated ids or 'all'")
    p.add_argument("--identities", default="all", help="comma separated ids or 'all'")
    p.add_argument("--out", help="report path (stdout if omitted)")
    p.add_argument("--stress", action="store_true", help="eigenvalue spread 1e8, tol at least 1e-6")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", help="evaluate bounds sharing operand roles on one tuple")
    p.add_argument("--bounds", required=True, help="comma separated ids")
    p.add_argument("--metric", required=True)
    p.add_argument("--ops", nargs="+", required=True, help="operand MatrixFiles in role order")
    p.add_argument("--lambda", dest="lam", type=_lam, default=0.5)
    p.add_argument("--sign", type=int, choices=[1, -1], default=1)
    p.add_argument("--rtol", type=float, default=DEFAULT_RTOL)
    p.add_argument("--csv", help="output path (stdout if omitted)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("replay", help="re-evaluate the counterexamples in a report")
    p.add_argument("file")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("list", help="list registered bounds")
    p.add_argument("--identities", action="store_true")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "verify" and args.rank is None:
        args.rank = args.dim
    try:
        return args.func(args)
    except (ShkitError, OSError) as exc:
        print(f"shkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
