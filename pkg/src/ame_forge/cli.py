"""Command-line entry point: ``python -m ame_forge <command> ...``.

Every command writes one report (JSON by default) to stdout or ``--out``.
Domain errors exit with status 1 and a JSON body ``{"error": {"kind",
"message"}}``; usage errors exit with status 2.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

from . import constructors
from .composer import merge_compose_even, merge_compose_odd, split_party
from .errors import AmeForgeError, NonexistenceError
from .irreducibility import classify_state, classify_system
from .isometry import check_k_isometry
from .msa import (
    MagicSolutionArray,
    MsaProblem,
    MsaRegimeWarning,
    msa_to_state,
    solve_msa,
    standard_regime_triples,
    two_m_mn_problem,
)
from .tensor import PureState, default_tol, schmidt_coefficients
from .verifier import dimension_precheck, steer, verify_uniform

SWEEP_COLUMNS = ("l", "m", "n", "precheck", "msa_feasible", "constructed", "verified", "classify_status")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _load_state(path: str) -> PureState:
    try:
        return PureState.from_json(Path(path).read_text())
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read state from {path}: {exc}") from exc


def _parse_pairing(text: str | None):
    if text is None:
        return None
    try:
        return [tuple(int(v) for v in pair.split(":")) for pair in text.split(",") if pair]
    except ValueError as exc:
        raise UsageError(f"bad pairing {text!r}; expected p:q,p:q,...") from exc


# commands return a JSON-able payload and an exit code


def cmd_construct(args):
    params = {k: getattr(args, k) for k in ("l", "m", "n", "k") if getattr(args, k) is not None}
    if args.family == "direct-sum":
        if not args.psi or not args.phi:
            raise UsageError("direct-sum needs --psi and --phi")
        params = {"psi": _load_state(args.psi), "phi": _load_state(args.phi)}
    try:
        state = constructors.construct(args.family, **params)
    except KeyError as exc:
        raise UsageError(f"family {args.family} needs --{exc.args[0]}") from exc
    return state.to_dict(), 0


def cmd_solve_msa(args):
    l, m, n = args.dims
    relaxed = args.relaxed or args.shifts is not None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", MsaRegimeWarning)
        problem = MsaProblem(l, m, n, args.shifts, relaxed=relaxed)
    result = solve_msa(problem)
    payload = result.to_dict()
    payload["feasible"] = isinstance(result, MagicSolutionArray)
    payload.pop("infeasible", None)
    if caught:
        payload["warning"] = str(caught[0].message)
    return payload, 0


def cmd_verify(args):
    state = _load_state(args.state)
    k = state.n_parties // 2 if args.k is None else args.k
    verdict = verify_uniform(state, k, args.tol)
    return verdict.to_dict(), 0 if verdict.is_k_uniform else 1


def cmd_classify(args):
    if args.state:
        verdict = classify_state(_load_state(args.state), args.tol, seed=args.seed)
    elif args.dims:
        verdict = classify_system(args.dims)
    else:
        raise UsageError("classify needs --dims or a state file")
    return verdict.to_dict(), 0


def cmd_compose(args):
    a = _load_state(args.a)
    if args.mode == "split":
        if None in (args.party, args.da, args.db):
            raise UsageError("split needs --party, --da and --db")
        return split_party(a, args.party, args.da, args.db).to_dict(), 0
    if not args.b:
        raise UsageError(f"mode {args.mode} needs two state files")
    fn = merge_compose_even if args.mode == "even" else merge_compose_odd
    return fn(a, _load_state(args.b), _parse_pairing(args.pairing)).to_dict(), 0


def cmd_isometry_check(args):
    state = _load_state(args.state)
    k = (state.n_parties - 1) // 2 if args.k is None else args.k
    return check_k_isometry(state, k).to_dict(), 0


def cmd_steer(args):
    state = _load_state(args.state)
    outcomes = range(state.dims[args.party]) if args.outcome is None else [args.outcome]
    rows = []
    for o in outcomes:
        post, prob = steer(state, args.party, o)
        row = {"outcome": o, "probability": prob, "state": post.to_dict()}
        if post.n_parties == 2:
            row["schmidt_coefficients"] = [float(s) for s in schmidt_coefficients(post, [0]) if s > 1e-12]
        rows.append(row)
    return {"party": args.party, "outcomes": rows}, 0


def _sweep_cell(dims, problem, build, tol):
    pre = dimension_precheck(dims, 1).admissible
    feasible = None
    if problem is not None:
        feasible = isinstance(solve_msa(problem), MagicSolutionArray)
    try:
        state = build()
    except NonexistenceError:
        state = None
    verified = state is not None and verify_uniform(state, 1, tol).is_k_uniform
    return {
        "l": dims[0], "m": dims[1], "n": dims[2],
        "precheck": pre,
        "msa_feasible": feasible,
        "constructed": state is not None,
        "verified": verified,
        "classify_status": classify_system(dims).status,
    }


def _msa_builder(problem):
    def build():
        result = solve_msa(problem)
        if not isinstance(result, MagicSolutionArray):
            raise NonexistenceError("no magic solution array")
        return msa_to_state(result)
    return build


def cmd_sweep(args):
    tol = default_tol() if args.tol is None else args.tol
    rows = []
    if args.table == "2mmn":
        for m in range(1, args.m_max + 1):
            for n in range(1, m + 1):
                rows.append(_sweep_cell(
                    (2, m, m + n), two_m_mn_problem(m, n),
                    lambda m=m, n=n: constructors.construct_2mmn(m, n), tol,
                ))
    else:
        for l, m, n in standard_regime_triples(args.l_max, args.m_max):
            problem = MsaProblem(l, m, n)
            rows.append(_sweep_cell((l, m, n), problem, _msa_builder(problem), tol))
    return {"table": args.table, "rows": rows}, 0


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    return value


def _render_csv(payload) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in payload["rows"]:
        writer.writerow({k: _csv_cell(row[k]) for k in SWEEP_COLUMNS})
    return buf.getvalue()


def _render_text(payload, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_render_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(_render_text(item, indent + 1))
                lines.append(f"{pad}  --")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def render(payload, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        if "rows" not in payload:
            raise UsageError("--format csv is only available for sweep")
        return _render_csv(payload)
    return _render_text(payload) + "\n"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerance (default: $AME_FORGE_TOL or 1e-12)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text", "csv"), default="json")

    parser = _Parser(prog="ame-forge", description="Constructions and checks for AME states.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build a state from a closed-form family")
    p.add_argument("--family", required=True, choices=constructors.FAMILIES)
    for name in ("l", "m", "n", "k"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--psi")
    p.add_argument("--phi")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("solve-msa", parents=[common], help="find a magic solution array or a Farkas certificate")
    p.add_argument("--dims", type=int, nargs=3, required=True, metavar=("L", "M", "N"))
    p.add_argument("--shifts", type=int, nargs="+")
    p.add_argument("--relaxed", action="store_true")
    p.set_defaults(func=cmd_solve_msa)

    p = sub.add_parser("verify", parents=[common], help="check k-uniformity (exit 0 iff it holds)")
    p.add_argument("state")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classify", parents=[common], help="irreducibility verdict for a system or a state")
    p.add_argument("state", nargs="?")
    p.add_argument("--dims", type=int, nargs="+")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compose", parents=[common], help="split a party or merge two AME states")
    p.add_argument("--mode", required=True, choices=("split", "even", "odd"))
    p.add_argument("a")
    p.add_argument("b", nargs="?")
    p.add_argument("--pairing", help="shared slots as p:q,p:q,...")
    p.add_argument("--party", type=int)
    p.add_argument("--da", type=int)
    p.add_argument("--db", type=int)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("isometry-check", parents=[common], help="k-isometry constants of every split")
    p.add_argument("state")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_isometry_check)

    p = sub.add_parser("steer", parents=[common], help="computational-basis measurement on one party")
    p.add_argument("state")
    p.add_argument("--party", type=int, required=True)
    p.add_argument("--outcome", type=int)
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("sweep", parents=[common], help="existence tables as CSV or JSON")
    p.add_argument("--table", choices=("2mmn", "msa"), default="2mmn")
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--l-max", type=int, default=4)
    p.set_defaults(func=cmd_sweep)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, code = args.func(args)
        text = render(payload, args.format)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ame-forge: error: {exc}", file=sys.stderr)
        return 2
    except AmeForgeError as exc:
        body = {"error": {"kind": exc.kind, "message": str(exc)}}
        _emit(json.dumps(body, sort_keys=True, indent=2) + "\n", args.out)
        return 1
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
