"""Command-line front end.

One batch command per invocation; ``--json`` switches the report to JSON
carrying exactly the same values (text output is rendered from the same
dictionary, so the two modes cannot drift).  Rationals appear as
``num/den`` strings in JSON and as ``num/den (~ decimal)`` in text.

Exit codes: 0 success; 2 malformed input or an exceeded size cap; 3 a
documented precondition genuinely unmet (e.g. the exact-formula command on
a source whose singleton partition is beaten); 4 an internal cross-check
failure, which indicates a bug rather than bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .allocation import run_allocation, verify_allocation
from .capacity import (
    MINIMIZER_LIMIT,
    club_relation,
    conditional_sk_value,
    lp_capacity,
    sk_capacity,
)
from .errors import InputError, PreconditionError, VerificationError
from .generators import make_instance, render_instance_file
from .model import (
    EntropyOracle,
    FunctionObservable,
    Hypergraph,
    PinSource,
    TabularSource,
    load_hypergraph,
    load_pmf,
)
from .partitions import ENUMERATION_CAP
from .typecheck import (
    is_type_s,
    observable_bound_check,
    rsk_uniform_pin,
    type_s_by_enumeration,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_VERIFICATION = 4


# -- value encoding ----------------------------------------------------


def _enc(v):
    """JSON-ready form: Fractions become 'num/den' strings."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    return v


def _fmt(v) -> str:
    """Text form of an encoded value; rationals gain a 6-place decimal."""
    if isinstance(v, str) and "/" in v:
        f = Fraction(v)
        return f"{v} (~ {float(f):.6f})"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    if isinstance(v, float):
        return repr(v)
    return str(v)


# -- input loading -----------------------------------------------------


def _load_instance(args) -> tuple[Hypergraph | TabularSource, str]:
    """Resolve the positional file and/or --gen spec into an instance."""
    gen = getattr(args, "gen", None)
    path = getattr(args, "input", None)
    if gen:
        return make_instance(gen), f"gen:{gen}"
    if not path:
        raise InputError("no input: give a file or --gen SPEC")
    text = _read_file(path)
    kind = getattr(args, "kind", None)
    if kind is None:
        suffix = Path(path).suffix.lower()
        if suffix == ".hg":
            kind = "pin"
        elif suffix == ".pmf":
            kind = "pmf"
        else:
            raise InputError(f"cannot infer kind from {path!r}; pass --kind pin|pmf")
    if kind == "pin":
        return load_hypergraph(text), path
    return load_pmf(text), path


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc}") from exc


def _as_oracle(instance: Hypergraph | TabularSource) -> EntropyOracle:
    return PinSource(instance) if isinstance(instance, Hypergraph) else instance


def _require_hypergraph(instance, what: str) -> Hypergraph:
    if not isinstance(instance, Hypergraph):
        raise InputError(f"{what} needs a hypergraph input")
    return instance


# -- command handlers (each returns a JSON-ready dict) ------------------


def _cmd_analyze(args) -> dict:
    instance, origin = _load_instance(args)
    oracle = _as_oracle(instance)
    if args.limit_minimizers < 0:
        raise InputError("--limit-minimizers must be >= 0")
    limit = None if args.limit_minimizers == 0 else args.limit_minimizers
    report = sk_capacity(oracle, limit=limit, include_lp=args.lp, cap=args.enum_cap)
    out = {
        "input": origin,
        "kind": "pin" if isinstance(instance, Hypergraph) else "pmf",
        "m": oracle.m,
        "i_capacity": _enc(report.i_capacity),
        "r_co": _enc(report.r_co),
        "minimizers": [p.to_lists() for p in report.minimizers],
        "minimizer_count": report.minimizer_count,
    }
    if isinstance(instance, Hypergraph):
        out["edges"] = instance.edge_count
    if args.lp:
        out["lp_value"] = _enc(report.lp_value)
        out["lambda"] = report.lambda_star_witness.to_json_dict()
    return out


def _render_analyze(out: dict) -> list[str]:
    lines = [f"kind: {out['kind']}", f"m: {out['m']}"]
    if "edges" in out:
        lines.append(f"edges: {out['edges']}")
    lines.append(f"i_capacity = {_fmt(out['i_capacity'])}")
    lines.append(f"r_co = {_fmt(out['r_co'])}")
    shown = len(out["minimizers"])
    lines.append(f"minimizers: {out['minimizer_count']} total, showing {shown}")
    lines.extend(f"  {json.dumps(cells)}" for cells in out["minimizers"])
    if "lp_value" in out:
        lines.append(f"lp_value = {_fmt(out['lp_value'])}")
        lines.append("lambda:")
        lines.extend(f"  {k} -> {_fmt(v)}" for k, v in out["lambda"].items())
    return lines


def _cmd_typecheck(args) -> dict:
    instance, origin = _load_instance(args)
    oracle = _as_oracle(instance)
    if oracle.m >= 3:
        verdict = is_type_s(oracle)
    else:
        verdict = type_s_by_enumeration(oracle)
    return {
        "input": origin,
        "m": oracle.m,
        "is_minimizer": verdict.is_minimizer,
        "is_unique": verdict.is_unique,
        "worst_b": list(verdict.worst_b) if verdict.worst_b else None,
        "margin": _enc(verdict.margin),
    }


def _render_typecheck(out: dict) -> list[str]:
    return [
        f"m: {out['m']}",
        f"is_minimizer: {_fmt(out['is_minimizer'])}",
        f"is_unique: {_fmt(out['is_unique'])}",
        f"worst_b: {out['worst_b'] if out['worst_b'] else 'none'}",
        f"margin = {_fmt(out['margin'])}",
    ]


def _cmd_rsk(args) -> dict:
    instance, origin = _load_instance(args)
    h = _require_hypergraph(instance, "rsk")
    result = rsk_uniform_pin(h)
    return {
        "input": origin,
        "m": result.m,
        "t": result.t,
        "edges": result.edge_count,
        "r_sk": _enc(result.r_sk),
        "r_co": _enc(result.r_co),
    }


def _render_rsk(out: dict) -> list[str]:
    return [
        f"m: {out['m']}",
        f"t: {out['t']}",
        f"edges: {out['edges']}",
        f"r_sk = {_fmt(out['r_sk'])}",
        f"r_co = {_fmt(out['r_co'])}",
    ]


def _cmd_lp(args) -> dict:
    instance, origin = _load_instance(args)
    oracle = _as_oracle(instance)
    report = lp_capacity(oracle)
    return {
        "input": origin,
        "m": oracle.m,
        "lp_value": _enc(report.value),
        "lambda": report.witness.to_json_dict(),
    }


def _render_lp(out: dict) -> list[str]:
    lines = [f"m: {out['m']}", f"lp_value = {_fmt(out['lp_value'])}", "lambda:"]
    lines.extend(f"  {k} -> {_fmt(v)}" for k, v in out["lambda"].items())
    return lines


def _make_observable(source, spec: str, seed: int, labels: int) -> FunctionObservable:
    spec = spec.strip().lower()
    if spec == "identity":
        return FunctionObservable.identity(source)
    if spec == "constant":
        return FunctionObservable.constant(source)
    if spec.startswith("edge:"):
        if not isinstance(source, PinSource):
            raise InputError("edge observables need a hypergraph input")
        try:
            index = int(spec.split(":", 1)[1])
        except ValueError:
            raise InputError(f"bad edge observable {spec!r}") from None
        return FunctionObservable.edge_projection(source, index)
    if spec == "random":
        rng = np.random.default_rng(seed)
        return FunctionObservable.random_labels(source, labels, rng)
    raise InputError(f"unknown observable {spec!r} (identity|constant|edge:K|random)")


def _cmd_conditional(args) -> dict:
    instance, origin = _load_instance(args)
    oracle = _as_oracle(instance)
    obs = _make_observable(oracle, args.observable, args.seed, args.labels)
    value = conditional_sk_value(obs)
    h_label = obs.label_entropy()
    out = {
        "input": origin,
        "m": oracle.m,
        "observable": obs.name,
        "h_label": h_label,
        "value": value,
    }
    if isinstance(instance, Hypergraph):
        t = instance.uniform_size()
        if t is not None and t >= 2 and instance.m >= 2:
            bound = (t - 1) / (instance.m - 1) * (instance.edge_count - h_label)
            out["uniform_pin_bound"] = bound
    return out


def _render_conditional(out: dict) -> list[str]:
    lines = [
        f"m: {out['m']}",
        f"observable: {out['observable']}",
        f"h_label = {_fmt(out['h_label'])}",
        f"value = {_fmt(out['value'])}",
    ]
    if "uniform_pin_bound" in out:
        lines.append(f"uniform_pin_bound = {_fmt(out['uniform_pin_bound'])}")
    return lines


def _load_club_operand(path: str, kind: str | None) -> EntropyOracle:
    text = _read_file(path)
    if kind is None:
        suffix = Path(path).suffix.lower()
        kind = {"hg": "pin", "pmf": "pmf"}.get(suffix.lstrip("."))
        if kind is None:
            raise InputError(f"cannot infer kind from {path!r}; pass --kind-a/--kind-b")
    return PinSource(load_hypergraph(text)) if kind == "pin" else load_pmf(text)


def _cmd_club(args) -> dict:
    x = _load_club_operand(args.input_a, args.kind_a)
    y = _load_club_operand(args.input_b, args.kind_b)
    rel = club_relation(x, y, cap=args.enum_cap)
    return {
        "m": x.m,
        "i_x": _enc(rel.i_x),
        "i_y": _enc(rel.i_y),
        "i_z": _enc(rel.i_z),
        "superadditive": rel.superadditive,
        "equality": rel.equality,
        "shared_minimizer": rel.shared_minimizer,
    }


def _render_club(out: dict) -> list[str]:
    return [
        f"m: {out['m']}",
        f"i_x = {_fmt(out['i_x'])}",
        f"i_y = {_fmt(out['i_y'])}",
        f"i_z = {_fmt(out['i_z'])}",
        f"superadditive: {_fmt(out['superadditive'])}",
        f"equality: {_fmt(out['equality'])}",
        f"shared_minimizer: {_fmt(out['shared_minimizer'])}",
    ]


def _cmd_alloc(args) -> dict:
    state = run_allocation(args.m, args.t, trace=args.trace)
    check = verify_allocation(state)
    if state.status == "error" or not (check.error_free and check.exhaustive):
        raise VerificationError(
            f"allocation self-check failed at {state.error_at}: "
            f"error_free={check.error_free} exhaustive={check.exhaustive}"
        )
    out = {
        "m": args.m,
        "t": args.t,
        "edges": len(state.order),
        "status": state.status,
        "allocations": [
            {
                "edge": list(a.edge),
                "index": a.index,
                "source_row": a.source_row,
                "target_row": a.target_row,
            }
            for a in state.allocations
        ],
        "error_free": check.error_free,
        "exhaustive": check.exhaustive,
    }
    if args.trace:
        out["initial_table"] = {str(k): list(v) for k, v in state.initial_table.items()}
        out["snapshots"] = [
            {str(k): list(v) for k, v in snap.items()} for snap in state.snapshots
        ]
    return out


def _alloc_line(a: dict) -> str:
    edge = "".join(str(v) for v in a["edge"])
    return f"Q_({edge}) from Q({a['source_row']}) -> R({a['target_row']})"


def _render_table(table: dict[str, list[int]], n_cols: int) -> list[str]:
    header = "      j: " + " ".join(f"{j:>2}" for j in range(1, n_cols + 1))
    lines = [header]
    for k in sorted(table, key=int):
        lines.append(f"  Q({k}): " + " ".join(f"{v:>2}" for v in table[k]))
    return lines


def _render_alloc(out: dict) -> list[str]:
    lines = [
        f"m: {out['m']}",
        f"t: {out['t']}",
        f"edges: {out['edges']}",
        f"allocations: {len(out['allocations'])}",
    ]
    if "initial_table" in out:
        lines.append("initial table:")
        lines.extend(_render_table(out["initial_table"], out["edges"]))
    for idx, a in enumerate(out["allocations"]):
        lines.append(_alloc_line(a))
        if "snapshots" in out:
            lines.extend(_render_table(out["snapshots"][idx], out["edges"]))
    lines.append(f"status: {out['status']}")
    lines.append(f"error_free: {_fmt(out['error_free'])}")
    lines.append(f"exhaustive: {_fmt(out['exhaustive'])}")
    return lines


def _cmd_bound(args) -> dict:
    instance, origin = _load_instance(args)
    h = _require_hypergraph(instance, "the bound check")
    result = observable_bound_check(
        h, args.trials, args.seed, include_structured=args.structured
    )
    return {
        "input": origin,
        "t": result.t,
        "edges": result.edge_count,
        "trials": result.trials,
        "evaluated": result.evaluated,
        "max_ratio": result.max_ratio,
        "violations": result.violations,
    }


def _render_bound(out: dict) -> list[str]:
    return [
        f"t: {out['t']}",
        f"edges: {out['edges']}",
        f"trials: {out['trials']} (evaluated {out['evaluated']})",
        f"max_ratio = {_fmt(out['max_ratio'])}",
        f"violations: {out['violations']}",
    ]


def _cmd_gen(args) -> dict | None:
    instance = make_instance(args.spec)
    text = render_instance_file(instance, args.spec)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        return {"spec": args.spec, "out": args.out, "written": True}
    sys.stdout.write(text)
    return None


def _render_gen(out: dict) -> list[str]:
    return [f"wrote {out['out']}"]


_RENDERERS = {
    "analyze": _render_analyze,
    "typecheck": _render_typecheck,
    "rsk": _render_rsk,
    "lp": _render_lp,
    "conditional": _render_conditional,
    "club": _render_club,
    "alloc": _render_alloc,
    "mi-bound": _render_bound,
    "gen": _render_gen,
}


def render_text(command: str, out: dict) -> str:
    """The text report for a command's JSON dictionary (shared by both
    output modes, which keeps them value-identical)."""
    return "\n".join(_RENDERERS[command](out))


# -- parser ------------------------------------------------------------


def _add_common(sub, *, gen: bool = True, kind: bool = True) -> None:
    if gen:
        sub.add_argument("input", nargs="?", help="instance file (.hg or .pmf)")
        sub.add_argument("--gen", help="generate the input instead: name:key=value,...")
    if kind:
        sub.add_argument("--kind", choices=["pin", "pmf"], help="override kind inference")
    sub.add_argument("--json", action="store_true", help="emit a JSON report")
    sub.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="K",
        help="parallelism hint (results are identical for every value)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skpin",
        description="Exact secret-key capacity and omniscience analysis of "
        "hypergraph PIN and tabular sources.",
    )
    parser.add_argument("--version", action="version", version=f"skpin {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("analyze", help="capacity, omniscience rate, minimizers")
    _add_common(p)
    p.add_argument("--lp", action="store_true", help="also solve and cross-check the LP")
    p.add_argument(
        "--limit-minimizers",
        type=int,
        default=MINIMIZER_LIMIT,
        metavar="N",
        help="truncate the reported minimizer list (0 = keep all)",
    )
    p.add_argument(
        "--enum-cap",
        type=int,
        default=ENUMERATION_CAP,
        metavar="M",
        help="raise the partition-enumeration cap (default %(default)s)",
    )
    p.set_defaults(func=_cmd_analyze)

    p = subs.add_parser("typecheck", help="singleton-minimizer (type S) verdict")
    _add_common(p)
    p.set_defaults(func=_cmd_typecheck)

    p = subs.add_parser("rsk", help="exact communication complexity of a type-S uniform PIN")
    _add_common(p, kind=False)
    p.set_defaults(func=_cmd_rsk, kind="pin")

    p = subs.add_parser("lp", help="weight-LP value and optimal weights")
    _add_common(p)
    p.set_defaults(func=_cmd_lp)

    p = subs.add_parser("conditional", help="capacity expression given an observable L")
    _add_common(p)
    p.add_argument(
        "--observable",
        default="constant",
        metavar="SPEC",
        help="identity | constant | edge:K | random (default %(default)s)",
    )
    p.add_argument("--seed", type=int, default=0, help="seed for random observables")
    p.add_argument("--labels", type=int, default=4, help="label count for random observables")
    p.set_defaults(func=_cmd_conditional)

    p = subs.add_parser("club", help="capacities of a coordinatewise pairing")
    p.add_argument("input_a", help="first instance file")
    p.add_argument("input_b", help="second instance file")
    p.add_argument("--kind-a", choices=["pin", "pmf"], help="override kind of the first file")
    p.add_argument("--kind-b", choices=["pin", "pmf"], help="override kind of the second file")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--threads", type=int, default=1, metavar="K", help="parallelism hint")
    p.add_argument(
        "--enum-cap",
        type=int,
        default=ENUMERATION_CAP,
        metavar="M",
        help="raise the partition-enumeration cap",
    )
    p.set_defaults(func=_cmd_club)

    p = subs.add_parser("alloc", help="run and verify the availability-table allocation")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--trace", action="store_true", help="record the table after every step")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--threads", type=int, default=1, metavar="K", help="parallelism hint")
    p.set_defaults(func=_cmd_alloc)

    p = subs.add_parser(
        "mi-bound",
        aliases=["lemma2"],
        help="empirical per-terminal information bound on random observables",
    )
    _add_common(p, kind=False)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--structured", action="store_true", help="also run identity/constant/edge maps")
    p.set_defaults(func=_cmd_bound, kind="pin", command_name="mi-bound")

    p = subs.add_parser("gen", help="emit a named instance file")
    p.add_argument("spec", help="name:key=value,... (see README for names)")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.set_defaults(func=_cmd_gen, command_name="gen")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    command = getattr(args, "command_name", args.command)
    try:
        out = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    if out is not None:
        if args.json:
            print(json.dumps(out, indent=2))
        else:
            print(render_text(command, out))
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
