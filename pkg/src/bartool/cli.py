"""Command-line interface emitting JSON certificates.

Certificates are deterministic: the same command on the same instance
file reproduces the output byte for byte (keys sorted, no timestamps,
single-threaded evaluation).  Exit codes: 0 success, 2 validation
failure, 3 budget exhaustion, 4 internal error.  The environment
variable ``BARTOOL_LEVEL_CAP`` overrides the level-size cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import bars as bars_mod
from .bars import HOLDS, CSet, DecBar, Pi01Bar, cbar_to_pi01, monotonize, pi01_to_cbar
from .continuity import NbhdFn, uniform_modulus_near_fan
from .errors import (
    BartoolError,
    BudgetExhausted,
    InstanceValidationError,
    KindNotSupportedError,
    LevelCapExceeded,
)
from .fan_embed import agreement_modulus, image_closure, transfer_bound
from .instances import Instance, load_instance
from .metric import PointMap, uniform_modulus_near_compact
from .seqcode import to_json
from .trees import DEFAULT_LEVEL_CAP, level

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_INTERNAL = 4


def _level_cap() -> int:
    raw = os.environ.get("BARTOOL_LEVEL_CAP")
    return int(raw) if raw else DEFAULT_LEVEL_CAP


def _emit(cert: dict) -> None:
    sys.stdout.write(json.dumps(cert, sort_keys=True, separators=(",", ":")) + "\n")


def _frac(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _lookup(table: dict, ident: str, what: str):
    if ident not in table:
        raise InstanceValidationError(f"no {what} named {ident!r} in the instance")
    return table[ident]


def _bar_kind(rep) -> str:
    return {DecBar: "dec", Pi01Bar: "pi01", CSet: "cbar"}[type(rep)]


def _cmd_uniform_bound(args):
    instance = load_instance(args.instance)
    fan = _lookup(instance.fans, args.fan, "fan")
    rep = _lookup(instance.bars, args.bar, "bar")
    if args.monotonize:
        if not isinstance(rep, DecBar):
            raise InstanceValidationError("--monotonize applies to decidable bars only")
        rep = monotonize(rep)
    search = bars_mod.find_uniform_bound(
        fan, rep, max_depth=args.max_depth, budget=args.budget, level_cap=_level_cap()
    )
    result: dict = {"kind": _bar_kind(rep)}
    if search.status == HOLDS:
        result["N"] = search.bound
        if search.refutation is not None:
            result["minimality_witness"] = {
                "node": to_json(search.refutation.witness_node),
                "depth": search.bound - 1,
            }
        status = EXIT_OK
    else:
        result["status"] = "notFoundWithinBudget"
        status = EXIT_BUDGET
    _emit(
        {
            "command": "uniform-bound",
            "instance": instance.digest,
            "ids": {"fan": args.fan, "bar": args.bar},
            "budgets": {"max_depth": args.max_depth, "budget": args.budget},
            "result": result,
        }
    )
    return status


def _cmd_embed(args):
    instance = load_instance(args.instance)
    fan = _lookup(instance.fans, args.fan, "fan")
    cap = _level_cap()
    if args.transfer is not None:
        img = image_closure(fan)
        result = {"M": transfer_bound(img, args.transfer, level_cap=cap)}
        budgets = {"image_depth": args.transfer}
    else:
        result = {"phi": agreement_modulus(fan, args.modulus, level_cap=cap)}
        budgets = {"modulus_depth": args.modulus}
    _emit(
        {
            "command": "embed",
            "instance": instance.digest,
            "ids": {"fan": args.fan},
            "budgets": budgets,
            "result": result,
        }
    )
    return EXIT_OK


def _grid_summary(fn: PointMap, eps: Fraction, delta: Fraction, step: Fraction, offsets: int):
    if fn.value_at is None:
        return None
    violations = 0
    pairs = 0
    x = Fraction(0)
    while x <= 1:
        for t in range(-offsets, offsets + 1):
            u = x + delta * t / (offsets + 1)
            pairs += 1
            if abs(fn.value_at(x) - fn.value_at(u)) >= eps:
                violations += 1
        x += step
    return {"step": _frac(step), "pairs": pairs, "violations": violations}


def _cmd_modulus(args):
    instance = load_instance(args.instance)
    cap = _level_cap()
    if args.compact is not None:
        metric = _lookup(instance.metrics, args.compact, "metric instance")
        fn = _lookup(instance.functions, args.fn, "function")
        if not isinstance(fn, PointMap):
            raise InstanceValidationError(
                f"function {args.fn!r} is not a point function on a presented space"
            )
        if args.epsilon is None:
            raise InstanceValidationError("--epsilon is required for metric codomains")
        eps = Fraction(args.epsilon)
        modulus = uniform_modulus_near_compact(
            metric.presentation, metric.nets, fn, eps, max_depth=args.max_depth, t0=metric.t0
        )
        grid = _grid_summary(fn, eps, modulus.delta, Fraction(1, 100), 8)
        result = {
            "N": modulus.certificate.bound,
            "delta": _frac(modulus.delta),
            "epsilon": _frac(eps),
            "eta": _frac(modulus.eta),
            "net_size": modulus.net_size,
        }
        if grid is not None:
            result["grid"] = grid
        ids = {"compact": args.compact, "fn": args.fn}
    else:
        if args.fan is None:
            raise InstanceValidationError("pass --fan or --compact to modulus")
        fan = _lookup(instance.fans, args.fan, "fan")
        fn = _lookup(instance.functions, args.fn, "function")
        if not isinstance(fn, NbhdFn):
            raise InstanceValidationError(
                f"function {args.fn!r} is not a neighborhood function on Baire space"
            )
        cert = uniform_modulus_near_fan(
            fan, fn, max_depth=args.max_depth, budget=args.budget, level_cap=cap
        )
        result = {"N": cert.bound, "search_N": cert.search_bound}
        ids = {"fan": args.fan, "fn": args.fn}
    _emit(
        {
            "command": "modulus",
            "instance": instance.digest,
            "ids": ids,
            "budgets": {"max_depth": args.max_depth, "budget": args.budget},
            "result": result,
        }
    )
    return EXIT_OK


def _sample_nodes(depth: int):
    from .seqcode import decode

    return [decode(n) for n in range(24)]


def _cmd_convert(args):
    instance = load_instance(args.instance)
    rep = _lookup(instance.bars, args.bar, "bar")
    fan_id = args.fan
    if fan_id is None:
        if len(instance.fans) == 1:
            fan_id = next(iter(instance.fans))
        elif args.to == "cbar":
            raise InstanceValidationError(
                "conversion to a c-set needs a fan; pass --fan or declare exactly one"
            )
    if args.to == "cbar":
        if not isinstance(rep, Pi01Bar):
            raise KindNotSupportedError(
                f"cannot convert a {_bar_kind(rep)} bar to a c-set"
            )
        fan = _lookup(instance.fans, fan_id, "fan")
        cset = pi01_to_cbar(fan, rep)
        table = {",".join(map(str, c)): cset.d(c) for c in _sample_nodes(4)}
        # containment summary: induced predicate implies the original on fan levels
        contained = True
        for n in range(4):
            for a in level(fan, n, cap=_level_cap()):
                q_holds, _ = bars_mod.holds_at(cset, a, budget=args.budget)
                p_holds, _ = bars_mod.holds_at(rep, a, budget=args.budget)
                if q_holds and not p_holds:
                    contained = False
        result = {
            "kind": "cbar",
            "d_table": table,
            "containment_ok": contained,
        }
        ids = {"bar": args.bar, "fan": fan_id}
    elif args.to == "pi01":
        if not isinstance(rep, CSet):
            raise KindNotSupportedError(
                f"cannot convert a {_bar_kind(rep)} bar to an intersection bar"
            )
        pi01 = cbar_to_pi01(rep)
        agree = True
        for a in _sample_nodes(4):
            q_holds, _ = bars_mod.holds_at(rep, a, budget=args.budget)
            p_holds, _ = bars_mod.holds_at(pi01, a, budget=args.budget)
            if q_holds != p_holds:
                agree = False
        result = {
            "kind": "pi01",
            "family": "index n accepts a when d holds at a extended by decode(n)",
            "agreement_ok": agree,
        }
        ids = {"bar": args.bar}
    else:
        raise InstanceValidationError(f"unknown conversion target {args.to!r}")
    _emit(
        {
            "command": "convert",
            "instance": instance.digest,
            "ids": ids,
            "budgets": {"budget": args.budget},
            "result": result,
        }
    )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bartool",
        description="Fan/bar calculus with certified uniformity bounds and moduli.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("uniform-bound", help="least uniform depth of a bar on a fan")
    p.add_argument("instance")
    p.add_argument("--fan", required=True)
    p.add_argument("--bar", required=True)
    p.add_argument("--max-depth", type=int, default=32)
    p.add_argument("--budget", type=int, default=128)
    p.add_argument("--monotonize", action="store_true")
    p.set_defaults(run=_cmd_uniform_bound)

    p = sub.add_parser("embed", help="binary-image modulus or transferred bound")
    p.add_argument("instance")
    p.add_argument("--fan", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--modulus", type=int, help="agreement modulus at this source depth")
    group.add_argument("--transfer", type=int, help="transfer a bound from this image depth")
    p.set_defaults(run=_cmd_embed)

    p = sub.add_parser("modulus", help="uniform continuity modulus near a fan or compact set")
    p.add_argument("instance")
    p.add_argument("--fan")
    p.add_argument("--compact")
    p.add_argument("--fn", required=True)
    p.add_argument("--epsilon")
    p.add_argument("--max-depth", type=int, default=24)
    p.add_argument("--budget", type=int, default=128)
    p.set_defaults(run=_cmd_modulus)

    p = sub.add_parser("convert", help="translate a bar between representations")
    p.add_argument("instance")
    p.add_argument("--bar", required=True)
    p.add_argument("--to", required=True, choices=["cbar", "pi01"])
    p.add_argument("--fan")
    p.add_argument("--budget", type=int, default=128)
    p.set_defaults(run=_cmd_convert)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except (InstanceValidationError, KindNotSupportedError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (BudgetExhausted, LevelCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except BartoolError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
