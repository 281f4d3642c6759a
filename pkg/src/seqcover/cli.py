"""Command-line front end.  Every command reads and writes UTF-8 JSON."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from . import selftest
from .covering import SequenceFamily, UncertifiedBound, family_bound, gauge_table
from .diagonal import (
    EvasionSet,
    FinitenessCertificate,
    PeakWitness,
    build_bump,
    build_evasion_set,
    build_windows_evasion,
    check_cm,
    verify_evasion,
)
from .errors import Falsification, PreconditionError
from .evdiff import eventually_different
from .exact import fmt
from .sequences import FunctionRule, check_condition2, check_condition3, make_rule


def _load(path: str | None, what: str) -> Any:
    if path is None:
        raise PreconditionError(f"missing --{what}")
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _with_precision(data: Any, precision: int) -> Any:
    # log rules that leave precision unspecified take the command-line value
    items = data if isinstance(data, list) else data.get("members", [data])
    for d in items:
        if isinstance(d, dict) and d.get("kind") == "logshift":
            d.setdefault("precision", precision)
    return data


def _rule(args):
    return make_rule(_with_precision(_load(args.rule, "rule"), args.precision))


def _family(args) -> SequenceFamily:
    return SequenceFamily.from_json(_with_precision(_load(args.family, "family"), args.precision))


def _eset_and_certs(args) -> tuple[EvasionSet, list[FinitenessCertificate]]:
    data = _load(args.eset, "eset")
    if "eset" in data:  # the document written by `evade`
        certs = data.get("certificates", [])
        data = data["eset"]
    else:
        certs = _load(args.certs, "certs") if args.certs else []
    return EvasionSet.from_json(data), [FinitenessCertificate.from_json(c) for c in certs]


def cmd_gauge(args) -> dict:
    rule = _rule(args)
    return {"rule": rule.to_json(), "i_max": args.i_max, "gauge": gauge_table(rule, args.i_max).to_json()}


def cmd_conditions(args) -> dict:
    rule = _rule(args)
    r = check_condition3(rule)
    return {
        "rule": rule.to_json(),
        "condition2": check_condition2(rule).to_json(),
        "condition3": {"holds": r is not None, "r": None if r is None else fmt(r)},
    }


def cmd_bound(args) -> dict:
    try:
        return {"bound": family_bound(_family(args), args.i_max).to_json()}
    except UncertifiedBound as exc:
        raise PreconditionError(f"{exc}; table so far {exc.truncated.to_json()['table']}") from exc


def cmd_evade(args) -> dict:
    family = _family(args)
    if args.peaks:
        peaks = PeakWitness.from_json(_load(args.peaks, "peaks"))
        exceptions = _load(args.exceptions, "exceptions") if args.exceptions else [[] for _ in family]
        eset, certs = build_windows_evasion(family, peaks, exceptions, args.k_max)
    else:
        bound = FunctionRule.from_json(_load(args.bound, "bound")) if args.bound else None
        eset, certs = build_evasion_set(family, args.k_max, bound)
    return {"eset": eset.to_json(), "certificates": [c.to_json() for c in certs]}


def cmd_verify(args) -> dict:
    eset, certs = _eset_and_certs(args)
    report = verify_evasion(_family(args), eset, certs, args.horizon)
    if report.falsifications:
        raise Falsification("; ".join(report.falsifications), report.to_json())
    return {"report": report.to_json()}


def cmd_cm(args) -> dict:
    peaks = PeakWitness.from_json(_load(args.peaks, "peaks"))
    horizon = args.horizon if args.horizon_set else None
    return {"cm": check_cm(_family(args), peaks, args.m, args.k_max, horizon).to_json()}


def cmd_bump(args) -> dict:
    eset, _ = _eset_and_certs(args)
    k = min(args.k_max, eset.k_max)
    return {"k_max": k, "bump": build_bump(eset, k).to_json()}


def cmd_evdiff(args) -> dict:
    data = _load(args.functions, "functions")
    if isinstance(data, dict):
        data = data["functions"]
    g, stab = eventually_different([FunctionRule.from_json(f) for f in data])
    return {"g": g.to_json(), "stabilization": stab}


def cmd_selftest(args) -> dict:
    out = selftest.run(args.seed)
    if not out["ok"]:
        raise Falsification("selftest failed", out)
    return out


COMMANDS = {
    "gauge": cmd_gauge,
    "conditions": cmd_conditions,
    "bound": cmd_bound,
    "evade": cmd_evade,
    "verify": cmd_verify,
    "cm": cmd_cm,
    "bump": cmd_bump,
    "evdiff": cmd_evdiff,
    "selftest": cmd_selftest,
}


class _Horizon(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.horizon_set = True


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _natural(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a natural number, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="seqcover", description=__doc__)
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--family", help="JSON list of sequence rules")
    p.add_argument("--rule", help="JSON sequence rule")
    p.add_argument("--peaks", help='JSON peak witness {"x": rule, "y": rule}')
    p.add_argument("--exceptions", help="JSON list (per member) of windows allowed two or more terms")
    p.add_argument("--bound", help="JSON function rule used as window bound")
    p.add_argument("--eset", help="evasion set JSON (or the full output of `evade`)")
    p.add_argument("--certs", help="certificate list JSON, if not inside --eset")
    p.add_argument("--functions", help="JSON list of function rules")
    p.add_argument("--m", type=_positive, default=2)
    p.add_argument("--i-max", type=_natural, default=20)
    p.add_argument("--k-max", type=_positive, default=1000)
    p.add_argument("--horizon", type=_positive, default=10_000, action=_Horizon)
    p.add_argument("--precision", type=_positive, default=20, help="bits for logarithmic rules")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write JSON here instead of standard output")
    p.set_defaults(horizon_set=False)
    return p


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = COMMANDS[args.command](args)
    except Falsification as exc:
        detail = exc.args[1] if len(exc.args) > 1 else None
        _emit({"error": {"type": "FALSIFICATION", "message": exc.args[0]}, "detail": detail}, args.out)
        return 3
    except (PreconditionError, ValueError, KeyError, TypeError, OSError, ArithmeticError) as exc:
        _emit({"error": {"type": type(exc).__name__, "message": str(exc)}}, args.out)
        return 2
    _emit(doc, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
