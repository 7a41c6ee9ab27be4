"""Command-line front end: ``tensor-periods <command> [options]``.

Exit status: 0 on success, 2 when a verification or discovery does not
confirm, 1 on usage or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import combinatorics as comb
from .hodge import HodgeData, InvalidHodgeData, TotalMismatch, betti_split, criticality, filtration_profile
from .invariants import AdmissibilityType, InvariantError, construct_invariant, type_of_cp
from .oracle import (
    DEFAULT_BOUND,
    DEFAULT_TRIALS,
    RetryCapExceeded,
    adjudicate_variants,
    discover_exponents,
    verify_ratio_relation,
    verify_theorem,
)

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_json(spec: str, stdin_text: Optional[str] = None):
    if spec == "-":
        text = stdin_text if stdin_text is not None else sys.stdin.read()
    elif spec.lstrip().startswith(("{", "[")):
        text = spec
    else:
        path = Path(spec)
        if not path.exists():
            raise UsageError(f"no such file: {spec}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {spec!r}: {exc}") from exc


def _motive(spec: Optional[str], name: str) -> Optional[HodgeData]:
    if spec is None:
        return None
    data = _load_json(spec)
    if not isinstance(data, dict):
        raise UsageError(f"{name} must be a JSON object")
    return HodgeData.from_json(data).check()


def _pair(args) -> tuple[HodgeData, HodgeData]:
    if args.motive_a == "-" and args.motive_b == "-":
        raise UsageError("only one motive can be read from stdin")
    a, b = _motive(args.motive_a, "--motive-a"), _motive(args.motive_b, "--motive-b")
    if a is None or b is None:
        raise UsageError(f"'{args.command}' needs both --motive-a and --motive-b")
    return a, b


def _formula_json(h, h2, variant) -> dict:
    cp, cm = comb.period_formula(h, h2, variant)
    return {"c_plus": cp.to_json(), "c_minus": cm.to_json(), "c_plus_str": str(cp), "c_minus_str": str(cm)}


def cmd_analyze(args) -> tuple[dict, int]:
    if args.motive_a == "-" and args.motive_b == "-":
        raise UsageError("only one motive can be read from stdin")
    a, b = _motive(args.motive_a, "--motive-a"), _motive(args.motive_b, "--motive-b")
    if a is None:
        raise UsageError("analyze needs --motive-a")
    if b is None:
        split = betti_split(a)
        profile = filtration_profile(a)
        crit = criticality(profile, split)
        return {
            "motive": a.to_json(),
            "split": split.to_json(),
            "epsilon": a.epsilon,
            "profile": profile.to_json(),
            "criticality": crit.to_json(),
            "critical": crit.critical,
        }, EXIT_OK
    return {"motive_a": a.to_json(), "motive_b": b.to_json(), **comb.analysis(a, b)}, EXIT_OK


def cmd_formula(args) -> tuple[dict, int]:
    a, b = _pair(args)
    variants = comb.VARIANTS if args.variant == "auto" else (args.variant,)
    out = {
        "case": comb.classify(a, b),
        "formulas": {v: _formula_json(a, b, v) for v in variants},
        "ratio": str(comb.ratio_relation(a, b)),
    }
    return out, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    a, b = _pair(args)
    if args.variant == "auto":
        adj = adjudicate_variants(a, b, args.trials, args.seed, args.bound)
        return adj.to_json(), EXIT_OK if adj.exact else EXIT_FAILED
    report = verify_theorem(a, b, args.trials, args.seed, args.variant, args.bound)
    return report.to_json(), EXIT_OK if report.constant else EXIT_FAILED


def cmd_ratio(args) -> tuple[dict, int]:
    a, b = _pair(args)
    report = verify_ratio_relation(a, b, args.trials, args.seed, args.bound)
    return report.to_json(), EXIT_OK if report.constant else EXIT_FAILED


def cmd_discover(args) -> tuple[dict, int]:
    a, b = _pair(args)
    found = discover_exponents(a, b, args.trials, args.seed, args.bound)
    return found.to_json(), EXIT_OK if found.confirmed else EXIT_FAILED


def cmd_invariant(args) -> tuple[dict, int]:
    if args.type is not None:
        data = _load_json(args.type)
        try:
            t = AdmissibilityType.from_json(data)
        except (KeyError, TypeError) as exc:
            raise UsageError(f"malformed admissibility type: {exc}") from exc
    elif args.cp is not None:
        t = type_of_cp(args.cp[0], args.cp[1], args.split)
    else:
        raise UsageError("invariant needs --type or --cp N P")
    f = construct_invariant(t)
    return {"type": t.to_json(), "terms": f.to_json(), "string": str(f)}, EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "formula": cmd_formula,
    "verify": cmd_verify,
    "ratio": cmd_ratio,
    "discover": cmd_discover,
    "invariant": cmd_invariant,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tensor-periods", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--motive-a", metavar="FILE|-|JSON")
    common.add_argument("--motive-b", metavar="FILE|-|JSON")
    common.add_argument("--trials", type=int, default=None, help=f"default {DEFAULT_TRIALS}; discover picks its own")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--variant", choices=["ledger", "theorem", "auto"], default="auto")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "invariant":
            p.add_argument("--type", metavar="FILE|-|JSON", help="admissibility type JSON")
            p.add_argument("--cp", nargs=2, type=int, metavar=("N", "P"), help="type of c_p on rank N")
            p.add_argument("--split", nargs=2, type=int, metavar=("D_PLUS", "D_MINUS"))
    return parser


def _text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            scalars = isinstance(v, list) and all(isinstance(x, (int, str)) for x in v)
            if isinstance(v, (dict, list)) and v and not scalars:
                lines.append(f"{pad}{k}:")
                lines += _text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {v if not isinstance(v, list) else ', '.join(map(str, v))}")
    elif isinstance(obj, list):
        for v in obj:
            lines += _text(v, indent) if isinstance(v, (dict, list)) else [f"{pad}- {v}"]
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(payload: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text(payload)) + "\n"
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Parse ``argv``, run the command and return (exit status, rendered output)."""
    args = build_parser().parse_args(argv)
    if args.command in ("verify", "ratio") and args.trials is None:
        args.trials = DEFAULT_TRIALS
    if (args.trials is not None and args.trials < 1) or args.bound < 1:
        return EXIT_USAGE, render({"error": "--trials and --bound must be positive"}, args.format)
    if not 0 <= args.seed < 2**64:
        return EXIT_USAGE, render({"error": "--seed must be a 64-bit unsigned integer"}, args.format)
    try:
        payload, status = COMMANDS[args.command](args)
    except (UsageError, InvalidHodgeData, TotalMismatch, comb.NotCritical, comb.UnsupportedRank,
            InvariantError, RetryCapExceeded, ValueError) as exc:
        return EXIT_USAGE, render({"error": type(exc).__name__, "message": str(exc)}, args.format)
    payload = {"command": args.command, **payload}
    if args.command in ("verify", "ratio", "discover"):
        payload["config"] = {"trials": args.trials, "seed": args.seed, "bound": args.bound, "variant": args.variant}
    return status, render(payload, args.format)


def main(argv: Optional[Sequence[str]] = None) -> int:
    status, text = run(argv)
    stream = sys.stdout if status != EXIT_USAGE else sys.stderr
    stream.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
