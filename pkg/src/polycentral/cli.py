"""Command-line front end: ``polycentral --builtin heisenberg`` or ``--scenario FILE``.

Exit status is 0 when every check passes, 1 when a check fails and 2 when
the scenario cannot be parsed or built.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .errors import ParseError, PolycentralError
from .report import run
from .scenario import builtin_names, load_builtin, parse_scenario


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polycentral",
                                 description="Build filtered group algebras and report on their graded Lie algebras.")
    src = ap.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", metavar="PATH", help="scenario file to run")
    src.add_argument("--builtin", metavar="NAME", help="run a bundled scenario by name")
    src.add_argument("--list-builtins", action="store_true", help="list bundled scenarios and exit")
    ap.add_argument("--cutoff", type=int, metavar="N", help="override the cutoff D")
    ap.add_argument("--prime", type=int, metavar="P", help="override the prime")
    ap.add_argument("--seed", type=int, metavar="N", help="override the seed")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.list_builtins:
        print("\n".join(builtin_names()))
        return 0
    try:
        if args.builtin:
            sc = load_builtin(args.builtin)
        else:
            sc = parse_scenario(Path(args.scenario).read_text())
        overrides = {k: v for k, v in (("prime", args.prime), ("cutoff", args.cutoff), ("seed", args.seed))
                     if v is not None}
        if overrides:
            sc = _apply_overrides(sc, overrides)
        report = run(sc)
    except ParseError as exc:
        print(f"polycentral: parse error: {exc}", file=sys.stderr)
        return 2
    except (PolycentralError, OSError) as exc:
        print(f"polycentral: {exc}", file=sys.stderr)
        return 2
    out = report.to_json() if args.format == "json" else report.to_text()
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return 0 if report.passed else 1


def _apply_overrides(sc, overrides):
    if "prime" in overrides:
        p = overrides["prime"]
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ParseError(0, f"--prime must be a prime number, got {p}")
    if "cutoff" in overrides and overrides["cutoff"] < 1:
        raise ParseError(0, "--cutoff must be positive")
    return dataclasses.replace(sc, **overrides)


if __name__ == "__main__":
    sys.exit(main())
