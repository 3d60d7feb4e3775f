"""``equichain <command> <file> [options]``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import catalog, load
from .commands import COMMANDS, Options, Report, run
from .errors import EquichainError


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="equichain", description="Equivariant mod-2 chain checks on cell models.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", nargs="?", help="input file or directory; check-all defaults to the bundled catalog")
    p.add_argument("--alpha", type=int)
    p.add_argument("--chain")
    p.add_argument("--filtration")
    p.add_argument("--exhaustive", action="store_true", help="let split fall back to enumeration")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.add_argument("--cone-shift", type=int, choices=(0, 1), default=0)
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    opts = Options(args.alpha, args.chain, args.filtration, args.exhaustive, args.cone_shift)
    try:
        if args.file is None:
            if args.command != "check-all":
                print(f"equichain: {args.command} needs an input file", file=sys.stderr)
                return 2
            entries = catalog()
        else:
            path = Path(args.file)
            entries = [load(p) for p in sorted(path.glob("*.eqc"))] if path.is_dir() else [load(path)]
        checks = []
        for e in sorted(entries, key=lambda e: e.name):
            checks += run(args.command, e.document, opts).checks
    except (EquichainError, OSError) as e:
        print(f"equichain: {e}", file=sys.stderr)
        return 2
    report = Report(checks)
    sys.stdout.write(report.machine() if args.format == "machine" else report.text())
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
