"""Command-line entry point: ``boundfuel run|verify|list-experiments``.

Exit codes: 0 success, 1 internal error or bad input, 2 physics precondition
failure (e.g. maser threshold), 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .experiments import DESCRIPTIONS, EXPERIMENTS, load_config, run_experiment, verify
from .micromaser import PhysicsPreconditionError

log = logging.getLogger("boundfuel")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="boundfuel", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("run", help="run one experiment from a config file")
    r.add_argument("config")
    v = sub.add_parser("verify", help="compare produced CSVs against reference CSVs")
    v.add_argument("ref")
    v.add_argument("out")
    v.add_argument("--atol", type=float, default=1e-9)
    v.add_argument("--rtol", type=float, default=1e-9)
    sub.add_parser("list-experiments", help="list experiment ids")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.cmd == "list-experiments":
            for eid in EXPERIMENTS:
                print(f"{eid:20s} {DESCRIPTIONS[eid]}")
            return 0
        if args.cmd == "run":
            cfg = load_config(args.config)
            log.info("running %s -> %s", cfg.id, cfg.output_dir)
            for path in run_experiment(cfg):
                print(path)
            return 0
        if args.cmd == "verify":
            report = verify(args.ref, args.out, args.atol, args.rtol)
            print(json.dumps(report, indent=2, sort_keys=True))
            return 0 if report["passed"] else 3
    except PhysicsPreconditionError as exc:
        print(f"physics precondition failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"internal error: {exc}", file=sys.stderr)
        return 1
    return 1


if __name__ == "__main__":
    sys.exit(main())
