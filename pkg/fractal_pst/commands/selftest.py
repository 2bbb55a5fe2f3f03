import argparse
from pathlib import Path

from ..config import settings
from ..schemas import JobStatus, RunConfig
from ..storage import write_json
from ..worker.worker import SUITE_HANDLERS, run_suites


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("selftest", help="run the property suites")
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument(
        "--suite", dest="suites", action="append", choices=sorted(SUITE_HANDLERS),
        help="run only this suite; repeatable",
    )
    parser.add_argument("--output", type=Path, help="write the suite results as JSON")
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    results = run_suites(config.suites or None, seed=config.seed)
    for result in results:
        line = f"{result.name}: {result.status.value}"
        if result.error:
            line += f" ({result.error})"
        print(line)
    if config.output:
        write_json(config.output, results)
    return 0 if all(r.status == JobStatus.DONE for r in results) else 1
