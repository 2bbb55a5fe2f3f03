import argparse
from pathlib import Path

from ..config import settings
from ..schemas import RunConfig
from ..service.chain import verify_pst
from ..storage import write_json
from .inputs import resolve_chain


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("verify", help="certify perfect state transfer on a chain")
    parser.add_argument("--chain", help="krawtchouk:N or file:PATH")
    parser.add_argument("--pst-tol", dest="pst_tol", type=float, default=settings.pst_tol)
    parser.add_argument("--max-odd", dest="max_odd", type=int, default=settings.max_odd)
    parser.add_argument("--output", type=Path, default=Path("report.json"))
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    report = verify_pst(resolve_chain(config), config.pst_tol, config.max_odd)
    write_json(config.output, report)
    if report.pst:
        print(f"pst=true T={report.transfer_time!r} phase={report.phase!r}")
        return 0
    print("pst=false " + "; ".join(report.diagnostics))
    return 1
