import argparse
import logging
import math
from pathlib import Path

from ..schemas import RunConfig
from ..service.evolve import certify_graph
from ..service.layered import hamiltonian_to_document, lift
from ..storage import write_json, write_trace_csv
from .inputs import add_graph_arguments, resolve_chain, resolve_graph, resolve_hamiltonian

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("evolve", help="lift a chain onto a graph and scan the transfer fidelity")
    parser.add_argument("--chain", help="krawtchouk:N or file:PATH")
    parser.add_argument("--hamiltonian", help="layered Hamiltonian JSON as file:PATH, instead of --chain")
    add_graph_arguments(parser)
    parser.add_argument("--t-max", dest="t_max", type=float, default=2 * math.pi)
    parser.add_argument("--samples", type=int, default=257)
    parser.add_argument("--output", type=Path, default=Path("trace.csv"))
    parser.add_argument("--save-hamiltonian", dest="save_hamiltonian", type=Path)
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    if config.hamiltonian:
        h = resolve_hamiltonian(config)
    else:
        h = lift(resolve_chain(config), resolve_graph(config))
    if config.save_hamiltonian:
        write_json(config.save_hamiltonian, hamiltonian_to_document(h))

    summary, trace = certify_graph(h, config.t_max, config.samples)
    write_trace_csv(config.output, trace, summary)
    print(
        f"N={summary.N} |V|={summary.nodes} argmax_time={summary.argmax_time!r} "
        f"argmax_fidelity={summary.argmax_fidelity!r} phase={summary.phase!r} "
        f"oracle={'pass' if summary.oracle_equivalence else 'fail'} pst={str(summary.pst).lower()}"
    )
    if summary.pst and summary.oracle_equivalence:
        return 0
    logger.warning("Transfer not certified on the %d-node graph", summary.nodes)
    return 1
