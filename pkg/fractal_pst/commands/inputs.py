"""Resolution of the ``file:`` / ``krawtchouk:`` selectors shared by the subcommands."""
import argparse
import logging
from pathlib import Path

from ..errors import ChainError, GraphValidationError, HamiltonianError, PSTError
from ..models import JacobiChain, LayeredGraph, LayeredHamiltonian
from ..schemas import GraphDocument, HamiltonianDocument, RunConfig
from ..service.chain import parse_chain_selector
from ..service.graph import build_graph, graph_from_document
from ..service.layered import hamiltonian_from_document
from ..storage import read_model

logger = logging.getLogger(__name__)


def comma_ints(value: str) -> list[int]:
    """argparse type for ``2,3,2``; an empty string is the empty list."""
    if not value.strip():
        return []
    try:
        numbers = [int(part) for part in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None
    if any(n < 1 for n in numbers):
        raise argparse.ArgumentTypeError(f"entries must be positive, got {value!r}")
    return numbers


def add_graph_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--graph", help="layered graph JSON as file:PATH")
    parser.add_argument("--branching", type=comma_ints, help="branches per level, e.g. 2,2")
    parser.add_argument("--segmenting", type=comma_ints, help="edges per branch per level, e.g. 2,2")


def _file_selector(selector: str, flag: str) -> Path:
    kind, _, value = selector.partition(":")
    if kind != "file" or not value:
        raise PSTError(f"{flag} expects file:PATH, got {selector!r}")
    return Path(value)


def resolve_graph(config: RunConfig) -> LayeredGraph:
    if config.graph:
        if config.branching or config.segmenting:
            raise GraphValidationError("give either --graph or --branching/--segmenting, not both")
        path = _file_selector(config.graph, "--graph")
        logger.info("Loading graph from %s", path)
        return graph_from_document(read_model(path, GraphDocument))
    return build_graph(config.growth_spec())


def resolve_chain(config: RunConfig) -> JacobiChain:
    if not config.chain:
        raise ChainError(f"{config.command} needs --chain krawtchouk:N or --chain file:PATH")
    return parse_chain_selector(config.chain)


def resolve_hamiltonian(config: RunConfig) -> LayeredHamiltonian:
    path = _file_selector(config.hamiltonian, "--hamiltonian")
    if config.chain or config.graph or config.branching or config.segmenting:
        raise HamiltonianError("--hamiltonian already fixes the graph and chain")
    logger.info("Loading Hamiltonian from %s", path)
    return hamiltonian_from_document(read_model(path, HamiltonianDocument))
