import argparse
from pathlib import Path

from ..schemas import RunConfig
from ..service.graph import build_graph, graph_to_document
from ..storage import write_json
from .inputs import comma_ints


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("generate", help="build a diamond graph and write its JSON")
    parser.add_argument("--branching", type=comma_ints, help="branches per level, e.g. 2,2")
    parser.add_argument("--segmenting", type=comma_ints, help="edges per branch per level, e.g. 2,2")
    parser.add_argument("--output", type=Path, default=Path("graph.json"))
    parser.set_defaults(handler=run)


def run(config: RunConfig) -> int:
    g = build_graph(config.growth_spec())
    write_json(config.output, graph_to_document(g))
    print(f"N={g.N} |V|={len(g.nodes)} |E|={len(g.edges)}")
    return 0
