import argparse

from ..schemas import RunConfig
from ..service.graph import is_layer_palindrome, is_layer_transitive
from .inputs import add_graph_arguments, resolve_graph


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("inspect", help="print layer statistics of a graph")
    add_graph_arguments(parser)
    parser.set_defaults(handler=run)


def _span(values) -> str:
    values = list(values)
    if not values:
        return "-"
    return f"{min(values)}..{max(values)}"


def run(config: RunConfig) -> int:
    g = resolve_graph(config)
    # layers 1..N-1 only; G_0 has no interior nodes
    interior = [x for x in g.nodes if 0 < g.layer_of[x] < g.N]
    print(f"N={g.N} |V|={len(g.nodes)} |E|={len(g.edges)}")
    print("layer_sizes=" + ",".join(str(size) for size in g.layer_sizes))
    print(f"deg_plus={_span(g.deg_plus[x] for x in interior)} deg_minus={_span(g.deg_minus[x] for x in interior)}")
    print(f"layer_transitive={str(is_layer_transitive(g)).lower()}")
    print(f"layer_palindrome={str(is_layer_palindrome(g)).lower()}")
    return 0
