"""Diamond graph construction and validation of layered graphs."""
from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Mapping

import networkx as nx

from ..errors import (
    DisconnectedGraphError,
    EndLayerError,
    GraphValidationError,
    LayerGapError,
    LayerMismatchError,
    UnknownNodeError,
)
from ..models import Edge, LayeredGraph, NodeId
from ..schemas import GraphDocument, GrowthSpec, NodeDocument

logger = logging.getLogger(__name__)

X_L: NodeId = "L"
X_R: NodeId = "R"

Lineage = tuple[tuple[int, int], ...]


def _address(lineage: Lineage) -> NodeId:
    return "/".join(f"{branch}.{segment}" for branch, segment in lineage)


def address_key(node: NodeId) -> tuple:
    """Natural sort key: numeric address components compare as integers."""
    return tuple((0, int(part), "") if part.isdigit() else (1, 0, part) for part in re.split(r"[./]", node))


def growth_counts(spec: GrowthSpec) -> tuple[int, int, int]:
    """Closed-form (N, |V|, |E|) of the graph grown from ``spec``."""
    n_layers, n_nodes, n_edges = 1, 2, 1
    for n_branch, n_seg in zip(spec.branching, spec.segmenting):
        n_nodes += n_branch * (n_seg - 1) * n_edges
        n_edges *= n_branch * n_seg
        n_layers *= n_seg
    return n_layers, n_nodes, n_edges


def build_graph(spec: GrowthSpec) -> LayeredGraph:
    """Grow G_l from the one-edge graph x_L - x_R.

    Every edge of the previous level is replaced by ``branching[i]`` parallel
    paths of ``segmenting[i]`` edges. Layers are predicted during growth and
    then re-derived by breadth-first search in ``validate_layered``.
    """
    edges: list[tuple[NodeId, NodeId, Lineage]] = [(X_L, X_R, ())]
    predicted: dict[NodeId, int] = {X_L: 0, X_R: 1}

    for level, (n_branch, n_seg) in enumerate(zip(spec.branching, spec.segmenting), start=1):
        predicted = {x: n * n_seg for x, n in predicted.items()}
        grown: list[tuple[NodeId, NodeId, Lineage]] = []
        for u, v, lineage in edges:
            for branch in range(n_branch):
                path = [u]
                for segment in range(1, n_seg):
                    node = _address(lineage + ((branch, segment),))
                    predicted[node] = predicted[u] + segment
                    path.append(node)
                path.append(v)
                grown.extend(
                    (path[j], path[j + 1], lineage + ((branch, j),)) for j in range(n_seg)
                )
        edges = grown
        logger.debug("level %d: %d nodes, %d edges", level, len(predicted), len(edges))

    graph = validate_layered(predicted.keys(), [(u, v) for u, v, _ in edges], predicted)

    expected = growth_counts(spec)
    actual = (graph.N, len(graph.nodes), len(graph.edges))
    if actual != expected:
        raise GraphValidationError(f"construction produced (N, |V|, |E|)={actual}, expected {expected}")
    logger.info("Built diamond graph N=%d |V|=%d |E|=%d", *actual)
    return graph


def validate_layered(
    nodes: Iterable[NodeId],
    edges: Iterable[Edge],
    layer_of: Mapping[NodeId, int],
) -> LayeredGraph:
    """Check the layered-graph invariants and derive layer sizes and deg tables."""
    nodes = list(nodes)
    if not nodes:
        raise GraphValidationError("graph has no nodes")
    if len(set(nodes)) != len(nodes):
        raise GraphValidationError("duplicate node ids")
    known = set(nodes)
    for x in layer_of:
        if x not in known:
            raise UnknownNodeError(f"layer given for unknown node {x!r}")
    for x in nodes:
        if x not in layer_of:
            raise GraphValidationError(f"node {x!r} has no layer")
    layer_of = {x: int(layer_of[x]) for x in nodes}

    graph = nx.Graph()
    graph.add_nodes_from(nodes)
    oriented: list[Edge] = []
    for x, y in edges:
        for end in (x, y):
            if end not in known:
                raise UnknownNodeError(f"edge {x}-{y} references unknown node {end!r}")
        step = layer_of[y] - layer_of[x]
        if step == 0:
            raise LayerGapError(f"edge {x}-{y} lies within layer {layer_of[x]}")
        if abs(step) != 1:
            raise LayerGapError(f"edge {x}-{y} skips a layer ({layer_of[x]} -> {layer_of[y]})")
        if graph.has_edge(x, y):
            raise GraphValidationError(f"duplicate edge {x}-{y}")
        graph.add_edge(x, y)
        oriented.append((x, y) if step == 1 else (y, x))

    N = max(layer_of.values())
    layer_sizes = [0] * (N + 1)
    for n in layer_of.values():
        layer_sizes[n] += 1
    if layer_sizes[0] != 1:
        raise EndLayerError(f"layer 0 must hold exactly one node, found {layer_sizes[0]}")
    if layer_sizes[N] != 1:
        raise EndLayerError(f"layer {N} must hold exactly one node, found {layer_sizes[N]}")

    x_left = next(x for x in nodes if layer_of[x] == 0)
    distance = nx.single_source_shortest_path_length(graph, x_left)
    if len(distance) != len(nodes):
        stray = min((x for x in nodes if x not in distance), key=lambda x: (layer_of[x], address_key(x)))
        raise DisconnectedGraphError(f"node {stray!r} is not reachable from {x_left!r}")
    for x in nodes:
        if distance[x] != layer_of[x]:
            raise LayerMismatchError(
                f"node {x!r} declared in layer {layer_of[x]} but lies at distance {distance[x]}"
            )

    deg_plus = dict.fromkeys(nodes, 0)
    deg_minus = dict.fromkeys(nodes, 0)
    for x, y in oriented:
        deg_plus[x] += 1
        deg_minus[y] += 1

    def key(x: NodeId) -> tuple:
        return layer_of[x], address_key(x)

    return LayeredGraph(
        nodes=tuple(sorted(nodes, key=key)),
        edges=tuple(sorted(oriented, key=lambda e: (key(e[0]), key(e[1])))),
        layer_of=layer_of,
        N=N,
        layer_sizes=tuple(layer_sizes),
        deg_plus=deg_plus,
        deg_minus=deg_minus,
    )


def layer_index(g: LayeredGraph, x: NodeId) -> int:
    g.position(x)
    return g.layer_of[x]


def layer_nodes(g: LayeredGraph, n: int) -> tuple[NodeId, ...]:
    if not 0 <= n <= g.N:
        raise GraphValidationError(f"layer {n} outside 0..{g.N}")
    return g.layers[n]


def edges_between(g: LayeredGraph, n: int) -> int:
    return sum(1 for x, _ in g.edges if g.layer_of[x] == n)


def is_layer_transitive(g: LayeredGraph) -> bool:
    """deg+ and deg- are constant on every layer."""
    for layer in g.layers:
        if len({g.deg_plus[x] for x in layer}) > 1 or len({g.deg_minus[x] for x in layer}) > 1:
            return False
    return True


def is_layer_palindrome(g: LayeredGraph) -> bool:
    return g.layer_sizes == g.layer_sizes[::-1]


def graph_to_document(g: LayeredGraph) -> GraphDocument:
    return GraphDocument(
        nodes=[NodeDocument(id=x, layer=g.layer_of[x]) for x in g.nodes],
        edges=[(x, y) for x, y in g.edges],
    )


def graph_from_document(doc: GraphDocument) -> LayeredGraph:
    return validate_layered(
        [node.id for node in doc.nodes],
        doc.edges,
        {node.id: node.layer for node in doc.nodes},
    )
