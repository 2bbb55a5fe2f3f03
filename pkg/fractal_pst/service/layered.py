"""Lift of a Jacobi chain onto a layered graph, compression back, and the averaging maps P, P*."""
from __future__ import annotations

import logging

import numpy as np
from scipy import sparse

from ..errors import ChainError, CompressionError, HamiltonianError, MalformedGraphError, SizeMismatchError
from ..models import ChainState, GraphState, JacobiChain, LayeredGraph, LayeredHamiltonian, NodeId
from ..schemas import HamiltonianDocument
from .graph import graph_from_document, graph_to_document

logger = logging.getLogger(__name__)

SELF_ADJOINT_TOL = 1e-12


def lift(c: JacobiChain, g: LayeredGraph) -> LayeredHamiltonian:
    """Graph Hamiltonian whose compression P H P* is ``c``.

    H(x, x) = B_n, and for an edge x -> y from layer n to n + 1
    H(x, y) = J_n / deg+(x), H(y, x) = J_n / deg-(y).
    """
    if c.N != g.N:
        raise SizeMismatchError(c.N + 1, g.N + 1)
    for x in g.nodes:
        n = g.layer_of[x]
        if n < g.N and g.deg_plus[x] == 0:
            raise MalformedGraphError(f"interior node {x!r} in layer {n} has no edge to layer {n + 1}")
        if n > 0 and g.deg_minus[x] == 0:
            raise MalformedGraphError(f"interior node {x!r} in layer {n} has no edge to layer {n - 1}")

    entries: dict[tuple[NodeId, NodeId], float] = {}
    for x in g.nodes:
        entries[(x, x)] = float(c.B[g.layer_of[x]])
    for x, y in g.edges:
        coupling = float(c.J[g.layer_of[x]])
        entries[(x, y)] = coupling / g.deg_plus[x]
        entries[(y, x)] = coupling / g.deg_minus[y]

    h = LayeredHamiltonian(graph=g, entries=entries)
    defect = self_adjointness_defect(h)
    if defect > SELF_ADJOINT_TOL * _scale(h):
        logger.warning(
            "Lifted Hamiltonian is not weighted-self-adjoint (defect %.3g); graph is not layer-transitive",
            defect,
        )
    return h


def _scale(h: LayeredHamiltonian) -> float:
    return max(1.0, float(np.max(np.abs(h.dense), initial=0.0)))


def projection_matrix(g: LayeredGraph) -> sparse.csr_matrix:
    """P: layer averages, shape (N + 1, |V|)."""
    columns = np.arange(len(g.nodes))
    return sparse.csr_matrix((g.weights, (g.layer_array, columns)), shape=(g.N + 1, len(g.nodes)))


def embedding_matrix(g: LayeredGraph) -> sparse.csr_matrix:
    """P*: layer-constant extension, shape (|V|, N + 1)."""
    rows = np.arange(len(g.nodes))
    return sparse.csr_matrix((np.ones(len(g.nodes)), (rows, g.layer_array)), shape=(len(g.nodes), g.N + 1))


def _check_graph_state(g: LayeredGraph, psi: GraphState) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (len(g.nodes),):
        raise ValueError(f"graph state must have {len(g.nodes)} amplitudes, got shape {psi.shape}")
    return psi


def apply_P(g: LayeredGraph, psi: GraphState) -> ChainState:
    return projection_matrix(g) @ _check_graph_state(g, psi)


def apply_P_star(g: LayeredGraph, phi: ChainState) -> GraphState:
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (g.N + 1,):
        raise ValueError(f"chain state must have {g.N + 1} amplitudes, got shape {phi.shape}")
    return phi[g.layer_array]


def proj_sym(g: LayeredGraph, psi: GraphState) -> GraphState:
    """Orthogonal projection onto layer-constant states, P* P."""
    return apply_P_star(g, apply_P(g, psi))


def weighted_inner(g: LayeredGraph, psi: GraphState, phi: GraphState) -> complex:
    return complex(np.sum(np.asarray(psi) * np.conj(phi) * g.weights))


def standard_inner(psi: ChainState, phi: ChainState) -> complex:
    return complex(np.sum(np.asarray(psi) * np.conj(phi)))


def weighted_norm(g: LayeredGraph, psi: GraphState) -> float:
    return float(np.sqrt(weighted_inner(g, psi, psi).real))


def compressed_matrix(h: LayeredHamiltonian) -> np.ndarray:
    g = h.graph
    return (projection_matrix(g) @ h.sparse_matrix @ embedding_matrix(g)).toarray()


def compress(h: LayeredHamiltonian) -> JacobiChain:
    """The chain P H P*; it must come out symmetric tridiagonal.

    H itself must be self-adjoint for the weighted inner product: on graphs
    whose deg+/deg- vary inside a layer the averages would still be
    tridiagonal, but they no longer describe the graph dynamics.
    """
    defect = self_adjointness_defect(h)
    if defect > SELF_ADJOINT_TOL * _scale(h):
        raise CompressionError(
            f"H is not self-adjoint for the weighted inner product (defect {defect:.3g}); "
            "deg+/deg- are not constant on every layer"
        )
    m = compressed_matrix(h)
    outside = m - np.triu(np.tril(m, 1), -1)
    if np.any(outside != 0.0):
        i, j = np.argwhere(outside != 0.0)[0]
        raise CompressionError(f"P H P* is not tridiagonal: entry ({i}, {j}) = {m[i, j]}")
    upper, lower = np.diag(m, 1), np.diag(m, -1)
    if upper.size and np.max(np.abs(upper - lower)) > SELF_ADJOINT_TOL * max(1.0, np.max(np.abs(m))):
        k = int(np.argmax(np.abs(upper - lower)))
        raise CompressionError(f"P H P* is not symmetric between sites {k} and {k + 1}")
    try:
        return JacobiChain(B=np.diag(m).copy(), J=(upper + lower) / 2.0)
    except ChainError as exc:
        raise CompressionError(f"P H P* is not a Jacobi matrix: {exc}") from exc


def check_sym_invariant(h: LayeredHamiltonian, tol: float = 1e-12) -> bool:
    """H maps every layer indicator back into the layer-constant subspace."""
    g = h.graph
    for n in range(g.N + 1):
        indicator = np.zeros(g.N + 1)
        indicator[n] = 1.0
        image = h.dense @ apply_P_star(g, indicator)
        leak = weighted_norm(g, image - proj_sym(g, image))
        if leak > tol:
            logger.debug("layer %d leaks %.3g out of the symmetric subspace", n, leak)
            return False
    return True


def self_adjointness_defect(h: LayeredHamiltonian) -> float:
    """max |mu(x) H(x, y) - mu(y) H(y, x)|."""
    weighted = h.graph.weights[:, None] * h.dense
    return float(np.max(np.abs(weighted - weighted.T), initial=0.0))


def self_adjointness_equivalence(h: LayeredHamiltonian, tol: float = SELF_ADJOINT_TOL) -> tuple[bool, bool]:
    """(H self-adjoint for the weighted product, P H P* symmetric)."""
    m = compressed_matrix(h)
    scale = _scale(h)
    return (
        self_adjointness_defect(h) <= tol * scale,
        float(np.max(np.abs(m - m.T), initial=0.0)) <= tol * scale,
    )


def perturb_edge(h: LayeredHamiltonian, x: NodeId, y: NodeId, delta: float) -> LayeredHamiltonian:
    """Shift H(x, y) by ``delta`` and H(y, x) so that weighted self-adjointness survives."""
    g = h.graph
    if (x, y) not in g.edges and (y, x) not in g.edges:
        raise HamiltonianError(f"{x}-{y} is not an edge")
    mu = g.weights
    entries = dict(h.entries)
    entries[(x, y)] = entries.get((x, y), 0.0) + delta
    entries[(y, x)] = entries.get((y, x), 0.0) + delta * mu[g.position(x)] / mu[g.position(y)]
    return LayeredHamiltonian(graph=g, entries=entries)


def hamiltonian_to_document(h: LayeredHamiltonian) -> HamiltonianDocument:
    index = h.graph.index
    pairs = sorted(h.entries, key=lambda pair: (index[pair[0]], index[pair[1]]))
    return HamiltonianDocument(
        graph=graph_to_document(h.graph),
        entries=[(x, y, h.entries[(x, y)]) for x, y in pairs],
    )


def hamiltonian_from_document(doc: HamiltonianDocument) -> LayeredHamiltonian:
    g = graph_from_document(doc.graph)
    return LayeredHamiltonian(graph=g, entries={(x, y): value for x, y, value in doc.entries})
