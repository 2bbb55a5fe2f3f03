from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType

import numpy as np
from scipy import sparse

from .errors import ChainError, HamiltonianError, UnknownNodeError

# Node ids are canonical address strings: "L", "R" for the anchors of G_0 and
# "b.s/b.s/..." lineage paths for nodes created by later levels.
NodeId = str
Edge = tuple[NodeId, NodeId]

# Chain states are complex vectors indexed 0..N; graph states are complex
# vectors aligned with LayeredGraph.nodes.
ChainState = np.ndarray
GraphState = np.ndarray


@dataclass(frozen=True)
class LayeredGraph:
    """Connected graph whose nodes are partitioned into layers 0..N.

    Edges are stored oriented from the lower to the upper layer; nodes and
    edges are kept in canonical (layer, address) order.
    """

    nodes: tuple[NodeId, ...]
    edges: tuple[Edge, ...]
    layer_of: Mapping[NodeId, int]
    N: int
    layer_sizes: tuple[int, ...]
    deg_plus: Mapping[NodeId, int]
    deg_minus: Mapping[NodeId, int]

    def __post_init__(self) -> None:
        for name in ("layer_of", "deg_plus", "deg_minus"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))

    @cached_property
    def index(self) -> Mapping[NodeId, int]:
        return MappingProxyType({x: i for i, x in enumerate(self.nodes)})

    @cached_property
    def layer_array(self) -> np.ndarray:
        return np.array([self.layer_of[x] for x in self.nodes], dtype=int)

    @cached_property
    def weights(self) -> np.ndarray:
        """mu(x) = 1/|layer of x|, aligned with nodes."""
        sizes = np.asarray(self.layer_sizes, dtype=float)
        return 1.0 / sizes[self.layer_array]

    @cached_property
    def layers(self) -> tuple[tuple[NodeId, ...], ...]:
        grouped: list[list[NodeId]] = [[] for _ in range(self.N + 1)]
        for x in self.nodes:
            grouped[self.layer_of[x]].append(x)
        return tuple(tuple(group) for group in grouped)

    @property
    def x_L(self) -> NodeId:
        return self.layers[0][0]

    @property
    def x_R(self) -> NodeId:
        return self.layers[self.N][0]

    def position(self, x: NodeId) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownNodeError(f"unknown node {x!r}") from None

    def basis_state(self, x: NodeId) -> GraphState:
        psi = np.zeros(len(self.nodes), dtype=complex)
        psi[self.position(x)] = 1.0
        return psi

    def state_from_mapping(self, amplitudes: Mapping[NodeId, complex]) -> GraphState:
        psi = np.zeros(len(self.nodes), dtype=complex)
        for x, value in amplitudes.items():
            psi[self.position(x)] = value
        return psi

    def state_to_mapping(self, psi: GraphState) -> dict[NodeId, complex]:
        return {x: complex(psi[i]) for i, x in enumerate(self.nodes)}


@dataclass(frozen=True, eq=False)
class JacobiChain:
    """Symmetric tridiagonal one-excitation Hamiltonian.

    ``B`` holds the N+1 diagonal entries, ``J[k]`` couples sites k and k+1.
    """

    B: np.ndarray
    J: np.ndarray

    def __post_init__(self) -> None:
        B = np.array(self.B, dtype=float).reshape(-1)
        J = np.array(self.J, dtype=float).reshape(-1)
        if B.size == 0:
            raise ChainError("chain needs at least one site")
        if B.size != J.size + 1:
            raise ChainError(f"expected {B.size - 1} couplings for {B.size} sites, got {J.size}")
        if not (np.all(np.isfinite(B)) and np.all(np.isfinite(J))):
            raise ChainError("chain entries must be finite")
        if np.any(J <= 0):
            k = int(np.flatnonzero(J <= 0)[0])
            raise ChainError(f"coupling J[{k}]={J[k]} between sites {k} and {k + 1} must be positive")
        B.setflags(write=False)
        J.setflags(write=False)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "J", J)

    @property
    def N(self) -> int:
        return self.B.size - 1

    def matrix(self) -> np.ndarray:
        return np.diag(self.B) + np.diag(self.J, 1) + np.diag(self.J, -1)


@dataclass(frozen=True, eq=False)
class LayeredHamiltonian:
    """Action matrix of a nearest-neighbour Hamiltonian on a layered graph.

    (H psi)(x) = sum_y H(x, y) psi(y). H is self-adjoint for the weighted
    inner product with weights mu, so the stored matrix is in general not
    symmetric.
    """

    graph: LayeredGraph
    entries: Mapping[Edge, float]

    def __post_init__(self) -> None:
        adjacent = frozenset(self.graph.edges) | frozenset((y, x) for x, y in self.graph.edges)
        entries = {}
        for (x, y), value in self.entries.items():
            self.graph.position(x)
            self.graph.position(y)
            if x != y and (x, y) not in adjacent:
                raise HamiltonianError(f"entry ({x}, {y}) couples nodes that share no edge")
            if value != 0.0:
                entries[(x, y)] = float(value)
        object.__setattr__(self, "entries", MappingProxyType(entries))

    @property
    def weights(self) -> Mapping[NodeId, float]:
        return MappingProxyType(dict(zip(self.graph.nodes, self.graph.weights.tolist())))

    def __getitem__(self, pair: Edge) -> float:
        return self.entries.get(pair, 0.0)

    @cached_property
    def sparse_matrix(self) -> sparse.csr_matrix:
        size = len(self.graph.nodes)
        rows, cols, data = [], [], []
        for (x, y), value in self.entries.items():
            rows.append(self.graph.index[x])
            cols.append(self.graph.index[y])
            data.append(value)
        return sparse.csr_matrix((data, (rows, cols)), shape=(size, size))

    @cached_property
    def dense(self) -> np.ndarray:
        matrix = self.sparse_matrix.toarray()
        matrix.setflags(write=False)
        return matrix
