"""Time evolution on layered graphs and the chain/graph equivalence checks."""
from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize

from ..config import settings
from ..errors import DiagnosticsError, NotSelfAdjointError
from ..models import GraphState, JacobiChain, LayeredHamiltonian
from ..schemas import EvolveSummary, FidelityTrace
from ..worker.pool import sample_fidelities
from .chain import chain_propagator, eigensystem, evolve_chain
from .layered import (
    SELF_ADJOINT_TOL,
    check_sym_invariant,
    compress,
    embedding_matrix,
    projection_matrix,
    self_adjointness_defect,
)

logger = logging.getLogger(__name__)

REFINE_XATOL = 1e-10


@dataclass(frozen=True, eq=False)
class _Spectrum:
    """Eigendecomposition of S = D^{1/2} H D^{-1/2}, D = diag(mu)."""

    root_weights: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def propagate(self, psi: np.ndarray, t: float) -> np.ndarray:
        """e^{itH} psi = D^{-1/2} e^{itS} D^{1/2} psi; ``psi`` may hold states as columns."""
        root = self.root_weights if psi.ndim == 1 else self.root_weights[:, None]
        phases = np.exp(1j * t * self.eigenvalues)
        if psi.ndim > 1:
            phases = phases[:, None]
        q = self.eigenvectors
        return (q @ (phases * (q.T @ (root * psi)))) / root


@lru_cache(maxsize=64)
def _spectrum(h: LayeredHamiltonian) -> _Spectrum:
    defect = self_adjointness_defect(h)
    scale = max(1.0, float(np.max(np.abs(h.dense), initial=0.0)))
    if defect > SELF_ADJOINT_TOL * scale:
        raise NotSelfAdjointError(
            f"Hamiltonian is not self-adjoint for the weighted inner product (defect {defect:.3g})"
        )
    root = np.sqrt(h.graph.weights)
    s = root[:, None] * h.dense / root[None, :]
    try:
        eigenvalues, eigenvectors = np.linalg.eigh((s + s.T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise DiagnosticsError(f"eigensolver failed on {len(h.graph.nodes)} nodes: {exc}") from exc
    logger.debug("Diagonalized %d-node Hamiltonian", len(h.graph.nodes))
    return _Spectrum(root, eigenvalues, eigenvectors)


def evolve_graph(h: LayeredHamiltonian, psi0: GraphState, t: float) -> GraphState:
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (len(h.graph.nodes),):
        raise ValueError(f"graph state must have {len(h.graph.nodes)} amplitudes, got shape {psi0.shape}")
    return _spectrum(h).propagate(psi0, t)


def transfer_amplitude(h: LayeredHamiltonian, t: float, source: str = "L") -> complex:
    """<target|e^{itH}|source>_weighted between the two anchors."""
    g = h.graph
    start, target = (g.x_L, g.x_R) if source == "L" else (g.x_R, g.x_L)
    psi = evolve_graph(h, g.basis_state(start), t)
    i = g.position(target)
    return complex(psi[i] * g.weights[i])


def fidelity_graph(h: LayeredHamiltonian, t: float) -> float:
    return abs(transfer_amplitude(h, t))


def mirror_return(h: LayeredHamiltonian, T: float, tol: float) -> bool:
    """e^{iTH}|x_R> = e^{i phi}|x_L> with the phase of the forward transfer."""
    forward = transfer_amplitude(h, T, "L")
    backward = transfer_amplitude(h, T, "R")
    return bool(abs(backward) >= 1.0 - tol and abs(backward - forward) <= tol)


def oracle_equivalence(h: LayeredHamiltonian, t: float, tol: float) -> bool:
    """max over chain basis states of ||P e^{itH} P* phi - e^{itJ} phi||."""
    g = h.graph
    chain = compress(h)
    lifted = _spectrum(h).propagate(embedding_matrix(g).toarray().astype(complex), t)
    deviation = projection_matrix(g) @ lifted - chain_propagator(chain, t)
    worst = float(np.max(np.linalg.norm(deviation, axis=0)))
    logger.debug("oracle deviation at t=%.6g: %.3g", t, worst)
    return bool(worst <= tol)


def spectrum_containment(h: LayeredHamiltonian, tol: float) -> bool:
    """Every eigenvalue of P H P* is an eigenvalue of H."""
    chain_values, _ = eigensystem(compress(h))
    graph_values = _spectrum(h).eigenvalues
    distance = np.min(np.abs(chain_values[:, None] - graph_values[None, :]), axis=1)
    return bool(np.all(distance <= tol))


def _fidelity_function(target: LayeredHamiltonian | JacobiChain) -> Callable[[float], float]:
    if isinstance(target, JacobiChain):
        eigenvalues, eigenvectors = eigensystem(target)
        weights = eigenvectors[0, :] * eigenvectors[-1, :]
        return lambda t: float(abs(np.sum(weights * np.exp(1j * t * eigenvalues))))
    g = target.graph
    spectrum = _spectrum(target)
    start = g.basis_state(g.x_L)
    i = g.position(g.x_R)
    return lambda t: float(abs(spectrum.propagate(start, t)[i] * g.weights[i]))


def scan_transfer(
    target: LayeredHamiltonian | JacobiChain,
    t_max: float,
    samples: int,
    threads: int | None = None,
) -> FidelityTrace:
    """Sample the end-to-end fidelity on a uniform grid, then refine around the best sample."""
    if t_max <= 0:
        raise ValueError("t_max must be positive")
    if samples < 2:
        raise ValueError("samples must be at least 2")
    fidelity = _fidelity_function(target)
    times = np.linspace(0.0, t_max, samples)
    fidelities = sample_fidelities(fidelity, times.tolist(), threads or settings.threads)

    best = int(np.argmax(fidelities))
    lo, hi = times[max(best - 1, 0)], times[min(best + 1, samples - 1)]
    refinement: list[tuple[float, float]] = []

    def objective(t: float) -> float:
        value = fidelity(float(t))
        refinement.append((float(t), value))
        return -value

    optimize.minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": REFINE_XATOL})
    argmax_time, argmax_fidelity = float(times[best]), float(fidelities[best])
    for t, value in refinement:
        if value > argmax_fidelity:
            argmax_time, argmax_fidelity = t, value

    return FidelityTrace(
        times=times.tolist(),
        fidelities=list(fidelities),
        argmax_time=argmax_time,
        argmax_fidelity=argmax_fidelity,
        refinement_times=[t for t, _ in refinement],
        refinement_fidelities=[value for _, value in refinement],
    )


def certify_graph(
    h: LayeredHamiltonian,
    t_max: float,
    samples: int,
    threshold: float | None = None,
    threads: int | None = None,
) -> tuple[EvolveSummary, FidelityTrace]:
    """Scan the transfer fidelity and run every chain/graph consistency check at its peak."""
    threshold = settings.fidelity_threshold if threshold is None else threshold
    g = h.graph
    trace = scan_transfer(h, t_max, samples, threads)
    T = trace.argmax_time
    forward = transfer_amplitude(h, T, "L")
    backward = transfer_amplitude(h, T, "R")
    chain_amplitude = evolve_chain(compress(h), T)[g.N]
    summary = EvolveSummary(
        N=g.N,
        nodes=len(g.nodes),
        edges=len(g.edges),
        argmax_time=T,
        argmax_fidelity=trace.argmax_fidelity,
        phase=float(np.angle(forward)),
        chain_phase=float(np.angle(chain_amplitude)),
        return_fidelity=abs(backward),
        return_phase=float(np.angle(backward)),
        oracle_equivalence=oracle_equivalence(h, T, 1e-10),
        spectrum_containment=spectrum_containment(h, 1e-9),
        sym_invariant=check_sym_invariant(h, 1e-10),
        pst=bool(trace.argmax_fidelity >= 1.0 - threshold and mirror_return(h, T, threshold)),
    )
    logger.info(
        "Graph N=%d |V|=%d: peak fidelity %.12f at t=%.12f, pst=%s",
        g.N, len(g.nodes), summary.argmax_fidelity, T, summary.pst,
    )
    return summary, trace
