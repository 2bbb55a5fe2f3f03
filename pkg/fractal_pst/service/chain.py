"""Jacobi chains: Krawtchouk couplings, mirror symmetry and the odd-gap PST test."""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
from scipy.linalg import eig_banded

from ..config import settings
from ..errors import ChainError, DiagnosticsError
from ..models import ChainState, JacobiChain
from ..schemas import ChainDocument, PSTReport

logger = logging.getLogger(__name__)


def krawtchouk_chain(N: int) -> JacobiChain:
    """B = 0, J_n = sqrt(n (N + 1 - n)) / 2 for n = 1..N; spectrum k - N/2, PST at T = pi."""
    if N < 1:
        raise ChainError(f"Krawtchouk chain needs N >= 1, got {N}")
    n = np.arange(1, N + 1, dtype=float)
    return JacobiChain(B=np.zeros(N + 1), J=np.sqrt(n * (N + 1 - n)) / 2.0)


def reflection_matrix(N: int) -> np.ndarray:
    return np.fliplr(np.eye(N + 1))


def is_mirror_symmetric(c: JacobiChain, tol: float = 0.0) -> bool:
    """B_n = B_{N-n} and J_n = J_{N+1-n}, i.e. J = R J R, up to ``tol``."""
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return bool(
        np.all(np.abs(c.B - c.B[::-1]) <= tol) and np.all(np.abs(c.J - c.J[::-1]) <= tol)
    )


def eigensystem(c: JacobiChain) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""
    if c.N == 0:
        return c.B.copy(), np.eye(1)
    banded = np.vstack((np.concatenate(([0.0], c.J)), c.B))
    try:
        eigenvalues, eigenvectors = eig_banded(banded, lower=False)
    except np.linalg.LinAlgError as exc:
        raise DiagnosticsError(f"tridiagonal eigensolver failed for N={c.N}: {exc}") from exc
    if np.any(np.diff(eigenvalues) <= 0):
        logger.warning("Spectrum of chain N=%d is numerically degenerate", c.N)
    return eigenvalues, eigenvectors


def chain_propagator(c: JacobiChain, t: float) -> np.ndarray:
    """e^{itJ} as a dense matrix."""
    eigenvalues, eigenvectors = eigensystem(c)
    return (eigenvectors * np.exp(1j * t * eigenvalues)) @ eigenvectors.T


def evolve_chain(c: JacobiChain, t: float) -> ChainState:
    """e^{itJ}|0>."""
    eigenvalues, eigenvectors = eigensystem(c)
    return eigenvectors @ (np.exp(1j * t * eigenvalues) * eigenvectors[0, :])


def _fit_odd_ratios(gaps: np.ndarray, tol: float, max_odd: int) -> tuple[int, np.ndarray] | None:
    """Find odd p_min and odd p_k <= max_odd with gap_k / g_min ~ p_k / p_min."""
    ratios = gaps / gaps.min()
    for p_min in range(1, max_odd + 1, 2):
        scaled = ratios * p_min
        odd = np.rint(scaled).astype(int)
        if np.any(odd % 2 == 0) or np.any(odd > max_odd):
            continue
        if np.all(np.abs(scaled - odd) <= tol * scaled):
            logger.debug("odd-ratio fit found with p_min=%d", p_min)
            return p_min, odd
    return None


def verify_pst(c: JacobiChain, tol: float | None = None, max_odd: int | None = None) -> PSTReport:
    """Certify perfect transfer 0 -> N via mirror symmetry and the odd-gap criterion.

    A failed certification is a report with ``pst=False``, never an exception.
    """
    tol = settings.pst_tol if tol is None else tol
    max_odd = settings.max_odd if max_odd is None else max_odd
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_odd < 1:
        raise ValueError("max_odd must be at least 1")

    eigenvalues, _ = eigensystem(c)
    gaps = np.diff(eigenvalues)
    scale = max(1.0, float(np.max(np.abs(c.J), initial=0.0)), float(np.max(np.abs(c.B))))
    mirror = is_mirror_symmetric(c, tol * scale)
    diagnostics: list[str] = []
    odd_multipliers = transfer_time = phase = None

    if not mirror:
        diagnostics.append("chain is not mirror symmetric")
    if c.N == 0:
        diagnostics.append("chain has a single site; there is no transfer to certify")
        fit = None
    else:
        fit = _fit_odd_ratios(gaps, tol, max_odd)
        if fit is None:
            diagnostics.append(f"no odd-integer ratio fit of the gaps with 2m+1 <= {max_odd}")

    fidelity_ok = False
    if fit is not None:
        p_min, odd = fit
        odd_multipliers = [int((p - 1) // 2) for p in odd]
        transfer_time = float(p_min * np.pi / gaps.min())
        amplitude = evolve_chain(c, transfer_time)[c.N]
        phase = float(np.angle(amplitude))
        fidelity_ok = bool(abs(amplitude) >= 1.0 - tol)
        if not fidelity_ok:
            diagnostics.append(f"|<N|e^(iTJ)|0>| = {abs(amplitude):.17g} below 1 - tol")

    report = PSTReport(
        eigenvalues=eigenvalues.tolist(),
        gaps=gaps.tolist(),
        odd_multipliers=odd_multipliers,
        transfer_time=transfer_time,
        phase=phase,
        mirror_symmetric=bool(mirror),
        pst=bool(mirror and fit is not None and fidelity_ok),
        tolerance=tol,
        diagnostics=diagnostics,
    )
    logger.info("Chain N=%d certification: pst=%s T=%s", c.N, report.pst, report.transfer_time)
    return report


def chain_to_document(c: JacobiChain) -> ChainDocument:
    return ChainDocument(B=c.B.tolist(), J=c.J.tolist())


def chain_from_document(doc: ChainDocument) -> JacobiChain:
    return JacobiChain(B=doc.B, J=doc.J)


def parse_chain_selector(selector: str) -> JacobiChain:
    """Resolve ``krawtchouk:N`` or ``file:PATH``."""
    kind, _, value = selector.partition(":")
    if kind == "krawtchouk":
        try:
            size = int(value)
        except ValueError:
            raise ChainError(f"bad Krawtchouk size in {selector!r}") from None
        return krawtchouk_chain(size)
    if kind == "file":
        return chain_from_document(ChainDocument.model_validate_json(Path(value).read_text()))
    raise ChainError(f"unknown chain selector {selector!r}; expected krawtchouk:N or file:PATH")
