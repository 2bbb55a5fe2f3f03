from enum import Enum
from pathlib import Path
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, model_validator


class GrowthSpec(BaseModel):
    """Branching and segmenting sequences of a diamond family, one entry per level."""

    model_config = ConfigDict(frozen=True)

    branching: list[PositiveInt] = Field(default_factory=list)
    segmenting: list[PositiveInt] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_sequences(self) -> "GrowthSpec":
        if len(self.branching) != len(self.segmenting):
            raise ValueError(
                f"branching has {len(self.branching)} entries but segmenting has {len(self.segmenting)}"
            )
        for i, (n_branch, n_seg) in enumerate(zip(self.branching, self.segmenting), start=1):
            # parallel single-edge branches would be a multigraph
            if n_branch >= 2 and n_seg < 2:
                raise ValueError(f"level {i}: branching {n_branch} requires segmenting >= 2, got {n_seg}")
        return self

    @property
    def level(self) -> int:
        return len(self.branching)


# Layered-graph JSON

class NodeDocument(BaseModel):
    id: str
    layer: int = Field(ge=0)


class GraphDocument(BaseModel):
    nodes: list[NodeDocument]
    edges: list[tuple[str, str]]


class ChainDocument(BaseModel):
    B: list[float]
    J: list[float]


class HamiltonianDocument(BaseModel):
    graph: GraphDocument
    entries: list[tuple[str, str, float]]


# Certification reports

class PSTReport(BaseModel):
    eigenvalues: list[float]
    gaps: list[float]
    odd_multipliers: Optional[list[int]] = None
    transfer_time: Optional[float] = None
    phase: Optional[float] = None
    mirror_symmetric: bool
    pst: bool
    tolerance: float
    diagnostics: list[str] = []

    @model_validator(mode="after")
    def _pst_is_consistent(self) -> "PSTReport":
        if self.pst and (
            not self.mirror_symmetric or self.odd_multipliers is None or self.transfer_time is None
        ):
            raise ValueError("pst=true requires mirror symmetry, odd multipliers and a transfer time")
        return self


class FidelityTrace(BaseModel):
    times: list[float]
    fidelities: list[float]
    argmax_time: float
    argmax_fidelity: float
    refinement_times: list[float] = []
    refinement_fidelities: list[float] = []

    @model_validator(mode="after")
    def _check_lengths(self) -> "FidelityTrace":
        if len(self.times) != len(self.fidelities):
            raise ValueError("times and fidelities differ in length")
        if len(self.refinement_times) != len(self.refinement_fidelities):
            raise ValueError("refinement times and fidelities differ in length")
        if any(f < 0.0 or f > 1.0 + 1e-12 for f in self.fidelities):
            raise ValueError("fidelity outside [0, 1]")
        return self


class EvolveSummary(BaseModel):
    N: int
    nodes: int
    edges: int
    argmax_time: float
    argmax_fidelity: float
    phase: float
    chain_phase: float
    return_fidelity: float
    return_phase: float
    oracle_equivalence: bool
    spectrum_containment: bool
    sym_invariant: bool
    pst: bool


# Suites (selftest)

class JobStatus(str, Enum):
    PENDING = "pending"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


class SuiteResult(BaseModel):
    name: str
    status: JobStatus
    result: Optional[dict[str, Any]] = None
    error: Optional[str] = None


# CLI

class RunConfig(BaseModel):
    command: Literal["generate", "verify", "evolve", "inspect", "selftest"]
    graph: Optional[str] = None  # file:PATH
    hamiltonian: Optional[str] = None  # file:PATH
    chain: Optional[str] = None  # krawtchouk:N | file:PATH
    output: Optional[Path] = None
    save_hamiltonian: Optional[Path] = None
    branching: list[PositiveInt] = []
    segmenting: list[PositiveInt] = []
    t_max: PositiveFloat = 6.283185307179586
    samples: int = Field(default=257, ge=2)
    pst_tol: PositiveFloat = 1e-8
    max_odd: PositiveInt = 99
    seed: int = 0
    suites: list[str] = []

    @model_validator(mode="after")
    def _paths_distinct(self) -> "RunConfig":
        inputs = [_selector_path(s) for s in (self.graph, self.hamiltonian, self.chain)]
        outputs = [p for p in (self.output, self.save_hamiltonian) if p is not None]
        if len(set(outputs)) != len(outputs):
            raise ValueError("output paths must be distinct")
        for out in outputs:
            if any(p is not None and p == out for p in inputs):
                raise ValueError(f"output path {out} is also an input")
        return self

    def growth_spec(self) -> GrowthSpec:
        return GrowthSpec(branching=self.branching, segmenting=self.segmenting)


def _selector_path(selector: str | None) -> Path | None:
    if selector and selector.startswith("file:"):
        return Path(selector[len("file:"):])
    return None
