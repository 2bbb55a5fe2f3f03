"""Property suites run by ``selftest``; each takes a seeded generator and returns measured values."""
import math

import numpy as np

from ..errors import SuiteFailure
from ..models import JacobiChain, LayeredGraph
from ..schemas import GrowthSpec
from ..service.chain import evolve_chain, krawtchouk_chain, verify_pst
from ..service.evolve import (
    fidelity_graph,
    mirror_return,
    oracle_equivalence,
    scan_transfer,
    transfer_amplitude,
)
from ..service.graph import build_graph
from ..service.layered import (
    apply_P,
    apply_P_star,
    check_sym_invariant,
    compress,
    lift,
    perturb_edge,
    proj_sym,
    standard_inner,
    weighted_inner,
)

PST_SLACK = 1e-8
FAMILY_SIZE = 20


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise SuiteFailure(message)


def random_growth_spec(
    rng: np.random.Generator,
    max_level: int = 3,
    branching: tuple[int, ...] = (1, 2, 3),
    segmenting: tuple[int, ...] = (2, 3),
) -> GrowthSpec:
    level = int(rng.integers(1, max_level + 1))
    return GrowthSpec(
        branching=[int(b) for b in rng.choice(branching, size=level)],
        segmenting=[int(s) for s in rng.choice(segmenting, size=level)],
    )


def random_mirror_chain(rng: np.random.Generator, N: int) -> JacobiChain:
    B = rng.uniform(-1.0, 1.0, size=N + 1)
    J = rng.uniform(0.5, 1.5, size=N)
    return JacobiChain(B=(B + B[::-1]) / 2.0, J=(J + J[::-1]) / 2.0)


def random_family(rng: np.random.Generator, size: int = FAMILY_SIZE) -> list[tuple[GrowthSpec, LayeredGraph]]:
    specs = [random_growth_spec(rng) for _ in range(size)]
    return [(spec, build_graph(spec)) for spec in specs]


def standard_diamond(level: int) -> LayeredGraph:
    return build_graph(GrowthSpec(branching=[2] * level, segmenting=[2] * level))


def dense_projection(g: LayeredGraph) -> tuple[np.ndarray, np.ndarray]:
    """Explicit P and P* built entry by entry from the layer map."""
    P = np.zeros((g.N + 1, len(g.nodes)))
    P_star = np.zeros((len(g.nodes), g.N + 1))
    for i, x in enumerate(g.nodes):
        n = g.layer_of[x]
        P[n, i] = 1.0 / g.layer_sizes[n]
        P_star[i, n] = 1.0
    return P, P_star


def process_chain_certification(rng: np.random.Generator) -> dict:
    worst_gap = 0.0
    for N in range(1, 33):
        report = verify_pst(krawtchouk_chain(N))
        _require(report.pst, f"Krawtchouk N={N} not certified: {report.diagnostics}")
        _require(abs(report.transfer_time - math.pi) <= 1e-8, f"N={N}: T={report.transfer_time}")
        _require(all(m == 0 for m in report.odd_multipliers), f"N={N}: multipliers {report.odd_multipliers}")
        worst_gap = max(worst_gap, float(np.max(np.abs(np.asarray(report.gaps) - 1.0))))
    _require(worst_gap <= 1e-10, f"Krawtchouk gaps deviate from 1 by {worst_gap}")
    return {"sizes": 32, "max_gap_deviation": worst_gap}


def process_chain_fidelity(rng: np.random.Generator) -> dict:
    worst = 1.0
    for N in range(1, 33):
        worst = min(worst, abs(evolve_chain(krawtchouk_chain(N), math.pi)[N]))
    _require(worst >= 1.0 - PST_SLACK, f"chain fidelity at pi drops to {worst}")
    return {"min_fidelity": worst}


def process_standard_diamonds(rng: np.random.Generator) -> dict:
    fidelities = []
    for level in range(1, 5):
        g = standard_diamond(level)
        chain = krawtchouk_chain(2**level)
        h = lift(chain, g)
        forward = transfer_amplitude(h, math.pi)
        chain_amplitude = evolve_chain(chain, math.pi)[g.N]
        _require(abs(forward) >= 1.0 - PST_SLACK, f"level {level}: fidelity {abs(forward)}")
        _require(abs(forward - chain_amplitude) <= PST_SLACK, f"level {level}: graph and chain phases differ")
        _require(mirror_return(h, math.pi, PST_SLACK), f"level {level}: x_R does not return to x_L")
        fidelities.append(abs(forward))
    return {"levels": 4, "min_fidelity": min(fidelities)}


def process_mixed_family(rng: np.random.Generator) -> dict:
    worst = 1.0
    for spec, g in random_family(rng):
        fidelity = fidelity_graph(lift(krawtchouk_chain(g.N), g), math.pi)
        _require(fidelity >= 1.0 - PST_SLACK, f"{spec.model_dump()}: fidelity {fidelity}")
        worst = min(worst, fidelity)
    return {"graphs": FAMILY_SIZE, "min_fidelity": worst}


def process_round_trip(rng: np.random.Generator) -> dict:
    worst = 0.0
    for _, g in random_family(rng):
        P, P_star = dense_projection(g)
        for chain in (krawtchouk_chain(g.N), random_mirror_chain(rng, g.N)):
            h = lift(chain, g)
            back = compress(h)
            dense = P @ h.dense @ P_star
            error = max(
                float(np.max(np.abs(back.B - chain.B))),
                float(np.max(np.abs(back.J - chain.J))),
                float(np.max(np.abs(dense - chain.matrix()))),
            )
            _require(error <= 1e-12, f"round trip error {error} on N={g.N}")
            worst = max(worst, error)
    return {"pairs": 2 * FAMILY_SIZE, "max_error": worst}


def _random_state(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def process_projection_identities(rng: np.random.Generator) -> dict:
    worst = 0.0
    for _, g in random_family(rng):
        for _ in range(50):
            psi = _random_state(rng, len(g.nodes))
            phi = _random_state(rng, g.N + 1)
            sym = proj_sym(g, psi)
            errors = (
                np.max(np.abs(proj_sym(g, sym) - sym)),
                np.max(np.abs(apply_P(g, psi - sym))),
                abs(weighted_inner(g, apply_P_star(g, phi), apply_P_star(g, phi)) - standard_inner(phi, phi)),
                abs(standard_inner(apply_P(g, psi), phi) - weighted_inner(g, psi, apply_P_star(g, phi))),
            )
            scale = max(1.0, float(np.max(np.abs(psi))), float(np.max(np.abs(phi)))) ** 2
            error = float(max(errors)) / scale
            _require(error <= 1e-12, f"projection identity violated by {error} on N={g.N}")
            worst = max(worst, error)
    return {"states": 50 * FAMILY_SIZE, "max_error": worst}


def process_dynamics_oracle(rng: np.random.Generator) -> dict:
    checked = 0
    for spec, g in random_family(rng):
        h = lift(random_mirror_chain(rng, g.N), g)
        for t in rng.uniform(0.0, 10.0 * math.pi, size=10):
            _require(oracle_equivalence(h, float(t), 1e-10), f"{spec.model_dump()}: oracle fails at t={t}")
            checked += 1
    return {"checks": checked}


def process_negative_control(rng: np.random.Generator) -> dict:
    g = standard_diamond(2)
    h = lift(krawtchouk_chain(g.N), g)
    x, y = next(e for e in g.edges if e[0] == g.x_L)
    baseline = scan_transfer(h, 2 * math.pi, 257).argmax_fidelity

    perturbed = perturb_edge(h, x, y, 1e-3)
    _require(not check_sym_invariant(perturbed, 1e-10), "perturbed Hamiltonian keeps the symmetric subspace")
    peak = scan_transfer(perturbed, 2 * math.pi, 257).argmax_fidelity
    _require(peak <= 1.0 - 1e-6, f"peak fidelity {peak} under a 1e-3 perturbation of {x}-{y}")
    return {"baseline": baseline, "peak": peak, "edge": [x, y]}
