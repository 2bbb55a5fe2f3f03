import numpy as np
import pytest

from fractal_pst.errors import CompressionError, HamiltonianError, MalformedGraphError, SizeMismatchError
from fractal_pst.models import JacobiChain, LayeredHamiltonian
from fractal_pst.schemas import GrowthSpec
from fractal_pst.service.chain import krawtchouk_chain
from fractal_pst.service.graph import X_L, X_R, build_graph, layer_nodes, validate_layered
from fractal_pst.service.layered import (
    apply_P,
    apply_P_star,
    check_sym_invariant,
    compress,
    embedding_matrix,
    hamiltonian_from_document,
    hamiltonian_to_document,
    lift,
    perturb_edge,
    proj_sym,
    projection_matrix,
    self_adjointness_defect,
    self_adjointness_equivalence,
    standard_inner,
    weighted_inner,
    weighted_norm,
)
from fractal_pst.worker.suites import dense_projection, random_mirror_chain


def diamond(branching, segmenting):
    return build_graph(GrowthSpec(branching=branching, segmenting=segmenting))


def uneven_graph():
    """Layer 1 holds nodes with different deg+, so the graph is not layer-transitive."""
    nodes = ["L", "a", "b", "c", "d", "R"]
    edges = [("L", "a"), ("L", "b"), ("a", "c"), ("a", "d"), ("b", "d"), ("c", "R"), ("d", "R")]
    return validate_layered(nodes, edges, {"L": 0, "a": 1, "b": 1, "c": 2, "d": 2, "R": 3})


def random_state(rng, size):
    return rng.normal(size=size) + 1j * rng.normal(size=size)


SPECS = [([2], [2]), ([2, 2], [2, 2]), ([3, 1], [2, 3]), ([1, 2], [3, 2]), ([2, 3], [3, 2])]


def test_lift_entries_on_level_one_diamond():
    g = diamond([2], [2])
    c = krawtchouk_chain(2)
    h = lift(c, g)
    mid = layer_nodes(g, 1)[0]
    assert h[(X_L, mid)] == pytest.approx(c.J[0] / 2)
    assert h[(mid, X_L)] == pytest.approx(c.J[0])
    assert h[(mid, X_R)] == pytest.approx(c.J[1])
    assert h[(X_R, mid)] == pytest.approx(c.J[1] / 2)
    assert h[(X_L, X_L)] == 0.0
    assert h[(X_L, X_R)] == 0.0


@pytest.mark.parametrize("branching, segmenting", SPECS)
def test_compress_inverts_lift(rng, branching, segmenting):
    g = diamond(branching, segmenting)
    P, P_star = dense_projection(g)
    for c in (krawtchouk_chain(g.N), random_mirror_chain(rng, g.N)):
        h = lift(c, g)
        back = compress(h)
        assert np.max(np.abs(back.B - c.B)) <= 1e-12
        assert np.max(np.abs(back.J - c.J)) <= 1e-12
        assert np.max(np.abs(P @ h.dense @ P_star - c.matrix())) <= 1e-12


def test_lift_of_asymmetric_chain_still_compresses(rng):
    g = diamond([2, 2], [2, 2])
    c = JacobiChain(B=rng.uniform(-1, 1, size=g.N + 1), J=rng.uniform(0.5, 2.0, size=g.N))
    back = compress(lift(c, g))
    assert np.allclose(back.B, c.B, atol=1e-12)
    assert np.allclose(back.J, c.J, atol=1e-12)


def test_lift_size_mismatch():
    with pytest.raises(SizeMismatchError) as info:
        lift(krawtchouk_chain(3), diamond([2], [2]))
    assert info.value.chain_sites == 4
    assert info.value.graph_sites == 3
    assert "4 sites" in str(info.value) and "3 layers" in str(info.value)


def test_lift_rejects_dead_end_nodes():
    g = validate_layered(["L", "a", "b", "R"], [("L", "a"), ("L", "b"), ("a", "R")],
                         {"L": 0, "a": 1, "b": 1, "R": 2})
    with pytest.raises(MalformedGraphError):
        lift(krawtchouk_chain(2), g)


@pytest.mark.parametrize("branching, segmenting", SPECS)
def test_lift_is_weighted_self_adjoint(rng, branching, segmenting):
    g = diamond(branching, segmenting)
    h = lift(random_mirror_chain(rng, g.N), g)
    assert self_adjointness_defect(h) <= 1e-12
    assert self_adjointness_equivalence(h) == (True, True)
    assert check_sym_invariant(h)
    psi, phi = random_state(rng, len(g.nodes)), random_state(rng, len(g.nodes))
    lhs = weighted_inner(g, h.dense @ psi, phi)
    rhs = weighted_inner(g, psi, h.dense @ phi)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_uneven_graph_breaks_self_adjointness(caplog):
    g = uneven_graph()
    with caplog.at_level("WARNING"):
        h = lift(krawtchouk_chain(3), g)
    assert "not weighted-self-adjoint" in caplog.text
    assert self_adjointness_defect(h) > 1e-3
    assert self_adjointness_equivalence(h) == (False, True)
    with pytest.raises(CompressionError):
        compress(h)


@pytest.mark.parametrize("branching, segmenting", SPECS)
def test_projection_identities(rng, branching, segmenting):
    g = diamond(branching, segmenting)
    for _ in range(10):
        psi = random_state(rng, len(g.nodes))
        phi = random_state(rng, g.N + 1)
        sym = proj_sym(g, psi)
        assert np.allclose(proj_sym(g, sym), sym, atol=1e-12)
        assert np.allclose(apply_P(g, psi - sym), 0.0, atol=1e-12)
        assert np.allclose(apply_P(g, apply_P_star(g, phi)), phi, atol=1e-12)
        assert weighted_inner(g, apply_P_star(g, phi), apply_P_star(g, phi)) == pytest.approx(
            standard_inner(phi, phi), abs=1e-11
        )
        assert standard_inner(apply_P(g, psi), phi) == pytest.approx(
            weighted_inner(g, psi, apply_P_star(g, phi)), abs=1e-11
        )
        assert weighted_norm(g, apply_P_star(g, phi)) == pytest.approx(np.linalg.norm(phi), abs=1e-12)


def test_sparse_maps_match_explicit_products():
    g = diamond([2, 3], [3, 2])
    P, P_star = dense_projection(g)
    assert np.array_equal(projection_matrix(g).toarray(), P)
    assert np.array_equal(embedding_matrix(g).toarray(), P_star)


def test_layer_sum_zero_states_are_annihilated():
    g = diamond([2], [2])
    a, b = layer_nodes(g, 1)
    psi = g.state_from_mapping({a: 1.0, b: -1.0})
    assert np.allclose(apply_P(g, psi), 0.0)


def test_state_shape_checks():
    g = diamond([2], [2])
    with pytest.raises(ValueError):
        apply_P(g, np.zeros(3))
    with pytest.raises(ValueError):
        apply_P_star(g, np.zeros(4))


def test_perturb_edge_keeps_weighted_self_adjointness():
    g = diamond([2, 2], [2, 2])
    h = lift(krawtchouk_chain(g.N), g)
    x, y = next((x, y) for x, y in g.edges if g.layer_of[x] == 1)
    perturbed = perturb_edge(h, x, y, 1e-3)
    assert perturbed[(x, y)] == pytest.approx(h[(x, y)] + 1e-3)
    assert self_adjointness_defect(perturbed) <= 1e-12
    assert not check_sym_invariant(perturbed, 1e-10)
    assert check_sym_invariant(h)
    with pytest.raises(HamiltonianError):
        perturb_edge(h, g.x_L, g.x_R, 1e-3)


def test_hamiltonian_rejects_non_edges():
    g = diamond([2], [2])
    with pytest.raises(HamiltonianError):
        LayeredHamiltonian(graph=g, entries={(X_L, X_R): 1.0})


def test_hamiltonian_document_round_trip(rng):
    g = diamond([2, 2], [3, 2])
    h = lift(random_mirror_chain(rng, g.N), g)
    back = hamiltonian_from_document(hamiltonian_to_document(h))
    assert back.graph.nodes == g.nodes
    assert dict(back.entries) == dict(h.entries)
    assert np.array_equal(back.dense, h.dense)


def test_lift_on_a_path_is_the_chain_matrix(rng):
    c = JacobiChain(B=rng.uniform(-1, 1, size=5), J=rng.uniform(0.5, 1.5, size=4))
    nodes = [str(n) for n in range(5)]
    path = validate_layered(nodes, list(zip(nodes, nodes[1:])), {x: int(x) for x in nodes})
    assert np.allclose(lift(c, path).dense, c.matrix())
    assert np.allclose(lift(c, diamond([1], [4])).dense, c.matrix())


def test_apply_P_on_a_middle_node():
    g = diamond([2], [2])
    mid = layer_nodes(g, 1)[0]
    assert np.allclose(apply_P(g, g.basis_state(mid)), [0.0, 0.5, 0.0])
    assert np.allclose(apply_P_star(g, [1.0, 2.0, 3.0]), [1.0, 2.0, 2.0, 3.0])
