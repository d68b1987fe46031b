import numpy as np
import pytest

from oracles import entropy_logm, ptrace_loops
from qcorr.entropy import mutual_information, shannon_entropy, von_neumann_entropy
from qcorr.measurement import (
    VonNeumannMeasurement,
    apply_nonselective,
    branch_entropy_sum,
    computational_basis,
    conditional_ensemble,
    dephase,
    measured_mutual_information,
    measurement_from_unitary,
)
from qcorr.qmat import BipartiteState, random_mixed, random_unitary


def _conditional_loops(rho, d_a, d_b, psi):
    """p and unnormalized <psi|rho|psi> on A by explicit sums."""
    out = np.zeros((d_a, d_a), dtype=complex)
    for a in range(d_a):
        for c in range(d_a):
            for b in range(d_b):
                for e in range(d_b):
                    out[a, c] += np.conj(psi[b]) * rho[a * d_b + b, c * d_b + e] * psi[e]
    return out


def test_basis_must_be_orthonormal():
    with pytest.raises(ValueError, match="orthonormal"):
        VonNeumannMeasurement(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError):
        VonNeumannMeasurement(np.ones((2, 3)))
    with pytest.raises(ValueError):
        measurement_from_unitary(np.eye(2), dim=3)


def test_projectors_resolve_identity(rng):
    m = VonNeumannMeasurement(random_unitary(4, rng))
    p = m.projectors()
    np.testing.assert_allclose(p.sum(axis=0), np.eye(4), atol=1e-12)
    np.testing.assert_allclose(p[0] @ p[0], p[0], atol=1e-12)
    np.testing.assert_allclose(p[0] @ p[1], 0, atol=1e-12)


def test_nonselective_on_bell(bell):
    post = apply_nonselective(bell, computational_basis(2))
    np.testing.assert_allclose(post.rho, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    assert abs(mutual_information(post) - 1) < 1e-12


def test_nonselective_is_idempotent_and_preserves_rho_a(rng):
    for _ in range(20):
        s = BipartiteState(random_mixed(6, rng=rng), 2, 3)
        m = VonNeumannMeasurement(random_unitary(3, rng))
        post = apply_nonselective(s, m)
        np.testing.assert_allclose(apply_nonselective(post, m).rho, post.rho, atol=1e-13)
        np.testing.assert_allclose(post.rho_a, s.rho_a, atol=1e-13)
        np.testing.assert_allclose(post.rho_b, dephase(s.rho_b, m), atol=1e-13)


def test_conditional_ensemble_matches_loops(rng):
    for _ in range(20):
        d_a, d_b = (int(x) for x in rng.integers(1, 4, size=2))
        s = BipartiteState(random_mixed(d_a * d_b, rng=rng), d_a, d_b)
        m = VonNeumannMeasurement(random_unitary(d_b, rng))
        ens = conditional_ensemble(s, m)
        raw = [_conditional_loops(s.rho, d_a, d_b, psi) for psi in m.basis]
        p = np.array([np.real(np.trace(r)) for r in raw])
        np.testing.assert_allclose(ens.probs, p[ens.kept] / p[ens.kept].sum(), atol=1e-12)
        for j, st in zip(ens.kept, ens.states):
            np.testing.assert_allclose(st, raw[j] / p[j], atol=1e-10)
        np.testing.assert_allclose(ens.average(), ptrace_loops(s.rho, d_a, d_b, "A"), atol=1e-12)


def test_zero_probability_outcomes_dropped():
    s = BipartiteState(np.kron(np.eye(2) / 2, np.diag([1.0, 0, 0])), 2, 3)
    ens = conditional_ensemble(s, computational_basis(3))
    assert ens.kept == [0] and ens.probs.tolist() == [1.0]


def test_measured_mutual_information_matches_post_state(rng):
    for _ in range(50):
        s = BipartiteState(random_mixed(6, rng=rng), 3, 2)
        m = VonNeumannMeasurement(random_unitary(2, rng))
        post = apply_nonselective(s, m)
        ent = [entropy_logm(ptrace_loops(post.rho, 3, 2, k)) for k in ("A", "B")]
        mi_oracle = ent[0] + ent[1] - entropy_logm(post.rho)
        assert abs(measured_mutual_information(s, m) - mi_oracle) < 1e-8


def test_branch_entropy_sum_matches_direct(rng):
    for d in (1, 2, 3):
        s = BipartiteState(random_mixed(2 * d, rng=rng), d, 2)
        m = VonNeumannMeasurement(random_unitary(2, rng))
        t = s.rho.reshape(d, 2, d, 2)
        branches = np.einsum("bj,abce,ej->jac", m.unitary.conj(), t, m.unitary)
        ens = conditional_ensemble(s, m)
        direct = sum(p * von_neumann_entropy(st) for p, st in zip(ens.probs, ens.states))
        assert abs(branch_entropy_sum(branches) - direct) < 1e-10


def test_measurement_dimension_checked(rng):
    s = BipartiteState(random_mixed(4, rng=rng), 2, 2)
    with pytest.raises(ValueError, match="dimension"):
        apply_nonselective(s, computational_basis(3))


def test_outcome_entropy_of_dephased_marginal(rng):
    s = BipartiteState(random_mixed(9, rng=rng), 3, 3)
    m = VonNeumannMeasurement(random_unitary(3, rng))
    ens = conditional_ensemble(s, m)
    assert abs(von_neumann_entropy(dephase(s.rho_b, m)) - shannon_entropy(ens.probs)) < 1e-9
