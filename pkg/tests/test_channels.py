import numpy as np
import pytest

from pathtele.qcore import ID2, SIGMA_X, SIGMA_Y, SIGMA_Z
from pathtele.states import GeneralProductMix, PureQubit, Werner, bell_state, build_shared
from pathtele.channels import (
    KrausSet,
    basis_unitary,
    control_unitary,
    dephasing_channel,
    general_product_kraus,
    generalized_depolarizing_probs,
    kraus_K,
    kraus_L,
    path_superposition,
    switch_kraus,
)

COMPLETENESS_TOL = 1e-12


def completeness_dev(ops):
    side = ops[0].shape[0]
    comp = sum(op.conj().T @ op for op in ops)
    return np.abs(comp - np.eye(side)).max()


def random_ket(rng, d=2):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# KrausSet container

def test_kraus_set_rejects_incomplete_ops():
    with pytest.raises(ValueError, match="completeness"):
        KrausSet((SIGMA_X / 2.0,), "bad")


def test_kraus_set_rejects_mixed_shapes():
    with pytest.raises(ValueError, match="shape"):
        KrausSet((ID2, np.eye(4, dtype=complex)), "bad")


def test_kraus_set_ops_are_read_only():
    ks = dephasing_channel()
    with pytest.raises(ValueError):
        ks.ops[0][0, 0] = 5.0


# ---------------------------------------------------------------------------
# the two teleportation variants, operator by operator

def bell_proj_pair(left, right):
    return np.outer(bell_state(left), bell_state(right).conj())


def test_kraus_K_operators_elementwise():
    ops = kraus_K().ops
    assert len(ops) == 4
    assert np.abs(ops[0] - np.kron(bell_proj_pair("psi-", "psi-"), ID2)).max() < 1e-15
    assert np.abs(ops[1] - np.kron(bell_proj_pair("psi-", "psi+"), SIGMA_Z)).max() < 1e-15
    assert np.abs(ops[2] - np.kron(bell_proj_pair("psi-", "phi-"), SIGMA_X)).max() < 1e-15
    # the fourth correction is i sigma_y, with the phase kept
    assert np.abs(ops[3] - np.kron(bell_proj_pair("psi-", "phi+"), 1j * SIGMA_Y)).max() < 1e-15


def test_kraus_L_operators_elementwise():
    ops = kraus_L().ops
    assert np.abs(ops[0] - np.kron(bell_proj_pair("phi-", "phi-"), ID2)).max() < 1e-15
    assert np.abs(ops[1] - np.kron(bell_proj_pair("phi-", "phi+"), SIGMA_Z)).max() < 1e-15
    assert np.abs(ops[2] - np.kron(bell_proj_pair("phi-", "psi-"), SIGMA_X)).max() < 1e-15
    assert np.abs(ops[3] - np.kron(bell_proj_pair("phi-", "psi+"), 1j * SIGMA_Y)).max() < 1e-15


def test_base_sets_complete_to_1e12():
    assert kraus_K().completeness_deviation() < COMPLETENESS_TOL
    assert kraus_L().completeness_deviation() < COMPLETENESS_TOL


def bell_contract(left_label, state_ket):
    # <left|_{12} |state>_{123}: independent index-loop oracle
    left = bell_state(left_label)
    out = np.zeros(2, dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                out[k] += np.conj(left[2 * i + j]) * state_ket[4 * i + 2 * j + k]
    return out


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_kraus_K_contraction_prefactors(seed):
    # K_0 sends |phi> (x) |psi-> to -(1/2) |psi-> (x) |phi>; the sign
    # pattern over the four operators is (-, -, +, +), which is what
    # cancels the coherent sum on a perfect resource.
    rng = np.random.default_rng(seed)
    phi = random_ket(rng)
    state = np.kron(phi, bell_state("psi-"))
    ops = kraus_K().ops
    expected_signs = (-1.0, -1.0, 1.0, 1.0)
    for op, sign in zip(ops, expected_signs):
        got = op @ state
        # result must be (sign/2) |psi-> (x) phi
        expected = (sign / 2.0) * np.kron(bell_state("psi-"), phi)
        assert np.abs(got - expected).max() < 1e-12
    coherent = sum(op @ state for op in ops)
    assert np.abs(coherent).max() < 1e-12


def test_kraus_L_contraction_prefactor():
    rng = np.random.default_rng(3)
    phi = random_ket(rng)
    state = np.kron(phi, bell_state("psi-"))
    # L_2 = |phi-><psi-| (x) sigma_x picks up the same -(1/2) Bell overlap
    got = kraus_L().ops[2] @ state
    expected = -0.5 * np.kron(bell_state("phi-"), SIGMA_X @ phi)
    assert np.abs(got - expected).max() < 1e-12
    # oracle cross-check of the overlap itself
    overlap_vec = bell_contract("psi-", state)
    assert np.abs(overlap_vec - (-0.5) * phi).max() < 1e-12


def test_kraus_L_teleports_through_phi_minus():
    rng = np.random.default_rng(4)
    for _ in range(5):
        phi = random_ket(rng)
        state = np.kron(phi, bell_state("phi-"))
        rho = np.outer(state, state.conj())
        out = sum(op @ rho @ op.conj().T for op in kraus_L().ops)
        expected = np.kron(
            np.outer(bell_state("phi-"), bell_state("phi-").conj()), np.outer(phi, phi.conj())
        )
        assert np.abs(out - expected).max() < 1e-12


# ---------------------------------------------------------------------------
# path superposition

def test_path_superposition_shape_and_completeness():
    ps = path_superposition(kraus_K())
    assert len(ps.ops) == 16
    assert ps.ops[0].shape == (16, 16)
    assert ps.completeness_deviation() < COMPLETENESS_TOL


def test_path_superposition_operator_structure():
    base = kraus_K()
    ps = path_superposition(base)
    p0 = np.diag([1.0, 0.0])
    p1 = np.diag([0.0, 1.0])
    # mu-major enumeration: op index is 4*mu + nu
    for mu in range(4):
        for nu in range(4):
            expected = np.kron(p0, base.ops[mu]) / 2.0 + np.kron(p1, base.ops[nu]) / 2.0
            assert np.abs(ps.ops[4 * mu + nu] - expected).max() < 1e-15


def test_path_superposition_rejects_wrong_operator_count():
    with pytest.raises(ValueError, match="4 base operators"):
        path_superposition(dephasing_channel())


# ---------------------------------------------------------------------------
# switch

def test_switch_of_dephasing_ops():
    deph = dephasing_channel()
    sw = switch_kraus(deph, deph)
    assert len(sw.ops) == 4
    assert sw.ops[0].shape == (4, 4)
    assert sw.completeness_deviation() < COMPLETENESS_TOL
    # the two factor channels commute, so every operator is block-equal
    for op in sw.ops:
        assert np.abs(op[:2, :2] - op[2:, 2:]).max() < 1e-15


def test_switch_order_sensitivity_shows_up_off_diagonal():
    # non-commuting factors must give different blocks
    amp = (np.array([[1, 0], [0, 0]], dtype=complex), np.array([[0, 1], [0, 0]], dtype=complex))
    sw = switch_kraus(amp, dephasing_channel())
    diffs = [np.abs(op[:2, :2] - op[2:, 2:]).max() for op in sw.ops]
    assert max(diffs) > 0.1


# ---------------------------------------------------------------------------
# resource-adapted teleportation set

def test_general_product_reduces_to_L_for_computational_resource():
    adapted = general_product_kraus(PureQubit(1.0), PureQubit(1.0))
    reference = kraus_L()
    for a, b in zip(adapted.ops, reference.ops):
        assert np.abs(a - b).max() < 1e-12


def test_general_product_complete_for_random_resources():
    rng = np.random.default_rng(5)
    for _ in range(10):
        omega = PureQubit(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
        gamma = PureQubit(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
        ks = general_product_kraus(omega, gamma)
        assert ks.completeness_deviation() < COMPLETENESS_TOL


def test_general_product_measurement_basis_and_corrections():
    from pathtele.states import orthogonal_ket

    omega = PureQubit(0.8, 0.2)
    gamma = PureQubit(0.3, 1.9)
    ks = general_product_kraus(omega, gamma)
    w, g = omega.ket(), gamma.ket()
    wbar, gbar = orthogonal_ket(w), orthogonal_ket(g)
    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    s = 1.0 / np.sqrt(2.0)
    betas = [
        s * (np.kron(zero, w) - np.kron(one, wbar)),
        s * (np.kron(zero, w) + np.kron(one, wbar)),
        s * (np.kron(zero, wbar) - np.kron(one, w)),
        s * (np.kron(zero, wbar) + np.kron(one, w)),
    ]
    gram = np.array([[np.vdot(a, b) for b in betas] for a in betas])
    assert np.abs(gram - np.eye(4)).max() < 1e-12
    # each operator factors as |beta_0><beta_i| (x) U_i; contract the
    # measurement factor away to expose the receiver correction
    corrections = [
        np.einsum("a,abcd,c->bd", betas[0].conj(), op.reshape(4, 2, 4, 2), betas[i])
        for i, op in enumerate(ks.ops)
    ]
    assert np.abs(corrections[0] - np.eye(2)).max() < 1e-12
    # U1: g -> g, gbar -> -gbar (phase flip in the gamma basis)
    assert np.abs(corrections[1] @ g - g).max() < 1e-12
    assert np.abs(corrections[1] @ gbar + gbar).max() < 1e-12
    # U2: swap
    assert np.abs(corrections[2] @ g - gbar).max() < 1e-12
    assert np.abs(corrections[2] @ gbar - g).max() < 1e-12
    # U3: g -> -gbar, gbar -> +g (the verbatim sign convention)
    assert np.abs(corrections[3] @ g + gbar).max() < 1e-12
    assert np.abs(corrections[3] @ gbar - g).max() < 1e-12


# ---------------------------------------------------------------------------
# generalized depolarizing reduction

def test_depolarizing_probs_for_singlet():
    red = generalized_depolarizing_probs(build_shared(Werner(1.0)))
    assert np.abs(np.array(red.probs) - np.array([1.0, 0.0, 0.0, 0.0])).max() < 1e-10
    assert abs(abs(np.vdot(red.basis[0], bell_state("psi-"))) - 1.0) < 1e-10


def test_depolarizing_probs_for_maximally_mixed():
    red = generalized_depolarizing_probs(build_shared(Werner(0.0)))
    assert np.abs(np.array(red.probs) - 0.25).max() < 1e-10
    # the tie-break anchors the basis on phi+
    assert abs(abs(np.vdot(red.basis[0], bell_state("phi+"))) - 1.0) < 1e-10


def test_depolarizing_probs_for_pure_products():
    rng = np.random.default_rng(6)
    for _ in range(30):
        omega = PureQubit(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
        gamma = PureQubit(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
        shared = build_shared(GeneralProductMix(1.0, omega, gamma))
        red = generalized_depolarizing_probs(shared)
        p = np.array(red.probs)
        assert abs(p.sum() - 1.0) < 1e-10
        assert abs(p[0] - 0.5) < 1e-10
        assert abs(p[3] - 0.5) < 1e-10
        assert abs(p[1]) < 1e-10
        assert abs(p[2]) < 1e-10


def test_depolarizing_top_overlap_is_half_for_all_mixes():
    omega = PureQubit(0.77, 0.5)
    gamma = PureQubit(0.21, 2.2)
    for r in (0.0, 0.25, 0.5, 0.75, 1.0):
        shared = build_shared(GeneralProductMix(r, omega, gamma))
        red = generalized_depolarizing_probs(shared)
        assert abs(red.probs[0] - 0.5) < 1e-10


def test_depolarizing_basis_is_maximally_entangled_and_orthonormal():
    rng = np.random.default_rng(7)
    omega = PureQubit(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
    gamma = PureQubit(rng.uniform(0, 1), rng.uniform(0, 2 * np.pi))
    red = generalized_depolarizing_probs(build_shared(GeneralProductMix(1.0, omega, gamma)))
    basis = np.column_stack(red.basis)
    assert np.abs(basis.conj().T @ basis - np.eye(4)).max() < 1e-10
    for b in red.basis:
        marg = np.einsum("ij,kj->ik", b.reshape(2, 2), b.reshape(2, 2).conj())
        assert np.abs(marg - np.eye(2) / 2.0).max() < 1e-10


# ---------------------------------------------------------------------------
# control unitaries

def test_control_unitary_hadamard():
    h = control_unitary("hadamard")
    assert np.abs(h - np.array([[1, 1], [1, -1]]) / np.sqrt(2.0)).max() < 1e-15


def test_control_unitary_pair_form():
    u = control_unitary((0.0, 0.0))
    expected = np.array([[1, -1], [1, 1]], dtype=complex) / np.sqrt(2.0)
    assert np.abs(u - expected).max() < 1e-15
    # determinant +1 separates it from the Hadamard (determinant -1)
    assert abs(np.linalg.det(u) - 1.0) < 1e-12
    assert abs(np.linalg.det(control_unitary("hadamard")) + 1.0) < 1e-12


def test_control_unitary_is_unitary_for_random_angles():
    rng = np.random.default_rng(8)
    for _ in range(10):
        u = control_unitary((rng.uniform(0, 2 * np.pi), rng.uniform(0, 2 * np.pi)))
        assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12


def test_control_unitary_rejects_unknown():
    with pytest.raises(ValueError):
        control_unitary("fourier")


def test_basis_unitary_maps_computational_to_given_basis():
    k = PureQubit(0.35, 2.75).ket()
    u = basis_unitary(k)
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12
    assert np.abs(u @ np.array([1.0, 0.0]) - k).max() < 1e-12
