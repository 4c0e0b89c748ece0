"""End-to-end protocol runs: prepare, propagate, read out the control,
and score both branches against the input.

Register order is control (x) sender (x) ancilla (x) receiver for the
path-superposed channels, and control (x) target for the causal-order
switch (which acts on an already reduced single-qubit channel).  The
"plus" branch is the control found in |0> after the recombination
unitary, "minus" is |1>.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, sqrt
from typing import Optional, Tuple

import numpy as np

from . import qcore
from .qcore import CMatrix, DensityMatrix, SIGMA_X, SIGMA_Z
from .states import (
    ControlSpec,
    DiagonalSeparable,
    GeneralProductMix,
    PureQubit,
    SharedState,
    build_shared,
)
from .channels import (
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

CHANNEL_KINDS = ("path-K", "path-L", "switch-dephase", "general-product")

_P0 = np.diag([1.0, 0.0]).astype(complex)
_P1 = np.diag([0.0, 1.0]).astype(complex)


@dataclass(frozen=True)
class ProtocolConfig:
    """Full description of one protocol variant.

    ``channel`` picks the construction: "path-K" and "path-L" superpose
    two copies of the corresponding teleportation set, "switch-dephase"
    superposes the two orderings of the reduced phase-flip channel, and
    "general-product" runs the resource-adapted set of
    ``general_product_kraus`` through the path constructor.
    ``control_unitary`` is "hadamard" or an (xi, zeta) pair.  With
    ``dephase_control`` the control qubit enters as a classical mixture,
    which is the no-coherence baseline.
    """

    shared: SharedState
    input: PureQubit
    control: ControlSpec
    channel: str
    control_unitary: object = "hadamard"
    dephase_control: bool = False

    def __post_init__(self):
        if self.channel not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind {self.channel!r}; expected one of {CHANNEL_KINDS}")
        cu = self.control_unitary
        if not (cu == "hadamard" or (hasattr(cu, "__len__") and len(cu) == 2)):
            raise ValueError(f"control_unitary must be 'hadamard' or an (xi, zeta) pair, got {cu!r}")
        if isinstance(cu, list):
            object.__setattr__(self, "control_unitary", tuple(cu))
        if self.channel in ("switch-dephase", "general-product"):
            if not isinstance(self.shared, GeneralProductMix):
                raise ValueError(f"channel {self.channel!r} needs a GeneralProductMix resource")
            if self.channel == "switch-dephase" and abs(self.shared.r - 1.0) > 1e-12:
                raise ValueError("the switch construction needs a pure product resource (r = 1)")


@dataclass(frozen=True)
class BranchOutcome:
    """One readout branch: Bob's state, its probability, its fidelity.

    A branch that cannot occur (probability 0) carries ``None`` for both
    the state and the fidelity and must be excluded from averages.
    """

    branch: str
    bob_state: Optional[DensityMatrix]
    probability: float
    fidelity: Optional[float]


def _control_density(config: ProtocolConfig) -> DensityMatrix:
    if config.dephase_control:
        return config.control.dephased_density()
    return config.control.density()


def _base_set(config: ProtocolConfig) -> KrausSet:
    if config.channel == "path-K":
        return kraus_K()
    if config.channel == "path-L":
        return kraus_L()
    if config.channel == "general-product":
        return general_product_kraus(config.shared.omega, config.shared.gamma)
    raise ValueError(f"channel {config.channel!r} has no path base set")


def _channel_set(config: ProtocolConfig) -> KrausSet:
    if config.channel == "switch-dephase":
        _check_switch_reduction(config)
        deph = dephasing_channel()
        return switch_kraus(deph, deph)
    return path_superposition(_base_set(config))


def _check_switch_reduction(config: ProtocolConfig) -> None:
    # The reduction of teleportation over a pure product resource must be
    # a balanced two-operator phase flip; guard against silent misuse.
    red = generalized_depolarizing_probs(build_shared(config.shared))
    pattern = sorted(red.probs)
    if max(abs(pattern[0]), abs(pattern[1])) > 1e-8 or max(
        abs(pattern[2] - 0.5), abs(pattern[3] - 0.5)
    ) > 1e-8:
        raise ValueError(f"resource does not reduce to a balanced phase flip: probs {red.probs}")


def joint_state_after_channel(config: ProtocolConfig) -> DensityMatrix:
    """The joint state after the superposed channel, before control readout."""
    chi = _control_density(config)
    phi = config.input.density()
    if config.channel == "switch-dephase":
        rho0 = qcore.tensor(chi, phi)
    else:
        rho0 = qcore.tensor(chi, qcore.tensor(phi, build_shared(config.shared)))
    return qcore.apply_kraus(rho0, _channel_set(config))


def run(config: ProtocolConfig) -> Tuple[BranchOutcome, BranchOutcome]:
    """Execute the protocol and return the plus and minus branches."""
    rho = joint_state_after_channel(config)
    u = control_unitary(config.control_unitary)
    rho = qcore.apply_kraus(rho, [qcore.lift(u, rho.dims, 0)])

    bob_subsystem = len(rho.dims) - 1
    corr = None
    if config.channel == "general-product":
        corr = basis_unitary(config.shared.gamma.ket())

    outcomes = []
    for proj, name in ((_P0, "plus"), (_P1, "minus")):
        cond, prob = qcore.project_and_normalize(rho, 0, proj)
        if cond is None:
            outcomes.append(BranchOutcome(name, None, 0.0, None))
            continue
        bob = qcore.partial_trace(cond, [bob_subsystem])
        if corr is not None:
            bob = DensityMatrix(corr.conj().T @ bob.mat @ corr, (2,))
        fid = qcore.fidelity_to_pure(bob, config.input.ket())
        outcomes.append(BranchOutcome(name, bob, prob, fid))
    return outcomes[0], outcomes[1]


def standard_bob_state(base: KrausSet, phi: PureQubit, shared: DensityMatrix) -> DensityMatrix:
    """Receiver state of the plain (non-superposed) teleportation channel."""
    joint = qcore.tensor(phi.density(), shared)
    out = qcore.apply_kraus(joint, base)
    return qcore.partial_trace(out, [2])


# ---------------------------------------------------------------------------
# Closed branch forms for computational-diagonal resources.

def _effective_cross(config: ProtocolConfig) -> float:
    """Coefficient of the interference term in the plus branch.

    The Hadamard recombination gives +X; the determinant-one pair form
    gives -C cos(phi_c - xi - zeta).  The minus branch always takes the
    opposite sign.
    """
    if config.control_unitary == "hadamard":
        return config.control.x_interference
    xi, zeta = config.control_unitary
    delta = config.control.phi_c - float(xi) - float(zeta)
    return -config.control.coherence * cos(delta)


def closed_branch_states(config: ProtocolConfig):
    """Analytic branch states and probabilities, diagonal resources only.

    Returns (rho_plus, p_plus, rho_minus, p_minus) with the states as
    plain 2x2 arrays.  Requires a path channel over a DiagonalSeparable
    resource with a coherent (non-dephased) control.
    """
    if config.channel not in ("path-K", "path-L"):
        raise ValueError("closed branch forms exist for the path channels only")
    if not isinstance(config.shared, DiagonalSeparable):
        raise ValueError("closed branch forms need a DiagonalSeparable resource")
    if config.dephase_control:
        raise ValueError("closed branch forms assume a coherent control")
    w = config.shared.y if config.channel == "path-K" else config.shared.z
    c_plus = _effective_cross(config)

    phi = config.input.density().mat
    rho_d = (phi + SIGMA_Z @ phi @ SIGMA_Z) / 2.0
    flipped = SIGMA_X @ rho_d @ SIGMA_X
    out = []
    for c in (c_plus, -c_plus):
        numer = 2.0 * w * rho_d + 2.0 * (1.0 - w) * flipped + c * w * (SIGMA_Z @ phi @ SIGMA_Z)
        denom = 2.0 + c * w
        out.append((numer / denom, denom / 4.0))
    (rp, pp), (rm, pm) = out
    return rp, pp, rm, pm


@dataclass(frozen=True)
class ClosedFormCheck:
    """Deviations between a simulated run and the closed branch forms."""

    state_dev_plus: float
    state_dev_minus: float
    prob_dev_plus: float
    prob_dev_minus: float

    @property
    def max_deviation(self) -> float:
        return max(
            self.state_dev_plus, self.state_dev_minus, self.prob_dev_plus, self.prob_dev_minus
        )


def branch_closed_form_check(config: ProtocolConfig) -> ClosedFormCheck:
    """Run the protocol and compare both branches to the analytic forms."""
    rp, pp, rm, pm = closed_branch_states(config)
    plus, minus = run(config)
    return ClosedFormCheck(
        state_dev_plus=float(np.max(np.abs(plus.bob_state.mat - rp))),
        state_dev_minus=float(np.max(np.abs(minus.bob_state.mat - rm))),
        prob_dev_plus=abs(plus.probability - pp),
        prob_dev_minus=abs(minus.probability - pm),
    )


# ---------------------------------------------------------------------------
# Vectorized evaluation.  Monte Carlo and dense sweeps reconstruct each
# config's two branch maps by pushing four tomographic frame inputs
# through the full pipeline; per-sample work is then one contraction.
# Agreement with run() is pinned by tests.

_FRAME_KETS = (
    np.array([1.0, 0.0], dtype=complex),
    np.array([0.0, 1.0], dtype=complex),
    np.array([1.0, 1.0], dtype=complex) / sqrt(2.0),
    np.array([1.0, 1.0j], dtype=complex) / sqrt(2.0),
)


def _raw_branch_pair(config: ProtocolConfig, ops, u_full, chi_mat, shared_mat, corr, phi_mat):
    if shared_mat is None:
        rho = np.kron(chi_mat, phi_mat)
        dims = (2, 2)
    else:
        rho = np.kron(chi_mat, np.kron(phi_mat, shared_mat))
        dims = (2, 2, 2, 2)
    rho = qcore.apply_ops_raw(rho, ops)
    rho = u_full @ rho @ u_full.conj().T
    side = rho.shape[0]
    half = side // 2
    out = []
    for block in (rho[:half, :half], rho[half:, half:]):
        bob = qcore.ptrace_raw(block, dims[1:], [len(dims) - 2])
        if corr is not None:
            bob = corr.conj().T @ bob @ corr
        out.append(bob)
    return out[0], out[1]


def branch_transfer_maps(config: ProtocolConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Linear maps taking the input density matrix to each unnormalized branch.

    Returned as (plus, minus), each of shape (2, 2, 2, 2) with
    out[i, j] = sum_kl map[i, j, k, l] phi[k, l].
    """
    chi_mat = _control_density(config).mat
    shared_mat = None if config.channel == "switch-dephase" else build_shared(config.shared).mat
    ops = _channel_set(config).ops
    side = ops[0].shape[0]
    u_full = np.kron(control_unitary(config.control_unitary), np.eye(side // 2, dtype=complex))
    corr = basis_unitary(config.shared.gamma.ket()) if config.channel == "general-product" else None

    frames = []
    for ket in _FRAME_KETS:
        phi_mat = np.outer(ket, ket.conj())
        frames.append(_raw_branch_pair(config, ops, u_full, chi_mat, shared_mat, corr, phi_mat))

    maps = []
    for b in range(2):
        r00, r11, rplus, rimag = (f[b] for f in frames)
        a = rplus - (r00 + r11) / 2.0
        c = rimag - (r00 + r11) / 2.0
        r01 = a + 1j * c
        r10 = a - 1j * c
        m = np.empty((2, 2, 2, 2), dtype=complex)
        m[:, :, 0, 0] = r00
        m[:, :, 0, 1] = r01
        m[:, :, 1, 0] = r10
        m[:, :, 1, 1] = r11
        maps.append(m)
    return maps[0], maps[1]


@dataclass(frozen=True)
class BatchStats:
    """Per-sample branch probabilities and fidelities (NaN if flagged)."""

    prob_plus: np.ndarray
    fid_plus: np.ndarray
    prob_minus: np.ndarray
    fid_minus: np.ndarray


def branch_stats_batch(config: ProtocolConfig, kets: np.ndarray) -> BatchStats:
    """Evaluate both branches for a batch of input kets, shape (n, 2)."""
    kets = np.asarray(kets, dtype=complex)
    if kets.ndim != 2 or kets.shape[1] != 2:
        raise ValueError(f"kets must have shape (n, 2), got {kets.shape}")
    phis = np.einsum("si,sj->sij", kets, kets.conj())
    map_plus, map_minus = branch_transfer_maps(config)
    stats = []
    for m in (map_plus, map_minus):
        raw = np.einsum("ijkl,skl->sij", m, phis)
        probs = np.real(np.trace(raw, axis1=1, axis2=2))
        overlap = np.abs(np.einsum("si,sij,sj->s", kets.conj(), raw, kets))
        with np.errstate(invalid="ignore", divide="ignore"):
            fids = np.where(probs > 1e-12, overlap / np.where(probs > 1e-12, probs, 1.0), np.nan)
        stats.extend([probs, fids])
    return BatchStats(stats[0], stats[1], stats[2], stats[3])
