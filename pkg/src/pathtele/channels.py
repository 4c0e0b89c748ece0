"""Kraus families: the teleportation channel, its coherent-path and
causal-order superpositions, and the reduction of teleportation over an
arbitrary resource to a generalized depolarizing channel.

Operator layout
---------------
The base teleportation sets act on sender (x) ancilla (x) receiver
(8-dimensional); each operator is (Bell projector on the first two
qubits) (x) (correction on the receiver).  Path-superposed sets prepend
a control qubit, so they act on 16 dimensions with the control major.
Switch sets act on control (x) target only (4-dimensional), because the
causal-order construction applies to an already reduced qubit channel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .qcore import (
    ATOL_COMPLETENESS,
    CMatrix,
    DensityMatrix,
    ID2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    ptrace_raw,
)
from .states import PureQubit, bell_state, orthogonal_ket


@dataclass(frozen=True)
class KrausSet:
    """A complete set of Kraus operators of equal square shape.

    Completeness (sum of K^dag K equal to the identity) is enforced at
    construction to within ``ATOL_COMPLETENESS``; the operators are
    stored read-only.
    """

    ops: Tuple[CMatrix, ...]
    label: str = ""

    def __post_init__(self):
        ops = tuple(np.array(op, dtype=complex) for op in self.ops)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        side = ops[0].shape[0]
        for op in ops:
            if op.ndim != 2 or op.shape != (side, side):
                raise ValueError(f"Kraus operators must share a square shape, got {op.shape}")
        comp = sum(op.conj().T @ op for op in ops)
        dev = float(np.max(np.abs(comp - np.eye(side))))
        if dev > ATOL_COMPLETENESS:
            raise ValueError(
                f"Kraus set {self.label!r} violates completeness by {dev:.3e}"
            )
        for op in ops:
            op.setflags(write=False)
        object.__setattr__(self, "ops", ops)

    @property
    def side(self) -> int:
        return self.ops[0].shape[0]

    def completeness_deviation(self) -> float:
        comp = sum(op.conj().T @ op for op in self.ops)
        return float(np.max(np.abs(comp - np.eye(self.side))))


# Correction applied on the receiver for each Bell outcome, per anchor.
# The anchor is the Bell state the sender pair is left in; the outcome
# order fixes the operator index used everywhere downstream.
_TELEPORT_TABLE = {
    "psi-": (("psi-", ID2), ("psi+", SIGMA_Z), ("phi-", SIGMA_X), ("phi+", 1j * SIGMA_Y)),
    "phi-": (("phi-", ID2), ("phi+", SIGMA_Z), ("psi-", SIGMA_X), ("psi+", 1j * SIGMA_Y)),
}


def teleport_kraus(anchor: str, label: str = "") -> KrausSet:
    """Standard-teleportation Kraus set anchored on a Bell state.

    ``anchor`` is the Bell state the sender-ancilla pair ends in; the
    supported anchors are "psi-" (resource is the singlet family) and
    "phi-" (resource is the phi- family).
    """
    if anchor not in _TELEPORT_TABLE:
        raise ValueError(f"unsupported anchor {anchor!r}; expected 'psi-' or 'phi-'")
    left = bell_state(anchor)
    ops = []
    for outcome, corr in _TELEPORT_TABLE[anchor]:
        meas = bell_state(outcome)
        ops.append(np.kron(np.outer(left, meas.conj()), corr))
    return KrausSet(tuple(ops), label or f"teleport[{anchor}]")


def kraus_K() -> KrausSet:
    """The singlet-anchored teleportation set (variant K)."""
    return teleport_kraus("psi-", "K")


def kraus_L() -> KrausSet:
    """The phi- anchored teleportation set (variant L)."""
    return teleport_kraus("phi-", "L")


def path_superposition(base: KrausSet) -> KrausSet:
    """Coherent superposition of two copies of a 4-operator channel.

    Each pair (mu, nu) yields |0><0| (x) K_mu/2 + |1><1| (x) K_nu/2 on
    control (x) carrier, 16 operators in all.  The 1/2 weights are what
    make the 16 operators resolve the identity; a base set with a
    different operator count is rejected.
    """
    if len(base.ops) != 4:
        raise ValueError(f"path superposition needs exactly 4 base operators, got {len(base.ops)}")
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    ops = []
    for kmu in base.ops:
        for knu in base.ops:
            ops.append(np.kron(p0, kmu) / 2.0 + np.kron(p1, knu) / 2.0)
    return KrausSet(tuple(ops), f"path[{base.label}]")


def dephasing_channel() -> KrausSet:
    """Balanced phase-flip channel {I/sqrt2, sigma_z/sqrt2}."""
    s = 1.0 / np.sqrt(2.0)
    return KrausSet((s * ID2, s * SIGMA_Z), "dephase")


def switch_kraus(e_set: Union[KrausSet, Sequence[CMatrix]],
                 f_set: Union[KrausSet, Sequence[CMatrix]]) -> KrausSet:
    """Superposition of the two orderings of channels E and F.

    Operators |0><0| (x) E_i F_j + |1><1| (x) F_j E_i on control (x)
    target.  Completeness of the result follows from completeness of the
    two factor sets, which the KrausSet constructor re-checks anyway.
    """
    e_ops = tuple(getattr(e_set, "ops", e_set))
    f_ops = tuple(getattr(f_set, "ops", f_set))
    p0 = np.diag([1.0, 0.0]).astype(complex)
    p1 = np.diag([0.0, 1.0]).astype(complex)
    ops = []
    for ei in e_ops:
        for fj in f_ops:
            ops.append(np.kron(p0, ei @ fj) + np.kron(p1, fj @ ei))
    return KrausSet(tuple(ops), "switch")


def basis_unitary(ket: CMatrix) -> CMatrix:
    """Unitary sending |0>, |1> to ``ket`` and its orthogonal complement."""
    ket = np.asarray(ket, dtype=complex).reshape(-1)
    return np.column_stack([ket, orthogonal_ket(ket)])


def general_product_kraus(omega: PureQubit, gamma: PureQubit) -> KrausSet:
    """Teleportation operators adapted to a pure product resource.

    The Bell-type measurement basis on sender (x) ancilla mixes the
    computational basis with the omega basis; the receiver corrections
    act in the gamma basis.  For omega = gamma = |0> this reduces
    entrywise to the phi- anchored set ``kraus_L()``.
    """
    w = omega.ket()
    wbar = orthogonal_ket(w)
    g = gamma.ket()
    gbar = orthogonal_ket(g)

    zero = np.array([1.0, 0.0], dtype=complex)
    one = np.array([0.0, 1.0], dtype=complex)
    s = 1.0 / np.sqrt(2.0)
    beta = (
        s * (np.kron(zero, w) - np.kron(one, wbar)),
        s * (np.kron(zero, w) + np.kron(one, wbar)),
        s * (np.kron(zero, wbar) - np.kron(one, w)),
        s * (np.kron(zero, wbar) + np.kron(one, w)),
    )
    corrections = (
        ID2,
        np.outer(g, g.conj()) - np.outer(gbar, gbar.conj()),
        np.outer(gbar, g.conj()) + np.outer(g, gbar.conj()),
        -np.outer(gbar, g.conj()) + np.outer(g, gbar.conj()),
    )
    ops = tuple(
        np.kron(np.outer(beta[0], b.conj()), u) for b, u in zip(beta, corrections)
    )
    return KrausSet(ops, "general-product")


# Magic basis: maximally entangled states that make local unitaries real
# orthogonal, so real combinations stay maximally entangled.
_MAGIC = np.column_stack(
    [
        bell_state("phi+"),
        1j * bell_state("phi-"),
        1j * bell_state("psi+"),
        bell_state("psi-"),
    ]
)


@dataclass(frozen=True)
class DepolarizingReduction:
    """Probabilities and Bell-type basis of the reduced channel."""

    probs: Tuple[float, float, float, float]
    basis: Tuple[CMatrix, CMatrix, CMatrix, CMatrix]


def _canonical_phase(ket: CMatrix) -> CMatrix:
    idx = int(np.argmax(np.abs(ket)))
    phase = ket[idx] / abs(ket[idx])
    return ket / phase


def _pauli_frame(shared_mat: CMatrix) -> Tuple[CMatrix, CMatrix, CMatrix]:
    """Pauli triple for completing the Bell-type basis.

    Uses the eigenbasis of the resource's receiver-side marginal when it
    is non-degenerate; that is the frame in which a product resource's
    reduced channel is a plain phase flip.  Falls back to computational
    Paulis for a degenerate marginal.
    """
    marg = ptrace_raw(shared_mat, (2, 2), [1])
    evals, evecs = np.linalg.eigh(marg)
    if evals[1] - evals[0] > 1e-8:
        g = _canonical_phase(evecs[:, 1])
        gbar = _canonical_phase(evecs[:, 0])
        sx = np.outer(g, gbar.conj()) + np.outer(gbar, g.conj())
        sy = -1j * np.outer(g, gbar.conj()) + 1j * np.outer(gbar, g.conj())
        sz = np.outer(g, g.conj()) - np.outer(gbar, gbar.conj())
        return sx, sy, sz
    return SIGMA_X, SIGMA_Y, SIGMA_Z


def generalized_depolarizing_probs(shared: DensityMatrix) -> DepolarizingReduction:
    """Reduce teleportation over ``shared`` to a Pauli-mixture channel.

    beta_0 is a maximally entangled state of maximal overlap with the
    resource, found as the top eigenvector of the real part of the
    resource in the magic basis.  Degenerate maxima are broken by
    projecting a fixed anchor list (phi+ first) onto the top eigenspace.
    beta_1..beta_3 are local-Pauli rotations of beta_0 in the frame of
    ``_pauli_frame``.  The returned probabilities are the overlaps of the
    resource with the four basis states and sum to 1.
    """
    if shared.dims != (2, 2):
        raise ValueError(f"expected a two-qubit resource, got dims {shared.dims}")
    rho_m = _MAGIC.conj().T @ shared.mat @ _MAGIC
    sym = np.real(rho_m)
    sym = (sym + sym.T) / 2.0
    evals, evecs = np.linalg.eigh(sym)
    top = evals[-1]
    space = evecs[:, evals > top - 1e-8]
    coeff = None
    for j in range(4):
        anchor = np.zeros(4)
        anchor[j] = 1.0
        proj = space @ (space.T @ anchor)
        norm = np.linalg.norm(proj)
        if norm > 1e-6:
            coeff = proj / norm
            break
    if coeff is None:  # cannot happen: the eigenspace is at least 1-dim
        raise RuntimeError("no anchor projects onto the top eigenspace")
    beta0 = _canonical_phase(_MAGIC @ coeff)

    sx, sy, sz = _pauli_frame(shared.mat)
    basis = (
        beta0,
        np.kron(ID2, sx) @ beta0,
        np.kron(ID2, sy) @ beta0,
        np.kron(ID2, sz) @ beta0,
    )
    probs = tuple(float(np.real(np.vdot(b, shared.mat @ b))) for b in basis)
    return DepolarizingReduction(probs, basis)


def control_unitary(kind) -> CMatrix:
    """Recombination unitary applied to the control before readout.

    ``kind`` is the string "hadamard" or a pair (xi, zeta) selecting the
    balanced unitary with rows (e^{i xi}, -e^{-i zeta}) and
    (e^{i zeta}, e^{-i xi}) over sqrt2.  The pair form has determinant
    +1, so it is not the Hadamard even at xi = zeta = 0 and the two
    readout branches trade places relative to it.
    """
    if isinstance(kind, str):
        if kind == "hadamard":
            return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
        raise ValueError(f"unknown control unitary {kind!r}")
    xi, zeta = float(kind[0]), float(kind[1])
    return np.array(
        [
            [np.exp(1j * xi), -np.exp(-1j * zeta)],
            [np.exp(1j * zeta), np.exp(-1j * xi)],
        ],
        dtype=complex,
    ) / np.sqrt(2.0)
