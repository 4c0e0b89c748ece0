"""Input, control, and shared-resource state families.

Kets follow the convention that the |0> amplitude is real and
non-negative; global phase is never physical here.  Two-qubit shared
states are ordered sender-ancilla (x) receiver.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import cos, pi, sin, sqrt
from typing import Union

import numpy as np

from .qcore import CMatrix, DensityMatrix


@dataclass(frozen=True)
class PureQubit:
    """Input qubit a|0> + sqrt(1-a^2) e^{i eta} |1> with a in [0, 1]."""

    a: float
    eta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.a <= 1.0:
            raise ValueError(f"amplitude a must lie in [0, 1], got {self.a}")

    @classmethod
    def from_polar(cls, n: float, eta: float = 0.0) -> "PureQubit":
        """Build from the Bloch polar angle n in [0, pi], so a = cos(n/2)."""
        if not 0.0 <= n <= pi:
            raise ValueError(f"polar angle must lie in [0, pi], got {n}")
        return cls(cos(n / 2.0), eta)

    def ket(self) -> CMatrix:
        b = sqrt(max(1.0 - self.a * self.a, 0.0))
        return np.array([self.a, b * np.exp(1j * self.eta)], dtype=complex)

    def density(self) -> DensityMatrix:
        k = self.ket()
        return DensityMatrix(np.outer(k, k.conj()), (2,))


def orthogonal_ket(ket: CMatrix) -> CMatrix:
    """The unique (up to phase) qubit ket orthogonal to ``ket``."""
    ket = np.asarray(ket, dtype=complex).reshape(-1)
    if ket.shape != (2,):
        raise ValueError("orthogonal_ket expects a single-qubit ket")
    return np.array([-np.conj(ket[1]), np.conj(ket[0])], dtype=complex)


@dataclass(frozen=True)
class ControlSpec:
    """Control qubit cos(theta_c/2)|0> + sin(theta_c/2) e^{i phi_c} |1>.

    theta_c is restricted to [0, pi/2] following the source convention;
    phi_c is accepted on [0, 2pi) so azimuth sweeps can cover the full
    circle (the construction only needs [0, pi]).
    """

    theta_c: float
    phi_c: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta_c <= pi / 2.0 + 1e-12:
            raise ValueError(f"theta_c must lie in [0, pi/2], got {self.theta_c}")
        if not 0.0 <= self.phi_c < 2.0 * pi:
            raise ValueError(f"phi_c must lie in [0, 2pi), got {self.phi_c}")

    @property
    def alpha(self) -> float:
        return cos(self.theta_c / 2.0)

    @property
    def beta(self) -> complex:
        return sin(self.theta_c / 2.0) * np.exp(1j * self.phi_c)

    @property
    def x_interference(self) -> float:
        """Interference weight X = alpha beta* + alpha* beta = sin(theta_c) cos(phi_c)."""
        return sin(self.theta_c) * cos(self.phi_c)

    @property
    def coherence(self) -> float:
        """l1 coherence of the control state, sin(theta_c)."""
        return sin(self.theta_c)

    def ket(self) -> CMatrix:
        return np.array([self.alpha, self.beta], dtype=complex)

    def density(self) -> DensityMatrix:
        k = self.ket()
        return DensityMatrix(np.outer(k, k.conj()), (2,))

    def dephased_density(self) -> DensityMatrix:
        """The control with its off-diagonal coherences erased."""
        k = self.ket()
        return DensityMatrix(np.diag(np.abs(k) ** 2).astype(complex), (2,))


@dataclass(frozen=True)
class DiagonalSeparable:
    """Computational-diagonal two-qubit resource sum_i p_i |ii'><ii'|.

    Weights follow basis order |00>, |01>, |10>, |11>.  The anti-aligned
    weight y = p1 + p2 is the only combination the protocol fidelities
    depend on.
    """

    p0: float
    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        ps = (self.p0, self.p1, self.p2, self.p3)
        if min(ps) < -1e-12:
            raise ValueError(f"weights must be non-negative, got {ps}")
        if abs(sum(ps) - 1.0) > 1e-10:
            raise ValueError(f"weights must sum to 1, got {sum(ps)}")

    @property
    def y(self) -> float:
        return self.p1 + self.p2

    @property
    def z(self) -> float:
        return self.p0 + self.p3


def antialigned_mix(q: float) -> DiagonalSeparable:
    """q|01><01| + (1-q)|10><10|; the y = 1 resource family."""
    return DiagonalSeparable(0.0, q, 1.0 - q, 0.0)


def aligned_mix(r: float) -> DiagonalSeparable:
    """r|00><00| + (1-r)|11><11|; the y = 0 resource family."""
    return DiagonalSeparable(r, 0.0, 0.0, 1.0 - r)


@dataclass(frozen=True)
class Werner:
    """Isotropic mixture p |bell><bell| + (1-p) I/4."""

    p: float
    bell: str = "psi-"

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Werner weight must lie in [0, 1], got {self.p}")
        if self.bell not in BELL_LABELS:
            raise ValueError(f"unknown Bell label {self.bell!r}")


@dataclass(frozen=True)
class GeneralProductMix:
    """r |omega gamma><omega gamma| + (1-r) |omega' gamma'><omega' gamma'|.

    Primes denote orthogonal complements; r = 1 is an arbitrary pure
    product state.
    """

    r: float
    omega: PureQubit
    gamma: PureQubit

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"mixing weight must lie in [0, 1], got {self.r}")


SharedState = Union[DiagonalSeparable, Werner, GeneralProductMix]

BELL_LABELS = ("phi+", "phi-", "psi+", "psi-")


def bell_state(label: str) -> CMatrix:
    """Ket of one of the four Bell states, computational basis order."""
    s = 1.0 / sqrt(2.0)
    table = {
        "phi+": np.array([s, 0, 0, s], dtype=complex),
        "phi-": np.array([s, 0, 0, -s], dtype=complex),
        "psi+": np.array([0, s, s, 0], dtype=complex),
        "psi-": np.array([0, s, -s, 0], dtype=complex),
    }
    if label not in table:
        raise ValueError(f"unknown Bell label {label!r}; expected one of {BELL_LABELS}")
    return table[label]


def build_shared(shared: SharedState) -> DensityMatrix:
    """Materialize a shared-state description as a 4x4 density matrix."""
    if isinstance(shared, DiagonalSeparable):
        mat = np.diag([shared.p0, shared.p1, shared.p2, shared.p3]).astype(complex)
    elif isinstance(shared, Werner):
        b = bell_state(shared.bell)
        mat = shared.p * np.outer(b, b.conj()) + (1.0 - shared.p) * np.eye(4) / 4.0
    elif isinstance(shared, GeneralProductMix):
        w = shared.omega.ket()
        g = shared.gamma.ket()
        first = np.kron(w, g)
        second = np.kron(orthogonal_ket(w), orthogonal_ket(g))
        mat = shared.r * np.outer(first, first.conj())
        mat = mat + (1.0 - shared.r) * np.outer(second, second.conj())
    else:
        raise TypeError(f"not a shared-state description: {shared!r}")
    return DensityMatrix(mat, (2, 2))


def coherence_l1(rho: DensityMatrix) -> float:
    """l1 coherence: the sum of absolute off-diagonal entries."""
    mat = rho.mat
    return float(np.sum(np.abs(mat)) - np.sum(np.abs(np.diag(mat))))
