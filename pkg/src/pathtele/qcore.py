"""Dense linear algebra for small multi-qubit density matrices.

Everything works on explicit complex numpy arrays.  The largest system in
this package is four qubits (16-dimensional), so nothing sparse or lazy is
worth the indirection; validated invariants win.

Subsystem convention: a :class:`DensityMatrix` carries ``dims``, the tuple
of subsystem dimensions, and its matrix acts on the tensor product in that
order with the leftmost factor major, i.e. the ``numpy.kron`` convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

# A "CMatrix" throughout this package is a dense complex numpy array,
# row-major, compared entrywise with an absolute tolerance.
CMatrix = np.ndarray

ATOL_INVARIANT = 1e-10     # hermiticity / trace / idempotence checks
ATOL_COMPLETENESS = 1e-12  # Kraus resolution of the identity
EIGENVALUE_FLOOR = -1e-10  # how negative an eigenvalue may be from rounding

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def identity(d: int) -> CMatrix:
    return np.eye(d, dtype=complex)


def dagger(m: CMatrix) -> CMatrix:
    return m.conj().T


def approx_eq(a: CMatrix, b: CMatrix, atol: float = ATOL_INVARIANT) -> bool:
    """Entrywise absolute comparison of two same-shaped matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a.shape == b.shape and bool(np.max(np.abs(a - b)) <= atol)


def kron_all(*mats: CMatrix) -> CMatrix:
    """Tensor product of any number of matrices, leftmost factor major."""
    out = np.asarray(mats[0], dtype=complex)
    for m in mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


@dataclass(frozen=True)
class DensityMatrix:
    """A validated density matrix over an ordered list of subsystems.

    Construction checks Hermiticity and unit trace to ``ATOL_INVARIANT``
    and positivity up to an eigenvalue floor of ``EIGENVALUE_FLOOR``; a
    violation raises ``ValueError``.  The stored array is read-only.
    """

    mat: CMatrix
    dims: Tuple[int, ...]

    def __post_init__(self):
        mat = np.array(self.mat, dtype=complex)
        dims = tuple(int(d) for d in self.dims)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {mat.shape}")
        side = int(np.prod(dims))
        if side != mat.shape[0]:
            raise ValueError(f"dims {dims} do not multiply to side {mat.shape[0]}")
        if np.max(np.abs(mat - mat.conj().T)) > ATOL_INVARIANT:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(mat)
        if abs(tr - 1.0) > ATOL_INVARIANT:
            raise ValueError(f"density matrix trace is {tr}, expected 1")
        if np.min(np.linalg.eigvalsh(mat)) < EIGENVALUE_FLOOR:
            raise ValueError("density matrix has a negative eigenvalue")
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def side(self) -> int:
        return self.mat.shape[0]


def tensor(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    """Joint state of two independent registers, ``a``'s subsystems major."""
    return DensityMatrix(np.kron(a.mat, b.mat), a.dims + b.dims)


def ptrace_raw(mat: CMatrix, dims: Sequence[int], keep: Sequence[int]) -> CMatrix:
    """Partial trace on a raw array; ``keep`` must be sorted and in range."""
    ndims = list(dims)
    work = mat.reshape(tuple(ndims) + tuple(ndims))
    for idx in reversed(range(len(ndims))):
        if idx in keep:
            continue
        k = len(ndims)
        work = np.trace(work, axis1=idx, axis2=idx + k)
        del ndims[idx]
    side = int(np.prod(ndims))
    return work.reshape(side, side)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems retain their relative order.  Raises ``ValueError``
    on an out-of-range or empty ``keep``.
    """
    keep_sorted = sorted(set(int(k) for k in keep))
    if not keep_sorted:
        raise ValueError("keep must name at least one subsystem")
    if keep_sorted[0] < 0 or keep_sorted[-1] >= len(rho.dims):
        raise ValueError(f"keep {keep_sorted} out of range for dims {rho.dims}")
    out = ptrace_raw(rho.mat, rho.dims, keep_sorted)
    return DensityMatrix(out, tuple(rho.dims[i] for i in keep_sorted))


def apply_ops_raw(mat: CMatrix, ops: Sequence[CMatrix]) -> CMatrix:
    """Sum of ``K @ mat @ K^dag`` over ``ops``, no validation."""
    out = np.zeros_like(mat)
    for op in ops:
        out += op @ mat @ op.conj().T
    return out


def apply_kraus(rho: DensityMatrix, ops) -> DensityMatrix:
    """Push ``rho`` through a channel given by Kraus operators.

    ``ops`` is any sequence of equally sized square matrices (an object
    with an ``.ops`` attribute, such as ``channels.KrausSet``, also
    works).  The operators must resolve the identity; a violation beyond
    ``ATOL_INVARIANT`` raises ``ValueError`` since it signals a malformed
    channel rather than numerical noise.
    """
    op_list = [np.asarray(op, dtype=complex) for op in getattr(ops, "ops", ops)]
    if not op_list:
        raise ValueError("no Kraus operators given")
    side = rho.side
    for op in op_list:
        if op.shape != (side, side):
            raise ValueError(f"Kraus operator shape {op.shape} does not match state side {side}")
    comp = sum(op.conj().T @ op for op in op_list)
    if np.max(np.abs(comp - np.eye(side))) > ATOL_INVARIANT:
        raise ValueError("Kraus operators do not resolve the identity")
    return DensityMatrix(apply_ops_raw(rho.mat, op_list), rho.dims)


def lift(op: CMatrix, dims: Sequence[int], subsystem: int) -> CMatrix:
    """Embed a single-subsystem operator into the full tensor space."""
    factors = [np.eye(d, dtype=complex) for d in dims]
    factors[subsystem] = np.asarray(op, dtype=complex)
    return kron_all(*factors)


def project_and_normalize(
    rho: DensityMatrix, subsystem: int, proj: CMatrix
) -> Tuple[Optional[DensityMatrix], float]:
    """Measure ``proj`` on one subsystem and renormalize.

    Returns ``(state, probability)`` where the state lives on the full
    register (the projected subsystem is not sliced away).  An outcome of
    probability zero is not an error: the state comes back as ``None`` and
    the probability as exactly ``0.0`` so callers can flag the branch.
    """
    if subsystem < 0 or subsystem >= len(rho.dims):
        raise ValueError(f"subsystem {subsystem} out of range for dims {rho.dims}")
    proj = np.asarray(proj, dtype=complex)
    d = rho.dims[subsystem]
    if proj.shape != (d, d):
        raise ValueError(f"projector shape {proj.shape} does not fit subsystem of dimension {d}")
    if np.max(np.abs(proj - proj.conj().T)) > ATOL_INVARIANT or not approx_eq(proj @ proj, proj):
        raise ValueError("proj is not a projector")
    big = lift(proj, rho.dims, subsystem)
    unnorm = big @ rho.mat @ big.conj().T
    p = float(np.real(np.trace(unnorm)))
    if p < ATOL_COMPLETENESS:
        return None, 0.0
    return DensityMatrix(unnorm / p, rho.dims), p


def fidelity_to_pure(rho: DensityMatrix, phi) -> float:
    """Overlap ``|<phi| rho |phi>|`` with a pure state.

    ``phi`` is either a ket vector or anything with a ``.ket()`` method.
    """
    ket = phi.ket() if hasattr(phi, "ket") else np.asarray(phi, dtype=complex)
    ket = ket.reshape(-1)
    if ket.shape[0] != rho.side:
        raise ValueError(f"ket of length {ket.shape[0]} does not match state side {rho.side}")
    return float(abs(np.vdot(ket, rho.mat @ ket)))
