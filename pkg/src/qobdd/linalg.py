"""Dense complex linear algebra used by every other module.

Matrices are ``numpy`` arrays of dtype ``complex128``. The convention is
``M[j, i] = <j|M|i>``: states are column vectors and applying ``M`` to a
state means ``new = M @ old``.

Random unitaries are drawn from numpy's ``PCG64`` bit generator
(``numpy.random.default_rng``), whose stream is fixed and portable across
platforms for a given seed. The complex Gaussian matrix is filled real
parts first, then imaginary parts, each as a row-major ``(dim, dim)`` block
of ``standard_normal`` draws, and its columns are orthonormalized by
Gram-Schmidt in ascending column order.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionError, QobddError

DEFAULT_TOL = 1e-9
CONSTRUCTION_TOL = 1e-12
# residual norm below which a Gram-Schmidt candidate counts as dependent
_DEPENDENT = 1e-9


def as_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-d complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QobddError(f"{name} contains non-finite entries")
    return arr


def as_vector(v, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty 1-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise QobddError(f"{name} contains non-finite entries")
    return arr


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def basis_vector(dim: int, index: int) -> np.ndarray:
    if not 0 <= index < dim:
        raise IndexError(f"basis index {index} out of range for dimension {dim}")
    e = np.zeros(dim, dtype=np.complex128)
    e[index] = 1.0
    return e


def rotation(theta: float) -> np.ndarray:
    """Plane rotation ``[[cos, -sin], [sin, cos]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def inner(u, v) -> complex:
    """``<u|v>``, conjugate-linear in the first argument."""
    return complex(np.vdot(u, v))


def mat_mul(a, b) -> np.ndarray:
    """Matrix product ``a @ b``.

    Raises:
        DimensionError: if ``a.cols != b.rows``; the message names both shapes.
    """
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}"
        )
    return a @ b


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product with the left factor as the major index.

    ``result[i1*b.rows + i2, j1*b.cols + j2] == a[i1, j1] * b[i2, j2]``
    """
    return np.kron(as_matrix(a, "left factor"), as_matrix(b, "right factor"))


def tensor_all(factors: Sequence) -> np.ndarray:
    """Left-to-right Kronecker product of a non-empty sequence."""
    if not factors:
        raise DimensionError("tensor_all needs at least one factor")
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = tensor_product(out, f)
    return out


def direct_sum(a, b) -> np.ndarray:
    """Block-diagonal ``a (+) b``."""
    a = as_matrix(a)
    b = as_matrix(b)
    out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.complex128)
    out[: a.shape[0], : a.shape[1]] = a
    out[a.shape[0]:, a.shape[1]:] = b
    return out


def unitarity_defect(m) -> float:
    """Largest entry of ``|M^dagger M - I|``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitarity needs a square matrix, got {m.shape[0]}x{m.shape[1]}")
    gram = m.conj().T @ m
    return float(np.max(np.abs(gram - np.eye(m.shape[0]))))


def is_unitary(m, tol: float = DEFAULT_TOL) -> bool:
    """True iff every entry of ``M^dagger M - I`` is at most ``tol`` in modulus."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    return unitarity_defect(m) <= tol


def _orthogonalize(candidate: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    # two passes of modified Gram-Schmidt keep the result orthogonal to ~1e-15
    v = candidate.copy()
    for _ in range(2):
        for q in basis:
            v = v - np.vdot(q, v) * q
    return v


def complete_unitary_columns(targets: Sequence, pinned_cols: Sequence[int]) -> np.ndarray:
    """Extend orthonormal columns to a unitary matrix.

    Column ``pinned_cols[r]`` of the result is ``targets[r]``. The free
    columns, in ascending slot order, are the standard basis vectors
    ``e_0, e_1, ...`` orthogonalized against everything accepted so far,
    skipping candidates whose residual norm drops below 1e-9.
    """
    if len(targets) != len(pinned_cols) or not targets:
        raise DimensionError("need one pinned column per target vector")
    vecs = [as_vector(t, "target") for t in targets]
    dim = vecs[0].shape[0]
    if any(v.shape[0] != dim for v in vecs):
        raise DimensionError("target vectors differ in length")
    if len(set(pinned_cols)) != len(pinned_cols):
        raise ValueError("pinned columns must be distinct")
    for c in pinned_cols:
        if not 0 <= c < dim:
            raise IndexError(f"pinned column {c} out of range for dimension {dim}")
    gram = np.array([[np.vdot(u, v) for v in vecs] for u in vecs])
    if np.max(np.abs(gram - np.eye(len(vecs)))) > DEFAULT_TOL:
        raise QobddError("target vectors must be orthonormal within 1e-9")

    basis = list(vecs)
    extra = []
    for idx in range(dim):
        if len(basis) == dim:
            break
        v = _orthogonalize(basis_vector(dim, idx), basis)
        norm = np.linalg.norm(v)
        if norm < _DEPENDENT:
            continue
        v = v / norm
        basis.append(v)
        extra.append(v)

    out = np.zeros((dim, dim), dtype=np.complex128)
    for col, v in zip(pinned_cols, vecs):
        out[:, col] = v
    free = [c for c in range(dim) if c not in set(pinned_cols)]
    for col, v in zip(free, extra):
        out[:, col] = v
    return out


def complete_unitary(target, pinned_col: int) -> np.ndarray:
    """Unitary ``U`` with ``U @ e_pinned == target``.

    Raises:
        QobddError: if ``target`` is not normalized within 1e-9.
    """
    target = as_vector(target, "target")
    norm = np.linalg.norm(target)
    if abs(norm - 1.0) > DEFAULT_TOL:
        raise QobddError(f"target must be normalized, has norm {norm!r}")
    return complete_unitary_columns([target], [pinned_col])


def gram_schmidt_columns(m) -> np.ndarray:
    """Orthonormalize the columns of a square matrix in ascending order."""
    m = as_matrix(m)
    basis: list[np.ndarray] = []
    for c in range(m.shape[1]):
        v = _orthogonalize(m[:, c], basis)
        norm = np.linalg.norm(v)
        if norm < _DEPENDENT:
            raise QobddError(f"column {c} is linearly dependent on earlier columns")
        basis.append(v / norm)
    return np.column_stack(basis)


def _seed64(seed: int) -> int:
    return int(seed) % (1 << 64)


def random_unitary_from(rng: np.random.Generator, dim: int) -> np.ndarray:
    if dim < 1:
        raise DimensionError(f"dimension must be at least 1, got {dim}")
    re = rng.standard_normal((dim, dim))
    im = rng.standard_normal((dim, dim))
    return gram_schmidt_columns(re + 1j * im)


def random_unitary(dim: int, seed: int) -> np.ndarray:
    """Seeded random unitary; a pure function of ``(dim, seed)``."""
    return random_unitary_from(np.random.default_rng(_seed64(seed)), dim)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(_seed64(seed))
