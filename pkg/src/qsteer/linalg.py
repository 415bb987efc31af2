"""Dense complex linear algebra on small finite-dimensional Hilbert spaces.

Kets are 1-d complex ndarrays, operators are square 2-d complex ndarrays.
Every Hilbert space in this package is tiny (dim of a few tens at most),
so storage is dense throughout and clarity wins over asymptotic cleverness.
All functions are pure; nothing here mutates its arguments.
"""

from __future__ import annotations

import numpy as np

# Hard cap on Kronecker-product output dimension.
MAX_KRON_DIM = 4096

# Relative tolerance below which an operator counts as Hermitian.
HERMITIAN_TOL = 1e-10

KET_NORM_TOL = 1e-10


def as_operator(a, name: str = "operator") -> np.ndarray:
    """Validate ``a`` as a square complex matrix and return it as complex128."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_ket(v, name: str = "ket", normalized: bool = False) -> np.ndarray:
    """Validate ``v`` as a 1-d complex vector, optionally requiring unit norm."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"{name} must be a 1-d vector, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    if normalized:
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > KET_NORM_TOL:
            raise ValueError(f"{name} is not normalized: norm = {norm!r}")
    return arr


def basis_ket(dim: int, index: int) -> np.ndarray:
    out = np.zeros(dim, dtype=np.complex128)
    out[index] = 1.0
    return out


def dyad(left, right) -> np.ndarray:
    """|left><right| as a dense matrix."""
    return np.outer(as_ket(left), as_ket(right).conj())


def projector(k) -> np.ndarray:
    return dyad(k, k)


def kron(a, b, max_dim: int = MAX_KRON_DIM) -> np.ndarray:
    """Kronecker product with a dimension guard.

    Entry ((i*db + k), (j*db + l)) of the result is a[i, j] * b[k, l].
    """
    a = as_operator(a, "kron operand")
    b = as_operator(b, "kron operand")
    out_dim = a.shape[0] * b.shape[0]
    if out_dim > max_dim:
        raise ValueError(
            f"kron output dimension {out_dim} exceeds the maximum {max_dim}"
        )
    return np.kron(a, b)


def commutator(a, b) -> np.ndarray:
    """a b - b a."""
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def dagger(a) -> np.ndarray:
    """Hermitian adjoint."""
    return as_operator(a).conj().T


def trace(a) -> complex:
    return complex(np.trace(as_operator(a)))


def frobenius_distance(a, b) -> float:
    a = as_operator(a)
    b = as_operator(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    """True when ||a - a^dag||_F <= tol * max(1, ||a||_F)."""
    a = as_operator(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    return float(np.linalg.norm(a - a.conj().T)) <= tol * scale


def hermitian_eigen(a, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues ascending and the
    eigenvectors as the columns of ``vectors``.  The input is symmetrized
    as (a + a^dag)/2 before the decomposition; inputs that are not
    Hermitian within ``tol`` (relative to the matrix norm) are rejected.
    Within a degenerate eigenvalue cluster only orthonormality is
    guaranteed, not any particular basis choice.
    """
    a = as_operator(a)
    if not is_hermitian(a, tol):
        raise ValueError("input is not Hermitian within tolerance")
    values, vectors = np.linalg.eigh(0.5 * (a + a.conj().T))
    return values, vectors
