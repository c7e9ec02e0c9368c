"""Dense complex linear algebra used throughout the package.

Matrices and vectors are plain numpy arrays. Functions validate shape and
finiteness at the boundary and otherwise stay out of the way.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InputError, NumericalFailure, PreconditionError

#: relative tolerance for structural predicates, scaled by the Frobenius norm
STRUCT_RTOL = 1e-12


def as_square(A, name: str = "A") -> np.ndarray:
    """Return ``A`` as a finite square 2-D complex array or raise InputError."""
    A = np.asarray(A)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError(f"{name} contains NaN or Inf")
    return A.astype(complex)


def as_vector(u, name: str = "u") -> np.ndarray:
    u = np.asarray(u)
    if u.ndim != 1 or u.size == 0:
        raise InputError(f"{name} must be a non-empty 1-D vector, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise InputError(f"{name} contains NaN or Inf")
    return u.astype(complex)


def inner(u, v) -> complex:
    """Standard inner product ``conj(u)^T v`` (conjugate-linear in ``u``)."""
    u = as_vector(u, "u")
    v = as_vector(v, "v")
    if u.shape != v.shape:
        raise InputError(f"dimension mismatch: {u.shape[0]} vs {v.shape[0]}")
    return complex(np.vdot(u, v))


def real_embed_matrix(A) -> np.ndarray:
    """Real 2N x 2N representation ``[[Re A, -Im A], [Im A, Re A]]``.

    With ``real_embed_vector(w) = (Re w, Im w)`` this satisfies
    ``Re <w, Aw> == <w_R, A_R w_R>`` and ``|Aw| == |A_R w_R|``.
    """
    A = as_square(A)
    A1, A2 = A.real, A.imag
    return np.block([[A1, -A2], [A2, A1]])


def real_embed_vector(w) -> np.ndarray:
    w = np.asarray(w, dtype=complex)
    return np.concatenate([w.real, w.imag], axis=-1)


def complex_from_real(x) -> np.ndarray:
    """Inverse of :func:`real_embed_vector` (works on the last axis)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1] // 2
    return x[..., :n] + 1j * x[..., n:]


def hermitian_part(A) -> np.ndarray:
    A = np.asarray(A)
    return 0.5 * (A + A.conj().T)


@dataclass(frozen=True)
class HermitianEigenSystem:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns orthonormal

    def residual(self, A) -> float:
        A = np.asarray(A)
        U, lam = self.eigenvectors, self.eigenvalues
        return float(np.max(np.linalg.norm(A @ U - U * lam, axis=0)))


def is_hermitian(A, rtol: float = STRUCT_RTOL) -> bool:
    A = np.asarray(A)
    scale = max(np.linalg.norm(A), 1.0)
    return bool(np.linalg.norm(A - A.conj().T) <= rtol * scale)


def is_normal(A, rtol: float = STRUCT_RTOL) -> bool:
    A = np.asarray(A)
    scale = max(np.linalg.norm(A) ** 2, 1.0)
    AH = A.conj().T
    return bool(np.linalg.norm(A @ AH - AH @ A) <= rtol * scale)


def hermitian_eigen(A) -> HermitianEigenSystem:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    PreconditionError
        If ``A`` is not Hermitian to ``1e-12 * ||A||_F``.
    NumericalFailure
        If LAPACK does not converge.
    """
    A = as_square(A)
    if not is_hermitian(A):
        raise PreconditionError("matrix is not Hermitian")
    H = hermitian_part(A)
    try:
        lam, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericalFailure(f"Hermitian eigensolver did not converge: {exc}") from exc
    return HermitianEigenSystem(eigenvalues=lam, eigenvectors=U)


def lambda_min_hermitian_part(A) -> float:
    """Smallest eigenvalue of ``(A + A*)/2``, i.e. ``min Re<w,Aw>`` on the unit sphere."""
    A = as_square(A)
    return float(np.linalg.eigvalsh(hermitian_part(A))[0])


def is_skew_symmetric(S, atol: float = 1e-12) -> bool:
    S = np.asarray(S)
    return bool(np.all(np.isreal(S)) and np.max(np.abs(S + S.T), initial=0.0) <= atol)


def expm_skew(S, t: float = 1.0) -> np.ndarray:
    """Rotation ``exp(t S)`` for a real skew-symmetric ``S``."""
    S = np.asarray(S)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InputError(f"S must be square, got shape {S.shape}")
    if np.iscomplexobj(S):
        if np.any(S.imag != 0):
            raise PreconditionError("S must be real")
        S = S.real
    if not is_skew_symmetric(S):
        raise PreconditionError("S is not skew-symmetric")
    return scipy.linalg.expm(float(t) * S.astype(float))


@dataclass(frozen=True)
class StructureFlags:
    hermitian: bool
    normal: bool
    accretive: bool
    strictly_accretive: bool
    invertible: bool
    lambda_min_hermitian_part: float
    sigma_min: float


def structural_predicates(A) -> StructureFlags:
    """Hermitian / normal / accretive / invertible flags of a square matrix.

    Accretivity is read off the smallest eigenvalue of the Hermitian part,
    invertibility off the smallest singular value; both thresholds are
    relative to the Frobenius norm.
    """
    A = as_square(A)
    fro = np.linalg.norm(A)
    tol = STRUCT_RTOL * max(fro, 1.0)
    lmin = lambda_min_hermitian_part(A)
    smin = float(np.linalg.svd(A, compute_uv=False)[-1])
    return StructureFlags(
        hermitian=is_hermitian(A),
        normal=is_normal(A),
        accretive=lmin >= -tol,
        strictly_accretive=lmin > tol,
        invertible=smin > STRUCT_RTOL * fro,
        lambda_min_hermitian_part=lmin,
        sigma_min=smin,
    )


def normal_eigen(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and an orthonormal eigenbasis of a normal matrix.

    Uses the complex Schur form, whose triangular factor is diagonal for
    normal input; this keeps eigenvectors orthonormal even for repeated
    eigenvalues, which ``np.linalg.eig`` does not guarantee.
    """
    A = as_square(A)
    if not is_normal(A):
        raise PreconditionError("matrix is not normal")
    T, Z = scipy.linalg.schur(A, output="complex")
    return np.diag(T).copy(), Z
