"""First antieigenvalue, antieigenvector and real angle of a square matrix.

``mu1(A)`` is the infimum of ``Re<w, Aw> / |Aw|`` over unit vectors with
``Aw != 0``: the cosine of the largest angle by which ``A`` turns a vector.
It is computed either by brute-force minimisation on the unit sphere or, for
Hermitian positive definite and normal accretive matrices, in closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalFailure, PreconditionError
from .linalg import (
    as_square,
    complex_from_real,
    hermitian_eigen,
    normal_eigen,
    real_embed_matrix,
    real_embed_vector,
    structural_predicates,
)
from .sphere import SphereOptions, minimize_on_sphere

METHODS = ("brute", "hermitian_pd", "normal_accretive", "scalar")

# relative modulus gap below which two eigenvalues count as equal in modulus
MODULUS_GAP = 1e-10
# Aw is treated as zero below this multiple of ||A||
NULL_RTOL = 1e-14
CONFIRM_RESTARTS = 16
CONFIRM_ATOL = 1e-6


@dataclass
class AntieigenResult:
    mu1: float
    antieigenvector: np.ndarray
    angle_rad: float
    method: str
    restarts_used: int = 0
    best_objective_history: list | None = None
    converged: bool = True
    grad_norm: float = 0.0

    def to_dict(self) -> dict:
        return {
            "mu1": self.mu1,
            "angle_rad": self.angle_rad,
            "method": self.method,
            "witness": [[z.real, z.imag] for z in np.asarray(self.antieigenvector, dtype=complex)],
        }


@dataclass
class NormalFormTrace:
    """Candidate sets behind the normal-accretive closed form."""

    E: list
    F: list  # dicts with keys value, i, j, w_i_sq, w_j_sq
    rho: np.ndarray
    r_values: np.ndarray
    eigenvalues: np.ndarray = field(repr=False, default=None)


def quotient(A, w) -> float:
    """``Re<w, Aw> / (|w| |Aw|)`` evaluated directly in complex arithmetic."""
    A = np.asarray(A, dtype=complex)
    w = np.asarray(w, dtype=complex)
    Aw = A @ w
    return float(np.vdot(w, Aw).real / (np.linalg.norm(w) * np.linalg.norm(Aw)))


def _clip_cos(m: float) -> float:
    return min(1.0, max(-1.0, m))


def _result(mu, w, method, **kw) -> AntieigenResult:
    mu = _clip_cos(float(mu))
    return AntieigenResult(mu1=mu, antieigenvector=w, angle_rad=math.acos(mu), method=method, **kw)


def antieigen_objective(M: np.ndarray):
    """Batched ``x -> <x, Mx>/|Mx|`` on the real sphere with its gradient."""
    MtM = M.T @ M
    Msym = M + M.T
    floor = NULL_RTOL * max(np.linalg.norm(M), 1e-300)

    def fun(X):
        MX = X @ M.T
        r = np.linalg.norm(MX, axis=1)
        valid = r > floor
        rs = np.where(valid, r, 1.0)
        q = np.sum(X * MX, axis=1)
        f = q / rs
        G = (X @ Msym.T) / rs[:, None] - (q / rs**3)[:, None] * (X @ MtM.T)
        return np.where(valid, f, np.inf), G, valid

    return fun


def structured_starts(A, field: str = "complex") -> np.ndarray:
    """Deterministic start points for the sphere search, one per row.

    Eigenvectors of ``A``, right singular vectors and eigenvectors of the
    Hermitian part. Minimisers near a null direction or an eigenvector with
    a badly turned eigenvalue sit in narrow basins that random starts in
    higher dimension often miss.
    """
    A = as_square(A)
    cols = [np.linalg.svd(A)[2].conj().T, np.linalg.eigh(0.5 * (A + A.conj().T))[1]]
    try:
        cols.append(np.linalg.eig(A)[1])
    except np.linalg.LinAlgError:  # pragma: no cover
        pass
    V = np.concatenate(cols, axis=1)
    V = V[:, np.all(np.isfinite(V), axis=0)]
    if field == "complex":
        return np.array([real_embed_vector(v) for v in V.T])
    return np.concatenate([V.real.T, V.imag.T])


def mu1_brute(A, *, restarts: int = 64, max_iters: int = 10000, tol: float = 1e-10,
              seed: int = 0, field: str = "complex", record_history: bool = False) -> AntieigenResult:
    """Minimise the antieigenvalue quotient by multi-start projected gradient.

    For ``field="complex"`` the search runs over the real embedding
    ``S^{2N-1}`` of the complex unit sphere; ``field="real"`` searches the
    real sphere ``S^{N-1}`` of a real matrix. Besides ``restarts`` random
    starts the search runs from :func:`structured_starts`.
    """
    A = as_square(A)
    if not np.any(A):
        raise InputError("A is the zero matrix; the antieigenvalue quotient is undefined")
    if field == "complex":
        M = real_embed_matrix(A)
    elif field == "real":
        if np.any(A.imag != 0):
            raise InputError("field='real' requires a real matrix")
        M = A.real.copy()
    else:
        raise InputError(f"unknown field {field!r}")
    opts = SphereOptions(restarts=restarts, max_iters=max_iters, tol=tol, seed=seed,
                         record_history=record_history)
    res = minimize_on_sphere(antieigen_objective(M), M.shape[0], opts,
                             starts=structured_starts(A, field))
    w = complex_from_real(res.x) if field == "complex" else res.x.astype(complex)
    return _result(res.fun, w, "brute", restarts_used=res.restarts_used,
                   best_objective_history=res.history or None,
                   converged=res.converged, grad_norm=res.grad_norm)


def mu1_hermitian_pd(A) -> AntieigenResult:
    """Closed form ``2 sqrt(kappa) / (kappa + 1)`` for Hermitian positive definite ``A``.

    The witness ``sqrt(l_max) u_min + sqrt(l_min) u_max`` (normalised) attains it.
    """
    A = as_square(A)
    eig = hermitian_eigen(A)
    lam = eig.eigenvalues
    l1, lN = lam[0], lam[-1]
    if not l1 > 0:
        raise PreconditionError(f"matrix is not positive definite (smallest eigenvalue {l1:.3g})")
    mu = math.sqrt(l1 * lN) / (0.5 * (l1 + lN))
    U = eig.eigenvectors
    w = math.sqrt(lN) * U[:, 0] + math.sqrt(l1) * U[:, -1]
    w = w / np.linalg.norm(w)
    method = "scalar" if A.shape[0] == 1 else "hermitian_pd"
    return _result(mu, w, method)


def _normal_candidates(lam: np.ndarray):
    a = lam.real
    mod = np.abs(lam)
    mod2 = mod**2
    r_values = a / mod
    rho = mod[None, :] / mod[:, None]
    E = list(r_values)
    F = []
    n = lam.size
    for i in range(n):
        for j in range(n):
            # pairs ordered so that |l_i| < |l_j|; the reversed order only flips the sign
            if not mod[i] < mod[j]:
                continue
            if (mod[j] - mod[i]) <= MODULUS_GAP * mod[j]:
                continue
            if a[i] == a[j]:
                continue
            denom = (mod2[i] - mod2[j]) * (a[i] - a[j])
            wi2 = (a[j] * mod2[j] - 2 * a[i] * mod2[j] + a[j] * mod2[i]) / denom
            wj2 = (a[i] * mod2[i] - 2 * a[j] * mod2[i] + a[i] * mod2[j]) / denom
            if not 0.0 < wi2 < 1.0:
                continue
            rad = (a[j] - a[i]) * (a[i] * mod2[j] - a[j] * mod2[i])
            value = 2.0 * math.sqrt(max(rad, 0.0)) / (mod2[j] - mod2[i])
            F.append({"value": value, "i": i, "j": j, "w_i_sq": wi2, "w_j_sq": wj2})
    return E, F, rho, r_values


def mu1_normal_accretive(A) -> tuple[AntieigenResult, NormalFormTrace]:
    """Closed form ``min(E u F)`` for a normal accretive matrix.

    ``E`` collects ``Re l_j / |l_j|`` (single-eigenvector witnesses), ``F``
    the two-eigenvector candidates whose witness weights ``|w_i|^2`` lie
    strictly inside ``(0, 1)``.
    """
    A = as_square(A)
    flags = structural_predicates(A)
    if not flags.normal:
        raise PreconditionError("matrix is not normal")
    if not flags.accretive:
        raise PreconditionError("matrix is not accretive")
    lam, Z = normal_eigen(A)
    if np.any(np.abs(lam) <= 1e-14 * max(np.abs(lam).max(), 1e-300)):
        raise PreconditionError("matrix has a zero eigenvalue")
    E, F, rho, r_values = _normal_candidates(lam)
    trace = NormalFormTrace(E=E, F=F, rho=rho, r_values=r_values, eigenvalues=lam)

    j = int(np.argmin(E))
    best, w = E[j], Z[:, j].copy()
    if F:
        k = min(range(len(F)), key=lambda m: F[m]["value"])
        if F[k]["value"] < best:
            c = F[k]
            best = c["value"]
            w = math.sqrt(c["w_i_sq"]) * Z[:, c["i"]] + math.sqrt(c["w_j_sq"]) * Z[:, c["j"]]
            w = w / np.linalg.norm(w)
    method = "scalar" if A.shape[0] == 1 else "normal_accretive"
    return _result(best, w, method), trace


def mu1(A, method: str = "auto", *, confirm: bool = True, seed: int = 0, **brute_opts) -> AntieigenResult:
    """First antieigenvalue with automatic choice of method.

    ``auto`` prefers the Hermitian positive definite closed form, then the
    normal accretive closed form, then brute force. A closed-form answer is
    confirmed against a short brute-force run unless ``confirm=False``.
    """
    A = as_square(A)
    if method not in ("auto", "brute", "hermitian", "normal"):
        raise InputError(f"unknown method {method!r}")
    if method == "brute":
        return mu1_brute(A, seed=seed, **brute_opts)
    if method == "hermitian":
        res = mu1_hermitian_pd(A)
    elif method == "normal":
        res = mu1_normal_accretive(A)[0]
    else:
        flags = structural_predicates(A)
        res = None
        if flags.hermitian and flags.strictly_accretive:
            res = mu1_hermitian_pd(A)
        elif flags.normal and flags.accretive:
            try:
                res = mu1_normal_accretive(A)[0]
            except PreconditionError:
                res = None
        if res is None:
            return mu1_brute(A, seed=seed, **brute_opts)
    if confirm:
        check = mu1_brute(A, restarts=CONFIRM_RESTARTS, seed=seed)
        if abs(check.mu1 - res.mu1) > CONFIRM_ATOL:
            raise NumericalFailure(
                f"closed form {res.mu1!r} disagrees with brute force {check.mu1!r}")
    return res


def angle(A, **kw) -> float:
    """Real angle ``arccos(mu1(A))`` in radians."""
    return mu1(A, **kw).angle_rad
