"""Lp-dissipativity of a diffusion matrix and its antieigenvalue characterisation.

With ``b = p - 2`` the two-vector condition

    Re<w,Aw> + b Re<w,z> Re<z,Aw> >= gamma    for all unit w, z

holds for some ``gamma > 0`` exactly when the one-vector functional
``(1 + b/2) Re<w,Aw> - |b|/2 |Aw|`` is bounded below by ``gamma`` on the unit
sphere, and that in turn happens exactly when ``A`` is invertible and
``mu1(A) > |p-2|/p``. The inner minimisation over ``z`` is solved in closed
form by a Lagrange multiplier argument; :func:`lagrange_stationary` exposes
every intermediate of that construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antieigen import mu1 as _mu1
from .antieigen import structured_starts
from .errors import InputError, PreconditionError
from .linalg import (
    as_square,
    complex_from_real,
    lambda_min_hermitian_part,
    real_embed_matrix,
    real_embed_vector,
    structural_predicates,
)
from .sphere import SphereOptions, minimize_on_sphere

DECIDE_TOL = 1e-10
DECISION_BAND = 1e-6
# sin of the angle between w and Aw below which they count as parallel
DEPENDENCE_SIN = 1e-8


def _check_p(p: float) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise InputError(f"p must lie in (1, inf), got {p}")
    return p


def threshold(p: float) -> float:
    """``|p-2|/p``, the lower bound ``mu1`` has to beat."""
    p = _check_p(p)
    return abs(p - 2.0) / p


@dataclass
class DissipativityReport:
    p: float
    b: float
    gamma_best: float
    witness_w: np.ndarray
    threshold: float
    mu1: float
    margin: float
    verdict: bool
    accretivity_constant: float
    tol_decide: float = DECIDE_TOL
    field: str = "complex"

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "b": self.b,
            "gamma_best": self.gamma_best,
            "threshold": self.threshold,
            "mu1": self.mu1,
            "margin": self.margin,
            "verdict": self.verdict,
            "tol_decide": self.tol_decide,
            "accretivity_constant": self.accretivity_constant,
            "witness_w": [[z.real, z.imag] for z in np.asarray(self.witness_w, dtype=complex)],
        }


def reduced_objective(M: np.ndarray, b: float):
    """Batched ``x -> (1+b/2)<x,Mx> - |b|/2 |Mx|`` on the real sphere."""
    c1, c2 = 1.0 + 0.5 * b, 0.5 * abs(b)
    Msym = M + M.T
    MtM = M.T @ M

    def fun(X):
        MX = X @ M.T
        q = np.sum(X * MX, axis=1)
        r = np.linalg.norm(MX, axis=1)
        rs = np.where(r > 0, r, 1.0)
        f = c1 * q - c2 * r
        G = c1 * (X @ Msym.T) - (c2 / rs)[:, None] * (X @ MtM.T) * (r > 0)[:, None]
        return f, G, np.ones(X.shape[0], dtype=bool)

    return fun


def _embed(A, field):
    if field == "complex":
        return real_embed_matrix(A)
    if field == "real":
        if np.any(A.imag != 0):
            raise InputError("field='real' requires a real matrix")
        return A.real.copy()
    raise InputError(f"unknown field {field!r}")


def _unembed(x, field):
    return complex_from_real(x) if field == "complex" else np.asarray(x, dtype=complex)


def gamma_best(A, p: float, *, restarts: int = 64, max_iters: int = 10000, tol: float = 1e-10,
               seed: int = 0, field: str = "complex", mu1_value: float | None = None) -> DissipativityReport:
    """Best constant of the reduced dissipativity functional and its verdict.

    ``gamma_best`` is the minimum over unit ``w`` of
    ``(1+b/2) Re<w,Aw> - |b|/2 |Aw|``; ``verdict`` is ``gamma_best > tol_decide``.
    For a real 1x1 matrix (``field="real"``) the reduced functional is not
    equivalent to the two-vector condition, and the constant ``(p-1) a``
    of the two-vector condition is reported instead.
    """
    p = _check_p(p)
    A = as_square(A)
    b = p - 2.0
    thr = abs(b) / p
    M = _embed(A, field)
    acc = lambda_min_hermitian_part(A)

    if field == "real" and A.shape[0] == 1:
        a = float(A.real[0, 0])
        g = (p - 1.0) * a
        m = 1.0 if a > 0 else (-1.0 if a < 0 else 0.0)
        return DissipativityReport(p=p, b=b, gamma_best=g, witness_w=np.ones(1, complex),
                                   threshold=thr, mu1=m, margin=m - thr,
                                   verdict=g > DECIDE_TOL, accretivity_constant=acc, field=field)

    scale = float(np.linalg.norm(M, 2))
    if scale == 0.0:
        g, w = 0.0, np.eye(A.shape[0], 1, dtype=complex)[:, 0]
    else:
        # gamma is positively homogeneous in A, so optimise the normalised problem
        opts = SphereOptions(restarts=restarts, max_iters=max_iters, tol=tol, seed=seed)
        res = minimize_on_sphere(reduced_objective(M / scale, b), M.shape[0], opts,
                                 starts=structured_starts(A, field))
        g, w = res.fun * scale, _unembed(res.x, field)

    if mu1_value is None:
        mu1_value = _mu1_for(A, field, seed) if scale > 0 else -1.0
    return DissipativityReport(p=p, b=b, gamma_best=float(g), witness_w=w, threshold=thr,
                               mu1=float(mu1_value), margin=float(mu1_value) - thr,
                               verdict=bool(g > DECIDE_TOL), accretivity_constant=acc, field=field)


def _mu1_for(A, field, seed):
    if field == "real":
        from .antieigen import mu1_brute
        return mu1_brute(A, field="real", seed=seed).mu1
    return _mu1(A, seed=seed).mu1


# ---------------------------------------------------------------------------
# Lagrange machinery of the inner z-minimisation

@dataclass
class LagrangeTrace:
    w: np.ndarray
    q: float
    r: float
    alpha: float
    beta: float
    multiplier_mu: float
    z_star: np.ndarray
    f_at_star: float
    b: float
    M: np.ndarray

    def stationarity_residual(self) -> float:
        z, w, Mw = self.z_star, self.w, self.M @ self.w
        res = self.b * (z @ Mw) * w + self.b * (w @ z) * Mw + 2.0 * self.multiplier_mu * z
        return float(np.linalg.norm(res))

    def reduced_value(self) -> float:
        return (1.0 + 0.5 * self.b) * self.q - 0.5 * abs(self.b) * self.r


def two_vector_value(M, w, z, b) -> float:
    """``<w,Mw> + b <w,z><z,Mw>`` for real ``M``, ``w``, ``z``."""
    Mw = M @ w
    return float(w @ Mw + b * (w @ z) * (z @ Mw))


def _as_real_problem(A, w):
    A = np.asarray(A)
    w = np.asarray(w)
    if np.iscomplexobj(A) and np.any(A.imag != 0) or np.iscomplexobj(w) and np.any(w.imag != 0):
        return real_embed_matrix(A), real_embed_vector(w)
    M = np.real(A).astype(float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InputError(f"A must be square, got shape {M.shape}")
    return M, np.real(w).astype(float)


def lagrange_stationary(A, w, b: float) -> LagrangeTrace:
    """Constrained minimiser ``z*`` of ``z -> <w,Aw> + b <w,z><z,Aw>`` on ``|z| = 1``.

    ``A`` and ``w`` are real (a complex pair is first mapped to its real
    embedding). The multiplier pair ``(alpha, beta) = (<z,Aw>, <w,z>)`` is
    taken from the family that makes ``b alpha beta`` negative:

    * ``b > 0``: ``alpha = -sqrt(r(r-q)/2)``, ``beta = sqrt((r-q)/(2r))``
    * ``b < 0``: ``alpha = sqrt(r(r+q)/2)``, ``beta = sqrt((r+q)/(2r))``

    and ``z* = w/(2 beta) + Aw/(2 alpha)``, multiplier ``-b alpha beta``.
    """
    M, w = _as_real_problem(A, w)
    b = float(b)
    if b == 0.0:
        raise PreconditionError("b must be nonzero")
    if w.shape != (M.shape[0],):
        raise InputError("w and A have incompatible shapes")
    nw = np.linalg.norm(w)
    if abs(nw - 1.0) > 1e-12:
        raise PreconditionError(f"w must be a unit vector (|w| = {nw!r})")
    Mw = M @ w
    q = float(w @ Mw)
    r = float(np.linalg.norm(Mw))
    if r == 0.0:
        raise PreconditionError("Aw = 0")
    sin2 = max(0.0, 1.0 - (q / r) ** 2)
    if math.sqrt(sin2) < DEPENDENCE_SIN:
        raise PreconditionError("w and Aw are linearly dependent; use the eigenvector case")
    if b > 0:
        alpha = -math.sqrt(r * (r - q) / 2.0)
        beta = math.sqrt((r - q) / (2.0 * r))
    else:
        alpha = math.sqrt(r * (r + q) / 2.0)
        beta = math.sqrt((r + q) / (2.0 * r))
    z = w / (2.0 * beta) + Mw / (2.0 * alpha)
    mu = -b * alpha * beta
    return LagrangeTrace(w=w, q=q, r=r, alpha=alpha, beta=beta, multiplier_mu=mu, z_star=z,
                         f_at_star=two_vector_value(M, w, z, b), b=b, M=M)


def inner_minimizer(M, w, b) -> np.ndarray:
    """Unit ``z`` minimising the two-vector form for fixed real ``w``.

    Parallel ``w``, ``Mw`` (eigenvector case): ``z = w`` when ``b < 0``, and
    any unit ``z`` orthogonal to ``w`` when ``b > 0`` (``w`` itself when no
    orthogonal direction exists, i.e. in dimension one).
    """
    Mw = M @ w
    r = np.linalg.norm(Mw)
    q = w @ Mw
    dependent = r == 0.0 or math.sqrt(max(0.0, 1.0 - (q / r) ** 2)) < DEPENDENCE_SIN
    if b == 0.0:
        return w.copy()
    if not dependent:
        return lagrange_stationary(M, w, b).z_star
    if b < 0 or w.size == 1:
        return w.copy()
    k = int(np.argmin(np.abs(w)))
    e = np.zeros_like(w)
    e[k] = 1.0
    z = e - (e @ w) * w
    return z / np.linalg.norm(z)


def outer_minimizer(M, z, b) -> np.ndarray:
    """Unit ``w`` minimising the two-vector form for fixed ``z``.

    For fixed ``z`` the form is the quadratic ``w^T (I + b z z^T) M w``, so
    the minimiser is a bottom eigenvector of its symmetric part.
    """
    K = (np.eye(M.shape[0]) + b * np.outer(z, z)) @ M
    lam, U = np.linalg.eigh(0.5 * (K + K.T))
    return U[:, 0]


def check_two_vector(A, p: float, samples: int = 256, seed: int = 0, *, field: str = "complex",
                     sweeps: int = 200) -> dict:
    """Independent oracle for the two-vector condition.

    Random unit starting pairs are refined by alternating exact block
    minimisation (``z`` by the Lagrange construction, ``w`` by an
    eigenvector). Every reported value is the two-vector form evaluated at a
    concrete pair, so ``min_found`` can only over-estimate the true minimum.
    """
    p = _check_p(p)
    A = as_square(A)
    b = p - 2.0
    M = _embed(A, field)
    n = M.shape[0]
    best = (math.inf, -1, None, None)
    for k in range(samples):
        rng = np.random.default_rng([seed, k])
        w = rng.standard_normal(n)
        w /= np.linalg.norm(w)
        z = inner_minimizer(M, w, b)
        val = two_vector_value(M, w, z, b)
        for _ in range(sweeps):
            w = outer_minimizer(M, z, b)
            z = inner_minimizer(M, w, b)
            new = two_vector_value(M, w, z, b)
            if new >= val - 1e-15 * max(1.0, abs(val)):
                val = min(val, new)
                break
            val = new
        if val < best[0]:
            best = (val, k, w, z)
    return {
        "min_found": float(best[0]),
        "witness": (_unembed(best[2], field), _unembed(best[3], field)),
        "sample_index": best[1],
    }


def check_equivalence(A, p: float, *, band: float = DECISION_BAND, field: str = "complex",
                      seed: int = 0, restarts: int = 64, report: DissipativityReport | None = None) -> dict:
    """Compare the dissipativity verdict with the antieigenvalue verdict.

    When either ``|gamma_best|`` or ``|mu1 - |p-2|/p|`` falls inside ``band``
    the case is flagged ``boundary_indeterminate`` and ``agree`` is not
    asserted by callers.
    """
    p = _check_p(p)
    A = as_square(A)
    rep = report or gamma_best(A, p, field=field, seed=seed, restarts=restarts)
    invertible = structural_predicates(A).invertible
    if field == "real" and A.shape[0] == 1:
        verdict_antieigen = float(A.real[0, 0]) > 0
    else:
        verdict_antieigen = bool(invertible and rep.mu1 > rep.threshold)
    verdict_diss = bool(rep.gamma_best > DECIDE_TOL)
    indeterminate = abs(rep.gamma_best) <= band or abs(rep.margin) <= band
    return {
        "p": p,
        "verdict_dissipativity": verdict_diss,
        "verdict_antieigen": verdict_antieigen,
        "agree": verdict_diss == verdict_antieigen,
        "boundary_indeterminate": bool(indeterminate),
        "margin": rep.margin,
        "gamma_best": rep.gamma_best,
        "mu1": rep.mu1,
        "threshold": rep.threshold,
        "invertible": bool(invertible),
    }


def p_range(A, *, mu1_value: float | None = None, seed: int = 0) -> tuple[float, float] | None:
    """Open interval of exponents ``p`` for which ``mu1(A) > |p-2|/p``.

    Returns ``None`` for an empty interval (singular ``A`` or ``mu1 <= 0``);
    the upper end may be ``inf``.
    """
    A = as_square(A)
    if not structural_predicates(A).invertible:
        return None
    m = _mu1(A, seed=seed).mu1 if mu1_value is None else float(mu1_value)
    if m <= 0.0:
        return None
    if m >= 1.0:
        return (1.0, math.inf)
    return (2.0 / (1.0 + m), 2.0 / (1.0 - m))
