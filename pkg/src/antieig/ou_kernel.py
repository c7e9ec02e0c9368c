"""Heat kernel of the perturbed Ornstein-Uhlenbeck operator and grid probes.

For simultaneously diagonalisable ``A``, ``B`` (``A = V diag(a) V^-1``,
``B = V diag(b) V^-1``, ``Re a > 0``) and skew-symmetric ``S`` the operator
``A Lap v + <Sx, grad v> - B v`` on ``R^d`` has the kernel

    H(x, xi, t) = V diag((4 pi t a_j)^(-d/2) exp(-b_j t - |e^{tS} x - xi|^2 / (4 t a_j))) V^-1

and generates ``[T(t) v](x) = int H(x, xi, t) v(xi) dxi``. Integrals over
``R^d`` are replaced by trapezoid sums on a uniform tensor grid
``[-L, L]^d``; every probe checks first that the Gaussian mass cut off by
the box is negligible.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erfc, ndtri

from .errors import InputError, PreconditionError
from .linalg import as_square, expm_skew, is_skew_symmetric, lambda_min_hermitian_part

TAIL_TOL = 1e-8
# aliasing factor exp(-t Re(a) (2 pi / h)^2) accepted as "resolved"
ALIAS_TOL = 1e-10
OUT_CHUNK = 2048
# generic mixing weight for the joint eigenbasis of A + c B
_MIX = math.sqrt(2.0) - 1.0


@dataclass
class OUOperatorSpec:
    A: np.ndarray
    B: np.ndarray
    S: np.ndarray
    d: int
    V: np.ndarray
    V_inv: np.ndarray
    lambdaA: np.ndarray
    lambdaB: np.ndarray
    beta_B: float

    @classmethod
    def from_matrices(cls, A, B=None, S=None, d: int | None = None) -> "OUOperatorSpec":
        """Validate ``(A, B, S)`` and compute the joint eigenbasis.

        ``V`` comes from the eigenvectors of ``A``. When ``A`` has a repeated
        eigenvalue those need not diagonalise ``B``; the eigenvectors of
        ``A + c B`` for a fixed irrational ``c`` are tried next, which
        diagonalise both whenever the pair is simultaneously diagonalisable.
        """
        A = as_square(A, "A")
        N = A.shape[0]
        B = np.zeros((N, N), complex) if B is None else as_square(B, "B")
        if B.shape != A.shape:
            raise InputError("A and B must have the same shape")
        if S is None:
            if d is None:
                raise InputError("need S or d")
            S = np.zeros((d, d))
        S = np.asarray(S)
        if np.iscomplexobj(S):
            if np.any(S.imag != 0):
                raise PreconditionError("S must be real")
            S = S.real
        S = S.astype(float)
        if S.ndim != 2 or S.shape[0] != S.shape[1]:
            raise InputError(f"S must be square, got shape {S.shape}")
        d = S.shape[0] if d is None else int(d)
        if S.shape[0] != d:
            raise InputError(f"S is {S.shape[0]}x{S.shape[0]} but d = {d}")
        if d < 2:
            raise InputError("spatial dimension d must be >= 2")
        if not is_skew_symmetric(S):
            raise PreconditionError("S is not skew-symmetric")

        scale = max(np.linalg.norm(A), np.linalg.norm(B), 1.0)
        V = lamA = lamB = None
        for c in (0.0, _MIX):
            lam, W = np.linalg.eig(A + c * B)
            if np.linalg.cond(W) > 1e10:
                continue
            W_inv = np.linalg.inv(W)
            la = np.diag(W_inv @ A @ W)
            lb = np.diag(W_inv @ B @ W)
            okA = np.linalg.norm(A @ W - W * la) <= 1e-9 * scale * np.linalg.norm(W)
            okB = np.linalg.norm(B @ W - W * lb) <= 1e-9 * scale * np.linalg.norm(W)
            if okA and okB:
                V, lamA, lamB = W, la, lb
                break
        if V is None:
            raise PreconditionError("A and B are not simultaneously diagonalisable")
        if not np.all(lamA.real > 0):
            raise PreconditionError("A must have spectrum in the open right half-plane")
        beta_B = -lambda_min_hermitian_part(B)
        return cls(A=A, B=B, S=S, d=d, V=V, V_inv=np.linalg.inv(V), lambdaA=lamA,
                   lambdaB=lamB, beta_B=beta_B)

    @property
    def N(self) -> int:
        return self.A.shape[0]

    def rotation(self, t: float) -> np.ndarray:
        return expm_skew(self.S, t)

    def decay(self, t: float) -> np.ndarray:
        """``exp(-B t)`` assembled in the eigenbasis."""
        return (self.V * np.exp(-self.lambdaB * t)) @ self.V_inv

    def axis_sigma(self, t: float) -> np.ndarray:
        """Per-axis standard deviation of ``|kernel|`` for every eigencomponent."""
        a = self.lambdaA
        return np.sqrt(2.0 * t * np.abs(a) ** 2 / a.real)

    def to_dict(self) -> dict:
        return {"A": self.A, "B": self.B, "S": self.S, "d": self.d}


@dataclass(frozen=True)
class GridSpec:
    d: int
    L: float
    n: int

    def __post_init__(self):
        if self.n < 8:
            raise InputError("grid needs n >= 8 points per axis")
        if not self.L > 0:
            raise InputError("grid half-width L must be positive")
        if self.d < 1:
            raise InputError("grid dimension must be positive")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.n - 1)

    @property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.L, self.L, self.n)

    @property
    def axis_weights(self) -> np.ndarray:
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.d

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*([self.axis] * self.d), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def weights(self) -> np.ndarray:
        w = self.axis_weights
        out = w
        for _ in range(self.d - 1):
            out = np.multiply.outer(out, w)
        return out.ravel()

    def coarsened(self, stride: int) -> "GridSpec":
        """Every ``stride``-th point per axis (requires ``stride | n - 1``)."""
        if stride < 1 or (self.n - 1) % stride:
            raise InputError(f"stride {stride} does not divide n - 1 = {self.n - 1}")
        return GridSpec(self.d, self.L, (self.n - 1) // stride + 1)

    def lp_norm(self, values, p: float) -> float:
        """Trapezoid ``(int |v|^p)^(1/p)`` of a grid function ``(M,)`` or ``(M, N)``."""
        v = np.asarray(values)
        mag = np.abs(v) if v.ndim == 1 else np.linalg.norm(v, axis=-1)
        return float(np.sum(self.weights() * mag**p) ** (1.0 / p))

    def resolved_time(self, spec: OUOperatorSpec) -> float:
        """Smallest ``t`` whose kernel the grid spacing resolves."""
        k = 2.0 * math.pi / self.h
        return -math.log(ALIAS_TOL) / (k * k * float(np.min(spec.lambdaA.real)))


def default_grid(d: int = 2) -> GridSpec:
    return GridSpec(d=d, L=16.0, n=65) if d == 2 else GridSpec(d=d, L=12.0, n=33)


def _check_t(t) -> float:
    t = float(t)
    if not (t > 0 and math.isfinite(t)):
        raise InputError(f"t must be positive and finite, got {t}")
    return t


def _scalar_kernels(spec: OUOperatorSpec, x, xi, t: float) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    if x.shape[-1] != spec.d or xi.shape[-1] != spec.d:
        raise InputError(f"points must have {spec.d} coordinates")
    y = x @ spec.rotation(t).T
    s2 = np.sum((y - xi) ** 2, axis=-1)[..., None]
    a, b = spec.lambdaA, spec.lambdaB
    # principal branch; Re a > 0 keeps 4 pi t a off the cut
    pref = (4.0 * math.pi * t * a) ** (-spec.d / 2.0)
    return pref * np.exp(-b * t - s2 / (4.0 * t * a))


def kernel_eval(spec: OUOperatorSpec, x, xi, t: float) -> np.ndarray:
    """``H(x, xi, t)`` as an ``(..., N, N)`` array; ``x`` and ``xi`` broadcast."""
    t = _check_t(t)
    h = _scalar_kernels(spec, x, xi, t)
    return np.einsum("ij,...j,jk->...ik", spec.V, h, spec.V_inv)


def tail_mass(spec: OUOperatorSpec, t: float, grid: GridSpec, center) -> float:
    """Upper bound on the kernel mass outside the box, relative to the total.

    ``|kernel|`` of component ``j`` is a Gaussian with per-axis deviation
    ``sigma_j`` and total mass ``(|a_j| / Re a_j)^(d/2)`` times that of the
    kernel itself.
    """
    c = np.abs(np.atleast_2d(np.asarray(center, dtype=float)))
    worst = 0.0
    for a, sig in zip(spec.lambdaA, spec.axis_sigma(t)):
        amp = (abs(a) / a.real) ** (spec.d / 2.0)
        lo = (grid.L - c) / sig
        hi = (grid.L + c) / sig
        if np.any(lo <= 0):
            return math.inf
        tail = np.sum(0.5 * (_erfc(lo) + _erfc(hi)), axis=-1)
        worst = max(worst, float(amp * tail.max()))
    return worst


def _erfc(z):
    return erfc(np.asarray(z) / math.sqrt(2.0))


def required_L(spec: OUOperatorSpec, t: float, center_radius: float = 0.0, tol: float = TAIL_TOL) -> float:
    sig = float(np.max(spec.axis_sigma(t)))
    amp = float(np.max((np.abs(spec.lambdaA) / spec.lambdaA.real) ** (spec.d / 2.0)))
    z = -ndtri(tol / (2.0 * spec.d * amp))
    return center_radius + z * sig


def _precheck(spec, t, grid, center, what="kernel"):
    if grid.d != spec.d:
        raise InputError(f"grid dimension {grid.d} != spec dimension {spec.d}")
    tail = tail_mass(spec, t, grid, center)
    if not tail < TAIL_TOL:
        radius = float(np.max(np.abs(np.atleast_2d(center)))) if np.size(center) else 0.0
        need = required_L(spec, t, radius)
        raise InputError(f"{what} at t={t:g} leaks mass {tail:.2e} out of the box; "
                         f"need L >= {need:.4g} (have {grid.L:g})")


def _grid_values(v, grid: GridSpec, N: int) -> np.ndarray:
    if callable(v):
        v = v(grid.points())
    v = np.asarray(v, dtype=complex)
    M = grid.n**grid.d
    if v.shape == grid.shape + (N,):
        v = v.reshape(M, N)
    elif v.shape == grid.shape and N == 1:
        v = v.reshape(M, 1)
    elif v.shape == (M,) and N == 1:
        v = v.reshape(M, 1)
    if v.shape != (M, N):
        raise InputError(f"grid function has shape {v.shape}, expected {(M, N)}")
    return v


def _semigroup_values(spec, vt, t, grid, out_points):
    """Separable trapezoid sum of the eigencomponents ``vt`` at ``out_points``."""
    d = grid.d
    Q = spec.rotation(t)
    xs, w1 = grid.axis, grid.axis_weights
    out = np.empty((out_points.shape[0], spec.N), complex)
    for start in range(0, out_points.shape[0], OUT_CHUNK):
        y = out_points[start:start + OUT_CHUNK] @ Q.T
        for j, (a, b) in enumerate(zip(spec.lambdaA, spec.lambdaB)):
            coef = (4.0 * math.pi * t * a) ** (-d / 2.0) * np.exp(-b * t)
            inv = 1.0 / (4.0 * t * a)
            E = [np.exp(-inv * (y[:, k, None] - xs[None, :]) ** 2) * w1 for k in range(d)]
            X = np.tensordot(vt[..., j], E[d - 1], axes=([d - 1], [1]))
            for k in range(d - 2, -1, -1):
                X = np.einsum("...io,oi->...o", X, E[k])
            out[start:start + OUT_CHUNK, j] = coef * X
    return out


def apply_semigroup(spec: OUOperatorSpec, v, t: float, grid: GridSpec, out: GridSpec | None = None,
                    check: bool = True) -> np.ndarray:
    """``T(t) v`` sampled on ``out`` (default: the input grid), shape ``(M_out, N)``.

    ``v`` is a grid function (array or callable on ``(M, d)`` points). The
    box must hold the kernel at ``t``: otherwise InputError names the
    required ``L``.
    """
    if grid.d != spec.d:
        raise InputError(f"grid dimension {grid.d} != spec dimension {spec.d}")
    vals = _grid_values(v, grid, spec.N)
    out = out or grid
    t = float(t)
    if t < 0:
        raise InputError("t must be >= 0")
    if t == 0.0:
        if out != grid:
            raise InputError("t = 0 requires the output grid to equal the input grid")
        return vals.copy()
    if check:
        _precheck(spec, t, grid, np.zeros(spec.d), "semigroup")
        if t < grid.resolved_time(spec):
            warnings.warn(f"t={t:g} is below the grid's resolved time "
                          f"{grid.resolved_time(spec):.3g}; quadrature is unreliable",
                          RuntimeWarning, stacklevel=2)
    vt = (vals @ spec.V_inv.T).reshape(grid.shape + (spec.N,))
    res = _semigroup_values(spec, vt, t, grid, out.points())
    return res @ spec.V.T


def mass_check(spec: OUOperatorSpec, x, t: float, grid: GridSpec) -> dict:
    """Compare ``int H(x, xi, t) dxi`` with ``exp(-B t)``."""
    t = _check_t(t)
    x = np.asarray(x, dtype=float)
    _precheck(spec, t, grid, spec.rotation(t) @ x, "kernel")
    H = kernel_eval(spec, x, grid.points(), t)
    computed = np.einsum("m,mij->ij", grid.weights(), H)
    expected = spec.decay(t)
    return {"computed": computed, "expected": expected,
            "deviation": float(np.linalg.norm(computed - expected))}


CHAPMAN_MIN_T = 1e-3


def chapman_check(spec: OUOperatorSpec, t: float, s: float, grid: GridSpec, *, pairs=None,
                  n_pairs: int = 6, seed: int = 0) -> float:
    """Sup-norm gap between ``H(x, xi, t+s)`` and ``int H(x,y,t) H(y,xi,s) dy``.

    Pairs ``(x, xi)`` are drawn from the inner quarter of the box unless
    given. Returns ``nan`` (with a warning) when ``t`` or ``s`` is below
    ``1e-3``, where the kernel is too peaked for practical grids.
    """
    t, s = _check_t(t), _check_t(s)
    if min(t, s) < CHAPMAN_MIN_T:
        warnings.warn("chapman_check skipped: t or s below 1e-3", RuntimeWarning, stacklevel=2)
        return math.nan
    if pairs is None:
        rng = np.random.default_rng(seed)
        pairs = rng.uniform(-grid.L / 4, grid.L / 4, size=(n_pairs, 2, spec.d))
    pts, wts = grid.points(), grid.weights()
    worst = 0.0
    for x, xi in pairs:
        x = np.asarray(x, float)
        xi = np.asarray(xi, float)
        _precheck(spec, t, grid, spec.rotation(t) @ x, "first factor")
        _precheck(spec, s, grid, spec.rotation(-s) @ xi, "second factor")
        lhs = kernel_eval(spec, x, xi, t + s)
        H1 = kernel_eval(spec, x, pts, t)
        H2 = kernel_eval(spec, pts, xi, s)
        rhs = np.einsum("m,mij,mjk->ik", wts, H1, H2)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


@dataclass
class ResolventProbe:
    ratio: float
    bound: float
    T_max: float
    times: np.ndarray = field(repr=False)
    p: float = 2.0

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "bound": self.bound, "T_max": self.T_max, "p": self.p,
                "n_time": int(self.times.size)}


def time_nodes(t_first: float, T_max: float, n_time: int) -> np.ndarray:
    """``0`` followed by ``n_time`` nodes from ``t_first`` to ``T_max``, clustered quadratically at the start."""
    s = np.linspace(0.0, 1.0, n_time)
    inner = t_first + (T_max - t_first) * s**2
    return np.concatenate([[0.0], inner])


def resolvent_probe(spec: OUOperatorSpec, lam, g, grid: GridSpec, *, p: float = 2.0,
                    T_max: float | None = None, n_time: int = 200, out_stride: int = 1) -> ResolventProbe:
    """Grid estimate of ``||(lam - L)^-1 g||_p / ||g||_p`` against ``1/(Re lam - beta_B)``.

    The resolvent is the Laplace transform ``int_0^T e^{-lam t} T(t) g dt``,
    summed by the composite trapezoid rule over :func:`time_nodes`. The
    first nonzero node sits at the grid's resolved time, so the first panel
    only uses ``T(0) g = g`` and a resolved ``T(t) g``. Norms are trapezoid
    sums on the output grid (``grid`` coarsened by ``out_stride``).
    """
    lam = complex(lam)
    p = float(p)
    if not p >= 1:
        raise InputError("p must be >= 1")
    margin = lam.real - spec.beta_B
    if margin <= 0.1:
        raise InputError(f"need Re(lambda) > beta_B + 0.1 (Re lambda = {lam.real:g}, "
                         f"beta_B = {spec.beta_B:g})")
    T_need = math.log(1e6) / margin
    if T_max is None:
        T_max = T_need * (1.0 + 1e-9)
    elif math.exp(-margin * T_max) >= 1e-6:
        raise InputError(f"T_max={T_max:g} too short; need exp(-(Re lam - beta_B) T_max) < 1e-6, "
                         f"i.e. T_max > {T_need:.4g}")
    if grid.d != spec.d:
        raise InputError(f"grid dimension {grid.d} != spec dimension {spec.d}")
    out = grid.coarsened(out_stride)
    vals = _grid_values(g, grid, spec.N)
    t_first = grid.resolved_time(spec)
    if t_first >= T_max:
        raise InputError("grid too coarse: its resolved time exceeds T_max")
    times = time_nodes(t_first, T_max, n_time)
    # box check, weighted by how much each time contributes to the integral
    for t in times[1:]:
        tail = tail_mass(spec, t, grid, np.zeros(spec.d)) * math.exp(-margin * t)
        if not tail < TAIL_TOL:
            raise InputError(f"resolvent probe leaks weighted mass {tail:.2e} at t={t:.3g}; "
                             f"need L >= {required_L(spec, t, tol=TAIL_TOL * math.exp(margin * t)):.4g} "
                             f"(have {grid.L:g})")

    vt = (vals @ spec.V_inv.T).reshape(grid.shape + (spec.N,))
    out_pts = out.points()
    sub = tuple(slice(None, None, out_stride) for _ in range(grid.d))
    g_out = vals.reshape(grid.shape + (spec.N,))[sub].reshape(-1, spec.N)

    dt = np.diff(times)
    tw = np.zeros(times.size)
    tw[:-1] += 0.5 * dt
    tw[1:] += 0.5 * dt
    v = tw[0] * g_out  # T(0) g = g, e^0 = 1
    for t, wt in zip(times[1:], tw[1:]):
        Tg = _semigroup_values(spec, vt, t, grid, out_pts) @ spec.V.T
        v = v + wt * np.exp(-lam * t) * Tg
    ratio = out.lp_norm(v, p) / out.lp_norm(g_out, p)
    return ResolventProbe(ratio=ratio, bound=1.0 / margin, T_max=T_max, times=times, p=p)
