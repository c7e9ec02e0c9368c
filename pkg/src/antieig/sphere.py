"""Multi-start projected gradient descent on the real unit sphere.

Restarts are advanced together as rows of one array. Every row only ever
touches its own data, and every restart draws its start point from a
generator seeded by ``(seed, restart_index)``, so the outcome of a restart
does not depend on which other restarts share its batch.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import NumericalFailure

#: ``fun(X) -> (f, G, valid)`` for a batch ``X`` of shape (R, n)
BatchObjective = Callable[[np.ndarray], "tuple[np.ndarray, np.ndarray, np.ndarray]"]

# fixed batch size, so rounding never depends on the worker count
CHUNK = 32
ARMIJO_C = 1e-4
MAX_BACKTRACK = 60
MAX_RESEED = 100


@dataclass
class SphereOptions:
    restarts: int = 64
    max_iters: int = 10000
    tol: float = 1e-10
    seed: int = 0
    record_history: bool = False

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass
class SphereResult:
    x: np.ndarray
    fun: float
    grad_norm: float
    iterations: int
    restart_index: int
    restarts_used: int
    converged: bool
    history: list = field(default_factory=list)
    all_values: np.ndarray | None = None


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ANTIEIG_THREADS", "1")))
    except ValueError:
        return 1


def _start_points(dim, indices, seed):
    return [np.random.default_rng([seed, int(k)]) for k in indices]


def _draw(rng, dim):
    x = rng.standard_normal(dim)
    return x / np.linalg.norm(x)


def _tangent(X, G):
    return G - np.sum(X * G, axis=1, keepdims=True) * X


def _retract(X):
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _run_chunk(fun: BatchObjective, dim: int, indices, opts: SphereOptions, starts=None):
    rngs = _start_points(dim, indices, opts.seed)
    R = len(indices)
    X = np.stack([_draw(g, dim) for g in rngs])
    if starts is not None:
        # indices past the random restarts address the caller's start points
        for i, k in enumerate(indices):
            if k >= opts.restarts:
                X[i] = starts[k - opts.restarts]
    f, G, valid = fun(X)
    # restarts starting where the objective is undefined are re-drawn
    for _ in range(MAX_RESEED):
        bad = ~valid
        if not bad.any():
            break
        for i in np.flatnonzero(bad):
            X[i] = _draw(rngs[i], dim)
        f, G, valid = fun(X)
    alive = valid.copy()
    f = np.where(alive, f, np.inf)

    grad_tol = np.sqrt(opts.tol)
    P = _tangent(X, G)
    gn = np.linalg.norm(P, axis=1)
    step = np.where(gn > 0, 1.0 / np.maximum(gn, 1e-300), 1.0)
    done = ~alive | (gn <= grad_tol)
    iters = np.zeros(R, dtype=int)
    history = [[float(v)] for v in f] if opts.record_history else []
    X_prev = P_prev = None

    for it in range(opts.max_iters):
        act = ~done
        if not act.any():
            break
        # Barzilai-Borwein trial step, safeguarded by Armijo backtracking
        if X_prev is not None:
            s = X - X_prev
            y = P - P_prev
            sy = np.abs(np.sum(s * y, axis=1))
            ss = np.sum(s * s, axis=1)
            bb = np.where(sy > 1e-300, ss / np.maximum(sy, 1e-300), step * 2.0)
            step = np.where(act, np.clip(bb, 1e-12, 1e6), step)
        X_prev, P_prev = X.copy(), P.copy()

        pending = act.copy()
        X_new, f_new, G_new = X.copy(), f.copy(), G.copy()
        for _ in range(MAX_BACKTRACK):
            if not pending.any():
                break
            idx = np.flatnonzero(pending)
            Xt = _retract(X[idx] - step[idx, None] * P[idx])
            ft, Gt, vt = fun(Xt)
            ok = vt & (ft <= f[idx] - ARMIJO_C * step[idx] * gn[idx] ** 2)
            acc = idx[ok]
            X_new[acc], f_new[acc], G_new[acc] = Xt[ok], ft[ok], Gt[ok]
            pending[acc] = False
            rej = idx[~ok]
            step[rej] *= 0.5
        # rows that never satisfied Armijo have stalled at numerical precision
        done |= pending
        X, f, G = X_new, f_new, G_new
        P = _tangent(X, G)
        gn = np.linalg.norm(P, axis=1)
        iters[act] += 1
        done |= gn <= grad_tol
        if opts.record_history:
            for i in np.flatnonzero(act):
                history[i].append(float(f[i]))

    converged = alive & (gn <= grad_tol)
    return X, f, gn, iters, converged, alive, history


def minimize_on_sphere(fun: BatchObjective, dim: int, opts: SphereOptions | None = None,
                       starts=None) -> SphereResult:
    """Minimise a smooth function over the unit sphere in ``R^dim``.

    Parameters
    ----------
    fun
        Batched objective returning values, Euclidean gradients and a
        validity mask. Invalid points (where the objective is undefined)
        are never accepted as iterates.
    dim
        Ambient dimension.
    opts
        Restart count, iteration cap, tolerance and seed. Convergence is
        declared when the Riemannian gradient norm drops below
        ``sqrt(tol)``; near a nondegenerate minimum the objective error is
        then of order ``tol``.
    starts
        Optional ``(k, dim)`` start points, run as restarts
        ``opts.restarts, ..., opts.restarts + k - 1`` after the random ones.

    Returns
    -------
    SphereResult
        The best restart, ties broken by the lower restart index.
    """
    opts = opts or SphereOptions()
    total = opts.restarts
    if starts is not None:
        starts = np.asarray(starts, dtype=float).reshape(-1, dim)
        norms = np.linalg.norm(starts, axis=1)
        starts = starts[norms > 0] / norms[norms > 0, None]
        total += starts.shape[0]
    chunks = [np.arange(s, min(s + CHUNK, total)) for s in range(0, total, CHUNK)]
    workers = min(worker_count(), len(chunks))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ix: _run_chunk(fun, dim, ix, opts, starts), chunks))
    else:
        parts = [_run_chunk(fun, dim, ix, opts, starts) for ix in chunks]

    X = np.concatenate([p[0] for p in parts])
    f = np.concatenate([p[1] for p in parts])
    gn = np.concatenate([p[2] for p in parts])
    iters = np.concatenate([p[3] for p in parts])
    conv = np.concatenate([p[4] for p in parts])
    alive = np.concatenate([p[5] for p in parts])
    history = [h for p in parts for h in p[6]]
    if not alive.any():
        raise NumericalFailure("every restart started where the objective is undefined")

    # lexicographic (value, restart index); argmin returns the first minimum
    k = int(np.argmin(np.where(alive, f, np.inf)))
    return SphereResult(
        x=X[k].copy(),
        fun=float(f[k]),
        grad_norm=float(gn[k]),
        iterations=int(iters[k]),
        restart_index=k,
        restarts_used=int(alive.sum()),
        converged=bool(conv[k]),
        history=history[k] if history else [],
        all_values=f,
    )
