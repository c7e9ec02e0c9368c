"""Geometry of the admissible region as a function of the exponent p.

Scalar cone tests, the sector of admissible eigenvalues of a normal
matrix, and the window of admissible condition numbers of a Hermitian
positive definite matrix.
"""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError

UNBOUNDED = "unbounded"


def _check_p(p) -> float:
    p = float(p)
    if not (1.0 < p < math.inf):
        raise InputError(f"p must lie in (1, inf), got {p}")
    return p


@dataclass(frozen=True)
class SectorSpec:
    p: float
    half_angle_rad: float
    slope: float  # admissible |Im| / Re ratio; inf at p = 2

    @classmethod
    def from_p(cls, p) -> "SectorSpec":
        p = _check_p(p)
        half = math.acos(abs(p - 2.0) / p)
        slope = math.inf if p == 2.0 else 2.0 * math.sqrt(p - 1.0) / abs(p - 2.0)
        return cls(p=p, half_angle_rad=half, slope=slope)

    def half_angle_arctan(self) -> float:
        """The same half-angle as ``arctan(2 sqrt(p-1) / |p-2|)``."""
        return math.atan(self.slope)


@dataclass(frozen=True)
class KappaWindow:
    p: float
    C_L: float
    C_R: float

    def contains(self, kappa: float) -> bool:
        return self.C_L < kappa < self.C_R


def cone_test_scalar(alpha, p) -> bool:
    """``|p-2| / (2 sqrt(p-1)) |Im a| < Re a``."""
    p = _check_p(p)
    alpha = complex(alpha)
    return abs(p - 2.0) / (2.0 * math.sqrt(p - 1.0)) * abs(alpha.imag) < alpha.real


def cone_test_arg(alpha, p) -> bool:
    """``|arg a| < arccos(|p-2|/p)``; zero is never inside the open sector."""
    p = _check_p(p)
    alpha = complex(alpha)
    if alpha == 0:
        return False
    return abs(cmath.phase(alpha)) < math.acos(abs(p - 2.0) / p)


def cone_test_mu1(alpha, p) -> bool:
    """``Re a / |a| > |p-2|/p`` (the scalar antieigenvalue against its threshold)."""
    p = _check_p(p)
    alpha = complex(alpha)
    if alpha == 0:
        return False
    return alpha.real / abs(alpha) > abs(p - 2.0) / p


def sector_membership(lam, p) -> bool:
    """Whether ``lam`` lies in the open sector of half-angle ``arccos(|p-2|/p)``."""
    return cone_test_arg(lam, p)


def kappa_window(p) -> KappaWindow:
    """Admissible condition-number window ``(C_L(p), C_R(p))`` for ``p != 2``.

    The two bounds are the reciprocal roots of
    ``(1/2 - 1/p)^2 (1 + kappa)^2 = kappa``.
    """
    p = _check_p(p)
    if p == 2.0:
        raise InputError("at p = 2 the condition-number window is unbounded")
    root = 4.0 * p * math.sqrt(p - 1.0)
    base = p * p + 4.0 * p - 4.0
    den = (p - 2.0) ** 2
    C_R = (base + root) / den
    # rationalised lower root: base^2 - root^2 == (p-2)^4, no cancellation near p = 2
    C_L = den / (base + root)
    return KappaWindow(p=p, C_L=C_L, C_R=C_R)


def kappa_window_literal(p) -> tuple[float, float]:
    """``(p^2+4p-4 -/+ 4p sqrt(p-1)) / (p-2)^2`` evaluated as written."""
    p = _check_p(p)
    root = 4.0 * p * math.sqrt(p - 1.0)
    base = p * p + 4.0 * p - 4.0
    den = (p - 2.0) ** 2
    return ((base - root) / den, (base + root) / den)


def kappa_window_q(p) -> tuple[float, float]:
    """The same window written in ``q = |p-2|/p``, evaluated literally."""
    p = _check_p(p)
    q = abs(p - 2.0) / p
    s = 2.0 * math.sqrt(1.0 - q * q)
    return ((2.0 - q * q - s) / (q * q), (2.0 - q * q + s) / (q * q))


def parse_grid(spec) -> np.ndarray:
    """Exponent grid from ``"start:stop:num"``, ``"a,b,c"`` or a sequence."""
    if isinstance(spec, str):
        try:
            if ":" in spec:
                start, stop, num = spec.split(":")
                grid = np.linspace(float(start), float(stop), int(num))
            else:
                grid = np.array([float(s) for s in spec.split(",") if s.strip()])
        except ValueError as exc:
            raise InputError(f"malformed grid {spec!r}") from exc
    else:
        try:
            grid = np.asarray(spec, dtype=float).ravel()
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed grid {spec!r}") from exc
    if grid.size == 0:
        raise InputError("empty grid")
    if not np.all((grid > 1.0) & np.isfinite(grid)):
        raise InputError("grid values must lie in (1, inf)")
    return grid


def region_rows(kind: str, p_grid) -> list[tuple]:
    grid = parse_grid(p_grid)
    if kind == "sector":
        return [(p, SectorSpec.from_p(p).half_angle_rad) for p in grid]
    if kind == "kappa":
        rows = []
        for p in grid:
            if p == 2.0:
                rows.append((p, 0.0, UNBOUNDED))
            else:
                w = kappa_window(p)
                rows.append((p, w.C_L, w.C_R))
        return rows
    raise InputError(f"unknown region kind {kind!r}")


def _fmt(x) -> str:
    return x if isinstance(x, str) else format(float(x), ".12g")


def emit_region_table(kind: str, p_grid) -> str:
    """CSV text: ``p,C_L,C_R`` or ``p,half_angle`` rows, 12 significant digits.

    At ``p = 2`` the kappa window is written as ``0`` and ``unbounded``.
    """
    rows = region_rows(kind, p_grid)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "C_L", "C_R"] if kind == "kappa" else ["p", "half_angle"])
    for row in rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()
