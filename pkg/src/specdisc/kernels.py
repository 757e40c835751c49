"""Closed-form discrepancy kernels and the numerical check that integrating
normalized ball-intersection kernels against the G_d weight reproduces the
Askey function in three dimensions."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError
from .specfun import pfq

__all__ = [
    "KernelId",
    "distance_constant",
    "eval_kernel",
    "lens_volume_3d",
    "ball_volume",
    "g_weight",
    "g_weight_deriv",
    "k3r",
    "verify_askey_3d",
]


def distance_constant(d: int) -> float:
    """The constant ``Gamma(d/2) / (2 sqrt(pi) Gamma((d+1)/2))`` in front of ``||x-y||``."""
    return math.exp(math.lgamma(d / 2) - math.lgamma((d + 1) / 2)) / (2.0 * math.sqrt(math.pi))


def ball_volume(d: int, radius: float) -> float:
    return math.pi ** (d / 2) / math.gamma(d / 2 + 1) * radius**d


@dataclass(frozen=True)
class KernelId:
    """Tag plus parameters of one of the supported kernels.

    Use the classmethod constructors, which validate the parameter ranges.
    """

    tag: str
    s: float = 1.0
    d: int = 3
    r: float = 1.0

    @classmethod
    def brownian(cls, s: float = 1.0) -> "KernelId":
        _positive("s", s)
        return cls("brownian", s=float(s), d=1)

    @classmethod
    def interval(cls, s: float = 1.0) -> "KernelId":
        _positive("s", s)
        return cls("interval", s=float(s), d=1)

    @classmethod
    def askey(cls, d: int = 3) -> "KernelId":
        if d < 1 or d % 2 == 0:
            raise DomainError("askey kernel needs an odd dimension d >= 1")
        return cls("askey", d=int(d))

    @classmethod
    def sphere_dist(cls, d: int = 3) -> "KernelId":
        if d < 2:
            raise DomainError("sphere_dist needs d >= 2")
        return cls("sphere_dist", d=int(d))

    @classmethod
    def ball_dist(cls, d: int = 3, s: float = 1.0) -> "KernelId":
        if d < 1:
            raise DomainError("ball_dist needs d >= 1")
        _positive("s", s)
        return cls("ball_dist", s=float(s), d=int(d))

    @classmethod
    def ball_lens(cls, r: float = 1.0, d: int = 3) -> "KernelId":
        if d != 3:
            raise DomainError("ball_lens is only available in dimension 3")
        _positive("r", r)
        return cls("ball_lens", d=3, r=float(r))

    @property
    def scalar_points(self) -> bool:
        return self.tag in ("brownian", "interval")


def _positive(name, v):
    if not v > 0:
        raise DomainError(f"{name} must be positive, got {v}")


def lens_volume_3d(t, R):
    """Volume of the intersection of two radius-``R`` balls whose centers are ``t`` apart."""
    t = np.asarray(t, dtype=float)
    out = np.where(t <= 2 * R, math.pi * (2 * R - t) ** 2 * (t + 4 * R) / 12.0, 0.0)
    return out if out.ndim else float(out)


def k3r(t, r):
    """Normalized intersection kernel in R^3 as a function of the distance ``t``."""
    return lens_volume_3d(t, r / 2.0) / ball_volume(3, r / 2.0)


def _interval(x, y, s):
    ax, ay = np.abs(x), np.abs(y)
    inside_x, inside_y = ax <= s, ay <= s
    both = s - 0.5 * np.abs(x - y)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_in = s / 2 + x * y / (2 * np.where(ay == 0, 1, ay))
        y_in = s / 2 + x * y / (2 * np.where(ax == 0, 1, ax))
    outside = s * (x * y > 0)
    return np.where(
        inside_x & inside_y,
        both,
        np.where(inside_x, x_in, np.where(inside_y, y_in, outside)),
    )


def eval_kernel(kid: KernelId, x, y):
    """Evaluate the kernel at a pair of points (or broadcastable arrays of points).

    Scalar-valued kernels (``brownian``, ``interval``) take real numbers; the
    others take vectors in their last axis.
    """
    if kid.scalar_points:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if kid.tag == "brownian":
            out = np.maximum(np.minimum(x, y), 0.0)
        else:
            out = _interval(x, y, kid.s)
        return out if np.ndim(out) else float(out)

    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    t = np.linalg.norm(x - y, axis=-1)
    if kid.tag == "askey":
        out = np.maximum(1.0 - t, 0.0) ** ((kid.d + 1) / 2)
    elif kid.tag == "sphere_dist":
        for v in (x, y):
            if np.any(np.abs(np.linalg.norm(v, axis=-1) - 1.0) > 1e-10):
                raise DomainError("sphere_dist needs unit vectors")
        out = 1.0 - distance_constant(kid.d) * t
    elif kid.tag == "ball_dist":
        for v in (x, y):
            if np.any(np.linalg.norm(v, axis=-1) > kid.s * (1 + 1e-12)):
                raise DomainError(f"ball_dist needs points in the ball of radius {kid.s}")
        out = kid.s - distance_constant(kid.d) * t
    elif kid.tag == "ball_lens":
        out = k3r(t, kid.r)
    else:  # pragma: no cover - guarded by the constructors
        raise DomainError(f"unknown kernel tag {kid.tag}")
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------------------
# the Askey identity
# ---------------------------------------------------------------------------

def g_weight(d: int, r):
    """Weight ``G_d(r)``: a terminating 2F1 in ``r^2`` on [0, 1], zero beyond."""
    if d < 1 or d % 2 == 0:
        raise DomainError("g_weight needs an odd dimension d >= 1")
    r = np.asarray(r, dtype=float)
    upper = [-(d + 1) / 4, -(d - 1) / 4]
    lower = [-d / 2]
    vals = np.array([pfq(upper, lower, v * v) if 0 <= v <= 1 else 0.0 for v in r.ravel()])
    vals = vals.reshape(r.shape)
    return vals if vals.ndim else float(vals)


def _g_poly_coeffs(d: int) -> list[float]:
    """Coefficients ``g_j`` with ``G_d(r) = sum_j g_j r^{2j}`` on [0, 1]."""
    a, b, c = -(d + 1) / 4, -(d - 1) / 4, -d / 2
    coeffs = [1.0]
    j = 0
    while True:
        nxt = coeffs[-1] * (a + j) * (b + j) / ((c + j) * (j + 1))
        if nxt == 0.0:
            return coeffs
        coeffs.append(nxt)
        j += 1


def g_weight_deriv(d: int, r: float) -> float:
    """Derivative of ``G_d`` on the open interval (0, 1)."""
    coeffs = _g_poly_coeffs(d)
    return sum(2 * j * g * r ** (2 * j - 1) for j, g in enumerate(coeffs) if j > 0)


def verify_askey_3d(t_grid, tol: float = 1e-10) -> float:
    """Maximum deviation between the Stieltjes-integral pipeline and ``(1-t)_+^2``.

    ``G_3`` decreases on [0, 1] and drops to zero at r = 1, so it defines a
    negative measure.  The kernel is the integral against ``-dG_3``: the
    absolutely continuous part ``-G_3'(r) dr`` on (t, 1) together with the
    point mass ``G_3(1)`` at r = 1.
    """
    g1 = g_weight(3, 1.0)
    worst = 0.0
    for t in np.atleast_1d(np.asarray(t_grid, dtype=float)):
        if t >= 1.0:
            value = 0.0
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                try:
                    dens, _ = integrate.quad(
                        lambda r: k3r(t, r) * g_weight_deriv(3, r),
                        max(t, 0.0), 1.0, epsabs=tol, epsrel=tol, limit=40,
                    )
                except integrate.IntegrationWarning as exc:
                    raise ConvergenceError(f"adaptive quadrature failed at t={t}: {exc}") from exc
            value = k3r(t, 1.0) * g1 - dens
        worst = max(worst, abs(value - max(1.0 - t, 0.0) ** 2))
    return worst
