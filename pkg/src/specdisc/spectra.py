"""Fourier coefficients of distance kernels on spheres, SO(3) and G(2,4),
together with the eigensystems of the interval kernels."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
import numpy as np
from scipy import optimize

from .errors import DivergenceError, DomainError, PoleError
from .kernels import distance_constant
from .specfun import log_gamma_signed, pfq, pochhammer

__all__ = [
    "SpectralTable",
    "sphere_coeff",
    "so3_coeff",
    "g24_coeff",
    "partitions",
    "coeff_table",
    "kernel_table",
    "KERNEL_SHIFT",
    "KERNEL_DIM",
    "IntervalEigen",
    "interval_eigs",
    "brownian_eigs",
    "cos_branch_root",
    "k3r_sphere_decay",
    "g24_decay_constant",
    "so3_decay_constant",
    "sphere_decay_constant",
]


def _is_even_nonneg(p: float) -> bool:
    return p >= 0 and float(p) / 2 == math.floor(float(p) / 2)


def _ratio_minus_half_p(p: float, m: int, lg_den: float, sg_den: float) -> float:
    """``Gamma(m - p/2) / (Gamma(-p/2) * Gamma(den))`` given log|Gamma(den)| and its sign.

    For even nonnegative p the quotient of the first two gammas is replaced
    by the Pochhammer symbol ``(-p/2)_m``.
    """
    if _is_even_nonneg(p):
        poch = pochhammer(-p / 2, m)
        if poch == 0.0:
            return 0.0
        return poch * sg_den * math.exp(-lg_den)
    la, sa = log_gamma_signed(m - p / 2)
    lb, sb = log_gamma_signed(-p / 2)
    return sa * sb * sg_den * math.exp(la - lb - lg_den)


def sphere_coeff(d: int, p: float, m: int) -> float:
    """Coefficient of ``2^{-p/2} ||x-y||^p`` on S^{d-1} in front of the degree-m projection kernel."""
    if d < 2:
        raise DomainError("sphere_coeff needs d >= 2")
    if m < 0:
        raise DomainError("degree must be nonnegative")
    if not p > -(d - 1):
        raise PoleError(f"p must exceed {-(d - 1)} on S^{d - 1}")
    lg1, sg1 = log_gamma_signed(d / 2)
    lg2, sg2 = log_gamma_signed(d / 2 + p / 2 - 0.5)
    pref = sg1 * sg2 * math.exp(
        d * math.log(2) + lg1 - math.log(4 * math.sqrt(math.pi)) + p / 2 * math.log(2) + lg2
    )
    lg_den, sg_den = log_gamma_signed(p / 2 + d - 1 + m)
    return pref * _ratio_minus_half_p(p, m, lg_den, sg_den)


def so3_coeff(p: float, m: int) -> float:
    """Coefficient of ``2^{-p/2} ||x-y||_F^p`` on SO(3) in front of the degree-m Wigner kernel."""
    if m < 0:
        raise DomainError("degree must be nonnegative")
    if not p > -3:
        raise PoleError("p must exceed -3 on SO(3)")
    lg, sg = log_gamma_signed(p / 2 + 1.5)
    pref = sg * math.exp(p * math.log(2) + lg) / math.sqrt(math.pi)
    lg_den, sg_den = log_gamma_signed(p / 2 + 2 + m)
    return pref * _ratio_minus_half_p(p, m, lg_den, sg_den) / (m + 0.5)


def _check_partition(lam):
    l1, l2 = (int(v) for v in lam)
    if not (l1 >= l2 >= 0) or (l1, l2) != tuple(lam):
        raise DomainError(f"invalid partition {lam}")
    return l1, l2


def g24_coeff(p: float, lam) -> float:
    """Coefficient of ``2^{-p/2} ||x-y||_F^p`` on G(2,4) in front of the kernel ``Q_lambda``."""
    l1, l2 = _check_partition(lam)
    L = l1 + l2
    if not p > -4:
        raise DivergenceError("the 4F3 at unit argument diverges unless p > -4")
    if _is_even_nonneg(p):
        poch = pochhammer(-p / 2, L)
        if poch == 0.0:
            return 0.0
        log_poch, sign = math.log(abs(poch)), math.copysign(1.0, poch)
    else:
        # (-p/2)_L overflows long before the prefactor stops underflowing
        la, sa = log_gamma_signed(L - p / 2)
        lb, sb = log_gamma_signed(-p / 2)
        log_poch, sign = la - lb, sa * sb
    log_pref = log_poch + (
        -L * math.log(4)
        + math.lgamma(L + 1)
        - (math.lgamma(1.5 + L) - math.lgamma(1.5))
        - (math.lgamma(1.5 + l1) - math.lgamma(1.5))
        - math.lgamma(l2 + 1)
    )
    upper = [(L + 1) / 2, (L + 2) / 2, L / 2 - p / 4, (L + 1) / 2 - p / 4]
    lower = [L + 1.5, l1 + 1.5, l2 + 1.0]
    series = pfq(upper, lower, 1.0)
    if series == 0.0:
        return 0.0
    return sign * math.copysign(1.0, series) * math.exp(log_pref + math.log(abs(series)))


def sphere_decay_constant(d: int, p: float) -> float:
    """Limit of ``m^{p+d-1} |a_m(p, S^{d-1})|``."""
    return abs(
        2**d * math.gamma(d / 2) / (4 * math.sqrt(math.pi))
        * 2 ** (p / 2) * math.gamma(d / 2 + p / 2 - 0.5) / math.gamma(-p / 2)
    )


def so3_decay_constant(p: float) -> float:
    """Limit of ``m^{p+3} |a_m(p, SO(3))|``."""
    return abs(2**p * math.gamma(p / 2 + 1.5) / (math.sqrt(math.pi) * math.gamma(-p / 2)))


def g24_decay_constant(p: float) -> float:
    """Limit of ``||lambda||^{p+4} |a_lambda(p, G(2,4))|``."""
    return abs(math.gamma(p / 2 + 2) / (2 * math.gamma(-p / 2)))


def partitions(M: int):
    """Partitions ``(l1, l2)`` with ``l1 >= l2 >= 0`` and ``l1 + l2 <= M``."""
    return [(l1, L - l1) for L in range(M + 1) for l1 in range(L, -1, -1) if l1 >= L - l1]


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------

#: constant s in ``s - c_D ||x - y||`` for each manifold (the kernel's radius)
KERNEL_SHIFT = {"sphere": 1.0, "so3": math.sqrt(3.0), "g24": math.sqrt(2.0)}
#: ambient dimension D entering ``c_D``
KERNEL_DIM = {"so3": 9, "g24": 16}


@dataclass
class SpectralTable:
    """Fourier coefficients indexed by degree (tuple ``(m,)``) or partition ``(l1, l2)``."""

    manifold: str
    p: float
    M: int
    entries: dict = field(default_factory=dict)
    d: int = 3

    def __getitem__(self, index):
        if isinstance(index, (int, np.integer)):
            index = (int(index),)
        return self.entries[tuple(index)]

    def values(self) -> np.ndarray:
        return np.array(list(self.entries.values()))

    def by_degree(self) -> np.ndarray:
        """Values for degree-indexed tables as an array of length ``M+1``."""
        return np.array([self.entries[(m,)] for m in range(self.M + 1)])

    def to_dict(self) -> dict:
        name = f"sphere({self.d})" if self.manifold == "sphere" else self.manifold
        return {
            "manifold": name,
            "p": self.p,
            "entries": [{"index": list(k), "value": v} for k, v in self.entries.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_dict(cls, obj: dict) -> "SpectralTable":
        name = obj["manifold"]
        d = 3
        if name.startswith("sphere("):
            d = int(name[len("sphere("):-1])
            name = "sphere"
        entries = {tuple(e["index"]): float(e["value"]) for e in obj["entries"]}
        M = max(sum(k) if len(k) == 2 else k[0] for k in entries)
        return cls(name, float(obj["p"]), M, entries, d)


def coeff_table(manifold: str, p: float, M: int, d: int = 3) -> SpectralTable:
    """Monomial coefficients ``a(p, .)`` for all indices up to truncation M."""
    if M < 0:
        raise DomainError("truncation must be nonnegative")
    if manifold == "sphere":
        entries = {(m,): sphere_coeff(d, p, m) for m in range(M + 1)}
    elif manifold == "so3":
        entries = {(m,): so3_coeff(p, m) for m in range(M + 1)}
    elif manifold == "g24":
        entries = {lam: g24_coeff(p, lam) for lam in partitions(M)}
    else:
        raise DomainError(f"unknown manifold {manifold!r}")
    return SpectralTable(manifold, float(p), M, entries, d)


def kernel_table(manifold: str, M: int, d: int = 3) -> SpectralTable:
    """Coefficients of the discrepancy kernel ``s - c_D ||x-y||`` on the manifold.

    The kernel equals ``s - c_D sqrt(2) * (2^{-1/2} ||x-y||)``, so every entry
    is ``-c_D sqrt(2)`` times the p = 1 monomial coefficient, and the constant
    ``s`` is added to the degree-zero entry.
    """
    mono = coeff_table(manifold, 1.0, M, d)
    if manifold == "sphere":
        s, c = 1.0, distance_constant(d)
    else:
        s, c = KERNEL_SHIFT[manifold], distance_constant(KERNEL_DIM[manifold])
    entries = {k: -c * math.sqrt(2.0) * v for k, v in mono.entries.items()}
    zero = (0, 0) if manifold == "g24" else (0,)
    entries[zero] += s
    return SpectralTable(manifold, 1.0, M, entries, d)


# ---------------------------------------------------------------------------
# interval kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntervalEigen:
    """One eigenpair of an interval kernel.

    ``kind`` is ``"sin"`` or ``"cos"``; the eigenfunction is
    ``norm * sin(freq * x)`` or ``norm * cos(freq * x)``.
    """

    value: float
    kind: str
    freq: float
    norm: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        f = np.sin if self.kind == "sin" else np.cos
        return self.norm * f(self.freq * x)


def cos_branch_root(k: int, tol: float = 1e-13) -> float:
    """k-th positive root of ``u sin u = cos u`` (equivalently ``tan u = 1/u``)."""
    lo, hi = (k - 1) * math.pi, (k - 1) * math.pi + math.pi / 2

    def g(u):
        return u * math.sin(u) - math.cos(u)

    if lo == 0:
        lo = 0.0
    glo, ghi = g(lo), g(hi)
    if glo * ghi > 0:
        raise DomainError(f"no sign change bracketing root {k}")
    return optimize.bisect(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)


def interval_eigs(s: float, count: int) -> list[IntervalEigen]:
    """Leading eigenpairs of ``s - |x-y|/2`` on [-s, s] with Lebesgue measure.

    Both branches are merged and sorted by decreasing eigenvalue.
    """
    if not s > 0:
        raise DomainError("s must be positive")
    if count < 1:
        raise DomainError("count must be positive")
    out = []
    for j in range(count):
        m = 2 * j + 1
        out.append(IntervalEigen(4 * s * s / (m * m * math.pi**2), "sin", math.pi * m / (2 * s), 1 / math.sqrt(s)))
        u = cos_branch_root(j + 1)
        out.append(
            IntervalEigen(s * s / (u * u), "cos", u / s, 1 / math.sqrt(s * (1 + math.sin(u) ** 2)))
        )
    out.sort(key=lambda e: -e.value)
    return out[:count]


def brownian_eigs(s: float, count: int) -> list[IntervalEigen]:
    """Eigenpairs of ``min(x, y)`` on [0, s]."""
    if not s > 0:
        raise DomainError("s must be positive")
    return [
        IntervalEigen(4 * s * s / (m * m * math.pi**2), "sin", math.pi * m / (2 * s), math.sqrt(2 / s))
        for m in range(1, 2 * count, 2)
    ]


def k3r_sphere_decay(r: float, M: int) -> list[float]:
    """Sphere coefficients of ``pi (2r - t)^2 (t + 4r) / 12`` with ``t = ||x - y||`` on S^2.

    The cubic ``pi/12 (16 r^3 - 12 r^2 t + t^3)`` is expanded into monomial
    coefficients ``t^p = 2^{p/2} (2^{-p/2} t^p)``.
    """
    if r < 1:
        raise DomainError("r must be at least 1")
    out = []
    for m in range(M + 1):
        val = 16 * r**3 * sphere_coeff(3, 0, m) - 12 * r * r * math.sqrt(2) * sphere_coeff(3, 1, m)
        val += 2**1.5 * sphere_coeff(3, 3, m)
        out.append(math.pi / 12 * val)
    return out

