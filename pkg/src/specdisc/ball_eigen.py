"""Eigen-decomposition of the radial kernels of ``||x - y||^p`` on the unit ball.

For odd ``d >= 3`` and odd ``p > 1 - d`` the angular degree ``m`` component
of the distance kernel is an explicit polynomial-type kernel on [0, 1].
Its nonzero eigenvalues correspond to the positive roots ``omega`` of a
small Bessel determinant, and the eigenfunctions are combinations of
``r^{1-d/2} J_{m+d/2-1}(z omega r)`` for complex roots of unity ``z``.

A Nystrom discretization is included as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, special

from .errors import ConvergenceError, DegenerateNullspaceError, DomainError
from .specfun import bessel_j_halfint, gegenbauer, pochhammer

__all__ = [
    "BallProblem",
    "BallEigenpair",
    "BallExpansion",
    "radial_kernel",
    "det_A",
    "matrix_A",
    "find_eigs",
    "eigenfunction",
    "residual",
    "nystrom_eigs",
    "assemble_ball_expansion",
    "sphere_volume",
]

SCAN_START = 0.05
SCAN_STEP = math.pi / 8
ROOT_TOL = 1e-12
GAP_TOL = 1e-8
_OMEGA_CAP = 600.0
_NORM_NODES = 160


@dataclass(frozen=True)
class BallProblem:
    d: int
    p: int
    m: int

    def __post_init__(self):
        if self.d < 3 or self.d % 2 == 0:
            raise DomainError("d must be an odd integer >= 3")
        if self.p % 2 == 0 or self.p <= 1 - self.d:
            raise DomainError("p must be odd with p > 1 - d")
        if self.m < 0:
            raise DomainError("m must be nonnegative")

    @property
    def size(self) -> int:
        return (self.d + self.p) // 2

    @property
    def order(self) -> float:
        """Bessel order of the eigenfunction building blocks."""
        return self.m + self.d / 2 - 1

    @property
    def poch(self) -> float:
        return pochhammer(-self.p / 2, self.size - 1)

    def lambda_scale(self) -> float:
        """``|lambda| * omega^(d+p)``, the same constant on both branches."""
        N = self.size
        return 2.0 ** (self.d + self.p - 2) * (self.d + 2 * self.m - 2) * abs(self.poch) * math.factorial(N - 1)

    def nodes(self, branch: int) -> np.ndarray:
        """Complex multipliers of omega in the columns of ``A`` for a branch."""
        N, k = self.size, self.d + self.p
        if branch > 0:
            return np.exp(2j * np.pi * np.arange(N) / k)
        return np.exp(1j * np.pi * (2 * np.arange(N) + 1) / k)


@dataclass
class BallEigenpair:
    """One eigenpair of the radial operator of degree ``m``.

    ``coeffs`` multiplies the Bessel building blocks; ``scale`` and
    ``phase`` turn the resulting function into a real, unit-norm one.
    """

    omega: float
    lam: float
    branch: int
    coeffs: np.ndarray
    problem: BallProblem
    scale: float = 1.0
    phase: complex = 1.0
    singular_gap: float = field(default=float("inf"))

    def __call__(self, r):
        return eigenfunction(self, self.problem, r)

    def to_dict(self) -> dict:
        return {
            "omega": self.omega,
            "lambda": self.lam,
            "branch": "+" if self.branch > 0 else "-",
        }


# ---------------------------------------------------------------------------
# the kernel
# ---------------------------------------------------------------------------

def _terminating_2f1(a, n, c, z):
    """``2F1(a, -n; c; z)`` for a nonnegative integer n (vectorized Horner)."""
    z = np.asarray(z, dtype=float)
    coeffs = [1.0]
    for j in range(n):
        coeffs.append(coeffs[-1] * (a + j) * (-n + j) / ((c + j) * (j + 1)))
    out = np.zeros_like(z)
    for cj in reversed(coeffs):
        out = out * z + cj
    return out


def radial_kernel(prob: BallProblem, r, s):
    """Degree-``m`` radial component of ``||x - y||^p`` at radii ``r, s``."""
    r = np.asarray(r, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any((r < 0) | (r > 1) | (s < 0) | (s > 1)):
        raise DomainError("radii must lie in [0, 1]")
    d, p, m = prob.d, prob.p, prob.m
    lo = np.minimum(r, s)
    hi = np.maximum(r, s)
    pref = pochhammer(-p / 2, m) / pochhammer(d / 2 - 1, m)
    n = (d + p) // 2 - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.where(hi > 0, lo / np.where(hi > 0, hi, 1.0), 0.0)
        val = pref * rho**m * hi**p * _terminating_2f1(m - p / 2, n, m + d / 2, rho * rho)
    if m > 0:
        val = np.where(hi == 0, 0.0, val)
    return val if val.ndim else float(val)


def sphere_volume(d: int) -> float:
    """Surface area of the unit sphere in R^d."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


# ---------------------------------------------------------------------------
# the determinant
# ---------------------------------------------------------------------------

def matrix_A(prob: BallProblem, omega: float, branch: int, scaled: bool = True) -> np.ndarray:
    """The Bessel matrix whose determinant vanishes at eigenvalue frequencies.

    With ``scaled`` each column is divided by its largest modulus, which
    changes the determinant only by a positive factor.
    """
    if not omega > 0:
        raise DomainError("omega must be positive")
    z = prob.nodes(branch)
    N = prob.size
    A = np.empty((N, N), dtype=complex)
    for i in range(1, N + 1):
        nu = prob.m + prob.d / 2 - i - 1
        A[i - 1, :] = z ** (-i) * bessel_j_halfint(nu, z * omega)
    if scaled:
        A = A / np.max(np.abs(A), axis=0, keepdims=True)
    return A


def det_A(prob: BallProblem, omega: float, branch: int, scaled: bool = False) -> complex:
    """Determinant of :func:`matrix_A` (unscaled by default)."""
    return complex(np.linalg.det(matrix_A(prob, omega, branch, scaled=scaled)))


_PHASES: dict = {}


def det_phase(prob: BallProblem, branch: int) -> complex:
    """Unimodular constant that makes the determinant real on a branch.

    The argument of ``det A`` is constant in omega modulo pi; it is read off
    from a fixed set of reference frequencies and cached.
    """
    key = (prob, branch)
    if key not in _PHASES:
        acc = 0j
        for w in np.linspace(0.7, 9.3, 17):
            v = det_A(prob, float(w), branch, scaled=True)
            if v != 0:
                acc += (v / abs(v)) ** 2
        _PHASES[key] = np.exp(-0.5j * np.angle(acc)) if acc != 0 else 1.0
    return _PHASES[key]


def _real_det(prob, omega, branch):
    return (det_A(prob, omega, branch, scaled=True) * det_phase(prob, branch)).real


# ---------------------------------------------------------------------------
# roots, eigenvalues and eigenfunctions
# ---------------------------------------------------------------------------

def _omega_to_lambda(prob: BallProblem, omega: float, branch: int) -> float:
    mag = prob.lambda_scale() / omega ** (prob.d + prob.p)
    return branch * math.copysign(1.0, prob.poch) * mag


def _scan_branch(prob, branch, lo, hi):
    roots = []
    grid = np.arange(lo, hi + 0.5 * SCAN_STEP, SCAN_STEP)
    vals = [_real_det(prob, float(w), branch) for w in grid]
    for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            roots.append(optimize.brentq(lambda w: _real_det(prob, w, branch), a, b, xtol=ROOT_TOL, rtol=1e-15))
    return roots, grid[-1]


def _null_vector(prob, omega, branch):
    A = matrix_A(prob, omega, branch, scaled=False)
    col = np.max(np.abs(A), axis=0)
    _, sv, vh = np.linalg.svd(A / col)
    gap = float(sv[-2] / sv[0]) if len(sv) > 1 else float("inf")
    if gap < GAP_TOL:
        raise DegenerateNullspaceError(
            f"nullspace at omega={omega:.12g} looks multi-dimensional (singular gap {gap:.3g})"
        )
    c = np.conj(vh[-1]) / col
    return c, gap


def find_eigs(prob: BallProblem, count: int, omega_max: float | None = None) -> list[BallEigenpair]:
    """The ``count`` eigenpairs of largest ``|lambda|``, sorted by ``|lambda|`` descending.

    Both branches are scanned from omega = 0.05 in steps of pi/8; sign changes
    of the phase-normalized determinant are refined by Brent's method.  The
    scan range doubles until enough roots are found.
    """
    if count < 1:
        raise DomainError("count must be at least 1")
    hi = min(omega_max if omega_max is not None else max(4.0 * count, 8.0), _OMEGA_CAP)
    lo = SCAN_START
    found: list[tuple[float, int]] = []
    while True:
        for br in (1, -1):
            roots, _ = _scan_branch(prob, br, lo, hi)
            found.extend((w, br) for w in roots)
        if len(found) >= count:
            break
        if hi >= _OMEGA_CAP:
            raise ConvergenceError(f"scan exhausted at omega={hi:g} with {len(found)} of {count} roots")
        # continue on the next grid node so that no cell is scanned twice
        steps = math.floor((hi - SCAN_START) / SCAN_STEP)
        lo = SCAN_START + steps * SCAN_STEP
        hi = min(2 * hi, _OMEGA_CAP)
        found = [(w, br) for w, br in found if w < lo]
    found.sort()
    pairs = []
    for w, br in found[:count]:
        c, gap = _null_vector(prob, w, br)
        pair = BallEigenpair(w, _omega_to_lambda(prob, w, br), br, c, prob, singular_gap=gap)
        _normalize(pair)
        pairs.append(pair)
    return pairs


def _blocks(prob: BallProblem, pair: BallEigenpair, r):
    """Matrix of ``J_nu(z_l omega r) / r^nu`` (entire in r) for each column l."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    nu = prob.order
    w = prob.nodes(pair.branch) * pair.omega
    x = np.abs(w)[None, :] * r[:, None]
    out = np.empty((r.size, w.size), dtype=complex)
    small = x < 2.0
    if np.any(small):
        # power series of (w/2)^nu sum_k (-(w r)^2/4)^k / (k! Gamma(nu+k+1))
        wr2 = -((w[None, :] * r[:, None]) ** 2) / 4.0
        term = np.ones_like(wr2) / special.gamma(nu + 1)
        acc = term.copy()
        for k in range(1, 40):
            term = term * wr2 / (k * (nu + k))
            acc = acc + term
        series = (w[None, :] / 2.0) ** nu * acc
        out[small] = series[small]
    big = ~small
    if np.any(big):
        rows, cols = np.nonzero(big)
        vals = bessel_j_halfint(nu, w[cols] * r[rows])
        out[rows, cols] = vals / r[rows] ** nu
    return out


def _raw(pair: BallEigenpair, r):
    prob = pair.problem
    r = np.atleast_1d(np.asarray(r, dtype=float))
    return r**prob.m * (_blocks(prob, pair, r) @ pair.coeffs)


def _normalize(pair: BallEigenpair):
    prob = pair.problem
    x, wts = np.polynomial.legendre.leggauss(_NORM_NODES)
    r = 0.5 * (x + 1.0)
    wts = 0.5 * wts
    vals = _raw(pair, r)
    acc = np.sum(vals**2 * wts * r ** (prob.d - 1))
    phase = np.exp(-0.5j * np.angle(acc)) if acc != 0 else 1.0
    real = (vals * phase).real
    norm = math.sqrt(float(np.sum(real**2 * wts * r ** (prob.d - 1))))
    # fix the overall sign so that the function is positive near r = 1
    sgn = 1.0 if real[-1] >= 0 else -1.0
    pair.phase = phase * sgn
    pair.scale = 1.0 / norm
    return pair


def eigenfunction(pair: BallEigenpair, prob: BallProblem, r, return_imag: bool = False):
    """Real eigenfunction, normalized by ``int_0^1 phi^2 r^{d-1} dr = 1``."""
    if prob != pair.problem:
        raise DomainError("eigenpair belongs to a different problem")
    r = np.asarray(r, dtype=float)
    if np.any((r < 0) | (r > 1)):
        raise DomainError("radii must lie in [0, 1]")
    vals = _raw(pair, r.ravel()) * pair.phase * pair.scale
    out = vals.real.reshape(r.shape)
    if return_imag:
        return (out if out.ndim else float(out)), vals.imag.reshape(r.shape)
    return out if out.ndim else float(out)


def apply_operator(prob: BallProblem, func, s, nodes: int = 64):
    """``(T_m f)(s) = int_0^1 K_m(s, r) f(r) r^{d-1} dr``.

    The integral is split at ``r = s`` where the kernel has a kink; each
    panel uses Gauss-Legendre quadrature on a smooth integrand.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty(s.size)
    for i, si in enumerate(s):
        total = 0.0
        for a, b in ((0.0, si), (si, 1.0)):
            if b <= a:
                continue
            r = a + (b - a) * 0.5 * (x + 1.0)
            wr = (b - a) * 0.5 * w
            total += np.sum(radial_kernel(prob, si, r) * func(r) * r ** (prob.d - 1) * wr)
        out[i] = total
    return out


def residual(pair: BallEigenpair, prob: BallProblem, grid: int = 64) -> float:
    """``||T_m phi - lambda phi||_inf / (|lambda| ||phi||_inf)`` on an equispaced grid."""
    s = np.linspace(0.0, 1.0, grid)
    phi = eigenfunction(pair, prob, s)
    Tphi = apply_operator(prob, lambda r: eigenfunction(pair, prob, r), s)
    return float(np.max(np.abs(Tphi - pair.lam * phi)) / (abs(pair.lam) * np.max(np.abs(phi))))


def _row_integrals(prob: BallProblem, s, nodes: int = 64):
    """``int_0^1 K_m(s, r) r^{d-1} dr`` for each s, split at the kink."""
    return apply_operator(prob, np.ones_like, s, nodes=nodes)


def nystrom_eigs(prob: BallProblem, nodes: int = 200, subtract: bool = True) -> np.ndarray:
    """Eigenvalues of a Gauss-Legendre Nystrom discretization, largest modulus first.

    The kernel has a kink on the diagonal, which limits the plain rule to
    second-order convergence.  With ``subtract`` the diagonal behaviour is
    removed first: ``(T f)(s) = int K(s,r) (f(r) - f(s)) r^{d-1} dr +
    f(s) int K(s,r) r^{d-1} dr``, with the second integral evaluated
    accurately and the first by the same Gauss-Legendre nodes.
    """
    x, w = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w * r ** (prob.d - 1)
    K = radial_kernel(prob, r[:, None], r[None, :])
    if not subtract:
        sq = np.sqrt(wr)
        ev = np.linalg.eigvalsh(sq[:, None] * K * sq[None, :])
        return ev[np.argsort(-np.abs(ev))]
    A = K * wr[None, :]
    A[np.diag_indices(nodes)] += _row_integrals(prob, r) - A.sum(axis=1)
    ev = np.linalg.eigvals(A).real
    return ev[np.argsort(-np.abs(ev))]


# ---------------------------------------------------------------------------
# the full expansion on the ball
# ---------------------------------------------------------------------------

@dataclass
class BallExpansion:
    """Truncated Mercer expansion of ``||x-y||^p`` (or ``c - ||x-y||``) on B^d.

    ``rows`` lists dictionaries with the degree ``m``, index ``j``, the raw
    radial eigenvalue ``lambda`` and the scaled eigenvalue
    ``lambda * (d-2) vol(S^{d-1}) / (2m+d-2)``.
    """

    d: int
    p: int
    shift: float | None
    rows: list = field(default_factory=list)
    radial: dict = field(default_factory=dict)

    def trace(self) -> float:
        """Sum of the operator eigenvalues counted with angular multiplicity."""
        tot = 0.0
        for row in self.rows:
            tot += row["scaled"] * _multiplicity(self.d, row["m"])
        return tot

    def evaluate(self, x, y) -> np.ndarray:
        """Partial-sum value of the kernel at point pairs ``x, y`` in B^d."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        y = np.atleast_2d(np.asarray(y, dtype=float))
        rx, ry = np.linalg.norm(x, axis=1), np.linalg.norm(y, axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            cos = np.sum(x * y, axis=1) / (rx * ry)
        cos = np.clip(np.nan_to_num(cos, nan=1.0), -1.0, 1.0)
        alpha = self.d / 2 - 1
        out = np.zeros(x.shape[0])
        for m, fns in self.radial.items():
            ang = gegenbauer(alpha, m, cos)
            for lam, fn in fns:
                out += lam * fn(rx) * fn(ry) * ang
        return out


def _multiplicity(d: int, m: int) -> int:
    """Dimension of the degree-m spherical harmonics on S^{d-1}."""
    if m == 0:
        return 1
    return math.comb(m + d - 1, d - 1) - math.comb(m + d - 3, d - 1)


class _TabulatedFunction:
    """Eigenvector of a discretized kernel, interpolated by the Nystrom formula."""

    def __init__(self, prob, shift, lam, r, wr, vec):
        self.prob, self.shift, self.lam = prob, shift, lam
        self.r, self.wr, self.vec = r, wr, vec

    def __call__(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        K = self.shift - radial_kernel(self.prob, s[:, None], self.r[None, :])
        return (K * self.wr[None, :]) @ self.vec / self.lam


def _shifted_degree_zero(prob: BallProblem, shift: float, count: int, nodes: int = 200):
    """Eigenpairs of ``shift - K_0`` by Nystrom with natural interpolation."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    r = 0.5 * (x + 1.0)
    wr = 0.5 * w * r ** (prob.d - 1)
    K = shift - radial_kernel(prob, r[:, None], r[None, :])
    sq = np.sqrt(wr)
    ev, V = np.linalg.eigh(sq[:, None] * K * sq[None, :])
    order = np.argsort(-np.abs(ev))[:count]
    out = []
    for i in order:
        vec = V[:, i] / sq  # values at the nodes, unit norm in L2(r^{d-1} dr)
        out.append((float(ev[i]), _TabulatedFunction(prob, shift, float(ev[i]), r, wr, vec)))
    return out


def assemble_ball_expansion(d: int, p: int, M_angular: int, J_radial: int, shift: float | None = None) -> BallExpansion:
    """Eigenvalues and radial eigenfunctions for every degree ``m <= M_angular``.

    With ``shift = c`` the expansion describes ``c - ||x-y||`` (``p`` must be
    1): degrees ``m >= 1`` use the negated radial kernels, and degree 0 is
    solved directly for ``c - K_0`` on a Gauss-Legendre discretization
    because the constant shift does not fit the Bessel determinant.
    """
    if shift is not None and p != 1:
        raise DomainError("the shifted form is only defined for p = 1")
    exp = BallExpansion(d, p, shift)
    vol = sphere_volume(d)
    for m in range(M_angular + 1):
        prob = BallProblem(d, p, m)
        factor = (d - 2) * vol / (2 * m + d - 2)
        if shift is not None and m == 0:
            fns = _shifted_degree_zero(prob, shift, J_radial)
        else:
            sgn = -1.0 if shift is not None else 1.0
            fns = [(sgn * e.lam, e) for e in find_eigs(prob, J_radial)]
        exp.radial[m] = fns
        for j, (lam, _) in enumerate(fns, start=1):
            exp.rows.append({"m": m, "j": j, "lambda": lam, "scaled": lam * factor})
    return exp
