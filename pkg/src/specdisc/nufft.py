"""Nonuniform Fourier transforms for band-limited expansions on S^2, SO(3)
and S^2 x S^2.

Coefficient layouts
-------------------
* ``s2``: flat vector of length ``(M+1)**2`` indexed by ``sph_index(m, k)``.
* ``s2xs2``: array of shape ``((M+1)**2, (M+1)**2)`` whose entry ``[i, j]``
  multiplies ``Y_i(x) Y_j(y)``.
* ``so3``: flat vector of length ``wigner_size(M)``.

The fast path rewrites the expansion as a trigonometric polynomial in the
spherical angles and evaluates it with an oversampled FFT followed by
Gaussian gridding (Greengard-Lee style).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numba as nb
import numpy as np

from .errors import DomainError
from .specfun import sph_harm_all, sph_index, sph_size, wigner_all, wigner_size

__all__ = [
    "NuPlan",
    "make_plan",
    "build_c_table",
    "build_b",
    "build_b_fused",
    "eval_trig",
    "forward",
    "adjoint",
    "sphere_angles",
    "nufft_type2",
    "nufft_type1",
]

_MIN_EPS = 1e-14
_OVERSAMPLING = 2.0


# ---------------------------------------------------------------------------
# trigonometric representation of spherical harmonics
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _c_table_cached(M: int) -> np.ndarray:
    N = 2 * M + 2
    theta = 2 * np.pi * np.arange(N) / N
    # Cartesian points (sin t, 0, cos t) for t on the full circle; for t > pi
    # this evaluates the analytic continuation of the polar profile.
    pts = np.stack([np.sin(theta), np.zeros(N), np.cos(theta)], axis=1)
    Y = sph_harm_all(M, pts)  # (N, S)
    coef = np.fft.fft(Y, axis=0) / N  # coef[q] multiplies exp(i q t)
    c = np.zeros((M + 1, 2 * M + 1, 2 * M + 1), dtype=complex)
    kp = np.arange(-M, M + 1)
    for m in range(M + 1):
        for k in range(-m, m + 1):
            col = coef[:, sph_index(m, k)]
            row = col[kp % N]
            row[np.abs(kp) > m] = 0.0
            c[m, k + M, :] = row
    c.setflags(write=False)
    return c


def build_c_table(M: int) -> np.ndarray:
    """Coefficients ``c[m, k+M, k'+M]`` with ``Y^m_k(z(t,p)) = e^{ikp} sum_k' c e^{ik't}``."""
    if M < 0:
        raise DomainError("degree must be nonnegative")
    return _c_table_cached(int(M))


def sphere_angles(X) -> tuple[np.ndarray, np.ndarray]:
    """Polar angle theta in [0, pi] and azimuth phi in (-pi, pi] of unit vectors."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    theta = np.arccos(np.clip(X[:, 2], -1.0, 1.0))
    phi = np.arctan2(X[:, 1], X[:, 0])
    return theta, phi


def _dense_coefficients(M: int, f) -> np.ndarray:
    """Scatter s2xs2 coefficients into ``F[m1, k+M, m2, l+M]``."""
    f = np.asarray(f)
    S = sph_size(M)
    if f.shape != (S, S):
        raise DomainError(f"expected coefficient array of shape {(S, S)}, got {f.shape}")
    F = np.zeros((M + 1, 2 * M + 1, M + 1, 2 * M + 1), dtype=complex)
    for m in range(M + 1):
        i0 = m * m
        rows = slice(i0, i0 + 2 * m + 1)
        for n in range(M + 1):
            j0 = n * n
            F[m, M - m:M + m + 1, n, M - n:M + n + 1] = f[rows, j0:j0 + 2 * n + 1]
    return F


def _compact_coefficients(M: int, F) -> np.ndarray:
    S = sph_size(M)
    out = np.zeros((S, S), dtype=complex)
    for m in range(M + 1):
        i0 = m * m
        for n in range(M + 1):
            j0 = n * n
            out[i0:i0 + 2 * m + 1, j0:j0 + 2 * n + 1] = F[m, M - m:M + m + 1, n, M - n:M + n + 1]
    return out


@nb.njit(cache=True)
def _stage_inner(F, c):
    # inner[m1, k, l, l'] = sum_{m2} F[m1, k, m2, l] c[m2, l, l']
    M1, K, M2, _ = F.shape
    out = np.zeros((M1, K, K, K), dtype=np.complex128)
    for a in range(M1):
        for k in range(K):
            for l in range(K):
                for q in range(K):
                    acc = 0j
                    for b in range(M2):
                        acc += F[a, k, b, l] * c[b, l, q]
                    out[a, k, l, q] = acc
    return out


@nb.njit(cache=True)
def _stage_outer(c, inner):
    # b[k, l, k', l'] = sum_{m1} c[m1, k, k'] inner[m1, k, l, l']
    M1, K = c.shape[0], c.shape[1]
    out = np.zeros((K, K, K, K), dtype=np.complex128)
    for k in range(K):
        for l in range(K):
            for p in range(K):
                for q in range(K):
                    acc = 0j
                    for a in range(M1):
                        acc += c[a, k, p] * inner[a, k, l, q]
                    out[k, l, p, q] = acc
    return out


@nb.njit(cache=True)
def _fused(F, c):
    M1, K = c.shape[0], c.shape[1]
    out = np.zeros((K, K, K, K), dtype=np.complex128)
    for k in range(K):
        for l in range(K):
            for p in range(K):
                for q in range(K):
                    acc = 0j
                    for a in range(M1):
                        part = 0j
                        for b in range(M1):
                            part += F[a, k, b, l] * c[b, l, q]
                        acc += c[a, k, p] * part
                    out[k, l, p, q] = acc
    return out


def build_b(M: int, f) -> np.ndarray:
    """Trigonometric coefficients ``b[k, l, k', l']`` (offset by M) of an s2xs2 expansion.

    The contraction runs in two stages, the inner one over ``m2`` and the
    outer one over ``m1``, each costing O(M^5).  Entries of the c-table with
    ``|k'| > m`` are zero, so the sums effectively run over
    ``max(|k|, |k'|) <= m <= M``.
    """
    c = np.ascontiguousarray(build_c_table(M))
    F = _dense_coefficients(M, f)
    return _stage_outer(c, _stage_inner(F, c))


def build_b_fused(M: int, f) -> np.ndarray:
    """Reference implementation of :func:`build_b` as one loop nest."""
    c = np.ascontiguousarray(build_c_table(M))
    return _fused(_dense_coefficients(M, f), c)


def eval_trig(b, coords) -> np.ndarray:
    """Direct evaluation of ``sum_q b_q exp(i q . x)`` (frequencies centered)."""
    b = np.asarray(b)
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    M = (b.shape[0] - 1) // 2
    freqs = np.arange(-M, M + 1)
    out = b
    # contract one axis at a time: out[j, ...] after the first step
    E = np.exp(1j * coords[:, 0, None] * freqs[None, :])
    out = np.tensordot(E, out, axes=([1], [0]))
    for ax in range(1, b.ndim):
        E = np.exp(1j * coords[:, ax, None] * freqs[None, :])
        out = np.einsum("jq,jq...->j...", E, out)
    return out


# ---------------------------------------------------------------------------
# Gaussian gridding NUFFT in 2 or 4 dimensions
# ---------------------------------------------------------------------------

def _gridding_params(N: int, eps: float):
    """Grid size, spreading half-width and Gaussian variance for accuracy eps."""
    msp = int(math.ceil(-math.log(eps) / (math.pi * (_OVERSAMPLING - 0.5) / _OVERSAMPLING))) + 1
    msp = max(msp, 2)
    grid = int(math.ceil(_OVERSAMPLING * N))
    grid = max(grid, 2 * msp + 2)
    grid += grid % 2
    R = grid / N
    tau = math.pi * msp / (N * N * R * (R - 0.5))
    return grid, msp, tau


@nb.njit(cache=True)
def _weights(x, grid, msp, tau, idx, w):
    h = 2.0 * np.pi / grid
    base = int(np.floor(x / h))
    for q in range(2 * msp):
        i = base - msp + 1 + q
        d = x - i * h
        w[q] = np.exp(-d * d / (4.0 * tau))
        idx[q] = i % grid


@nb.njit(cache=True)
def _gather2(u, pts, grid, msp, tau):
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    w0 = np.empty(2 * msp)
    w1 = np.empty(2 * msp)
    i0 = np.empty(2 * msp, dtype=np.int64)
    i1 = np.empty(2 * msp, dtype=np.int64)
    for j in range(n):
        _weights(pts[j, 0], grid, msp, tau, i0, w0)
        _weights(pts[j, 1], grid, msp, tau, i1, w1)
        acc = 0j
        for a in range(2 * msp):
            row = 0j
            for b in range(2 * msp):
                row += u[i0[a], i1[b]] * w1[b]
            acc += row * w0[a]
        out[j] = acc
    return out


@nb.njit(cache=True)
def _spread2(v, pts, grid, msp, tau):
    U = np.zeros((grid, grid), dtype=np.complex128)
    w0 = np.empty(2 * msp)
    w1 = np.empty(2 * msp)
    i0 = np.empty(2 * msp, dtype=np.int64)
    i1 = np.empty(2 * msp, dtype=np.int64)
    for j in range(pts.shape[0]):
        _weights(pts[j, 0], grid, msp, tau, i0, w0)
        _weights(pts[j, 1], grid, msp, tau, i1, w1)
        for a in range(2 * msp):
            va = v[j] * w0[a]
            for b in range(2 * msp):
                U[i0[a], i1[b]] += va * w1[b]
    return U


@nb.njit(cache=True)
def _gather4(u, pts, grid, msp, tau):
    n = pts.shape[0]
    out = np.zeros(n, dtype=np.complex128)
    L = 2 * msp
    w = np.empty((4, L))
    ix = np.empty((4, L), dtype=np.int64)
    for j in range(n):
        for d in range(4):
            _weights(pts[j, d], grid, msp, tau, ix[d], w[d])
        acc = 0j
        for a in range(L):
            accb = 0j
            for b in range(L):
                accc = 0j
                for c in range(L):
                    accd = 0j
                    for e in range(L):
                        accd += u[ix[0, a], ix[1, b], ix[2, c], ix[3, e]] * w[3, e]
                    accc += accd * w[2, c]
                accb += accc * w[1, b]
            acc += accb * w[0, a]
        out[j] = acc
    return out


@nb.njit(cache=True)
def _spread4(v, pts, grid, msp, tau):
    U = np.zeros((grid, grid, grid, grid), dtype=np.complex128)
    L = 2 * msp
    w = np.empty((4, L))
    ix = np.empty((4, L), dtype=np.int64)
    for j in range(pts.shape[0]):
        for d in range(4):
            _weights(pts[j, d], grid, msp, tau, ix[d], w[d])
        for a in range(L):
            va = v[j] * w[0, a]
            for b in range(L):
                vb = va * w[1, b]
                for c in range(L):
                    vc = vb * w[2, c]
                    for e in range(L):
                        U[ix[0, a], ix[1, b], ix[2, c], ix[3, e]] += vc * w[3, e]
    return U


def _deconv(M, dim, tau):
    k = np.arange(-M, M + 1)
    ghat = math.sqrt(tau / math.pi) * np.exp(-k * k * tau)
    out = 1.0 / ghat
    full = out
    for _ in range(dim - 1):
        full = np.multiply.outer(full, out)
    return full


def _wrap(x):
    return np.mod(x, 2 * np.pi)


def nufft_type2(b, pts, eps: float) -> np.ndarray:
    """Evaluate ``sum_q b_q exp(i q . x_j)`` for centered frequencies |q_i| <= M."""
    b = np.asarray(b, dtype=complex)
    dim = b.ndim
    M = (b.shape[0] - 1) // 2
    N = 2 * M + 1
    grid, msp, tau = _gridding_params(N, eps)
    coef = b * _deconv(M, dim, tau)
    arr = np.zeros((grid,) * dim, dtype=complex)
    k = np.arange(-M, M + 1) % grid
    arr[np.ix_(*([k] * dim))] = coef
    u = np.fft.ifftn(arr) * grid**dim  # u(y_l) = sum_k coef_k e^{i k y_l}
    pts = np.ascontiguousarray(_wrap(np.asarray(pts, dtype=float)))
    if dim == 2:
        vals = _gather2(u, pts, grid, msp, tau)
    elif dim == 4:
        vals = _gather4(u, pts, grid, msp, tau)
    else:
        raise DomainError("fast transforms are available in 2 and 4 dimensions")
    return vals / grid**dim


def nufft_type1(v, pts, M: int, eps: float, dim: int) -> np.ndarray:
    """Compute ``sum_j v_j exp(-i q . x_j)`` for centered frequencies |q_i| <= M."""
    N = 2 * M + 1
    grid, msp, tau = _gridding_params(N, eps)
    pts = np.ascontiguousarray(_wrap(np.asarray(pts, dtype=float)))
    v = np.ascontiguousarray(np.asarray(v, dtype=complex))
    if dim == 2:
        U = _spread2(v, pts, grid, msp, tau)
    elif dim == 4:
        U = _spread4(v, pts, grid, msp, tau)
    else:
        raise DomainError("fast transforms are available in 2 and 4 dimensions")
    H = np.fft.fftn(U)
    k = np.arange(-M, M + 1) % grid
    out = H[np.ix_(*([k] * dim))] / grid**dim
    return out * _deconv(M, dim, tau)


# ---------------------------------------------------------------------------
# plans
# ---------------------------------------------------------------------------

@dataclass
class NuPlan:
    """Precomputed state for transforms of degree ``M`` at fixed nodes.

    ``nodes`` is an ``(n, 3)`` array (s2), an ``(n, 4)`` quaternion array
    (so3) or an ``(n, 6)`` array of stacked sphere pairs (s2xs2).
    """

    manifold: str
    M: int
    nodes: np.ndarray
    epsilon: float = 1e-10
    mode: str = "direct"
    c_table: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def n(self) -> int:
        return self.nodes.shape[0]

    def coefficient_shape(self):
        if self.manifold == "s2":
            return (sph_size(self.M),)
        if self.manifold == "s2xs2":
            return (sph_size(self.M),) * 2
        return (wigner_size(self.M),)

    # basis matrices for the direct mode, computed on first use
    def basis(self):
        if "basis" not in self._cache:
            if self.manifold == "s2":
                self._cache["basis"] = (sph_harm_all(self.M, self.nodes),)
            elif self.manifold == "s2xs2":
                self._cache["basis"] = (
                    sph_harm_all(self.M, self.nodes[:, :3]),
                    sph_harm_all(self.M, self.nodes[:, 3:]),
                )
            else:
                self._cache["basis"] = (wigner_all(self.M, self.nodes),)
        return self._cache["basis"]

    def trig_nodes(self) -> np.ndarray:
        if "trig" not in self._cache:
            if self.manifold == "s2":
                th, ph = sphere_angles(self.nodes)
                pts = np.stack([ph, th], axis=1)
            else:
                th1, ph1 = sphere_angles(self.nodes[:, :3])
                th2, ph2 = sphere_angles(self.nodes[:, 3:])
                pts = np.stack([ph1, ph2, th1, th2], axis=1)
            self._cache["trig"] = pts
        return self._cache["trig"]


def make_plan(manifold: str, M: int, nodes, epsilon: float = 1e-10, mode: str = "direct") -> NuPlan:
    """Validate the inputs and build a :class:`NuPlan`."""
    if manifold not in ("s2", "so3", "s2xs2"):
        raise DomainError(f"unknown manifold {manifold!r}")
    if mode not in ("direct", "fast"):
        raise DomainError(f"unknown mode {mode!r}")
    if M < 0:
        raise DomainError("degree must be nonnegative")
    if mode == "fast" and epsilon < _MIN_EPS:
        raise DomainError(f"accuracy {epsilon} is below the reachable floor {_MIN_EPS}")
    if mode == "fast" and manifold == "so3":
        raise DomainError("the SO(3) transform is only available in direct mode")
    nodes = np.atleast_2d(np.asarray(nodes, dtype=float))
    width = {"s2": 3, "so3": 4, "s2xs2": 6}[manifold]
    if nodes.shape[1] != width:
        raise DomainError(f"{manifold} nodes need {width} columns")
    # the c-table is only needed by the fast path and grows like M^3
    ctab = build_c_table(M) if mode == "fast" else None
    return NuPlan(manifold, int(M), nodes, float(epsilon), mode, ctab)


def _check_coeffs(plan: NuPlan, f):
    f = np.asarray(f, dtype=complex)
    if f.shape != plan.coefficient_shape():
        raise DomainError(f"coefficients must have shape {plan.coefficient_shape()}, got {f.shape}")
    return f


def forward(plan: NuPlan, f) -> np.ndarray:
    """Evaluate the expansion with coefficients ``f`` at the plan's nodes."""
    f = _check_coeffs(plan, f)
    if plan.mode == "direct":
        B = plan.basis()
        if plan.manifold == "s2xs2":
            return np.sum((B[0] @ f) * B[1], axis=1)
        return B[0] @ f
    M = plan.M
    l1 = float(np.sum(np.abs(f)))
    if plan.manifold == "s2":
        c = plan.c_table
        b = np.zeros((2 * M + 1, 2 * M + 1), dtype=complex)
        for m in range(M + 1):
            for k in range(-m, m + 1):
                b[k + M] += f[sph_index(m, k)] * c[m, k + M]
    else:
        b = build_b(M, f)
    target = _inner_eps(plan.epsilon, l1, float(np.sum(np.abs(b))))
    return nufft_type2(b, plan.trig_nodes(), target)


def _inner_eps(eps, scale_in, scale_b):
    """Accuracy passed to the gridding so the final error stays below eps * scale_in."""
    if scale_b == 0.0:
        return max(eps, _MIN_EPS)
    return max(min(eps, 0.1 * eps * scale_in / scale_b), 1e-16)


def adjoint(plan: NuPlan, values) -> np.ndarray:
    """Adjoint transform ``sum_j v_j conj(basis(x_j))`` for every coefficient index."""
    v = np.asarray(values, dtype=complex).ravel()
    if v.shape[0] != plan.n:
        raise DomainError("need one value per node")
    if plan.mode == "direct":
        B = plan.basis()
        if plan.manifold == "s2xs2":
            return np.conj(B[0]).T @ (v[:, None] * np.conj(B[1]))
        return np.conj(B[0]).T @ v
    M = plan.M
    c = plan.c_table
    row_sum = float(np.max(np.sum(np.abs(c), axis=2)))
    if plan.manifold == "s2":
        H = nufft_type1(v, plan.trig_nodes(), M, 0.1 * plan.epsilon / max(row_sum, 1.0), 2)
        out = np.zeros(sph_size(M), dtype=complex)
        for m in range(M + 1):
            for k in range(-m, m + 1):
                out[sph_index(m, k)] = np.dot(np.conj(c[m, k + M]), H[k + M])
        return out
    H = nufft_type1(v, plan.trig_nodes(), M, 0.1 * plan.epsilon / max(row_sum, 1.0) ** 2, 4)
    tmp = np.einsum("blq,klpq->bklp", np.conj(c), H, optimize=False)
    F = np.einsum("akp,bklp->akbl", np.conj(c), tmp, optimize=False)
    return _compact_coefficients(M, F)
