"""Fourier-domain L2-discrepancy between a target measure and an n-point set.

For an orthonormal basis ``phi_l`` and kernel coefficients ``a_l`` the
discrepancy reads ``sum_l a_l |mu_hat_l - nu_hat_l|^2`` with
``nu_hat_l = (1/n) sum_j conj(phi_l(x_j))``.  Three manifolds are supported:

* ``sphere``: unit vectors in R^3, spherical harmonics;
* ``so3``: unit quaternions, Wigner functions;
* ``g24``: pairs of unit vectors representing points of G(2,4) through the
  double cover, tensor products of spherical harmonics with even total degree.

Gradients are analytic.  On spheres the tangential gradient is
``-i x cross (L f)(x)`` where ``L`` is the angular momentum operator, which
acts on coefficient vectors through sparse ladder matrices.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

from .errors import DomainError
from .grassmann import canonicalize_pair, embed
from .kernels import distance_constant
from .nufft import adjoint, forward, make_plan
from .spectra import KERNEL_DIM, KERNEL_SHIFT, SpectralTable, kernel_table
from .specfun import sph_index, sph_size, wigner_all, wigner_size

__all__ = [
    "TargetMeasure",
    "PointSet",
    "MinimizeResult",
    "target_uniform",
    "target_discrete",
    "target_circle_s2",
    "target_torus_so3",
    "target_circle_so3",
    "coefficient_weights",
    "empirical_coefficients",
    "objective",
    "gradient",
    "objective_and_gradient",
    "kernel_discrepancy",
    "minimize",
    "convergence_study",
    "fit_slope",
    "two_circle_scenario",
    "so3_scenario",
    "random_points",
    "canonical_quaternions",
]

MANIFOLDS = ("sphere", "so3", "g24")
_NUFFT_NAME = {"sphere": "s2", "so3": "so3", "g24": "s2xs2"}
_WIDTH = {"sphere": 3, "so3": 4, "g24": 6}


def _check_manifold(manifold):
    if manifold not in MANIFOLDS:
        raise DomainError(f"unknown manifold {manifold!r}; choose one of {MANIFOLDS}")


def coefficient_shape(manifold: str, M: int):
    _check_manifold(manifold)
    if manifold == "sphere":
        return (sph_size(M),)
    if manifold == "so3":
        return (wigner_size(M),)
    return (sph_size(M), sph_size(M))


@lru_cache(maxsize=32)
def _degrees(manifold: str, M: int) -> np.ndarray:
    """Degree label of every coefficient slot (for g24: a pair, encoded as int)."""
    if manifold == "sphere":
        return np.repeat(np.arange(M + 1), [2 * m + 1 for m in range(M + 1)])
    if manifold == "so3":
        return np.repeat(np.arange(M + 1), [(2 * m + 1) ** 2 for m in range(M + 1)])
    deg = _degrees("sphere", M)
    return deg[:, None] * (M + 1) + deg[None, :]


@lru_cache(maxsize=32)
def _g24_mask(M: int) -> np.ndarray:
    deg = _degrees("sphere", M)
    return ((deg[:, None] + deg[None, :]) % 2) == 0


# ---------------------------------------------------------------------------
# point sets and targets
# ---------------------------------------------------------------------------

def canonical_quaternions(Q) -> np.ndarray:
    """Sign representative with nonnegative scalar part (ties: first nonzero entry positive)."""
    Q = np.array(np.atleast_2d(Q), dtype=float)
    nz = np.abs(Q) > 1e-14
    lead = np.argmax(nz, axis=1)
    sgn = np.sign(Q[np.arange(Q.shape[0]), lead])
    sgn[sgn == 0] = 1.0
    return Q * sgn[:, None]


@dataclass
class PointSet:
    """An n-point set on one of the supported manifolds, stored canonically."""

    manifold: str
    points: np.ndarray

    def __post_init__(self):
        _check_manifold(self.manifold)
        pts = np.array(np.atleast_2d(self.points), dtype=float)
        if pts.shape[1] != _WIDTH[self.manifold]:
            raise DomainError(f"{self.manifold} points need {_WIDTH[self.manifold]} coordinates")
        blocks = [slice(0, 3), slice(3, 6)] if self.manifold == "g24" else [slice(None)]
        for blk in blocks:
            if np.any(np.abs(np.linalg.norm(pts[:, blk], axis=1) - 1.0) > 1e-10):
                raise DomainError("points must be unit vectors (per factor)")
        if self.manifold == "so3":
            pts = canonical_quaternions(pts)
        elif self.manifold == "g24":
            x, y = canonicalize_pair(pts[:, :3], pts[:, 3:])
            pts = np.hstack([x, y])
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def to_json(self) -> str:
        return json.dumps({"manifold": self.manifold, "points": self.points.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        obj = json.loads(text)
        return cls(obj["manifold"], np.array(obj["points"], dtype=float))


@dataclass
class TargetMeasure:
    """Fourier coefficients ``mu_hat`` of a probability measure up to degree ``M``."""

    manifold: str
    M: int
    mu_hat: np.ndarray

    @property
    def mass(self) -> float:
        flat = self.mu_hat.ravel()
        return float(flat[0].real)

    def validate(self, tol: float = 1e-10):
        if not np.all(np.isfinite(self.mu_hat)):
            raise DomainError("target coefficients must be finite")
        if abs(self.mass - 1.0) > tol:
            raise DomainError(f"target must be a probability measure (mass {self.mass:.12g})")

    def __add__(self, other: "TargetMeasure") -> "TargetMeasure":
        if (self.manifold, self.M) != (other.manifold, other.M):
            raise DomainError("targets live on different manifolds or degrees")
        return TargetMeasure(self.manifold, self.M, self.mu_hat + other.mu_hat)


def empirical_coefficients(manifold: str, M: int, points, weights=None, mode: str = "direct",
                           epsilon: float = 1e-10) -> np.ndarray:
    """``sum_j w_j conj(phi_l(x_j))`` for every basis index (weights default to 1/n)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[0]
    w = np.full(n, 1.0 / n) if weights is None else np.asarray(weights, dtype=float)
    plan = make_plan(_NUFFT_NAME[manifold], M, pts, epsilon=epsilon, mode=mode)
    out = adjoint(plan, w.astype(complex))
    if manifold == "g24":
        out = np.where(_g24_mask(M), out, 0.0)
    return out


def target_uniform(manifold: str, M: int) -> TargetMeasure:
    """Normalized invariant measure: coefficient 1 at degree zero, 0 elsewhere."""
    mu = np.zeros(coefficient_shape(manifold, M), dtype=complex)
    mu.flat[0] = 1.0
    return TargetMeasure(manifold, M, mu)


def target_discrete(manifold: str, points, weights, M: int) -> TargetMeasure:
    """Weighted sum of point masses."""
    w = np.asarray(weights, dtype=float).ravel()
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > 1e-10:
        raise DomainError(f"weights must sum to 1 (got {w.sum():.12g})")
    pts = PointSet(manifold, points).points
    return TargetMeasure(manifold, M, empirical_coefficients(manifold, M, pts, w))


def _orthonormal_frame(axis):
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    helper = np.eye(3)[np.argmin(np.abs(a))]
    u = np.cross(a, helper)
    u /= np.linalg.norm(u)
    v = np.cross(a, u)
    return a, u, v


def circle_points_s2(axis, polar: float, count: int) -> np.ndarray:
    """Equispaced points on the circle at polar angle ``polar`` around ``axis``."""
    a, u, v = _orthonormal_frame(axis)
    t = 2 * np.pi * np.arange(count) / count
    return (np.cos(polar) * a[None, :]
            + np.sin(polar) * (np.cos(t)[:, None] * u[None, :] + np.sin(t)[:, None] * v[None, :]))


def target_circle_s2(axis, polar: float, weight: float, M: int, base: TargetMeasure | None = None) -> TargetMeasure:
    """Add ``weight`` times the normalized arc-length measure of a circle on S^2.

    Spherical harmonics of degree <= M restrict to trigonometric polynomials
    of degree <= M on the circle, so the periodic trapezoid rule with
    ``2M + 2`` nodes gives exact coefficients.
    """
    if weight < 0:
        raise DomainError("weight must be nonnegative")
    pts = circle_points_s2(axis, polar, 2 * M + 2)
    w = np.full(pts.shape[0], weight / pts.shape[0])
    part = TargetMeasure("sphere", M, empirical_coefficients("sphere", M, pts, w))
    return part if base is None else base + part


def torus_quaternions(alpha: float, count: int) -> np.ndarray:
    """Grid on ``(cos a cos t, cos a sin t, sin a cos s, sin a sin s)``."""
    t = 2 * np.pi * np.arange(count) / count
    T, S = np.meshgrid(t, t, indexing="ij")
    T, S = T.ravel(), S.ravel()
    return np.stack([np.cos(alpha) * np.cos(T), np.cos(alpha) * np.sin(T),
                     np.sin(alpha) * np.cos(S), np.sin(alpha) * np.sin(S)], axis=1)


def target_torus_so3(alpha: float, weight: float, M: int, base: TargetMeasure | None = None) -> TargetMeasure:
    """Add ``weight`` times the flat measure on a torus of unit quaternions.

    The Wigner functions of degree <= M are polynomials of degree <= 2M in
    the quaternion entries, so a ``(4M+2)^2`` trapezoid grid is exact.
    """
    pts = torus_quaternions(alpha, 4 * M + 2)
    w = np.full(pts.shape[0], weight / pts.shape[0])
    part = TargetMeasure("so3", M, empirical_coefficients("so3", M, pts, w))
    return part if base is None else base + part


def great_circle_quaternions(count: int, plane=(2, 3)) -> np.ndarray:
    t = 2 * np.pi * np.arange(count) / count
    Q = np.zeros((count, 4))
    Q[:, plane[0]] = np.cos(t)
    Q[:, plane[1]] = np.sin(t)
    return Q


def target_circle_so3(weight: float, M: int, plane=(2, 3), base: TargetMeasure | None = None) -> TargetMeasure:
    """Add ``weight`` times the uniform measure on a great circle of unit quaternions."""
    pts = great_circle_quaternions(4 * M + 2, plane)
    w = np.full(pts.shape[0], weight / pts.shape[0])
    part = TargetMeasure("so3", M, empirical_coefficients("so3", M, pts, w))
    return part if base is None else base + part


# ---------------------------------------------------------------------------
# objective and gradient
# ---------------------------------------------------------------------------

def coefficient_weights(table: SpectralTable, manifold: str, M: int) -> np.ndarray:
    """Kernel coefficient attached to every basis slot, zero on excluded slots."""
    if table.manifold != manifold:
        raise DomainError(f"table is for {table.manifold}, target is on {manifold}")
    if table.M < M:
        raise DomainError(f"table truncated at {table.M} < {M}")
    if manifold in ("sphere", "so3"):
        per = np.array([table[m] for m in range(M + 1)])
        return per[_degrees(manifold, M)]
    deg = _degrees("sphere", M)
    W = np.zeros((sph_size(M), sph_size(M)))
    for i in range(M + 1):
        for j in range(i % 2, M + 1, 2):
            lam = ((i + j) // 2, abs(i - j) // 2)
            W[np.ix_(deg == i, deg == j)] = table[lam]
    return W


@lru_cache(maxsize=32)
def _ladders(M: int):
    """Sparse matrices of L_x, L_y, L_z acting on spherical-harmonic coefficients."""
    S = sph_size(M)
    up = sparse.lil_matrix((S, S), dtype=complex)
    dn = sparse.lil_matrix((S, S), dtype=complex)
    z = np.zeros(S)
    for m in range(M + 1):
        for k in range(-m, m + 1):
            i = sph_index(m, k)
            z[i] = k
            if k < m:
                up[sph_index(m, k + 1), i] = math.sqrt((m - k) * (m + k + 1))
            if k > -m:
                dn[sph_index(m, k - 1), i] = math.sqrt((m + k) * (m - k + 1))
    up, dn = up.tocsr(), dn.tocsr()
    Lx = ((up + dn) * 0.5).tocsr()
    Ly = ((up - dn) * (-0.5j)).tocsr()
    Lz = sparse.diags(z.astype(complex)).tocsr()
    return Lx, Ly, Lz


def _sphere_tangent_grad(X, Lf):
    """Real tangential gradient ``Re(-i x cross Lf)`` from the angular momentum values."""
    return np.real(-1j * np.cross(X, Lf))


def _check_pair(table, target, ps):
    if target.manifold != ps.manifold:
        raise DomainError(f"target is on {target.manifold}, points are on {ps.manifold}")
    target.validate()
    return coefficient_weights(table, target.manifold, target.M)


def objective(table: SpectralTable, target: TargetMeasure, ps: PointSet, mode: str = "direct",
              epsilon: float = 1e-10) -> float:
    """Truncated discrepancy ``sum_l a_l |mu_hat_l - nu_hat_l|^2``."""
    W = _check_pair(table, target, ps)
    nu = empirical_coefficients(ps.manifold, target.M, ps.points, mode=mode, epsilon=epsilon)
    return float(np.sum(W * np.abs(target.mu_hat - nu) ** 2))


def _objective_grad_raw(W, target, manifold, P, mode="direct", epsilon=1e-10):
    """Objective and Riemannian gradient at raw coordinates ``P`` (no canonicalization)."""
    M = target.M
    n = P.shape[0]
    if manifold == "so3":
        D, G = wigner_all(M, P, grad=True)
        nu = np.conj(D).T @ np.full(n, 1.0 / n)
        r = nu - target.mu_hat
        f = float(np.sum(W * np.abs(r) ** 2))
        g = (G @ (W * r)).real * (2.0 / n)
        g -= np.sum(g * P, axis=1, keepdims=True) * P
        return f, g
    plan = make_plan(_NUFFT_NAME[manifold], M, P, epsilon=epsilon, mode=mode)
    nu = adjoint(plan, np.full(n, 1.0 / n, dtype=complex))
    if manifold == "g24":
        nu = np.where(_g24_mask(M), nu, 0.0)
    r = nu - target.mu_hat
    f = float(np.sum(W * np.abs(r) ** 2))
    c = W * r
    Lx, Ly, Lz = _ladders(M)
    if manifold == "sphere":
        Lf = np.stack([forward(plan, L @ c) for L in (Lx, Ly, Lz)], axis=1)
        g = _sphere_tangent_grad(P, Lf) * (2.0 / n)
        return f, g
    Lfx = np.stack([forward(plan, np.asarray(L @ c)) for L in (Lx, Ly, Lz)], axis=1)
    Lfy = np.stack([forward(plan, np.asarray((L @ c.T).T)) for L in (Lx, Ly, Lz)], axis=1)
    gx = _sphere_tangent_grad(P[:, :3], Lfx)
    gy = _sphere_tangent_grad(P[:, 3:], Lfy)
    return f, np.hstack([gx, gy]) * (2.0 / n)


def objective_and_gradient(table: SpectralTable, target: TargetMeasure, ps: PointSet, mode: str = "direct",
                           epsilon: float = 1e-10):
    W = _check_pair(table, target, ps)
    return _objective_grad_raw(W, target, ps.manifold, ps.points, mode, epsilon)


def gradient(table: SpectralTable, target: TargetMeasure, ps: PointSet, mode: str = "direct",
             epsilon: float = 1e-10) -> np.ndarray:
    """Riemannian gradient, one tangent vector (or pair of vectors) per point."""
    return objective_and_gradient(table, target, ps, mode, epsilon)[1]


# ---------------------------------------------------------------------------
# closed-form kernels
# ---------------------------------------------------------------------------

def kernel_matrix(manifold: str, A, B) -> np.ndarray:
    """Discrepancy kernel ``s - c_D ||x - y||`` between two point arrays."""
    A = np.atleast_2d(A)
    B = np.atleast_2d(B)
    if manifold == "sphere":
        dist = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=-1)
        return 1.0 - distance_constant(3) * dist
    if manifold == "so3":
        ip = np.clip(np.abs(A @ B.T), 0.0, 1.0)
        dist = 2.0 * math.sqrt(2.0) * np.sqrt(np.maximum(1.0 - ip**2, 0.0))
        return KERNEL_SHIFT["so3"] - distance_constant(KERNEL_DIM["so3"]) * dist
    PA = embed(A[:, :3], A[:, 3:])
    PB = embed(B[:, :3], B[:, 3:])
    dist = np.linalg.norm(PA[:, None] - PB[None, :], axis=(-2, -1))
    return KERNEL_SHIFT["g24"] - distance_constant(KERNEL_DIM["g24"]) * dist


def kernel_discrepancy(ps: PointSet) -> float:
    """Untruncated discrepancy to the invariant measure, from the kernel in closed form.

    It equals ``(1/n^2) sum_{i,j} K(x_i, x_j) - int int K``, where the double
    integral is the degree-zero kernel coefficient.
    """
    K = kernel_matrix(ps.manifold, ps.points, ps.points)
    a0 = kernel_table(ps.manifold, 0)[(0, 0) if ps.manifold == "g24" else (0,)]
    return float(K.mean() - a0)


# ---------------------------------------------------------------------------
# optimization
# ---------------------------------------------------------------------------

def random_points(manifold: str, n: int, rng) -> np.ndarray:
    """Independent samples from the invariant measure."""
    rng = np.random.default_rng(rng)
    if manifold == "sphere":
        X = rng.standard_normal((n, 3))
        return X / np.linalg.norm(X, axis=1, keepdims=True)
    if manifold == "so3":
        Q = rng.standard_normal((n, 4))
        return Q / np.linalg.norm(Q, axis=1, keepdims=True)
    X = rng.standard_normal((n, 6))
    X[:, :3] /= np.linalg.norm(X[:, :3], axis=1, keepdims=True)
    X[:, 3:] /= np.linalg.norm(X[:, 3:], axis=1, keepdims=True)
    return X


def _pair_distance(manifold, P, x):
    if manifold == "sphere":
        return np.linalg.norm(P - x[None, :], axis=1)
    if manifold == "so3":
        return np.sqrt(np.maximum(1.0 - (P @ x) ** 2, 0.0))
    return np.linalg.norm(embed(P[:, :3], P[:, 3:]) - embed(x[:3], x[3:])[None], axis=(-2, -1))


def farthest_point_init(manifold: str, n: int, rng, oversample: int = 10) -> np.ndarray:
    """Greedy farthest-point selection from a random candidate pool."""
    rng = np.random.default_rng(rng)
    pool = random_points(manifold, max(oversample * n, n), rng)
    chosen = [int(rng.integers(pool.shape[0]))]
    mind = _pair_distance(manifold, pool, pool[chosen[0]])
    for _ in range(n - 1):
        nxt = int(np.argmax(mind))
        chosen.append(nxt)
        mind = np.minimum(mind, _pair_distance(manifold, pool, pool[nxt]))
    return pool[chosen]


def _project(manifold, P, V):
    if manifold == "g24":
        out = V.copy()
        for blk in (slice(0, 3), slice(3, 6)):
            out[:, blk] -= np.sum(V[:, blk] * P[:, blk], axis=1, keepdims=True) * P[:, blk]
        return out
    return V - np.sum(V * P, axis=1, keepdims=True) * P


def _retract(manifold, P, V):
    Q = P + V
    if manifold == "g24":
        Q[:, :3] /= np.linalg.norm(Q[:, :3], axis=1, keepdims=True)
        Q[:, 3:] /= np.linalg.norm(Q[:, 3:], axis=1, keepdims=True)
        return Q
    return Q / np.linalg.norm(Q, axis=1, keepdims=True)


def _max_step(manifold, V):
    if manifold == "g24":
        return max(np.linalg.norm(V[:, :3], axis=1).max(), np.linalg.norm(V[:, 3:], axis=1).max())
    return np.linalg.norm(V, axis=1).max()


@dataclass
class MinimizeResult:
    """Best point set over all restarts and the objective trace of that run."""

    points: PointSet
    objective: float
    trace: list = field(default_factory=list)
    converged: bool = False
    stalled: bool = False
    restart_objectives: list = field(default_factory=list)

    def trace_csv(self) -> str:
        lines = ["iter,objective,grad_norm"]
        lines += [f"{i},{f:.17g},{g:.17g}" for i, f, g in self.trace]
        return "\n".join(lines) + "\n"


def _descend(W, target, manifold, P, max_iters, tol, lbfgs, memory, mode, epsilon):
    f, g = _objective_grad_raw(W, target, manifold, P, mode, epsilon)
    gn = float(np.linalg.norm(g))
    trace = [(0, f, gn)]
    hist: deque = deque(maxlen=memory)
    converged = stalled = False
    for it in range(1, max_iters + 1):
        if gn <= tol:
            converged = True
            break
        d = -g
        if lbfgs and hist:
            # two-loop recursion on flattened tangent vectors
            q = g.ravel().copy()
            alphas = []
            for s, y, rho in reversed(hist):
                a = rho * np.dot(s, q)
                alphas.append(a)
                q -= a * y
            s, y, _ = hist[-1]
            q *= np.dot(s, y) / np.dot(y, y)
            for (s, y, rho), a in zip(hist, reversed(alphas)):
                b = rho * np.dot(y, q)
                q += (a - b) * s
            d = _project(manifold, P, -q.reshape(P.shape))
            if np.dot(d.ravel(), g.ravel()) >= -1e-12 * np.linalg.norm(d) * gn:
                d = -g
                hist.clear()
        slope = float(np.dot(d.ravel(), g.ravel()))
        t = 1.0 if (lbfgs and hist) else min(1.0, 0.1 / max(_max_step(manifold, d), 1e-300))
        while True:
            Pn = _retract(manifold, P, t * d)
            fn, gn_vec = _objective_grad_raw(W, target, manifold, Pn, mode, epsilon)
            if fn <= f + 1e-4 * t * slope:
                break
            t *= 0.5
            if t * _max_step(manifold, d) < 1e-14:
                stalled = True
                break
        if stalled:
            break
        s_vec = _project(manifold, Pn, t * d).ravel()
        y_vec = (gn_vec - _project(manifold, Pn, g)).ravel()
        sy = float(np.dot(s_vec, y_vec))
        if lbfgs:
            hist = deque(
                [(_project(manifold, Pn, s.reshape(P.shape)).ravel(),
                  _project(manifold, Pn, y.reshape(P.shape)).ravel(), rho) for s, y, rho in hist],
                maxlen=memory,
            )
            if sy > 1e-16 * np.linalg.norm(s_vec) * np.linalg.norm(y_vec):
                hist.append((s_vec, y_vec, 1.0 / sy))
        P, f, g = Pn, fn, gn_vec
        gn = float(np.linalg.norm(g))
        trace.append((it, f, gn))
    return P, f, trace, converged, stalled


def minimize(table: SpectralTable, target: TargetMeasure, n: int, max_iters: int = 500, tol: float = 1e-9,
             seed: int = 0, restarts: int = 3, lbfgs: bool = True, memory: int = 5, init=None,
             mode: str = "direct", epsilon: float = 1e-10) -> MinimizeResult:
    """Riemannian descent with Armijo backtracking from several starting sets.

    Each restart starts from a farthest-point selection of random candidates
    (``init`` replaces the first start).  The best final objective wins.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    manifold = target.manifold
    target.validate()
    W = coefficient_weights(table, manifold, target.M)
    rng = np.random.default_rng(seed)
    best = None
    objs = []
    for r in range(max(restarts, 1)):
        if r == 0 and init is not None:
            P0 = np.array(np.atleast_2d(init), dtype=float)
        else:
            P0 = farthest_point_init(manifold, n, rng)
        P, f, trace, conv, stall = _descend(W, target, manifold, P0, max_iters, tol, lbfgs, memory, mode, epsilon)
        objs.append(f)
        if best is None or f < best.objective:
            best = MinimizeResult(PointSet(manifold, P), f, trace, conv, stall)
    best.restart_objectives = objs
    return best


def fit_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns)."""
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)), 1)[0])


def convergence_study(manifold: str = "g24", n_list=(16, 81, 256), seed: int = 0, restarts: int = 3,
                      max_iters: int = 400):
    """Minimize the truncated discrepancy for each n with ``M = n^{1/4}``.

    Rows hold ``n``, ``M``, the minimized truncated objective and the
    untruncated discrepancy of the resulting point set.
    """
    rows = []
    for n in n_list:
        M = max(1, int(round(n ** 0.25)))
        table = kernel_table(manifold, M)
        target = target_uniform(manifold, M)
        res = minimize(table, target, n, max_iters=max_iters, seed=seed, restarts=restarts)
        rows.append({"n": n, "M": M, "truncated": res.objective, "discrepancy": kernel_discrepancy(res.points)})
    return rows


# ---------------------------------------------------------------------------
# the two showcase scenarios
# ---------------------------------------------------------------------------

#: circles (axis, polar angle, weight) supporting the sphere scenario target
TWO_CIRCLES = (((0.0, 0.0, 1.0), math.pi / 3, 0.9), ((0.0, 0.0, -1.0), math.pi / 6, 0.1))
#: torus parameter and weights of the SO(3) scenario target
SO3_TORUS_ALPHA = math.pi / 6
SO3_WEIGHTS = (0.9, 0.1)


def two_circle_scenario(M: int = 8) -> TargetMeasure:
    """Mixture of two circles on S^2 with mass ratio 9 : 1."""
    target = None
    for axis, polar, w in TWO_CIRCLES:
        target = target_circle_s2(axis, polar, w, M, base=target)
    return target


def circle_split(points) -> tuple[int, int]:
    """Number of points closer to the first / second circle of the sphere scenario."""
    X = np.atleast_2d(points)
    dists = []
    for axis, polar, _ in TWO_CIRCLES:
        a = np.asarray(axis) / np.linalg.norm(axis)
        ang = np.arccos(np.clip(X @ a, -1.0, 1.0))
        dists.append(np.abs(ang - polar))
    first = int(np.sum(dists[0] <= dists[1]))
    return first, X.shape[0] - first


def so3_scenario(M: int = 8) -> TargetMeasure:
    """Torus of unit quaternions (mass 0.9) plus a disjoint great circle (mass 0.1)."""
    t = target_torus_so3(SO3_TORUS_ALPHA, SO3_WEIGHTS[0], M)
    return target_circle_so3(SO3_WEIGHTS[1], M, plane=(2, 3), base=t)


def so3_split(Q) -> tuple[int, int]:
    """Points closer to the torus / to the great circle of the SO(3) scenario."""
    Q = np.atleast_2d(Q)
    # angle between q and the plane spanned by the first two coordinates
    beta = np.arctan2(np.linalg.norm(Q[:, 2:], axis=1), np.linalg.norm(Q[:, :2], axis=1))
    d_torus = np.abs(beta - SO3_TORUS_ALPHA)
    d_circle = np.abs(beta - math.pi / 2)
    first = int(np.sum(d_torus <= d_circle))
    return first, Q.shape[0] - first
