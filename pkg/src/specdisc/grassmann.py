"""The double cover S^2 x S^2 -> G(2,4) and harmonic analysis on G(2,4).

A point of G(2,4) is a rank-2 orthogonal projector P in R^{4x4}.  It is
represented by a pair of unit vectors (x, y), determined up to a common sign;
the canonical representative has the first nonzero coordinate of x positive.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .specfun import gegenbauer, sph_harm_all, sph_index

__all__ = [
    "embed",
    "lift",
    "lift_matrix",
    "canonicalize_pair",
    "isoclinic",
    "left_isoclinic",
    "right_isoclinic",
    "euler_rodrigues",
    "principal_angles",
    "basis_Y",
    "lambda_basis",
    "q_lambda",
    "c_lambda",
    "haar_sample",
]

_CANON_TOL = 1e-14


def embed(x, y) -> np.ndarray:
    """Projector associated with the pair (x, y); works on stacked inputs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xy = np.sum(x * y, axis=-1)
    cr = np.cross(x, y)
    shape = np.broadcast_shapes(x.shape, y.shape)[:-1]
    P = np.empty(shape + (4, 4))
    P[..., 0, 0] = 1.0 + xy
    P[..., 0, 1:] = -cr
    P[..., 1:, 0] = -cr
    P[..., 1:, 1:] = (
        x[..., :, None] * y[..., None, :]
        + y[..., :, None] * x[..., None, :]
        + (1.0 - xy)[..., None, None] * np.eye(3)
    )
    return 0.5 * P


def lift_matrix(P) -> np.ndarray:
    """The 3x3 matrix that equals ``x y^T`` when ``P = embed(x, y)``."""
    P = np.asarray(P, dtype=float)
    p = lambda i, j: P[..., i - 1, j - 1]  # noqa: E731 - 1-based indexing reads like the formula
    L = np.empty(P.shape[:-2] + (3, 3))
    L[..., 0, 0] = 0.5 * (p(1, 1) + p(2, 2) - p(3, 3) - p(4, 4))
    L[..., 0, 1] = p(2, 3) - p(1, 4)
    L[..., 0, 2] = p(2, 4) + p(1, 3)
    L[..., 1, 0] = p(2, 3) + p(1, 4)
    L[..., 1, 1] = 0.5 * (p(1, 1) - p(2, 2) + p(3, 3) - p(4, 4))
    L[..., 1, 2] = p(3, 4) - p(1, 2)
    L[..., 2, 0] = p(2, 4) - p(1, 3)
    L[..., 2, 1] = p(3, 4) + p(1, 2)
    L[..., 2, 2] = 0.5 * (p(1, 1) - p(2, 2) - p(3, 3) + p(4, 4))
    return L


def canonicalize_pair(x, y):
    """Flip the sign of (x, y) so that the first nonzero coordinate of x is positive."""
    x = np.array(x, dtype=float)
    y = np.array(y, dtype=float)
    xs = np.atleast_2d(x)
    ys = np.atleast_2d(y)
    lead = np.argmax(np.abs(xs) > _CANON_TOL, axis=1)
    sgn = np.sign(xs[np.arange(xs.shape[0]), lead])
    sgn[sgn == 0] = 1.0
    xs = xs * sgn[:, None]
    ys = ys * sgn[:, None]
    if x.ndim == 1:
        return xs[0], ys[0]
    return xs, ys


def lift(P, rank_tol: float = 1e-8):
    """Recover the canonical pair (x, y) with ``embed(x, y) == P``."""
    P = np.asarray(P, dtype=float)
    if P.shape[-2:] != (4, 4):
        raise DomainError("expected 4x4 projectors")
    L = lift_matrix(P)
    U, S, Vt = np.linalg.svd(L)
    if np.any(S[..., 1] > rank_tol) or np.any(np.abs(S[..., 0] - 1.0) > 1e-6):
        raise DomainError("matrix is not a unit rank-one product; input is not a valid projector")
    x = U[..., :, 0]
    y = S[..., 0, None] * Vt[..., 0, :]
    x = x / np.linalg.norm(x, axis=-1, keepdims=True)
    y = y / np.linalg.norm(y, axis=-1, keepdims=True)
    return canonicalize_pair(x, y)


def left_isoclinic(a) -> np.ndarray:
    a1, a2, a3, a4 = np.asarray(a, dtype=float)
    M = np.array([
        [a1, -a2, -a3, -a4],
        [a2, a1, -a4, a3],
        [a3, a4, a1, -a2],
        [a4, -a3, a2, a1],
    ])
    return M.T


def right_isoclinic(b) -> np.ndarray:
    b1, b2, b3, b4 = np.asarray(b, dtype=float)
    return np.array([
        [b1, -b2, -b3, -b4],
        [b2, b1, b4, -b3],
        [b3, -b4, b1, b2],
        [b4, b3, -b2, b1],
    ])


def isoclinic(a, b) -> np.ndarray:
    """The SO(4) element ``L_a R_b`` built from two unit quaternions."""
    return left_isoclinic(a) @ right_isoclinic(b)


def euler_rodrigues(a) -> np.ndarray:
    """Rotation matrix attached to the unit quaternion ``a`` (scalar part first)."""
    a1, a2, a3, a4 = np.asarray(a, dtype=float)
    S = np.array([
        [a1**2 + a2**2 - a3**2 - a4**2, 2 * (a2 * a3 - a1 * a4), 2 * (a2 * a4 + a1 * a3)],
        [2 * (a2 * a3 + a1 * a4), a1**2 - a2**2 + a3**2 - a4**2, 2 * (a3 * a4 - a1 * a2)],
        [2 * (a2 * a4 - a1 * a3), 2 * (a3 * a4 + a1 * a2), a1**2 - a2**2 - a3**2 + a4**2],
    ])
    return S.T


def principal_angles(P, Q):
    """Principal angles (theta1 <= theta2) between the ranges of two projectors."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    # PQP is symmetric and shares the nonzero spectrum of PQ
    ev = np.linalg.eigvalsh(P @ Q @ P)
    top = np.clip(ev[..., -2:][..., ::-1], 0.0, 1.0)
    th = np.arccos(np.sqrt(top))
    return th[..., 0], th[..., 1]


def c_lambda(lam) -> int:
    """Dimension of the component H_lambda."""
    l1, l2 = lam
    return (2 - (l2 == 0)) * ((2 * l1 + 1) ** 2 - 4 * l2 * l2)


def q_lambda(lam, P, Q):
    """Reproducing kernel of H_lambda evaluated through the principal angles."""
    l1, l2 = lam
    t1, t2 = principal_angles(P, Q)
    xp, xm = np.cos(t1 + t2), np.cos(t1 - t2)
    m, n = l1 + l2, l1 - l2
    val = 0.5 * c_lambda(lam) * (
        gegenbauer(0.5, m, xp) * gegenbauer(0.5, n, xm) + gegenbauer(0.5, m, xm) * gegenbauer(0.5, n, xp)
    )
    return val


def basis_Y(m: int, n: int, k: int, l: int, P) -> complex:
    """Tensor harmonic ``Y^m_k(x) Y^n_l(y)`` evaluated at ``P = embed(x, y)``."""
    if (m + n) % 2:
        raise DomainError("basis functions need m + n even")
    if abs(k) > m or abs(l) > n:
        raise IndexError("order out of range")
    x, y = lift(P)
    X = np.atleast_2d(x)
    Y = np.atleast_2d(y)
    vals = sph_harm_all(m, X)[:, sph_index(m, k)] * sph_harm_all(n, Y)[:, sph_index(n, l)]
    return complex(vals[0]) if np.ndim(x) == 1 else vals


def lambda_basis(lam):
    """Orthonormal basis of H_lambda as a list of ``(m, n, k, l)`` tensor indices.

    The tensor harmonics with degrees ``(m, n)`` and ``(n, m)`` are mutually
    orthonormal; when ``m == n`` both families coincide and are listed once.
    """
    l1, l2 = lam
    m, n = l1 + l2, l1 - l2
    out = [(m, n, k, l) for k in range(-m, m + 1) for l in range(-n, n + 1)]
    if m != n:
        out += [(n, m, l, k) for k in range(-m, m + 1) for l in range(-n, n + 1)]
    return out


def haar_sample(rng=None, n: int | None = None):
    """Pair(s) of independent uniform unit vectors in canonical form.

    ``rng`` may be a seed or a :class:`numpy.random.Generator`.  With ``n``
    given, arrays of shape ``(n, 3)`` are returned.
    """
    rng = np.random.default_rng(rng)
    count = 1 if n is None else n
    g = rng.standard_normal((count, 2, 3))
    g /= np.linalg.norm(g, axis=-1, keepdims=True)
    x, y = canonicalize_pair(g[:, 0], g[:, 1])
    if n is None:
        return x[0], y[0]
    return x, y
