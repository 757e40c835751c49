"""Special functions: Gegenbauer polynomials, harmonics on S^2 and SO(3),
Pochhammer symbols, generalized hypergeometric series and Bessel functions
of half-integer order with complex argument.

Conventions
-----------
* Spherical harmonics are orthonormal for the *normalized* surface measure on
  S^2, so ``Y^0_0 == 1``.  Harmonics are stored in a flat layout where the
  pair (m, l) sits at position ``m*m + m + l``.
* Wigner functions are ``sqrt(2m+1)`` times the matrix entries of the unitary
  irreducible representation of SU(2) of spin m acting on homogeneous
  polynomials of degree 2m.  A unit quaternion ``q = (w, x, y, z)`` is mapped
  to ``U = [[a, -conj(b)], [b, conj(a)]]`` with ``a = w - i z`` and
  ``b = y - i x``.  Integer spins descend to SO(3) since U and -U give the
  same matrix entries.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special as sp

from .errors import (
    BesselOverflowError,
    DivergenceError,
    DomainError,
    PoleError,
)

__all__ = [
    "pochhammer",
    "gamma_ratio",
    "log_gamma_signed",
    "pfq",
    "gegenbauer",
    "sph_harm",
    "sph_harm_all",
    "sph_index",
    "sph_size",
    "wigner_D",
    "wigner_all",
    "wigner_index",
    "wigner_size",
    "bessel_j_halfint",
    "bessel_j_halfint_deriv",
    "spherical_jn",
    "spherical_yn",
]


# ---------------------------------------------------------------------------
# gamma family
# ---------------------------------------------------------------------------

def _is_nonpos_int(x: float) -> bool:
    return float(x) <= 0 and float(x) == math.floor(float(x))


def pochhammer(f: float, n: int) -> float:
    """Rising factorial ``f (f+1) ... (f+n-1)`` with ``(f)_0 = 1``."""
    if n < 0 or int(n) != n:
        raise DomainError(f"pochhammer needs a nonnegative integer n, got {n}")
    out = 1.0
    for i in range(int(n)):
        out *= f + i
        if out == 0.0:
            return 0.0
    return out


def log_gamma_signed(x: float) -> tuple[float, float]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.  Raises at the poles."""
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at {x}")
    return float(sp.gammaln(x)), float(sp.gammasgn(x))


def gamma_ratio(a: float, b: float) -> float:
    """``Gamma(a) / Gamma(b)`` computed through log-gamma values.

    If ``b`` is a pole the ratio is undefined and :class:`PoleError` is raised;
    a pole in the numerator likewise raises.
    """
    if _is_nonpos_int(b):
        raise PoleError(f"Gamma(b) has a pole at b={b}")
    if _is_nonpos_int(a):
        raise PoleError(f"Gamma(a) has a pole at a={a}")
    la, sa = log_gamma_signed(a)
    lb, sb = log_gamma_signed(b)
    return sa * sb * math.exp(la - lb)


# ---------------------------------------------------------------------------
# generalized hypergeometric series
# ---------------------------------------------------------------------------

_PFQ_CHUNK = 4096
_PFQ_CAP = 1_000_000
_PFQ_RTOL = 1e-16


def _terminating_length(upper) -> int | None:
    """Number of nonzero terms if some upper parameter is a nonpositive integer."""
    lengths = [int(-a) + 1 for a in upper if _is_nonpos_int(a)]
    return min(lengths) if lengths else None


def pfq(upper, lower, z: float) -> float:
    """Generalized hypergeometric series ``pFq(upper; lower; z)`` for real input.

    Terminating series are summed exactly.  A convergent infinite series is
    summed until the terms drop below ``1e-16`` relative to the partial sum; on
    the unit circle (where the terms only decay algebraically) the remainder
    is estimated by an Euler-Maclaurin integral of the local power law.
    """
    upper = [float(a) for a in upper]
    lower = [float(b) for b in lower]
    z = float(z)
    nterm = _terminating_length(upper)
    for b in lower:
        if _is_nonpos_int(b):
            pole_at = int(-b) + 1  # (b)_n == 0 once n reaches this index
            if nterm is None or nterm > pole_at:
                raise PoleError(f"lower parameter {b} hits a pole before termination")
    if z == 0.0:
        return 1.0
    if nterm is not None:
        return _sum_terms(upper, lower, z, nterm)

    p, q = len(upper), len(lower)
    if p > q + 1:
        raise DivergenceError(f"{p}F{q} diverges for z != 0")
    if p == q + 1:
        az = abs(z)
        if az > 1.0:
            raise DivergenceError(f"{p}F{q} diverges for |z| = {az} > 1")
        if az == 1.0:
            balance = sum(lower) - sum(upper)
            need = 0.0 if z > 0 else -1.0
            if balance <= need:
                raise DivergenceError(
                    f"{p}F{q} at z={z} needs sum(lower)-sum(upper) > {need}, got {balance}"
                )
            return _sum_algebraic(upper, lower, z, balance)
    return _sum_geometric(upper, lower, z)


def _sum_terms(upper, lower, z, nterm):
    t = 1.0
    s = 1.0
    for n in range(nterm - 1):
        num = z
        for a in upper:
            num *= a + n
        den = float(n + 1)
        for b in lower:
            den *= b + n
        t *= num / den
        s += t
    return s


def _log_terms(upper, lower, z, start, count):
    """log|t_n| increments and signs for n in [start, start+count)."""
    n = np.arange(start, start + count, dtype=float)
    logr = np.full(count, math.log(abs(z)))
    sgn = np.full(count, 1.0 if z > 0 else -1.0)
    for a in upper:
        v = a + n
        logr += np.log(np.abs(v))
        sgn *= np.sign(v)
    for b in lower:
        v = b + n
        logr -= np.log(np.abs(v))
        sgn *= np.sign(v)
    logr -= np.log(n + 1.0)
    return logr, sgn


def _series_chunks(upper, lower, z):
    """Yield (n_first, terms) chunks of the series starting with t_0 = 1.

    Terms are carried in log space with a running offset so that neither
    intermediate overflow nor underflow occurs before the final scaling.
    """
    logt, sgn, n = 0.0, 1.0, 0
    yield 0, np.array([1.0]), 0.0
    while n < _PFQ_CAP:
        logr, sr = _log_terms(upper, lower, z, n, _PFQ_CHUNK)
        ll = logt + np.cumsum(logr)
        ss = sgn * np.cumprod(sr)
        ref = float(ll.max())
        yield n + 1, ss * np.exp(ll - ref), ref
        logt, sgn = float(ll[-1]), float(ss[-1])
        n += _PFQ_CHUNK


def _sum_geometric(upper, lower, z):
    total = 0.0
    for first, terms, ref in _series_chunks(upper, lower, z):
        scaled = terms * math.exp(ref) if ref < 700 else None
        if scaled is None:
            raise DivergenceError("hypergeometric terms overflow double precision")
        total += float(np.sum(scaled))
        small = np.abs(scaled) <= _PFQ_RTOL * max(abs(total), 1e-300)
        # once terms have entered the ratio regime a small final term suffices
        if first > 0 and small[-1] and small[-min(8, len(small)):].all():
            return total
    raise DivergenceError("hypergeometric series did not converge within the term cap")


def _sum_algebraic(upper, lower, z, balance):
    """Series with algebraically decaying terms on |z| = 1.

    For z = 1 the terms eventually behave like ``C n^{-(1+balance)}``.  The
    first N terms are summed directly and the remainder is obtained from the
    Euler-Maclaurin formula applied to the log-gamma continuation ``t(x)`` of
    the term sequence, whose integral is evaluated by adaptive quadrature.
    The neglected Euler-Maclaurin term is of size ``t_N / N^5``.

    For z = -1 the alternating series is summed with repeated averaging of
    partial sums.
    """
    biggest = max([abs(v) for v in upper + lower] + [1.0])
    n_direct = int(max(2048, 40 * biggest))
    total = 0.0
    partials = []
    for first, terms, ref in _series_chunks(upper, lower, z):
        if ref > 700:
            raise DivergenceError("hypergeometric terms overflow double precision")
        keep = min(len(terms), n_direct - first)
        scaled = terms[:keep] * math.exp(ref)
        if z < 0:
            partials.extend((total + np.cumsum(scaled)).tolist())
        total += float(np.sum(scaled))
        if first + keep >= n_direct:
            last = float(scaled[-1])
            break
    if z < 0:
        arr = np.array(partials[-64:])
        for _ in range(40):
            arr = 0.5 * (arr[1:] + arr[:-1])
        return float(arr[-1])

    N = float(n_direct - 1)  # index of the last summed term
    if last == 0.0:
        return total

    def G(x):
        return (
            sum(sp.gammaln(a + x) for a in upper)
            - sum(sp.gammaln(b + x) for b in lower)
            - sp.gammaln(x + 1.0)
        )

    def dG(x, k):
        return (
            sum(sp.polygamma(k, a + x) for a in upper)
            - sum(sp.polygamma(k, b + x) for b in lower)
            - sp.polygamma(k, x + 1.0)
        )

    g_n = G(N)

    def t(x):
        return last * math.exp(G(x) - g_n)

    from scipy.integrate import quad

    # substitution x = N / u maps [N, inf) onto (0, 1]; the tail only has to be
    # accurate relative to the partial sum already accumulated
    integral, _ = quad(lambda u: t(N / u) * N / (u * u) if u > 0 else 0.0, 0.0, 1.0,
                       epsabs=1e-17 * abs(total), epsrel=1e-10, limit=200)
    g1, g2, g3 = dG(N, 0), dG(N, 1), dG(N, 2)
    d1 = last * g1
    d3 = last * (g3 + 3.0 * g1 * g2 + g1 ** 3)
    tail = integral - 0.5 * last - d1 / 12.0 + d3 / 720.0
    return total + tail


# ---------------------------------------------------------------------------
# Gegenbauer polynomials
# ---------------------------------------------------------------------------

def gegenbauer(alpha: float, m: int, t):
    """Gegenbauer polynomial ``C^alpha_m(t)`` evaluated by the three-term recurrence.

    For ``alpha == 0`` the degenerate family is replaced by its renormalized
    limit, the Chebyshev polynomial ``T_m``.
    """
    if m < 0:
        raise DomainError("degree must be nonnegative")
    tt = np.asarray(t, dtype=float)
    if np.any(np.abs(tt) > 1.0 + 1e-12):
        raise DomainError("Gegenbauer argument must lie in [-1, 1]")
    tt = np.clip(tt, -1.0, 1.0)
    if alpha == 0:
        out = np.cos(m * np.arccos(tt))
        return out if out.ndim else float(out)
    prev = np.ones_like(tt)
    if m == 0:
        return prev if prev.ndim else float(prev)
    cur = 2.0 * alpha * tt
    for n in range(1, m):
        prev, cur = cur, (2.0 * (n + alpha) * tt * cur - (n + 2.0 * alpha - 1.0) * prev) / (n + 1.0)
    return cur if cur.ndim else float(cur)


# ---------------------------------------------------------------------------
# spherical harmonics on S^2
# ---------------------------------------------------------------------------

def sph_index(m: int, l: int) -> int:
    return m * m + m + l


def sph_size(M: int) -> int:
    return (M + 1) ** 2


def _check_unit(X, tol=1e-10):
    nrm = np.linalg.norm(X, axis=-1)
    if np.any(np.abs(nrm - 1.0) > tol):
        raise DomainError("points must be unit vectors")


def sph_harm_all(M: int, X) -> np.ndarray:
    """All orthonormal harmonics of degree <= M at the rows of ``X``.

    Returns an ``(n, (M+1)**2)`` complex array.  The evaluation never forms
    polar angles: ``Y^m_l(x) = Q^l_m(z) (x + i y)^l`` for ``l >= 0`` where
    ``Q^l_m`` is a rescaled associated Legendre function obeying a stable
    recurrence in m.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    z = X[:, 2]
    w = X[:, 0] + 1j * X[:, 1]
    n = X.shape[0]
    out = np.empty((n, sph_size(M)), dtype=complex)
    qll = np.ones(n)
    wpow = np.ones(n, dtype=complex)
    for l in range(M + 1):
        if l > 0:
            qll = -math.sqrt((2 * l + 1) / (2 * l)) * qll
            wpow = wpow * w
        q_prev2 = None
        q_prev = qll
        out[:, sph_index(l, l)] = q_prev * wpow
        if l + 1 <= M:
            q_cur = math.sqrt(2 * l + 3) * z * qll
            out[:, sph_index(l + 1, l)] = q_cur * wpow
            q_prev2, q_prev = q_prev, q_cur
        for m in range(l + 2, M + 1):
            a = math.sqrt((4 * m * m - 1) / (m * m - l * l))
            b = math.sqrt(((m - 1) ** 2 - l * l) / (4 * (m - 1) ** 2 - 1))
            q_cur = a * (z * q_prev - b * q_prev2)
            out[:, sph_index(m, l)] = q_cur * wpow
            q_prev2, q_prev = q_prev, q_cur
    for m in range(1, M + 1):
        for l in range(1, m + 1):
            sgn = -1.0 if l % 2 else 1.0
            out[:, sph_index(m, -l)] = sgn * np.conj(out[:, sph_index(m, l)])
    return out


def sph_harm(m: int, l: int, x) -> complex:
    """Single orthonormal spherical harmonic ``Y^m_l(x)``."""
    if m < 0 or abs(l) > m:
        raise IndexError(f"order l={l} not allowed for degree m={m}")
    x = np.asarray(x, dtype=float)
    _check_unit(x)
    return complex(sph_harm_all(m, x.reshape(1, 3))[0, sph_index(m, l)])


# ---------------------------------------------------------------------------
# Wigner functions on SO(3)
# ---------------------------------------------------------------------------

def wigner_size(M: int) -> int:
    return sum((2 * m + 1) ** 2 for m in range(M + 1))


def wigner_index(m: int, k: int, l: int) -> int:
    offset = sum((2 * j + 1) ** 2 for j in range(m))
    return offset + (k + m) * (2 * m + 1) + (l + m)


@lru_cache(maxsize=32)
def _wigner_terms(M: int):
    """Monomial expansion of every basis function of degree <= M.

    Returns flat arrays (column, coefficient, ea, eac, eb, ebc) describing
    ``coef * a^ea * conj(a)^eac * b^eb * conj(b)^ebc`` summed into ``column``.
    """
    cols, coefs, ea, eac, eb, ebc = [], [], [], [], [], []
    for j in range(M + 1):
        J = 2 * j
        norm = math.sqrt(J + 1)
        for mp in range(-j, j + 1):
            for m in range(-j, j + 1):
                col = wigner_index(j, mp, m)
                lf = 0.5 * (
                    math.lgamma(j + mp + 1) + math.lgamma(j - mp + 1)
                    - math.lgamma(j + m + 1) - math.lgamma(j - m + 1)
                )
                pref = norm * math.exp(lf)
                for s in range(max(0, m + mp), min(j + m, j + mp) + 1):
                    pbb = j + mp - s
                    c = pref * math.comb(j + m, s) * math.comb(j - m, pbb)
                    if pbb % 2:
                        c = -c
                    cols.append(col)
                    coefs.append(c)
                    ea.append(s)
                    eb.append(j + m - s)
                    ebc.append(pbb)
                    eac.append(s - m - mp)
    return (
        np.array(cols, dtype=np.int64),
        np.array(coefs),
        np.array(ea, dtype=np.int64),
        np.array(eac, dtype=np.int64),
        np.array(eb, dtype=np.int64),
        np.array(ebc, dtype=np.int64),
    )


def _powers(v, maxp):
    out = np.empty((v.shape[0], maxp + 1), dtype=complex)
    out[:, 0] = 1.0
    for k in range(1, maxp + 1):
        out[:, k] = out[:, k - 1] * v
    return out


def wigner_all(M: int, Q, grad: bool = False):
    """All Wigner basis functions of degree <= M at unit quaternions ``Q``.

    Returns an ``(n, wigner_size(M))`` complex array.  With ``grad=True`` a
    second array of shape ``(n, 4, wigner_size(M))`` holds the ambient partial
    derivatives with respect to the quaternion components (w, x, y, z).
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    w, x, y, z = Q.T
    a = w - 1j * z
    b = y - 1j * x
    cols, coefs, ea, eac, eb, ebc = _wigner_terms(M)
    top = 2 * M
    Pa, Pac, Pb, Pbc = (_powers(v, top) for v in (a, np.conj(a), b, np.conj(b)))
    n = Q.shape[0]
    size = wigner_size(M)

    def scatter(vals):
        # vals: (n, T) -> (n, size); uses a sparse matrix product for speed
        from scipy.sparse import csr_matrix

        S = csr_matrix((np.ones(len(cols)), (np.arange(len(cols)), cols)), shape=(len(cols), size))
        return np.asarray(S.T.dot(vals.T).T)

    terms = coefs * Pa[:, ea] * Pac[:, eac] * Pb[:, eb] * Pbc[:, ebc]
    D = scatter(terms)
    if not grad:
        return D

    def dpow(P, e):
        shifted = P[:, np.maximum(e - 1, 0)]
        return e * shifted

    base_rest_a = Pac[:, eac] * Pb[:, eb] * Pbc[:, ebc]
    base_rest_ac = Pa[:, ea] * Pb[:, eb] * Pbc[:, ebc]
    base_rest_b = Pa[:, ea] * Pac[:, eac] * Pbc[:, ebc]
    base_rest_bc = Pa[:, ea] * Pac[:, eac] * Pb[:, eb]
    d_a = scatter(coefs * dpow(Pa, ea) * base_rest_a)
    d_ac = scatter(coefs * dpow(Pac, eac) * base_rest_ac)
    d_b = scatter(coefs * dpow(Pb, eb) * base_rest_b)
    d_bc = scatter(coefs * dpow(Pbc, ebc) * base_rest_bc)
    G = np.empty((n, 4, size), dtype=complex)
    G[:, 0] = d_a + d_ac
    G[:, 1] = -1j * d_b + 1j * d_bc
    G[:, 2] = d_b + d_bc
    G[:, 3] = -1j * d_a + 1j * d_ac
    return D, G


def wigner_D(m: int, k: int, l: int, q) -> complex:
    """Single orthonormal Wigner basis function ``D^m_{k,l}(q)``."""
    if m < 0 or abs(k) > m or abs(l) > m:
        raise IndexError(f"indices (k={k}, l={l}) not allowed for degree m={m}")
    q = np.asarray(q, dtype=float)
    _check_unit(q)
    return complex(wigner_all(m, q.reshape(1, 4))[0, wigner_index(m, k, l)])


# ---------------------------------------------------------------------------
# Bessel functions of half-integer order
# ---------------------------------------------------------------------------

_MAX_ABS_Z = 1e4
_MAX_IMAG = 700.0


def _sph_j01(z):
    s, c = np.sin(z), np.cos(z)
    j0 = s / z
    j1 = s / z**2 - c / z
    return j0, j1


def spherical_yn(n: int, z) -> np.ndarray:
    """Spherical Bessel function of the second kind by upward recurrence."""
    z = np.asarray(z, dtype=complex)
    s, c = np.sin(z), np.cos(z)
    y0 = -c / z
    if n == 0:
        return y0
    y1 = -c / z**2 - s / z
    for k in range(1, n):
        y0, y1 = y1, (2 * k + 1) / z * y1 - y0
    return y1


def spherical_jn(n: int, z) -> np.ndarray:
    """Spherical Bessel function of the first kind.

    Upward recurrence is used where the order does not exceed ``|z|``;
    elsewhere a Miller downward recurrence normalized against ``j_0`` or
    ``j_1`` is used.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.zeros(z.shape, dtype=complex)
    zero = z == 0
    if n == 0:
        out[zero] = 1.0
    nz = ~zero
    az = np.abs(z)
    up = nz & (az >= n)
    down = nz & ~up
    if np.any(up):
        zu = z[up]
        j0, j1 = _sph_j01(zu)
        if n == 0:
            out[up] = j0
        else:
            for k in range(1, n):
                j0, j1 = j1, (2 * k + 1) / zu * j1 - j0
            out[up] = j1
    if np.any(down):
        zd = z[down]
        start = n + 30 + int(math.ceil(float(np.max(np.abs(zd))))) + int(math.sqrt(40 * (n + 1)))
        f_next = np.zeros_like(zd)
        f_cur = np.full_like(zd, 1e-30)
        fn = None
        for k in range(start, 0, -1):
            f_prev = (2 * k + 1) / zd * f_cur - f_next
            f_next, f_cur = f_cur, f_prev
            # f_cur is now the value at index k-1, f_next at index k
            big = np.abs(f_cur) > 1e250
            if np.any(big):
                scale = np.where(big, 1e-250, 1.0)
                f_cur = f_cur * scale
                f_next = f_next * scale
                if fn is not None:
                    fn = fn * scale
            if k - 1 == n:
                fn = f_cur.copy()
        f0, f1 = f_cur, f_next
        j0, j1 = _sph_j01(zd)
        small = np.abs(zd) < 1e-3
        # series for tiny arguments keeps full relative accuracy
        j0 = np.where(small, 1 - zd**2 / 6 + zd**4 / 120, j0)
        j1 = np.where(small, zd / 3 - zd**3 / 30 + zd**5 / 840, j1)
        use0 = np.abs(f0) * 1.0 >= np.abs(f1) * 0.5
        ratio = np.where(use0, j0 / np.where(f0 == 0, 1, f0), j1 / np.where(f1 == 0, 1, f1))
        out[down] = fn * ratio
    return out


def _check_bessel_arg(z):
    if np.any(np.abs(z) > _MAX_ABS_Z):
        raise DomainError("Bessel argument modulus exceeds 1e4")
    if np.any(np.abs(np.imag(z)) > _MAX_IMAG):
        raise BesselOverflowError("Bessel value would overflow double precision")


def bessel_j_halfint(nu: float, z):
    """Bessel function ``J_nu(z)`` of half-integer (or integer) order.

    Half-integer orders use ``J_{n+1/2}(z) = sqrt(2z/pi) j_n(z)`` and
    ``J_{-n-1/2}(z) = (-1)^{n+1} sqrt(2z/pi) y_n(z)`` on the principal branch.
    Integer orders are delegated to :func:`scipy.special.jv`.
    """
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_bessel_arg(zz)
    twice = 2.0 * float(nu)
    if twice != round(twice):
        raise DomainError(f"order {nu} is neither integer nor half-integer")
    if round(twice) % 2 == 0:
        out = sp.jv(float(nu), zz)
    else:
        n_half = int(round(twice))
        nz = zz != 0
        out = np.zeros_like(zz)
        if n_half > 0:
            n = (n_half - 1) // 2
            zn = zz[nz]
            out[nz] = np.sqrt(2.0 * zn / np.pi) * spherical_jn(n, zn)
        else:
            if np.any(~nz):
                raise DomainError("negative half-integer order is singular at z = 0")
            n = (-n_half - 1) // 2
            sgn = -1.0 if n % 2 == 0 else 1.0  # (-1)^(n+1)
            out = sgn * np.sqrt(2.0 * zz / np.pi) * spherical_yn(n, zz)
    if not np.all(np.isfinite(out)):
        raise BesselOverflowError("non-finite Bessel value")
    return complex(out[0]) if scalar else out


def bessel_j_halfint_deriv(nu: float, z):
    """Derivative ``J_nu'(z) = J_{nu-1}(z) - (nu/z) J_nu(z)``."""
    zz = np.asarray(z, dtype=complex)
    return bessel_j_halfint(nu - 1, zz) - nu / zz * bessel_j_halfint(nu, zz)
