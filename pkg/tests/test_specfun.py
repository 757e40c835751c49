import math

import numpy as np
import pytest
from numpy.polynomial.legendre import leggauss
from scipy import special

from specdisc.errors import DivergenceError, DomainError, PoleError
from specdisc.specfun import (
    bessel_j_halfint,
    bessel_j_halfint_deriv,
    gamma_ratio,
    gegenbauer,
    pfq,
    pochhammer,
    sph_harm,
    sph_harm_all,
    sph_index,
    wigner_D,
    wigner_all,
    wigner_index,
    wigner_size,
)

from conftest import random_unit


def quat_to_matrix(q):
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


class TestGegenbauer:
    def test_value_at_one_is_binomial(self):
        assert gegenbauer(1, 2, 1.0) == pytest.approx(3.0)
        for alpha in (0.5, 1.0, 1.5, 2.5):
            for m in range(8):
                assert gegenbauer(alpha, m, 1.0) == pytest.approx(special.binom(m + 2 * alpha - 1, m))

    def test_degree_zero(self):
        assert gegenbauer(0.5, 0, 0.37) == 1.0

    def test_legendre_p2_at_zero(self):
        assert gegenbauer(0.5, 2, 0.0) == pytest.approx(-0.5, abs=1e-15)

    def test_matches_scipy(self):
        t = np.linspace(-1, 1, 41)
        for alpha in (0.5, 1.0, 3.5):
            for m in (1, 5, 12):
                np.testing.assert_allclose(gegenbauer(alpha, m, t), special.eval_gegenbauer(m, alpha, t), atol=1e-11)

    def test_alpha_zero_is_chebyshev(self):
        t = np.linspace(-1, 1, 17)
        for m in range(6):
            np.testing.assert_allclose(gegenbauer(0.0, m, t), special.eval_chebyt(m, t), atol=1e-13)

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            gegenbauer(0.5, 3, 1.1)


class TestSphericalHarmonics:
    def test_constant(self, rng):
        x = random_unit(rng, 1)[0]
        assert sph_harm(0, 0, x) == pytest.approx(1.0)

    def test_sum_of_squares(self, rng):
        X = random_unit(rng, 5)
        Y = sph_harm_all(3, X)
        block = Y[:, sph_index(3, -3): sph_index(3, 3) + 1]
        np.testing.assert_allclose(np.sum(np.abs(block) ** 2, axis=1), 7.0, rtol=1e-12)

    def test_normalization_by_quadrature(self):
        z, w = leggauss(12)
        phi = 2 * np.pi * np.arange(24) / 24
        Z, P = np.meshgrid(z, phi, indexing="ij")
        s = np.sqrt(1 - Z**2)
        X = np.stack([s * np.cos(P), s * np.sin(P), Z], axis=-1).reshape(-1, 3)
        W = (np.repeat(w, 24) / 2 / 24)
        Y = sph_harm_all(4, X)
        gram = (Y * W[:, None]).T @ np.conj(Y)
        np.testing.assert_allclose(gram, np.eye(Y.shape[1]), atol=1e-12)
        north = np.array([0.0, 0.0, 1.0])
        assert abs(sph_harm(1, 0, north)) == pytest.approx(math.sqrt(3.0))

    def test_addition_theorem(self, rng):
        X, Yp = random_unit(rng, 200), random_unit(rng, 200)
        A, B = sph_harm_all(10, X), sph_harm_all(10, Yp)
        ip = np.sum(X * Yp, axis=1)
        for m in range(11):
            sl = slice(m * m, (m + 1) ** 2)
            lhs = np.sum(A[:, sl] * np.conj(B[:, sl]), axis=1)
            np.testing.assert_allclose(lhs, (2 * m + 1) * gegenbauer(0.5, m, ip), atol=1e-10)

    def test_order_out_of_range(self):
        with pytest.raises(IndexError):
            sph_harm(2, 3, np.array([0.0, 0.0, 1.0]))

    def test_rejects_non_unit(self):
        with pytest.raises(DomainError):
            sph_harm(1, 0, np.array([0.0, 0.0, 2.0]))


class TestWigner:
    def test_constant(self, rng):
        q = random_unit(rng, 1, 4)[0]
        assert wigner_D(0, 0, 0, q) == pytest.approx(1.0)

    def test_sum_of_squares(self, rng):
        Q = random_unit(rng, 4, 4)
        D = wigner_all(2, Q)
        blk = [wigner_index(2, k, l) for k in range(-2, 3) for l in range(-2, 3)]
        np.testing.assert_allclose(np.sum(np.abs(D[:, blk]) ** 2, axis=1), 25.0, rtol=1e-12)

    def test_size_and_index(self):
        M = 4
        idx = {wigner_index(m, k, l) for m in range(M + 1) for k in range(-m, m + 1) for l in range(-m, m + 1)}
        assert idx == set(range(wigner_size(M)))

    def test_monte_carlo_orthonormality(self):
        Q = random_unit(np.random.default_rng(7), 200_000, 4)
        D = wigner_all(1, Q)
        val = np.mean(np.abs(D[:, wigner_index(1, 0, 0)]) ** 2)
        assert val == pytest.approx(1.0, abs=1e-2)

    def test_addition_theorem(self, rng):
        Q, P = random_unit(rng, 100, 4), random_unit(rng, 100, 4)
        A, B = wigner_all(6, Q), wigner_all(6, P)
        for i in range(100):
            R1, R2 = quat_to_matrix(Q[i]), quat_to_matrix(P[i])
            c = np.clip((np.trace(R1.T @ R2) - 1) / 2, -1, 1)
            half = math.cos(math.acos(c) / 2)
            for m in range(7):
                sl = slice(wigner_index(m, -m, -m), wigner_index(m, m, m) + 1)
                lhs = np.sum(A[i, sl] * np.conj(B[i, sl]))
                assert abs(lhs - (2 * m + 1) * gegenbauer(1.0, 2 * m, half)) < 1e-9

    def test_even_in_quaternion_sign(self, rng):
        Q = random_unit(rng, 6, 4)
        np.testing.assert_allclose(wigner_all(3, Q), wigner_all(3, -Q), atol=1e-13)

    def test_order_out_of_range(self):
        with pytest.raises(IndexError):
            wigner_D(1, 2, 0, np.array([1.0, 0, 0, 0]))


class TestBessel:
    def test_closed_forms(self):
        assert bessel_j_halfint(0.5, math.pi) == pytest.approx(0.0, abs=1e-16)
        assert bessel_j_halfint(0.5, math.pi / 2) == pytest.approx(2 / math.pi, rel=1e-14)
        assert bessel_j_halfint(-0.5, 1.0) == pytest.approx(math.sqrt(2 / math.pi) * math.cos(1.0), rel=1e-14)

    @pytest.mark.parametrize("nu", [-7.5, -2.5, 0.5, 3.5, 10.5, 25.5])
    def test_matches_scipy_real(self, nu):
        z = np.linspace(0.2, 40, 60)
        np.testing.assert_allclose(bessel_j_halfint(nu, z), special.jv(nu, z), rtol=1e-10, atol=1e-14)

    def test_complex_argument(self):
        z = np.array([1 + 1j, 3 - 2j, 0.5j, 10 * np.exp(2j * np.pi / 5)])
        for nu in (-3.5, 1.5, 6.5):
            np.testing.assert_allclose(bessel_j_halfint(nu, z), special.jv(nu, z), rtol=1e-10)

    def test_integer_order(self):
        z = np.linspace(0.1, 10, 9)
        np.testing.assert_allclose(bessel_j_halfint(2, z), special.jv(2, z), rtol=1e-12)

    def test_wronskian(self):
        z = np.random.default_rng(3).uniform(0.1, 20, 50)
        nu = 0.5
        w = bessel_j_halfint(nu, z) * bessel_j_halfint_deriv(-nu, z) - bessel_j_halfint_deriv(nu, z) * bessel_j_halfint(-nu, z)
        np.testing.assert_allclose(w, -2 * math.sin(nu * math.pi) / (math.pi * z), atol=1e-10)

    def test_negative_order_at_zero(self):
        with pytest.raises(DomainError):
            bessel_j_halfint(-0.5, 0.0)

    def test_overflow(self):
        with pytest.raises(OverflowError):
            bessel_j_halfint(0.5, 900j)

    def test_argument_too_large(self):
        with pytest.raises(DomainError):
            bessel_j_halfint(0.5, 2e4)


class TestHypergeometric:
    def test_terminating(self):
        assert pfq([-1, -0.5], [-1.5], 1.0) == pytest.approx(2 / 3, abs=1e-15)

    def test_zero_argument(self):
        assert pfq([0.3, 2.0, 7.0], [1.5, 0.2], 0.0) == 1.0

    def test_gauss_theorem(self):
        a, b, c = -2.0, 0.5, 3.0
        gauss = math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
        assert pfq([a, b], [c], 1.0) == pytest.approx(gauss, rel=1e-14)

    def test_gauss_theorem_nonterminating(self):
        a, b, c = 0.3, 0.4, 2.5
        gauss = math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
        assert pfq([a, b], [c], 1.0) == pytest.approx(gauss, rel=1e-10)

    def test_matches_scipy_inside_disk(self):
        for z in (-0.9, -0.3, 0.4, 0.95):
            assert pfq([0.7, 1.3], [2.2], z) == pytest.approx(special.hyp2f1(0.7, 1.3, 2.2, z), rel=1e-13)

    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_terminating_polynomial(self, d):
        a, b, c = -(d + 1) / 4, -(d - 1) / 4, -d / 2
        for r in np.linspace(0, 1, 20):
            direct = sum(
                pochhammer(a, n) * pochhammer(b, n) / (pochhammer(c, n) * math.factorial(n)) * r ** (2 * n)
                for n in range(d + 1)
                if pochhammer(c, n) != 0
            )
            assert abs(pfq([a, b], [c], r * r) - direct) <= 1e-14

    def test_divergent(self):
        with pytest.raises(DivergenceError):
            pfq([1.0, 1.0], [1.5], 1.0)
        with pytest.raises(DivergenceError):
            pfq([1.0, 1.0, 1.0], [2.0], 0.5)
        with pytest.raises(DivergenceError):
            pfq([0.5, 0.5], [1.0], 1.5)

    def test_pole(self):
        with pytest.raises(PoleError):
            pfq([1.0, 2.0], [-2.0], 0.5)
        # termination before the pole is fine
        assert pfq([-1.0, 2.0], [-2.0], 0.5) == pytest.approx(1 + (-1 * 2 / -2) * 0.5)


class TestGammaHelpers:
    def test_pochhammer(self):
        assert pochhammer(7.3, 0) == 1.0
        assert pochhammer(-1, 2) == 0.0
        assert pochhammer(0.5, 3) == pytest.approx(0.5 * 1.5 * 2.5)

    def test_gamma_ratio(self):
        assert gamma_ratio(0.5, 3.5) == pytest.approx(8 / 15, rel=1e-14)
        assert gamma_ratio(-0.5, 2.0) == pytest.approx(math.gamma(-0.5))
        assert gamma_ratio(300.5, 300.0) == pytest.approx(math.exp(special.gammaln(300.5) - special.gammaln(300.0)), rel=1e-12)

    def test_gamma_ratio_pole(self):
        with pytest.raises(PoleError):
            gamma_ratio(1.5, -2.0)
