import math

import numpy as np
import pytest

from specdisc.errors import DomainError
from specdisc.grassmann import (
    basis_Y,
    c_lambda,
    canonicalize_pair,
    embed,
    euler_rodrigues,
    haar_sample,
    isoclinic,
    lambda_basis,
    left_isoclinic,
    lift,
    lift_matrix,
    principal_angles,
    q_lambda,
)
from specdisc.specfun import sph_harm_all, sph_index
from specdisc.spectra import g24_coeff, partitions

from conftest import random_unit

I_MINUS = np.diag([-1.0, 1.0, 1.0, 1.0])


def pairs(rng, n):
    return random_unit(rng, n), random_unit(rng, n)


def tensor_values(lam, x, y):
    deg = max(sum(lam), 0)
    A, B = sph_harm_all(deg, x), sph_harm_all(deg, y)
    cols = [A[:, sph_index(m, k)] * B[:, sph_index(n, l)] for m, n, k, l in lambda_basis(lam)]
    return np.stack(cols, axis=1)


class TestEmbedding:
    def test_e1_e1(self):
        e1 = np.array([1.0, 0, 0])
        np.testing.assert_allclose(embed(e1, e1), np.diag([1.0, 1.0, 0, 0]), atol=1e-15)

    def test_projector_invariants(self, rng):
        P = embed(*pairs(rng, 1000))
        np.testing.assert_allclose(P, np.swapaxes(P, -1, -2), atol=0)
        assert np.max(np.linalg.norm(P @ P - P, axis=(1, 2))) <= 1e-12
        np.testing.assert_allclose(np.trace(P, axis1=1, axis2=2), 2.0, atol=1e-12)

    def test_sign_identification(self, rng):
        x, y = pairs(rng, 50)
        np.testing.assert_allclose(embed(-x, -y), embed(x, y), atol=1e-15)

    def test_inner_products(self, rng):
        x, y = pairs(rng, 1000)
        u, v = pairs(rng, 1000)
        lhs = np.einsum("nij,nij->n", embed(x, y), embed(u, v))
        rhs = 1 + np.sum(x * u, 1) * np.sum(y * v, 1)
        np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_chordal_isometry(self, rng):
        x, y = pairs(rng, 1000)
        u, v = pairs(rng, 1000)
        lhs = np.linalg.norm(embed(x, y) - embed(u, v), axis=(1, 2))
        rhs = np.linalg.norm(x[:, :, None] * y[:, None, :] - u[:, :, None] * v[:, None, :], axis=(1, 2))
        np.testing.assert_allclose(lhs, rhs, atol=1e-10)

    def test_complement(self, rng):
        x, y = pairs(rng, 200)
        np.testing.assert_allclose(np.eye(4) - embed(x, y), embed(-x, y), atol=1e-12)

    def test_swap(self, rng):
        x, y = pairs(rng, 200)
        np.testing.assert_allclose(I_MINUS @ embed(x, y) @ I_MINUS.T, embed(y, x), atol=1e-12)


class TestLift:
    def test_round_trip(self, rng):
        x, y = pairs(rng, 10_000)
        P = embed(x, y)
        u, v = lift(P)
        assert np.max(np.linalg.norm(embed(u, v) - P, axis=(1, 2))) <= 1e-9
        same = np.allclose(u, x, atol=1e-9) and np.allclose(v, y, atol=1e-9)
        flip = np.all(np.isclose(u, -x, atol=1e-9) | np.isclose(u, x, atol=1e-9))
        assert same or flip

    def test_lift_is_rank_one_product(self, rng):
        x, y = pairs(rng, 100)
        L = lift_matrix(embed(x, y))
        np.testing.assert_allclose(L, x[:, :, None] * y[:, None, :], atol=1e-13)
        s = np.linalg.svd(L, compute_uv=False)
        np.testing.assert_allclose(s, np.tile([1.0, 0, 0], (100, 1)), atol=1e-10)

    def test_e1_round_trip(self):
        u, v = lift(np.diag([1.0, 1.0, 0, 0]))
        np.testing.assert_allclose(u, [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(v, [1, 0, 0], atol=1e-15)

    def test_rejects_non_projector(self):
        with pytest.raises(DomainError):
            lift(np.eye(4))

    def test_canonical(self):
        x, y = canonicalize_pair([0.0, -0.6, 0.8], [1.0, 0, 0])
        np.testing.assert_allclose(x, [0, 0.6, -0.8])
        np.testing.assert_allclose(y, [-1.0, 0, 0])


class TestRotations:
    def test_identity(self):
        e = np.array([1.0, 0, 0, 0])
        np.testing.assert_allclose(left_isoclinic(e), np.eye(4))
        np.testing.assert_allclose(euler_rodrigues(e), np.eye(3))

    def test_equivariance(self, rng):
        A, B = random_unit(rng, 1000, 4), random_unit(rng, 1000, 4)
        x, y = pairs(rng, 1000)
        for a, b, xi, yi in zip(A, B, x, y):
            R = isoclinic(a, b)
            np.testing.assert_allclose(R @ R.T, np.eye(4), atol=1e-12)
            lhs = R @ embed(xi, yi) @ R.T
            rhs = embed(euler_rodrigues(a) @ xi, euler_rodrigues(b) @ yi)
            assert np.max(np.abs(lhs - rhs)) <= 1e-10

    def test_special_orthogonal(self, rng):
        a, b = random_unit(rng, 2, 4)
        assert np.linalg.det(isoclinic(a, b)) == pytest.approx(1.0)
        S = euler_rodrigues(a)
        assert np.linalg.det(S) == pytest.approx(1.0)
        np.testing.assert_allclose(S @ S.T, np.eye(3), atol=1e-14)


class TestPrincipalAngles:
    def test_trivial_cases(self, rng):
        x, y = pairs(rng, 1)
        P = embed(x[0], y[0])
        t1, t2 = principal_angles(P, P)
        assert t1 == pytest.approx(0, abs=1e-7) and t2 == pytest.approx(0, abs=1e-7)
        t1, t2 = principal_angles(P, np.eye(4) - P)
        assert t1 == pytest.approx(math.pi / 2) and t2 == pytest.approx(math.pi / 2)

    def test_inner_products(self, rng):
        x, y = pairs(rng, 500)
        u, v = pairs(rng, 500)
        t1, t2 = principal_angles(embed(x, y), embed(u, v))
        got = np.sort(np.abs(np.stack([np.sum(x * u, 1), np.sum(y * v, 1)], 1)), axis=1)
        want = np.sort(np.abs(np.stack([np.cos(t1 + t2), np.cos(t1 - t2)], 1)), axis=1)
        np.testing.assert_allclose(got, want, atol=1e-7)

    def test_chordal_distance(self, rng):
        x, y = pairs(rng, 200)
        u, v = pairs(rng, 200)
        P, Q = embed(x, y), embed(u, v)
        t1, t2 = principal_angles(P, Q)
        np.testing.assert_allclose(np.linalg.norm(P - Q, axis=(1, 2)) ** 2,
                                   2 * (np.sin(t1) ** 2 + np.sin(t2) ** 2), atol=1e-10)


class TestHarmonics:
    def test_constant(self, rng):
        x, y = pairs(rng, 1)
        assert basis_Y(0, 0, 0, 0, embed(x[0], y[0])) == pytest.approx(1.0)

    def test_parity_error(self):
        with pytest.raises(DomainError):
            basis_Y(1, 0, 0, 0, np.diag([1.0, 1, 0, 0]))

    def test_sign_invariance(self, rng):
        x, y = pairs(rng, 1000)
        for m, n in ((1, 1), (2, 0), (3, 1)):
            A = sph_harm_all(m, x)[:, sph_index(m, 1 if m else 0)] * sph_harm_all(n, y)[:, sph_index(n, 0)]
            B = sph_harm_all(m, -x)[:, sph_index(m, 1 if m else 0)] * sph_harm_all(n, -y)[:, sph_index(n, 0)]
            np.testing.assert_allclose(A, B, atol=1e-12)

    def test_monte_carlo_gram(self):
        x, y = haar_sample(11, n=200_000)
        V = tensor_values((1, 0), x, y)
        assert V.shape[1] == 9
        gram = V.T @ np.conj(V) / len(x)
        assert np.max(np.abs(gram - np.eye(9))) <= 5e-2

    def test_basis_at_projector(self, rng):
        x, y = pairs(rng, 1)
        P = embed(x[0], y[0])
        want = tensor_values((2, 1), x, y)[0]
        got = [basis_Y(m, n, k, l, P) for m, n, k, l in lambda_basis((2, 1))]
        np.testing.assert_allclose(got, want, atol=1e-12)

    @pytest.mark.parametrize("lam", [(1, 1), (2, 0), (2, 1), (3, 0), (3, 2)])
    def test_reproducing_kernel(self, lam, rng):
        x, y = pairs(rng, 100)
        u, v = pairs(rng, 100)
        lhs = np.sum(tensor_values(lam, x, y) * np.conj(tensor_values(lam, u, v)), axis=1)
        rhs = q_lambda(lam, embed(x, y), embed(u, v))
        np.testing.assert_allclose(lhs.imag, 0, atol=1e-8)
        np.testing.assert_allclose(lhs.real, rhs, atol=1e-8)
        assert len(lambda_basis(lam)) == c_lambda(lam)

    def test_diagonal_value(self, rng):
        P = embed(*[v[0] for v in pairs(rng, 1)])
        assert q_lambda((2, 1), P, P) == pytest.approx(42)
        assert q_lambda((0, 0), P, embed(*[v[0] for v in pairs(rng, 1)])) == pytest.approx(1.0)

    def test_dimension_formula(self):
        for l1, l2 in partitions(6):
            m, n = l1 + l2, l1 - l2
            assert c_lambda((l1, l2)) == (2 - (l2 == 0)) * (2 * m + 1) * (2 * n + 1)


class TestHaar:
    def test_mean_projector(self):
        x, y = haar_sample(5, n=100_000)
        P = embed(x, y)
        np.testing.assert_allclose(np.trace(P, axis1=1, axis2=2).mean(), 2.0, atol=1e-12)
        np.testing.assert_allclose(P.mean(axis=0), np.eye(4) / 2, atol=1e-2)

    def test_mean_distance(self):
        x, y = haar_sample(6, n=100_000)
        u, v = haar_sample(7, n=100_000)
        d = np.linalg.norm(embed(x, y) - embed(u, v), axis=(1, 2)) / math.sqrt(2)
        assert d.mean() == pytest.approx(g24_coeff(1, (0, 0)), abs=1e-2)

    def test_single_sample(self):
        x, y = haar_sample(3)
        assert x.shape == (3,) and y.shape == (3,)
        assert np.linalg.norm(x) == pytest.approx(1.0)
