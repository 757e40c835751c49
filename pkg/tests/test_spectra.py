import json
import math

import numpy as np
import pytest
from scipy import integrate

from specdisc.errors import PoleError
from specdisc.kernels import KernelId, distance_constant, eval_kernel, k3r
from specdisc.spectra import (
    SpectralTable,
    brownian_eigs,
    coeff_table,
    cos_branch_root,
    g24_coeff,
    g24_decay_constant,
    interval_eigs,
    k3r_sphere_decay,
    kernel_table,
    partitions,
    so3_coeff,
    so3_decay_constant,
    sphere_coeff,
    sphere_decay_constant,
)

from oracles import g24_coeff_oracle, so3_coeff_oracle, sphere_coeff_oracle


class TestSphere:
    def test_examples(self):
        assert sphere_coeff(3, 1, 0) == pytest.approx(2 * math.sqrt(2) / 3, rel=1e-14)
        assert sphere_coeff(3, 1, 1) == pytest.approx(-2 * math.sqrt(2) / 15, rel=1e-14)
        assert sphere_coeff(3, 2, 2) == 0.0

    @pytest.mark.parametrize("p", [1, 3, -1])
    def test_oracle(self, p):
        for m in range(21):
            assert abs(sphere_coeff(3, p, m) - sphere_coeff_oracle(p, m)) <= 1e-9

    def test_invalid_exponent(self):
        with pytest.raises(PoleError):
            sphere_coeff(3, -2, 1)

    @pytest.mark.parametrize("p", [1.0, 0.5, 3.0])
    def test_decay(self, p):
        c = sphere_decay_constant(3, p)
        devs = [abs(m ** (p + 2) * abs(sphere_coeff(3, p, m)) / c - 1) for m in (50, 100, 200)]
        assert devs[-1] <= 0.05
        assert devs[0] >= devs[1] >= devs[2]

    def test_higher_dimension_large_degree(self):
        assert np.isfinite(sphere_coeff(7, 1.0, 1500))


class TestSO3:
    def test_examples(self):
        assert so3_coeff(1, 0) == pytest.approx(16 / (3 * math.pi), rel=1e-14)
        assert so3_coeff(2, 2) == 0.0
        assert abs(100**4 * abs(so3_coeff(1, 100)) * math.pi - 1) < 0.05

    def test_oracle(self):
        for p in (1.0, 2.5):
            for m in range(8):
                assert so3_coeff(p, m) == pytest.approx(so3_coeff_oracle(p, m), abs=1e-11)

    def test_decay(self):
        c = so3_decay_constant(1.0)
        devs = [abs(m**4 * abs(so3_coeff(1.0, m)) / c - 1) for m in (50, 100, 200)]
        assert devs[-1] <= 0.05 and devs[0] >= devs[1] >= devs[2]

    def test_pole(self):
        with pytest.raises(PoleError):
            so3_coeff(-3.0, 1)


class TestG24:
    def test_termination(self):
        assert g24_coeff(2, (2, 0)) == 0.0
        assert g24_coeff(4, (2, 1)) == 0.0

    @pytest.mark.parametrize("lam", [(0, 0), (1, 1), (2, 0), (3, 1)])
    def test_oracle(self, lam):
        assert abs(g24_coeff(1, lam) - g24_coeff_oracle(1, lam)) <= 1e-9

    @pytest.mark.parametrize("ray", [lambda n: (n, 0), lambda n: (n, n)])
    def test_decay_ratio(self, ray):
        def scaled(n):
            lam = ray(n)
            return math.hypot(*lam) ** 5 * abs(g24_coeff(1, lam))

        assert abs(scaled(40) / scaled(20) - 1) <= 0.1
        assert g24_decay_constant(1.0) > 0

    def test_invalid_partition(self):
        with pytest.raises(ValueError):
            g24_coeff(1, (1, 2))

    def test_partitions(self):
        parts = partitions(4)
        assert len(parts) == len(set(parts)) == 9
        assert all(l1 >= l2 >= 0 and l1 + l2 <= 4 for l1, l2 in parts)


class TestKernelTable:
    def test_sphere_constant_term(self):
        assert kernel_table("sphere", 5)[0] == pytest.approx(2 / 3, rel=1e-14)

    @pytest.mark.parametrize("manifold", ["sphere", "so3", "g24"])
    def test_positive(self, manifold):
        t = kernel_table(manifold, 12)
        assert all(v > 0 for v in t.values())

    def test_g24_constant_term(self):
        t = kernel_table("g24", 2)
        expected = math.sqrt(2) - distance_constant(16) * math.sqrt(2) * g24_coeff(1, (0, 0))
        assert t[(0, 0)] == pytest.approx(expected, rel=1e-14)

    def test_so3_constant_term_monte_carlo(self):
        rng = np.random.default_rng(1)
        q = rng.standard_normal((400_000, 4))
        q /= np.linalg.norm(q, axis=1, keepdims=True)
        t = q[:, 0]  # inner product with the identity quaternion
        dist = 2 * math.sqrt(2) * np.sqrt(1 - t * t)
        mc = math.sqrt(3) - distance_constant(9) * dist
        assert kernel_table("so3", 0)[0] == pytest.approx(mc.mean(), abs=4 * mc.std() / math.sqrt(len(mc)))

    def test_json_round_trip(self):
        for manifold in ("sphere", "so3", "g24"):
            t = coeff_table(manifold, 1.0, 4)
            back = SpectralTable.from_dict(json.loads(t.to_json()))
            assert back.entries == t.entries and back.manifold == manifold and back.M == 4

    def test_sphere_table_labels_dimension(self):
        assert coeff_table("sphere", 1.0, 2, d=5).to_dict()["manifold"] == "sphere(5)"


class TestInterval:
    def test_cos_root(self):
        assert cos_branch_root(1) == pytest.approx(0.8603335890, abs=1e-9)
        for k in range(1, 6):
            u = cos_branch_root(k)
            assert abs(u * math.tan(u) - 1) < 1e-10

    def test_sine_branch(self):
        sines = [e for e in interval_eigs(1.0, 10) if e.kind == "sin"]
        assert sines[0].value == pytest.approx(4 / math.pi**2)

    def test_brownian(self):
        assert brownian_eigs(1.0, 3)[0].value == pytest.approx(4 / math.pi**2)

    def test_sorted(self):
        vals = [e.value for e in interval_eigs(2.0, 12)]
        assert vals == sorted(vals, reverse=True)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_mercer_interval(self, s):
        eigs = interval_eigs(s, 400)
        x = np.linspace(-s, s, 7)
        X, Y = np.meshgrid(x, x)
        approx = sum(e.value * e(X) * e(Y) for e in eigs)
        exact = eval_kernel(KernelId.interval(s), X, Y)
        np.testing.assert_allclose(approx, exact, atol=5e-3)

    @pytest.mark.parametrize("s", [0.5, 2.0])
    def test_eigenfunctions_orthonormal(self, s):
        eigs = interval_eigs(s, 6)
        for i, a in enumerate(eigs):
            for j, b in enumerate(eigs):
                val, _ = integrate.quad(lambda x: a(x) * b(x), -s, s, limit=200)
                assert val == pytest.approx(float(i == j), abs=1e-10)

    def test_eigen_equation(self):
        s = 1.5
        kid = KernelId.interval(s)
        for e in interval_eigs(s, 4):
            for x in (-1.0, 0.3):
                val, _ = integrate.quad(lambda y: eval_kernel(kid, x, y) * e(y), -s, s, points=[x], limit=200)
                assert val == pytest.approx(e.value * e(x), abs=1e-10)

    def test_brownian_mercer(self):
        eigs = brownian_eigs(1.0, 400)
        x = np.linspace(0, 1, 6)
        X, Y = np.meshgrid(x, x)
        approx = sum(e.value * e(X) * e(Y) for e in eigs)
        np.testing.assert_allclose(approx, np.minimum(X, Y), atol=2e-3)


class TestK3r:
    def test_constant_term(self):
        r = 1.0
        vol = 4 * math.pi * r**3 / 3
        oracle, _ = integrate.quad(lambda t: 0.5 * vol * k3r(math.sqrt(2 - 2 * t), 2 * r), -1, 1)
        assert k3r_sphere_decay(r, 0)[0] == pytest.approx(oracle, rel=1e-12)

    def test_even_terms_vanish(self):
        assert sphere_coeff(3, 0, 3) == 0.0 and sphere_coeff(3, 2, 3) == 0.0

    def test_cubic_decay(self):
        a = k3r_sphere_decay(1.0, 80)
        assert abs((40**3 * a[40]) / (80**3 * a[80]) - 1) <= 0.1


@pytest.mark.parametrize("lam_of_n", [lambda n: (n, 0), lambda n: (n // 2, n // 2)])
def test_g24_large_degree_does_not_underflow(lam_of_n):
    # |lambda|^5 a_lambda settles to a negative constant along each ray
    scaled = [g24_coeff(1.0, lam_of_n(n)) * n**5 for n in (160, 320)]
    assert all(v < 0 for v in scaled)
    assert scaled[1] == pytest.approx(scaled[0], rel=0.02)


def test_g24_noninteger_p_far_out_stays_finite():
    v = g24_coeff(0.5, (250, 40))
    assert v < 0 and math.isfinite(v)
