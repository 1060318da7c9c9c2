import math

import numpy as np
import pytest

from oracles import bisect_cubic_roots, grid_prox, h_direct
from tjlc.lcnorm import (
    LCParams,
    WeightScheme,
    cubic_real_roots,
    g_cap,
    lc_norm,
    prox_objective,
    scalar_prox,
    tensor_prox,
    weights,
    weights_from_sigma,
)
from tjlc.talgebra import dft_mode3, slice_singular_values

P = LCParams()


class TestParams:
    @pytest.mark.parametrize("kw", [{"nu": 0}, {"vartheta": -1}, {"c": 0}])
    def test_rejects_nonpositive(self, kw):
        with pytest.raises(ValueError):
            LCParams(**kw)

    def test_scheme_from_string(self):
        assert LCParams(scheme="raw").scheme is WeightScheme.RAW


class TestG:
    def test_zero(self):
        assert g_cap(0.0, P) == 0.0

    def test_at_cap(self):
        p = LCParams(nu=2.0, vartheta=3.0)
        assert g_cap(6.0, p) == pytest.approx(6.0)
        assert g_cap(7.0, p) == pytest.approx(6.0)

    def test_continuous_and_flat_beyond_cap(self):
        p = LCParams(nu=0.5, vartheta=10.0)
        s = np.linspace(0, 20, 4001)
        g = g_cap(s, p)
        assert np.all(np.diff(g) >= -1e-15)
        assert np.all(g[s >= p.cap] == p.nu ** 2 * p.vartheta / 2)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            g_cap(-1.0, P)


class TestWeights:
    def test_zero_slice(self):
        w = weights(np.zeros((3, 3, 2), complex), P)
        np.testing.assert_allclose(w, 1 / 1.8)

    def test_max_singular_value(self, rng):
        sigma = np.sort(rng.random((4, 3)), axis=0)[::-1] + 0.1
        w = weights_from_sigma(sigma, P)
        np.testing.assert_allclose(w[0], 1 / (0.8 + math.exp(-4)), rtol=1e-14)

    def test_monotone_in_sigma(self, rng):
        sigma = np.sort(rng.random((5, 2)), axis=0)[::-1]
        w = weights_from_sigma(sigma, P)
        assert np.all(np.diff(w, axis=0) <= 0)

    def test_raw_scheme(self):
        p = LCParams(scheme="raw")
        np.testing.assert_allclose(weights_from_sigma(np.array([[0.0], [2.0]]), p), [[1 / 1.8], [1 / (0.8 + math.exp(-2))]])

    def test_matches_direct_svd(self, rng):
        x = rng.standard_normal((4, 3, 5))
        xbar = dft_mode3(x)
        w = weights(xbar, P)
        for i in range(5):
            s = np.linalg.svd(xbar[:, :, i], compute_uv=False)
            np.testing.assert_allclose(w[:, i], 1 / (0.8 + np.exp(-3 * s / s.max())), rtol=1e-12)


class TestLCNorm:
    def test_zero(self):
        assert lc_norm(np.zeros((2, 2, 3)), P, np.ones((2, 3))) == 0.0

    def test_identity_tensor(self):
        # identity of size n: every DFT slice is I, so n ones per slice
        n, n3 = 3, 4
        x = np.zeros((n, n, n3))
        x[:, :, 0] = np.eye(n)
        expected = n * math.log1p(P.nu - 1 / (2 * P.vartheta))
        assert lc_norm(x, P, np.ones((n, n3))) == pytest.approx(expected, rel=1e-12)

    def test_svd_oracle(self, rng):
        x = rng.standard_normal((4, 5, 3))
        w = rng.random((4, 3))
        xbar = np.fft.fft(x, axis=2)
        total = 0.0
        for i in range(3):
            for j, s in enumerate(np.linalg.svd(xbar[:, :, i], compute_uv=False)):
                g = P.nu * s - s * s / (2 * P.vartheta)
                total += w[j, i] * math.log(g + 1)
        assert lc_norm(x, P, w) == pytest.approx(total / 3, rel=1e-12)

    def test_weight_shape_checked(self):
        with pytest.raises(ValueError):
            lc_norm(np.zeros((2, 2, 3)), P, np.ones((3, 3)))


class TestCubic:
    def test_triple_root(self):
        # -(l - 1)^3 = -l^3 + 3l^2 - 3l + 1
        assert cubic_real_roots(3, -3, 1) == pytest.approx([1.0])

    def test_three_roots(self):
        # -(l+1) l (l-1) = -l^3 + l
        np.testing.assert_allclose(cubic_real_roots(0, 1, 0), [-1, 0, 1], atol=1e-14)

    def test_double_root(self):
        # -(l-2)^2 (l+1) = -l^3 + 3l^2 - 4
        np.testing.assert_allclose(cubic_real_roots(3, 0, -4), [-1, 2], atol=1e-7)

    def test_one_real_root(self):
        # -(l - 2)(l^2 + 1)
        np.testing.assert_allclose(cubic_real_roots(2, -1, 2), [2.0], atol=1e-12)

    def test_zero_polynomial_tail(self):
        assert cubic_real_roots(0, 0, 0) == [0.0]

    def test_random_against_bisection(self, rng):
        for _ in range(200):
            b, c, d = rng.uniform(-50, 50, 3)
            got = cubic_real_roots(b, c, d)
            ref = bisect_cubic_roots(b, c, d)
            assert len(got) == len(ref), (b, c, d, got, ref)
            for l in got:
                assert abs(((-l + b) * l + c) * l + d) <= 1e-8 * (1 + abs(l) ** 3)
            np.testing.assert_allclose(got, ref, rtol=1e-7, atol=1e-7)

    def test_prox_shaped_coefficients(self, rng):
        # the ranges the prox actually produces, including huge vartheta
        for _ in range(200):
            y, rho, om = rng.uniform(0, 10), 10 ** rng.uniform(-2, 2), rng.uniform(0, 5)
            nu, vt = rng.uniform(0.1, 5), 10 ** rng.uniform(0, 3)
            cap = nu * vt
            b, c, d = 2 * cap + y, -2 * om / rho + 2 * vt - 2 * cap * y, 2 * om * cap / rho - 2 * vt * y
            for l in cubic_real_roots(b, c, d):
                scale = 1 + abs(l) ** 3 + abs(b) * l * l + abs(c * l) + abs(d)
                assert abs(((-l + b) * l + c) * l + d) <= 1e-10 * scale


class TestScalarProx:
    def test_zero_input(self):
        assert scalar_prox(0.0, 1.0, 1.0, P) == 0.0

    def test_zero_weight_is_identity(self):
        assert scalar_prox(3.7, 2.0, 0.0, P) == 3.7

    def test_beyond_cap_returns_input(self):
        p = LCParams(nu=1.0, vartheta=1.0)
        assert scalar_prox(5.0, 1.0, 1.0, p) == 5.0

    def test_strong_shrinkage_to_zero(self):
        assert scalar_prox(0.1, 0.01, 5.0, P) == 0.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            scalar_prox(1.0, 0.0, 1.0, P)
        with pytest.raises(ValueError):
            scalar_prox(-1.0, 1.0, 1.0, P)

    def test_objective_helper(self):
        assert prox_objective(2.0, 1.0, 4.0, 0.0, P) == pytest.approx(2.0)

    def test_grid_oracle(self, rng):
        for _ in range(200):
            y, rho, om = rng.uniform(0, 10), 10 ** rng.uniform(-2, 2), rng.uniform(0, 5)
            p = LCParams(nu=rng.uniform(0.1, 5), vartheta=rng.uniform(1, 1000))
            l = scalar_prox(y, rho, om, p)
            _, hg, lref = grid_prox(y, rho, om, p.nu, p.vartheta, n=20_001)
            assert h_direct(l, y, rho, om, p.nu, p.vartheta) <= hg + 1e-9
            assert abs(l - lref) <= 1e-3 * max(1.0, y)

    def test_between_zero_and_input(self, rng):
        for y in rng.uniform(0, 20, 50):
            assert 0.0 <= scalar_prox(y, 0.5, 2.0, P) <= y

    def test_monotone_in_input(self):
        ys = np.linspace(0, 10, 401)
        ls = [scalar_prox(y, 0.3, 1.5, P) for y in ys]
        assert np.all(np.diff(ls) >= -1e-12)


class TestTensorProx:
    def test_zero(self):
        np.testing.assert_array_equal(tensor_prox(np.zeros((3, 4, 2)), 1.0, P), 0.0)

    def test_huge_rho_is_identity(self, rng):
        y = rng.standard_normal((4, 3, 5))
        assert np.linalg.norm(tensor_prox(y, 1e12, P) - y) <= 1e-6 * np.linalg.norm(y)

    def test_matrix_in_matrix_out(self, rng):
        y = rng.standard_normal((4, 3))
        assert tensor_prox(y, 1.0, P).shape == (4, 3)

    def test_real_output(self, rng):
        out = tensor_prox(rng.standard_normal((5, 4, 6)), 0.5, P)
        assert out.dtype == np.float64

    def test_singular_values_follow_scalar_prox(self, rng):
        y = rng.standard_normal((5, 4, 6))
        rho = 0.7
        out, s, s1, w = tensor_prox(y, rho, P, return_sigma=True)
        got = slice_singular_values(out)
        for i in range(6):
            for j in range(4):
                expect = scalar_prox(s[j, i], rho, w[j, i], P)
                assert s1[j, i] == expect
            np.testing.assert_allclose(np.sort(got[:, i])[::-1], np.sort(s1[:, i])[::-1], atol=1e-10)

    def test_beats_spectral_perturbations(self, rng):
        # With singular vectors of y held fixed, no perturbation of the
        # shrunk spectrum lowers the objective.
        y = rng.standard_normal((4, 3, 5))
        rho = 0.4
        _, s, s1, w = tensor_prox(y, rho, P, return_sigma=True)

        def obj(sig):
            return np.sum(h_direct(sig, s, rho, w, P.nu, P.vartheta))

        base = obj(s1)
        for _ in range(500):
            trial = np.maximum(s1 + 0.05 * rng.standard_normal(s1.shape), 0.0)
            assert obj(trial) >= base - 1e-12

    def test_rejects_bad_rho(self):
        with pytest.raises(ValueError):
            tensor_prox(np.zeros((2, 2, 2)), -1.0, P)
