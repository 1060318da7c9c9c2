import math

import numpy as np
import pytest

from tjlc.metrics import ergas, psnr, ssim, tensor_pqi


def image(rng, shape=(16, 12)):
    return np.floor(rng.random(shape) * 200) + 20


class TestPSNR:
    def test_unit_perturbation(self, rng):
        x = image(rng)
        assert psnr(x, x + 1) == pytest.approx(48.1308, abs=1e-3)

    def test_identical(self, rng):
        x = image(rng)
        assert psnr(x, x) == 100.0
        assert psnr(x, x, cap=None) == math.inf

    def test_direct_formula(self, rng):
        x, y = image(rng), image(rng)
        mse = sum((a - b) ** 2 for a, b in zip(x.flat, y.flat)) / x.size
        assert psnr(x, y, peak=1.0) == pytest.approx(10 * math.log10(1 / mse), rel=1e-12)

    def test_symmetric(self, rng):
        x, y = image(rng), image(rng)
        assert psnr(x, y) == psnr(y, x)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            psnr(np.zeros((2, 2)), np.zeros((2, 3)))


class TestSSIM:
    def test_identical(self, rng):
        x = image(rng)
        assert ssim(x, x) == 1.0

    def test_constant_images(self):
        assert ssim(np.full((4, 4), 9.0), np.full((4, 4), 9.0)) == 1.0

    def test_negated_structure(self, rng):
        x = image(rng)
        assert ssim(x, x.mean() * 2 - x) < 1.0

    def test_direct_formula(self, rng):
        x, y = image(rng), image(rng)
        n = x.size
        mx, my = sum(x.flat) / n, sum(y.flat) / n
        vx = sum((v - mx) ** 2 for v in x.flat) / n
        vy = sum((v - my) ** 2 for v in y.flat) / n
        cov = sum((a - mx) * (b - my) for a, b in zip(x.flat, y.flat)) / n
        c1, c2 = (0.01 * 255) ** 2, (0.03 * 255) ** 2
        expect = (2 * mx * my + c1) * (2 * cov + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2))
        assert ssim(x, y) == pytest.approx(expect, rel=1e-12)

    def test_symmetric_and_bounded(self, rng):
        x, y = image(rng), image(rng)
        assert ssim(x, y) == pytest.approx(ssim(y, x), rel=1e-14)
        assert -1 <= ssim(x, y) <= 1


class TestERGAS:
    def test_identical(self, rng):
        x = image(rng, (5, 4, 3))
        assert ergas(x, x) == 0.0

    def test_relative_offset(self):
        # constant slices m_i, candidate (1 + delta) m_i: every term equals delta^2
        means = np.array([10.0, 50.0, 200.0])
        r = np.ones((3, 4, 3)) * means
        delta = 0.02
        assert ergas(r, r * (1 + delta)) == pytest.approx(100 * delta, rel=1e-12)

    def test_mean_vs_mean2(self):
        r = np.full((2, 2, 1), 4.0)
        c = r + 2.0
        assert ergas(r, c, "mean2") == pytest.approx(100 * math.sqrt(4 / 16))
        assert ergas(r, c, "mean") == pytest.approx(100 * math.sqrt(4 / 4))

    def test_direct_formula(self, rng):
        r, c = image(rng, (4, 3, 5)), image(rng, (4, 3, 5))
        terms = []
        for i in range(5):
            a, b = r[:, :, i], c[:, :, i]
            terms.append(np.mean((a - b) ** 2) / np.mean(a) ** 2)
        assert ergas(r, c) == pytest.approx(100 * math.sqrt(sum(terms) / 5), rel=1e-12)

    def test_order4_uses_all_frontal_slices(self, rng):
        r, c = image(rng, (3, 3, 2, 2)), image(rng, (3, 3, 2, 2))
        flat_r = r.reshape(3, 3, 4, order="F")
        flat_c = c.reshape(3, 3, 4, order="F")
        assert ergas(r, c) == ergas(flat_r, flat_c)

    def test_errors(self):
        with pytest.raises(ValueError):
            ergas(np.zeros((2, 2, 1)), np.ones((2, 2, 1)))
        with pytest.raises(ValueError):
            ergas(np.ones((2, 2)), np.ones((2, 2)), "median")


class TestTensorPQI:
    def test_slice_average(self):
        r = np.full((4, 4, 2), 100.0)
        c = r.copy()
        # slice MSEs chosen so the slice PSNRs are exactly 40 and 50 dB
        c[:, :, 0] += 255 / 10 ** 2
        c[:, :, 1] += 255 / 10 ** 2.5
        rep = tensor_pqi(r, c)
        assert rep.per_slice["psnr"] == pytest.approx([40.0, 50.0], abs=1e-12)
        assert rep.psnr == pytest.approx(45.0, abs=1e-12)

    def test_means_of_slices(self, rng):
        r, c = image(rng, (6, 5, 4)), image(rng, (6, 5, 4))
        rep = tensor_pqi(r, c)
        ps = [psnr(r[:, :, i], c[:, :, i]) for i in range(4)]
        ss = [ssim(r[:, :, i], c[:, :, i]) for i in range(4)]
        assert abs(rep.psnr - sum(ps) / 4) <= 1e-12
        assert abs(rep.ssim - sum(ss) / 4) <= 1e-12
        assert rep.ergas == ergas(r, c)

    def test_slice_permutation(self, rng):
        r, c = image(rng, (6, 5, 4)), image(rng, (6, 5, 4))
        perm = [2, 0, 3, 1]
        a, b = tensor_pqi(r, c), tensor_pqi(r[:, :, perm], c[:, :, perm])
        assert a.psnr == pytest.approx(b.psnr, rel=1e-14)
        assert a.ssim == pytest.approx(b.ssim, rel=1e-14)
        assert a.ergas == pytest.approx(b.ergas, rel=1e-14)

    def test_to_dict(self, rng):
        r = image(rng, (3, 3, 2))
        d = tensor_pqi(r, r).to_dict()
        assert d["psnr"] == 100.0 and d["ssim"] == 1.0 and d["ergas"] == 0.0
        assert len(d["per_slice"]["psnr"]) == 2
