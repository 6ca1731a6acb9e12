import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import trapezoid
from takde.errors import InvalidBandwidthError
from takde.kernel import GAUSSIAN, KernelSpec, KernelKind, eval_kernel, eval_scaled, kernel_constants


class TestEvalKernel:
    def test_peak_value(self):
        assert eval_kernel(GAUSSIAN, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-15)
        assert eval_kernel(GAUSSIAN, 0.0) == pytest.approx(0.3989423, abs=1e-7)

    def test_symmetry_pair(self):
        assert eval_kernel(GAUSSIAN, 1.5) == eval_kernel(GAUSSIAN, -1.5)

    def test_symmetry_random(self, rng):
        u = rng.normal(scale=5, size=1000)
        np.testing.assert_array_equal(eval_kernel(GAUSSIAN, u), eval_kernel(GAUSSIAN, -u))

    def test_unit_mass(self):
        assert trapezoid(lambda x: eval_kernel(GAUSSIAN, x), -10, 10) == pytest.approx(1.0, abs=1e-8)

    def test_nonnegative_far_tail(self):
        assert eval_kernel(GAUSSIAN, 1e3) >= 0.0

    def test_log_pdf_matches(self, rng):
        u = rng.normal(scale=3, size=100)
        np.testing.assert_allclose(GAUSSIAN.log_pdf(u), np.log(eval_kernel(GAUSSIAN, u)), rtol=1e-13)


class TestEvalScaled:
    def test_at_center(self):
        assert eval_scaled(GAUSSIAN, 3.0, 3.0, 2.0) == pytest.approx(0.1994711, abs=1e-7)

    def test_unit_sigma_is_plain_kernel(self):
        assert eval_scaled(GAUSSIAN, 1.3, 0.4, 1.0) == eval_kernel(GAUSSIAN, 1.3 - 0.4)

    @pytest.mark.parametrize("sigma", [0.0, -1.0])
    def test_rejects_bad_sigma(self, sigma):
        with pytest.raises(InvalidBandwidthError):
            eval_scaled(GAUSSIAN, 0.0, 0.0, sigma)

    @given(st.floats(-5, 5), st.floats(0.05, 3.0))
    def test_unit_mass_any_center(self, center, sigma):
        lo, hi = center - 12 * sigma, center + 12 * sigma
        mass = trapezoid(lambda x: eval_scaled(GAUSSIAN, x, center, sigma), lo, hi, 4001)
        assert mass == pytest.approx(1.0, abs=1e-6)


class TestConstants:
    def test_closed_forms(self):
        r, mu2 = kernel_constants(GAUSSIAN)
        assert r == pytest.approx(0.2820948, abs=1e-7)
        assert r == pytest.approx(1 / (2 * math.sqrt(math.pi)), abs=1e-15)
        assert mu2 == 1.0

    def test_constants_match_quadrature(self):
        r = trapezoid(lambda x: eval_kernel(GAUSSIAN, x) ** 2, -12, 12)
        mu2 = trapezoid(lambda x: x * x * eval_kernel(GAUSSIAN, x), -12, 12)
        assert r == pytest.approx(GAUSSIAN.r_of_k, abs=1e-8)
        assert mu2 == pytest.approx(GAUSSIAN.mu2, abs=1e-8)

    @pytest.mark.parametrize("r, mu2", [(0.0, 1.0), (0.3, 0.0), (0.3, math.inf)])
    def test_invalid_spec(self, r, mu2):
        with pytest.raises(ValueError):
            KernelSpec(KernelKind.GAUSSIAN, r, mu2)
