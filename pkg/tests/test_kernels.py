import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sureamp import EXPONENTIAL, PWL1, PWL2, ParameterError, kernel_eval
from sureamp.kernels import hinges, kernel_matrix


def test_pwl1_tent_peak_value():
    c = 0.01
    a1 = 2 * math.sqrt(c)
    val, _ = kernel_eval(PWL1, 0, a1, c)
    assert val == pytest.approx(1.0)


def test_pwl1_soft_threshold_branch():
    # alpha2 = 0.4 at c = 0.01, so r = 1 maps to 0.6
    val, der = kernel_eval(PWL1, 2, 1.0, 0.01)
    assert val == pytest.approx(0.6)
    assert der == 1.0


def test_pwl2_saturation():
    c = 0.04
    b1 = 1.0 / (1.0 + 6 * math.sqrt(c))
    for r in (b1, b1 + 0.5, 3.0):
        val, der = kernel_eval(PWL2, 0, r, c)
        assert val == 1.0
        assert der == 0.0


def test_exp_kernel_at_width():
    c = 0.25
    t = math.sqrt(6 * c)
    val, _ = kernel_eval(EXPONENTIAL, 1, t, c)
    assert val == pytest.approx(t * math.exp(-0.5))


def test_kernel_index_out_of_range():
    with pytest.raises(ParameterError):
        kernel_eval(PWL1, 3, 0.0, 0.1)
    with pytest.raises(ParameterError):
        kernel_eval(EXPONENTIAL, -1, 0.0, 0.1)


def test_hinge_ordering_and_positivity():
    for c in (1e-10, 1e-3, 0.1, 10.0):
        h1 = hinges(PWL1, c)
        assert 0 < h1["alpha1"] < h1["alpha2"]
        h2 = hinges(PWL2, c)
        assert 0 < h2["beta1"] < h2["beta2"] < 1
        assert hinges(EXPONENTIAL, c)["T"] > 0


def test_hinges_scale_with_sqrt_c_exactly():
    # exact as a scaling law; sqrt(2c) vs sqrt(2)sqrt(c) differ by an ulp
    for c in (0.01, 0.1, 1.0):
        a = hinges(PWL1, c)
        b = hinges(PWL1, 2 * c)
        assert b["alpha1"] == pytest.approx(a["alpha1"] * math.sqrt(2), rel=1e-15)
        assert b["alpha2"] == pytest.approx(a["alpha2"] * math.sqrt(2), rel=1e-15)
        assert hinges(EXPONENTIAL, 2 * c)["T"] == pytest.approx(
            hinges(EXPONENTIAL, c)["T"] * math.sqrt(2), rel=1e-15)


def test_noise_floor_clamps_tiny_c():
    # hinge formulas stay finite as c -> 0
    h = hinges(PWL1, 0.0)
    assert h["alpha1"] > 0
    F, D = kernel_matrix(PWL2, np.array([0.5]), 0.0)
    assert np.isfinite(F).all() and np.isfinite(D).all()


@settings(max_examples=200, deadline=None)
@given(
    r=st.floats(-50, 50, allow_nan=False),
    c=st.floats(1e-6, 50, allow_nan=False),
    fam_i=st.sampled_from([(PWL1, 0), (PWL1, 1), (PWL1, 2), (PWL2, 0), (PWL2, 1),
                           (EXPONENTIAL, 0), (EXPONENTIAL, 1)]),
)
def test_kernels_are_exactly_odd(r, c, fam_i):
    fam, i = fam_i
    v_plus, _ = kernel_eval(fam, i, r, c)
    v_minus, _ = kernel_eval(fam, i, -r, c)
    assert v_minus == -v_plus


@settings(max_examples=100, deadline=None)
@given(
    r=st.floats(-20, 20, allow_nan=False),
    c=st.floats(1e-4, 10, allow_nan=False),
    fam_i=st.sampled_from([(PWL1, 0), (PWL1, 1), (PWL1, 2), (PWL2, 0), (PWL2, 1),
                           (EXPONENTIAL, 1)]),
)
def test_derivative_matches_finite_difference_away_from_hinges(r, c, fam_i):
    fam, i = fam_i
    h = 1e-7 * max(1.0, abs(r))
    boundaries = list(hinges(fam, c).values())
    pts = {b * s for b in boundaries for s in (-2, -1, 1, 2)}
    if any(abs(abs(r) - abs(p)) < 10 * h for p in pts):
        return  # derivative is discontinuous there
    v_hi, _ = kernel_eval(fam, i, r + h, c)
    v_lo, _ = kernel_eval(fam, i, r - h, c)
    _, der = kernel_eval(fam, i, r, c)
    assert der == pytest.approx((v_hi - v_lo) / (2 * h), rel=1e-4, abs=1e-4)


def test_right_continuous_derivative_at_ties():
    c = 0.25
    a1, a2 = 2 * math.sqrt(c), 4 * math.sqrt(c)
    eps = 1e-9
    for i, r in [(0, -2 * a1), (0, -a1), (0, a1), (0, 2 * a1),
                 (1, -a2), (1, -a1), (1, a1), (1, a2),
                 (2, -a2), (2, a2)]:
        _, at_tie = kernel_eval(PWL1, i, r, c)
        _, just_right = kernel_eval(PWL1, i, r + eps, c)
        assert at_tie == just_right, f"kernel {i} at r={r}"


def test_values_continuous_at_hinges():
    for c in (0.01, 0.3):
        for fam in (PWL1, PWL2):
            for b in hinges(fam, c).values():
                for loc in (b, -b, 2 * b, -2 * b):
                    for i in range(fam.k):
                        lo, _ = kernel_eval(fam, i, loc - 1e-12, c)
                        hi, _ = kernel_eval(fam, i, loc + 1e-12, c)
                        assert abs(hi - lo) < 1e-9
