import math

import mpmath as mp
import numpy as np
import pytest

from expspline.basis import DomainError, eval_basis, make_basis, stencil
from oracles import printed_basis, printed_coefficients, printed_stencil


def test_coefficients_match_printed_formulas_in_extended_precision():
    b = make_basis(1.0, 0.025)
    ref = printed_coefficients(1.0, 0.025)
    assert b.c == math.cosh(0.025)
    assert b.s == math.sinh(0.025)
    for name in ("a1", "b1", "b2", "c1", "d1"):
        assert getattr(b, name) == pytest.approx(float(ref[name]), rel=1e-13), name


def test_frozen_coefficients_at_p1_h0025():
    # 40-digit evaluation of the printed formulas
    b = make_basis(1.0, 0.025)
    assert b.a1 == pytest.approx(4801.1999964286706319, rel=1e-13)
    assert b.b1 == pytest.approx(-288042.00009821000759, rel=1e-13)
    assert b.b2 == pytest.approx(95994.000241063182309, rel=1e-13)
    assert b.c1 == pytest.approx(141620.90005089066848, rel=1e-13)
    assert b.d1 == pytest.approx(-146421.10004731933911, rel=1e-13)


@pytest.mark.parametrize("p,h", [(0.01, 0.5), (0.1, 0.01), (1.0, 1 / 160), (3.0, 0.2), (10.0, 0.5)])
def test_coefficients_across_range(p, h):
    b = make_basis(p, h)
    ref = printed_coefficients(p, h)
    for name in ("a1", "b1", "b2", "c1", "d1"):
        assert getattr(b, name) == pytest.approx(float(ref[name]), rel=1e-10), name


def test_params_invariants():
    for p, h in [(0.5, 0.1), (1.0, 0.00625), (7.0, 0.3)]:
        b = make_basis(p, h)
        assert b.denom > 0
        assert abs(b.c * b.c - b.s * b.s - 1.0) <= 8 * np.finfo(float).eps * b.c * b.c


@pytest.mark.parametrize("p,h", [(1.0, 0.0), (-1.0, 0.1), (0.0, 0.1), (1.0, -0.5), (60.0, 1.0), (1e-3, 1e-3)])
def test_make_basis_domain_errors(p, h):
    with pytest.raises(DomainError):
        make_basis(p, h)


def test_stencil_matches_printed_table():
    for p, h in [(1.0, 0.025), (0.1, 1 / 16), (2.0, 0.3)]:
        st = stencil(make_basis(p, h))
        ref = printed_stencil(p, h)
        assert st.alpha1 == pytest.approx(float(ref["alpha"][0]), rel=1e-13)
        assert st.beta2 == pytest.approx(float(ref["beta"][2]), rel=1e-13)
        assert st.gamma1 == pytest.approx(float(ref["gamma"][0]), rel=1e-13)
        assert st.gamma2 == pytest.approx(float(ref["gamma"][1]), rel=1e-13)


def test_stencil_symmetries():
    rng = np.random.default_rng(7)
    for _ in range(20):
        st = stencil(make_basis(rng.uniform(0.01, 10), rng.uniform(1e-3, 0.5)))
        assert st.alpha2 == 1.0
        assert st.alpha1 == st.alpha3
        assert st.beta1 + st.beta2 == 0.0
        assert st.gamma1 == st.gamma3
        assert abs(st.gamma1 + st.gamma2 + st.gamma3) <= 4 * np.spacing(abs(st.gamma2))


def test_cubic_limit():
    h = 0.1
    st = stencil(make_basis(0.01 / h, h))  # p*h = 1e-2
    assert st.alpha1 == pytest.approx(0.25, rel=1e-4)
    assert st.beta2 * h == pytest.approx(0.75, rel=1e-3)
    assert st.beta1 * h == pytest.approx(-0.75, rel=1e-3)
    assert st.gamma1 * h * h == pytest.approx(1.5, rel=1e-3)
    assert st.gamma2 * h * h == pytest.approx(-3.0, rel=1e-3)


def _sample_params(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        p, h = rng.uniform(0.01, 10.0), rng.uniform(1e-3, 0.5)
        if p * h >= 1e-4:
            out.append(make_basis(p, h))
    return out


def test_nodal_consistency_random():
    for b in _sample_params(20, seed=11):
        st = stencil(b)
        h = b.h
        knots = np.array([-2, -1, 0, 1, 2]) * h + 3 * h  # basis i=3, origin 0
        # The knot table lists each entry as the weight of delta_{i-1}, delta_i,
        # delta_{i+1} in the row of x_i, so B_i itself at x_{i-1} carries the
        # x_{i+1} weight. Only the odd (first-derivative) row changes sign.
        table = {
            0: [0.0, st.alpha3, 1.0, st.alpha1, 0.0],
            1: [0.0, st.beta2, 0.0, st.beta1, 0.0],
            2: [0.0, st.gamma3, st.gamma2, st.gamma1, 0.0],
        }
        for deriv, expected in table.items():
            got = eval_basis(b, 3, knots, deriv)
            scale = max(abs(v) for v in expected)
            np.testing.assert_allclose(got, expected, rtol=1e-12, atol=1e-12 * scale)


def test_eval_matches_printed_piecewise_form():
    b = make_basis(1.0, 0.1)
    for r in [-0.19, -0.15, -0.1, -0.04, 0.0, 0.03, 0.1, 0.12, 0.199]:
        for deriv in (0, 1, 2):
            ref = float(printed_basis(1.0, 0.1, r, deriv))
            got = eval_basis(b, 0, r, deriv)
            assert got == pytest.approx(ref, rel=1e-9, abs=1e-9 * b.b2 * b.p), (r, deriv)


def test_table_entries_at_knots():
    b = make_basis(1.0, 0.05)
    st = stencil(b)
    assert eval_basis(b, 4, 0.2) == pytest.approx(1.0, rel=1e-14)
    for deriv in (0, 1, 2):
        # 0.3 - 4*0.05 is not exactly 2h in binary; the residual value is ~1e-47
        assert eval_basis(b, 4, 0.1, deriv) == pytest.approx(0.0, abs=1e-12)
        assert eval_basis(b, 4, 0.3, deriv) == pytest.approx(0.0, abs=1e-12)
    assert eval_basis(b, 4, 0.15, 1) == pytest.approx(st.beta2, rel=1e-12)
    assert st.beta2 > 0
    assert eval_basis(b, 4, 0.15, 2) == pytest.approx(st.gamma1, rel=1e-12)


def test_out_of_support_is_zero():
    b = make_basis(1.0, 0.1)
    x = np.array([-1.0, -0.2, 0.2, 0.5])
    assert np.all(eval_basis(b, 0, x) == 0.0)
    with pytest.raises(ValueError):
        eval_basis(b, 0, 0.0, deriv=3)


def test_smoothness_across_knots():
    for b in _sample_params(10, seed=3):
        h = b.h
        eps = 1e-7 * h
        for deriv in (0, 1, 2):
            xs = np.linspace(-2 * h, 2 * h, 401)
            scale = np.abs(eval_basis(b, 0, xs, deriv)).max()
            for k in (-2, -1, 0, 1, 2):
                left = eval_basis(b, 0, k * h - eps, deriv)
                right = eval_basis(b, 0, k * h + eps, deriv)
                assert abs(left - right) <= 1e-5 * scale, (b.p, b.h, deriv, k)


def test_small_ph_has_no_cancellation_loss():
    # alpha1 -> 1/4 as p*h -> 0; the series paths keep it accurate at p*h = 1e-4
    mp.mp.dps = 40
    st = stencil(make_basis(1e-3, 0.1))
    ref = printed_stencil(1e-3, 0.1)
    assert st.alpha1 == pytest.approx(float(ref["alpha"][0]), rel=1e-13)
    assert st.gamma1 == pytest.approx(float(ref["gamma"][0]), rel=1e-12)
