import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from sumlab.errors import ConvergenceWarning
from sumlab.motohashi import (
    MotohashiInput,
    beta_integral,
    g_function,
    h_eval,
    h_zero_limit,
    mellin_h,
    motohashi_h,
    parseval_check,
    parseval_lhs,
    parseval_lhs_corrected,
    parseval_rhs,
    route_r1,
    route_r2,
    route_r3,
    verify_rearrangement,
    zero_function,
)
from sumlab.special import gamma
from sumlab.transforms import ContourIntegrator, ContourSpec, SeriesSpec, TestFunction

INP = MotohashiInput()


def cos_gauss(w, A=1.0):
    # cosine transform of exp(-x^2/A) on the half line
    return 0.5 * math.sqrt(math.pi * A) * math.exp(-(math.pi**2) * A * w * w)


# --- inputs and h -----------------------------------------------------------------

def test_input_validation():
    with pytest.raises(ValueError):
        MotohashiInput(A=0.0)
    with pytest.raises(ValueError):
        MotohashiInput(contour=ContourSpec(0.4, 60, 0.05))
    with pytest.raises(ValueError):
        motohashi_h(-1.0)


@pytest.mark.parametrize("A", [1.0, 0.3])
def test_h_at_one(A):
    inp = MotohashiInput(A=A)
    assert h_eval(1.0, inp) == pytest.approx(cos_gauss(math.log(2), A) / math.sqrt(2), rel=1e-14)


def test_h_with_supplied_function_uses_quadrature():
    base = INP.f
    bare = TestFunction("g", base.eval, 1.0, math.inf, integral=base.integral)
    h = motohashi_h(1.0, bare)
    y = np.array([0.3, 1.0, 4.0])
    assert np.allclose(h(y), INP.h(y), atol=1e-12, rtol=0)


def test_h_zero_limit():
    limit, samples, settled = h_zero_limit(INP)
    assert settled and limit == 0.0
    assert len(samples) == 6
    assert all(abs(v) < 1e-3 for _, v in samples[2:])


def test_h_zero_limit_flags_missing_limit():
    # F(f)(w) = 1/(1 + 4 pi^2 w^2) decays only algebraically, so h(y) grows like y^(-1/2)/log(y)^2
    slow = TestFunction("exp", lambda x: np.exp(-x), 1.0, math.inf, integral=1.0,
                        closed_form_cosine=lambda w: 1 / (1 + 4 * math.pi**2 * np.asarray(w) ** 2))
    with pytest.warns(ConvergenceWarning):
        _, _, settled = h_zero_limit(MotohashiInput(f=slow))
    assert not settled


def test_h_large_y_tail():
    y = 1e6
    assert h_eval(y) * y == pytest.approx(INP.h.tail_coefficient, rel=1e-5)


# --- beta integral -------------------------------------------------------------

def test_beta_half_one_is_pi():
    res = beta_integral(0.5, 1.0)
    assert res.ratio == pytest.approx(math.pi, rel=1e-14)
    assert res.residual < 1e-11


def test_beta_random_points():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        v = complex(rng.uniform(0.5, 3.0), rng.uniform(-5, 5))
        s = complex(rng.uniform(0.05, 0.95) * v.real, rng.uniform(-5, 5))
        res = beta_integral(s, v)
        worst = max(worst, res.residual / max(1.0, abs(res.ratio)))
        oracle = complex(mp.beta(s, v - s))
        assert abs(res.ratio - oracle) <= 1e-12 * max(1.0, abs(oracle))
    assert worst <= 1e-9


def test_beta_smooth_in_s():
    v, s, eps = 2.0, 0.7 + 0.4j, 1e-5
    fd = (beta_integral(s + eps, v).ratio - beta_integral(s - eps, v).ratio) / (2 * eps)
    exact = complex(mp.beta(s, v - s) * (mp.digamma(s) - mp.digamma(v - s)))
    assert fd == pytest.approx(exact, rel=1e-8)


@pytest.mark.parametrize("s,v", [(0.0, 1.0), (1.2, 1.0), (-0.1, 2.0)])
def test_beta_strip(s, v):
    with pytest.raises(ValueError):
        beta_integral(s, v)


# --- Mellin transform of h -----------------------------------------------------

@pytest.mark.parametrize("s", [0.75, 0.6 + 5j, 0.9 - 2j])
def test_mellin_h_two_routes(s):
    assert mellin_h(s, INP, "kernel") == pytest.approx(mellin_h(s, INP, "direct"), abs=1e-9)


def test_mellin_h_conjugate_symmetry():
    s = 0.7 + 3j
    assert mellin_h(s.conjugate()) == pytest.approx(mellin_h(s).conjugate(), abs=1e-14)


def test_mellin_h_zero_function():
    assert mellin_h(0.75, MotohashiInput(f=zero_function())) == 0


def test_mellin_h_strip_and_route():
    with pytest.raises(ValueError):
        mellin_h(0.4)
    with pytest.raises(ValueError):
        mellin_h(0.75, INP, "sideways")


# --- Parseval pair ---------------------------------------------------------------

def _parseval_oracle(a, x):
    # corrected summand (n x y)^(a-1/2) through the polylogarithm; below eps only the
    # zeta(1/2-a) (xy)^(a-1/2) term survives and is integrated in closed form
    with mp.workdps(30):
        a = mp.mpf(a)
        g = mp.gamma(a + 0.5)
        eps = mp.mpf("1e-12")

        def integrand(y):
            t = x * y
            return (t ** (a - 0.5) * mp.polylog(0.5 - a, mp.exp(-t)) - g / t) * mp.exp(-y)

        body = mp.quad(integrand, [eps, 1e-3, 1, 40])
        return complex(body + mp.zeta(0.5 - a) * x ** (a - 0.5) * eps ** (a + 0.5) / (a + 0.5))


@pytest.mark.parametrize("a,x", [(0.0, 1.0), (0.3, 2.0)])
def test_parseval_lhs_against_polylog_oracle(a, x):
    assert parseval_lhs_corrected(a, x) == pytest.approx(_parseval_oracle(a, x), abs=1e-11)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("a", [0.0, 0.3, -0.3])
def test_parseval_corrected(a, x):
    # for a < 0 the strip (0.8, 1) pins the line 0.1 from two poles, so the step shrinks
    contour = ContourSpec(0.9, 60, 0.01) if a < 0 else ContourSpec(0.75, 60, 0.05)
    rep = parseval_check(a, x, contour, variant="corrected")
    assert rep.passed and rep.abs_err < 1e-10


def test_parseval_printed_at_x_one():
    rep = parseval_check(0.3, 1.0, variant="printed")
    assert rep.passed
    assert rep.diagnostic("log_divergence_coefficient") == 0


def test_parseval_printed_diverges_away_from_x_one():
    rep = parseval_check(0.3, 2.0, variant="printed")
    coef = rep.diagnostic("log_divergence_coefficient")
    assert coef == pytest.approx(gamma(0.8) / 2 * (2**0.2 - 1), rel=1e-13)
    assert not rep.passed
    # the stated left side grows like log(1/eps) as the lower limit shrinks
    v1, _ = parseval_lhs(0.3, 2.0, "printed", epsilon=1e-6)
    v2, _ = parseval_lhs(0.3, 2.0, "printed", epsilon=1e-12)
    assert (v2 - v1) == pytest.approx(coef * math.log(1e6), rel=1e-5)


def test_parseval_contour_strip():
    with pytest.raises(ValueError):
        parseval_check(0.0, 1.0, ContourSpec(0.4, 60, 0.05), variant="corrected")


def test_parseval_rhs_scaling():
    lam, a = 1.7, 0.2
    contour = ContourSpec(0.75, 60, 0.05)
    ci = ContourIntegrator(contour)
    direct = parseval_rhs(a, lam * 1.3, contour).value
    base = parseval_rhs(a, 1.3, contour)
    s = ci.s
    from sumlab.special import loggamma, zeta

    vals = zeta(s) * np.exp(loggamma(s + a - 0.5) + loggamma(1 - s)) * lam ** (-s)
    assert ci.integrate(vals, 1.3).value == pytest.approx(direct, abs=1e-14)
    assert base.value != pytest.approx(direct, abs=1e-3)


# --- G -----------------------------------------------------------------------

@pytest.mark.parametrize("variant", ["printed", "corrected"])
def test_g_conjugates(variant):
    a = 2j * math.pi * 0.4
    assert g_function(a.conjugate(), 1.3, variant) == pytest.approx(g_function(a, 1.3, variant).conjugate(),
                                                                    abs=1e-13)


def test_g_at_zero():
    for x in (0.5, 2.0):
        expected = parseval_lhs_corrected(0.0, x) / math.sqrt(math.pi)
        for variant in ("printed", "corrected"):
            assert g_function(0.0, x, variant) == pytest.approx(expected, abs=1e-11)


@pytest.mark.parametrize("variant", ["printed", "corrected"])
def test_g_two_routes(variant):
    a = 2j * math.pi
    assert g_function(a, 1.0, variant, "contour") == pytest.approx(g_function(a, 1.0, variant, "direct"), abs=1e-5)


def test_g_normalizations_differ_by_gamma_ratio():
    a = 1.1j
    ratio = g_function(a, 1.0, "printed") / g_function(a, 1.0, "corrected")
    assert ratio == pytest.approx(complex(gamma(0.5 + a) / gamma(0.5 - a)), rel=1e-12)
    assert abs(ratio) == pytest.approx(1.0, abs=1e-12)
    assert abs(ratio - 1) > 0.1


# --- the three routes --------------------------------------------------------------

def test_zero_function_all_routes_vanish():
    inp = MotohashiInput(f=zero_function(), series=SeriesSpec(10))
    assert route_r1(inp)[0] == 0
    assert route_r2(inp, 5)[0] == 0
    assert route_r3(inp, 5, "corrected") == 0
    assert route_r3(inp, 5, "printed") == 0


@pytest.fixture(scope="module")
def rearranged():
    return verify_rearrangement(MotohashiInput(), 20, "printed")


def test_rearrangement_routes(rearranged):
    rep23, rep12 = rearranged
    R2 = rep23.diagnostic("R2")
    assert rep12.passed and rep12.abs_err < 1e-9
    assert rep23.diagnostic("R3_corrected") == pytest.approx(R2, abs=1e-14)
    # the closing display drops the factor 1/2 in front of the G integral
    assert rep23.diagnostic("R3_printed_display_corrected_G") == pytest.approx(2 * R2, abs=1e-13)
    assert not rep23.passed


def test_rearrangement_m_cutoff_convergence(rearranged):
    rep23, _ = rearranged
    # only m up to ~1 / support contributes beyond 1e-12
    assert rep23.diagnostic("R2_2M") == pytest.approx(rep23.diagnostic("R2"), abs=1e-10)


def test_route_residual_shrinks_with_truncation():
    inp = MotohashiInput()
    r2, _ = route_r2(inp, 20)
    gaps = [abs(route_r1(inp, N)[0] - r2) for N in (1, 2, 4, 8)]
    assert gaps[0] > gaps[1] > gaps[2] > gaps[3]
    assert gaps[3] < 1e-10
