import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from sumlab.errors import TailWarning
from sumlab.special import EULER_GAMMA, gamma
from sumlab.transforms import (
    ContourIntegrator,
    ContourSpec,
    REGISTRY,
    SeriesSpec,
    TestFunction,
    davenport_mellin,
    fourier_cosine,
    gaussian,
    get_function,
    inverse_mellin,
    log_weight_integral,
    mellin,
    mellin_on_contour,
    muntz2_lhs,
    muntz2_rhs,
    muntz_lhs,
    muntz_rhs,
    poisson_cosine_sides,
    scaled_gaussian,
    voronoi_kernel,
)

G = gaussian()


# --- records ---------------------------------------------------------------

@pytest.mark.parametrize("kwargs", [{"height": 0}, {"step": 0}, {"height": 10, "step": 2}, {"abscissa": math.nan}])
def test_contour_spec_validation(kwargs):
    with pytest.raises(ValueError):
        ContourSpec(**kwargs)


def test_contour_strip_is_checked_per_operation():
    with pytest.raises(ValueError):
        muntz_lhs(G, 1.0, ContourSpec(1.2, 40, 0.05))
    assert ContourSpec(0.3).require(0, 1) .abscissa == 0.3


@pytest.mark.parametrize("kwargs", [{"cutoff": 0}, {"cutoff": 2.5}, {"cutoff": 5, "smoothing": "x"},
                                    {"cutoff": 5, "smoothing": "abel", "delta": -1.0}])
def test_series_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SeriesSpec(**kwargs)


def test_series_weights():
    assert SeriesSpec(10, "abel").delta == pytest.approx(1.0)
    w = SeriesSpec(4, "cesaro").weights()
    assert list(w) == [0.0, 1.0, 0.75, 0.5, 0.25]
    assert SeriesSpec(3).weights()[1:].tolist() == [1.0, 1.0, 1.0]


def test_test_function_decay_invariant():
    with pytest.raises(ValueError):
        TestFunction("bad", np.exp, 1.0, 1.0)
    TestFunction("ok", lambda x: 1 / (1 + x), 1.0, 1.0, tail_coefficient=1.0)


def test_registry_labels():
    assert set(REGISTRY) == {"gaussian", "scaled_gaussian", "davenport", "koshlyakov-f", "motohashi-h"}
    assert get_function("scaled_gaussian", a=2.0)(1.0) == pytest.approx(math.exp(-2))
    with pytest.raises(KeyError):
        get_function("nope")


# --- Mellin -----------------------------------------------------------------

def test_gaussian_mellin_at_half():
    value = mellin(G, 0.5)
    # pi^(-1/4) Gamma(1/4) / 2
    assert value.real == pytest.approx(1.3616441082, abs=1e-9)
    assert value == pytest.approx(math.pi**-0.25 * math.gamma(0.25) / 2, rel=1e-12)


@pytest.mark.parametrize("method", ["quad", "trapezoid"])
def test_mellin_matches_closed_form(method):
    s = np.array([0.2, 0.5 + 3j, 0.9 - 7j, 1.7 + 1j])
    for f in (G, scaled_gaussian(3.0)):
        assert np.max(np.abs(mellin(f, s, method=method) - f.closed_form_mellin(s))) < 1e-11


def test_mellin_against_mpmath_quadrature():
    s = 0.4 + 2j
    # u = log x on [-60, 3] plus the exact left tail where f = 1 to double precision
    oracle = mp.quad(lambda u: mp.exp(s * u - mp.pi * mp.exp(2 * u)), mp.linspace(-60, 3, 127))
    oracle = complex(oracle + mp.exp(-60 * s) / s)
    assert abs(mellin(G, s) - oracle) < 1e-12


def test_mellin_strip_check():
    with pytest.raises(ValueError):
        mellin(G, -0.2)


def test_davenport_mellin_sign():
    # direct integral of the step pi/2 on [0, x0): pi x0^s / (2 s)
    x0, s = math.sqrt(2), 0.6 + 1.5j
    direct = complex(mp.quad(lambda u: mp.exp(s * u) * mp.pi / 2, [-mp.inf, -5, math.log(x0)]))
    assert davenport_mellin(s, x0) == pytest.approx(direct, rel=1e-13)
    assert davenport_mellin(s, x0, "printed") == pytest.approx(-direct, rel=1e-13)


def test_davenport_kernel_is_the_dirichlet_step():
    # int_0^inf cos(2 pi w y) sin(2 pi x0 y) / y dy evaluated independently
    f = get_function("davenport")
    x0 = f.params["x0"]
    for w in (0.5, 2.0):
        val = mp.quadosc(lambda y: mp.cos(2 * mp.pi * w * y) * mp.sin(2 * mp.pi * x0 * y) / y, [0, mp.inf],
                         omega=2 * mp.pi * (x0 + w))
        assert float(f(w)) == pytest.approx(float(val), abs=1e-8)


# --- inverse Mellin ---------------------------------------------------------

def test_inverse_mellin_gaussian():
    res = inverse_mellin(G.closed_form_mellin, 1.0, ContourSpec(0.5, 40, 0.05))
    assert res.real == pytest.approx(math.exp(-math.pi), abs=1e-12)
    assert res.nodes == 1601


def test_cahen_mellin():
    res = inverse_mellin(gamma, 1.0, ContourSpec(0.5, 40, 0.05))
    assert res.real == pytest.approx(math.exp(-1), abs=1e-12)
    assert abs(res.value.imag) < 1e-14


def test_inverse_mellin_scaling():
    lam = 1.7
    contour = ContourSpec(0.5, 40, 0.05)
    for x in (0.5, 1.0, 3.0):
        a = inverse_mellin(lambda s: gamma(s) * lam**s, x, contour).value
        b = inverse_mellin(gamma, x / lam, contour).value
        assert abs(a - b) < 1e-13
        assert a.real == pytest.approx(math.exp(-x / lam), abs=1e-12)


def test_inverse_mellin_tail_warning():
    with pytest.warns(TailWarning):
        inverse_mellin(gamma, 1.0, ContourSpec(0.5, 4, 0.05), tol=1e-8)


def test_inverse_mellin_rejects_nonpositive_x():
    with pytest.raises(ValueError):
        inverse_mellin(gamma, 0.0)


@pytest.mark.parametrize("label", ["gaussian", "scaled_gaussian", "koshlyakov-f", "motohashi-h"])
def test_round_trip(label):
    f = get_function(label)
    contour = ContourSpec(0.5, 40, 0.05)
    values = mellin_on_contour(f, contour, method="trapezoid")
    xs = np.exp(np.linspace(-1.5, 1.5, 20))
    back = ContourIntegrator(contour).integrate_many(values, xs)
    assert np.max(np.abs(back - f(xs))) < 1e-7


def test_round_trip_davenport_step():
    # the transform decays like 1/|t|: truncation error ~ (x0/x)^c / (2 T |log(x/x0)|)
    f = get_function("davenport")
    x0 = f.params["x0"]
    for T in (40.0, 160.0):
        contour = ContourSpec(0.5, T, 0.05)
        xs = np.exp(np.linspace(-1.5, 1.5, 20))
        xs = xs[np.abs(np.log(xs / x0)) > 0.05]
        back = ContourIntegrator(contour).integrate_many(f.closed_form_mellin(contour.s), xs)
        bound = (x0 / xs) ** 0.5 / (T * np.abs(np.log(xs / x0)))
        assert np.all(np.abs(back - f(xs)) <= 0.6 * bound)


# --- cosine transform -------------------------------------------------------

@pytest.mark.parametrize("w", [0.1, 0.5, 1.0, 2.0, 3.5, 5.0])
def test_fourier_cosine_gaussian(w):
    assert fourier_cosine(G, w) == pytest.approx(0.5 * math.exp(-math.pi * w * w), abs=1e-10)


def test_fourier_cosine_examples():
    assert fourier_cosine(G, 0) == pytest.approx(0.5, abs=1e-15)
    assert fourier_cosine(G, 1) == pytest.approx(0.0216069591, abs=1e-10)


def test_fourier_cosine_against_scipy_weighted_quadrature():
    f = scaled_gaussian(0.3)
    for w in (0.2, 1.3):
        ref, _ = integrate.quad(f, 0, np.inf, weight="cos", wvar=2 * math.pi * w)
        assert fourier_cosine(f, w) == pytest.approx(ref, abs=1e-11)


def test_fourier_cosine_with_reciprocal_tail():
    f = TestFunction("recip", lambda x: 1 / (1 + x * x), 1.0, 2.0, integral=math.pi / 2)
    g = TestFunction("slow", lambda x: 1 / (1 + x), 1.0, 1.0, tail_coefficient=1.0)
    w = 0.7
    # int_0^inf cos(2 pi w x)/(1+x^2) dx = (pi/2) e^{-2 pi w}
    assert fourier_cosine(f, w) == pytest.approx(0.5 * math.pi * math.exp(-2 * math.pi * w), abs=1e-10)
    ref = float(mp.quadosc(lambda x: mp.cos(2 * mp.pi * w * x) / (1 + x), [0, mp.inf], omega=2 * mp.pi * w))
    assert fourier_cosine(g, w) == pytest.approx(ref, abs=1e-10)


def test_poisson_cosine_gaussian():
    lhs, rhs = poisson_cosine_sides(G, 20)
    assert abs(lhs - rhs) < 1e-9


# --- Voronoi kernel ---------------------------------------------------------

def _kernel_oracle(a_gauss, x):
    mp.mp.dps = 20
    a = 4 * mp.pi * mp.sqrt(x)

    def g(u):
        return 2 * u * mp.exp(-a_gauss * u**4) * (4 * mp.besselk(0, a * u) - 2 * mp.pi * mp.bessely(0, a * u))

    cut = (40 / a_gauss) ** 0.25
    return float(mp.quad(g, mp.linspace(0, cut, 40)))


def test_voronoi_kernel_gaussian_against_oracle():
    assert voronoi_kernel(G, 1.0) == pytest.approx(_kernel_oracle(math.pi, 1.0), abs=1e-10)


def test_voronoi_kernel_scaling():
    # y = 4y' turns the kernel of f at x into 4 times the kernel of f(4 .) at 4x
    assert voronoi_kernel(G, 1.0) == pytest.approx(4 * voronoi_kernel(scaled_gaussian(16 * math.pi), 4.0), abs=1e-11)


def test_voronoi_kernel_narrow_support():
    f = scaled_gaussian(1e6)
    val = voronoi_kernel(f, 1.0)
    assert math.isfinite(val)
    assert val == pytest.approx(_kernel_oracle(1e6, 1.0), rel=1e-8)


def test_voronoi_kernel_rejects_bad_x():
    with pytest.raises(ValueError):
        voronoi_kernel(G, -1.0)


# --- Müntz pairs ------------------------------------------------------------

def test_muntz_rhs_anchor():
    value = muntz_rhs(G, 1.0, SeriesSpec(20)).value
    oracle = math.fsum(math.exp(-math.pi * n * n) for n in range(1, 5)) - 0.5
    assert value == pytest.approx(oracle, abs=1e-15)
    assert value == pytest.approx(-0.4567826, abs=1e-7)


def test_muntz_rhs_small_x_and_doubling():
    assert abs(muntz_rhs(G, 1e-3, SeriesSpec(5)).value) < 1e-3
    for x in (0.5, 2.0):
        assert muntz_rhs(G, x, SeriesSpec(20)).value == pytest.approx(muntz_rhs(G, x, SeriesSpec(40)).value, abs=1e-12)


@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, math.e])
@pytest.mark.parametrize("label", ["gaussian", "scaled_gaussian"])
def test_muntz_identity(label, x):
    f = get_function(label)
    lhs = muntz_lhs(f, x, ContourSpec(0.5, 40, 0.05)).real
    assert lhs == pytest.approx(muntz_rhs(f, x, SeriesSpec(20)).value, abs=1e-8)


@pytest.mark.parametrize("fn", [muntz_lhs, muntz2_lhs])
def test_contour_abscissa_independence(fn):
    a = fn(G, 1.0, ContourSpec(0.3, 40, 0.05)).real
    b = fn(G, 1.0, ContourSpec(0.7, 40, 0.05)).real
    assert a == pytest.approx(b, abs=1e-9)


def test_muntz2_lhs_stable_under_height_doubling():
    a = muntz2_lhs(G, 1.0, ContourSpec(0.5, 40, 0.05)).real
    b = muntz2_lhs(G, 1.0, ContourSpec(0.5, 80, 0.05)).real
    assert a == pytest.approx(b, abs=1e-8)


def test_log_weight_integral():
    closed = EULER_GAMMA - (EULER_GAMMA + math.log(4 * math.pi)) / 4
    quad = float(mp.quad(lambda y: mp.exp(-mp.pi * y * y) * (mp.log(y) + 2 * mp.euler), [0, 1, mp.inf]))
    assert closed == pytest.approx(quad, abs=1e-14)
    assert log_weight_integral(G) == pytest.approx(closed, abs=1e-14)
    # numerical path when no closed form is attached
    bare = TestFunction("g", G.eval, 1.0, math.inf)
    assert log_weight_integral(bare) == pytest.approx(closed, abs=1e-12)


def test_muntz2_divisor_weights_match_zeta_squared():
    lhs = muntz2_lhs(G, 1.0, ContourSpec(0.5, 40, 0.05)).real
    assert lhs == pytest.approx(muntz2_rhs(G, 1.0, SeriesSpec(20), weighted=True).value, abs=1e-8)
    unit = muntz2_rhs(G, 1.0, SeriesSpec(20), weighted=False).value
    assert abs(lhs - unit) == pytest.approx(math.exp(-4 * math.pi), rel=1e-3)
