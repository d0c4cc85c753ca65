"""Rearranging the divisor-weighted cosine series built from h(y).

``h(y) = (y(y+1))^(-1/2) F(f)(log(1 + 1/y))`` where F is the cosine
transform of an even test function f (by default ``exp(-x^2/A)``). The
module evaluates

* R1: ``sum_n d(n) F(h)(n)`` directly,
* R2: the Müntz route ``(1/2) sum_m (1/m) (M^-1(zeta M(h))(1/m) + h(0)/2)``,
* R3: the same with the inverse Mellin transform written through G(a, x),

plus the ingredients: the beta integral, the Mellin transform of h through
its Gamma kernel, the Parseval pair and G itself.

Two of the ingredients are stated in a form that differs from the one that
holds numerically; ``variant="printed"`` reproduces the stated form:

* Parseval: the summand must be ``(n x y)^(a-1/2)``; the stated
  ``n^(a-1/2) y^(a-1/2)`` leaves a ``log``-divergent ``1/y`` term unless
  ``x = 1``. The valid strip is ``1/2 - Re a < c < 1``.
* G(a, x) must be normalized by ``1/Gamma(1/2 + a)``; the stated
  normalization is ``1/Gamma(1/2 - a)``.
"""
from dataclasses import dataclass, field
import math
import time
import warnings

import numpy as np
from scipy import integrate, special as sps

from .arith import divisor_count_table
from .errors import ConvergenceWarning
from .quadrature import DEFAULT_QUAD, gauss_legendre
from .report import VerificationReport, check_variant
from .special import gamma, loggamma, zeta
from .transforms import (
    ContourIntegrator,
    ContourSpec,
    SeriesSpec,
    TestFunction,
    fourier_cosine,
    fourier_cosine_detail,
    mellin,
    muntz_lhs,
    scaled_gaussian,
)

DEFAULT_CONTOUR = ContourSpec(0.75, 60.0, 0.05)


# ---------------------------------------------------------------------------
# inputs and h(y)
# ---------------------------------------------------------------------------

def _cosine_rule(f):
    if f.closed_form_cosine is not None:
        return f.closed_form_cosine
    return np.vectorize(lambda w: fourier_cosine(f, w))


def _h_values(y, cos_f):
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    pos = y > 0
    yp = y[pos]
    out[pos] = cos_f(np.log1p(1.0 / yp)) / np.sqrt(yp * (yp + 1.0))
    return out


def motohashi_h(A=1.0, f=None):
    """h(y) for ``f = exp(-x^2/A)`` (or a supplied even f) as a TestFunction.

    ``h(y) ~ F(f)(0) / y`` as y grows, so the tail coefficient is
    ``int_0^inf f``; h vanishes to all orders at 0.
    """
    A = float(A)
    if not A > 0:
        raise ValueError("A must be positive")
    f = f or scaled_gaussian(1.0 / A)
    cos_f = _cosine_rule(f)
    C = float(cos_f(np.array([0.0]))[0])
    if C == 0.0:
        return TestFunction("motohashi-h", lambda y: np.zeros_like(np.asarray(y, dtype=float)), 0.0, math.inf,
                            closed_form_mellin=lambda s: np.zeros_like(np.asarray(s, dtype=complex)),
                            closed_form_cosine=lambda w: np.zeros_like(np.asarray(w, dtype=float)),
                            integral=0.0, log_integral=0.0, mellin_strip=(-math.inf, 1.0), params={"A": A})
    return TestFunction(
        label="motohashi-h",
        eval=lambda y: _h_values(y, cos_f),
        value_at_zero=0.0,
        decay_exponent=1.0,
        tail_coefficient=C,
        scale=0.25,
        mellin_strip=(-math.inf, 1.0),
        params={"A": A, "f": f.label},
    )


def zero_function():
    """f = 0, for degenerate-case checks."""
    return TestFunction(
        label="zero",
        eval=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        value_at_zero=0.0,
        decay_exponent=math.inf,
        closed_form_mellin=lambda s: np.zeros_like(np.asarray(s, dtype=complex)),
        closed_form_cosine=lambda w: np.zeros_like(np.asarray(w, dtype=float)),
        integral=0.0,
        log_integral=0.0,
        mellin_strip=(0.0, math.inf),
    )


@dataclass(frozen=True, eq=False)
class MotohashiInput:
    """Width A of the default Gaussian, truncations, and a contour in (1/2, 1)."""

    A: float = 1.0
    series: SeriesSpec = SeriesSpec(100)
    contour: ContourSpec = DEFAULT_CONTOUR
    f: TestFunction | None = None
    h: TestFunction = field(init=False, repr=False)

    def __post_init__(self):
        if not self.A > 0:
            raise ValueError("A must be positive")
        self.contour.require(0.5, 1.0, "the Mellin transform of h")
        f = self.f or scaled_gaussian(1.0 / self.A)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "h", motohashi_h(self.A, f))

    def support(self):
        """Right end of the numerical support of f."""
        if self.f.label == "zero":
            return 1.0
        x = 1.0
        while abs(float(self.f(x))) > 1e-17 * max(abs(self.f.value_at_zero), 1e-300) and x < 1e4:
            x *= 1.25
        return x


def h_eval(y, inp=MotohashiInput()):
    return inp.h(y)


def h_zero_limit(inp=MotohashiInput(), levels=6):
    """h along y = 10^-k; returns (limit estimate, samples, settled)."""
    ys = 10.0 ** -np.arange(1, levels + 1)
    vals = inp.h(ys)
    settled = bool(abs(vals[-1]) < 1e-12 and abs(vals[-1]) <= abs(vals[-2]) + 1e-300)
    if not settled:
        warnings.warn("h(y) shows no limit as y -> 0", ConvergenceWarning, stacklevel=2)
    return float(vals[-1]) if not settled else 0.0, list(zip(ys.tolist(), vals.tolist())), settled


# ---------------------------------------------------------------------------
# beta integral
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaResult:
    ratio: complex
    quadrature: complex
    error_estimate: float

    @property
    def residual(self):
        return abs(self.ratio - self.quadrature)


def _binomial_tail(rate, v, U, terms=16):
    """``int_U^inf exp(-rate u) (1 + exp(-u))^-v du`` from the binomial series."""
    total, coef = 0j, 1.0 + 0j
    for k in range(terms):
        total += coef * np.exp(-(rate + k) * U) / (rate + k)
        coef *= -(v + k) / (k + 1)
    return total


def beta_integral(s, v, epsabs=1e-14, U=10.0):
    """``int_0^inf y^(s-1) (1+y)^-v dy`` two ways: Gamma ratio and quadrature.

    In ``u = log y`` the quadrature covers |u| <= U; both tails decay slowly
    when Re s or Re(v - s) is small and are summed from the binomial series.
    """
    s, v = complex(s), complex(v)
    if not 0 < s.real < v.real:
        raise ValueError("need 0 < Re(s) < Re(v)")
    ratio = complex(gamma(s) * gamma(v - s) / gamma(v))

    def integrand(u):
        # (1+y)^-v written to avoid overflow for large u
        if u > 0:
            return complex(np.exp((s - v) * u - v * math.log1p(math.exp(-u))))
        return complex(np.exp(s * u - v * math.log1p(math.exp(u))))

    total = _binomial_tail(s, v, U) + _binomial_tail(v - s, v, U)
    err = 0.0
    edges = np.linspace(-U, U, 11)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, e = integrate.quad(integrand, a, b, complex_func=True, epsabs=epsabs, epsrel=1e-13, limit=400)
            total += val
            err += abs(e)
    return BetaResult(ratio, complex(total), err)


# ---------------------------------------------------------------------------
# Mellin transform of h
# ---------------------------------------------------------------------------

def _graded_edges(X, hot, gap, widest=0.5):
    """Panel edges on [0, X] that shrink to ``gap`` near each point in ``hot``."""
    hot = np.asarray(hot, dtype=float)
    edges = [0.0]
    while edges[-1] < X:
        x = edges[-1]
        near = np.abs(hot - x).min() if hot.size else widest
        step = min(widest, 0.75 * max(gap, near))
        edges.append(min(X, x + step))
    return np.array(edges)


def _support_nodes(inp, hot=(0.0,), gap=1.0 / (4 * math.pi), order=24):
    """GL nodes on the numerical support of f, graded toward ``hot`` points.

    Integrands there have complex singularities ``gap`` away from the real
    axis, so uniform panels would converge slowly.
    """
    edges = _graded_edges(inp.support(), hot, gap)
    xg, wg = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def mellin_h(s, inp=MotohashiInput(), route="kernel"):
    """M(h)(s) on 1/2 < Re(s) < 1.

    kernel: ``(1/2) int f(x) Gamma(1-s) [Gamma(s-1/2-2 pi i x)/Gamma(1/2-2 pi i x) + (x -> -x)] dx``.
    direct: numerical Mellin transform of h.
    """
    s = complex(s)
    if not 0.5 < s.real < 1.0:
        raise ValueError("M(h) kernel form needs 1/2 < Re(s) < 1")
    if route == "direct":
        return complex(mellin(inp.h, s, method="quad"))
    if route != "kernel":
        raise ValueError("route must be 'kernel' or 'direct'")
    # the Gamma factors have poles (Re s - 1/2)/(2 pi) off the axis at x = +-Im s/(2 pi)
    x, w = _support_nodes(inp, hot=(0.0, abs(s.imag) / (2 * math.pi)), gap=(s.real - 0.5) / (2 * math.pi))
    fx = inp.f(x)
    y = 2j * math.pi * x
    ker = np.exp(loggamma(s - 0.5 - y) - loggamma(0.5 - y)) + np.exp(loggamma(s - 0.5 + y) - loggamma(0.5 + y))
    return complex(0.5 * gamma(1 - s) * np.sum(w * fx * ker))


# ---------------------------------------------------------------------------
# Parseval pair and G
# ---------------------------------------------------------------------------

def parseval_strip(a, variant="corrected"):
    check_variant(variant)
    a = complex(a)
    lo = a.real - 0.5 if variant == "printed" else 0.5 - a.real
    return lo, 1.0


def _bracket(t, a, zeta_coeffs):
    """``sum_n (n t)^(a-1/2) e^(-n t) - Gamma(a+1/2)/t`` for t > 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    small = t < 1.0
    if np.any(small):
        ts = t[small]
        # t^(a-1/2) sum_k zeta(1/2-a-k) (-t)^k / k!, valid for t < 2 pi
        poly = np.polynomial.polynomial.polyval(-ts, zeta_coeffs)
        out[small] = np.exp((a - 0.5) * np.log(ts)) * poly
    big = ~small
    if np.any(big):
        tb = t[big]
        N = int(math.ceil(40.0 / tb.min())) + 1
        n = np.arange(1, N + 1, dtype=float)
        nt = np.outer(tb, n)
        out[big] = (np.exp((a - 0.5) * np.log(nt) - nt)).sum(axis=1) - complex(gamma(a + 0.5)) / tb
    return out


def _zeta_coefficients(a, K=40):
    k = np.arange(K)
    return np.asarray(zeta(0.5 - a - k), dtype=complex) / sps.factorial(k)


def parseval_lhs_corrected(a, x, u_min=-40.0, u_max=4.0, step=0.02):
    """``int_0^inf (sum_n (nxy)^(a-1/2) e^(-nxy) - Gamma(a+1/2)/(xy)) e^-y dy``.

    Trapezoid rule in u = log y; for small xy the bracket comes from its
    zeta expansion, so nothing cancels. The region below ``u_min`` is the
    leading ``zeta(1/2-a) (xy)^(a-1/2)`` term summed in closed form.
    """
    a, x = complex(a), float(x)
    if not a.real > -0.5:
        raise ValueError("need Re(a) > -1/2")
    coeffs = _zeta_coefficients(a)
    n = int(math.ceil((u_max - u_min) / step))
    u = u_min + step * np.arange(n + 1)
    y = np.exp(u)
    vals = _bracket(x * y, a, coeffs) * np.exp(-y) * y
    w = np.full(n + 1, step)
    w[[0, -1]] *= 0.5
    body = np.sum(w * vals)
    rate = a + 0.5
    q = np.exp(-rate * step)
    left = coeffs[0] * x ** (a - 0.5) * step * np.exp(rate * u_min) * (q / (1 - q) + 0.5)
    return complex(body + left)


def parseval_lhs(a, x, variant="corrected", epsilon=1e-12):
    """Left side of the Parseval pair.

    printed: the summand ``n^(a-1/2) y^(a-1/2)`` equals ``x^(1/2-a)`` times the
    corrected one, leaving ``(Gamma(a+1/2)/x)(x^(1/2-a) - 1) int_eps^inf e^-y/y dy``,
    which diverges like ``log(1/eps)`` unless x = 1. Returns
    ``(value at epsilon, coefficient of log(1/eps))``.
    """
    check_variant(variant)
    a, x = complex(a), float(x)
    base = parseval_lhs_corrected(a, x)
    if variant == "corrected":
        return base, 0.0
    shift = x ** (0.5 - a)
    coef = complex(gamma(a + 0.5)) / x * (shift - 1.0)
    return shift * base + coef * float(sps.exp1(epsilon)), coef


def parseval_rhs(a, x, contour=DEFAULT_CONTOUR):
    """``(1/2 pi i) int_(c) x^-s zeta(s) Gamma(s+a-1/2) Gamma(1-s) ds``."""
    a = complex(a)
    ci = ContourIntegrator(contour)
    s = ci.s
    vals = zeta(s) * np.exp(loggamma(s + a - 0.5) + loggamma(1 - s))
    return ci.integrate(vals, x, sign=-1)


def parseval_check(a, x, contour=DEFAULT_CONTOUR, variant="printed", tol=1e-6):
    """Both sides of the Parseval pair for real or complex a."""
    start = time.perf_counter()
    lo, hi = parseval_strip(a, variant)
    contour.require(lo, hi, f"the Parseval contour ({variant} strip)")
    lhs, coef = parseval_lhs(a, x, variant)
    rhs = parseval_rhs(a, x, contour)
    rhs2 = parseval_rhs(a, x, contour.with_(height=2 * contour.height))
    return VerificationReport.build(
        "parseval_3_5",
        {"a": complex(a), "x": x, "c": contour.abscissa, "T": contour.height, "variant": variant},
        lhs=lhs,
        rhs=rhs.value,
        tolerance=tol,
        diagnostics=[
            ("rhs_2T", rhs2.value),
            ("rhs_tail", rhs.tail),
            ("log_divergence_coefficient", coef),
            ("lhs_corrected", parseval_lhs_corrected(a, x)),
        ],
        start=start,
    )


def _g_norm(a, variant):
    return complex(gamma(0.5 - a)) if variant == "printed" else complex(gamma(0.5 + a))


def g_function(a, x, variant="corrected", route="contour", contour=None):
    """G(a, x) = (Parseval integral) / Gamma(1/2 -+ a).

    The integral is always taken in its convergent form; ``variant`` only
    selects the normalization (printed ``Gamma(1/2 - a)``, corrected
    ``Gamma(1/2 + a)``).
    """
    check_variant(variant)
    a = complex(a)
    if route == "direct":
        return parseval_lhs_corrected(a, x) / _g_norm(a, variant)
    if route != "contour":
        raise ValueError("route must be 'contour' or 'direct'")
    contour = contour or DEFAULT_CONTOUR.with_(height=abs(a.imag) + 45.0)
    contour.require(0.5 - a.real, 1.0, "G(a, x)")
    ci = ContourIntegrator(contour)
    s = ci.s
    logs = loggamma(s + a - 0.5) + loggamma(1 - s) - complex(loggamma(0.5 - a if variant == "printed" else 0.5 + a))
    vals = zeta(s) * np.exp(logs)
    return ci.integrate(vals, x, sign=-1).value


def _g_batch(a_values, ms, contour, variant):
    """G(a, 1/m) for every a in ``a_values`` and m in ``ms`` on one shared grid."""
    ci = ContourIntegrator(contour)
    s = ci.s
    base = zeta(s) * np.exp(loggamma(1 - s)) * ci.weight
    phase = np.exp(np.outer(s, np.log(ms)))  # (1/m)^-s
    out = np.empty((len(a_values), len(ms)), dtype=complex)
    for i, a in enumerate(a_values):
        norm = 0.5 - a if variant == "printed" else 0.5 + a
        row = base * np.exp(loggamma(s + a - 0.5) - complex(loggamma(norm)))
        out[i] = row @ phase
    return out


# ---------------------------------------------------------------------------
# the three routes
# ---------------------------------------------------------------------------

def route_r1(inp, N=None, quad=DEFAULT_QUAD):
    """``sum_{n<=N} d(n) F(h)(n)`` by direct cosine transforms."""
    N = inp.series.cutoff if N is None else N
    d = divisor_count_table(N)
    terms, worst = [], 0.0
    for n in range(1, N + 1):
        res = fourier_cosine_detail(inp.h, n, quad)
        worst = max(worst, res.tail_error)
        terms.append(d[n] * res.value)
    return math.fsum(terms), worst


def route_r2(inp, M, contour=None):
    """``(1/2) sum_{m<=M} (1/m) (M^-1(zeta M(h))(1/m) + h(0)/2)``."""
    contour = contour or inp.contour
    h0 = inp.h.value_at_zero
    terms, tails = [], []
    for m in range(1, M + 1):
        res = muntz_lhs(inp.h, m, contour)
        terms.append((res.value.real + 0.5 * h0) / m)
        tails.append(res.tail)
    return 0.5 * math.fsum(terms), max(tails)


def route_r3(inp, M, variant="corrected", contour=None, order=24, g_variant=None):
    """The G-function route.

    corrected: ``(1/2) sum_m (1/m) ((1/2) int f (G(2 pi i x, 1/m) + G(-2 pi i x, 1/m)) dx + h(0)/2)``.
    printed: a quarter of the closing display
    ``2 sum_m (1/m) (int f (G + G) dx + h(0)/2)`` with the stated G normalization.
    ``g_variant`` overrides the G normalization alone.
    """
    check_variant(variant)
    g_variant = check_variant(g_variant or variant)
    contour = contour or inp.contour
    # G(a, .) is singular at Re a = -1/2, i.e. 1/(4 pi) off the axis at x = 0
    x, w = _support_nodes(inp, order=order)
    top = 2 * math.pi * x.max()
    grid = contour.with_(height=max(contour.height, top + 45.0))
    a_vals = np.concatenate((2j * math.pi * x, -2j * math.pi * x))
    ms = np.arange(1, M + 1, dtype=float)
    G = _g_batch(a_vals, ms, grid, g_variant)
    fx = inp.f(x) * w
    n = len(x)
    integral = fx @ (G[:n] + G[n:])  # one value per m
    h0 = inp.h.value_at_zero
    if variant == "corrected":
        terms = (0.5 * integral + 0.5 * h0) / ms
        return 0.5 * complex(np.sum(terms)).real
    display = 2 * np.sum((integral + 0.5 * h0) / ms)
    return 0.25 * complex(display).real


def verify_rearrangement(inp=MotohashiInput(), M_cutoff=20, variant="printed", quad=DEFAULT_QUAD,
                         tol_r2_r3=1e-5, tol_r1_r2=1e-3):
    """R2 vs R3 (the report's lhs/rhs) with R1 vs R2 and both normalizations in diagnostics.

    Returns two reports: (R2 vs R3, R1 vs R2).
    """
    check_variant(variant)
    start = time.perf_counter()
    r1, r1_err = route_r1(inp, quad=quad)
    r2, r2_tail = route_r2(inp, M_cutoff)
    r2_long, _ = route_r2(inp, 2 * M_cutoff)
    r3 = route_r3(inp, M_cutoff, variant)
    other = "corrected" if variant == "printed" else "printed"
    r3_other = route_r3(inp, M_cutoff, other)
    params = {"A": inp.A, "N": inp.series.cutoff, "M": M_cutoff, "c": inp.contour.abscissa,
              "T": inp.contour.height, "h": inp.contour.step, "variant": variant}
    shared = [
        ("R1", r1),
        ("R2", r2),
        ("R2_2M", r2_long),
        ("R3_" + variant, r3),
        ("R3_" + other, r3_other),
        ("R3_printed_display_corrected_G", route_r3(inp, M_cutoff, "printed", g_variant="corrected")),
        ("R3_corrected_display_printed_G", route_r3(inp, M_cutoff, "corrected", g_variant="printed")),
        ("R1_tail_error", r1_err),
        ("R2_contour_tail", r2_tail),
        ("h0", inp.h.value_at_zero),
    ]
    rep23 = VerificationReport.build("rearrangement_3", {**params, "pair": "R2-R3"}, r2, r3, tol_r2_r3,
                                     shared, start=start)
    rep12 = VerificationReport.build("rearrangement_3", {**params, "pair": "R1-R2"}, r1, r2, tol_r1_r2,
                                     shared, start=start)
    return rep23, rep12
