"""Mellin, inverse Mellin, cosine and Voronoi-kernel transforms.

Conventions
-----------
``mellin(f)(s) = int_0^inf x^(s-1) f(x) dx``

``inverse_mellin(F, x) = (1/2 pi i) int_(c) x^(-s) F(s) ds``, computed by the
trapezoid rule in ``t`` on ``s = c + i t``, ``|t| <= T``.

``fourier_cosine(f)(w) = int_0^inf cos(2 pi w x) f(x) dx``
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate, special as sps

from .arith import divisor_count_table
from .errors import ConvergenceWarning, TailWarning
from .quadrature import (
    DEFAULT_QUAD,
    integrate_graded,
    integrate_panels,
    oscillatory_tail,
)
from .special import EULER_GAMMA, gamma, zeta


# ---------------------------------------------------------------------------
# parameter records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourSpec:
    """Vertical line ``Re s = abscissa`` truncated at ``|Im s| <= height``.

    Which abscissae are legal depends on the integrand, so each operation
    checks its own strip via :meth:`require`.
    """

    abscissa: float = 0.5
    height: float = 40.0
    step: float = 0.05

    def __post_init__(self):
        for name in ("abscissa", "height", "step"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.height <= 0:
            raise ValueError("height T must be positive")
        if not 0 < self.step <= self.height / 10:
            raise ValueError("step h must satisfy 0 < h <= T/10")

    def require(self, lo, hi, what="this integrand"):
        if not lo < self.abscissa < hi:
            raise ValueError(f"abscissa c = {self.abscissa} outside ({lo:g}, {hi:g}) required by {what}")
        return self

    def with_(self, **changes):
        return ContourSpec(**{**self.__dict__, **changes})

    @property
    def t(self):
        k = int(math.floor(self.height / self.step + 1e-9))
        return self.step * np.arange(-k, k + 1, dtype=float)

    @property
    def s(self):
        return self.abscissa + 1j * self.t


SMOOTHING_MODES = ("none", "abel", "cesaro")


@dataclass(frozen=True)
class SeriesSpec:
    """Truncation at ``cutoff`` with optional smoothing.

    ``abel`` multiplies term n by ``exp(-delta n)`` (``delta`` defaults to
    10/N); ``cesaro`` takes the (C,1) mean of the partial sums.
    """

    cutoff: int = 100
    smoothing: str = "none"
    delta: float | None = None

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError("cutoff N must be a positive integer")
        object.__setattr__(self, "cutoff", int(self.cutoff))
        if self.smoothing not in SMOOTHING_MODES:
            raise ValueError(f"smoothing must be one of {SMOOTHING_MODES}")
        if self.smoothing == "abel":
            if self.delta is None:
                object.__setattr__(self, "delta", 10.0 / self.cutoff)
            if not self.delta > 0:
                raise ValueError("abel smoothing needs delta > 0")

    def with_(self, **changes):
        return SeriesSpec(**{**self.__dict__, **changes})

    def weights(self):
        """Multipliers for terms n = 0..N (slot 0 is zero)."""
        n = np.arange(self.cutoff + 1, dtype=float)
        if self.smoothing == "abel":
            w = np.exp(-self.delta * n)
        elif self.smoothing == "cesaro":
            w = 1.0 - (n - 1.0) / self.cutoff
        else:
            w = np.ones_like(n)
        w[0] = 0.0
        return w


# ---------------------------------------------------------------------------
# test functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TestFunction:
    """A test function on (0, inf) plus whatever is known about it in closed form.

    ``tail_coefficient`` C is set for functions with ``f(x) ~ C/x``; such
    functions have ``decay_exponent`` 1 and their cosine transforms are
    computed after subtracting ``C/(1+x)``.
    """

    __test__ = False  # keep pytest from collecting it

    label: str
    eval: object = field(repr=False)
    value_at_zero: float
    decay_exponent: float
    closed_form_mellin: object = field(default=None, repr=False)
    closed_form_cosine: object = field(default=None, repr=False)
    integral: float | None = None
    log_integral: float | None = None
    tail_coefficient: float | None = None
    scale: float = 1.0
    mellin_strip: tuple = (0.0, 1.0)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        m = self.decay_exponent
        if not (m > 1 or (m == 1 and self.tail_coefficient is not None)):
            raise ValueError("decay exponent must exceed 1 (or equal 1 with a known 1/x tail)")

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        out = np.asarray(self.eval(arr.ravel())).reshape(arr.shape)
        return out[()] if arr.ndim == 0 else out


def scaled_gaussian(a=1.0, label=None):
    """``exp(-a x^2)`` with every transform in closed form."""
    a = float(a)
    if not a > 0:
        raise ValueError("Gaussian width parameter must be positive")
    root = math.sqrt(math.pi / a)
    return TestFunction(
        label=label or f"scaled_gaussian(a={a:g})",
        eval=lambda x: np.exp(-a * x * x),
        value_at_zero=1.0,
        decay_exponent=math.inf,
        closed_form_mellin=lambda s: 0.5 * np.exp(-0.5 * np.asarray(s) * math.log(a)) * gamma(0.5 * np.asarray(s)),
        closed_form_cosine=lambda w: 0.5 * root * np.exp(-(math.pi**2) * np.asarray(w, dtype=float) ** 2 / a),
        integral=0.5 * root,
        # derivative of the Mellin transform at s = 1; psi(1/2) = -gamma - 2 log 2
        log_integral=0.25 * root * (-EULER_GAMMA - 2 * math.log(2) - math.log(a)),
        scale=min(1.0, 1.0 / math.sqrt(a)),
        mellin_strip=(0.0, math.inf),
        params={"a": a},
    )


def gaussian():
    """``exp(-pi x^2)``, self-reciprocal under the full-line Fourier transform."""
    return scaled_gaussian(math.pi, label="gaussian")


def davenport_mellin(s, x0, variant="corrected"):
    """Mellin transform of the Davenport kernel.

    ``corrected``: ``+pi x0^s / (2 s)``. ``printed`` carries the opposite sign.
    """
    s = np.asarray(s)
    sign = -1.0 if variant == "printed" else 1.0
    return sign * math.pi * np.exp(s * math.log(x0)) / (2 * s)


def davenport_kernel(x0=math.sqrt(2)):
    """``int_0^inf cos(2 pi y w) sin(2 pi x0 y) / y dy``: a step of height pi/2 on [0, x0)."""
    x0 = float(x0)
    if not x0 > 0:
        raise ValueError("x0 must be positive")

    def step(w):
        return np.where(w < x0, 0.5 * math.pi, np.where(w == x0, 0.25 * math.pi, 0.0))

    def cosine(w):
        w = np.asarray(w, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.sin(2 * math.pi * w * x0) / (4 * w)
        return np.where(w == 0, 0.5 * math.pi * x0, out)

    return TestFunction(
        label="davenport",
        eval=step,
        value_at_zero=0.5 * math.pi,
        decay_exponent=math.inf,
        closed_form_mellin=lambda s: davenport_mellin(s, x0),
        closed_form_cosine=cosine,
        integral=0.5 * math.pi * x0,
        log_integral=0.5 * math.pi * x0 * (math.log(x0) - 1.0),
        scale=x0,
        mellin_strip=(0.0, math.inf),
        params={"x0": x0},
    )


def _koshlyakov_factory(z=1.0):
    from .koshlyakov import koshlyakov_test_function

    return koshlyakov_test_function(z)


def _motohashi_factory(A=1.0):
    from .motohashi import motohashi_h

    return motohashi_h(A)


REGISTRY = {
    "gaussian": gaussian,
    "scaled_gaussian": scaled_gaussian,
    "davenport": davenport_kernel,
    "koshlyakov-f": _koshlyakov_factory,
    "motohashi-h": _motohashi_factory,
}


def get_function(label, **params):
    """Build a registry function by label, forwarding keyword parameters."""
    try:
        factory = REGISTRY[label]
    except KeyError:
        raise KeyError(f"unknown test function {label!r}; choose from {sorted(REGISTRY)}") from None
    return factory(**params)


# ---------------------------------------------------------------------------
# Mellin transform
# ---------------------------------------------------------------------------

def _check_mellin_strip(f, s):
    lo, hi = f.mellin_strip
    re = np.real(s)
    if np.any(re <= lo) or np.any(re >= hi):
        raise ValueError(f"Re(s) must lie in ({lo:g}, {hi:g}) for {f.label}")


def _log_window(f, re_s, u_min):
    # upper end of the log-variable range
    if f.tail_coefficient is not None:
        return 40.0
    u = np.arange(0.0, 80.0, 0.25)
    mag = np.abs(f(np.exp(u))) * np.exp(re_s * u)
    big = np.flatnonzero(mag > 1e-19 * max(mag.max(), 1e-300))
    return float(u[big[-1]] + 0.5) if big.size else 1.0


def _tail_corrections(f, s, u_min, u_max, step=None):
    """Contribution of f ~ f(0) left of ``u_min`` and f ~ C/x right of ``u_max``.

    With ``step`` the tails are the geometric sums the trapezoid rule would
    collect on an unbounded grid (including the missing half weight at each
    end), which keeps the rule spectrally accurate. Without ``step`` they
    are the exact integrals.
    """
    if step is None:
        total = f.value_at_zero * np.exp(s * u_min) / s
    else:
        q = np.exp(-s * step)
        total = f.value_at_zero * step * np.exp(s * u_min) * (q / (1.0 - q) + 0.5)
    if f.tail_coefficient is not None:
        C = f.tail_coefficient
        if step is None:
            total = total - C * np.exp((s - 1.0) * u_max) / (s - 1.0)
        else:
            q = np.exp((s - 1.0) * step)
            total = total + C * step * np.exp((s - 1.0) * u_max) * (q / (1.0 - q) + 0.5)
    return total


def mellin(f, s, method="quad", u_min=-40.0, step=0.01, epsabs=1e-13):
    """Numerical Mellin transform of ``f`` at ``s`` (scalar or array).

    The integral is split at x = 1 and both halves are taken in the variable
    ``u = log x``. Leading behaviour beyond the window (``f(0)`` on the left,
    a ``C/x`` tail on the right) is added in closed form.

    method="quad" runs adaptive quadrature per point; "trapezoid" sweeps all
    points with one shared log-grid and is geometrically convergent for
    functions analytic in a sector around the positive axis.
    """
    s_arr = np.atleast_1d(np.asarray(s, dtype=np.complex128))
    _check_mellin_strip(f, s_arr)
    u_max = _log_window(f, float(np.max(s_arr.real)), u_min)
    if method == "trapezoid":
        n = int(math.ceil((u_max - u_min) / step))
        u_max = u_min + n * step
        u = u_min + step * np.arange(n + 1)
        wts = np.full(n + 1, step)
        wts[[0, -1]] *= 0.5
        fx = f(np.exp(u)) * wts
        out = np.empty_like(s_arr)
        chunk = max(1, 4_000_000 // len(u))
        for lo in range(0, len(s_arr), chunk):
            part = s_arr[lo : lo + chunk]
            out[lo : lo + chunk] = np.exp(np.outer(part, u)) @ fx
        out = out + _tail_corrections(f, s_arr, u_min, u_max, step)
    elif method == "quad":
        out = np.array([_mellin_quad(f, sv, u_min, u_max, epsabs) for sv in s_arr])
        out = out + _tail_corrections(f, s_arr, u_min, u_max)
    else:
        raise ValueError("method must be 'quad' or 'trapezoid'")
    return out[0] if np.ndim(s) == 0 else out.reshape(np.shape(s))


def _mellin_quad(f, s, u_min, u_max, epsabs):
    def integrand(u):
        return complex(np.exp(s * u) * f(math.exp(u)))

    total = 0j
    worst = 0.0
    inner = [float(v) for v in np.arange(math.ceil(u_min / 4) * 4, u_max, 4.0) if u_min < v < u_max]
    edges = [u_min, *inner, u_max]
    with warnings.catch_warnings():
        # quadpack flags roundoff once it reaches machine precision; the
        # returned error estimate is checked instead
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        for a, b in zip(edges[:-1], edges[1:]):
            val, err = integrate.quad(
                integrand, a, b, complex_func=True, epsabs=epsabs / len(edges), epsrel=1e-13, limit=200
            )
            total += val
            worst = max(worst, abs(err))
    if worst > 1e3 * epsabs:
        warnings.warn(f"Mellin quadrature error estimate {worst:.1e} at s={s}", ConvergenceWarning, stacklevel=3)
    return total


def mellin_on_contour(f, contour, method="auto"):
    """Mellin values of ``f`` on the contour nodes, cached per (f, contour)."""
    return _mellin_nodes(f, contour, method)


@lru_cache(maxsize=64)
def _mellin_nodes(f, contour, method):
    s = contour.s
    if method == "auto":
        method = "closed" if f.closed_form_mellin is not None else "trapezoid"
    if method == "closed":
        vals = np.asarray(f.closed_form_mellin(s), dtype=np.complex128)
    else:
        vals = mellin(f, s, method="trapezoid")
    vals.setflags(write=False)
    return vals


# ---------------------------------------------------------------------------
# inverse Mellin on a vertical line
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContourResult:
    value: complex
    tail: float
    nodes: int

    @property
    def real(self):
        return self.value.real


class ContourIntegrator:
    """Trapezoid rule for ``(1/2 pi i) int x^(sign*s) values(s) ds`` on fixed nodes.

    Node values are supplied once and reused for every ``x``.
    """

    def __init__(self, contour):
        self.contour = contour
        self.s = contour.s
        self.t = contour.t
        self.weight = contour.step / (2 * math.pi)
        self._last_decade = np.abs(self.t) > 0.9 * contour.height

    def integrate(self, values, x, sign=-1):
        x = float(x)
        if not x > 0:
            raise ValueError("x must be positive")
        terms = np.exp(sign * self.s * math.log(x)) * values * self.weight
        total = complex(math.fsum(terms.real), math.fsum(terms.imag))
        tail = float(np.sum(np.abs(terms[self._last_decade])))
        return ContourResult(total, tail, len(terms))

    def integrate_many(self, values, xs, sign=-1):
        xs = np.asarray(xs, dtype=float)
        phase = np.exp(sign * np.outer(np.log(xs), self.s))
        return (phase * (values * self.weight)[None, :]).sum(axis=1)


def inverse_mellin(F, x, contour=ContourSpec(), tol=None):
    """``(1/2 pi i) int_(c) x^(-s) F(s) ds`` with a tail estimate.

    ``F`` is a vectorized callable of complex ``s``. The tail estimate is
    the summed magnitude of the nodes with ``|t| > 0.9 T``; a
    :class:`TailWarning` is raised when it exceeds ``tol``.
    """
    ci = ContourIntegrator(contour)
    res = ci.integrate(np.asarray(F(ci.s), dtype=np.complex128), x, sign=-1)
    if tol is not None and res.tail > tol:
        warnings.warn(f"contour tail {res.tail:.2e} exceeds {tol:.1e}", TailWarning, stacklevel=2)
    return res


# ---------------------------------------------------------------------------
# cosine transform and the Voronoi kernel
# ---------------------------------------------------------------------------

def cosine_of_shifted_reciprocal(omega):
    """``int_0^inf cos(omega x) / (1 + x) dx`` for omega > 0."""
    si, ci = sps.sici(omega)
    return -math.cos(omega) * ci - math.sin(omega) * (si - 0.5 * math.pi)


def half_line_integral(f, quad=DEFAULT_QUAD):
    """``int_0^inf f``, from the registry when known."""
    if f.integral is not None:
        return f.integral
    if f.tail_coefficient is not None:
        raise ValueError(f"{f.label} is not integrable on (0, inf)")
    val, _ = integrate.quad(lambda x: float(f(x)), 0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=400)
    return val


@dataclass(frozen=True)
class OscillatoryResult:
    value: float
    head: float
    tail_error: float
    panels: int
    converged: bool


def _head_integral(g, end, quad, scale):
    # graded toward 0, then uniform pieces no longer than ``scale``
    first = min(end, scale)
    head = integrate_graded(g, 0.0, first, quad.order, quad.graded_levels)
    if end > first:
        pieces = max(1, math.ceil((end - first) / scale))
        head += float(np.sum(integrate_panels(g, np.linspace(first, end, pieces + 1), quad.order)))
    return head


def fourier_cosine_detail(f, w, quad=DEFAULT_QUAD):
    w = abs(float(w))
    C = f.tail_coefficient
    if w == 0:
        return OscillatoryResult(half_line_integral(f, quad), 0.0, 0.0, 0, True)
    omega = 2 * math.pi * w

    if C is None:
        def g(x):
            return f(x) * np.cos(omega * x)
    else:
        def g(x):
            return (f(x) - C / (1.0 + x)) * np.cos(omega * x)

    start = 0.25 / w  # first zero of the cosine
    head = _head_integral(g, start, quad, min(quad.scale, f.scale))
    tail = oscillatory_tail(g, start, 0.5 / w, quad.__class__(**{**quad.__dict__, "scale": min(quad.scale, f.scale)}),
                            label=f"cosine transform of {f.label} at w={w:g}")
    value = head + float(np.real(tail.value))
    if C is not None:
        value += C * cosine_of_shifted_reciprocal(omega)
    return OscillatoryResult(value, head, tail.error, tail.panels, tail.converged)


def fourier_cosine(f, w, quad=DEFAULT_QUAD):
    """``int_0^inf cos(2 pi w x) f(x) dx`` by half-period panel quadrature."""
    return fourier_cosine_detail(f, w, quad).value


_Y0_FIRST_ZERO = 0.8935769662791675


def voronoi_kernel_detail(f, x, quad=DEFAULT_QUAD):
    from .special import bessel_k0, bessel_y0

    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    a = 4 * math.pi * math.sqrt(x)

    def g(u):
        # y = u^2, dy = 2u du
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        pos = u > 0
        au = a * u[pos]
        out[pos] = 2 * u[pos] * f(u[pos] ** 2) * (4 * bessel_k0(au) - 2 * math.pi * bessel_y0(au))
        return out

    start = _Y0_FIRST_ZERO / a
    scale = min(quad.scale, math.sqrt(f.scale))
    head = _head_integral(g, start, quad, scale)
    params = quad.__class__(**{**quad.__dict__, "scale": scale})
    tail = oscillatory_tail(g, start, math.pi / a, params, label=f"Voronoi kernel of {f.label} at x={x:g}")
    return OscillatoryResult(head + float(np.real(tail.value)), head, tail.error, tail.panels, tail.converged)


def voronoi_kernel(f, x, quad=DEFAULT_QUAD):
    """``int_0^inf f(y) (4 K0(4 pi sqrt(xy)) - 2 pi Y0(4 pi sqrt(xy))) dy`` via ``y = u^2``."""
    return voronoi_kernel_detail(f, x, quad).value


# ---------------------------------------------------------------------------
# Müntz pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesResult:
    value: float
    tail: float
    terms: int


def _tail_bound(f, x, N):
    y = (N + 1) / x
    fy = abs(float(f(y)))
    m = f.decay_exponent
    return fy * x * (y / (m - 1) if math.isfinite(m) else 1.0)


def muntz_rhs(f, x, series=SeriesSpec(20), quad=DEFAULT_QUAD):
    """``-x int_0^inf f + sum_{n<=N} f(n/x)`` with a decay-based tail bound."""
    x = float(x)
    if not x > 0:
        raise ValueError("x must be positive")
    N = series.cutoff
    n = np.arange(1, N + 1, dtype=float)
    terms = f(n / x) * series.weights()[1:]
    value = math.fsum(terms) - x * half_line_integral(f, quad)
    return SeriesResult(value, _tail_bound(f, x, N), N)


def log_weight_integral(f, x=1.0, quad=DEFAULT_QUAD):
    """``int_0^inf f(y/x) (log y + 2 gamma) dy``."""
    x = float(x)
    i0 = half_line_integral(f, quad)
    i1 = f.log_integral
    if i1 is None:
        i1, _ = integrate.quad(lambda y: float(f(y)) * math.log(y), 0, math.inf, epsabs=1e-14, limit=400)
    return x * ((math.log(x) + 2 * EULER_GAMMA) * i0 + i1)


def muntz2_rhs(f, x, series=SeriesSpec(20), weighted=True, quad=DEFAULT_QUAD):
    """``-int f(y/x)(log y + 2 gamma) dy + sum_n w(n) f(n/x)``.

    ``weighted=True`` uses divisor-count weights ``w = sigma``; ``False``
    uses plain unit weights.
    """
    x = float(x)
    N = series.cutoff
    n = np.arange(1, N + 1, dtype=float)
    w = divisor_count_table(N)[1:].astype(float) if weighted else np.ones(N)
    terms = w * f(n / x) * series.weights()[1:]
    value = math.fsum(terms) - log_weight_integral(f, x, quad)
    return SeriesResult(value, _tail_bound(f, x, N) * (math.log(N + 1) + 1), N)


def _zeta_nodes(contour, power):
    return _zeta_power(contour, power)


@lru_cache(maxsize=32)
def _zeta_power(contour, power):
    z = zeta(contour.s) ** power
    z.setflags(write=False)
    return z


def muntz_lhs(f, x, contour=ContourSpec(), power=1):
    """``(1/2 pi i) int_(c) x^s zeta(s)^power M(f)(s) ds`` on 0 < c < 1."""
    contour.require(0.0, 1.0, "the Müntz contour")
    values = _zeta_nodes(contour, power) * mellin_on_contour(f, contour)
    return ContourIntegrator(contour).integrate(values, x, sign=+1)


def muntz2_lhs(f, x, contour=ContourSpec()):
    """Same as :func:`muntz_lhs` with ``zeta^2``."""
    return muntz_lhs(f, x, contour, power=2)


def poisson_cosine_sides(f, N=20, quad=DEFAULT_QUAD):
    """Both sides of ``f(0)/2 + sum f(n) = int f + 2 sum F(f)(n)``."""
    n = np.arange(1, N + 1, dtype=float)
    lhs = 0.5 * f.value_at_zero + math.fsum(f(n))
    cos_terms = [fourier_cosine(f, k, quad) for k in range(1, N + 1)]
    rhs = half_line_integral(f, quad) + 2 * math.fsum(cos_terms)
    return lhs, rhs
