"""Complex special functions: Gamma, zeta, K0, Y0.

All functions accept scalars or arrays and return the same shape.

Algorithms
----------
gamma
    Lanczos (g = 7, nine coefficients) in logarithmic form, reflection for
    Re(s) < 1/2.
zeta
    Borwein's accelerated alternating series for the eta function, with the
    functional equation for Re(s) < 0. The number of terms grows linearly in
    |Im s| so the 1/|Gamma(s)| factor in the error bound is absorbed.
bessel_k0
    Ascending series for |z| <= 2, trapezoid rule on the even integrand of
    ``int_0^inf exp(-z cosh t) dt`` for 2 < |z| < 20, Hankel asymptotic
    series (optimally truncated) beyond.
bessel_y0
    Ascending series for x <= 5, Struve/Laplace integral representation
    ``Y0 = (2/pi)[int_0^{pi/2} sin(x cos v) dv - int_0^inf exp(-x sinh t) dt]``
    for 5 < x < 25, Hankel asymptotic series beyond.
"""
import cmath
import math
import warnings

import numpy as np

from ._jit import njit, select
from .errors import AccuracyWarning

EULER_GAMMA = 0.57721566490153286061

_LOG_PI = math.log(math.pi)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LANCZOS_G = 7.0
_LANCZOS = np.array(
    [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ]
)

_K0_SERIES_RADIUS = 2.0
_K0_ASYMPTOTIC_RADIUS = 20.0
_Y0_SERIES_LIMIT = 5.0
_Y0_ASYMPTOTIC_LIMIT = 25.0

_GL64_X, _GL64_W = np.polynomial.legendre.leggauss(64)


def euler_gamma():
    """Euler-Mascheroni constant."""
    return EULER_GAMMA


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

@njit
def _log_sin_pi(s):
    # log(sin(pi s)) on some branch; only ever exponentiated
    k = math.floor(s.real + 0.5)
    r = s - k
    shift = 1j * math.pi * k
    if abs(r.imag) < 30.0:
        return cmath.log(cmath.sin(math.pi * r)) + shift
    if r.imag > 0:
        return -1j * math.pi * r + cmath.log((cmath.exp(2j * math.pi * r) - 1.0) / 2j) + shift
    return 1j * math.pi * r + cmath.log((1.0 - cmath.exp(-2j * math.pi * r)) / 2j) + shift


@njit
def _lanczos_log(s):
    z = s - 1.0
    acc = _LANCZOS[0] + 0j
    for i in range(1, 9):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


@njit
def _loggamma_scalar(s):
    if s.real >= 0.5:
        return _lanczos_log(s)
    return _LOG_PI - _log_sin_pi(s) - _lanczos_log(1.0 - s)


@njit
def _loggamma_jit(s):
    out = np.empty(s.shape[0], dtype=np.complex128)
    for i in range(s.shape[0]):
        out[i] = _loggamma_scalar(s[i])
    return out


def _log_sin_pi_numpy(s):
    k = np.floor(s.real + 0.5)
    r = s - k
    out = np.empty_like(s)
    small = np.abs(r.imag) < 30.0
    out[small] = np.log(np.sin(np.pi * r[small]))
    up = ~small & (r.imag > 0)
    ru = r[up]
    out[up] = -1j * np.pi * ru + np.log((np.exp(2j * np.pi * ru) - 1.0) / 2j)
    dn = ~small & (r.imag <= 0)
    rd = r[dn]
    out[dn] = 1j * np.pi * rd + np.log((1.0 - np.exp(-2j * np.pi * rd)) / 2j)
    return out + 1j * np.pi * k


def _lanczos_log_numpy(s):
    z = s - 1.0
    acc = np.full_like(z, _LANCZOS[0])
    for i in range(1, 9):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)


def _loggamma_numpy(s):
    out = np.empty_like(s)
    right = s.real >= 0.5
    out[right] = _lanczos_log_numpy(s[right])
    left = ~right
    sl = s[left]
    out[left] = _LOG_PI - _log_sin_pi_numpy(sl) - _lanczos_log_numpy(1.0 - sl)
    return out


_loggamma_impl = select(_loggamma_jit, _loggamma_numpy)


def _complex_input(s):
    arr = np.asarray(s, dtype=np.complex128)
    return arr.ravel(), arr.shape, arr.ndim == 0


def _restore(out, shape, scalar):
    out = out.reshape(shape)
    return out[()] if scalar else out


def _check_gamma_poles(flat):
    bad = (flat.imag == 0) & (flat.real <= 0) & (flat.real == np.round(flat.real))
    if np.any(bad):
        raise ValueError(f"Gamma has a pole at s = {flat[bad][0].real:g}")


def loggamma(s):
    """A logarithm of Gamma(s). The branch is not the principal one in general."""
    flat, shape, scalar = _complex_input(s)
    _check_gamma_poles(flat)
    return _restore(_loggamma_impl(flat), shape, scalar)


def gamma(s):
    """Gamma(s) for complex s off the non-positive integers."""
    flat, shape, scalar = _complex_input(s)
    _check_gamma_poles(flat)
    return _restore(np.exp(_loggamma_impl(flat)), shape, scalar)


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------

def _borwein_terms(t_abs):
    return int(0.9 * t_abs) + 40


@njit
def _borwein_weights(n):
    # w_k = (-1)^k (1 - d_k / d_n), k = 0..n-1
    d = np.empty(n + 1)
    term = 1.0
    d[0] = 1.0
    for i in range(n):
        term *= 4.0 * (n + i) * (n - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0))
        d[i + 1] = d[i] + term
    w = np.empty(n)
    for k in range(n):
        w[k] = (1.0 - d[k] / d[n]) * (1.0 if k % 2 == 0 else -1.0)
    return w


@njit
def _eta_borwein(s, n):
    w = _borwein_weights(n)
    acc = 0j
    for k in range(n):
        acc += w[k] * cmath.exp(-s * math.log(k + 1.0))
    return acc


@njit
def _one_minus_pow2(s):
    # 1 - 2^(1-s) without cancellation near s = 1
    w = (1.0 - s) * math.log(2.0)
    if abs(w) > 0.1:
        return 1.0 - cmath.exp(w)
    term = w
    acc = w
    for k in range(2, 20):
        term *= w / k
        acc += term
    return -acc


@njit
def _zeta_right(s):
    # Re(s) >= 0, s != 1
    n = int(0.9 * abs(s.imag)) + 40
    denom = _one_minus_pow2(s)
    if abs(denom) > 1e-4 or abs(s - 1.0) < 0.5:
        return _eta_borwein(s, n) / denom
    # nonreal zeros of 1 - 2^(1-s) on Re(s) = 1: mean value over a small circle
    acc = 0j
    for j in range(8):
        p = s + 1e-2 * cmath.exp(2j * math.pi * (j + 0.5) / 8)
        acc += _eta_borwein(p, n) / _one_minus_pow2(p)
    return acc / 8


@njit
def _zeta_scalar(s):
    if s.real >= 0.0:
        return _zeta_right(s)
    if s.imag == 0.0 and s.real == math.floor(s.real) and int(s.real) % 2 == 0:
        return 0j
    lf = s * math.log(2.0) + (s - 1.0) * _LOG_PI + _log_sin_pi(0.5 * s) + _loggamma_scalar(1.0 - s)
    return cmath.exp(lf) * _zeta_right(1.0 - s)


@njit
def _zeta_jit(s):
    out = np.empty(s.shape[0], dtype=np.complex128)
    for i in range(s.shape[0]):
        out[i] = _zeta_scalar(s[i])
    return out


def _eta_numpy(s, n):
    w = _borwein_weights_numpy(n)
    logs = np.log(np.arange(1, n + 1, dtype=float))
    out = np.empty_like(s)
    chunk = max(1, 2_000_000 // n)
    for lo in range(0, len(s), chunk):
        part = s[lo : lo + chunk]
        out[lo : lo + chunk] = np.exp(-np.outer(part, logs)) @ w
    return out


def _borwein_weights_numpy(n):
    i = np.arange(n, dtype=float)
    ratios = 4.0 * (n + i) * (n - i) / ((2 * i + 1) * (2 * i + 2))
    d = np.concatenate(([1.0], 1.0 + np.cumsum(np.cumprod(ratios))))
    sign = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return (1.0 - d[:n] / d[n]) * sign


def _zeta_right_numpy(s):
    if len(s) == 0:
        return s.copy()
    n = _borwein_terms(np.max(np.abs(s.imag)))
    denom = -np.expm1((1.0 - s) * math.log(2.0))
    out = np.empty_like(s)
    ok = (np.abs(denom) > 1e-4) | (np.abs(s - 1.0) < 0.5)
    out[ok] = _eta_numpy(s[ok], n) / denom[ok]
    if np.any(~ok):
        ring = 1e-2 * np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)
        pts = (s[~ok][:, None] + ring[None, :]).ravel()
        vals = _eta_numpy(pts, n) / -np.expm1((1.0 - pts) * math.log(2.0))
        out[~ok] = vals.reshape(-1, 8).mean(axis=1)
    return out


def _zeta_numpy(s):
    out = np.empty_like(s)
    right = s.real >= 0
    out[right] = _zeta_right_numpy(s[right])
    left = ~right
    if np.any(left):
        sl = s[left]
        trivial = (sl.imag == 0) & (sl.real == np.floor(sl.real)) & (np.mod(sl.real, 2) == 0)
        lf = (
            sl * math.log(2.0)
            + (sl - 1.0) * _LOG_PI
            + _log_sin_pi_numpy(0.5 * sl + 0j * trivial)
            + _loggamma_numpy(1.0 - sl)
        )
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.exp(lf) * _zeta_right_numpy(1.0 - sl)
        vals[trivial] = 0.0
        out[left] = vals
    return out


_zeta_impl = select(_zeta_jit, _zeta_numpy)


def zeta(s):
    """Riemann zeta function.

    Accurate to better than 1e-10 relative on 0 < Re(s) < 2, |Im(s)| <= 200,
    and via the functional equation to the left of the critical strip.
    """
    flat, shape, scalar = _complex_input(s)
    if np.any(flat == 1.0):
        raise ValueError("zeta has a pole at s = 1")
    if np.any(np.abs(flat.imag) > 200):
        warnings.warn("zeta evaluated beyond |Im s| = 200", AccuracyWarning, stacklevel=2)
    return _restore(_zeta_impl(flat), shape, scalar)


# ---------------------------------------------------------------------------
# K0
# ---------------------------------------------------------------------------

@njit
def _k0_series(z):
    q = 0.25 * z * z
    term = 1.0 + 0j
    i0 = term
    acc = 0j
    harmonic = 0.0
    for k in range(1, 80):
        term *= q / (k * k)
        harmonic += 1.0 / k
        i0 += term
        acc += harmonic * term
        if abs(term) * harmonic < 1e-18 * (abs(acc) + abs(i0)):
            break
    return -(cmath.log(0.5 * z) + EULER_GAMMA) * i0 + acc


@njit
def _k0_integral(z):
    phi = abs(cmath.phase(z))
    width = 0.5 * math.pi - phi
    h = min(0.25, 2.0 * math.pi * width / (40.0 + z.real))
    total = 0.5 * cmath.exp(-z)
    k = 1
    while True:
        ct = math.cosh(k * h)
        v = cmath.exp(-z * ct)
        total += v
        if z.real * ct > 50.0 + z.real or k > 200000:
            break
        k += 1
    return h * total


@njit
def _k0_asymptotic(z):
    term = 1.0 + 0j
    total = term
    for k in range(1, 200):
        nxt = -term * (2.0 * k - 1.0) ** 2 / (8.0 * k * z)
        if abs(nxt) >= abs(term):
            break
        term = nxt
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return cmath.sqrt(math.pi / (2.0 * z)) * cmath.exp(-z) * total


@njit
def _k0_scalar(z):
    r = abs(z)
    if r <= _K0_SERIES_RADIUS:
        return _k0_series(z)
    if r < _K0_ASYMPTOTIC_RADIUS:
        return _k0_integral(z)
    return _k0_asymptotic(z)


@njit
def _k0_jit(z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = _k0_scalar(z[i])
    return out


def _k0_series_numpy(z):
    q = 0.25 * z * z
    term = np.ones_like(z)
    i0 = term.copy()
    acc = np.zeros_like(z)
    harmonic = 0.0
    for k in range(1, 60):
        term = term * q / (k * k)
        harmonic += 1.0 / k
        i0 += term
        acc += harmonic * term
    return -(np.log(0.5 * z) + EULER_GAMMA) * i0 + acc


def _k0_integral_numpy(z):
    out = np.empty_like(z)
    width = 0.5 * np.pi - np.abs(np.angle(z))
    hs = np.minimum(0.25, 2.0 * np.pi * width / (40.0 + z.real))
    # group points that share a step to keep the node matrix small
    for h in np.unique(np.round(hs, 6)):
        idx = np.flatnonzero(np.round(hs, 6) == h)
        h = float(np.min(hs[idx]))
        zz = z[idx]
        tmax = np.arccosh((50.0 + zz.real) / zz.real).max() + h
        t = np.arange(1, int(tmax / h) + 2) * h
        vals = np.exp(-np.outer(zz, np.cosh(t)))
        out[idx] = h * (0.5 * np.exp(-zz) + vals.sum(axis=1))
    return out


def _k0_asymptotic_numpy(z):
    term = np.ones_like(z)
    total = term.copy()
    live = np.ones(z.shape, dtype=bool)
    for k in range(1, 120):
        nxt = -term * (2.0 * k - 1.0) ** 2 / (8.0 * k * z)
        live &= np.abs(nxt) < np.abs(term)
        term = np.where(live, nxt, term)
        total += np.where(live, nxt, 0.0)
        if not live.any():
            break
    return np.sqrt(np.pi / (2.0 * z)) * np.exp(-z) * total


def _k0_numpy(z):
    out = np.empty_like(z)
    r = np.abs(z)
    m1 = r <= _K0_SERIES_RADIUS
    m3 = r >= _K0_ASYMPTOTIC_RADIUS
    m2 = ~m1 & ~m3
    if m1.any():
        out[m1] = _k0_series_numpy(z[m1])
    if m2.any():
        out[m2] = _k0_integral_numpy(z[m2])
    if m3.any():
        out[m3] = _k0_asymptotic_numpy(z[m3])
    return out


_k0_impl = select(_k0_jit, _k0_numpy)


def bessel_k0(z):
    """Modified Bessel function K0(z) for Re(z) > 0.

    Real input returns real output.
    """
    arr = np.asarray(z)
    real_in = not np.iscomplexobj(arr)
    flat, shape, scalar = _complex_input(arr)
    if np.any(~(flat.real > 0)):
        raise ValueError("bessel_k0 requires Re(z) > 0")
    out = _k0_impl(flat)
    if real_in:
        out = out.real
    return _restore(out, shape, scalar)


# ---------------------------------------------------------------------------
# Y0
# ---------------------------------------------------------------------------

@njit
def _y0_series(x):
    q = 0.25 * x * x
    term = 1.0
    j0 = 1.0
    acc = 0.0
    harmonic = 0.0
    for k in range(1, 80):
        term *= -q / (k * k)
        harmonic += 1.0 / k
        j0 += term
        acc += harmonic * term
        if abs(term) * harmonic < 1e-18:
            break
    return (2.0 / math.pi) * ((math.log(0.5 * x) + EULER_GAMMA) * j0 - acc)


@njit
def _y0_integral(x):
    # Struve part over [0, pi/2], Laplace part after u = x sinh t
    struve = 0.0
    for i in range(64):
        v = 0.25 * math.pi * (_GL64_X[i] + 1.0)
        struve += _GL64_W[i] * math.sin(x * math.cos(v))
    struve *= 0.25 * math.pi
    laplace = 0.0
    for a, b in ((0.0, 8.0), (8.0, 48.0)):
        half = 0.5 * (b - a)
        for i in range(64):
            u = a + half * (_GL64_X[i] + 1.0)
            laplace += half * _GL64_W[i] * math.exp(-u) / math.sqrt(u * u + x * x)
    return (2.0 / math.pi) * (struve - laplace)


@njit
def _y0_asymptotic(x):
    # P and Q share the coefficient chain b_k = b_{k-1} (2k-1)^2 / (8k)
    p = 1.0
    q = 0.0
    term = 1.0
    prev = 1.0
    for k in range(1, 200):
        term = term * (2.0 * k - 1.0) ** 2 / (8.0 * k * x)
        if term >= prev:
            break
        prev = term
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            p += sign * term
        else:
            q -= sign * term
        if term < 1e-17:
            break
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.sin(chi) + q * math.cos(chi))


@njit
def _y0_scalar(x):
    if x <= _Y0_SERIES_LIMIT:
        return _y0_series(x)
    if x < _Y0_ASYMPTOTIC_LIMIT:
        return _y0_integral(x)
    return _y0_asymptotic(x)


@njit
def _y0_jit(x):
    out = np.empty(x.shape[0])
    for i in range(x.shape[0]):
        out[i] = _y0_scalar(x[i])
    return out


def _y0_series_numpy(x):
    q = 0.25 * x * x
    term = np.ones_like(x)
    j0 = term.copy()
    acc = np.zeros_like(x)
    harmonic = 0.0
    for k in range(1, 50):
        term = -term * q / (k * k)
        harmonic += 1.0 / k
        j0 += term
        acc += harmonic * term
    return (2.0 / np.pi) * ((np.log(0.5 * x) + EULER_GAMMA) * j0 - acc)


def _y0_integral_numpy(x):
    v = 0.25 * np.pi * (_GL64_X + 1.0)
    struve = 0.25 * np.pi * (np.sin(np.outer(x, np.cos(v))) @ _GL64_W)
    laplace = np.zeros_like(x)
    for a, b in ((0.0, 8.0), (8.0, 48.0)):
        half = 0.5 * (b - a)
        u = a + half * (_GL64_X + 1.0)
        laplace += (np.exp(-u)[None, :] / np.sqrt(u[None, :] ** 2 + x[:, None] ** 2)) @ (half * _GL64_W)
    return (2.0 / np.pi) * (struve - laplace)


def _y0_asymptotic_numpy(x):
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.ones_like(x)
    live = np.ones(x.shape, dtype=bool)
    for k in range(1, 120):
        nxt = term * (2.0 * k - 1.0) ** 2 / (8.0 * k * x)
        live &= (nxt < prev) & (prev >= 1e-17)
        if not live.any():
            break
        term = np.where(live, nxt, term)
        prev = np.where(live, nxt, prev)
        sign = 1.0 if (k // 2) % 2 == 0 else -1.0
        if k % 2 == 0:
            p += np.where(live, sign * nxt, 0.0)
        else:
            q -= np.where(live, sign * nxt, 0.0)
    chi = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.sin(chi) + q * np.cos(chi))


def _y0_numpy(x):
    out = np.empty_like(x)
    m1 = x <= _Y0_SERIES_LIMIT
    m3 = x >= _Y0_ASYMPTOTIC_LIMIT
    m2 = ~m1 & ~m3
    if m1.any():
        out[m1] = _y0_series_numpy(x[m1])
    if m2.any():
        out[m2] = _y0_integral_numpy(x[m2])
    if m3.any():
        out[m3] = _y0_asymptotic_numpy(x[m3])
    return out


_y0_impl = select(_y0_jit, _y0_numpy)


def bessel_y0(x):
    """Bessel function of the second kind Y0(x) for real x > 0."""
    arr = np.asarray(x, dtype=float)
    flat = arr.ravel()
    if np.any(~(flat > 0)):
        raise ValueError("bessel_y0 requires x > 0")
    out = _y0_impl(flat).reshape(arr.shape)
    return out[()] if arr.ndim == 0 else out
