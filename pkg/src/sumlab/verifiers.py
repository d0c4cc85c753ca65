"""Two-sided checks of the cosine/Müntz summation identities.

Each ``verify_*`` function evaluates both sides independently and returns a
:class:`~sumlab.report.VerificationReport`. Where a formula is known in two
readings, ``variant`` picks one:

* Berndt's restricted sums: printed ``a(n, S) = sum_{d|n, d in S} a(d)``;
  corrected uses ``b(d)``, the only choice consistent with S = N giving the
  cosine-Müntz theorem.
* Voronoi for the divisor function: printed ``f(0)/2 + sum``; corrected
  ``sum - f(0)/4``.
* The divisor-Müntz theorem: printed ``+ f(0)/2`` per m; corrected
  ``- f(0)/4``, following from the corrected Voronoi formula.
* The ζ² Müntz formula: printed unit weights ``sum f(n/x)``; corrected
  divisor-count weights.
"""
from fractions import Fraction
import math
import numbers
import time

import numpy as np

from .arith import (
    ArithmeticSequence,
    DivisorSet,
    compose_c,
    divisor_count_table,
    restricted_table,
    unit_sequence,
)
from .quadrature import DEFAULT_QUAD
from .report import VerificationReport, check_variant
from .transforms import (
    ContourSpec,
    SeriesSpec,
    fourier_cosine,
    gaussian,
    half_line_integral,
    log_weight_integral,
    muntz2_lhs,
    muntz2_rhs,
    muntz_lhs,
    muntz_rhs,
    poisson_cosine_sides,
    voronoi_kernel_detail,
)

DEFAULT_CONTOUR = ContourSpec(0.5, 40.0, 0.05)
SQRT2 = math.sqrt(2.0)
GOLDEN = (1 + math.sqrt(5.0)) / 2


def _real_if_close(z, tol=1e-13):
    z = complex(z)
    return z.real if abs(z.imag) <= tol * max(1.0, abs(z.real)) else z


def _cutoff(seq, series):
    N = series.cutoff
    if N > seq.cutoff:
        raise ValueError(f"series cutoff {N} exceeds the sequence cutoff {seq.cutoff}")
    return N


# ---------------------------------------------------------------------------
# building blocks
# ---------------------------------------------------------------------------

def verify_muntz(f=None, x=1.0, contour=DEFAULT_CONTOUR, series=SeriesSpec(20), quad=DEFAULT_QUAD, tol=1e-7):
    """Contour ``(1/2 pi i) int x^s zeta M(f)`` vs ``sum f(n/x) - x int f``."""
    start = time.perf_counter()
    f = f or gaussian()
    lhs = muntz_lhs(f, x, contour)
    lhs2 = muntz_lhs(f, x, contour.with_(height=2 * contour.height))
    rhs = muntz_rhs(f, x, series, quad)
    rhs2 = muntz_rhs(f, x, series.with_(cutoff=2 * series.cutoff), quad)
    return VerificationReport.build(
        "muntz",
        {"f": f.label, "x": x, "c": contour.abscissa, "T": contour.height, "h": contour.step, "N": series.cutoff},
        _real_if_close(lhs.value), rhs.value, tol,
        [("lhs_T", lhs.value), ("lhs_2T", lhs2.value), ("contour_tail", lhs.tail),
         ("rhs_N", rhs.value), ("rhs_2N", rhs2.value), ("series_tail_bound", rhs.tail)],
        start=start,
    )


def verify_muntz2(f=None, x=1.0, contour=DEFAULT_CONTOUR, series=SeriesSpec(20), quad=DEFAULT_QUAD,
                  variant="printed", tol=1e-7):
    """ζ² contour vs ``sum w(n) f(n/x) - int f(y/x)(log y + 2 gamma) dy``.

    printed: ``w = 1``; corrected: ``w = divisor count``. Both residuals are
    kept in the diagnostics.
    """
    check_variant(variant)
    start = time.perf_counter()
    f = f or gaussian()
    lhs = muntz2_lhs(f, x, contour)
    lhs2 = muntz2_lhs(f, x, contour.with_(height=2 * contour.height))
    plain = muntz2_rhs(f, x, series, weighted=False, quad=quad)
    weighted = muntz2_rhs(f, x, series, weighted=True, quad=quad)
    rhs = weighted if variant == "corrected" else plain
    return VerificationReport.build(
        "muntz2",
        {"f": f.label, "x": x, "c": contour.abscissa, "T": contour.height, "N": series.cutoff, "variant": variant},
        _real_if_close(lhs.value), rhs.value, tol,
        [("lhs_T", lhs.value), ("lhs_2T", lhs2.value), ("contour_tail", lhs.tail),
         ("rhs_unit_weights", plain.value), ("rhs_divisor_weights", weighted.value),
         ("residual_unit_weights", abs(lhs.value - plain.value)),
         ("residual_divisor_weights", abs(lhs.value - weighted.value))],
        start=start,
    )


def verify_poisson_cosine(f=None, N=20, quad=DEFAULT_QUAD, tol=1e-9):
    """``f(0)/2 + sum f(n)`` vs ``int f + 2 sum F(f)(n)``."""
    start = time.perf_counter()
    f = f or gaussian()
    lhs, rhs = poisson_cosine_sides(f, N, quad)
    lhs2, rhs2 = poisson_cosine_sides(f, 2 * N, quad)
    return VerificationReport.build(
        "poisson_cosine", {"f": f.label, "N": N}, lhs, rhs, tol,
        [("lhs_2N", lhs2), ("rhs_2N", rhs2)], start=start,
    )


# ---------------------------------------------------------------------------
# the cosine-Müntz theorem and Berndt's formula
# ---------------------------------------------------------------------------

def theorem_1_1_rhs(seq, f, contour=DEFAULT_CONTOUR, M=None):
    """``(1/2) sum_{m<=M} (b(m)/m) (M^-1(zeta M f)(1/m) + f(0)/2)`` over the support of b."""
    contour.require(0.0, 1.0, "the Müntz contour")
    M = seq.cutoff if M is None else M
    total = 0j
    for m in seq.support_b():
        if m > M:
            break
        inner = muntz_lhs(f, m, contour).value + 0.5 * f.value_at_zero
        total += seq.b[m] / m * inner
    return 0.5 * total


def verify_theorem_1_1(seq, f=None, series=SeriesSpec(20), contour=DEFAULT_CONTOUR, quad=DEFAULT_QUAD, tol=1e-6):
    """``sum a(n) F(f)(n)`` vs the Müntz-contour side, both truncated at N."""
    start = time.perf_counter()
    f = f or gaussian()
    N = _cutoff(seq, series)
    cos = np.array([fourier_cosine(f, n, quad) if seq.a[n] != 0 else 0.0 for n in range(1, N + 1)])
    terms = seq.a[1:N + 1] * cos
    lhs = complex(math.fsum(terms.real), math.fsum(terms.imag))
    half = N // 2
    lhs_half = complex(np.sum(terms[:half]))
    rhs = theorem_1_1_rhs(seq, f, contour, N)
    rhs_half = theorem_1_1_rhs(seq, f, contour, half)
    rhs_2T = theorem_1_1_rhs(seq, f, contour.with_(height=2 * contour.height), N)
    diags = [("lhs_N", lhs), ("lhs_N/2", lhs_half), ("rhs_N", rhs), ("rhs_N/2", rhs_half), ("rhs_2T", rhs_2T)]
    if f.closed_form_cosine is not None:
        closed = seq.a[1:N + 1] * f.closed_form_cosine(np.arange(1, N + 1, dtype=float))
        diags.append(("lhs_closed_form_cosine", complex(np.sum(closed))))
    return VerificationReport.build(
        "theorem_1_1",
        {"a": seq.label, "f": f.label, "N": N, "c": contour.abscissa, "T": contour.height, "h": contour.step},
        _real_if_close(lhs), _real_if_close(rhs), tol, diags, start=start,
    )


def _inner_berndt(f, k, M, quad, floor=1e-17):
    """``sum_{|m|<=M} int_R e^(2 pi i m x/k) f(x) dx`` for even f, with the last term kept as a tail gauge."""
    total = [2 * half_line_integral(f, quad)]
    last, small = math.inf, 0
    for m in range(1, M + 1):
        term = 4 * fourier_cosine(f, m / k, quad)
        total.append(term)
        last = abs(term)
        small = small + 1 if last < floor else 0
        if small >= 4 and m > k:
            break
    return math.fsum(total), last


def verify_berndt(seq, S, f=None, series=SeriesSpec(20), quad=DEFAULT_QUAD, variant="printed", tol=1e-8):
    """Berndt's formula for even f: ``2 sum_{n<=N} a(n,S) f(n)`` vs the S-indexed Fourier side.

    The inner m-sum runs up to ``k N`` terms for each k in S and stops once
    four consecutive terms fall below 1e-17.
    """
    check_variant(variant)
    start = time.perf_counter()
    f = f or gaussian()
    S = S if isinstance(S, DivisorSet) else DivisorSet.of(S)
    N = _cutoff(seq, series)
    weights = restricted_table(seq.a if variant == "printed" else seq.b, S, N)
    fn = f(np.arange(1, N + 1, dtype=float))
    lhs_terms = 2 * weights[1:] * fn
    lhs = complex(np.sum(lhs_terms))
    other = restricted_table(seq.b if variant == "printed" else seq.a, S, N)
    lhs_other = complex(np.sum(2 * other[1:] * fn))
    rhs, tail = 0j, 0.0
    for k in S:
        if k > N or seq.b[k] == 0:
            continue
        inner, last = _inner_berndt(f, k, k * N, quad)
        rhs += seq.b[k] / k * (inner - f.value_at_zero * k)
        tail = max(tail, last)
    return VerificationReport.build(
        "berndt",
        {"a": seq.label, "S": list(S.members), "f": f.label, "N": N, "variant": variant},
        _real_if_close(lhs), _real_if_close(rhs), tol,
        [("lhs_N/2", complex(np.sum(lhs_terms[: N // 2]))),
         ("lhs_" + ("corrected" if variant == "printed" else "printed"), lhs_other),
         ("inner_sum_last_term", tail)],
        start=start,
    )


# ---------------------------------------------------------------------------
# Davenport's fractional-part series
# ---------------------------------------------------------------------------

def _require_irrational(x):
    if isinstance(x, (numbers.Rational, Fraction)) and not isinstance(x, bool):
        raise ValueError(f"x = {x} is rational; the identity needs irrational x")
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    near = Fraction(x).limit_denominator(10_000)
    if abs(float(near) - x) <= 1e-12 * max(1.0, abs(x)):
        raise ValueError(f"x = {x} is numerically the rational {near}; the identity needs irrational x")
    return x


def _sawtooth_terms(seq, x, N):
    n = np.arange(1, N + 1, dtype=float)
    nx = n * x
    return seq.b[1:N + 1] / n * (nx - np.floor(nx) - 0.5)


def verify_davenport(seq=None, x=SQRT2, series=None, variant="printed", tol=5e-3):
    """Abel-smoothed ``sum (b(n)/n)({nx} - 1/2)`` vs ``-(1/pi) sum (a(n)/n) sin(2 pi n x)``.

    ``seq`` defaults to a = e (b = mu). The series converges conditionally at
    best, so the headline LHS uses the smoothing in ``series`` (Abel with
    ``delta = 10/N`` unless given). Diagnostics carry the raw and Cesàro
    partial sums, a Richardson extrapolation in delta, and N/2 readouts.
    Both readings of the identity coincide; ``variant`` is recorded only.
    """
    check_variant(variant)
    start = time.perf_counter()
    x = _require_irrational(x)
    series = series or SeriesSpec(10 ** 6, "abel")
    N = series.cutoff
    seq = seq or unit_sequence(N)
    N = _cutoff(seq, series)
    terms = _sawtooth_terms(seq, x, N)

    def smoothed(ser):
        w = ser.weights()[1:]
        return complex(np.sum(terms[: ser.cutoff] * w[: ser.cutoff]))

    lhs = smoothed(series)
    raw = complex(np.sum(terms))
    cesaro = smoothed(series.with_(smoothing="cesaro"))
    diags = [("raw_partial_sum", raw), ("cesaro", cesaro)]
    if series.smoothing == "abel":
        d = series.delta
        coarse = smoothed(series.with_(delta=2 * d))
        diags += [("abel_delta", d), ("abel_2delta", coarse), ("richardson", 2 * lhs - coarse)]
    half = series.with_(cutoff=N // 2, delta=None if series.smoothing == "abel" else series.delta)
    diags.append(("lhs_N/2", complex(np.sum(terms[: N // 2] * half.weights()[1:]))))
    support = np.flatnonzero(seq.a[1:N + 1]) + 1
    rhs = -complex(np.sum(seq.a[support] / support * np.sin(2 * math.pi * support * x))) / math.pi
    periodic = -complex(np.sum(seq.a[support] / support * np.sin(2 * math.pi * support * (x + 1)))) / math.pi
    diags.append(("rhs_at_x_plus_1", periodic))
    return VerificationReport.build(
        "davenport",
        {"a": seq.label, "x": x, "N": N, "smoothing": series.smoothing, "delta": series.delta, "variant": variant},
        _real_if_close(lhs), _real_if_close(rhs), tol, diags, start=start,
    )


# ---------------------------------------------------------------------------
# Voronoi for the divisor function and the divisor-Müntz theorem
# ---------------------------------------------------------------------------

def _kernel_table(f, N, quad):
    out = np.zeros(N + 1)
    worst = 0.0
    for n in range(1, N + 1):
        res = voronoi_kernel_detail(f, n, quad)
        out[n] = res.value
        worst = max(worst, res.tail_error)
    return out, worst


def verify_voronoi_sigma(f=None, series=SeriesSpec(50), quad=DEFAULT_QUAD, variant="printed", euler_shift=0.0,
                         tol=1e-4):
    """``f(0)/2 + sum d(n) f(n)`` (printed) or ``sum d(n) f(n) - f(0)/4`` (corrected)
    vs ``int f (log x + 2 gamma) + sum d(n) K(f)(n)``.

    ``euler_shift`` replaces gamma by gamma + shift on the right, a
    sensitivity probe for the constant.
    """
    check_variant(variant)
    start = time.perf_counter()
    f = f or gaussian()
    N = series.cutoff
    d = divisor_count_table(N).astype(float)
    fn = f(np.arange(1, N + 1, dtype=float))
    body = math.fsum(d[1:] * fn)
    f0 = f.value_at_zero
    lhs = body + 0.5 * f0 if variant == "printed" else body - 0.25 * f0
    kern, worst = _kernel_table(f, N, quad)
    kterms = d[1:] * kern[1:]
    integral = log_weight_integral(f, 1.0, quad) + 2 * euler_shift * half_line_integral(f, quad)
    rhs = integral + math.fsum(kterms)
    return VerificationReport.build(
        "voronoi_sigma",
        {"f": f.label, "N": N, "variant": variant, "euler_shift": euler_shift},
        lhs, rhs, tol,
        [("log_integral_side", integral), ("kernel_sum_N", math.fsum(kterms)),
         ("kernel_sum_N/2", math.fsum(kterms[: N // 2])), ("kernel_tail_error", worst),
         ("lhs_printed", body + 0.5 * f0), ("lhs_corrected", body - 0.25 * f0)],
        start=start,
    )


def theorem_1_3_rhs(seq, f, contour=DEFAULT_CONTOUR, variant="printed", weighted_check=True, series=SeriesSpec(40)):
    """``sum_m (b(m)/m) (M^-1(zeta^2 M f)(1/m) + f0 term)`` plus per-m Müntz-type residuals."""
    check_variant(variant)
    contour.require(0.0, 1.0, "the ζ² Müntz contour")
    f0 = f.value_at_zero
    shift = 0.5 * f0 if variant == "printed" else -0.25 * f0
    total, residuals = 0j, []
    for m in seq.support_b():
        val = muntz2_lhs(f, m, contour).value
        total += seq.b[m] / m * (val + shift)
        if weighted_check:
            plain = muntz2_rhs(f, m, series.with_(cutoff=series.cutoff * int(m)), weighted=False).value
            weighted = muntz2_rhs(f, m, series.with_(cutoff=series.cutoff * int(m)), weighted=True).value
            residuals.append((int(m), abs(val - plain), abs(val - weighted)))
    return total, residuals


def verify_theorem_1_3(seq, f=None, series=SeriesSpec(50), contour=DEFAULT_CONTOUR, quad=DEFAULT_QUAD,
                       variant="printed", tol=1e-4):
    """``sum c(n) K(f)(n)`` with ``c = d * b`` vs the ζ²-contour side over the support of b.

    The diagnostics carry, for each m, the residual of the ζ² Müntz formula
    with unit weights and with divisor-count weights.
    """
    check_variant(variant)
    start = time.perf_counter()
    f = f or gaussian()
    N = _cutoff(seq, series)
    c = compose_c(seq)
    kern, worst = _kernel_table(f, N, quad)
    terms = c[1:N + 1] * kern[1:]
    lhs = complex(np.sum(terms))
    rhs, residuals = theorem_1_3_rhs(seq, f, contour, variant)
    other, _ = theorem_1_3_rhs(seq, f, contour, "corrected" if variant == "printed" else "printed", False)
    diags = [("lhs_N/2", complex(np.sum(terms[: N // 2]))), ("kernel_tail_error", worst),
             ("rhs_" + ("corrected" if variant == "printed" else "printed"), other)]
    for m, r_plain, r_weighted in residuals:
        diags.append((f"muntz2_unit_weight_residual_m{m}", r_plain))
        diags.append((f"muntz2_divisor_weight_residual_m{m}", r_weighted))
    return VerificationReport.build(
        "theorem_1_3",
        {"b_support": [int(m) for m in seq.support_b()], "f": f.label, "N": N, "c": contour.abscissa,
         "T": contour.height, "variant": variant},
        _real_if_close(lhs), _real_if_close(rhs), tol, diags, start=start,
    )


__all__ = [
    "ArithmeticSequence",
    "GOLDEN",
    "SQRT2",
    "theorem_1_1_rhs",
    "theorem_1_3_rhs",
    "verify_berndt",
    "verify_davenport",
    "verify_muntz",
    "verify_muntz2",
    "verify_poisson_cosine",
    "verify_theorem_1_1",
    "verify_theorem_1_3",
    "verify_voronoi_sigma",
]
