"""Panel quadrature building blocks.

Everything here integrates a *vectorized* callable: ``func(x_array)`` must
return an array of the same shape.
"""
from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np

from .errors import ConvergenceWarning


@dataclass(frozen=True)
class QuadParams:
    """Knobs shared by the panel integrators.

    order: Gauss-Legendre points per panel.
    tol: absolute target for oscillatory tails.
    max_panels: hard stop for oscillatory tails.
    graded_levels: dyadic refinement levels toward a singular endpoint.
    scale: longest sub-panel allowed inside one half-period panel.
    """

    order: int = 24
    tol: float = 1e-14
    max_panels: int = 40000
    graded_levels: int = 48
    scale: float = 0.5

    def __post_init__(self):
        if self.order < 2 or self.max_panels < 1 or self.tol <= 0 or self.scale <= 0:
            raise ValueError("invalid quadrature parameters")


DEFAULT_QUAD = QuadParams()


@lru_cache(maxsize=None)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def integrate_panels(func, edges, order=24):
    """Per-panel Gauss-Legendre integrals over consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    pts = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(func(pts.ravel())).reshape(pts.shape)
    return (vals @ w) * half


def integrate_interval(func, a, b, order=24, pieces=1):
    return _fsum(integrate_panels(func, np.linspace(a, b, pieces + 1), order))


def integrate_graded(func, a, b, order=24, levels=48):
    """Integral over [a, b] refined dyadically toward ``a``.

    Handles integrable endpoint singularities such as ``log`` or ``x**-0.5``.
    The final sliver of width ``(b - a) / 2**levels`` is dropped.
    """
    k = np.arange(levels + 1, dtype=float)
    edges = a + (b - a) * np.concatenate((2.0 ** -k[::-1], [1.0]))
    edges = np.unique(edges)
    return _fsum(integrate_panels(func, edges, order))


def _fsum(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return math.fsum(values)


def euler_average(partials, levels):
    """Repeatedly average neighbouring partial sums ``levels`` times."""
    s = np.asarray(partials)
    for _ in range(levels):
        s = 0.5 * (s[1:] + s[:-1])
    return s


@dataclass(frozen=True)
class TailResult:
    value: complex
    error: float
    panels: int
    converged: bool
    accelerated: bool


def oscillatory_tail(func, start, half_period, params=DEFAULT_QUAD, batch=64, label="integral"):
    """Integral of ``func`` over [start, inf) using half-period panels.

    Panels are summed until either they fall below ``params.tol`` (fast
    decay) or the Euler-averaged partial sums agree to ``params.tol``
    (slowly decaying alternating tails). A :class:`ConvergenceWarning` is
    issued when neither happens within ``params.max_panels`` panels.
    """
    sub = max(1, math.ceil(half_period / params.scale))
    panels = []
    k = 0
    estimate = None
    error = math.inf
    accelerated = False
    while k < params.max_panels:
        n = min(batch, params.max_panels - k)
        coarse = start + half_period * np.arange(k, k + n + 1)
        fine = (coarse[:-1, None] + (half_period / sub) * np.arange(sub)[None, :]).ravel()
        fine = np.append(fine, coarse[-1])
        vals = integrate_panels(func, fine, params.order).reshape(n, sub).sum(axis=1)
        panels.extend(vals)
        k += n
        recent = np.abs(panels[-4:])
        if np.all(recent < params.tol) and k >= 4:
            estimate, error, accelerated = _fsum(panels), float(recent.max()), False
            break
        if k >= 48:
            partial = np.cumsum(panels[-41:])
            offset = _fsum(panels[:-41])
            avg = euler_average(partial, 36)
            error = float(np.max(np.abs(np.diff(avg))))
            estimate, accelerated = offset + avg[-1], True
            if error < params.tol:
                break
    if estimate is None:
        estimate = _fsum(panels)
    converged = error < params.tol
    if not converged:
        warnings.warn(
            f"{label}: half-period panels did not settle (est. error {error:.2e} after {k} panels)",
            ConvergenceWarning,
            stacklevel=3,
        )
    return TailResult(estimate, error, k, converged, accelerated)
