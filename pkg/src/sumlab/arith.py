"""Integer-indexed arithmetic functions.

Sequences are stored 1-based in numpy arrays of length ``N + 1``; slot 0 is
unused and held at zero. Tables (``mobius_table``, ``divisor_count_table``)
come from a linear sieve, while the scalar functions factor by trial division
so the two can check each other.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from ._jit import njit, select


# ---------------------------------------------------------------------------
# scalar functions (trial division)
# ---------------------------------------------------------------------------

def _check_positive(n):
    if isinstance(n, bool) or int(n) != n:
        raise TypeError(f"expected a positive integer, got {n!r}")
    n = int(n)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    return n


def factorize(n):
    """Prime factorization of ``n`` as a dict {p: e}."""
    n = _check_positive(n)
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n):
    """Möbius function mu(n)."""
    exps = factorize(n)
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def divisor_count(n):
    """Number of positive divisors of ``n``."""
    return math.prod(e + 1 for e in factorize(n).values())


def divisors(n):
    n = _check_positive(n)
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return small + [n // d for d in reversed(small) if d * d != n]


def frac(x):
    """Fractional part ``x - [x]`` where ``[x]`` truncates toward zero.

    For negative ``x`` the result lies in (-1, 0], e.g. ``frac(-2.75) == -0.75``.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"frac needs a finite argument, got {x}")
    return x - math.trunc(x)


# ---------------------------------------------------------------------------
# sieve tables
# ---------------------------------------------------------------------------

@njit
def _linear_sieve_jit(N):
    mu = np.zeros(N + 1, dtype=np.int64)
    dc = np.zeros(N + 1, dtype=np.int64)
    exp_spf = np.zeros(N + 1, dtype=np.int64)
    spf = np.zeros(N + 1, dtype=np.int64)
    primes = np.empty(N + 1, dtype=np.int64)
    npr = 0
    if N >= 1:
        mu[1] = 1
        dc[1] = 1
    for i in range(2, N + 1):
        if spf[i] == 0:
            spf[i] = i
            primes[npr] = i
            npr += 1
            mu[i] = -1
            dc[i] = 2
            exp_spf[i] = 1
        for j in range(npr):
            p = primes[j]
            k = i * p
            if p > spf[i] or k > N:
                break
            spf[k] = p
            if p == spf[i]:
                mu[k] = 0
                exp_spf[k] = exp_spf[i] + 1
                dc[k] = dc[i] // (exp_spf[i] + 1) * (exp_spf[i] + 2)
            else:
                mu[k] = -mu[i]
                exp_spf[k] = 1
                dc[k] = dc[i] * 2
    return mu, dc


def _sieve_numpy(N):
    mu = np.ones(N + 1, dtype=np.int64)
    mu[0] = 0
    composite = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        mu[p::p] *= -1
        if p * p <= N:
            mu[p * p :: p * p] = 0
    dc = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        dc[d::d] += 1
    return mu, dc


_sieve = select(_linear_sieve_jit, _sieve_numpy)


def mobius_table(N):
    """Array ``mu[0..N]`` with ``mu[0] = 0``."""
    return _sieve(int(N))[0]


def divisor_count_table(N):
    """Array ``d[0..N]`` of divisor counts with ``d[0] = 0``."""
    return _sieve(int(N))[1]


# ---------------------------------------------------------------------------
# Dirichlet convolution
# ---------------------------------------------------------------------------

@njit
def _convolve_jit(f, g, N):
    out = np.zeros(N + 1, dtype=np.complex128)
    for d in range(1, N + 1):
        fd = f[d]
        if fd == 0:
            continue
        for k in range(1, N // d + 1):
            out[d * k] += fd * g[k]
    return out


def _convolve_numpy(f, g, N):
    out = np.zeros(N + 1, dtype=np.complex128)
    for d in range(1, N + 1):
        if f[d] != 0:
            out[d::d] += f[d] * g[1 : N // d + 1]
    return out


_convolve = select(_convolve_jit, _convolve_numpy)


def dirichlet_convolve(f, g, N=None):
    """(f * g)(n) = sum over d | n of f(d) g(n/d), for 1 <= n <= N."""
    f = np.asarray(f, dtype=np.complex128)
    g = np.asarray(g, dtype=np.complex128)
    if N is None:
        N = min(len(f), len(g)) - 1
    if len(f) <= N or len(g) <= N:
        raise ValueError("sequences shorter than the requested cutoff")
    return _convolve(f, g, int(N))


def _as_table(values, N):
    """Coerce a callable / sequence / dict into a 1-based complex table."""
    out = np.zeros(N + 1, dtype=np.complex128)
    if callable(values):
        for n in range(1, N + 1):
            out[n] = values(n)
    elif isinstance(values, dict):
        for n, v in values.items():
            if 1 <= n <= N:
                out[n] = v
    else:
        arr = np.asarray(values, dtype=np.complex128)
        if len(arr) != N:
            raise ValueError(f"expected {N} values for n = 1..{N}, got {len(arr)}")
        out[1:] = arr
    return out


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ArithmeticSequence:
    """A pair (a, b) on 1..N with b = a * mu, equivalently a = b * 1."""

    cutoff: int
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        for arr in (self.a, self.b):
            if arr.shape != (self.cutoff + 1,):
                raise ValueError("tables must have length cutoff + 1")
            arr.setflags(write=False)

    @classmethod
    def from_a(cls, a, N, label=""):
        a_tab = _as_table(a, N)
        b_tab = dirichlet_convolve(a_tab, mobius_table(N).astype(np.complex128), N)
        return cls(N, a_tab, b_tab, label)

    @classmethod
    def from_b(cls, b, N, label=""):
        b_tab = _as_table(b, N)
        ones = np.ones(N + 1, dtype=np.complex128)
        ones[0] = 0
        return cls(N, dirichlet_convolve(b_tab, ones, N), b_tab, label)

    def support_b(self):
        """Indices m with b(m) != 0."""
        return np.flatnonzero(self.b)

    def is_real(self, tol=0.0):
        return bool(np.all(np.abs(self.a.imag) <= tol) and np.all(np.abs(self.b.imag) <= tol))


def invert(a, N, label=""):
    """Build the sequence whose b is the Möbius inverse of ``a``."""
    return ArithmeticSequence.from_a(a, N, label)


def unit_sequence(N):
    """a = e (indicator of n = 1), hence b = mu."""
    return invert(lambda n: 1.0 if n == 1 else 0.0, N, "unit")


def constant_sequence(N, value=1.0):
    return invert(np.full(N, value), N, "one" if value == 1.0 else f"const({value})")


def divisor_sequence(N):
    """a = divisor count, hence b = 1."""
    return invert(divisor_count_table(N)[1:], N, "sigma")


def zero_sequence(N):
    return invert(np.zeros(N), N, "zero")


def identity_sequence(N):
    """a(n) = n, hence b = Euler's totient."""
    return invert(np.arange(1, N + 1, dtype=float), N, "identity")


SEQUENCES = {
    "unit": unit_sequence,
    "one": constant_sequence,
    "sigma": divisor_sequence,
    "zero": zero_sequence,
    "identity": identity_sequence,
}


def named_sequence(label, N):
    try:
        return SEQUENCES[label](N)
    except KeyError:
        raise KeyError(f"unknown sequence {label!r}; choose from {sorted(SEQUENCES)}") from None


def compose_c(seq):
    """c(n) = sum over d | n of sigma(n/d) b(d), returned 1-based up to the cutoff."""
    N = seq.cutoff
    dc = divisor_count_table(N).astype(np.complex128)
    return dirichlet_convolve(seq.b, dc, N)


# ---------------------------------------------------------------------------
# restricted divisor sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DivisorSet:
    """A finite set S of positive integers, kept strictly ascending."""

    members: tuple

    def __post_init__(self):
        m = tuple(int(x) for x in self.members)
        if any(x < 1 for x in m):
            raise ValueError("DivisorSet members must be >= 1")
        if any(x >= y for x, y in zip(m, m[1:])):
            raise ValueError("DivisorSet members must be strictly ascending with no duplicates")
        object.__setattr__(self, "members", m)

    @classmethod
    def of(cls, values):
        return cls(tuple(sorted(set(int(v) for v in values))))

    @classmethod
    def full(cls, N):
        return cls(tuple(range(1, N + 1)))

    def __contains__(self, x):
        return x in set(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def union(self, other):
        return DivisorSet.of(self.members + other.members)

    def isdisjoint(self, other):
        return set(self.members).isdisjoint(other.members)


def restricted_sum(a, n, S):
    """a(n, S): sum of ``a[d]`` over divisors d of n lying in S.

    ``a`` is a 1-based table (or an :class:`ArithmeticSequence`, whose ``a``
    is used).
    """
    if isinstance(a, ArithmeticSequence):
        a = a.a
    n = _check_positive(n)
    if n >= len(a):
        raise ValueError(f"n = {n} exceeds the sequence cutoff {len(a) - 1}")
    members = set(S.members if isinstance(S, DivisorSet) else S)
    return complex(sum(a[d] for d in divisors(n) if d in members))


def restricted_table(values, S, N):
    """Vector of restricted sums for n = 1..N (1-based, slot 0 zero)."""
    values = np.asarray(values, dtype=np.complex128)
    out = np.zeros(N + 1, dtype=np.complex128)
    for d in (S.members if isinstance(S, DivisorSet) else S):
        if d <= N:
            out[d::d] += values[d]
    return out
