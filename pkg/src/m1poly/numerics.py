"""Scalar special-function kernels.

Everything here works on Python floats. Sums go through :func:`math.fsum`,
which is exact-rounded, so alternating terminating series at unit argument
keep their digits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import _dd
from .errors import ConvergenceError, DomainError, PoleError, SeriesOverflowError

#: absolute tolerance for "this float is really an integer"
INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class SeriesPolicy:
    max_terms: int = 500
    tail_tol: float = 1e-16

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be > 0")


DEFAULT_POLICY = SeriesPolicy()


def _check_finite(value, what, index=None):
    if math.isnan(value):
        raise DomainError(f"{what} produced NaN")
    if math.isinf(value):
        raise SeriesOverflowError(f"{what} overflowed", index)
    return value


def nonpositive_integer(x: float, tol: float = INTEGER_TOL) -> int | None:
    """Return m if x is within tol of -m (m >= 0), else None."""
    r = round(x)
    if r <= 0 and abs(x - r) <= tol:
        return -int(r)
    return None


def sign(x: float) -> int:
    return (x > 0) - (x < 0)


def parity_sign(k: int) -> int:
    """(-1)**k for an integer k, without floating pow."""
    return -1 if k & 1 else 1


def split_parity(n: int) -> tuple[int, int]:
    """Write n = 2*n_e + n_p with n_p in {0, 1}."""
    return n >> 1, n & 1


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = 1.0
    for k in range(n):
        out *= a + k
        if math.isinf(out):
            raise SeriesOverflowError("pochhammer overflow", k)
    return out


def mu_number(n: int, mu: float) -> float:
    """[n]_mu = n + (1 - (-1)^n) mu."""
    return n + 2.0 * mu if n & 1 else float(n)


def mu_factorial(n: int, mu: float) -> float:
    out = 1.0
    for k in range(1, n + 1):
        out *= mu_number(k, mu)
        if math.isinf(out):
            raise SeriesOverflowError("mu_factorial overflow", k)
    return out


def _sum_dd(parts: list[float]) -> tuple[float, float]:
    hi = math.fsum(parts)
    if not math.isfinite(hi):
        return hi, 0.0
    return hi, math.fsum(parts + [-hi])


def pfq_terminating_dd(num, den, x, m: int) -> tuple[float, float]:
    """Terminating pFq summed over k = 0..m with double-double parameters.

    ``num``, ``den`` and ``x`` are (hi, lo) pairs, so parameters formed from
    several floats (x - r1 + 1/2, ...) need not be rounded first. Terms are
    carried in double-double and summed exactly.
    """
    term = (1.0, 0.0)
    parts = [1.0]
    for k in range(m):
        kk = _dd.dd(float(k))
        ratio = _dd.div(x, _dd.dd(float(k + 1)))
        for a in num:
            ratio = _dd.mul(ratio, _dd.add(a, kk))
        for b in den:
            bk = _dd.add(b, kk)
            if bk[0] == 0.0:
                raise PoleError(f"denominator parameter {b[0]} reaches a pole at k={k}")
            ratio = _dd.div(ratio, bk)
        term = _dd.mul(term, ratio)
        _check_finite(term[0], "hyp_pfq term", k + 1)
        parts.extend(term)
    return _sum_dd(parts)


def hyp_pfq_dd(numerators: Sequence[float], denominators: Sequence[float], x: float,
               policy: SeriesPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """:func:`hyp_pfq` as an unevaluated sum hi + lo.

    Terminating series are accurate well beyond float64 (terms in double-double,
    exact summation), which callers combining several series rely on.
    Convergent series return lo = 0.
    """
    num = [float(a) for a in numerators]
    den = [float(b) for b in denominators]
    x = float(x)
    if x == 0.0:
        return 1.0, 0.0

    stop = None
    for i, a in enumerate(num):
        m = nonpositive_integer(a)
        if m is not None:
            num[i] = -float(m)
            stop = m if stop is None else min(stop, m)

    nterms = stop + 1 if stop is not None else policy.max_terms
    for k in range(nterms - 1):
        for b in den:
            if b + k == 0.0 or nonpositive_integer(b + k) == 0:
                raise PoleError(f"denominator parameter {b} reaches a pole at k={k}")
    if stop is not None:
        hi, lo = pfq_terminating_dd([_dd.dd(a) for a in num], [_dd.dd(b) for b in den],
                                    _dd.dd(x), stop)
        return _check_finite(hi, "hyp_pfq"), lo

    terms = [1.0]
    term = 1.0
    for k in range(nterms - 1):
        ratio = x / (k + 1)
        for a in num:
            ratio *= a + k
        for b in den:
            ratio /= b + k
        term *= ratio
        _check_finite(term, "hyp_pfq term", k + 1)
        terms.append(term)
        # bound the tail by a geometric series in the next-term ratio
        nxt = abs(x) / (k + 2)
        for a in num:
            nxt *= abs(a + k + 1)
        for b in den:
            nxt /= abs(b + k + 1)
        if nxt < 1.0:
            tail = abs(term) * nxt / (1.0 - nxt)
            total = abs(math.fsum(terms))
            if tail <= policy.tail_tol * total or term == 0.0:
                return _check_finite(math.fsum(terms), "hyp_pfq"), 0.0
    raise ConvergenceError(
        f"{len(num)}F{len(den)} did not converge in {policy.max_terms} terms at x={x}")


def hyp_pfq(numerators: Sequence[float], denominators: Sequence[float], x: float,
            policy: SeriesPolicy = DEFAULT_POLICY) -> float:
    """Generalized hypergeometric series pFq(numerators; denominators; x).

    Terminating series (some numerator equal to -m) are summed exactly over
    m+1 terms, each carried in double-double so alternating sums at x = 1
    keep their digits. Otherwise terms are added until the geometric tail
    bound drops under ``policy.tail_tol`` relative to the partial sum.
    """
    hi, lo = hyp_pfq_dd(numerators, denominators, x, policy)
    return hi + lo


def laguerre(n: int, alpha: float, x: float) -> float:
    """Generalized Laguerre polynomial L_n^(alpha)(x) via 1F1."""
    return pochhammer(alpha + 1.0, n) / math.factorial(n) * hyp_pfq([-n], [alpha + 1.0], x)


def _gamma_sign(x: float) -> int:
    if x > 0:
        return 1
    return -1 if math.ceil(-x) & 1 else 1


def gamma_ratio(num_args: Sequence[float], den_args: Sequence[float]) -> float:
    """prod Gamma(num) / prod Gamma(den), through log-gamma with sign tracking."""
    log_total = 0.0
    s = 1
    for args, direction in ((num_args, 1.0), (den_args, -1.0)):
        for a in args:
            if nonpositive_integer(a, 0.0) is not None:
                raise PoleError(f"Gamma pole at argument {a}")
            log_total += direction * math.lgamma(a)
            s *= _gamma_sign(a)
    if log_total > 709.0:
        raise SeriesOverflowError("gamma_ratio overflow")
    return s * math.exp(log_total)
