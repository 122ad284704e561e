"""Big -1 Jacobi polynomials J_n(x; a, b, c), normalized by J_0 = 1."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..numerics import gamma_ratio, hyp_pfq, pochhammer
from .base import as_output, check_method


@dataclass(frozen=True)
class BigJacobiParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > -1 and self.b > -1):
            raise DomainError(f"Big -1 Jacobi needs a, b > -1, got a={self.a}, b={self.b}")
        if abs(self.c) == 1.0:
            raise DomainError("Big -1 Jacobi needs |c| != 1")


def bigjacobi_coeffs(n: int, a: float, b: float, c):
    """Recurrence coefficients (A_n, C_n); c may be an array."""
    c = np.asarray(c, float)
    if n % 2 == 0:
        A = (n + a + 1) * (c + 1) / (2 * n + a + b + 2)
        C = n * (1 - c) / (2 * n + a + b) if n else np.zeros_like(c)
    else:
        A = (1 - c) * (n + a + b + 1) / (2 * n + a + b + 2)
        C = (n + b) * (1 + c) / (2 * n + a + b)
    return A, C


def bigjacobi_table(nmax: int, x, a: float, b: float, c) -> np.ndarray:
    """Rows J_0..J_nmax from x J_n = A_n J_{n+1} + (1-A_n-C_n) J_n + C_n J_{n-1}."""
    x, c = np.broadcast_arrays(np.asarray(x, float), np.asarray(c, float))
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    prev = np.zeros(x.shape)
    for n in range(nmax):
        A, C = bigjacobi_coeffs(n, a, b, c)
        out[n + 1] = ((x - 1 + A + C) * out[n] - C * prev) / A
        prev = out[n]
    return out


def _closed(n: int, x: float, a: float, b: float, c: float) -> float:
    y = (1 - x * x) / (1 - c * c)
    lin = (1 - x) / ((1 + c) * (a + 1))
    if n % 2 == 0:
        first = hyp_pfq([-n / 2, (n + a + b + 2) / 2], [(a + 1) / 2], y)
        if n == 0:
            return first
        return first + n * lin * hyp_pfq([1 - n / 2, (n + a + b + 2) / 2], [(a + 3) / 2], y)
    k = (n - 1) / 2
    return (hyp_pfq([-k, (n + a + b + 1) / 2], [(a + 1) / 2], y)
            - (n + a + b + 1) * lin * hyp_pfq([-k, (n + a + b + 3) / 2], [(a + 3) / 2], y))


def bigjacobi_eval(n: int, x, p: BigJacobiParams, method: str = "recurrence"):
    check_method(method)
    if method == "recurrence":
        return as_output(bigjacobi_table(n, x, p.a, p.b, p.c)[n])
    if np.ndim(x):
        return np.array([_closed(n, float(v), p.a, p.b, p.c) for v in np.ravel(x)]).reshape(np.shape(x))
    return _closed(n, float(x), p.a, p.b, p.c)


def bigjacobi_weight(x, p: BigJacobiParams):
    """sign(x)(1+x)(x-c)(x^2-c^2)^((b-1)/2)(1-x^2)^((a-1)/2) on |c| < |x| < 1."""
    x = np.asarray(x, float)
    if abs(p.c) >= 1:
        raise DomainError("the two-branch weight is only implemented for |c| < 1")
    if np.any((np.abs(x) <= abs(p.c)) | (np.abs(x) >= 1)):
        raise DomainError(f"Big -1 Jacobi weight needs |c| < |x| < 1 with |c| = {abs(p.c)}")
    w = (np.sign(x) * (1 + x) * (x - p.c) * (x * x - p.c ** 2) ** ((p.b - 1) / 2)
         * (1 - x * x) ** ((p.a - 1) / 2))
    return as_output(w)


def bigjacobi_mass_prefactor(a: float, b: float, c: float) -> float:
    """(1-c^2)^((a+b+2)/2) / (1+c), the factor multiplying h_n in the integral."""
    return (1 - c * c) ** ((a + b + 2) / 2) / (1 + c)


def bigjacobi_norm(n: int, a: float, b: float) -> float:
    """h_n(a, b); the full squared norm is bigjacobi_mass_prefactor * h_n."""
    if not (a > -1 and b > -1):
        raise DomainError("bigjacobi_norm needs a, b > -1")
    if n % 2 == 0:
        m = n // 2
        g = gamma_ratio([(n + b + 1) / 2, (n + a + 3) / 2, m + 1], [(n + a + b + 2) / 2])
        return 2 * g / ((n + a + 1) * pochhammer((a + 1) / 2, m) ** 2)
    m = (n - 1) // 2
    g = gamma_ratio([(n + b + 2) / 2, (n + a + 2) / 2, m + 1], [(n + a + b + 3) / 2])
    return (n + a + b + 1) * g / (2 * pochhammer((a + 1) / 2, m + 1) ** 2)
