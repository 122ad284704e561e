"""Dual -1 Hahn polynomials R_n(x; eta, xi, N) (monic)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..numerics import hyp_pfq, mu_number, parity_sign, pochhammer
from .base import OrthoData, as_output, check_method


@dataclass(frozen=True)
class DualHahnParams:
    eta: float
    xi: float
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 0:
            raise ValueError(f"N must be a nonnegative integer, got {self.N}")
        object.__setattr__(self, "N", int(self.N))


def dualhahn_coeffs(n: int, eta: float, xi: float, N: int) -> tuple[float, float]:
    """(diagonal b_n, off-diagonal u_n) of x R_n = R_{n+1} + b_n R_n + u_n R_{n-1}."""
    b = parity_sign(n + 1) * (2 * xi + parity_sign(N) * 2 * eta) - 1
    u = 4 * mu_number(n, xi) * mu_number(N - n + 1, eta)
    return b, u


def dualhahn_table(nmax: int, x, eta: float, xi: float, N: int) -> np.ndarray:
    x = np.asarray(x, float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    prev = np.zeros(x.shape)
    for n in range(nmax):
        b, u = dualhahn_coeffs(n, eta, xi, N)
        out[n + 1] = (x - b) * out[n] - u * prev
        prev = out[n]
    return out


def _closed(n: int, x: float, eta: float, xi: float, N: int) -> float:
    q = (x + 1) / 4
    if N % 2 == 0:
        d = -(eta + xi + N) / 2
        e = (1 - 2 * eta - N) / 2
        if n % 2 == 0:
            m = n // 2
            return (16.0 ** m * pochhammer(-N / 2, m) * pochhammer(e, m)
                    * hyp_pfq([-m, d + q, d - q], [-N / 2, e], 1.0))
        m = (n - 1) // 2
        return (16.0 ** m * pochhammer(1 - N / 2, m) * pochhammer(e, m) * (x + 2 * eta + 2 * xi + 1)
                * hyp_pfq([-m, d + q, d - q], [1 - N / 2, e], 1.0))
    d = (eta + xi + 1) / 2
    h = (1 - N) / 2
    if n % 2 == 0:
        m = n // 2
        return (16.0 ** m * pochhammer(h, m) * pochhammer(xi + 0.5, m)
                * hyp_pfq([-m, d + q, d - q], [h, xi + 0.5], 1.0))
    m = (n - 1) // 2
    return (16.0 ** m * pochhammer(h, m) * pochhammer(xi + 1.5, m) * (x + 2 * xi - 2 * eta + 1)
            * hyp_pfq([-m, d + q, d - q], [h, xi + 1.5], 1.0))


def dualhahn_eval(n: int, x, p: DualHahnParams, method: str = "recurrence"):
    check_method(method)
    if method == "recurrence":
        return as_output(dualhahn_table(n, x, p.eta, p.xi, p.N)[n])
    if np.ndim(x):
        return np.array([_closed(n, float(v), p.eta, p.xi, p.N) for v in np.ravel(x)]).reshape(np.shape(x))
    return _closed(n, float(x), p.eta, p.xi, p.N)


def dualhahn_grid(s: int, eta: float, xi: float, N: int) -> float:
    if N % 2 == 0:
        return parity_sign(s) * (2 * s - 2 * eta - 2 * xi - 2 * N - 1)
    return parity_sign(s) * (2 * s + 2 * eta + 2 * xi + 1)


def dualhahn_weight(s: int, eta: float, xi: float, N: int) -> float:
    """The weight at y_s, scaled so the s = 0 weight is 1."""
    if N % 2 == 0:
        M = N / 2
        k, odd = divmod(s, 2)
        num = (pochhammer(-M, k + odd) * pochhammer(-M - eta + 0.5, k)
               * pochhammer(-N - eta - xi, k))
        den = (math.factorial(k) * pochhammer(-M - xi + 0.5, k)
               * pochhammer(-M - eta - xi, k + odd))
        return parity_sign(k) * num / den
    k, odd = divmod(s, 2)
    num = (pochhammer((1 - N) / 2, k) * pochhammer(xi + 0.5, k + odd)
           * pochhammer(eta + xi + 1, k))
    den = (math.factorial(k) * pochhammer(eta + 0.5, k + odd)
           * pochhammer((N + 3) / 2 + eta + xi, k))
    return parity_sign(k) * num / den


def dualhahn_norm(n: int, eta: float, xi: float, N: int) -> float:
    k, odd = divmod(n, 2)
    if N % 2 == 0:
        tail = pochhammer(-N - eta - xi, N // 2) / pochhammer((-N - 2 * xi + 1) / 2, N // 2)
        val = (math.factorial(k) * pochhammer(-N / 2, k + odd) * pochhammer(xi + 0.5, k + odd)
               * pochhammer((-N - 2 * eta + 1) / 2, k))
    else:
        tail = pochhammer(eta + xi + 1, (N + 1) // 2) / pochhammer(eta + 0.5, (N + 1) // 2)
        val = (math.factorial(k) * pochhammer((1 - N) / 2, k) * pochhammer(xi + 0.5, k + odd)
               * pochhammer(-N / 2 - eta, k + odd))
    return (-1.0 if odd else 1.0) * 16.0 ** n * val * tail


def dualhahn_ortho(p: DualHahnParams) -> OrthoData:
    """Grid y_s, weights and norms nu_n for s, n = 0..N.

    Raises PositivityError when the parameters make some weight negative.
    """
    N = p.N
    return OrthoData(
        points=[dualhahn_grid(s, p.eta, p.xi, N) for s in range(N + 1)],
        weights=[dualhahn_weight(s, p.eta, p.xi, N) for s in range(N + 1)],
        norms=[dualhahn_norm(n, p.eta, p.xi, N) for n in range(N + 1)],
        N=N,
    )


def dualhahn_reversed(p: DualHahnParams) -> tuple[np.ndarray, np.ndarray]:
    """Reversed grid z_s and weights rho_s.

    The index is reversed for even N only: rho_s = w_{N-s} (N even), w_s (N odd).
    """
    data = dualhahn_ortho(p)
    N = p.N
    z = np.array([parity_sign(s + N + 1) * (2 * s + 2 * p.eta + 2 * p.xi + 1) for s in range(N + 1)])
    rho = data.weights[::-1].copy() if N % 2 == 0 else data.weights.copy()
    return z, rho
