"""Specialized Chihara polynomials P_n(lambda; mu, gamma), kept orthonormal."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..numerics import laguerre, mu_number, parity_sign
from .base import as_output, check_method


@dataclass(frozen=True)
class ChiharaParams:
    mu: float
    gamma: float

    def __post_init__(self):
        if not self.mu > -0.5:
            raise DomainError(f"Chihara parameter mu must exceed -1/2, got {self.mu}")


def chihara_table(nmax: int, lam, mu: float, gamma) -> np.ndarray:
    """Rows P_0..P_nmax by the three-term recurrence.

    ``lam`` and ``gamma`` broadcast against each other, so the gamma slot can
    carry an array (the tensor-product eigenvectors need gamma = lambda_1*eps).
    """
    lam, gamma = np.broadcast_arrays(np.asarray(lam, float), np.asarray(gamma, float))
    out = np.empty((nmax + 1,) + lam.shape)
    out[0] = 1.0
    prev = np.zeros(lam.shape)
    for n in range(nmax):
        diag = gamma if n % 2 == 0 else -gamma
        out[n + 1] = ((lam - diag) * out[n] - math.sqrt(mu_number(n, mu)) * prev) \
            / math.sqrt(mu_number(n + 1, mu))
        prev = out[n]
    return out


def _closed(n: int, lam: float, mu: float, gamma: float) -> float:
    m = n // 2
    t = (lam * lam - gamma * gamma) / 2.0
    if n % 2 == 0:
        scale = math.exp(0.5 * (math.lgamma(m + 1) + math.lgamma(mu + 0.5) - math.lgamma(m + mu + 0.5)))
        return parity_sign(m) * scale * laguerre(m, mu - 0.5, t)
    scale = math.exp(0.5 * (math.lgamma(m + 1) + math.lgamma(mu + 1.5) - math.lgamma(m + mu + 1.5)))
    return parity_sign(m) * scale * (lam - gamma) / math.sqrt(2 * mu + 1) * laguerre(m, mu + 0.5, t)


def chihara_eval(n: int, lam, p: ChiharaParams, method: str = "recurrence"):
    check_method(method)
    if method == "recurrence":
        return as_output(chihara_table(n, lam, p.mu, p.gamma)[n])
    if np.ndim(lam):
        return np.array([_closed(n, float(x), p.mu, p.gamma) for x in np.ravel(lam)]).reshape(np.shape(lam))
    return _closed(n, float(lam), p.mu, p.gamma)


def chihara_weight(lam, p: ChiharaParams, normalized: bool = False):
    """sign(l)(l+g)((l^2-g^2)/2)^(mu-1/2) exp(-(l^2-g^2)/2) on |l| > |g|.

    With ``normalized`` the weight is divided by 2 Gamma(mu+1/2), which makes
    the P_n orthonormal.
    """
    lam = np.asarray(lam, float)
    if np.any(np.abs(lam) <= abs(p.gamma)):
        raise DomainError(f"Chihara weight needs |lambda| > |gamma| = {abs(p.gamma)}")
    t = (lam * lam - p.gamma ** 2) / 2.0
    w = np.sign(lam) * (lam + p.gamma) * t ** (p.mu - 0.5) * np.exp(-t)
    if normalized:
        w = w / (2.0 * math.gamma(p.mu + 0.5))
    return as_output(w)
