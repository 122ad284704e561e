"""osp(1|2) Clebsch-Gordan and Racah coefficients, and truncated X_c matrices.

Conventions
-----------
* Signs (-1)^k are taken from the parity of exact integers.
* ``cg_matrix(total)`` has rows indexed by n1 = 0..total (n2 = total - n1)
  and columns by j = 0..total (N = total - j).
* ``racah_matrix(J)`` has rows indexed by j12 and columns by j23.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConstraintError, DomainError
from .families.bannaiito import (BannaiItoParams, Truncation, bannai_ito_table, bi_ortho,
                                 bi_truncation)
from .families.dualhahn import dualhahn_norm, dualhahn_reversed, dualhahn_table, DualHahnParams
from .numerics import mu_factorial, mu_number, parity_sign


def _check_eps(eps) -> int:
    if eps not in (1, -1):
        raise DomainError(f"epsilon must be +1 or -1, got {eps!r}")
    return int(eps)


@dataclass(frozen=True)
class IrrepLabel:
    """Positive discrete series label (mu, eps)."""

    mu: float
    eps: int = 1

    def __post_init__(self):
        if not self.mu > 0:
            raise DomainError(f"irrep label needs mu > 0, got {self.mu}")
        object.__setattr__(self, "eps", _check_eps(self.eps))


@dataclass(frozen=True)
class CoupledLabel:
    mu12: float
    eps12: int
    j: int

    @property
    def irrep(self) -> IrrepLabel:
        return IrrepLabel(self.mu12, self.eps12)


def couple(r1: IrrepLabel, r2: IrrepLabel, j: int) -> CoupledLabel:
    """The irrep (mu1+mu2+j+1/2, eps1 eps2 (-1)^j) inside r1 (x) r2."""
    if j < 0:
        raise ConstraintError(f"j must be nonnegative, got {j}")
    return CoupledLabel(r1.mu + r2.mu + j + 0.5, r1.eps * r2.eps * parity_sign(j), j)


@dataclass(frozen=True)
class ThreeFoldLabels:
    """Integers labelling the two coupling schemes of a threefold product.

    ``j_12_3`` couples (12) with 3 and ``j_1_23`` couples 1 with (23).
    """

    j12: int
    j23: int
    j123: int
    j_12_3: int
    j_1_23: int

    def __post_init__(self):
        vals = (self.j12, self.j23, self.j123, self.j_12_3, self.j_1_23)
        if any(int(v) != v or v < 0 for v in vals):
            raise ConstraintError(f"labels must be nonnegative integers, got {vals}")
        if self.j123 != self.j_1_23 + self.j23 or self.j123 != self.j_12_3 + self.j12:
            raise ConstraintError(
                f"need j123 = j_1_23 + j23 = j_12_3 + j12, got {vals}")

    @classmethod
    def from_independent(cls, j12: int, j23: int, j123: int) -> "ThreeFoldLabels":
        return cls(j12, j23, j123, j123 - j12, j123 - j23)


# --------------------------------------------------------------- Clebsch-Gordan

def cg_phase(n1: int, n2: int, j: int) -> int:
    return n1 * (n1 - 1) // 2 + j * (j + 1) // 2 + n1 * (n1 + n2 + 1)


@lru_cache(maxsize=256)
def _cg_block(mu1: float, mu2: float, total: int):
    """Reversed dual Hahn grid and weights plus nu_0, slots (eta, xi) = (mu2, mu1)."""
    z, rho = dualhahn_reversed(DualHahnParams(mu2, mu1, total))
    return z, rho, dualhahn_norm(0, mu2, mu1, total)


def cg_coefficient(n1: int, n2: int, N: int, j: int, r1: IrrepLabel, r2: IrrepLabel) -> float:
    if min(n1, n2, N, j) < 0 or n1 + n2 != N + j:
        raise ConstraintError(f"need n1 + n2 = N + j with nonnegative labels, got "
                              f"({n1}, {n2}, {N}, {j})")
    total = n1 + n2
    z, rho, nu0 = _cg_block(r1.mu, r2.mu, total)
    rad = (mu_factorial(n2, r2.mu) * rho[j]
           / (mu_factorial(n1, r1.mu) * mu_factorial(total, r2.mu) * nu0))
    if rad < 0:
        raise DomainError(f"negative radicand {rad} in CG coefficient; parameters inadmissible")
    poly = dualhahn_table(n1, z[j], r2.mu, r1.mu, total)[n1]
    return parity_sign(cg_phase(n1, n2, j)) * (r2.eps / 2) ** n1 * math.sqrt(rad) * float(poly)


def cg_matrix(total: int, r1: IrrepLabel, r2: IrrepLabel) -> np.ndarray:
    if total < 0:
        raise ConstraintError("total must be nonnegative")
    z, rho, nu0 = _cg_block(r1.mu, r2.mu, total)
    R = dualhahn_table(total, z, r2.mu, r1.mu, total)  # R[n1, j] = R_{n1}(z_j)
    out = np.empty((total + 1, total + 1))
    ftot = mu_factorial(total, r2.mu)
    for n1 in range(total + 1):
        n2 = total - n1
        scale = (r2.eps / 2) ** n1 * math.sqrt(
            mu_factorial(n2, r2.mu) / (mu_factorial(n1, r1.mu) * ftot * nu0))
        for j in range(total + 1):
            out[n1, j] = parity_sign(cg_phase(n1, n2, j)) * scale * math.sqrt(rho[j]) * R[n1, j]
    return out


# --------------------------------------------------------------------- Racah

def racah_phase(labels: ThreeFoldLabels) -> int:
    J, j12, j23 = labels.j123, labels.j12, labels.j23
    return J * (j12 - 1) * j12 // 2 + (J + 1) * (j23 + (j12 + 1) * j12 // 2)


def racah_params(mu1: float, mu2: float, mu3: float, j123: int) -> BannaiItoParams:
    mu123 = mu1 + mu2 + mu3 + 1 + j123
    s = parity_sign(j123)
    return BannaiItoParams((mu2 + mu3) / 2, (mu1 + s * mu123) / 2,
                           (mu3 - mu2) / 2, (s * mu123 - mu1) / 2)


@lru_cache(maxsize=256)
def _racah_block(mu1: float, mu2: float, mu3: float, j123: int):
    p = racah_params(mu1, mu2, mu3, j123)
    case = bi_truncation(p, j123)
    expected = Truncation.I if j123 % 2 == 0 else Truncation.II
    assert case is expected, f"Racah parameters gave truncation case {case}"
    data = bi_ortho(p, j123)
    table = bannai_ito_table(j123, data.points, p)  # table[j12, j23]
    return data, table


def racah_coefficient(labels: ThreeFoldLabels, mu1: float, mu2: float, mu3: float,
                      eps3: int) -> float:
    data, table = _racah_block(mu1, mu2, mu3, labels.j123)
    j12, j23 = labels.j12, labels.j23
    return (parity_sign(racah_phase(labels)) * _check_eps(eps3) ** j12
            * math.sqrt(data.weights[j23] / data.norms[j12]) * table[j12, j23])


def racah_matrix(j123: int, mu1: float, mu2: float, mu3: float, eps3: int) -> np.ndarray:
    return np.array([[racah_coefficient(ThreeFoldLabels.from_independent(a, b, j123),
                                        mu1, mu2, mu3, eps3)
                      for b in range(j123 + 1)] for a in range(j123 + 1)])


# ------------------------------------------------------ truncated X_c matrices

@dataclass(frozen=True)
class TriMatrix:
    dimension: int
    diagonal: np.ndarray
    superdiagonal: np.ndarray
    subdiagonal: np.ndarray

    def dense(self) -> np.ndarray:
        return (np.diag(self.diagonal) + np.diag(self.superdiagonal, 1)
                + np.diag(self.subdiagonal, -1))

    def matvec(self, v, axis: int = 0) -> np.ndarray:
        return np.moveaxis(np.tensordot(self.dense(), np.asarray(v, float), axes=([1], [axis])),
                           0, axis)


def xc_matrix(dim: int, r: IrrepLabel, c: float) -> TriMatrix:
    """X_c = J_+ + J_- + cR on span(e_0..e_{dim-1})."""
    if dim < 1:
        raise ConstraintError("dim must be >= 1")
    n = np.arange(dim)
    diag = c * r.eps * np.where(n % 2 == 0, 1.0, -1.0)
    off = np.sqrt([mu_number(k + 1, r.mu) for k in range(dim - 1)])
    return TriMatrix(dim, diag, off, off.copy())


def delta_xc_apply(vec, r1: IrrepLabel, r2: IrrepLabel, c: float,
                   dims: tuple[int, int] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Apply X_c (x) R + 1 (x) X_0 to coefficients vec[n1, n2].

    Returns the image and a mask of entries that would also receive
    contributions from outside the truncated basis (n1 or n2 at its last index).
    """
    vec = np.asarray(vec, float)
    if dims is None:
        dims = vec.shape
    if vec.shape != tuple(dims):
        raise ConstraintError(f"vector shape {vec.shape} does not match dims {dims}")
    d1, d2 = dims
    r_diag = r2.eps * np.where(np.arange(d2) % 2 == 0, 1.0, -1.0)
    out = xc_matrix(d1, r1, c).matvec(vec, axis=0) * r_diag[None, :]
    out = out + xc_matrix(d2, r2, 0.0).matvec(vec, axis=1)
    boundary = np.zeros(dims, bool)
    boundary[-1, :] = True
    boundary[:, -1] = True
    return out, boundary
