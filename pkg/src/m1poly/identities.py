"""Residual checks for the convolution identities and generating functions.

Every check returns a :class:`ResidualReport`. The random draws used by the
sweeps come from a Philox counter-based generator, so a seed reproduces the
same draws on any platform.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from scipy import special

from .coupling import (IrrepLabel, ThreeFoldLabels, cg_coefficient, couple, racah_coefficient)
from .errors import DomainError
from .families.base import as_output
from .families.bigjacobi import bigjacobi_norm, bigjacobi_table
from .families.chihara import ChiharaParams, chihara_table
from .numerics import gamma_ratio, hyp_pfq, mu_factorial, parity_sign, pochhammer, sign

REL_FLOOR = 1e-300


@dataclass(frozen=True)
class ResidualReport:
    inputs: dict[str, Any]
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    tol: float
    passed: bool
    seed: int | None = None
    tail: float | None = None
    # largest summand magnitude; abs_residual / scale tells cancellation apart from failure
    scale: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def make_report(inputs, lhs: float, rhs: float, tol: float, seed=None, tail=None,
                scale=None) -> ResidualReport:
    lhs, rhs = float(lhs), float(rhs)
    err = abs(lhs - rhs)
    rel = err / max(abs(lhs), abs(rhs), REL_FLOOR)
    ok = bool(rel <= tol) and math.isfinite(rel)
    return ResidualReport(dict(inputs), lhs, rhs, err, rel, tol, ok, seed, tail,
                          None if scale is None else float(scale))


@dataclass(frozen=True)
class SpectralPoint2:
    lambda1: float
    lambda2: float
    c: float

    def __post_init__(self):
        if not abs(self.lambda2) > abs(self.lambda1) > abs(self.c):
            raise DomainError(f"need |lambda2| > |lambda1| > |c|, got {self}")


@dataclass(frozen=True)
class SpectralPoint3:
    lambda1: float
    lambda2: float
    lambda3: float
    c: float

    def __post_init__(self):
        if not abs(self.lambda3) > abs(self.lambda2) > abs(self.lambda1) > abs(self.c):
            raise DomainError(f"need |lambda3| > |lambda2| > |lambda1| > |c|, got {self}")


def _scale(lhs, terms) -> float:
    return max([abs(lhs)] + [abs(t) for t in terms])


def _inputs(**kw) -> dict[str, Any]:
    out = {}
    for k, v in kw.items():
        if hasattr(v, "__dataclass_fields__"):
            out[k] = asdict(v)
        elif isinstance(v, (list, tuple)):
            out[k] = [asdict(x) if hasattr(x, "__dataclass_fields__") else x for x in v]
        else:
            out[k] = v
    return out


# ------------------------------------------------------------------ building blocks

def k_factor(j: int, lambda2, mu2: float, mu1: float, c: float, eps1: int, eps2: int):
    """K_j normalization of the coupled two-variable functions.

    Carries sign(lambda2)^j so that K_j J_j is correct on the negative branch.
    ``lambda2`` may be an array.
    """
    lam = np.asarray(lambda2, float)
    if not np.all(np.abs(lam) > abs(c)):
        raise DomainError(f"k_factor needs |lambda2| > |c|, got lambda2={lambda2}, c={c}")
    ce = c * eps1 * eps2
    den = lam - parity_sign(j) * ce
    if np.any(den == 0):
        raise DomainError("k_factor pole: lambda2 = (-1)^j c eps1 eps2")
    mu12 = mu1 + mu2 + j + 0.5
    rad = (((lam ** 2 - c ** 2) / 2) ** j * (lam - ce) / den
           * gamma_ratio([mu1 + 0.5, mu2 + 0.5], [mu12 + 0.5])
           / bigjacobi_norm(j, 2 * mu2, 2 * mu1))
    if np.any(rad < 0):
        raise DomainError(f"negative radicand {rad} in k_factor")
    return as_output(np.sign(lam) ** j * np.sqrt(rad))


def upsilon_e0(jmax: int, lam_first: float, lam_total: float, r_first: IrrepLabel,
               r_second: IrrepLabel, c: float) -> np.ndarray:
    """K_j J_j(eps_s lam_first / lam_total; 2mu_s, 2mu_f, -c eps_f eps_s / lam_total), j=0..jmax."""
    mf, ef, ms, es = r_first.mu, r_first.eps, r_second.mu, r_second.eps
    J = bigjacobi_table(jmax, es * lam_first / lam_total, 2 * ms, 2 * mf,
                        -c * ef * es / lam_total)
    K = np.array([k_factor(j, lam_total, ms, mf, c, ef, es) for j in range(jmax + 1)])
    return K * J


def _chihara(n: int, lam: float, mu: float, gamma: float) -> float:
    return float(chihara_table(n, lam, mu, gamma)[n])


# ------------------------------------------------------------- convolution I

def conv1_residual(N: int, j: int, pt: SpectralPoint2, r1: IrrepLabel, r2: IrrepLabel,
                   tol: float = 1e-9, seed=None) -> ResidualReport:
    """Coupled function vs CG-weighted sum of product polynomials."""
    l1, l2, c = pt.lambda1, pt.lambda2, pt.c
    cl = couple(r1, r2, j)
    lhs = upsilon_e0(j, l1, l2, r1, r2, c)[j] * _chihara(N, l2, cl.mu12, c * cl.eps12)
    total = N + j
    P1 = chihara_table(total, l1, r1.mu, c * r1.eps)
    P2 = chihara_table(total, l2, r2.mu, l1 * r2.eps)
    terms = [cg_coefficient(n1, total - n1, N, j, r1, r2) * P1[n1] * P2[total - n1]
             for n1 in range(total + 1)]
    return make_report(_inputs(N=N, j=j, pt=pt, reps=(r1, r2)), lhs, math.fsum(terms), tol,
                       seed, scale=_scale(lhs, terms))


def conv1_inverse_residual(n1: int, n2: int, pt: SpectralPoint2, r1: IrrepLabel,
                           r2: IrrepLabel, tol: float = 1e-9, seed=None) -> ResidualReport:
    """Product polynomial vs CG-weighted sum of coupled functions."""
    l1, l2, c = pt.lambda1, pt.lambda2, pt.c
    lhs = _chihara(n1, l1, r1.mu, c * r1.eps) * _chihara(n2, l2, r2.mu, l1 * r2.eps)
    total = n1 + n2
    ups = upsilon_e0(total, l1, l2, r1, r2, c)
    terms = []
    for j in range(total + 1):
        cl = couple(r1, r2, j)
        terms.append(cg_coefficient(n1, n2, total - j, j, r1, r2) * ups[j]
                     * _chihara(total - j, l2, cl.mu12, c * cl.eps12))
    return make_report(_inputs(n1=n1, n2=n2, pt=pt, reps=(r1, r2)), lhs, math.fsum(terms),
                       tol, seed, scale=_scale(lhs, terms))


# ------------------------------------------------------------ convolution II

def _mu123(reps, j123: int) -> tuple[float, int]:
    r1, r2, r3 = reps
    return (r1.mu + r2.mu + r3.mu + 1 + j123,
            r1.eps * r2.eps * r3.eps * parity_sign(j123))


def _theta_f_reduced(j12: int, j123: int, pt: SpectralPoint3, reps) -> float:
    r1, r2, r3 = reps
    r12 = couple(r1, r2, j12).irrep
    return (upsilon_e0(j12, pt.lambda1, pt.lambda2, r1, r2, pt.c)[j12]
            * upsilon_e0(j123 - j12, pt.lambda2, pt.lambda3, r12, r3, pt.c)[j123 - j12])


def _theta_g_reduced(j23: int, j123: int, pt: SpectralPoint3, reps) -> float:
    r1, r2, r3 = reps
    r23 = couple(r2, r3, j23).irrep
    return (upsilon_e0(j23, pt.lambda2, pt.lambda3, r2, r3, pt.lambda1)[j23]
            * upsilon_e0(j123 - j23, pt.lambda1, pt.lambda3, r1, r23, pt.c)[j123 - j23])


def theta_f(labels: ThreeFoldLabels, n123: int, pt: SpectralPoint3, reps) -> float:
    """((12)3)-coupled function at (lambda1, lambda2, lambda3)."""
    mu, eps = _mu123(reps, labels.j123)
    return _theta_f_reduced(labels.j12, labels.j123, pt, reps) * _chihara(
        n123, pt.lambda3, mu, pt.c * eps)


def theta_g(labels: ThreeFoldLabels, n123: int, pt: SpectralPoint3, reps) -> float:
    """(1(23))-coupled function; the inner K factor takes lambda1 in its c slot."""
    mu, eps = _mu123(reps, labels.j123)
    return _theta_g_reduced(labels.j23, labels.j123, pt, reps) * _chihara(
        n123, pt.lambda3, mu, pt.c * eps)


def conv2_residual(labels: ThreeFoldLabels, pt: SpectralPoint3, reps,
                   direction: str = "forward", tol: float = 1e-8, seed=None) -> ResidualReport:
    """Racah recoupling between the two threefold coupled functions.

    forward: theta_f(j12) = sum_j23 R(j12, j23) theta_g(j23)
    inverse: theta_g(j23) = sum_j12 R(j12, j23) theta_f(j12)
    The common P_n123(lambda3) factor cancels and is left out.
    """
    r1, r2, r3 = reps
    J = labels.j123

    def racah(a, b):
        return racah_coefficient(ThreeFoldLabels.from_independent(a, b, J),
                                 r1.mu, r2.mu, r3.mu, r3.eps)

    if direction == "forward":
        lhs = _theta_f_reduced(labels.j12, J, pt, reps)
        terms = [racah(labels.j12, b) * _theta_g_reduced(b, J, pt, reps) for b in range(J + 1)]
    elif direction == "inverse":
        lhs = _theta_g_reduced(labels.j23, J, pt, reps)
        terms = [racah(a, labels.j23) * _theta_f_reduced(a, J, pt, reps) for a in range(J + 1)]
    else:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    return make_report(_inputs(labels=labels, pt=pt, reps=reps, direction=direction),
                       lhs, math.fsum(terms), tol, seed, scale=_scale(lhs, terms))


# ------------------------------------------------------- generating functions

GENFUN_FORMS = ("hypergeometric", "bessel", "partial_sum")


def _genfun_hyp(lam: float, z: float, mu: float, gamma: float) -> float:
    X = z * z * (lam * lam - gamma * gamma) / 4
    return math.exp(-z * z / 2) * (hyp_pfq([], [mu + 0.5], X)
                                   + z * (lam - gamma) / (2 * mu + 1) * hyp_pfq([], [mu + 1.5], X))


def _genfun_bessel(lam: float, z: float, mu: float, gamma: float) -> float:
    s2 = lam * lam - gamma * gamma
    if s2 <= 0 or z == 0:
        return _genfun_hyp(lam, z, mu, gamma)
    s = math.sqrt(s2)
    x = abs(z) * s
    if x < 1e-100:  # ive underflows; the 0F1 series is exact here anyway
        return _genfun_hyp(lam, z, mu, gamma)
    # ive(v, x) = iv(v, x) e^{-x}; fold e^{x} into the Gaussian to avoid overflow
    scale = math.exp(x - z * z / 2 + math.lgamma(mu + 0.5) + (0.5 - mu) * math.log(x / 2))
    return scale * (special.ive(mu - 0.5, x) + sign(z) * (lam - gamma) / s * special.ive(mu + 0.5, x))


def chihara_genfun(lam: float, z: float, p: ChiharaParams, form: str = "hypergeometric",
                   M: int = 80) -> float:
    """sum_n P_n(lam; mu, gamma) z^n / sqrt([n]_mu!) in one of three forms."""
    if form == "hypergeometric":
        return _genfun_hyp(lam, z, p.mu, p.gamma)
    if form == "bessel":
        return _genfun_bessel(lam, z, p.mu, p.gamma)
    if form == "partial_sum":
        if M < 0:
            raise ValueError("partial_sum needs M >= 0")
        P = chihara_table(M, lam, p.mu, p.gamma)
        return math.fsum(P[n] * z ** n / math.sqrt(mu_factorial(n, p.mu)) for n in range(M + 1))
    raise ValueError(f"form must be one of {GENFUN_FORMS}, got {form!r}")


def _f_prefactor(j: int, z2: float, mu1: float, mu2: float) -> float:
    je, jp = divmod(j, 2)
    return (parity_sign(je + jp) * z2 ** j / math.sqrt(mu_factorial(j, mu2))
            * math.sqrt(pochhammer(0.5 + mu1, je + jp) / pochhammer(je + 1 + mu1 + mu2, je + jp)))


def _two_term(a_num, coef: float, b_num, mu1: float, q: float) -> float:
    first = hyp_pfq(a_num, [0.5 + mu1], q)
    if coef == 0:
        return first
    return first + coef * hyp_pfq(b_num, [1.5 + mu1], q)


def f_even(j: int, z1: float, z2: float, r1: IrrepLabel, r2: IrrepLabel) -> float:
    if z2 == 0:
        raise DomainError("f_even needs z2 != 0")
    je, jp = divmod(j, 2)
    m1, m2 = r1.mu, r2.mu
    q = -(z1 / z2) ** 2
    coef = parity_sign(jp) * z1 * (j + 2 * m2 * jp) / (z2 * r2.eps * (1 + 2 * m1))
    return _f_prefactor(j, z2, m1, m2) * _two_term(
        [-je, 0.5 - je - jp - m2], coef, [1 - je - jp, 0.5 - je - m2], m1, q)


def f_odd(j: int, z1: float, z2: float, r1: IrrepLabel, r2: IrrepLabel) -> float:
    if z2 == 0:
        raise DomainError("f_odd needs z2 != 0")
    je, jp = divmod(j, 2)
    m1, m2 = r1.mu, r2.mu
    q = -(z1 / z2) ** 2
    coef = parity_sign(jp) * z1 * (j + 1 + 2 * m1 + 2 * m2 * jp) / (z2 * r2.eps * (1 + 2 * m1))
    return (z2 / math.hypot(z1, z2) * _f_prefactor(j, z2, m1, m2)
            * _two_term([-je - jp, -0.5 - je - m2], coef, [-je, 0.5 - je - jp - m2], m1, q))


def coupled_basis_realization(N: int, j: int, z1: float, z2: float, r1: IrrepLabel,
                              r2: IrrepLabel) -> float:
    """Coupled basis vector e_N^{(mu12, eps12)} as a function of (z1, z2)."""
    cl = couple(r1, r2, j)
    f = f_even(j, z1, z2, r1, r2) if N % 2 == 0 else f_odd(j, z1, z2, r1, r2)
    return (z1 * z1 + z2 * z2) ** (N / 2) / math.sqrt(mu_factorial(N, cl.mu12)) * f


def coupled_basis_cg_sum(N: int, j: int, z1: float, z2: float, r1: IrrepLabel,
                         r2: IrrepLabel) -> float:
    """Same vector expanded on the product basis z1^n1 z2^n2 / sqrt([n1]! [n2]!)."""
    T = N + j
    return math.fsum(cg_coefficient(n1, T - n1, N, j, r1, r2) * z1 ** n1 * z2 ** (T - n1)
                     / math.sqrt(mu_factorial(n1, r1.mu) * mu_factorial(T - n1, r2.mu))
                     for n1 in range(T + 1))


def bilinear_terms(pt: SpectralPoint2, z1: float, z2: float, r1: IrrepLabel, r2: IrrepLabel,
                   jmax: int) -> tuple[float, np.ndarray]:
    """Left side and the j = 0..jmax terms of the bilinear generating function.

    Both sides carry the common factor exp(-(z1^2 + z2^2)/2), which is dropped.
    """
    l1, l2, c = pt.lambda1, pt.lambda2, pt.c
    m1, m2 = r1.mu, r2.mu
    X1 = z1 * z1 * (l1 * l1 - c * c) / 4
    X2 = z2 * z2 * (l2 * l2 - l1 * l1) / 4
    lhs = ((hyp_pfq([], [m1 + 0.5], X1) + z1 * (l1 - c * r1.eps) / (2 * m1 + 1)
            * hyp_pfq([], [m1 + 1.5], X1))
           * (hyp_pfq([], [m2 + 0.5], X2) + z2 * (l2 - l1 * r2.eps) / (2 * m2 + 1)
              * hyp_pfq([], [m2 + 1.5], X2)))
    r2sq = z1 * z1 + z2 * z2
    X = r2sq * (l2 * l2 - c * c) / 4
    ups = upsilon_e0(jmax, l1, l2, r1, r2, c)
    terms = np.empty(jmax + 1)
    for j in range(jmax + 1):
        cl = couple(r1, r2, j)
        even = f_even(j, z1, z2, r1, r2) * hyp_pfq([], [cl.mu12 + 0.5], X)
        odd = (f_odd(j, z1, z2, r1, r2) * math.sqrt(r2sq) * (l2 - c * cl.eps12)
               / (2 * cl.mu12 + 1) * hyp_pfq([], [cl.mu12 + 1.5], X))
        terms[j] = ups[j] * (even + odd)
    return lhs, terms


def bilinear_genfun_residual(pt: SpectralPoint2, z1: float, z2: float, r1: IrrepLabel,
                             r2: IrrepLabel, jmax: int = 40, tol: float = 1e-7,
                             seed=None) -> ResidualReport:
    if jmax < 0:
        raise ValueError("jmax must be >= 0")
    if z1 == 0 and z2 == 0:
        lhs, terms = 1.0, np.array([1.0])
    else:
        if z2 == 0:
            raise DomainError("bilinear check needs z2 != 0 unless z1 = z2 = 0")
        lhs, terms = bilinear_terms(pt, z1, z2, r1, r2, jmax)
    rhs = math.fsum(terms)
    tail = abs(terms[-1]) / max(abs(rhs), REL_FLOOR)
    return make_report(_inputs(pt=pt, z1=z1, z2=z2, reps=(r1, r2), jmax=jmax),
                       lhs, rhs, tol, seed, tail)


# ------------------------------------------------------------------ random draws

@dataclass
class DrawBox:
    mu: tuple[float, float] = (0.1, 2.5)
    c: tuple[float, float] = (-0.8, 0.8)
    lam_max: tuple[float, ...] = (2.0, 4.0, 5.0)
    gap: float = 0.1
    z_max: float = 1.0


@dataclass
class Sampler:
    """Seeded rejection sampler over the admissible draw box.

    Magnitudes |lambda_i| are drawn uniformly on (gap, lam_max[i]) independently
    of each other; a draw that violates |lambda_{i+1}| > |lambda_i| + gap (with
    lambda_0 = c) is rejected and counted.
    """

    seed: int
    box: DrawBox = field(default_factory=DrawBox)
    rejections: int = 0

    def __post_init__(self):
        self.rng = np.random.Generator(np.random.Philox(self.seed))

    def irrep(self) -> IrrepLabel:
        return IrrepLabel(float(self.rng.uniform(*self.box.mu)), int(self.rng.choice([-1, 1])))

    def irreps(self, k: int) -> tuple[IrrepLabel, ...]:
        return tuple(self.irrep() for _ in range(k))

    def _lambdas(self, k: int, lam_max=None) -> tuple[float, list[float]]:
        lam_max = lam_max or self.box.lam_max
        while True:
            c = float(self.rng.uniform(*self.box.c))
            mags = [float(self.rng.uniform(self.box.gap, lam_max[i])) for i in range(k)]
            signs = self.rng.choice([-1.0, 1.0], size=k)
            chain = [abs(c)] + mags
            if all(chain[i + 1] > chain[i] + self.box.gap for i in range(k)):
                return c, [float(s * m) for s, m in zip(signs, mags)]
            self.rejections += 1

    def point2(self, lam_max=None) -> SpectralPoint2:
        c, (l1, l2) = self._lambdas(2, lam_max)
        return SpectralPoint2(l1, l2, c)

    def point3(self) -> SpectralPoint3:
        c, (l1, l2, l3) = self._lambdas(3)
        return SpectralPoint3(l1, l2, l3, c)

    def z(self) -> float:
        return float(self.rng.uniform(-self.box.z_max, self.box.z_max))
