"""Quadrature on two-branch supports and Gram matrices.

The Gram matrices use rules adapted to each weight: after the substitution
t = (lambda^2 - inner^2)/2 (or y = x^2 for the compact case) and summing the
two branches, the integrands of the one-variable families become polynomials
in t (or y), so Gauss-Laguerre / Gauss-Jacobi rules are exact up to rounding.
:func:`integrate` is the generic path for arbitrary integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy import special

from .coupling import IrrepLabel, couple
from .errors import DomainError
from .families.bigjacobi import BigJacobiParams, bigjacobi_mass_prefactor, bigjacobi_norm, \
    bigjacobi_table
from .families.chihara import ChiharaParams, chihara_table
from .identities import k_factor

MAX_NODES = 4096
ENDPOINT_POWER = 3.0  # exponent of the regularized incomplete-beta endpoint map


@dataclass(frozen=True)
class TwoBranchDomain:
    """(-outer, -inner) U (inner, outer); outer may be math.inf."""

    inner: float
    outer: float

    def __post_init__(self):
        if not (self.inner >= 0 and self.inner < self.outer):
            raise DomainError(f"need 0 <= inner < outer, got {self}")


@dataclass(frozen=True)
class QuadConfig:
    compact_nodes: int = 96
    tail_nodes: int = 64
    subdivisions: int = 4

    def __post_init__(self):
        for name in ("compact_nodes", "tail_nodes", "subdivisions"):
            v = getattr(self, name)
            if v < 1:
                raise ValueError(f"{name} must be positive")
            if v > MAX_NODES:
                raise OverflowError(f"{name}={v} exceeds the node limit {MAX_NODES}")

    def doubled(self) -> "QuadConfig":
        return replace(self, compact_nodes=2 * self.compact_nodes,
                       tail_nodes=2 * self.tail_nodes)


def _finite(vals: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("non-finite integrand sample")
    return vals


def _compact_rule(inner: float, outer: float, cfg: QuadConfig,
                  p: float = ENDPOINT_POWER) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on (inner, outer), clustered at both ends by an incomplete-beta map."""
    g, w = np.polynomial.legendre.leggauss(cfg.compact_nodes)
    edges = np.linspace(0.0, 1.0, cfg.subdivisions + 1)
    s = np.concatenate([(a + b) / 2 + (b - a) / 2 * g for a, b in zip(edges[:-1], edges[1:])])
    ws = np.concatenate([(b - a) / 2 * w for a, b in zip(edges[:-1], edges[1:])])
    L = outer - inner
    # measure the distance from the nearer endpoint so nodes stay off the boundary
    lo = s <= 0.5
    x = np.where(lo, inner + L * special.betainc(p, p, s),
                 outer - L * special.betainc(p, p, 1 - s))
    x = np.clip(x, np.nextafter(inner, outer), np.nextafter(outer, inner))
    jac = L * s ** (p - 1) * (1 - s) ** (p - 1) / special.beta(p, p)
    return x, ws * jac


def integrate(f: Callable[[np.ndarray], np.ndarray], dom: TwoBranchDomain,
              cfg: QuadConfig = QuadConfig(), tail_alpha: float = 0.0,
              endpoint_power: float = ENDPOINT_POWER) -> float:
    """Integral of a vectorized ``f`` over both branches of ``dom``.

    For an infinite outer bound the substitution t = (x^2 - inner^2)/2 turns
    each branch into a half-line handled by generalized Gauss-Laguerre with
    exponent ``tail_alpha``; pass the integrand's own power of t there.
    Finite branches use panels of Gauss-Legendre under an incomplete-beta map
    whose order ``endpoint_power`` flattens algebraic endpoint behaviour;
    float64 resolution of x near the endpoints limits accuracy for strongly
    singular integrands (exponents near -1).
    """
    if math.isinf(dom.outer):
        t, w = special.roots_genlaguerre(cfg.tail_nodes, tail_alpha)
        lam = np.sqrt(2 * t + dom.inner ** 2)
        total = 0.0
        for s in (1.0, -1.0):
            vals = _finite(np.asarray(f(s * lam), float))
            total += math.fsum(w * vals * np.exp(t) * t ** (-tail_alpha) / lam)
        return total
    x, w = _compact_rule(dom.inner, dom.outer, cfg, endpoint_power)
    return math.fsum(w * _finite(np.asarray(f(x), float))) + math.fsum(
        w * _finite(np.asarray(f(-x), float)))


# ------------------------------------------------------------- one variable

def chihara_nodes(p: ChiharaParams, cfg: QuadConfig) -> tuple[np.ndarray, np.ndarray]:
    """Rule for the normalized Chihara weight on F, both branches."""
    t, w = special.roots_genlaguerre(cfg.tail_nodes, p.mu - 0.5)
    lam = np.sqrt(2 * t + p.gamma ** 2)
    lam = np.concatenate([lam, -lam])
    w = np.concatenate([w, w])
    return lam, w * (1 + p.gamma / lam) / (2 * math.gamma(p.mu + 0.5))


def chihara_gram(nmax: int, p: ChiharaParams, cfg: QuadConfig = QuadConfig()) -> np.ndarray:
    lam, w = chihara_nodes(p, cfg)
    P = chihara_table(nmax, lam, p.mu, p.gamma)
    return (P * w) @ P.T


def bigjacobi_nodes(p: BigJacobiParams, cfg: QuadConfig) -> tuple[np.ndarray, np.ndarray]:
    """Rule for the Big -1 Jacobi weight on C via y = x^2 and Gauss-Jacobi in y."""
    if abs(p.c) >= 1:
        raise DomainError("quadrature on C needs |c| < 1")
    alpha, beta = (p.a - 1) / 2, (p.b - 1) / 2
    s, w = special.roots_jacobi(cfg.compact_nodes, alpha, beta)
    c2 = p.c * p.c
    y = c2 + (1 - c2) * (s + 1) / 2
    w = w * ((1 - c2) / 2) ** (alpha + beta + 1)
    x = np.sqrt(y)
    x = np.concatenate([x, -x])
    w = np.concatenate([w, w])
    return x, w * (1 + x) * (x - p.c) / (2 * x)


def bigjacobi_gram(nmax: int, p: BigJacobiParams, cfg: QuadConfig = QuadConfig()) -> np.ndarray:
    x, w = bigjacobi_nodes(p, cfg)
    J = bigjacobi_table(nmax, x, p.a, p.b, p.c)
    return (J * w) @ J.T


def bigjacobi_expected_gram(nmax: int, p: BigJacobiParams) -> np.ndarray:
    pref = bigjacobi_mass_prefactor(p.a, p.b, p.c)
    return np.diag([pref * bigjacobi_norm(n, p.a, p.b) for n in range(nmax + 1)])


# ------------------------------------------------------------- two variables

def _twovar_nodes(c: float, r1: IrrepLabel, r2: IrrepLabel, cfg: QuadConfig):
    """Nodes (lambda1, lambda2) and weights for W(l1; mu1, c e1) W(l2; mu2, l1 e2) on G.

    Outer variable T = (l2^2 - c^2)/2 with Gauss-Laguerre exponent mu1+mu2,
    inner t1 = (l1^2 - c^2)/2 = T v with Gauss-Jacobi weight v^(mu1-1/2)(1-v)^(mu2-1/2).
    """
    m1, m2 = r1.mu, r2.mu
    T, wT = special.roots_genlaguerre(cfg.tail_nodes, m1 + m2)
    s, wv = special.roots_jacobi(cfg.compact_nodes, m2 - 0.5, m1 - 0.5)
    v = (s + 1) / 2
    wv = wv * 2.0 ** -(m1 + m2)
    TT, VV = np.meshgrid(T, v, indexing="ij")
    W0 = np.outer(wT, wv)
    a1 = np.sqrt(2 * TT * VV + c * c)
    a2 = np.sqrt(2 * TT + c * c)
    l1s, l2s, ws = [], [], []
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            l1, l2 = s1 * a1, s2 * a2
            ws.append(W0 * (1 + c * r1.eps / l1) * (1 + l1 * r2.eps / l2))
            l1s.append(l1)
            l2s.append(l2)
    norm = 4 * math.gamma(m1 + 0.5) * math.gamma(m2 + 0.5)
    return (np.concatenate([a.ravel() for a in l1s]), np.concatenate([a.ravel() for a in l2s]),
            np.concatenate([a.ravel() for a in ws]) / norm)


def twovar_basis(total_degree: int, c: float, r1: IrrepLabel, r2: IrrepLabel, basis: str,
                 l1: np.ndarray, l2: np.ndarray) -> tuple[list[tuple[int, int]], np.ndarray]:
    """Rows of basis functions at the nodes.

    uncoupled: labels (n1, n2), P_n1(l1; mu1, c e1) P_n2(l2; mu2, l1 e2)
    coupled: labels (N, j), K_j J_j(e2 l1/l2; 2mu2, 2mu1, -c e1 e2/l2) P_N(l2; mu12, c eps12)
    """
    D = total_degree
    labels = [(a, k - a) for k in range(D + 1) for a in range(k + 1)]
    if basis == "uncoupled":
        P1 = chihara_table(D, l1, r1.mu, c * r1.eps)
        P2 = chihara_table(D, l2, r2.mu, l1 * r2.eps)
        return labels, np.array([P1[a] * P2[b] for a, b in labels])
    if basis == "coupled":
        rows = []
        for N, j in labels:
            cl = couple(r1, r2, j)
            ups = _upsilon_vec(j, l1, l2, r1, r2, c)
            rows.append(ups * chihara_table(N, l2, cl.mu12, c * cl.eps12)[N])
        return labels, np.array(rows)
    raise ValueError(f"basis must be 'coupled' or 'uncoupled', got {basis!r}")


def _upsilon_vec(j, l1, l2, r1, r2, c):
    J = bigjacobi_table(j, r2.eps * l1 / l2, 2 * r2.mu, 2 * r1.mu, -c * r1.eps * r2.eps / l2)[j]
    return k_factor(j, l2, r2.mu, r1.mu, c, r1.eps, r2.eps) * J


def twovar_gram(total_degree: int, c: float, reps: tuple[IrrepLabel, IrrepLabel],
                basis: str = "uncoupled", cfg: QuadConfig = QuadConfig()) -> np.ndarray:
    """Gram matrix of a two-variable basis under W(l1; mu1, c e1) W(l2; mu2, l1 e2) on G."""
    r1, r2 = reps
    l1, l2, w = _twovar_nodes(c, r1, r2, cfg)
    _, F = twovar_basis(total_degree, c, r1, r2, basis, l1, l2)
    return (F * w) @ F.T


def inner_mass(lambda2: float, c: float, r1: IrrepLabel, r2: IrrepLabel,
               cfg: QuadConfig = QuadConfig()) -> float:
    """Quadrature of the two-variable measure over lambda1 at fixed lambda2."""
    if not abs(lambda2) > abs(c):
        raise DomainError("inner_mass needs |lambda2| > |c|")
    m1, m2 = r1.mu, r2.mu
    T = (lambda2 ** 2 - c * c) / 2
    s, wv = special.roots_jacobi(cfg.compact_nodes, m2 - 0.5, m1 - 0.5)
    v = (s + 1) / 2
    wv = wv * 2.0 ** -(m1 + m2)
    a1 = np.sqrt(2 * T * v + c * c)
    total = 0.0
    for s1 in (1.0, -1.0):
        l1 = s1 * a1
        total += math.fsum(wv * (1 + c * r1.eps / l1) * np.sign(lambda2) * (lambda2 + l1 * r2.eps))
    return total * T ** (m1 + m2) * math.exp(-T) / (4 * math.gamma(m1 + 0.5) * math.gamma(m2 + 0.5))


def inner_mass_bigjacobi(lambda2: float, c: float, r1: IrrepLabel, r2: IrrepLabel) -> float:
    """The same inner integral written through the Big -1 Jacobi mass.

    With u = eps2 lambda1 / lambda2 the lambda1 integral becomes the total mass
    of the Big -1 Jacobi weight with (a, b, c) = (2mu2, 2mu1, -c eps1 eps2 / lambda2).
    """
    m1, m2 = r1.mu, r2.mu
    C = -c * r1.eps * r2.eps / lambda2
    T = (lambda2 ** 2 - c * c) / 2
    a, b = 2 * m2, 2 * m1
    mass = bigjacobi_mass_prefactor(a, b, C) * bigjacobi_norm(0, a, b)
    return (lambda2 ** 2 * abs(lambda2) * (lambda2 ** 2 / 2) ** (m1 + m2 - 1) * math.exp(-T)
            / (4 * math.gamma(m1 + 0.5) * math.gamma(m2 + 0.5)) * mass)
