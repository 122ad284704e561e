import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from m1poly.coupling import IrrepLabel
from m1poly.errors import DomainError
from m1poly.families import (BigJacobiParams, ChiharaParams, bigjacobi_eval,
                             bigjacobi_mass_prefactor, bigjacobi_norm, bigjacobi_weight,
                             chihara_weight)
from m1poly.quadrature import (QuadConfig, TwoBranchDomain, bigjacobi_expected_gram,
                               bigjacobi_gram, chihara_gram, inner_mass, inner_mass_bigjacobi,
                               integrate, twovar_gram)


def test_domain_and_config_validation():
    with pytest.raises(DomainError):
        TwoBranchDomain(1.0, 0.5)
    with pytest.raises(OverflowError):
        QuadConfig(compact_nodes=5000)
    with pytest.raises(ValueError):
        QuadConfig(tail_nodes=0)
    assert QuadConfig().doubled().compact_nodes == 192


def test_integrate_chihara_mass():
    p = ChiharaParams(0.5, 0.0)
    mass = integrate(lambda x: chihara_weight(x, p, normalized=True), TwoBranchDomain(0, math.inf))
    assert mass == pytest.approx(1.0, abs=1e-12)


def test_integrate_odd_integrand_vanishes():
    p = ChiharaParams(1.3, 0.0)
    val = integrate(lambda x: x ** 3 * chihara_weight(x, p), TwoBranchDomain(0, math.inf),
                    tail_alpha=0.8)
    assert abs(val) <= 1e-13


def test_integrate_bigjacobi_mass():
    p = BigJacobiParams(1.0, 1.0, 0.0)
    val = integrate(lambda x: bigjacobi_weight(x, p), TwoBranchDomain(0.0, 1.0))
    assert val == pytest.approx(bigjacobi_mass_prefactor(1, 1, 0) * bigjacobi_norm(0, 1, 1),
                                rel=1e-10)


@pytest.mark.parametrize("a, b", [(0.5, 0.5), (1.2, 2.0), (-0.2, 0.6)])
def test_integrate_endpoint_map_on_mild_singularities(a, b):
    p = BigJacobiParams(a, b, 0.3)
    val = integrate(lambda x: bigjacobi_weight(x, p) * bigjacobi_eval(2, x, p) ** 2,
                    TwoBranchDomain(0.3, 1.0), QuadConfig(compact_nodes=128))
    expected = bigjacobi_mass_prefactor(a, b, 0.3) * bigjacobi_norm(2, a, b)
    assert val == pytest.approx(expected, rel=1e-6)


def test_integrate_rejects_non_finite():
    with pytest.raises(FloatingPointError):
        integrate(lambda x: np.where(x > 0.5, np.inf, 1.0), TwoBranchDomain(0.1, 1.0))


def test_chihara_gram_examples():
    assert chihara_gram(0, ChiharaParams(1.1, 0.2)) == pytest.approx(np.eye(1), abs=1e-8)
    G = chihara_gram(6, ChiharaParams(0.8, 0.4))
    assert np.abs(G - np.eye(7)).max() <= 1e-8
    H = chihara_gram(6, ChiharaParams(0.8, -0.4))
    assert np.allclose(G[::2, ::2], H[::2, ::2], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, 2.5), st.floats(-0.8, 0.8))
def test_chihara_gram_identity_and_doubling(mu, gamma):
    p = ChiharaParams(mu, gamma)
    G = chihara_gram(6, p)
    assert np.abs(G - np.eye(7)).max() <= 1e-8
    assert np.abs(G - G.T).max() <= 1e-12 and np.all(np.diag(G) > 0)
    assert np.abs(chihara_gram(6, p, QuadConfig().doubled()) - G).max() <= 1e-9


def test_bigjacobi_gram_examples():
    p = BigJacobiParams(0.5, 0.5, 0.25)
    G = bigjacobi_gram(6, p)
    E = bigjacobi_expected_gram(6, p)
    assert G[0, 0] == pytest.approx(E[0, 0], rel=1e-8)
    d = np.sqrt(np.diag(G))
    off = np.abs(G - np.diag(np.diag(G))) / np.outer(d, d)
    assert off.max() <= 1e-8
    sym = bigjacobi_gram(3, BigJacobiParams(0.7, 0.7, 0.0))
    assert abs(sym[0, 1]) <= 1e-12
    with pytest.raises(DomainError):
        bigjacobi_gram(2, BigJacobiParams(0.5, 0.5, 1.5))


@settings(max_examples=25, deadline=None)
@given(st.floats(-0.9, 3), st.floats(-0.9, 3), st.floats(-0.9, 0.9))
def test_bigjacobi_gram_and_doubling(a, b, c):
    p = BigJacobiParams(a, b, c)
    G = bigjacobi_gram(6, p)
    E = bigjacobi_expected_gram(6, p)
    d = np.sqrt(np.diag(E))
    assert (np.abs(G - E) / np.outer(d, d)).max() <= 1e-8
    assert np.abs(G - G.T).max() <= 1e-12 * np.abs(G).max()
    assert (np.abs(bigjacobi_gram(6, p, QuadConfig().doubled()) - G) / np.outer(d, d)).max() <= 1e-9


@pytest.mark.parametrize("basis", ["uncoupled", "coupled"])
@pytest.mark.parametrize("c, e1, e2", [(0.3, 1, 1), (-0.6, -1, 1), (0.0, 1, -1)])
def test_twovar_gram(basis, c, e1, e2):
    reps = (IrrepLabel(0.6, e1), IrrepLabel(1.3, e2))
    assert twovar_gram(0, c, reps, basis)[0, 0] == pytest.approx(1.0, abs=1e-6)
    for degree in (2, 4):
        G = twovar_gram(degree, c, reps, basis)
        assert np.abs(G - np.eye(len(G))).max() <= 1e-6


def test_twovar_unknown_basis():
    with pytest.raises(ValueError):
        twovar_gram(1, 0.2, (IrrepLabel(0.6), IrrepLabel(0.9)), "mixed")


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 2.5), st.floats(0.1, 2.5), st.sampled_from([-1, 1]),
       st.sampled_from([-1, 1]), st.floats(-0.8, 0.8), st.floats(0.1, 4),
       st.sampled_from([-1.0, 1.0]))
def test_inner_mass_is_bigjacobi_mass(m1, m2, e1, e2, c, gap, s):
    r1, r2 = IrrepLabel(m1, e1), IrrepLabel(m2, e2)
    lam2 = s * (abs(c) + gap)
    a = inner_mass(lam2, c, r1, r2)
    b = inner_mass_bigjacobi(lam2, c, r1, r2)
    assert a == pytest.approx(b, rel=1e-7)
    with pytest.raises(DomainError):
        inner_mass(abs(c) * 0.5, c, r1, r2)
