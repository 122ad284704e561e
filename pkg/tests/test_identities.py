import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from m1poly.coupling import IrrepLabel, ThreeFoldLabels, couple
from m1poly.errors import DomainError
from m1poly.families import ChiharaParams, bigjacobi_eval, BigJacobiParams, chihara_eval
from m1poly.identities import (DrawBox, ResidualReport, Sampler, SpectralPoint2, SpectralPoint3,
                               bilinear_genfun_residual, chihara_genfun, conv1_inverse_residual,
                               conv1_residual, conv2_residual, coupled_basis_cg_sum,
                               coupled_basis_realization, f_even, k_factor, make_report,
                               theta_f, theta_g, upsilon_e0)

mus = st.floats(0.1, 2.5)
eps = st.sampled_from([-1, 1])
irreps = st.builds(IrrepLabel, mus, eps)
seeds = st.integers(0, 2 ** 32)


def h_paper(n, a, b):
    """Big -1 Jacobi norm h_n(a, b), written out independently."""
    G = math.gamma
    if n % 2 == 0:
        k = n // 2
        return (2 * G((n + b + 1) / 2) * G((n + a + 3) / 2) * math.factorial(k)
                / ((n + a + 1) * G((n + a + b + 2) / 2) * _poch((a + 1) / 2, k) ** 2))
    k = (n - 1) // 2
    return ((n + a + b + 1) * G((n + b + 2) / 2) * G((n + a + 2) / 2) * math.factorial(k)
            / (2 * G((n + a + b + 3) / 2) * _poch((a + 1) / 2, k + 1) ** 2))


def _poch(a, n):
    out = 1.0
    for i in range(n):
        out *= a + i
    return out


def residual_ok(rep: ResidualReport, factor: float = 1e-13) -> bool:
    """Pass at the stated relative tolerance, or at the rounding level of the summands.

    The second branch covers draws where the identity's value is near a zero and
    the sum cancels; the pure relative measure is then dominated by rounding.
    """
    return rep.passed or rep.abs_residual <= factor * rep.scale


# ------------------------------------------------------------------- reports

def test_report_fields():
    rep = make_report({"a": 1}, 2.0, 2.0 + 1e-12, 1e-9, seed=5)
    assert rep.passed and rep.seed == 5
    assert rep.rel_residual == pytest.approx(1e-12 / (2 + 1e-12))
    assert make_report({}, 0.0, 0.0, 1e-9).rel_residual == 0.0
    assert not make_report({}, 1.0, 2.0, 1e-9).passed
    assert set(rep.to_dict()) >= {"inputs", "lhs", "rhs", "abs_residual", "rel_residual", "tol",
                                  "passed"}


def test_spectral_points_validate():
    with pytest.raises(DomainError):
        SpectralPoint2(1.0, 0.9, 0.1)
    with pytest.raises(DomainError):
        SpectralPoint2(0.5, 2.0, -0.6)
    with pytest.raises(DomainError):
        SpectralPoint3(0.5, 1.0, -0.9, 0.1)
    SpectralPoint3(-0.5, 1.0, -1.5, 0.1)


# ------------------------------------------------------------------ K factor

@given(mus, mus, st.floats(-0.8, 0.8), st.floats(0.05, 4), st.sampled_from([-1, 1]), eps, eps)
def test_k0_is_one(m1, m2, c, gap, s, e1, e2):
    lam = s * (abs(c) + gap)
    assert k_factor(0, lam, m2, m1, c, e1, e2) == pytest.approx(1.0, rel=1e-13)


def test_k1_growth():
    m1, m2, c = 0.6, 0.9, 0.2
    ratios = [k_factor(1, lam, m2, m1, c, 1, 1) / math.sqrt((lam * lam - c * c) / 2)
              for lam in (1e3, 1e4, 1e5)]
    assert ratios[1] == pytest.approx(ratios[2], rel=1e-3)
    assert ratios[0] == pytest.approx(ratios[2], rel=1e-2)


def test_k2_factor_by_factor():
    m1, m2, c, lam = 0.6, 0.9, 0.2, 3.0
    mu12 = m1 + m2 + 2.5
    rad = (((lam ** 2 - c ** 2) / 2) ** 2 * (lam - c) / (lam - c)
           * math.gamma(m1 + 0.5) * math.gamma(m2 + 0.5)
           / (math.gamma(mu12 + 0.5) * h_paper(2, 2 * m2, 2 * m1)))
    assert k_factor(2, lam, m2, m1, c, 1, 1) == pytest.approx(math.sqrt(rad), rel=1e-13)


def test_k_factor_sign_on_negative_branch():
    args = (0.9, 0.6, 0.2, 1, -1)
    assert k_factor(3, -2.5, *args) < 0 < k_factor(3, 2.5, *args)
    with pytest.raises(DomainError):
        k_factor(1, 0.1, *args)


def test_k_factor_vectorizes():
    lam = np.array([1.5, -2.0, 3.0])
    vals = k_factor(2, lam, 0.9, 0.6, 0.2, 1, 1)
    assert vals.shape == (3,)
    assert vals[1] == pytest.approx(k_factor(2, -2.0, 0.9, 0.6, 0.2, 1, 1))


# ------------------------------------------------------------ convolution I

def test_conv1_trivial():
    pt = SpectralPoint2(0.7, -1.9, 0.3)
    r1, r2 = IrrepLabel(0.6, 1), IrrepLabel(0.9, -1)
    rep = conv1_residual(0, 0, pt, r1, r2)
    assert rep.lhs == pytest.approx(1.0) and rep.rhs == pytest.approx(1.0)
    assert rep.abs_residual <= 1e-15
    inv = conv1_inverse_residual(0, 0, pt, r1, r2)
    assert inv.lhs == 1.0 and inv.rhs == pytest.approx(1.0)


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_conv1_random(seed):
    s = Sampler(seed)
    r1, r2 = s.irreps(2)
    pt = s.point2()
    for T in range(9):
        for j in range(T + 1):
            assert residual_ok(conv1_residual(T - j, j, pt, r1, r2))
            assert residual_ok(conv1_inverse_residual(T - j, j, pt, r1, r2))


@pytest.mark.parametrize("N, j", [(0, 1), (2, 3), (4, 4), (1, 6)])
def test_conv1_at_c_zero(N, j):
    r1, r2 = IrrepLabel(0.8, 1), IrrepLabel(1.3, 1)
    for pt in (SpectralPoint2(0.9, 2.1, 0.0), SpectralPoint2(-1.2, -1.7, 0.0)):
        assert conv1_residual(N, j, pt, r1, r2).passed


@settings(max_examples=20, deadline=None)
@given(seeds, st.integers(0, 8))
def test_conv1_round_trip(seed, total):
    """Product values -> coupled values -> product values with the CG matrix."""
    from m1poly.coupling import cg_matrix
    s = Sampler(seed)
    r1, r2 = s.irreps(2)
    pt = s.point2()
    prod = np.array([conv1_inverse_residual(n1, total - n1, pt, r1, r2).lhs
                     for n1 in range(total + 1)])
    coupled = np.array([conv1_residual(total - j, j, pt, r1, r2).lhs for j in range(total + 1)])
    C = cg_matrix(total, r1, r2)
    scale = np.abs(prod).max() + np.abs(coupled).max()
    assert np.abs(C.T @ prod - coupled).max() <= 1e-12 * scale
    assert np.abs(C @ coupled - prod).max() <= 1e-12 * scale


# ----------------------------------------------------------- convolution II

def test_theta_trivial():
    pt = SpectralPoint3(0.5, -1.1, 2.0, 0.2)
    reps = (IrrepLabel(0.6, 1), IrrepLabel(0.9, -1), IrrepLabel(1.3, 1))
    lab = ThreeFoldLabels.from_independent(0, 0, 0)
    assert theta_f(lab, 0, pt, reps) == pytest.approx(1.0)
    assert theta_g(lab, 0, pt, reps) == pytest.approx(1.0)
    assert conv2_residual(lab, pt, reps).abs_residual <= 1e-15


def test_theta_f_factorizes():
    pt = SpectralPoint3(0.5, -1.1, 2.0, 0.2)
    reps = (IrrepLabel(0.6, 1), IrrepLabel(0.9, -1), IrrepLabel(1.3, 1))
    lab = ThreeFoldLabels.from_independent(1, 2, 3)
    mu123 = 0.6 + 0.9 + 1.3 + 1 + 3
    p = ChiharaParams(mu123, 0.2 * -1 * (-1) ** 3)
    ratios = [theta_f(lab, n, pt, reps) / chihara_eval(n, 2.0, p) for n in range(4)]
    assert np.allclose(ratios, ratios[0], rtol=1e-13)


def test_theta_compositional():
    l1, l2, l3, c = 0.5, -1.1, 2.0, 0.2
    pt = SpectralPoint3(l1, l2, l3, c)
    r1, r2, r3 = IrrepLabel(0.6, 1), IrrepLabel(0.9, -1), IrrepLabel(1.3, 1)
    reps = (r1, r2, r3)
    # j12 = 1, j(12)3 = 0
    lab = ThreeFoldLabels.from_independent(1, 0, 1)
    first = (k_factor(1, l2, r2.mu, r1.mu, c, r1.eps, r2.eps)
             * bigjacobi_eval(1, r2.eps * l1 / l2,
                              BigJacobiParams(2 * r2.mu, 2 * r1.mu, -c * r1.eps * r2.eps / l2)))
    assert theta_f(lab, 0, pt, reps) == pytest.approx(first, rel=1e-13)
    # j23 = 0, j1(23) = 1: the outer factor couples r1 with (23)
    lab = ThreeFoldLabels.from_independent(0, 0, 1)
    r23 = couple(r2, r3, 0).irrep
    outer = (k_factor(1, l3, r23.mu, r1.mu, c, r1.eps, r23.eps)
             * bigjacobi_eval(1, r23.eps * l1 / l3,
                              BigJacobiParams(2 * r23.mu, 2 * r1.mu, -c * r1.eps * r23.eps / l3)))
    assert theta_g(lab, 0, pt, reps) == pytest.approx(outer, rel=1e-13)


def test_theta_g_inner_arguments():
    l1, l2, l3, c = 0.5, -1.1, 2.0, 0.2
    r2, r3 = IrrepLabel(0.9, -1), IrrepLabel(1.3, 1)
    expected = (k_factor(2, l3, r3.mu, r2.mu, l1, r2.eps, r3.eps)
                * bigjacobi_eval(2, r3.eps * l2 / l3,
                                 BigJacobiParams(2 * r3.mu, 2 * r2.mu, -l1 * r2.eps * r3.eps / l3)))
    assert upsilon_e0(2, l2, l3, r2, r3, l1)[2] == pytest.approx(expected, rel=1e-14)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_conv2_random(seed):
    s = Sampler(seed)
    reps = s.irreps(3)
    pt = s.point3()
    for J in range(6):
        for a in range(J + 1):
            lab = ThreeFoldLabels.from_independent(a, a, J)
            fwd = conv2_residual(lab, pt, reps, "forward")
            inv = conv2_residual(lab, pt, reps, "inverse")
            assert residual_ok(fwd, 1e-12) and residual_ok(inv, 1e-12)


def test_conv2_bad_direction():
    pt = SpectralPoint3(0.5, -1.1, 2.0, 0.2)
    reps = (IrrepLabel(0.6, 1),) * 3
    with pytest.raises(ValueError):
        conv2_residual(ThreeFoldLabels.from_independent(0, 0, 0), pt, reps, "sideways")


# ---------------------------------------------------- generating functions

@pytest.mark.parametrize("form", ["hypergeometric", "bessel", "partial_sum"])
def test_genfun_at_zero(form):
    assert chihara_genfun(1.3, 0.0, ChiharaParams(0.7, 0.2), form) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(mus, st.floats(-0.8, 0.8), st.floats(0.05, 4), st.sampled_from([-1, 1]),
       st.floats(-2, 2))
def test_genfun_forms_agree(mu, c, gap, s, z):
    lam = s * (abs(c) + gap)
    p = ChiharaParams(mu, c)
    ps = chihara_genfun(lam, z, p, "partial_sum", M=80)
    for form in ("hypergeometric", "bessel"):
        assert abs(chihara_genfun(lam, z, p, form) - ps) <= 1e-10 * max(abs(ps), 1.0)


def test_genfun_boundary():
    mu, c, z = 0.8, 0.4, 1.3
    lam = -c
    expected = math.exp(-z * z / 2) * (1 + z * (lam - c) / (2 * mu + 1))
    for form in ("hypergeometric", "bessel"):
        assert chihara_genfun(lam, z, ChiharaParams(mu, c), form) == pytest.approx(expected)


def test_genfun_partial_sum_converges_geometrically():
    p = ChiharaParams(0.9, 0.3)
    lam, z = 1.7, 1.5
    ref = chihara_genfun(lam, z, p)
    errs = [abs(chihara_genfun(lam, z, p, "partial_sum", M) - ref) for M in (10, 20, 30, 40)]
    assert errs[0] > errs[1] > errs[2] and errs[-1] < 1e-12
    with pytest.raises(ValueError):
        chihara_genfun(lam, z, p, "partial_sum", M=-1)


def test_realization_trivial_and_linear():
    r1, r2 = IrrepLabel(0.6, 1), IrrepLabel(0.9, -1)
    assert coupled_basis_realization(0, 0, 0.3, 0.8, r1, r2) == pytest.approx(1.0)
    vals = [f_even(1, z1, 0.8, r1, r2) for z1 in (-0.5, 0.0, 0.5, 1.0)]
    assert np.diff(vals) == pytest.approx([np.diff(vals)[0]] * 3)
    # slope carries 1/eps2
    flipped = [f_even(1, z1, 0.8, r1, IrrepLabel(0.9, 1)) for z1 in (0.0, 0.5)]
    assert (vals[2] - vals[1]) == pytest.approx(-(flipped[1] - flipped[0]))
    with pytest.raises(DomainError):
        coupled_basis_realization(1, 0, 0.3, 0.0, r1, r2)


@settings(max_examples=20, deadline=None)
@given(irreps, irreps, st.floats(-1.5, 1.5), st.floats(-1.5, 1.5).filter(lambda v: abs(v) > 0.05))
def test_realization_matches_cg_sum(r1, r2, z1, z2):
    for T in range(7):
        for j in range(T + 1):
            a = coupled_basis_realization(T - j, j, z1, z2, r1, r2)
            b = coupled_basis_cg_sum(T - j, j, z1, z2, r1, r2)
            scale = max(abs(z1), abs(z2), 1) ** T
            assert abs(a - b) <= 1e-9 * max(abs(a), abs(b)) or abs(a - b) <= 1e-13 * scale


def test_bilinear_trivial():
    pt = SpectralPoint2(0.7, -1.9, 0.3)
    rep = bilinear_genfun_residual(pt, 0.0, 0.0, IrrepLabel(0.6, 1), IrrepLabel(0.9, -1))
    assert rep.lhs == 1.0 and rep.rhs == 1.0 and rep.rel_residual == 0.0


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_bilinear_random(seed):
    s = Sampler(seed)
    r1, r2 = s.irreps(2)
    pt = s.point2(lam_max=(2.0, 3.0))
    z1, z2 = s.z(), s.z()
    rep = bilinear_genfun_residual(pt, z1, z2, r1, r2, jmax=40, seed=seed)
    assert rep.passed and rep.seed == seed and rep.tail < 1e-12


def test_bilinear_residual_decays_with_jmax():
    pt = SpectralPoint2(-1.3, 2.6, 0.4)
    r1, r2 = IrrepLabel(0.7, -1), IrrepLabel(1.4, 1)
    res = [bilinear_genfun_residual(pt, 0.8, -0.9, r1, r2, jmax=j).abs_residual
           for j in range(0, 30, 2)]
    above_floor = [r for r in res if r > 1e-13]
    assert len(above_floor) >= 6
    assert all(a > b for a, b in zip(above_floor, above_floor[1:]))
    assert max(res[len(above_floor):]) < 1e-14


# ------------------------------------------------------------------ sampler

def test_sampler_deterministic_and_in_box():
    a, b = Sampler(42), Sampler(42)
    pa = [a.point3() for _ in range(20)]
    pb = [b.point3() for _ in range(20)]
    assert pa == pb and a.rejections == b.rejections > 0
    for p in pa:
        assert abs(p.c) <= 0.8 and abs(p.lambda3) < 5
    r = Sampler(1, DrawBox(mu=(0.2, 0.3))).irrep()
    assert 0.2 <= r.mu <= 0.3
