"""Monic Bannai-Ito polynomials B_n(x; rho1, rho2, r1, r2)."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .. import _dd
from ..errors import PoleError, PositivityError, TruncationError
from ..numerics import INTEGER_TOL, parity_sign, pfq_terminating_dd, pochhammer, split_parity
from .base import OrthoData, as_output, check_method


@dataclass(frozen=True)
class BannaiItoParams:
    rho1: float
    rho2: float
    r1: float
    r2: float

    @property
    def g(self) -> float:
        return self.rho1 + self.rho2 - self.r1 - self.r2


class Truncation(enum.Enum):
    I = "i"      # r_j - rho_l = (N+1)/2, N even
    II = "ii"    # rho1 + rho2 = -(N+1)/2, N odd
    III = "iii"  # r1 + r2 = (N+1)/2, N odd
    IV = "iv"    # g = -(N+1)/2, N odd


def _lin(*terms: float):
    """Exact-ish sum of floats as a double-double."""
    acc = _dd.dd(0.0)
    for t in terms:
        acc = _dd.add(acc, _dd.dd(float(t)))
    return acc


def _coeffs_dd(n: int, p: BannaiItoParams):
    """A_n and C_n in double-double, from the float parameters taken as exact."""
    rho1, rho2, r1, r2 = p.rho1, p.rho2, p.r1, p.r2
    g = _lin(rho1, rho2, -r1, -r2)
    ng1 = _dd.add(g, _dd.dd(n + 1.0))
    ng = _dd.add(g, _dd.dd(float(n)))
    if ng1[0] == 0.0 or (n > 0 and ng[0] == 0.0):
        raise PoleError(f"Bannai-Ito recurrence coefficient pole at n={n}, g={p.g}")
    four = _dd.dd(4.0)
    if n % 2 == 0:
        A = _dd.div(_dd.mul(_lin(n + 1.0, 2 * rho1, -2 * r1), _lin(n + 1.0, 2 * rho1, -2 * r2)),
                    _dd.mul(four, ng1))
        if n == 0:
            C = _dd.dd(0.0)
        else:
            C = _dd.neg(_dd.div(_dd.mul(_dd.dd(float(n)), _lin(n, -2 * r1, -2 * r2)),
                                _dd.mul(four, ng)))
    else:
        twog = _dd.mul(_dd.dd(2.0), g)
        A = _dd.div(_dd.mul(_dd.add(twog, _dd.dd(n + 1.0)), _lin(n + 1.0, 2 * rho1, 2 * rho2)),
                    _dd.mul(four, ng1))
        C = _dd.neg(_dd.div(_dd.mul(_lin(n, 2 * rho2, -2 * r2), _lin(n, 2 * rho2, -2 * r1)),
                            _dd.mul(four, ng)))
    return A, C


def bi_recurrence_coeffs(n: int, p: BannaiItoParams) -> tuple[float, float]:
    A, C = _coeffs_dd(n, p)
    return _dd.value(A), _dd.value(C)


def bi_u(n: int, p: BannaiItoParams) -> float:
    """u_n = A_{n-1} C_n (u_0 = 0)."""
    if n == 0:
        return 0.0
    return _dd.value(_dd.mul(_coeffs_dd(n - 1, p)[0], _coeffs_dd(n, p)[1]))


def bannai_ito_table(nmax: int, x, p: BannaiItoParams) -> np.ndarray:
    """Rows B_0..B_nmax from the recurrence, run in double-double.

    Evaluations at grid points near the extreme roots are ill-conditioned with
    respect to rounding of the coefficients, hence the extra precision.
    """
    x = np.asarray(x, float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = 1.0
    cur = (np.ones(x.shape), np.zeros(x.shape))
    prev = (np.zeros(x.shape), np.zeros(x.shape))
    shift = _dd.sub((x, np.zeros(x.shape)), _dd.dd(p.rho1))
    A_prev = _dd.dd(0.0)
    for n in range(nmax):
        A, C = _coeffs_dd(n, p)
        diag = _dd.add(shift, _dd.add(A, C))
        nxt = _dd.sub(_dd.mul(diag, cur), _dd.mul(_dd.mul(A_prev, C), prev))
        prev, cur = cur, nxt
        out[n + 1] = cur[0] + cur[1]
        A_prev = A
    return out


def bi_eta(n: int, p: BannaiItoParams) -> float:
    ne, np_ = split_parity(n)
    return (parity_sign(n) * pochhammer(p.rho1 - p.r1 + 0.5, ne + np_)
            * pochhammer(p.rho2 - p.r1 + 0.5, ne + np_) * pochhammer(1 - p.r1 - p.r2, ne)
            / pochhammer(ne + p.g + 1, ne + np_))


def _closed(n: int, x: float, p: BannaiItoParams) -> float:
    ne, np_ = split_parity(n)
    rho1, rho2, r1, r2 = p.rho1, p.rho2, p.r1, p.r2
    # series parameters stay unrounded: both 4F3 are badly conditioned near
    # the extreme grid points and then cancel against each other
    g = _lin(rho1, rho2, -r1, -r2)
    xr = _lin(x, -r1, 0.5)
    mxr = _lin(-x, -r1, 0.5)
    s1 = _lin(rho1, -r1, 0.5)
    s2 = _lin(rho2, -r1, 0.5)
    rr = _lin(1.0, -r1, -r2)
    one = _dd.dd(1.0)
    total = pfq_terminating_dd([_dd.dd(-ne), _dd.add(g, _dd.dd(ne + 1.0)), xr, mxr],
                               [rr, s1, s2], one, ne)
    coef_lin = _dd.add(_dd.dd(float(ne + np_)), _dd.mul(g, _dd.dd(float(np_))))
    if coef_lin[0] != 0.0:
        coef = _dd.div(_dd.mul(_dd.mul(_dd.dd(float(parity_sign(n))), coef_lin), xr),
                       _dd.mul(s1, s2))
        second = pfq_terminating_dd(
            [_dd.dd(-ne - np_ + 1.0), _dd.add(g, _dd.dd(ne + np_ + 1.0)), _dd.add(xr, one), mxr],
            [rr, _dd.add(s1, one), _dd.add(s2, one)], one, ne + np_ - 1)
        total = _dd.add(total, _dd.mul(coef, second))
    return bi_eta(n, p) * _dd.value(total)


def bannai_ito_eval(n: int, x, p: BannaiItoParams, method: str = "recurrence"):
    check_method(method)
    if method == "recurrence":
        return as_output(bannai_ito_table(n, x, p)[n])
    if np.ndim(x):
        return np.array([_closed(n, float(v), p) for v in np.ravel(x)]).reshape(np.shape(x))
    return _closed(n, float(x), p)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= INTEGER_TOL


def bi_truncation(p: BannaiItoParams, N: int) -> Truncation:
    """Which truncation condition u_{N+1} = 0 the parameters realize."""
    half = (N + 1) / 2
    if N % 2 == 0:
        hits = [Truncation.I] if any(_close(r - rho, half) for r in (p.r1, p.r2)
                                     for rho in (p.rho1, p.rho2)) else []
    else:
        hits = [case for case, value in ((Truncation.II, -(p.rho1 + p.rho2)),
                                         (Truncation.III, p.r1 + p.r2),
                                         (Truncation.IV, -p.g)) if _close(value, half)]
    if not hits:
        raise TruncationError(f"no truncation condition holds for N={N} and {p}")
    if len(hits) > 1:
        raise TruncationError(f"ambiguous truncation for N={N}: cases "
                              f"{', '.join(h.value for h in hits)} all hold")
    return hits[0]


def canonical_truncated(p: BannaiItoParams, N: int) -> BannaiItoParams:
    """Use the Z2 x Z2 symmetry to bring case i to r2 - rho1 = (N+1)/2.

    Only case i (N even) and case ii (N odd) carry the explicit grid and
    weight formulas; other cases raise TruncationError.
    """
    case = bi_truncation(p, N)
    if N % 2 == 1:
        if case is not Truncation.II:
            raise TruncationError(f"truncation case {case.value} (N odd) is not supported; "
                                  "need rho1 + rho2 = -(N+1)/2")
        return p
    half = (N + 1) / 2
    for q in (p, replace(p, r1=p.r2, r2=p.r1), replace(p, rho1=p.rho2, rho2=p.rho1),
              BannaiItoParams(p.rho2, p.rho1, p.r2, p.r1)):
        if _close(q.r2 - q.rho1, half):
            return q
    raise AssertionError("unreachable")


def bi_grid(k: int, rho1: float) -> float:
    return parity_sign(k) * (k / 2 + rho1 + 0.25) - 0.25


def bi_weight(k: int, p: BannaiItoParams) -> float:
    ke, kp = split_parity(k)
    rho1, rho2, r1, r2 = p.rho1, p.rho2, p.r1, p.r2
    num = (pochhammer(rho1 - r1 + 0.5, ke + kp) * pochhammer(rho1 - r2 + 0.5, ke + kp)
           * pochhammer(rho1 + rho2 + 1, ke) * pochhammer(2 * rho1 + 1, ke))
    den = (math.factorial(ke) * pochhammer(rho1 + r1 + 0.5, ke + kp)
           * pochhammer(rho1 + r2 + 0.5, ke + kp) * pochhammer(rho1 - rho2 + 1, ke))
    return parity_sign(k) * num / den


def bi_norm(n: int, N: int, p: BannaiItoParams) -> float:
    """h_n for the truncated orthogonality (case i for even N, case ii for odd N).

    The squared Pochhammer in the denominator is (1+n_e+g)_{n_e+n_p}, the
    same one that normalizes the 4F3 form.
    """
    ne, np_ = split_parity(n)
    Ne = N // 2
    rho1, rho2, r1, r2, g = p.rho1, p.rho2, p.r1, p.r2, p.g
    last = pochhammer(1 + ne + g, ne + np_) ** 2
    if N % 2 == 0:
        num = (math.factorial(ne) * math.factorial(Ne) * pochhammer(1 + 2 * rho1, Ne)
               * pochhammer(1 + rho1 + rho2, ne) * pochhammer(1 + ne + g, Ne - ne)
               * pochhammer(0.5 + rho1 - r1, ne + np_) * pochhammer(0.5 + rho2 - r1, ne + np_))
        den = (math.factorial(Ne - ne - np_) * pochhammer(0.5 + rho1 + r1, Ne - ne)
               * pochhammer(0.5 + ne + np_ + rho2 - r2, Ne - ne - np_) * last)
        return num / den
    num = (math.factorial(ne) * math.factorial(Ne) * pochhammer(1 + 2 * rho1, Ne + 1)
           * pochhammer(1 - r1 - r2, ne) * pochhammer(1 + ne + g, Ne + 1 - ne)
           * pochhammer(0.5 + rho1 - r1, ne + np_) * pochhammer(0.5 + rho1 - r2, ne + np_))
    den = (math.factorial(Ne - ne) * pochhammer(0.5 + rho1 + r1, Ne + 1 - ne - np_)
           * pochhammer(0.5 + ne + np_ + rho2 - r2, Ne + 1 - ne - np_) * last)
    return num / den


def bi_ortho(p: BannaiItoParams, N: int) -> OrthoData:
    """Grid x_k, weights w_k and norms h_n, k, n = 0..N."""
    q = canonical_truncated(p, N)
    bad = [n for n in range(1, N + 1) if not bi_u(n, q) > 0]
    if bad:
        raise PositivityError("Bannai-Ito positivity u_n > 0 fails", bad)
    return OrthoData(
        points=[bi_grid(k, q.rho1) for k in range(N + 1)],
        weights=[bi_weight(k, q) for k in range(N + 1)],
        norms=[bi_norm(n, N, q) for n in range(N + 1)],
        N=N,
    )
