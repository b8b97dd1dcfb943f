"""Direct evaluation of Lambert W by Taylor, Puiseux and asymptotic series.

Each evaluator returns a ball whose radius includes an explicit truncation
bound, so no a-posteriori certification is needed on these paths.  All
series coefficients are computed once, exactly, in rational arithmetic and
cached; the caches only grow and are guarded by locks for concurrent use.
"""

import threading
from fractions import Fraction

from mpmath.libmp import fone, from_int, fzero, mpf_ge, mpf_lt, mpf_mul, mpf_sub

from .balls import (
    ComplexBall,
    RAD_PREC,
    RealBall,
    ball_pow_int,
    clog,
    csqrt,
    e_ball,
    pi_ball,
    sqrt_ball,
)
from .balls import _mag, _r_add, _r_mul, _two_pow  # internal helpers


_cache_lock = threading.Lock()
_taylor_cache = [Fraction(0), Fraction(1)]     # (-n)^(n-1)/n!
_puiseux_cache = [Fraction(-1), Fraction(1)]   # branch-point coefficients
_stirling_rows = [[1]]                         # unsigned first kind, row n
_asym_cache = {}


def taylor_coeff(n):
    """Exact coefficient (-n)^(n-1)/n! of the series for W_0 at 0."""
    with _cache_lock:
        while len(_taylor_cache) <= n:
            m = len(_taylor_cache)
            num = (-m) ** (m - 1)
            den = 1
            for j in range(2, m + 1):
                den *= j
            _taylor_cache.append(Fraction(num, den))
        return _taylor_cache[n]


def puiseux_coeffs(n):
    """Exact coefficients c_0..c_n of the branch-point series.

    B(xi) = sum c_k xi^k satisfies B e^B = (xi^2 - 2)/(2e); the recurrence
    below follows from the derivative identity B'(1+B)(xi^2-2) = 2 xi B,
    solved order by order with s = (B+1)^2.
    """
    with _cache_lock:
        c = _puiseux_cache
        while len(c) <= n:
            m = len(c)
            # s_k = sum_{i+j=k, i,j>=1} c_i c_j  (for the b = B+1 part)
            s_prev = sum((c[i] * c[m - 1 - i] for i in range(1, m - 1)),
                         Fraction(0))
            inner = sum((c[i] * c[m + 1 - i] for i in range(2, m)),
                        Fraction(0))
            cm = ((m - 1) * s_prev - 4 * c[m - 1] - 2 * (m + 1) * inner) \
                / Fraction(4 * (m + 1))
            c.append(cm)
        return list(c[:n + 1])


def stirling1(n, k):
    """Unsigned Stirling number of the first kind [n, k], exact."""
    if k < 0 or k > n:
        return 0
    with _cache_lock:
        rows = _stirling_rows
        while len(rows) <= n:
            m = len(rows) - 1
            prev = rows[m]
            nxt = [0] * (m + 2)
            for j in range(m + 1):
                nxt[j] += m * prev[j]
                nxt[j + 1] += prev[j]
            rows.append(nxt)
        return rows[n][k]


def asym_coeff(l, m):
    """Exact rational c_{l,m} = (-1)^l / m! * [l+m, l+1].

    Consistency check: the series must reproduce
    W = L1 - L2 + tau + tau^2/2 - sigma tau + ..., so c_{0,1} = +1,
    c_{0,2} = 1/2, c_{1,1} = -1.  |c_{l,m}| <= 4^(l+m).
    """
    key = (l, m)
    with _cache_lock:
        val = _asym_cache.get(key)
    if val is not None:
        return val
    s = stirling1(l + m, l + 1)
    den = 1
    for j in range(2, m + 1):
        den *= j
    val = Fraction(s if l % 2 == 0 else -s, den)
    with _cache_lock:
        _asym_cache[key] = val
    return val


def _frac_ball(fr, prec):
    return RealBall.from_fraction(fr.numerator, fr.denominator, prec)


def taylor_w0(z, terms, prec):
    """Enclosure of W_0(z) from `terms` terms of the Taylor series at 0.

    Requires e |z| < 1; the truncation error is bounded by
    e^T |z|^T / (1 - e |z|).
    """
    complex_in = isinstance(z, ComplexBall)
    if not z.is_finite():
        return ComplexBall.indeterminate() if complex_in else RealBall.indeterminate()
    if (z.is_exact_zero() if not complex_in else
            (z.re.is_exact_zero() and z.im.is_exact_zero())):
        return z
    wp = prec + 10
    aub = z.abs_upper()
    ez = _r_mul(e_ball(RAD_PREC).abs_upper(), aub)
    if mpf_ge(ez, fone):
        return ComplexBall.indeterminate() if complex_in else RealBall.indeterminate()
    coeffs = [taylor_coeff(n) for n in range(terms)]
    # Horner in z, constant term 0
    acc = _frac_ball(coeffs[-1], wp)
    if complex_in:
        acc = ComplexBall.from_real(acc)
    for n in range(terms - 2, 0, -1):
        acc = acc.mul(z, wp)
        cb = _frac_ball(coeffs[n], wp)
        acc = acc.add(ComplexBall.from_real(cb) if complex_in else cb, wp)
    acc = acc.mul(z, wp)
    # tail: e^T |z|^T / (1 - e|z|)
    et = RealBall(ez)
    tail = ball_pow_int(et, terms, RAD_PREC + 8)
    denom = RealBall(fone).sub(et, RAD_PREC + 8)
    tail = tail.div(denom, RAD_PREC + 8).abs_upper()
    return acc.add_error(tail)


# Puiseux branch selection near z = -1/e (alpha = sqrt(2(ez+1))):
#   k = 0                      -> B(alpha)
#   k = -1 and Im(z) >= 0      -> B(-alpha)
#   k = +1 and Im(z) <  0      -> B(-alpha)


def puiseux_side(z, k):
    """Sign to apply to alpha for branch k, or None if (k, side) is invalid."""
    if k == 0:
        return 1
    if k == -1:
        return -1 if z.im.is_nonnegative() else None
    if k == 1:
        return -1 if z.im.is_negative() else None
    return None


def puiseux_w(z, k, side, terms, prec):
    """Enclosure of W_k(z) from the branch-point series at -1/e.

    side is the sign of Im(z) (+1 covers Im >= 0).  Finite even when z
    contains -1/e.  The tail bound 2 (4|alpha|/5)^P / (1 - 4|alpha|/5) comes
    from |c_n| < 2 (4/5)^n and needs |alpha| < 5/4.
    """
    if not z.is_finite():
        return ComplexBall.indeterminate()
    if k == 0:
        sign = 1
    elif (k == -1 and side >= 0) or (k == 1 and side < 0):
        sign = -1
    else:
        return ComplexBall.indeterminate()
    wp = prec + 10
    eb = e_ball(wp)
    t2 = z.mul_real(eb, wp).add(ComplexBall.from_int(1), wp).shift(1)
    alpha = csqrt(t2, wp)
    if sign < 0:
        alpha = alpha.neg()
    aub = alpha.abs_upper()
    x45 = _r_mul(aub, from_int(4))
    x45 = mpf_mul(x45, RealBall.from_fraction(1, 5, RAD_PREC).mid, RAD_PREC, 'u')
    if mpf_ge(x45, fone):
        return ComplexBall.indeterminate()
    coeffs = puiseux_coeffs(terms - 1)
    acc = ComplexBall.from_real(_frac_ball(coeffs[-1], wp))
    for n in range(terms - 2, -1, -1):
        acc = acc.mul(alpha, wp)
        acc = acc.add(ComplexBall.from_real(_frac_ball(coeffs[n], wp)), wp)
    # tail: 2 x^P / (1 - x) with x = 4|alpha|/5
    xb = RealBall(x45)
    tail = ball_pow_int(xb, terms, RAD_PREC + 8).shift(1)
    tail = tail.div(RealBall(fone).sub(xb, RAD_PREC + 8), RAD_PREC + 8)
    return acc.add_error(tail.abs_upper())


def puiseux_w_real(x, k, terms, prec):
    """Real-branch variant of puiseux_w for k in {0, -1}, x > -1/e."""
    if not x.is_finite() or k not in (0, -1):
        return RealBall.indeterminate()
    wp = prec + 10
    eb = e_ball(wp)
    t2 = x.mul(eb, wp).add(RealBall.from_int(1), wp).shift(1)
    alpha = t2.sqrt(wp)
    if not alpha.is_finite():
        return RealBall.indeterminate()
    if k == -1:
        alpha = alpha.neg()
    aub = alpha.abs_upper()
    x45 = _r_mul(aub, RealBall.from_fraction(4, 5, RAD_PREC).abs_upper())
    if mpf_ge(x45, fone):
        return RealBall.indeterminate()
    coeffs = puiseux_coeffs(terms - 1)
    acc = _frac_ball(coeffs[-1], wp)
    for n in range(terms - 2, -1, -1):
        acc = acc.mul(alpha, wp).add(_frac_ball(coeffs[n], wp), wp)
    xb = RealBall(x45)
    tail = ball_pow_int(xb, terms, RAD_PREC + 8).shift(1)
    tail = tail.div(RealBall(fone).sub(xb, RAD_PREC + 8), RAD_PREC + 8)
    return acc.add_error(tail.abs_upper())


def asym_params(z, k, prec, negated_log=False):
    """(L1, L2, sigma, tau) for the asymptotic expansion of W_k.

    negated_log selects L1 = log(-z) + (2k+1) pi i, the form used for the
    branches with cuts moved to the right.
    """
    wp = prec + 10
    if negated_log:
        l1 = clog(z.neg(), wp)
        twok1 = 2 * k + 1
        l1 = ComplexBall(l1.re, l1.im.add(pi_ball(wp).mul_int(twok1, wp), wp))
    else:
        l1 = clog(z, wp)
        if k:
            l1 = ComplexBall(l1.re, l1.im.add(pi_ball(wp).mul_int(2 * k, wp), wp))
    l2 = clog(l1, wp)
    one = ComplexBall.from_int(1)
    sigma = one.div(l1, wp)
    tau = l2.div(l1, wp)
    return l1, l2, sigma, tau


def asym_w(z, k, L, M, prec, negated_log=False):
    """Enclosure of W_k(z) from the asymptotic series with L x M terms.

    Validity (checked rigorously here): |sigma| < 1/4, |tau| < 1/4, and
    |z| > 1 when k = 0.  The returned radius includes
    eps_{L,M} = (4|tau| (4|sigma|)^L + (4|tau|)^M) / ((1-4|sigma|)(1-4|tau|)).
    """
    if not z.is_finite():
        return ComplexBall.indeterminate()
    wp = prec + 10
    l1, l2, sigma, tau = asym_params(z, k, wp, negated_log)
    quarter = _two_pow(-2)
    s4 = sigma.abs_upper()
    t4 = tau.abs_upper()
    if not (mpf_lt(s4, quarter) and mpf_lt(t4, quarter)):
        return ComplexBall.indeterminate()
    if k == 0 and not mpf_ge(z.abs_lower(), fone):
        return ComplexBall.indeterminate()
    # sum_{l<L} sum_{1<=m<M} c_{l,m} sigma^l tau^m  (Horner in tau per row)
    total = ComplexBall()
    sig_pow = ComplexBall.from_int(1)
    for l in range(L):
        row = ComplexBall.from_real(_frac_ball(asym_coeff(l, M - 1), wp))
        for m in range(M - 2, 0, -1):
            row = row.mul(tau, wp)
            row = row.add(ComplexBall.from_real(_frac_ball(asym_coeff(l, m), wp)), wp)
        row = row.mul(tau, wp)
        if l:
            row = row.mul(sig_pow, wp)
        total = total.add(row, wp)
        if l < L - 1:
            sig_pow = sig_pow.mul(sigma, wp)
    res = l1.sub(l2, wp).add(total, wp)
    # eps_{L,M}
    fs = RealBall(mpf_mul(s4, from_int(4), RAD_PREC, 'u'))
    ft = RealBall(mpf_mul(t4, from_int(4), RAD_PREC, 'u'))
    one = RealBall(fone)
    eps = ft.mul(ball_pow_int(fs, L, RAD_PREC + 8), RAD_PREC + 8) \
        .add(ball_pow_int(ft, M, RAD_PREC + 8), RAD_PREC + 8)
    eps = eps.div(one.sub(fs, RAD_PREC + 8).mul(one.sub(ft, RAD_PREC + 8),
                                                RAD_PREC + 8), RAD_PREC + 8)
    return res.add_error(eps.abs_upper())
