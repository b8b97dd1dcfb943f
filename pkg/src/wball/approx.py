"""Heuristic floating-point approximation of W_k(z) by Halley iteration.

Nothing here is trusted for correctness: the certifier turns the result
into a rigorous enclosure afterwards, and rejects it if the iteration
landed on the wrong branch or did not converge.  Accuracy bookkeeping is
purely heuristic.

The working precision escalates roughly threefold per Halley step (cubic
convergence), so reaching q accurate bits costs O(1) full-precision
exponentials.  A hardware-float bootstrap handles the common range; the
all-arbitrary-precision path is always available and is selected with
use_hardware=False or automatically when exponents are out of float range.
"""

import cmath
import math
from dataclasses import dataclass

from mpmath.libmp import (
    fone,
    from_float,
    from_int,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_div,
    mpf_ge,
    mpf_lt,
    mpf_mul,
    mpf_neg,
    mpf_shift,
    mpf_sub,
    to_float,
)

from .balls import ComplexBall, RealBall, cexp, clog, csqrt, e_ball, exp_ball, pi_ball
from .balls import _is_special, _mag

GUARD = 10
STEP_CAP = 40

_TWO_PI = 2 * math.pi


@dataclass
class ApproxResult:
    """Approximation w ~ W_k(z) plus the exponential cache for the
    certifier: exp_ball encloses e^(exp_at) from the final Halley step."""
    w: tuple                 # (re, im) raw floats
    est_bits: int
    exp_at: tuple = None     # point where exp_ball was computed
    exp_ball: ComplexBall = None


def _to_complex(z):
    try:
        x = to_float(z[0], strict=True)
        y = to_float(z[1], strict=True)
    except (OverflowError, ValueError):
        return None
    c = complex(x, y)
    if c != 0 and (abs(x) < 1e-280 and abs(y) < 1e-280):
        return None          # too small: float seed would lose the scale
    return c


def initial_guess(z, k):
    """Seed for the Halley iteration, as a pair of raw floats.

    Regions: near the origin (k = 0) the series W ~ z(1 - z); near the
    branch point -1/e (|k| <= 1, on the series side) the first Puiseux
    terms; otherwise two terms of the asymptotic expansion
    L1 - L2 + L2/L1.  Region boundaries only affect iteration count,
    never correctness.
    """
    zf = _to_complex(z) if abs(k) < 2 ** 40 else None
    if zf is not None and abs(zf) < 1e280:
        w = _guess_float(zf, k)
        if w is not None:
            return from_float(w.real), from_float(w.imag)
    # huge, tiny or extreme-k inputs: asymptotic seed in ball arithmetic
    zb = ComplexBall(RealBall(z[0]), RealBall(z[1]))
    l1 = clog(zb, 64)
    if k:
        l1 = ComplexBall(l1.re, l1.im.add(pi_ball(64).mul_int(2 * k, 64), 64))
    l2 = clog(l1, 64)
    w = l1.sub(l2, 64).add(l2.div(l1, 64), 64)
    return w.re.mid, w.im.mid


def _guess_float(zf, k):
    if k == 0 and abs(zf) < 0.08:
        w = zf * (1 - zf)
        return w
    ez1 = math.e * zf + 1
    if abs(k) <= 1 and abs(ez1) < 0.25:
        side_ok = (k == 0 or (k == -1 and zf.imag >= 0)
                   or (k == 1 and zf.imag < 0))
        if side_ok:
            xi = cmath.sqrt(2 * ez1)
            if k != 0:
                xi = -xi
            return -1 + xi * (1 - xi / 3)
    try:
        l1 = cmath.log(zf) + complex(0, _TWO_PI * k)
        l2 = cmath.log(l1)
        return l1 - l2 + l2 / l1
    except ValueError:
        return None


def _halley_float(w, z, k):
    """Hardware-float Halley phase; returns (w, ok)."""
    for _ in range(14):
        if abs(w.real) > 600 or w == -1:
            return w, False
        ew = cmath.exp(w)
        t = w * ew - z
        denom = ew * (w + 1) - (w + 2) * t / (2 * w + 2)
        if denom == 0 or not _finite_c(denom) or not _finite_c(t):
            return w, False
        step = t / denom
        w2 = w - step
        if not _finite_c(w2):
            return w, False
        if abs(step) <= 1e-12 * (abs(w2) + 1e-300):
            return w2, True
        w = w2
    return w, abs(step) <= 1e-8 * (abs(w) + 1e-300)


def _finite_c(c):
    return math.isfinite(c.real) and math.isfinite(c.imag)


# point complex helpers on raw float pairs (round to nearest, heuristic)

def _pt_mul(a, b, p):
    ax, ay = a
    bx, by = b
    re = mpf_sub(mpf_mul(ax, bx, p, 'n'), mpf_mul(ay, by, p, 'n'), p, 'n')
    im = mpf_add(mpf_mul(ax, by, p, 'n'), mpf_mul(ay, bx, p, 'n'), p, 'n')
    return re, im


def _pt_div(a, b, p):
    bx, by = b
    den = mpf_add(mpf_mul(bx, bx, p, 'n'), mpf_mul(by, by, p, 'n'), p, 'n')
    num = _pt_mul(a, (bx, mpf_neg(by)), p)
    return mpf_div(num[0], den, p, 'n'), mpf_div(num[1], den, p, 'n')


def _pt_sub(a, b, p):
    return mpf_sub(a[0], b[0], p, 'n'), mpf_sub(a[1], b[1], p, 'n')


def _pt_add_int(a, n):
    return mpf_add(a[0], from_int(n), 64, 'n'), a[1]


def _pt_abs_mag(a):
    m = -(1 << 60)
    for c in a:
        if c != fzero:
            m = max(m, _mag(c))
    return m


def halley_step(w, z, prec):
    """One Halley update w' = w - t / (e^w (w+1) - (w+2) t / (2w+2)) with
    t = w e^w - z, at the given precision.

    Returns (w_next, exp_ball) where exp_ball rigorously encloses e^w at
    the input point w; the last step's ball seeds the certifier.
    """
    wb = ComplexBall(RealBall(w[0]), RealBall(w[1]))
    eball = cexp(wb, prec)
    ew = (eball.re.mid, eball.im.mid)
    t = _pt_sub(_pt_mul(w, ew, prec), z, prec)
    w1 = _pt_add_int(w, 1)
    ew_w1 = _pt_mul(ew, w1, prec)
    w2 = _pt_add_int(w, 2)
    tw2 = _pt_add_int((mpf_shift(w[0], 1), mpf_shift(w[1], 1)), 2)
    if tw2[0] == fzero and tw2[1] == fzero:
        return None, eball          # w = -1: step undefined
    frac = _pt_div(_pt_mul(w2, t, prec), tw2, prec)
    denom = _pt_sub(ew_w1, frac, prec)
    if denom[0] == fzero and denom[1] == fzero:
        return None, eball
    step = _pt_div(t, denom, prec)
    return _pt_sub(w, step, prec), eball


def _branch_gap_mag(zball, target=64):
    """Resolved magnitude exponent of e z + 1, or None when not small.

    The cancellation in e z + 1 hides the true scale at low precision, so
    the probe escalates until the result is relatively accurate (or until
    it exceeds the target precision, when the leftover radius scale is
    the honest answer)."""
    complex_in = isinstance(zball, ComplexBall)
    p = 64
    while True:
        if complex_in:
            t = zball.mul_real(e_ball(p), p).add(ComplexBall.from_int(1), p)
            mid_mag = None if t.re.mid == fzero else _mag(t.re.mid)
            rad = t.re.rad
        else:
            t = zball.mul(e_ball(p), p).add(RealBall.from_int(1), p)
            mid_mag = None if t.mid == fzero else _mag(t.mid)
            rad = t.rad
        if complex_in and t.im.mid != fzero:
            mid_mag = max(mid_mag or -(1 << 30), _mag(t.im.mid))
        ub = t.abs_upper()
        if _is_special(ub):
            return None
        if ub == fzero:
            return -(1 << 30)
        if mid_mag is not None and mid_mag > -28:
            return None
        resolved = rad == fzero or (mid_mag is not None
                                    and _mag(rad) < mid_mag - 32)
        if resolved:
            return mid_mag if mid_mag is not None else _mag(ub)
        if p > target + 64:
            return _mag(ub)
        p *= 4


def _puiseux_seed(z, k, gap_mag, target):
    """Arbitrary-precision branch-point seed; hardware floats cannot
    resolve e z + 1 below their epsilon.  Returns (w_pair, est_bits)."""
    from .series import puiseux_w
    amag = gap_mag // 2 + 1
    pseed = min(target, -8 * amag) - amag + 48
    zb = ComplexBall(RealBall(z[0]), RealBall(z[1]))
    side = 1 if not zb.im.is_negative() else -1
    w = puiseux_w(zb, k, side, 8, pseed)
    if not w.is_finite():
        return None, 0
    est = max(6, min(-8 * amag - 8, pseed + amag - 12, target))
    return (w.re.mid, w.im.mid), est


def approx_w(z, k, q, use_hardware=True):
    """Approximate W_k(z) for an exact complex point z = (re, im) to a
    heuristic accuracy of q bits (plus guard bits)."""
    target = q + GUARD
    w = None
    est = 0
    gap = None
    if abs(k) <= 1:
        zb = ComplexBall(RealBall(z[0]), RealBall(z[1]))
        side_ok = (k == 0 or (k == -1 and not zb.im.is_negative())
                   or (k == 1 and zb.im.is_negative()))
        if side_ok:
            gap = _branch_gap_mag(zb, target)
            if gap is not None:
                w, est = _puiseux_seed(z, k, gap, target)
    if w is None and use_hardware and abs(k) < 2 ** 40:
        zf = _to_complex(z)
        if zf is not None and 1e-280 < abs(zf) < 1e280:
            seed = _guess_float(zf, k)
            if seed is not None and _finite_c(seed):
                wf, ok = _halley_float(seed, zf, k)
                if ok and _finite_c(wf):
                    w = (from_float(wf.real), from_float(wf.imag))
                    est = 40
    if w is None:
        w = initial_guess(z, k)
        est = 6
    # |W_k(z)| stays within a few bits of |log z| + 2 pi |k|; a runaway
    # iterate past this cap has diverged and would only waste precision
    wmag_cap = (abs(_pt_abs_mag(z)) + 2).bit_length() \
        + (abs(k) + 2).bit_length() + 24
    exp_at = None
    exp_ball = None
    steps = 0
    while steps < STEP_CAP:
        if est >= target and exp_ball is not None:
            break
        p_next = min(max(3 * est, 16), target) + GUARD
        prev = w
        if _pt_abs_mag(w) > wmag_cap:
            break
        nxt, eball = halley_step(w, z, p_next)
        steps += 1
        if nxt is None or _pt_abs_mag(nxt) > wmag_cap:
            break
        exp_at, exp_ball = prev, eball
        # estimated accuracy: cubic convergence capped by arithmetic precision
        dmag = _pt_abs_mag(_pt_sub(nxt, prev, p_next))
        wmag = _pt_abs_mag(nxt)
        gained = wmag - dmag if dmag > -(1 << 59) else p_next
        est = max(est, min(3 * max(gained, est), p_next - 4))
        w = nxt
        if est >= target and exp_ball is not None and p_next >= target:
            break
    return ApproxResult(w=w, est_bits=est, exp_at=exp_at, exp_ball=exp_ball)


# real-branch variants ------------------------------------------------------

def initial_guess_real(x, k):
    """Seed for real W_0 (x > -1/e) or W_{-1} (-1/e < x < 0)."""
    try:
        xf = to_float(x, strict=True)
    except (OverflowError, ValueError):
        xf = None
    if xf is not None and 1e-280 < abs(xf) < 1e280:
        ex1 = math.e * xf + 1
        if k == 0:
            if abs(xf) < 0.08:
                return from_float(xf * (1 - xf))
            if 0 < ex1 < 0.25:
                a = math.sqrt(2 * ex1)
                return from_float(-1 + a * (1 - a / 3))
            if xf > math.e:
                l1 = math.log(xf)
                l2 = math.log(l1)
                return from_float(l1 - l2 + l2 / l1)
            return from_float(max(-0.99, math.log1p(xf)))
        # k = -1 on (-1/e, 0)
        if 0 < ex1 < 0.25:
            a = math.sqrt(2 * ex1)
            return from_float(-1 - a * (1 + a / 3))
        l1 = math.log(-xf)
        return from_float(l1 - math.log(-l1) if l1 < -1 else -1.5)
    # out of float range: k = 0 with huge/tiny x
    xb = RealBall(x)
    if k == 0:
        if _mag(x) < 0:
            return x
        l1 = _log_mid(xb)
        l2 = _log_mid(RealBall(l1))
        t = mpf_div(l2, l1, 64, 'n')
        return mpf_add(mpf_sub(l1, l2, 64, 'n'), t, 64, 'n')
    l1 = _log_mid(xb.neg())
    l2 = _log_mid(RealBall(mpf_neg(l1)))
    return mpf_sub(l1, l2, 64, 'n')


def _log_mid(b):
    from .balls import log_ball
    return log_ball(b, 64).mid


def _halley_float_real(w, x, k):
    for _ in range(14):
        if abs(w) > 600 or w == -1:
            return w, False
        ew = math.exp(w)
        t = w * ew - x
        denom = ew * (w + 1) - (w + 2) * t / (2 * w + 2)
        if denom == 0 or not math.isfinite(denom):
            return w, False
        step = t / denom
        w2 = w - step
        if not math.isfinite(w2):
            return w, False
        if k == 0 and w2 < -1:
            w2 = -0.999999
        if k == -1 and w2 > -1:
            w2 = -1.000001
        if abs(step) <= 1e-12 * (abs(w2) + 1e-300):
            return w2, True
        w = w2
    return w, abs(step) <= 1e-8 * (abs(w) + 1e-300)


def halley_step_real(w, x, prec):
    eball = exp_ball(RealBall(w), prec)
    ew = eball.mid
    t = mpf_sub(mpf_mul(w, ew, prec, 'n'), x, prec, 'n')
    w1 = mpf_add(w, fone, prec, 'n')
    ew_w1 = mpf_mul(ew, w1, prec, 'n')
    w2 = mpf_add(w, from_int(2), prec, 'n')
    tw2 = mpf_add(mpf_shift(w, 1), from_int(2), prec, 'n')
    if tw2 == fzero:
        return None, eball
    denom = mpf_sub(ew_w1, mpf_div(mpf_mul(w2, t, prec, 'n'), tw2, prec, 'n'),
                    prec, 'n')
    if denom == fzero:
        return None, eball
    return mpf_sub(w, mpf_div(t, denom, prec, 'n'), prec, 'n'), eball


def _puiseux_seed_real(x, k, gap_mag, target):
    from .series import puiseux_w_real
    amag = gap_mag // 2 + 1
    pseed = min(target, -8 * amag) - amag + 48
    w = puiseux_w_real(RealBall(x), k, 8, pseed)
    if not w.is_finite():
        return None, 0
    est = max(6, min(-8 * amag - 8, pseed + amag - 12, target))
    return w.mid, est


def approx_w_real(x, k, q, use_hardware=True):
    """Real-branch approx: k = 0 on (-1/e, inf), k = -1 on (-1/e, 0)."""
    target = q + GUARD
    w = None
    est = 0
    gap = _branch_gap_mag(RealBall(x), target)
    if gap is not None:
        w, est = _puiseux_seed_real(x, k, gap, target)
    if w is None and use_hardware:
        try:
            xf = to_float(x, strict=True)
        except (OverflowError, ValueError):
            xf = None
        if xf is not None and 1e-280 < abs(xf) < 1e280:
            seedt = initial_guess_real(x, k)
            seed = to_float(seedt, strict=False)
            if math.isfinite(seed):
                wf, ok = _halley_float_real(seed, xf, k)
                if ok and math.isfinite(wf):
                    w = from_float(wf)
                    est = 40
    if w is None:
        w = initial_guess_real(x, k)
        est = 6
    exp_at = None
    exp_ball_ = None
    steps = 0
    while steps < STEP_CAP:
        if est >= target and exp_ball_ is not None:
            break
        p_next = min(max(3 * est, 16), target) + GUARD
        prev = w
        nxt, eball = halley_step_real(w, x, p_next)
        steps += 1
        if nxt is None:
            break
        exp_at, exp_ball_ = prev, eball
        d = mpf_sub(nxt, prev, p_next, 'n')
        dmag = _mag(d) if d != fzero else -(1 << 60)
        wmag = _mag(nxt) if nxt != fzero else 0
        gained = wmag - dmag if dmag > -(1 << 59) else p_next
        est = max(est, min(3 * max(gained, est), p_next - 4))
        w = nxt
        if est >= target and p_next >= target:
            break
    return ApproxResult(w=(w, fzero), est_bits=est, exp_at=exp_at,
                        exp_ball=exp_ball_)
