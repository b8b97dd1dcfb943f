"""Branch geometry: range membership, cut clearance, straddle detection.

All predicates are evaluated strongly over balls: they return True only if
the stated condition holds for every point of the input, and False whenever
interval overestimation leaves any doubt.  False is always the safe answer
for the callers (it leads to an indeterminate result, never a wrong one).
"""

from dataclasses import dataclass

from mpmath.libmp import fone, fzero, mpf_ge, mpf_lt, mpf_shift

from .balls import (
    ComplexBall,
    RealBall,
    cos_ball,
    e_ball,
    pi_ball,
    sinc_ball,
)
from .balls import _mag as _ball_mag

STANDARD = "standard"
LEFT = "left"
MIDDLE = "middle"

_CUTS = (STANDARD, LEFT, MIDDLE)


@dataclass(frozen=True)
class BranchSpec:
    """Branch index plus cut convention."""
    k: int
    cut: str = STANDARD

    def __post_init__(self):
        if self.cut not in _CUTS:
            raise ValueError("unknown cut convention: %r" % (self.cut,))
        if self.cut == MIDDLE and self.k != -1:
            raise ValueError("the middle branch requires k = -1")


def _gt_int(b, n):
    """Strongly b > n for a RealBall b and integer n."""
    return mpf_lt(RealBall.from_int(n).mid, b.lower()) if b.is_finite() else False


def _lt_int(b, n):
    return mpf_lt(b.upper(), RealBall.from_int(n).mid) if b.is_finite() else False


def range_check(w, k, prec):
    """Whether all of the ball w lies in the range of the branch W_k.

    Implements the separating-curve test with t = x sinc y, v = -cos y,
    u = y/pi (sign-flipped for negative k).  For k = 0 the test is
    (|u| < 1) and (t > v); for k != 0 it is P1 and (P2 or P3 or P4) with
    the overlapping strips P2..P4 tolerating points near the curves where
    the separating inequality changes sign.
    """
    if not w.is_finite():
        return False
    x, y = w.re, w.im
    # every branch range satisfies |Im w| < (2|k|+1) pi; reject early so
    # absurd approximations never reach the trig reductions
    if y.mid != fzero and _ball_mag(y.mid) > abs(k).bit_length() + 6:
        return False
    t = x.mul(sinc_ball(y, prec), prec)
    v = cos_ball(y, prec).neg()
    u = y.div(pi_ball(prec), prec)
    if k < 0:
        u = u.neg()
    if k == 0:
        # sgn(0) taken as +1 so that |u| < 1 still pins |Im w| < pi;
        # with u forced to 0 the test would accept points of W_{+-1}.
        return mpf_lt(u.abs_upper(), fone) and _ball_gt(t, v)
    ak = 2 * abs(k)
    p1 = _gt_int(u, ak - 2) and _lt_int(u, ak + 1)
    if not p1:
        return False
    p2 = _gt_int(u, ak - 1) and _lt_int(u, ak)
    if p2:
        return True
    p3 = _lt_int(u, ak) and _ball_gt(v, t)
    if p3:
        return True
    p4 = _gt_int(u, ak - 1) and _ball_gt(t, v)
    return p4


def _ball_gt(a, b):
    """Strongly a > b."""
    if not (a.is_finite() and b.is_finite()):
        return False
    return mpf_lt(b.upper(), a.lower())


def cut_clearance(u, k):
    """Whether the ball u certainly avoids crossing a branch cut of W_k.

    Passes when u lies in one closed half plane, or to the right of the
    branch point: Re(eu + 1) > 0 for k = 0, Re(u) > 0 otherwise.
    """
    if not u.is_finite():
        return False
    if u.im.is_nonnegative() or u.im.is_negative():
        return True
    if k == 0:
        t = u.re.mul(e_ball(64), 64).add(RealBall.from_int(1), 64)
        return t.is_positive()
    return u.re.is_positive()


def _im_straddles(im):
    # the real axis belongs to the upper side (branches continuous from
    # above), so [lo, 0] with lo < 0 holds points of both sides
    if not im.is_finite():
        return True
    return mpf_lt(im.lower(), fzero) and mpf_ge(im.upper(), fzero)


def straddles_cut(z, spec):
    """Whether z contains points on both sides of a cut of the branch.

    True only when the imaginary part covers both sides of the real axis
    and the real part possibly meets the cut set of the given branch
    convention.  Inputs lying exactly on a cut do not straddle.
    """
    if not z.is_finite():
        return False
    if not _im_straddles(z.im):
        return False
    re = z.re
    if spec.cut == STANDARD:
        if spec.k == 0:
            # cut on (-inf, -1/e)
            t = re.mul(e_ball(64), 64).add(RealBall.from_int(1), 64)
            return not t.is_nonnegative()
        # all k != 0 cuts lie within (-inf, 0)
        return not re.is_nonnegative()
    if spec.cut == LEFT:
        if spec.k in (-1, 0):
            # cut from -1/e to +inf
            t = re.mul(e_ball(64), 64).add(RealBall.from_int(1), 64)
            return not t.is_nonpositive()
        return not re.is_nonpositive()
    # middle: cuts (-inf, -1/e] and [0, inf)
    t = re.mul(e_ball(64), 64).add(RealBall.from_int(1), 64)
    return not (t.is_positive() and re.is_negative())


def _clip_nonneg(b):
    """Ball of b intersect [0, inf), or None when empty.

    The clipped ball has an exactly zero lower bound (mid = rad = hi/2,
    an exact halving), so a re-test of straddling cannot fire again."""
    if not b.is_finite():
        return RealBall(fzero, b.rad)
    hi = b.upper()
    if mpf_lt(hi, fzero):
        return None
    lo = b.lower()
    if mpf_ge(lo, fzero):
        return b
    if hi == fzero:
        return RealBall()
    half = mpf_shift(hi, -1)
    return RealBall(half, half)


def split_half_planes(z):
    """Split z at the real axis: (z_a, z_b) with z contained in
    z_a union conj(z_b).  Either part may be None when empty."""
    im_a = _clip_nonneg(z.im)
    im_b = _clip_nonneg(z.im.neg())
    za = ComplexBall(z.re, im_a) if im_a is not None else None
    zb = ComplexBall(z.re, im_b) if im_b is not None else None
    return za, zb
