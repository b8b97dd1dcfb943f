"""A-posteriori certification: turn an unproven approximation w~ into a
rigorous enclosure of W_k(z) by backward error analysis.

The residual z~ = w~ e^{w~} is computed in ball arithmetic; after checking
that w~ lies in the range of the requested branch and that the hull of z
and z~ stays clear of the branch cuts, |W_k(z) - w~| <= C |z - z~| with C a
derivative bound over the hull.  Any failed check yields an indeterminate
ball, never a wrong enclosure.
"""

from dataclasses import dataclass

from mpmath.libmp import finf, fzero, mpf_gt, mpf_lt, mpf_mul, mpf_neg

from .balls import RAD_PREC, ComplexBall, RealBall, cexp, e_ball, exp_ball
from .balls import _is_special
from .branches import cut_clearance, range_check
from .dbounds import bound_wp


@dataclass
class CertInput:
    """Inputs to certify(); z must not straddle the W_k cut (the caller
    perturbs or splits beforehand)."""
    z: ComplexBall
    k: int
    w_tilde: tuple                  # (re, im) raw floats
    prec: int
    exp_at: tuple = None            # optional cache: e^(exp_at) = exp_ball
    exp_ball: ComplexBall = None


def _exp_of_w(wt, inp, wp):
    """e^{w~}, reusing the final Halley exponential when cached: with
    delta = w~ - w_j small, e^{w~} = e^{w_j} e^delta costs only a few
    series terms."""
    if inp.exp_ball is not None and inp.exp_at is not None and inp.exp_ball.is_finite():
        at = ComplexBall(RealBall(inp.exp_at[0]), RealBall(inp.exp_at[1]))
        delta = wt.sub(at, wp)
        dm = delta.abs_upper()
        if not _is_special(dm) and mpf_lt(dm, RealBall.from_fraction(1, 2, 30).mid):
            return inp.exp_ball.mul(cexp(delta, wp), wp)
    return cexp(wt, wp)


def certify(inp):
    """Certified enclosure of W_k(z) around w~, or indeterminate."""
    z, k, wp = inp.z, inp.k, inp.prec + 8
    wt = ComplexBall(RealBall(inp.w_tilde[0]), RealBall(inp.w_tilde[1]))
    if not (z.is_finite() and wt.is_finite()):
        return ComplexBall.indeterminate()
    if not (range_check(wt, k, 64) or range_check(wt, k, wp + 16)):
        return ComplexBall.indeterminate()
    zt = wt.mul(_exp_of_w(wt, inp, wp), wp)
    u = z.union(zt)
    if not cut_clearance(u, k):
        return ComplexBall.indeterminate()
    c = bound_wp(u, k, wp)
    if _is_special(c):
        return ComplexBall.indeterminate()
    r = mpf_mul(c, z.sub(zt, wp).abs_upper(), RAD_PREC, 'u') if c != fzero else fzero
    return wt.add_error(r)


@dataclass
class CertInputReal:
    x: RealBall
    k: int                          # 0 or -1
    w_tilde: object                 # raw float
    prec: int
    exp_at: object = None
    exp_ball: RealBall = None


def certify_real(inp):
    """Real-branch certification: k = 0 on (-1/e, inf), k = -1 on
    (-1/e, 0); the range test reduces to w~ > -1 resp. w~ < -1."""
    x, k, wp = inp.x, inp.k, inp.prec + 8
    w = inp.w_tilde
    if not x.is_finite() or w is None or _is_special(w):
        return RealBall.indeterminate()
    minus_one = mpf_neg(RealBall.from_int(1).mid)
    if k == 0:
        if not mpf_gt(w, minus_one):
            return RealBall.indeterminate()
    else:
        if not mpf_lt(w, minus_one):
            return RealBall.indeterminate()
    wt = RealBall(w)
    if inp.exp_ball is not None and inp.exp_at is not None:
        delta = wt.sub(RealBall(inp.exp_at), wp)
        ew = inp.exp_ball.mul(exp_ball(delta, wp), wp)
    else:
        ew = exp_ball(wt, wp)
    zt = wt.mul(ew, wp)
    u = x.union(zt)
    # domain check doubles as cut clearance on the real line
    t = u.mul(e_ball(wp), wp).add(RealBall.from_int(1), wp)
    if not t.is_positive():
        return RealBall.indeterminate()
    if k == -1 and not u.is_negative():
        return RealBall.indeterminate()
    c = bound_wp(ComplexBall.from_real(u), k, wp)
    if _is_special(c):
        return RealBall.indeterminate()
    r = mpf_mul(c, x.sub(zt, wp).abs_upper(), RAD_PREC, 'u') if c != fzero else fzero
    return wt.add_error(r)
