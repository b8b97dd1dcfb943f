"""Rigorous upper bounds for |W_k'| over a complex ball.

bound_wp returns a raw float C with |W_k'(z)| <= C for every z in the ball,
or +inf when no finite case applies (0 in the ball with k != 0, or the
branch point -1/e in the ball).  Only lower/upper interval bounds and
directed rounding are used; the ball must not straddle a branch cut of W_k
(the caller guarantees this).

Case ladder, cheapest first:
  (d) |z| >= 4(|k|+1)                      -> 1/|z|
  (g) k = 0, |z| >= 1                      -> 1/|z|
  (a) |k| >= 2                             -> (1/|z|) m/(m-1), m = (2|k|-2) pi
  (b) k=1, Im >= 0 or k=-1, Im < 0         -> 1.5/|z|
  then, with t = |ez+1|, the tightest applicable of
  (f) k = 0, |z| <= 64                     -> 2.25 / sqrt(t(1+t))
  (h) k = +-1 on its analytic half plane   -> (1/|z|)(1 + 1/(4+|z|^2))
  (i) k = +-1 anywhere                     -> (1/|z|)(1 + (23/32)/sqrt(t))
  (e) any k                                -> (1/|z|) max(3, 1.5/sqrt(t))
  (c) |z| > e (backstop)                   -> (1/|z|) W_0(|z|)/(W_0(|z|)-1)
"""

from mpmath.libmp import finf, fone, from_int, fzero, mpf_ge, mpf_gt, mpf_le, mpf_lt

from .balls import ComplexBall, RealBall, e_ball, pi_ball

_WP = 53


def _min_f(vals):
    best = None
    for v in vals:
        if v is None:
            continue
        if best is None or mpf_lt(v, best):
            best = v
    return best


def bound_wp(u, k, prec=_WP):
    """Upper bound for sup |W_k'| over the ComplexBall u (raw float).

    prec only controls the precision at which t = |ez+1| is resolved (it
    must exceed the precision of u near the branch point); the case
    formulas themselves are evaluated at a small fixed precision.
    """
    if not u.is_finite():
        return finf
    wp = _WP
    ak = abs(k)
    zl = u.abs_lower()
    one = RealBall.from_int(1)
    inv = one.div(RealBall(zl), wp).abs_upper() if zl != fzero else finf

    if zl != fzero:
        if mpf_ge(zl, from_int(4 * (ak + 1))):                      # (d)
            return inv
        if k == 0 and mpf_ge(zl, fone):                             # (g)
            return inv
        if ak >= 2:                                                 # (a)
            m = pi_ball(wp).mul_int(2 * ak - 2, wp)
            factor = m.div(m.sub(one, wp), wp)
            return RealBall(inv).mul(factor, wp).abs_upper()
        if ak == 1 and ((k == 1 and u.im.is_nonnegative())
                        or (k == -1 and u.im.is_negative())):       # (b)
            return RealBall(inv).mul(RealBall.from_fraction(3, 2, wp),
                                     wp).abs_upper()

    tp = max(prec, _WP) + 8
    t = u.mul_real(e_ball(tp), tp).add(ComplexBall.from_int(1), tp)
    tl = t.abs_lower()
    tb = RealBall(tl)
    cands = []
    if k == 0:
        if tl != fzero and mpf_le(u.abs_upper(), from_int(64)):     # (f)
            den = tb.mul(one.add(tb, wp), wp).sqrt(wp)
            cands.append(RealBall.from_fraction(9, 4, wp).div(den, wp).abs_upper())
    if ak == 1 and zl != fzero:
        on_half_plane = (u.re.is_nonnegative()
                         or (k == -1 and u.im.is_negative())
                         or (k == 1 and u.im.is_nonnegative()))
        if on_half_plane:                                           # (h)
            zb = RealBall(zl)
            den = RealBall.from_int(4).add(zb.mul(zb, wp), wp)
            f = one.add(one.div(den, wp), wp)
            cands.append(RealBall(inv).mul(f, wp).abs_upper())
        if tl != fzero:                                             # (i)
            f = one.add(RealBall.from_fraction(23, 32, wp)
                        .div(tb.sqrt(wp), wp), wp)
            cands.append(RealBall(inv).mul(f, wp).abs_upper())
    if zl != fzero and tl != fzero:                                 # (e)
        f = RealBall.from_fraction(3, 2, wp).div(tb.sqrt(wp), wp).abs_upper()
        if mpf_lt(f, from_int(3)):
            f = from_int(3)
        cands.append(RealBall(inv).mul(RealBall(f), wp).abs_upper())
    best = _min_f(cands)
    if best is not None:
        return best
    return _case_c(zl, inv, wp)


def _case_c(zl, inv, wp):
    """(1/|z|) W_0(|z|)/(W_0(|z|)-1) for |z| > e, any branch (backstop).

    Uses a real W evaluation; terminates because the inner evaluation has
    |z| > e >= 1 and is served by case (g)/(d) above.
    """
    if zl == fzero or not mpf_gt(zl, e_ball(wp).abs_upper()):
        return finf
    from .evaluate import lambertw_real
    w0 = lambertw_real(RealBall(zl), 0, wp)
    wl = w0.lower()
    if not mpf_gt(wl, fone):
        return finf
    one = RealBall.from_int(1)
    wb = RealBall(wl)
    factor = wb.div(wb.sub(one, wp), wp)
    return RealBall(inv).mul(factor, wp).abs_upper()
