"""Main evaluation of W_k over complex balls, all branches and cuts.

The pipeline for a standard branch:

  1.  non-finite z, or k != 0 with 0 in z            -> indeterminate
  2.  real-valued segments                           -> dedicated real code
  3.  accuracy goal q from the relative radius of z
  4.  k = 0, |z| tiny                                -> Taylor series
  5.  adjust q by the exponent information in log z
  6.  |sigma|, |tau| small                           -> asymptotic series
  7.  z near -1/e on a series-valid side             -> Puiseux series
  8.  z straddling a cut                             -> split, conjugate, union
  9.  z hugging a cut                                -> perturb off the cut
  10. Halley approximation of W_k(mid z)
  11. certification (backward error bound)
  12. propagated error C * rad(z) for inexact z

Alternative cut conventions ("left", "middle") evaluate as
W_k(z_a) union conj(W_{-k'}(z_b)) over the half-plane split, with
(k, k') = (k, k+1) for left and (-1, 1) for middle.
"""

from dataclasses import dataclass

from mpmath.libmp import (
    finf,
    fone,
    from_int,
    fzero,
    mpf_ge,
    mpf_lt,
    mpf_mul,
    mpf_shift,
)

from .balls import (
    RAD_PREC,
    ComplexBall,
    RealBall,
    cexp,
    e_ball,
    exp_ball,
)
from .balls import _is_special, _mag, _two_pow
from .approx import GUARD, approx_w, approx_w_real
from .branches import (
    LEFT,
    MIDDLE,
    STANDARD,
    BranchSpec,
    split_half_planes,
    straddles_cut,
)
from .certify import CertInput, CertInputReal, certify, certify_real
from .dbounds import bound_wp
from .series import asym_w, puiseux_side, puiseux_w, puiseux_w_real, taylor_w0


@dataclass(frozen=True)
class SeriesParams:
    """Tuning constants for the direct series paths.  Small values work
    well; they only decide when a series is preferred over root-finding,
    never whether the result is correct."""
    taylor_terms: int = 12       # T
    asym_l: int = 10             # L
    asym_m: int = 10             # M
    puiseux_terms: int = 20      # P


DEFAULT_PARAMS = SeriesParams()


@dataclass(frozen=True)
class EvalRequest:
    z: ComplexBall
    spec: BranchSpec
    prec: int
    tuning: SeriesParams = DEFAULT_PARAMS


def lambertw(z, k=0, cut=STANDARD, prec=53, params=DEFAULT_PARAMS):
    """Ball containing W_k(z) under the chosen cut convention.

    Never returns a wrong enclosure: failure modes all yield the
    indeterminate ball."""
    if prec < 2:
        raise ValueError("precision must be at least 2 bits")
    spec = BranchSpec(k, cut)
    if cut == STANDARD:
        return _w_standard(z, k, prec, params)
    return _w_alt(z, spec, prec, params)


def lambertw_request(req):
    """Evaluate an EvalRequest (the all-fields entry point)."""
    return lambertw(req.z, req.spec.k, req.spec.cut, req.prec, req.tuning)


def _goal_bits(z, prec):
    """Accuracy goal q = min(p, max(10, -log2 rad(z)/|mid(z)|)), from
    exponent fields only."""
    mids = [b.mid for b in (z.re, z.im) if b.mid != fzero]
    rads = [b.rad for b in (z.re, z.im) if b.rad != fzero]
    if not rads:
        return prec
    if not mids:
        return 10
    mmag = max(_mag(m) for m in mids)
    rmag = max(_mag(r) for r in rads)
    return min(prec, max(10, mmag - rmag))


def _w_standard(z, k, prec, params):
    # step 1
    if not z.is_finite():
        return ComplexBall.indeterminate()
    if k != 0 and z.contains_zero():
        return ComplexBall.indeterminate()
    if k == 0 and z.re.is_exact_zero() and z.im.is_exact_zero():
        return ComplexBall()                      # W_0(0) = 0
    # step 2: real fast path
    if z.im.is_exact_zero() and k in (0, -1):
        x = z.re
        ex1_pos = _ex1_positive(x, prec)
        if k == 0 and ex1_pos:
            return ComplexBall.from_real(lambertw_real(x, 0, prec, params))
        if k == -1 and ex1_pos and x.is_negative():
            return ComplexBall.from_real(lambertw_real(x, -1, prec, params))
    # step 3
    q = _goal_bits(z, prec)
    # step 4: Taylor around the origin
    if k == 0:
        zmid_mag = _z_mid_mag(z)
        if zmid_mag is not None and zmid_mag < -(q // params.taylor_terms):
            terms = _taylor_terms_for(q, zmid_mag, params.taylor_terms)
            res = taylor_w0(z, terms, q + GUARD)
            if res.is_finite():
                return res
    # steps 5, 6: asymptotic regime
    b1, b2 = _log_mags(z, k)
    if b1 is not None:
        if b1 >= 4:
            q = min(prec, max(q + b1 - b2, 10))
        s = 2 - b1
        t = 2 + b2 - b1
        if b1 - max(t + params.asym_l * s, params.asym_m * t) > q:
            res = asym_w(z, k, params.asym_l, params.asym_m, q + GUARD)
            if res.is_finite():
                return res
    return _w_tail(z, k, q, params)


def _ex1_positive(x, prec):
    """Strongly e x + 1 > 0, cheap precision first."""
    for wp in (64, prec + 16):
        t = x.mul(e_ball(wp), wp).add(RealBall.from_int(1), wp)
        if t.is_positive():
            return True
        if t.is_nonpositive() or wp > prec:
            return False
    return False


def _z_mid_mag(z):
    """Magnitude exponent of mid(z), None when 0."""
    mm = [_mag(b.mid) for b in (z.re, z.im) if b.mid != fzero]
    return max(mm) if mm else None


def _taylor_terms_for(q, zmag, min_terms):
    # enough terms that e^T |z|^T lands below 2^-q
    per = max(1, -zmag - 2)
    return max(min_terms, q // per + 3)


def _log_mags(z, k):
    """(b1, b2) ~ (log2 |log z + 2 pi i k|, log2 b1), or (None, None)."""
    zmag = _z_mid_mag(z)
    if zmag is None:
        return None, None
    # |log z| ~ 0.7 |zmag|; |2 pi k| ~ 6.3 |k|
    l_est = max(abs(zmag) * 7 // 10, 6 * abs(k), 1)
    b1 = max(l_est.bit_length() - 1, 1)
    b2 = max(b1.bit_length() - 1, 1)
    return b1, b2


def _puiseux_attempt(z, k, q, params):
    """Step 7: near the branch point, on a series-valid side."""
    if abs(k) > 1:
        return None
    if k == -1 and not z.im.is_nonnegative():
        return None
    if k == 1 and not z.im.is_negative():
        return None
    wp = q + GUARD
    t = z.mul_real(e_ball(wp), wp).add(ComplexBall.from_int(1), wp)
    thr = _two_pow(-(2 * q) // params.puiseux_terms - 6)
    tub = t.abs_upper()
    if not mpf_lt(tub, thr):
        return None
    terms = _puiseux_terms_for(q, tub, params.puiseux_terms)
    side = 1 if k != 1 else -1
    res = puiseux_w(z, k, side, terms, wp)
    return res if res.is_finite() else None


def _puiseux_terms_for(q, tub, min_terms):
    """Terms so that (4 |alpha| / 5)^T drops below 2^-(q+12), given an
    upper bound tub for |ez+1| (alpha^2 = 2|ez+1|)."""
    if tub == fzero:
        return min_terms
    alpha_mag = (_mag(tub) + 1) // 2 + 1
    per_term = max(1, -alpha_mag)
    return max(min_terms, (q + 12) // per_term + 2)


def _w_tail(z, k, q, params, split_done=False):
    """Steps 7-12; also the re-entry point after a cut split (which skips
    steps 1-6 but repeats step 7, where the series may have become valid
    for the one-sided half)."""
    res = _puiseux_attempt(z, k, q, params)
    if res is not None:
        return res
    # step 8: straddle split
    if not split_done and straddles_cut(z, BranchSpec(k, STANDARD)):
        za, zb = split_half_planes(z)
        wa = _w_tail(za, k, q, params, True) if za is not None else None
        wb = (_w_tail(zb, -k, q, params, True).conj()
              if zb is not None else None)
        if wa is None:
            return wb
        if wb is None:
            return wa
        return wa.union(wb)
    # step 9: perturb z off a nearby cut
    zp, k_eff, conj_out = _perturb_off_cut(z, k, q)
    # step 10: approximation at the midpoint
    apx = approx_w((zp.re.mid, zp.im.mid), k_eff, q)
    if apx.w is None:
        return ComplexBall.indeterminate()
    # step 11: certification
    w = certify(CertInput(z=zp.mid_point(), k=k_eff, w_tilde=apx.w,
                          prec=q + GUARD, exp_at=apx.exp_at,
                          exp_ball=apx.exp_ball))
    # step 12: propagated error over the inexact input
    if w.is_finite() and not zp.is_exact():
        c = bound_wp(zp, k_eff, q + GUARD)
        if _is_special(c):
            return ComplexBall.indeterminate()
        w = w.add_error(mpf_mul(c, zp.rad_upper(), RAD_PREC, 'u'))
    return w.conj() if conj_out else w


def _perturb_off_cut(z, k, q):
    """Step 9: when mid(z) hugs a cut to the left of the branch point,
    replace Im(z) by [eps +/- eps] with eps = 2^-q |x|; for a midpoint
    below the axis, evaluate conj(W_{-k}(conj z)) instead.

    Containment: after step 8 the input is one-sided, so the new
    imaginary interval [0, 2 eps] covers the original (or its mirror)."""
    x, y = z.re.mid, z.im.mid
    if x == fzero or x[0] == 0:
        return z, k, False
    xmag = _mag(x)
    if k == 0:
        # branch point -1/e: require x < -1/e, cheap midpoint test
        ex1 = RealBall(x).mul(e_ball(32), 32).add(RealBall.from_int(1), 32)
        if not ex1.is_negative():
            return z, k, False
    ymag = _mag(y) if y != fzero else None
    if ymag is not None and ymag > xmag - q:
        return z, k, False
    eps_exp = xmag - q
    eps = _two_pow(eps_exp)
    newim = RealBall(eps, eps)
    if y != fzero and y[0] == 1:
        return ComplexBall(z.re, newim), -k, True
    return ComplexBall(z.re, newim), k, False


# -- real branches -----------------------------------------------------------


def lambertw_real(x, k=0, prec=53, params=DEFAULT_PARAMS):
    """Real enclosure of W_0 on (-1/e, inf) or W_{-1} on (-1/e, 0).

    Domain violations (including balls touching -1/e) fall back to an
    indeterminate result; the complex entry point handles those."""
    if k not in (0, -1):
        raise ValueError("real branches exist only for k = 0 and k = -1")
    if prec < 2:
        raise ValueError("precision must be at least 2 bits")
    if not x.is_finite():
        return RealBall.indeterminate()
    if k == 0 and x.is_exact_zero():
        return RealBall()
    if not _ex1_positive(x, prec):
        return RealBall.indeterminate()
    if k == -1 and not x.is_negative():
        return RealBall.indeterminate()
    q = _goal_bits(ComplexBall.from_real(x), prec)
    # series shortcuts
    if k == 0 and x.mid != fzero and _mag(x.mid) < -(q // params.taylor_terms):
        terms = _taylor_terms_for(q, _mag(x.mid), params.taylor_terms)
        res = taylor_w0(x, terms, q + GUARD)
        if res.is_finite():
            return res
    wq = q + GUARD
    ex1 = x.mul(e_ball(wq), wq).add(RealBall.from_int(1), wq)
    thr = _two_pow(-(2 * q) // params.puiseux_terms - 6)
    tub = ex1.abs_upper()
    if mpf_lt(tub, mpf_shift(thr, -1)):
        terms = _puiseux_terms_for(q, tub, params.puiseux_terms)
        res = puiseux_w_real(x, k, terms, wq)
        if res.is_finite():
            return res
    if k == 0:
        b1, b2 = _log_mags(ComplexBall.from_real(x), 0)
        if b1 is not None and b1 >= 4:
            q2 = min(prec, max(q + b1 - b2, 10))
            s, t = 2 - b1, 2 + b2 - b1
            if b1 - max(t + params.asym_l * s, params.asym_m * t) > q2:
                res = asym_w(ComplexBall.from_real(x), 0,
                             params.asym_l, params.asym_m, q2 + GUARD)
                if res.is_finite():
                    return res.re
                q = q2
    # wide inputs: exploit monotonicity via endpoint evaluation
    if x.rad != fzero and x.mid != fzero and _mag(x.rad) > _mag(x.mid) - q // 2:
        res = _real_by_endpoints(x, k, prec, params)
        if res is not None:
            return res
    return _real_point_pipeline(x, k, q, params)


def _real_by_endpoints(x, k, prec, params):
    lo = RealBall(x.lower())
    hi = RealBall(x.upper())
    wlo = lambertw_real(lo, k, prec, params)
    whi = lambertw_real(hi, k, prec, params)
    if not (wlo.is_finite() and whi.is_finite()):
        return None
    # W_0 increasing, W_{-1} decreasing
    if k == 0:
        return RealBall.from_endpoints(wlo.lower(), whi.upper(), prec + 8)
    return RealBall.from_endpoints(whi.lower(), wlo.upper(), prec + 8)


def _real_point_pipeline(x, k, q, params):
    apx = approx_w_real(x.mid, k, q)
    if apx.w is None or apx.w[0] is None:
        return RealBall.indeterminate()
    w = certify_real(CertInputReal(x=RealBall(x.mid), k=k, w_tilde=apx.w[0],
                                   prec=q + GUARD, exp_at=apx.exp_at,
                                   exp_ball=apx.exp_ball))
    if w.is_finite() and x.rad != fzero:
        c = bound_wp(ComplexBall.from_real(x), k, q + GUARD)
        if _is_special(c):
            return RealBall.indeterminate()
        w = w.add_error(mpf_mul(c, x.rad, RAD_PREC, 'u'))
    return w


# -- alternative branch cuts -------------------------------------------------


def _w_alt(z, spec, prec, params):
    if not z.is_finite():
        return ComplexBall.indeterminate()
    k = spec.k
    if spec.cut == MIDDLE:
        k_up, k_dn = -1, 1
        # real fast path on the middle segment where W_middle = W_{-1}
        if z.im.is_exact_zero():
            x = z.re
            ex1 = x.mul(e_ball(64), 64).add(RealBall.from_int(1), 64)
            if ex1.is_positive() and x.is_negative():
                return ComplexBall.from_real(lambertw_real(x, -1, prec, params))
    else:
        k_up, k_dn = k, k + 1
    upper_empty = z.im.is_negative()
    lower_empty = z.im.is_positive()
    if lower_empty:
        return _w_standard(z, k_up, prec, params)
    if upper_empty:
        return _w_standard(z.conj(), -k_dn, prec, params).conj()
    za, zb = split_half_planes(z)
    wa = _w_standard(za, k_up, prec, params) if za is not None else None
    wb = (_w_standard(zb, -k_dn, prec, params).conj()
          if zb is not None else None)
    if wa is None:
        return wb if wb is not None else ComplexBall.indeterminate()
    if wb is None:
        return wa
    return wa.union(wb)


# spec'd public aliases ------------------------------------------------------

def evaluate(z, k=0, cut=STANDARD, precision=53):
    """Library API: W_k(z) over balls with selectable cut convention."""
    return lambertw(z, k, cut, precision)


def evaluate_real(x, k=0, precision=53):
    """Library API: real branches W_0 / W_{-1} over real balls."""
    return lambertw_real(x, k, precision)
