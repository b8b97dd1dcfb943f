"""Midpoint-radius interval ("ball") arithmetic on arbitrary-precision floats.

A RealBall is a pair (mid, rad) of binary floats denoting the interval
[mid - rad, mid + rad].  Midpoints carry an arbitrary-precision mantissa and
a bignum exponent, so there is no overflow or underflow; radii are kept at a
fixed small precision and always rounded away from zero.  Every operation
returns a ball containing the exact image of its input balls.  A radius of
+inf marks an indeterminate ball (the whole extended line), the sound
"don't know" value, which propagates through all operations.

ComplexBall is a rectangle: a RealBall for each of the real and imaginary
parts.

The float substrate is mpmath.libmp: raw floats are tuples
(sign, man, exp, bc) with correct directed rounding for field operations.
Transcendental functions are built here from ball operations plus explicit
series truncation bounds; no external transcendental code is trusted for
containment.
"""

import threading

from mpmath.libmp import (
    fnan,
    fninf,
    fone,
    from_int,
    from_man_exp,
    fzero,
    mpf_abs,
    mpf_add,
    mpf_div,
    mpf_ge,
    mpf_gt,
    mpf_le,
    mpf_lt,
    mpf_mul,
    mpf_neg,
    mpf_pos,
    mpf_shift,
    mpf_sqrt,
    mpf_sub,
    to_int,
    to_str,
)
from mpmath.libmp import finf  # noqa: F401  (re-exported: indeterminate radius)

# Radius significand size in bits.  Radii are always rounded away from zero
# ('u'), so a computed radius majorizes the true one.
RAD_PREC = 30

# arguments whose magnitude exponent exceeds this cannot be reduced modulo
# pi or log 2 in reasonable memory; affected functions fall back to a sound
# wide enclosure instead
_MAG_LIMIT = 1 << 31

_F_TWO = from_int(2)
_F_HALF = from_man_exp(1, -1)


def _is_special(x):
    """True for nan and +/-inf (zero mantissa but not the zero tuple)."""
    return x[1] == 0 and x != fzero


def _mag(x):
    """Return e with 2^(e-1) <= |x| < 2^e, for finite nonzero x."""
    return x[2] + x[3]


def _two_pow(e):
    """Exact power of two 2^e as a raw float."""
    return from_man_exp(1, e)


def _half_ulp(x, prec):
    """Upper bound for the round-to-nearest error of a nonzero result x."""
    return from_man_exp(1, x[2] + x[3] - prec - 1)


# ---------------------------------------------------------------------------
# midpoint primitives: each returns (rounded value, rounding error bound)

def _m_round(x, prec):
    if x[1] == 0:
        return x, fzero
    if x[3] <= prec:
        return x, fzero
    r = mpf_pos(x, prec, 'n')
    return r, _half_ulp(r, prec)


def _m_add(a, b, prec):
    if a == fzero:
        return _m_round(b, prec)
    if b == fzero:
        return _m_round(a, prec)
    span = max(a[2] + a[3], b[2] + b[3]) - min(a[2], b[2])
    if span <= prec + 8:
        # exact sum fits comfortably; round once afterwards
        return _m_round(mpf_add(a, b, 0, 'n'), prec)
    s = mpf_add(a, b, prec, 'n')
    if s == fzero:
        # with unbounded exponents a correctly rounded zero is exact
        return s, fzero
    return s, _half_ulp(s, prec)


def _m_sub(a, b, prec):
    return _m_add(a, mpf_neg(b), prec)


def _m_mul(a, b, prec):
    if a[1] == 0 or b[1] == 0:
        return mpf_mul(a, b), fzero
    if a[3] + b[3] <= prec:
        return mpf_mul(a, b), fzero
    r = mpf_mul(a, b, prec, 'n')
    return r, _half_ulp(r, prec)


def _m_div(a, b, prec):
    if a == fzero:
        return fzero, fzero
    if b[3] == 1:
        # divisor is +/- a power of two: exact shift
        q = mpf_shift(a, -b[2])
        if b[0]:
            q = mpf_neg(q)
        return _m_round(q, prec)
    r = mpf_div(a, b, prec, 'n')
    return r, _half_ulp(r, prec)


# ---------------------------------------------------------------------------
# radius primitives: nonnegative, rounded away from zero

def _r_up(x):
    return mpf_pos(x, RAD_PREC, 'u')


def _r_add(a, b):
    if a == fzero:
        return b
    if b == fzero:
        return a
    return mpf_add(a, b, RAD_PREC, 'u')


def _r_add3(a, b, c):
    return _r_add(_r_add(a, b), c)


def _r_mul(a, b):
    if a == fzero or b == fzero:
        return fzero
    return mpf_mul(a, b, RAD_PREC, 'u')


def _r_div_floor(a, b):
    """Lower bound of a/b for nonnegative a, positive b."""
    if a == fzero:
        return fzero
    return mpf_div(a, b, RAD_PREC, 'f')


class RealBall:
    """Interval [mid - rad, mid + rad] with arbitrary-precision midpoint.

    Instances are immutable by convention; all arithmetic returns fresh
    balls and is safe for concurrent use.
    """

    __slots__ = ("mid", "rad")

    def __init__(self, mid=fzero, rad=fzero):
        self.mid = mid
        self.rad = rad

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, n):
        return cls(from_int(n), fzero)

    @classmethod
    def from_man_exp(cls, man, exp):
        return cls(from_man_exp(man, exp), fzero)

    @classmethod
    def from_fraction(cls, p, q, prec):
        """Ball containing the rational p/q."""
        m, e = _m_div(from_int(p), from_int(q), prec)
        return cls(m, e)

    @classmethod
    def from_float(cls, x):
        from mpmath.libmp import from_float as _ff
        return cls(_ff(x), fzero)

    @classmethod
    def from_endpoints(cls, lo, hi, prec=RAD_PREC + 23):
        """Ball covering [lo, hi] given as raw floats.

        The construction mid = up(lo + rad), rad = up((hi - lo)/2) keeps
        mid - rad >= lo exactly, so sign information at the lower endpoint
        (in particular an exact 0) survives; the upper end may widen by a
        rounding ulp."""
        if _is_special(lo) or _is_special(hi):
            return cls.indeterminate()
        if lo == hi:
            return cls(lo, fzero)
        r = mpf_shift(mpf_sub(hi, lo, RAD_PREC, 'u'), -1)
        m = mpf_add(lo, r, prec, 'c')
        return cls(m, r)

    @classmethod
    def indeterminate(cls):
        return cls(fzero, finf)

    # -- predicates and accessors ------------------------------------------

    def is_finite(self):
        return not (_is_special(self.mid) or _is_special(self.rad))

    def is_exact(self):
        return self.rad == fzero

    def is_exact_zero(self):
        return self.mid == fzero and self.rad == fzero

    def lower(self):
        """Directed lower bound of the interval (raw float)."""
        if not self.is_finite():
            return fninf
        if self.rad == fzero:
            return self.mid
        p = self.mid[3] + RAD_PREC + 8
        return mpf_sub(self.mid, self.rad, p, 'f')

    def upper(self):
        if not self.is_finite():
            return finf
        if self.rad == fzero:
            return self.mid
        p = self.mid[3] + RAD_PREC + 8
        return mpf_add(self.mid, self.rad, p, 'c')

    def is_nonnegative(self):
        return mpf_ge(self.lower(), fzero) if self.is_finite() else False

    def is_positive(self):
        return mpf_gt(self.lower(), fzero) if self.is_finite() else False

    def is_negative(self):
        return mpf_lt(self.upper(), fzero) if self.is_finite() else False

    def is_nonpositive(self):
        return mpf_le(self.upper(), fzero) if self.is_finite() else False

    def contains_zero(self):
        if not self.is_finite():
            return True
        return mpf_le(self.lower(), fzero) and mpf_ge(self.upper(), fzero)

    def contains(self, x):
        """Whether the raw float x certainly lies in the ball (up to radius
        rounding; an upper bound of |x - mid| is compared against rad)."""
        if not self.is_finite():
            return True
        if _is_special(x):
            return False
        d = mpf_abs(mpf_sub(x, self.mid, RAD_PREC, 'u'))
        return mpf_le(d, self.rad)

    def contains_ball(self, other):
        """Whether other is certainly a subset of self."""
        if not self.is_finite():
            return True
        if not other.is_finite():
            return False
        d = mpf_abs(mpf_sub(other.mid, self.mid, RAD_PREC, 'u'))
        return mpf_le(_r_add(d, other.rad), self.rad)

    def overlaps(self, other):
        if not (self.is_finite() and other.is_finite()):
            return True
        d = mpf_abs(mpf_sub(self.mid, other.mid, RAD_PREC, 'd'))
        return mpf_le(d, _r_add(self.rad, other.rad))

    def abs_upper(self):
        """Raw float >= sup |x| over the ball."""
        if not self.is_finite():
            return finf
        return mpf_add(mpf_abs(self.mid), self.rad, RAD_PREC, 'u')

    def abs_lower(self):
        """Raw float in [0, inf |x|] over the ball."""
        if not self.is_finite():
            return fzero
        d = mpf_sub(mpf_abs(self.mid), self.rad, RAD_PREC, 'f')
        return d if mpf_gt(d, fzero) else fzero

    # -- arithmetic ---------------------------------------------------------

    def neg(self):
        return RealBall(mpf_neg(self.mid), self.rad)

    def add(self, other, prec):
        if not (self.is_finite() and other.is_finite()):
            return RealBall.indeterminate()
        m, e = _m_add(self.mid, other.mid, prec)
        return RealBall(m, _r_add3(self.rad, other.rad, e))

    def sub(self, other, prec):
        if not (self.is_finite() and other.is_finite()):
            return RealBall.indeterminate()
        m, e = _m_sub(self.mid, other.mid, prec)
        return RealBall(m, _r_add3(self.rad, other.rad, e))

    def mul(self, other, prec):
        if not (self.is_finite() and other.is_finite()):
            return RealBall.indeterminate()
        m, e = _m_mul(self.mid, other.mid, prec)
        ra, rb = self.rad, other.rad
        if ra == fzero and rb == fzero:
            return RealBall(m, e)
        r = _r_add3(_r_mul(mpf_abs(self.mid), rb),
                    _r_mul(mpf_abs(other.mid), ra),
                    _r_add(_r_mul(ra, rb), e))
        return RealBall(m, r)

    def mul_int(self, n, prec):
        if n == 0:
            return RealBall()
        return self.mul(RealBall.from_int(n), prec)

    def div(self, other, prec):
        if not (self.is_finite() and other.is_finite()):
            return RealBall.indeterminate()
        blo = other.abs_lower()
        if blo == fzero:
            return RealBall.indeterminate()
        m, e = _m_div(self.mid, other.mid, prec)
        ra, rb = self.rad, other.rad
        if ra == fzero and rb == fzero:
            return RealBall(m, e)
        # |a/b - ma/mb| <= (ra|mb| + rb|ma|) / (|mb| * (|mb| - rb))
        amb = mpf_abs(other.mid)
        num = _r_add(_r_mul(ra, amb), _r_mul(rb, mpf_abs(self.mid)))
        den = mpf_mul(mpf_pos(amb, RAD_PREC, 'd'), blo, RAD_PREC, 'd')
        r = mpf_div(num, den, RAD_PREC, 'u') if num != fzero else fzero
        return RealBall(m, _r_add(r, e))

    def shift(self, n):
        """Exact scaling by 2^n."""
        if not self.is_finite():
            return RealBall.indeterminate()
        return RealBall(mpf_shift(self.mid, n), mpf_shift(self.rad, n))

    def abs(self):
        """Ball containing {|x| : x in self}."""
        if not self.is_finite():
            return RealBall.indeterminate()
        lo, hi = self.lower(), self.upper()
        if mpf_ge(lo, fzero):
            return self
        if mpf_le(hi, fzero):
            return self.neg()
        top = mpf_abs(lo) if mpf_ge(mpf_abs(lo), hi) else hi
        return RealBall.from_endpoints(fzero, top)

    def sqrt(self, prec):
        """Square root of a nonnegative ball; indeterminate if the ball
        contains negative numbers."""
        if not self.is_finite():
            return RealBall.indeterminate()
        lo, hi = self.lower(), self.upper()
        if mpf_lt(lo, fzero):
            if mpf_lt(hi, fzero):
                return RealBall.indeterminate()
            lo = fzero
        slo = mpf_sqrt(lo, prec, 'f') if lo != fzero else fzero
        shi = mpf_sqrt(hi, prec, 'c') if hi != fzero else fzero
        return RealBall.from_endpoints(slo, shi, prec)

    def union(self, other):
        """Convex hull of the two balls."""
        if not (self.is_finite() and other.is_finite()):
            return RealBall.indeterminate()
        lo_a, hi_a = self.lower(), self.upper()
        lo_b, hi_b = other.lower(), other.upper()
        lo = lo_a if mpf_le(lo_a, lo_b) else lo_b
        hi = hi_a if mpf_ge(hi_a, hi_b) else hi_b
        prec = max(self.mid[3], other.mid[3], RAD_PREC) + 8
        return RealBall.from_endpoints(lo, hi, prec)

    def add_error(self, r):
        """Widen the radius by the nonnegative raw float r."""
        if _is_special(r):
            return RealBall.indeterminate()
        return RealBall(self.mid, _r_add(self.rad, _r_up(mpf_abs(r))))

    def round_mid(self, prec):
        """Round the midpoint to prec bits, inflating the radius."""
        if not self.is_finite():
            return RealBall.indeterminate()
        m, e = _m_round(self.mid, prec)
        return RealBall(m, _r_add(self.rad, e))

    # -- misc ----------------------------------------------------------------

    def __repr__(self):
        return "RealBall(%s)" % format_real(self, 8)


_R_ZERO = RealBall()
_R_ONE = RealBall(fone, fzero)


class ComplexBall:
    """Rectangular complex ball: independent real and imaginary RealBalls."""

    __slots__ = ("re", "im")

    def __init__(self, re=None, im=None):
        self.re = re if re is not None else RealBall()
        self.im = im if im is not None else RealBall()

    @classmethod
    def from_int(cls, n):
        return cls(RealBall.from_int(n), RealBall())

    @classmethod
    def from_real(cls, re):
        return cls(re, RealBall())

    @classmethod
    def indeterminate(cls):
        return cls(RealBall.indeterminate(), RealBall.indeterminate())

    def is_finite(self):
        return self.re.is_finite() and self.im.is_finite()

    def is_exact(self):
        return self.re.is_exact() and self.im.is_exact()

    def is_real(self):
        return self.im.is_exact_zero()

    def contains_zero(self):
        return self.re.contains_zero() and self.im.contains_zero()

    def contains_ball(self, other):
        return self.re.contains_ball(other.re) and self.im.contains_ball(other.im)

    def overlaps(self, other):
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def neg(self):
        return ComplexBall(self.re.neg(), self.im.neg())

    def conj(self):
        return ComplexBall(self.re, self.im.neg())

    def add(self, other, prec):
        return ComplexBall(self.re.add(other.re, prec), self.im.add(other.im, prec))

    def sub(self, other, prec):
        return ComplexBall(self.re.sub(other.re, prec), self.im.sub(other.im, prec))

    def mul(self, other, prec):
        a, b, c, d = self.re, self.im, other.re, other.im
        re = a.mul(c, prec).sub(b.mul(d, prec), prec)
        im = a.mul(d, prec).add(b.mul(c, prec), prec)
        return ComplexBall(re, im)

    def mul_real(self, x, prec):
        return ComplexBall(self.re.mul(x, prec), self.im.mul(x, prec))

    def mul_int(self, n, prec):
        return ComplexBall(self.re.mul_int(n, prec), self.im.mul_int(n, prec))

    def div(self, other, prec):
        c, d = other.re, other.im
        den = c.mul(c, prec).add(d.mul(d, prec), prec)
        if den.abs_lower() == fzero:
            return ComplexBall.indeterminate()
        num = self.mul(other.conj(), prec)
        return ComplexBall(num.re.div(den, prec), num.im.div(den, prec))

    def div_real(self, x, prec):
        return ComplexBall(self.re.div(x, prec), self.im.div(x, prec))

    def shift(self, n):
        return ComplexBall(self.re.shift(n), self.im.shift(n))

    def sq(self, prec):
        # (a+bi)^2 = (a-b)(a+b) + 2abi
        a, b = self.re, self.im
        re = a.sub(b, prec).mul(a.add(b, prec), prec)
        im = a.mul(b, prec).shift(1)
        return ComplexBall(re, im)

    def abs_upper(self):
        """Raw float >= sup |z| over the rectangle."""
        if not self.is_finite():
            return finf
        x = self.re.abs_upper()
        y = self.im.abs_upper()
        if y == fzero:
            return x
        if x == fzero:
            return y
        s = mpf_add(mpf_mul(x, x, RAD_PREC, 'u'), mpf_mul(y, y, RAD_PREC, 'u'),
                    RAD_PREC, 'u')
        return mpf_sqrt(s, RAD_PREC, 'c')

    def abs_lower(self):
        """Raw float <= inf |z| over the rectangle."""
        if not self.is_finite():
            return fzero
        x = self.re.abs_lower()
        y = self.im.abs_lower()
        if y == fzero:
            return x
        if x == fzero:
            return y
        s = mpf_add(mpf_mul(x, x, RAD_PREC, 'd'), mpf_mul(y, y, RAD_PREC, 'd'),
                    RAD_PREC, 'd')
        return mpf_sqrt(s, RAD_PREC, 'f')

    def abs_ball(self, prec):
        """RealBall containing {|z| : z in self}."""
        if not self.is_finite():
            return RealBall.indeterminate()
        return RealBall.from_endpoints(self.abs_lower(), self.abs_upper(), prec)

    def rad_upper(self):
        """Raw float bounding sup |z - mid| over the rectangle."""
        if not self.is_finite():
            return finf
        x, y = self.re.rad, self.im.rad
        if x == fzero:
            return y
        if y == fzero:
            return x
        s = mpf_add(mpf_mul(x, x, RAD_PREC, 'u'), mpf_mul(y, y, RAD_PREC, 'u'),
                    RAD_PREC, 'u')
        return mpf_sqrt(s, RAD_PREC, 'c')

    def union(self, other):
        return ComplexBall(self.re.union(other.re), self.im.union(other.im))

    def add_error(self, r):
        return ComplexBall(self.re.add_error(r), self.im.add_error(r))

    def round_mid(self, prec):
        return ComplexBall(self.re.round_mid(prec), self.im.round_mid(prec))

    def mid_point(self):
        """Exact complex ball at the midpoint (radius zero)."""
        return ComplexBall(RealBall(self.re.mid), RealBall(self.im.mid))

    def __repr__(self):
        return "ComplexBall(%s)" % format_complex(self, 8)


# ---------------------------------------------------------------------------
# constants: pi, log 2, e
#
# Computed by integer series with explicit floor-error accounting, cached at
# the largest precision requested so far.

_const_lock = threading.Lock()
_const_cache = {}


def _atan_inv_scaled(q, w):
    """(S, err) with |atan(1/q) * 2^w - S| <= err, by the alternating series."""
    num = (1 << w) // q
    q2 = q * q
    s = 0
    i = 0
    terms = 0
    while num:
        t = num // (2 * i + 1)
        s = s + t if i % 2 == 0 else s - t
        num //= q2
        i += 1
        terms += 1
    return s, 3 * terms + 3


def _pi_scaled(w):
    """(S, err) with |pi * 2^w - S| <= err (Machin's formula)."""
    s5, e5 = _atan_inv_scaled(5, w)
    s239, e239 = _atan_inv_scaled(239, w)
    return 16 * s5 - 4 * s239, 16 * e5 + 4 * e239


def _log2_scaled(w):
    """(S, err) with |log(2) * 2^w - S| <= err, via 2*atanh(1/3)."""
    u = (1 << w) // 3
    s = 0
    i = 0
    terms = 0
    while u:
        s += u // (2 * i + 1)
        u //= 9
        i += 1
        terms += 1
    return 2 * s, 2 * (3 * terms + 3)


def _e_scaled(w):
    """(S, err) with |e * 2^w - S| <= err, via sum 1/n!."""
    t = 1 << w
    s = 0
    n = 0
    while t:
        s += t
        n += 1
        t //= n
    return s, 2 * n + 4


_CONST_FN = {"pi": _pi_scaled, "log2": _log2_scaled, "e": _e_scaled}


def _const_ball(name, prec):
    with _const_lock:
        cached = _const_cache.get(name)
        if cached is None or cached[0] < prec:
            w = max(2 * prec, 64) + 32
            s, err = _CONST_FN[name](w)
            ball = RealBall(from_man_exp(s, -w), _r_up(from_man_exp(err, -w)))
            _const_cache[name] = (w - 32, ball)
            cached = _const_cache[name]
    return cached[1].round_mid(prec + 8)


def pi_ball(prec):
    """Ball containing pi."""
    return _const_ball("pi", prec)


def log2_ball(prec):
    """Ball containing log(2)."""
    return _const_ball("log2", prec)


def e_ball(prec):
    """Ball containing e."""
    return _const_ball("e", prec)


# ---------------------------------------------------------------------------
# real elementary functions


def exp_ball(x, prec):
    """Ball containing exp(x) for a RealBall x.

    Argument reduction x = n log 2 + r, then exp(r/2^m) by Taylor with the
    tail bounded by 2^(1 - m N) and m squarings.  Works for midpoints of any
    exponent since the final 2^n scaling is exact.
    """
    if not x.is_finite():
        return RealBall.indeterminate()
    wp = prec + 16
    m = x.mid
    if m == fzero:
        core = _R_ONE
    else:
        mag = _mag(m)
        if mag > _MAG_LIMIT:
            # resource cutoff: pinning exp(x) needs ~mag bits of log 2
            if m[0]:
                return RealBall.from_endpoints(fzero, _two_pow(-_MAG_LIMIT))
            return RealBall.indeterminate()
        if mag > 1:
            # n = nearest integer to m / log 2
            l2 = log2_ball(mag + 24)
            n = int(to_int(mpf_div(m, l2.mid, mag + 24, 'n'), 'n'))
            wl = wp + max(n.bit_length(), 1) + 8
            r = RealBall(m).sub(log2_ball(wl).mul_int(n, wl), wl)
        else:
            n = 0
            r = RealBall(m)
        core = _exp_reduced(r, wp)
        if n:
            core = core.shift(n)
    if x.rad == fzero:
        return core.round_mid(prec + 8)
    # exp([m +/- r]) subset exp(m) * [1 +/- (e^r - 1)]
    grow = _expm1_upper(x.rad)
    if _is_special(grow):
        return RealBall.indeterminate()
    extra = _r_mul(core.abs_upper(), grow)
    return core.add_error(extra).round_mid(prec + 8)


def _exp_reduced(r, wp):
    """exp of a small ball r (|r| <= 3), all errors tracked."""
    aub = r.abs_upper()
    if aub == fzero:
        return _R_ONE
    if mpf_gt(aub, from_int(4)):
        return RealBall.indeterminate()
    # scale down by 2^m so the Taylor series needs ~wp/m terms
    mshift = max(4, _isqrt(wp))
    r2 = r.shift(-mshift)
    a2 = r2.abs_upper()
    amag = _mag(a2) if a2 != fzero else -wp
    nterms = max(2, (wp + 10) // max(1, -amag) + 1)
    s = _R_ONE
    for j in range(nterms, 0, -1):
        s = _R_ONE.add(r2.mul(s, wp).div(RealBall.from_int(j), wp), wp)
    # tail: sum_{n > nterms} |r2|^n / n! <= 2 * |r2|^(nterms+1)
    s = s.add_error(_two_pow(amag * (nterms + 1) + 1))
    for _ in range(mshift):
        s = s.mul(s, wp)
    return s


def _expm1_upper(r):
    """Raw float >= e^r - 1 for a nonnegative raw float r."""
    if r == fzero:
        return fzero
    if _is_special(r):
        return finf
    if mpf_le(r, _F_HALF):
        # e^r - 1 <= r + r^2 for r <= 1
        return _r_add(r, _r_mul(r, r))
    # crude upper bound 2^(2 ceil(r) + 1) >= e^r
    n = int(to_int(mpf_add(r, r, RAD_PREC, 'c'), 'c'))
    return _two_pow(n + 1)


def _isqrt(n):
    import math
    return math.isqrt(n)


def log_ball(x, prec):
    """Ball containing log(x) for a positive RealBall x.

    Indeterminate if x is not strictly positive.  Uses sqrt reduction and
    the atanh series with an explicit tail bound.
    """
    if not x.is_finite():
        return RealBall.indeterminate()
    lo = x.lower()
    if not mpf_gt(lo, fzero):
        return RealBall.indeterminate()
    wp = prec + 16
    m = x.mid
    res = _log_point(m, wp)
    if x.rad != fzero:
        # |log'| <= 1/lo on the interval
        res = res.add_error(mpf_div(x.rad, lo, RAD_PREC, 'u'))
    return res.round_mid(prec + 8)


def _log_point(m, wp):
    """log of an exact positive raw float, as a ball."""
    s = _mag(m)          # m = f * 2^s with f in [1/2, 1)
    f = RealBall(mpf_shift(m, -s))
    if f.mid == fone:
        f = None
    j = max(4, _isqrt(wp) // 2)
    if f is not None:
        g = f
        for _ in range(j):
            g = g.sqrt(wp)
        # atanh series: log g = 2 * sum u^(2i+1)/(2i+1), u = (g-1)/(g+1)
        u = g.sub(_R_ONE, wp).div(g.add(_R_ONE, wp), wp)
        u2 = u.mul(u, wp)
        uub = u.abs_upper()
        umag = _mag(uub) if uub != fzero else -wp
        nterms = max(1, (wp + 10) // max(1, -2 * umag) + 1)
        total = RealBall()
        power = u
        for i in range(nterms):
            if i:
                power = power.mul(u2, wp)
            total = total.add(power.div(RealBall.from_int(2 * i + 1), wp), wp)
        # tail <= |u|^(2 nterms + 1) / (1 - u^2) <= 2^(umag(2N+1) + 1)
        total = total.add_error(_two_pow(umag * (2 * nterms + 1) + 1))
        logf = total.shift(j + 1)
    else:
        logf = RealBall()
    if s:
        wl = wp + max(abs(s).bit_length(), 1) + 8
        return logf.add(log2_ball(wl).mul_int(s, wl), wl)
    return logf


def sqrt_ball(x, prec):
    return x.sqrt(prec)


def sin_cos_ball(x, prec):
    """Pair of balls containing (sin x, cos x) for a RealBall x."""
    if not x.is_finite():
        return _R_PM1(), _R_PM1()
    rad = x.rad
    if rad != fzero and mpf_ge(rad, _F_TWO):
        return _R_PM1(), _R_PM1()
    wp = prec + 16
    m = x.mid
    if m == fzero:
        s, c = RealBall(), _R_ONE
    elif _mag(m) > _MAG_LIMIT:
        return _R_PM1(), _R_PM1()
    else:
        mag = _mag(m)
        if mag <= -wp // 2 - 4:
            # |x| tiny: sin x = x + O(x^3), cos x = 1 + O(x^2)
            cube = _two_pow(3 * mag - 2)
            s = RealBall(m).add_error(cube)
            c = _R_ONE.add_error(_two_pow(2 * mag - 1))
        else:
            s, c = _sin_cos_point(m, wp, mag)
    if rad != fzero:
        # |sin'|, |cos'| <= 1
        s = s.add_error(rad)
        c = c.add_error(rad)
    return s.round_mid(prec + 8), c.round_mid(prec + 8)


def _R_PM1():
    return RealBall(fzero, fone)


def _clamp_pm1(b):
    if not b.is_finite() or mpf_gt(b.abs_upper(), _F_TWO):
        return _R_PM1()
    return b


def _sin_cos_point(m, wp, mag):
    """(sin, cos) of an exact raw float via pi/2 reduction and doubling."""
    # n = nearest integer to m / (pi/2)
    pw = wp + max(mag, 0) + 16
    pib = pi_ball(pw)
    half_pi_mid = mpf_shift(pib.mid, -1)
    n = int(to_int(mpf_div(m, half_pi_mid, max(mag, 4) + 24, 'n'), 'n'))
    r = RealBall(m).sub(pib.shift(-1).mul_int(n, pw), pw)
    # r is within ~0.8 of zero (plus at most a couple of units of slop)
    mshift = max(3, _isqrt(wp) // 2)
    r2 = r.shift(-mshift)
    a2 = r2.abs_upper()
    amag = _mag(a2) if a2 != fzero else -wp
    nterms = max(1, (wp + 10) // max(1, -2 * amag) + 1)
    u = r2.mul(r2, wp)
    # sin(r2) = r2 * P(u), cos(r2) = Q(u), alternating series in u = r2^2
    ps = _R_ONE
    pc = _R_ONE
    for i in range(nterms, 0, -1):
        ps = _R_ONE.sub(u.mul(ps, wp).div(RealBall.from_int((2 * i) * (2 * i + 1)), wp), wp)
        pc = _R_ONE.sub(u.mul(pc, wp).div(RealBall.from_int((2 * i - 1) * (2 * i)), wp), wp)
    s = r2.mul(ps, wp).add_error(_two_pow(amag * (2 * nterms + 1) + 1))
    c = pc.add_error(_two_pow(amag * (2 * nterms) + 1))
    for _ in range(mshift):
        s, c = s.mul(c, wp).shift(1), c.mul(c, wp).sub(s.mul(s, wp), wp)
    k = n % 4
    if k == 1:
        s, c = c, s.neg()
    elif k == 2:
        s, c = s.neg(), c.neg()
    elif k == 3:
        s, c = c.neg(), s
    return _clamp_pm1(s), _clamp_pm1(c)


def sin_ball(x, prec):
    return sin_cos_ball(x, prec)[0]


def cos_ball(x, prec):
    return sin_cos_ball(x, prec)[1]


def sinc_ball(x, prec):
    """Ball containing sinc(x) = sin(x)/x, with sinc(0) = 1.

    When the ball contains zero the removable singularity is handled by a
    Taylor polynomial in the full input ball.
    """
    if not x.is_finite():
        return _R_PM1()
    if not x.contains_zero():
        return sin_ball(x, prec).div(x, prec)
    aub = x.abs_upper()
    if mpf_ge(aub, fone):
        return _R_PM1()       # |sinc| <= 1 everywhere
    wp = prec + 10
    # sinc y = sum (-1)^i y^(2i) / (2i+1)!: evaluate on the ball itself
    amag = _mag(aub) if aub != fzero else -wp
    nterms = max(1, (wp + 6) // max(1, -2 * amag) + 1)
    u = x.mul(x, wp)
    s = _R_ONE
    for i in range(nterms, 0, -1):
        s = _R_ONE.sub(u.mul(s, wp).div(RealBall.from_int((2 * i) * (2 * i + 1)), wp), wp)
    return s.add_error(_two_pow(amag * 2 * (nterms + 1) + 1))


def atan_ball(x, prec):
    """Ball containing atan(x)."""
    if not x.is_finite():
        # atan maps the line into (-pi/2, pi/2)
        return RealBall(fzero, pi_ball(prec).shift(-1).abs_upper())
    wp = prec + 16
    res = _atan_point(x.mid, wp)
    if x.rad != fzero:
        res = res.add_error(x.rad)      # |atan'| <= 1
    return res.round_mid(prec + 8)


def _atan_point(m, wp):
    if m == fzero:
        return RealBall()
    neg = m[0] == 1
    a = mpf_abs(m)
    if _mag(a) >= 2:
        # atan(x) = pi/2 - atan(1/x) for x >= 2 (1/x < 1, no ping-pong)
        recip = RealBall(fone).div(RealBall(a), wp + 8)
        inner = _atan_point(recip.mid, wp).add_error(recip.rad)
        res = pi_ball(wp).shift(-1).sub(inner, wp)
    else:
        x = RealBall(a)
        halvings = max(3, _isqrt(wp) // 2)
        for _ in range(halvings):
            # atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
            x = x.div(_R_ONE.add(_R_ONE.add(x.mul(x, wp), wp).sqrt(wp), wp), wp)
        uub = x.abs_upper()
        umag = _mag(uub) if uub != fzero else -wp
        nterms = max(1, (wp + 10) // max(1, -2 * umag) + 1)
        u2 = x.mul(x, wp)
        s = RealBall()
        power = x
        for i in range(nterms):
            if i:
                power = power.mul(u2, wp)
            term = power.div(RealBall.from_int(2 * i + 1), wp)
            s = s.sub(term, wp) if i % 2 else s.add(term, wp)
        s = s.add_error(_two_pow(umag * (2 * nterms + 1) + 1))
        res = s.shift(halvings)
    return res.neg() if neg else res


def atan2_ball(y, x, prec):
    """Ball containing arg(x + yi) with the convention Im log in (-pi, pi].

    If the rectangle straddles the cut on the negative real axis, the wide
    enclosure [0 +/- pi] is returned, which contains the images of both
    sides.
    """
    if not (x.is_finite() and y.is_finite()):
        return _pm_pi(prec)
    if x.is_positive():
        return atan_ball(y.div(x, prec), prec)
    if y.is_positive():
        return pi_ball(prec).shift(-1).sub(atan_ball(x.div(y, prec), prec), prec)
    if y.is_negative():
        return pi_ball(prec).shift(-1).neg().sub(atan_ball(x.div(y, prec), prec), prec)
    if y.is_exact_zero() and x.is_negative():
        return pi_ball(prec)
    # rectangle touches the cut (-inf, 0]: cover both sides
    return _pm_pi(prec)


def _pm_pi(prec):
    return RealBall(fzero, pi_ball(prec).abs_upper())


# ---------------------------------------------------------------------------
# complex elementary functions


def cexp(z, prec):
    """Ball containing exp(z)."""
    if not z.is_finite():
        return ComplexBall.indeterminate()
    ex = exp_ball(z.re, prec)
    s, c = sin_cos_ball(z.im, prec)
    return ComplexBall(ex.mul(c, prec), ex.mul(s, prec))


def clog(z, prec):
    """Ball containing log(z), principal branch, Im in (-pi, pi].

    When the rectangle straddles the cut (-inf, 0] the imaginary part
    contains the images of both sides.  If |z| can reach 0 the real part is
    indeterminate.
    """
    if not z.is_finite():
        return ComplexBall.indeterminate()
    wp = prec + 8
    nrm = z.re.mul(z.re, wp).add(z.im.mul(z.im, wp), wp)
    re = log_ball(nrm, wp).shift(-1)
    im = atan2_ball(z.im, z.re, prec)
    return ComplexBall(re.round_mid(prec + 8), im)


def csqrt(z, prec):
    """Ball containing the principal sqrt(z).

    On rectangles straddling the branch cut (or containing 0) a centered
    disc enclosure of radius sqrt(sup |z|) is returned, covering both
    square roots.
    """
    if not z.is_finite():
        return ComplexBall.indeterminate()
    wp = prec + 8
    if z.im.is_exact_zero():
        x = z.re
        if x.is_nonnegative():
            return ComplexBall.from_real(x.sqrt(prec))
        if x.is_nonpositive():
            return ComplexBall(RealBall(), x.neg().sqrt(prec))
        return _csqrt_disc(z, prec)
    r = z.abs_ball(wp)
    x = z.re
    if x.is_nonnegative() or (not x.is_nonpositive() and x.mid[0] == 0):
        half = r.add(x, wp).shift(-1)
        if not half.is_positive():
            return _csqrt_disc(z, prec)
        a = half.sqrt(wp)
        b = z.im.div(a.shift(1), wp)
        return ComplexBall(a.round_mid(prec + 8), b.round_mid(prec + 8))
    if z.im.is_positive() or z.im.is_negative():
        half = r.sub(x, wp).shift(-1)
        if not half.is_positive():
            return _csqrt_disc(z, prec)
        b = half.sqrt(wp)
        if z.im.is_negative():
            b = b.neg()
        a = z.im.div(b.shift(1), wp)
        return ComplexBall(a.round_mid(prec + 8), b.round_mid(prec + 8))
    return _csqrt_disc(z, prec)


def _csqrt_disc(z, prec):
    t = mpf_sqrt(z.abs_upper(), RAD_PREC, 'c')
    return ComplexBall(RealBall(fzero, t), RealBall(fzero, t))


def csin_cos(z, prec):
    """(sin z, cos z) via the hyperbolic decomposition."""
    if not z.is_finite():
        return ComplexBall.indeterminate(), ComplexBall.indeterminate()
    wp = prec + 8
    s, c = sin_cos_ball(z.re, wp)
    ep = exp_ball(z.im, wp)
    em = _R_ONE.div(ep, wp)
    ch = ep.add(em, wp).shift(-1)
    sh = ep.sub(em, wp).shift(-1)
    sin_z = ComplexBall(s.mul(ch, prec), c.mul(sh, prec))
    cos_z = ComplexBall(c.mul(ch, prec), s.mul(sh, prec).neg())
    return sin_z, cos_z


def csin(z, prec):
    return csin_cos(z, prec)[0]


def ccos(z, prec):
    return csin_cos(z, prec)[1]


def csinc(z, prec):
    """sinc on complex balls; Taylor form when the ball contains zero."""
    if not z.is_finite():
        return ComplexBall.indeterminate()
    if not z.contains_zero():
        return csin(z, prec).div(z, prec)
    aub = z.abs_upper()
    if mpf_ge(aub, fone):
        return ComplexBall.indeterminate()
    wp = prec + 10
    amag = _mag(aub) if aub != fzero else -wp
    nterms = max(1, (wp + 6) // max(1, -2 * amag) + 1)
    u = z.mul(z, wp)
    one = ComplexBall.from_int(1)
    s = one
    for i in range(nterms, 0, -1):
        s = one.sub(u.mul(s, wp).div_real(RealBall.from_int((2 * i) * (2 * i + 1)), wp), wp)
    return s.add_error(_two_pow(amag * 2 * (nterms + 1) + 1))


def ball_pow_int(b, n, prec):
    """b^n by binary powering; works for RealBall and ComplexBall.

    Each squaring doubles the relative radius, so the working precision
    carries bit_length(n) guard bits.
    """
    one = ComplexBall.from_int(1) if isinstance(b, ComplexBall) else _R_ONE
    if n == 0:
        return one
    if n < 0:
        return one.div(ball_pow_int(b, -n, prec), prec)
    wp = prec + n.bit_length() + 8
    acc = None
    while n:
        if n & 1:
            acc = b if acc is None else acc.mul(b, wp)
        n >>= 1
        if n:
            b = b.mul(b, wp)
    return acc


# ---------------------------------------------------------------------------
# decimal formatting and parsing


_LOG10_2_NUM, _LOG10_2_DEN = 30103, 100000   # log10(2) ~ 0.30103


def _dec_mag(x):
    """Decimal exponent D with 10^D <= |x| < 10^(D+1), for x nonzero."""
    d = (_mag(x) - 1) * _LOG10_2_NUM // _LOG10_2_DEN
    ax = mpf_abs(x)
    while True:
        p10 = _pow10_ball(d + 1, 64)
        if mpf_ge(ax, p10.upper()):
            d += 1
            continue
        p10 = _pow10_ball(d, 64)
        if mpf_lt(ax, p10.lower()):
            d -= 1
            continue
        return d


def _pow10_ball(n, prec):
    """Ball containing 10^n for any integer n."""
    if 0 <= n <= 1200:
        return RealBall.from_int(10 ** n)
    if -1200 <= n < 0:
        return RealBall.from_fraction(1, 10 ** (-n), prec + 8)
    b = ball_pow_int(RealBall.from_int(10), abs(n), prec + 16)
    if n < 0:
        b = _R_ONE.div(b, prec + 16)
    return b


def _rad_decimal_str(r):
    """Upper-bound decimal string for a nonnegative raw float radius."""
    if r == fzero:
        return "0"
    if _is_special(r):
        return "inf"
    d = _dec_mag(r)
    scale = _pow10_ball(2 - d, 64)
    j = int(to_int(mpf_mul(RealBall(r).mul(scale, 64).upper(), fone, 64, 'c'), 'c'))
    while j >= 1000:
        j = (j + 9) // 10
        d += 1
    return "%d.%02de%+d" % (j // 100, j % 100, d)


def format_real(b, digits):
    """Decimal interval string "[m +/- r]" whose denoted set contains b.

    The midpoint is shown to at most `digits` significant digits (fewer when
    the radius does not justify them) and the printed radius is an upper
    bound including the decimal truncation of the midpoint.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if not b.is_finite():
        return "[+/- inf]"
    if b.is_exact_zero():
        return "0"
    if b.mid == fzero:
        return "[+/- %s]" % _rad_decimal_str(b.rad)
    if b.rad == fzero:
        n = digits
    else:
        accbits = _mag(b.mid) - _mag(b.rad)
        if accbits < 2:
            return "[+/- %s]" % _rad_decimal_str(b.abs_upper())
        n = max(1, min(digits, accbits * _LOG10_2_NUM // _LOG10_2_DEN))
    d = _dec_mag(b.mid)
    wp = int(n * 3.33) + 48 + b.mid[3]
    scaled = RealBall(b.mid).mul(_pow10_ball(n - 1 - d, wp), wp)
    i = int(to_int(scaled.mid, 'n'))
    if abs(i) >= 10 ** n:
        d += 1
        scaled = RealBall(b.mid).mul(_pow10_ball(n - 1 - d, wp), wp)
        i = int(to_int(scaled.mid, 'n'))
    # decimal truncation error: |mid - i 10^(d-n+1)|
    diff = scaled.sub(RealBall.from_int(i), wp)
    terr = RealBall(diff.abs_upper()).mul(_pow10_ball(d - n + 1, 64), 64).abs_upper()
    total_rad = _r_add(b.rad, terr)
    ms = _mid_digits_str(i, n, d)
    if total_rad == fzero:
        return ms
    return "[%s +/- %s]" % (ms, _rad_decimal_str(total_rad))


def _mid_digits_str(i, n, d):
    sign = "-" if i < 0 else ""
    digs = str(abs(i)).rjust(n, "0")
    if 0 <= d <= n + 5:
        if d >= n - 1:
            return sign + digs + "0" * (d - n + 1)
        return sign + digs[:d + 1] + "." + digs[d + 1:]
    if -5 <= d < 0:
        return sign + "0." + "0" * (-d - 1) + digs
    mant = digs[0] + ("." + digs[1:] if n > 1 else "")
    return "%s%se%+d" % (sign, mant, d)


def format_complex(b, digits):
    """Format a ComplexBall; pure-real balls print as a real interval."""
    if b.im.is_exact_zero():
        return format_real(b.re, digits)
    return "%s + %si" % (format_real(b.re, digits), format_real(b.im, digits))


def real_ball_from_str(s, prec):
    """Parse a decimal, "[a, b]", "[m +/- r]" or "[+/- r]" string."""
    s = s.strip()
    if s.startswith("["):
        if not s.endswith("]"):
            raise ValueError("unbalanced interval brackets: %r" % s)
        body = s[1:-1].strip()
        if body.startswith("+/-"):
            r = _decimal_to_ball(body[3:].strip(), prec)
            return RealBall(fzero, r.abs_upper())
        if "+/-" in body:
            mid_s, rad_s = body.split("+/-")
            m = _decimal_to_ball(mid_s.strip(), prec)
            r = _decimal_to_ball(rad_s.strip(), prec)
            return m.add_error(r.abs_upper())
        if "," in body:
            lo_s, hi_s = body.split(",")
            lo = _decimal_to_ball(lo_s.strip(), prec)
            hi = _decimal_to_ball(hi_s.strip(), prec)
            return lo.union(hi)
        raise ValueError("cannot parse interval: %r" % s)
    return _decimal_to_ball(s, prec)


def _decimal_to_ball(s, prec):
    """Exact-as-possible ball for a decimal/scientific literal."""
    s = s.strip()
    if s in ("inf", "+inf"):
        return RealBall(finf, fzero)
    if s == "-inf":
        return RealBall(fninf, fzero)
    neg = s.startswith("-")
    if s and s[0] in "+-":
        s = s[1:]
    if "e" in s or "E" in s:
        mant_s, exp_s = s.replace("E", "e").split("e")
        dec_exp = int(exp_s)
    else:
        mant_s, dec_exp = s, 0
    if "." in mant_s:
        whole, frac = mant_s.split(".")
        dec_exp -= len(frac)
        mant_s = whole + frac
    if mant_s == "":
        raise ValueError("empty numeric literal")
    m = int(mant_s)
    if neg:
        m = -m
    ball = RealBall.from_int(m)
    if dec_exp:
        ball = ball.mul(_pow10_ball(dec_exp, prec + 8), prec + 8)
    return ball.round_mid(prec)


def complex_ball_from_str(s, prec):
    """Parse "X" or "X,Y" with X, Y decimal or interval strings."""
    s = s.strip()
    depth = 0
    for idx, ch in enumerate(s):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        elif ch == "," and depth == 0:
            re = real_ball_from_str(s[:idx], prec)
            im = real_ball_from_str(s[idx + 1:], prec)
            return ComplexBall(re, im)
    return ComplexBall.from_real(real_ball_from_str(s, prec))


__all__ = [
    "RAD_PREC",
    "RealBall",
    "ComplexBall",
    "pi_ball",
    "log2_ball",
    "e_ball",
    "exp_ball",
    "log_ball",
    "sqrt_ball",
    "sin_ball",
    "cos_ball",
    "sin_cos_ball",
    "sinc_ball",
    "atan_ball",
    "atan2_ball",
    "cexp",
    "clog",
    "csqrt",
    "csin",
    "ccos",
    "csinc",
    "ball_pow_int",
    "format_real",
    "format_complex",
    "real_ball_from_str",
    "complex_ball_from_str",
]
