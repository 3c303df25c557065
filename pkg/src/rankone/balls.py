"""Certified midpoint-radius interval arithmetic on arbitrary-precision floats.

A RealBall is a pair (mid, rad) of raw mpmath floats and represents the set
[mid - rad, mid + rad].  Every operation returns a ball containing the exact
image of its operand sets: midpoints are rounded to the requested working
precision and the rounding error is folded into the radius.  Radii are kept
at a small fixed precision and always rounded upward, so soundness never
depends on the working precision.  ComplexBall is the rectangular pair
(re, im); its "disks" are really boxes, which is all the root isolation
code needs.

Balls carry no precision state.  An expression that produces a ball can be
re-evaluated at a higher precision, which is how the sign-decision helper
interval_sign escalates: it accepts a callable prec -> RealBall and doubles
the precision until the sign is certified or the cap is reached.

Raw mpmath floats (sign, mantissa, exponent, bitcount) have unbounded
exponents, so there is no underflow to absorb rounding errors silently:
a nonzero exact result never rounds to zero, which makes |result|*2^-prec
a valid bound for the half-ulp error of any correctly rounded operation.
Transcendental functions get an extra guard margin because mpmath only
promises faithful rounding for them.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Callable, Union

from mpmath import libmp
from mpmath.libmp import (
    fone,
    fzero,
    from_int,
    from_rational,
    mpf_abs,
    mpf_add,
    mpf_cmp,
    mpf_cos,
    mpf_div,
    mpf_exp,
    mpf_log,
    mpf_mul,
    mpf_neg,
    mpf_shift,
    mpf_sin,
    mpf_sqrt,
    mpf_sub,
    to_float,
)

# Radii only need a few correct bits; what matters is the upward rounding.
_RPREC = 30
_UP = "c"  # radii are nonnegative, so ceiling == away from zero
_DOWN = "f"

DEFAULT_PRECISION_ENV = "RANKONE_PRECISION_BITS"
MAX_PRECISION_ENV = "RANKONE_MAX_PRECISION_BITS"


def default_precision() -> int:
    return int(os.environ.get(DEFAULT_PRECISION_ENV, "64"))


def max_precision() -> int:
    return int(os.environ.get(MAX_PRECISION_ENV, "4096"))


def _half_ulp(mid, prec: int):
    # Valid bound for the rounding error of a nearest-rounded result `mid`;
    # exactly zero results have error zero, and shifts are exact.
    return mpf_shift(mpf_abs(mid), -prec)


def _rad_add(*terms):
    total = fzero
    for t in terms:
        total = mpf_add(total, t, _RPREC, _UP)
    return total


def _rad_mul(a, b):
    return mpf_mul(a, b, _RPREC, _UP)


class RealBall:
    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=fzero):
        self.mid = mid
        self.rad = rad

    # --- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "RealBall":
        return RealBall(fzero)

    @staticmethod
    def one() -> "RealBall":
        return RealBall(fone)

    @staticmethod
    def from_int(n: int) -> "RealBall":
        return RealBall(from_int(n))  # exact at any size

    @staticmethod
    def from_fraction(x: Union[Fraction, int], prec: int) -> "RealBall":
        if isinstance(x, int):
            return RealBall.from_int(x)
        p, q = x.numerator, x.denominator
        if q == 1:
            return RealBall.from_int(p)
        lo = from_rational(p, q, prec, "f")
        hi = from_rational(p, q, prec, "c")
        if lo == hi:
            return RealBall(lo)
        return RealBall._from_endpoints(lo, hi, prec)

    @staticmethod
    def from_float(x: float) -> "RealBall":
        return RealBall(libmp.from_float(x))  # doubles embed exactly

    @staticmethod
    def _from_endpoints(lo, hi, prec: int) -> "RealBall":
        mid = mpf_shift(mpf_add(lo, hi, prec, "n"), -1)
        half = mpf_shift(mpf_sub(hi, lo, _RPREC, _UP), -1)
        return RealBall(mid, _rad_add(half, _half_ulp(mid, prec)))

    # --- arithmetic ---------------------------------------------------

    def add(self, other: "RealBall", prec: int) -> "RealBall":
        mid = mpf_add(self.mid, other.mid, prec, "n")
        return RealBall(mid, _rad_add(self.rad, other.rad, _half_ulp(mid, prec)))

    def sub(self, other: "RealBall", prec: int) -> "RealBall":
        mid = mpf_sub(self.mid, other.mid, prec, "n")
        return RealBall(mid, _rad_add(self.rad, other.rad, _half_ulp(mid, prec)))

    def neg(self) -> "RealBall":
        return RealBall(mpf_neg(self.mid), self.rad)

    def abs(self) -> "RealBall":
        return RealBall(mpf_abs(self.mid), self.rad)

    def mul(self, other: "RealBall", prec: int) -> "RealBall":
        mid = mpf_mul(self.mid, other.mid, prec, "n")
        rad = _rad_add(
            _rad_mul(mpf_abs(self.mid), other.rad),
            _rad_mul(mpf_abs(other.mid), self.rad),
            _rad_mul(self.rad, other.rad),
            _half_ulp(mid, prec),
        )
        return RealBall(mid, rad)

    def mul_int(self, n: int, prec: int) -> "RealBall":
        return self.mul(RealBall.from_int(n), prec)

    def square(self, prec: int) -> "RealBall":
        """Enclosure of {x^2}; never dips below zero, unlike self.mul(self)."""
        lo, hi = self._bounds()
        if mpf_cmp(lo, fzero) >= 0:
            new_lo = mpf_mul(lo, lo, prec, _DOWN)
            new_hi = mpf_mul(hi, hi, prec, _UP)
        elif mpf_cmp(hi, fzero) <= 0:
            new_lo = mpf_mul(hi, hi, prec, _DOWN)
            new_hi = mpf_mul(lo, lo, prec, _UP)
        else:
            new_lo = fzero
            a = mpf_mul(lo, lo, prec, _UP)
            b = mpf_mul(hi, hi, prec, _UP)
            new_hi = a if mpf_cmp(a, b) >= 0 else b
        return RealBall._from_endpoints(new_lo, new_hi, prec)

    def recip(self, prec: int) -> "RealBall":
        """1/self; requires a ball that excludes zero."""
        if self.contains_zero():
            raise ZeroDivisionError("interval contains zero")
        lo, hi = self._bounds()
        # 1/x is monotone decreasing on an interval of constant sign
        new_lo = mpf_div(fone, hi, prec, "f")
        new_hi = mpf_div(fone, lo, prec, "c")
        return RealBall._from_endpoints(new_lo, new_hi, prec)

    def div(self, other: "RealBall", prec: int) -> "RealBall":
        return self.mul(other.recip(prec + 8), prec)

    def pow_int(self, n: int, prec: int) -> "RealBall":
        if n == 0:
            return RealBall.one()
        if n < 0:
            return self.pow_int(-n, prec).recip(prec)
        result = None
        base = self
        k = n
        while k:
            if k & 1:
                result = base if result is None else result.mul(base, prec)
            k >>= 1
            if k:
                base = base.mul(base, prec)
        return result

    # --- transcendental -----------------------------------------------

    def _bounds(self):
        # exact endpoints: mpf add/sub at prec=0 do not round
        lo = mpf_sub(self.mid, self.rad, 0, _DOWN)
        hi = mpf_add(self.mid, self.rad, 0, _UP)
        return lo, hi

    def _monotone(self, fn, prec: int, increasing: bool = True) -> "RealBall":
        lo, hi = self._bounds()
        wprec = prec + 16
        if increasing:
            new_lo = fn(lo, wprec, _DOWN)
            new_hi = fn(hi, wprec, _UP)
        else:
            new_lo = fn(hi, wprec, _DOWN)
            new_hi = fn(lo, wprec, _UP)
        # margin for faithful (not correct) rounding of transcendentals
        scale = mpf_abs(new_hi) if mpf_cmp(mpf_abs(new_hi), mpf_abs(new_lo)) >= 0 else mpf_abs(new_lo)
        margin = mpf_shift(scale, -(prec + 8))
        new_lo = mpf_sub(new_lo, margin, wprec, _DOWN)
        new_hi = mpf_add(new_hi, margin, wprec, _UP)
        return RealBall._from_endpoints(new_lo, new_hi, prec)

    def exp(self, prec: int) -> "RealBall":
        return self._monotone(mpf_exp, prec)

    def log(self, prec: int) -> "RealBall":
        lo, _ = self._bounds()
        if mpf_cmp(lo, fzero) <= 0:
            raise ValueError("log of an interval touching (-inf, 0]")
        return self._monotone(mpf_log, prec)

    def sqrt(self, prec: int) -> "RealBall":
        lo, _ = self._bounds()
        if mpf_cmp(lo, fzero) < 0:
            raise ValueError("sqrt of an interval with negative points")
        return self._monotone(mpf_sqrt, prec)

    def cos(self, prec: int) -> "RealBall":
        mid = mpf_cos(self.mid, prec, "n")
        # |cos'| <= 1, plus rounding slack for the faithful evaluation
        return RealBall(mid, _rad_add(self.rad, _half_ulp(mid, prec - 4)))

    def sin(self, prec: int) -> "RealBall":
        mid = mpf_sin(self.mid, prec, "n")
        rad = _rad_add(self.rad, _half_ulp(mid, prec - 4))
        return RealBall(mid, rad)

    # --- predicates and export -----------------------------------------

    def contains_zero(self) -> bool:
        return mpf_cmp(mpf_abs(self.mid), self.rad) <= 0

    def is_positive(self) -> bool:
        lo, _ = self._bounds()
        return mpf_cmp(lo, fzero) > 0

    def is_negative(self) -> bool:
        _, hi = self._bounds()
        return mpf_cmp(hi, fzero) < 0

    def contains_fraction(self, x: Union[Fraction, int]) -> bool:
        if isinstance(x, int):
            x = Fraction(x)
        lo, hi = self._bounds()
        # compare exactly through rationals: raw mpfs are dyadic
        lo_r = _to_fraction(lo)
        hi_r = _to_fraction(hi)
        return lo_r <= x <= hi_r

    def overlaps(self, other: "RealBall") -> bool:
        lo_a, hi_a = self._bounds()
        lo_b, hi_b = other._bounds()
        return not (mpf_cmp(hi_a, lo_b) < 0 or mpf_cmp(hi_b, lo_a) < 0)

    def hull(self, other: "RealBall", prec: int) -> "RealBall":
        lo_a, hi_a = self._bounds()
        lo_b, hi_b = other._bounds()
        lo = lo_a if mpf_cmp(lo_a, lo_b) <= 0 else lo_b
        hi = hi_a if mpf_cmp(hi_a, hi_b) >= 0 else hi_b
        return RealBall._from_endpoints(lo, hi, prec)

    def max_with(self, other: "RealBall", prec: int) -> "RealBall":
        lo_a, hi_a = self._bounds()
        lo_b, hi_b = other._bounds()
        if mpf_cmp(lo_a, hi_b) > 0:
            return self
        if mpf_cmp(lo_b, hi_a) > 0:
            return other
        lo = lo_a if mpf_cmp(lo_a, lo_b) >= 0 else lo_b
        hi = hi_a if mpf_cmp(hi_a, hi_b) >= 0 else hi_b
        return RealBall._from_endpoints(lo, hi, prec)

    def mid_float(self) -> float:
        return to_float(self.mid)

    def rad_float(self) -> float:
        return to_float(self.rad)

    def float_bounds(self) -> tuple[float, float]:
        lo, hi = self._bounds()
        return to_float(lo, rnd=_DOWN), to_float(hi, rnd=_UP)

    def relative_width(self) -> float:
        if self.contains_zero():
            return float("inf") if mpf_cmp(self.rad, fzero) != 0 else 0.0
        num = to_float(mpf_shift(self.rad, 1))
        den = abs(self.mid_float())
        return num / den

    def __repr__(self) -> str:
        return f"RealBall({self.mid_float()!r} +/- {self.rad_float():.3e})"


def _to_fraction(x) -> Fraction:
    sign, man, exp, _ = x
    if man == 0 and exp == 0:
        return Fraction(0)
    m = int(man)
    if sign:
        m = -m
    if exp >= 0:
        return Fraction(m << exp)
    return Fraction(m, 1 << (-exp))


def ball_to_fraction_bounds(ball: RealBall) -> tuple[Fraction, Fraction]:
    lo, hi = ball._bounds()
    return _to_fraction(lo), _to_fraction(hi)


class ComplexBall:
    __slots__ = ("re", "im")

    def __init__(self, re: RealBall, im: RealBall):
        self.re = re
        self.im = im

    @staticmethod
    def from_real(re: RealBall) -> "ComplexBall":
        return ComplexBall(re, RealBall.zero())

    @staticmethod
    def from_fractions(re, im, prec: int) -> "ComplexBall":
        return ComplexBall(RealBall.from_fraction(re, prec), RealBall.from_fraction(im, prec))

    @staticmethod
    def from_complex(z: complex) -> "ComplexBall":
        return ComplexBall(RealBall.from_float(z.real), RealBall.from_float(z.imag))

    def add(self, other: "ComplexBall", prec: int) -> "ComplexBall":
        return ComplexBall(self.re.add(other.re, prec), self.im.add(other.im, prec))

    def sub(self, other: "ComplexBall", prec: int) -> "ComplexBall":
        return ComplexBall(self.re.sub(other.re, prec), self.im.sub(other.im, prec))

    def neg(self) -> "ComplexBall":
        return ComplexBall(self.re.neg(), self.im.neg())

    def conj(self) -> "ComplexBall":
        return ComplexBall(self.re, self.im.neg())

    def mul(self, other: "ComplexBall", prec: int) -> "ComplexBall":
        a, b, c, d = self.re, self.im, other.re, other.im
        re = a.mul(c, prec).sub(b.mul(d, prec), prec)
        im = a.mul(d, prec).add(b.mul(c, prec), prec)
        return ComplexBall(re, im)

    def mul_real(self, r: RealBall, prec: int) -> "ComplexBall":
        return ComplexBall(self.re.mul(r, prec), self.im.mul(r, prec))

    def abs2(self, prec: int) -> RealBall:
        return self.re.square(prec).add(self.im.square(prec), prec)

    def abs(self, prec: int) -> RealBall:
        # |z|^2 >= 0 always, but abs2's outward rounding can push the lower
        # endpoint fractionally below zero.  Clamp to [0, hi] exactly: dyadic
        # halving is lossless, so mid = rad = hi/2 pins the endpoint at 0.
        d = self.abs2(prec)
        lo, hi = d._bounds()
        if mpf_cmp(lo, fzero) < 0:
            if mpf_cmp(hi, fzero) < 0:
                hi = fzero
            half = mpf_shift(hi, -1)
            d = RealBall(half, half)
        return d.sqrt(prec)

    def recip(self, prec: int) -> "ComplexBall":
        d = self.abs2(prec + 8)
        inv = d.recip(prec + 8)
        return ComplexBall(self.re.mul(inv, prec), self.im.neg().mul(inv, prec))

    def div(self, other: "ComplexBall", prec: int) -> "ComplexBall":
        return self.mul(other.recip(prec + 8), prec)

    def pow_int(self, n: int, prec: int) -> "ComplexBall":
        if n == 0:
            return ComplexBall(RealBall.one(), RealBall.zero())
        if n < 0:
            return self.pow_int(-n, prec).recip(prec)
        result = None
        base = self
        k = n
        while k:
            if k & 1:
                result = base if result is None else result.mul(base, prec)
            k >>= 1
            if k:
                base = base.mul(base, prec)
        return result

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def box_disjoint(self, other: "ComplexBall") -> bool:
        return (not self.re.overlaps(other.re)) or (not self.im.overlaps(other.im))

    def contains_box(self, other: "ComplexBall") -> bool:
        lo_a, hi_a = self.re._bounds()
        lo_b, hi_b = other.re._bounds()
        if mpf_cmp(lo_a, lo_b) > 0 or mpf_cmp(hi_a, hi_b) < 0:
            return False
        lo_a, hi_a = self.im._bounds()
        lo_b, hi_b = other.im._bounds()
        return mpf_cmp(lo_a, lo_b) <= 0 and mpf_cmp(hi_a, hi_b) >= 0

    def mid_complex(self) -> complex:
        return complex(self.re.mid_float(), self.im.mid_float())

    def __repr__(self) -> str:
        return f"ComplexBall({self.re!r}, {self.im!r})"


SignResult = str  # 'negative' | 'zero-undecided' | 'positive'

NEGATIVE = "negative"
POSITIVE = "positive"
ZERO_UNDECIDED = "zero-undecided"


def interval_sign(
    expr: Union[RealBall, Callable[[int], RealBall]],
    max_prec: int | None = None,
    start_prec: int | None = None,
) -> SignResult:
    """Certified sign of a recomputable real expression.

    `expr` is either a fixed RealBall or a callable prec -> RealBall that
    re-evaluates the underlying expression from scratch.  The precision is
    doubled until the ball excludes zero or the cap is reached; an interval
    still straddling zero at the cap yields 'zero-undecided', never a guess.
    """
    cap = max_prec if max_prec is not None else max_precision()
    prec = start_prec if start_prec is not None else default_precision()
    while True:
        ball = expr(prec) if callable(expr) else expr
        if ball.is_positive():
            return POSITIVE
        if ball.is_negative():
            return NEGATIVE
        if not callable(expr) or prec >= cap:
            return ZERO_UNDECIDED
        prec = min(2 * prec, cap)
