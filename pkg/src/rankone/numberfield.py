"""Number field arithmetic with certified complex embeddings.

A field is presented as Q[x]/(f) for a monic squarefree integer polynomial f
(ascending coefficients, constant first, leading 1 last).  Elements are
coordinate tuples of Fractions in the power basis 1, a, ..., a^(m-1).  The
power basis is only a coordinate system: elements may have non-integral
coordinates, and integrality is decided by the integrality of the element's
characteristic polynomial, not of its coordinates.

Embeddings are certified boxes around the roots of f.  Root isolation runs a
simultaneous iteration (mpmath's polyroots) for the approximations and then
certifies a posteriori: around each approximation z the disk of radius
deg(f) * |f(z)/f'(z)| is known to contain at least one root, so once the
boxes are pairwise disjoint each contains exactly one.  Realness is settled
by matching against an exact Sturm count rather than by eyeballing imaginary
parts, and conjugate boxes are paired by certified overlap.  Everything
re-runs at doubled precision until it resolves, so results are reproducible
and independent of floating-point luck.

The same machinery factors monic integer polynomials: conjugation-closed
subsets of isolated roots propose factors through interval symmetric
functions, and exact trial division over Z confirms them.  That is enough to
see through the multiplicative structure of embedding magnitudes (shared
minimal polynomials, reciprocal pairs, roots certified to lie on the unit
circle), which the zero tests elsewhere rely on.
"""

from __future__ import annotations

import functools
import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import libmp

from .balls import ComplexBall, RealBall, ball_to_fraction_bounds
from .linalg import Matrix, charpoly as mat_charpoly, det as mat_det

IntPoly = Tuple[int, ...]  # ascending, monic


# --------------------------------------------------------------------------
# rational polynomial helpers (ascending Fraction lists)


def poly_trim(f: List[Fraction]) -> List[Fraction]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_degree(f: Sequence[Fraction]) -> int:
    return len(f) - 1


def poly_derivative(f: Sequence[Fraction]) -> List[Fraction]:
    return poly_trim([i * c for i, c in enumerate(f)][1:])


def poly_mul(f: Sequence[Fraction], g: Sequence[Fraction]) -> List[Fraction]:
    if not f or not g:
        return []
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return poly_trim(out)


def poly_divmod(f: Sequence[Fraction], g: Sequence[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = poly_trim(list(f))
    dg = len(g) - 1
    lead = g[-1]
    q = [Fraction(0)] * max(0, len(rem) - dg)
    while rem and len(rem) - 1 >= dg:
        shift = len(rem) - 1 - dg
        c = rem[-1] / lead
        q[shift] = c
        for i in range(len(g)):
            rem[shift + i] -= c * g[i]
        poly_trim(rem)
    return poly_trim(q), rem


def poly_gcd(f: Sequence[Fraction], g: Sequence[Fraction]) -> List[Fraction]:
    a, b = poly_trim(list(f)), poly_trim(list(g))
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _poly_sub(f: List[Fraction], g: List[Fraction]) -> List[Fraction]:
    out = [Fraction(0)] * max(len(f), len(g))
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] -= c
    return poly_trim(out)


def poly_xgcd(f: Sequence[Fraction], g: Sequence[Fraction]):
    """(d, s, t) with s*f + t*g = d, d the monic gcd."""
    r0, r1 = poly_trim(list(f)), poly_trim(list(g))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, _poly_sub(t0, poly_mul(q, t1))
    if r0:
        lead = r0[-1]
        r0 = [c / lead for c in r0]
        s0 = [c / lead for c in s0]
        t0 = [c / lead for c in t0]
    return r0, s0, t0


def poly_eval_ball(f: Sequence[Fraction], z: ComplexBall, prec: int) -> ComplexBall:
    acc = ComplexBall(RealBall.zero(), RealBall.zero())
    for c in reversed(list(f)):
        acc = acc.mul(z, prec)
        acc = ComplexBall(acc.re.add(RealBall.from_fraction(Fraction(c), prec), prec), acc.im)
    return acc


def poly_is_squarefree(f: Sequence[int]) -> bool:
    fr = [Fraction(c) for c in f]
    return poly_degree(poly_gcd(fr, poly_derivative(fr))) <= 0


def squarefree_part_int(f: Sequence[int]) -> IntPoly:
    """Monic integer f -> the monic integer product of its distinct irreducible factors."""
    fr = [Fraction(c) for c in f]
    g = poly_gcd(fr, poly_derivative(fr))
    sf, rem = poly_divmod(fr, g)
    assert not rem
    # monic divisors of a monic integer polynomial are integral
    assert all(c.denominator == 1 for c in sf)
    return tuple(int(c) for c in sf)


def count_real_roots(f: Sequence[int]) -> int:
    """Number of real roots of a squarefree polynomial, by a Sturm chain."""
    chain = [[Fraction(c) for c in f]]
    chain.append(poly_derivative(chain[0]))
    while poly_degree(chain[-1]) > 0:
        rem = poly_divmod(chain[-2], chain[-1])[1]
        if not rem:
            raise ValueError("Sturm chain requires a squarefree polynomial")
        chain.append([-c for c in rem])

    def variations(at_plus_inf: bool) -> int:
        signs = []
        for p in chain:
            if not p:
                continue
            s = 1 if p[-1] > 0 else -1
            if not at_plus_inf and poly_degree(p) % 2 == 1:
                s = -s
            signs.append(s)
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    return variations(at_plus_inf=False) - variations(at_plus_inf=True)


# --------------------------------------------------------------------------
# field spec and element arithmetic


class NumberFieldSpec:
    """Q[x]/(min_poly) with min_poly monic, squarefree, integer, degree >= 1."""

    __slots__ = ("min_poly",)

    def __init__(self, min_poly: Sequence[int]):
        mp_ = tuple(int(c) for c in min_poly)
        if len(mp_) < 2:
            raise ValueError("min_poly must have degree at least 1")
        if mp_[-1] != 1:
            raise ValueError("min_poly must be monic, ascending, with the leading 1 last")
        if not poly_is_squarefree(mp_):
            raise ValueError("min_poly must be squarefree")
        self.min_poly = mp_

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def __eq__(self, other):
        return isinstance(other, NumberFieldSpec) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        return f"NumberFieldSpec({list(self.min_poly)})"


Element = Tuple[Fraction, ...]


def el_from_coeffs(spec: NumberFieldSpec, coeffs: Sequence) -> Element:
    vals = [Fraction(c) for c in coeffs]
    if len(vals) > spec.degree:
        raise ValueError("coefficient vector longer than the field degree")
    vals += [Fraction(0)] * (spec.degree - len(vals))
    return tuple(vals)


def el_zero(spec: NumberFieldSpec) -> Element:
    return tuple([Fraction(0)] * spec.degree)


def el_one(spec: NumberFieldSpec) -> Element:
    return el_from_coeffs(spec, [1])


def el_add(x: Element, y: Element) -> Element:
    return tuple(a + b for a, b in zip(x, y))


def el_sub(x: Element, y: Element) -> Element:
    return tuple(a - b for a, b in zip(x, y))


def _reduce_mod_min_poly(spec: NumberFieldSpec, coeffs: List[Fraction]) -> Element:
    m = spec.degree
    f = spec.min_poly
    for k in range(len(coeffs) - 1, m - 1, -1):
        c = coeffs[k]
        if c:
            coeffs[k] = Fraction(0)
            for i in range(m):
                coeffs[k - m + i] -= c * f[i]
    coeffs = coeffs[:m]
    coeffs += [Fraction(0)] * (m - len(coeffs))
    return tuple(coeffs)


def el_mul(spec: NumberFieldSpec, x: Element, y: Element) -> Element:
    m = spec.degree
    out = [Fraction(0)] * (2 * m - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                if b:
                    out[i + j] += a * b
    return _reduce_mod_min_poly(spec, out)


def el_inv(spec: NumberFieldSpec, x: Element) -> Element:
    if not any(x):
        raise ZeroDivisionError("inverse of zero")
    d, _, t = poly_xgcd([Fraction(c) for c in spec.min_poly], poly_trim(list(x)))
    if poly_degree(d) != 0:
        raise ZeroDivisionError("element is a zero divisor; min_poly is reducible along it")
    return _reduce_mod_min_poly(spec, list(t))


def el_pow(spec: NumberFieldSpec, x: Element, n: int) -> Element:
    if n < 0:
        return el_pow(spec, el_inv(spec, x), -n)
    result = el_one(spec)
    base = x
    while n:
        if n & 1:
            result = el_mul(spec, result, base)
        n >>= 1
        if n:
            base = el_mul(spec, base, base)
    return result


def mult_matrix(spec: NumberFieldSpec, x: Element) -> Matrix:
    """Matrix of y -> x*y on the power basis; column j holds the coords of x*a^j."""
    m = spec.degree
    cols = [x]
    gen = el_from_coeffs(spec, [0, 1] if m > 1 else [-spec.min_poly[0]])
    current = x
    for _ in range(m - 1):
        current = el_mul(spec, current, gen)
        cols.append(current)
    return [[cols[j][i] for j in range(m)] for i in range(m)]


def norm(spec: NumberFieldSpec, x: Element) -> Fraction:
    return mat_det(mult_matrix(spec, x))


def element_charpoly(spec: NumberFieldSpec, x: Element) -> List[Fraction]:
    return mat_charpoly(mult_matrix(spec, x))


def is_integral(spec: NumberFieldSpec, x: Element) -> bool:
    return all(c.denominator == 1 for c in element_charpoly(spec, x))


def is_unit(spec: NumberFieldSpec, x: Element) -> bool:
    """True when x is an algebraic integer of norm +-1.

    Decided through the characteristic polynomial of the multiplication
    matrix: integrality of the element does not require integral power-basis
    coordinates, so the test accepts any coordinate vector.
    """
    cp = element_charpoly(spec, x)
    if any(c.denominator != 1 for c in cp):
        return False
    return abs(cp[0]) == 1  # constant term is the norm up to sign


# --------------------------------------------------------------------------
# certified root isolation


class Embedding:
    """One certified root of a monic squarefree integer polynomial.

    The box contains exactly one root.  Real embeddings carry an imaginary
    part that is exactly zero.  conj_index names the embedding holding the
    complex conjugate root (itself for real embeddings).  Instances are
    ordered by real part, then imaginary part; the order is stable under
    refinement because disjoint boxes separate in one of the coordinates.
    """

    __slots__ = ("poly", "index", "box", "is_real", "conj_index")

    def __init__(self, poly: IntPoly, index: int, box: ComplexBall, is_real: bool, conj_index: int):
        self.poly = poly
        self.index = index
        self.box = box
        self.is_real = is_real
        self.conj_index = conj_index

    def refined(self, prec: int) -> "Embedding":
        return isolate_roots(self.poly, prec)[self.index]

    def __eq__(self, other):
        return (
            isinstance(other, Embedding)
            and self.poly == other.poly
            and self.index == other.index
        )

    def __hash__(self):
        return hash((self.poly, self.index))

    def __repr__(self):
        kind = "real" if self.is_real else "complex"
        return f"Embedding({kind} #{self.index} of {list(self.poly)} ~ {self.box.mid_complex():.6g})"


_HARD_PREC_CAP = 1 << 20


def isolate_roots(poly: Sequence[int], prec: int = 64) -> Tuple[Embedding, ...]:
    """Certified, deterministically ordered embeddings of a squarefree polynomial.

    The working precision escalates internally until every box is certified
    (pairwise disjoint, realness matching the Sturm count, conjugates paired)
    and has radius below 2^(1-prec) relative to its magnitude.
    """
    return _isolate_cached(tuple(int(c) for c in poly), int(prec))


@functools.lru_cache(maxsize=256)
def _isolate_cached(poly: IntPoly, prec: int) -> Tuple[Embedding, ...]:
    if len(poly) < 2:
        raise ValueError("cannot isolate roots of a constant")
    if poly[-1] != 1:
        raise ValueError("root isolation expects a monic polynomial")
    if not poly_is_squarefree(poly):
        raise ValueError("root isolation expects a squarefree polynomial")
    n_real = count_real_roots(poly)
    work = max(prec, 64)
    while work <= _HARD_PREC_CAP:
        result = _try_isolate(poly, prec, work, n_real)
        if result is not None:
            return result
        work *= 2
    raise RuntimeError(f"root isolation did not converge below {_HARD_PREC_CAP} bits")


def _approx_roots(poly: IntPoly, work: int) -> Optional[List[ComplexBall]]:
    with mpmath.workprec(work + 20):
        try:
            approx = mpmath.polyroots(
                [mpmath.mpf(c) for c in reversed(poly)], maxsteps=500, extraprec=work
            )
        except mpmath.mp.NoConvergence:
            return None
        out = []
        for z in approx:
            zc = mpmath.mpc(z)
            out.append(ComplexBall(RealBall(zc.real._mpf_), RealBall(zc.imag._mpf_)))
        return out


def _try_isolate(poly: IntPoly, prec: int, work: int, n_real: int) -> Optional[Tuple[Embedding, ...]]:
    m = len(poly) - 1
    frac = [Fraction(c) for c in poly]
    dfrac = poly_derivative(frac)
    centers = _approx_roots(poly, work)
    if centers is None:
        return None
    boxes = []
    for z in centers:
        val = poly_eval_ball(frac, z, work)
        dval2 = poly_eval_ball(dfrac, z, work).abs2(work)
        if dval2.contains_zero():
            return None
        ratio2 = val.abs2(work).div(dval2, work)
        _, hi2 = ball_to_fraction_bounds(ratio2)
        # radius m * |f(z)/f'(z)|, rounded outward through exact rationals
        rad_frac = Fraction(m) * _fraction_sqrt_upper(hi2)
        rad_raw = libmp.from_rational(rad_frac.numerator, rad_frac.denominator, 30, "c")
        boxes.append(ComplexBall(RealBall(z.re.mid, rad_raw), RealBall(z.im.mid, rad_raw)))
    for i in range(m):
        for j in range(i + 1, m):
            if not boxes[i].box_disjoint(boxes[j]):
                return None
    real_flags = [b.im.contains_zero() for b in boxes]
    # each real root forces its box onto the axis, so equality of counts
    # certifies that the axis-meeting boxes are exactly the real ones
    if sum(real_flags) != n_real:
        return None
    for b in boxes:
        scale = max(1.0, abs(b.re.mid_float()), abs(b.im.mid_float()))
        if b.re.rad_float() > scale * 2.0 ** (1 - prec):
            return None
    conj_of = [-1] * m
    for i, b in enumerate(boxes):
        if real_flags[i]:
            conj_of[i] = i
            continue
        cb = b.conj()
        overlaps = [j for j in range(m) if not cb.box_disjoint(boxes[j])]
        if len(overlaps) != 1:
            return None
        conj_of[i] = overlaps[0]
    if any(conj_of[conj_of[i]] != i for i in range(m)):
        return None
    order = sorted(range(m), key=_box_sort_key(boxes))
    rank_of = {old: new for new, old in enumerate(order)}
    out = []
    for new_idx, old in enumerate(order):
        b = boxes[old]
        if real_flags[old]:
            b = ComplexBall(b.re, RealBall.zero())
        out.append(Embedding(poly, new_idx, b, real_flags[old], rank_of[conj_of[old]]))
    return tuple(out)


def _fraction_sqrt_upper(x: Fraction) -> Fraction:
    """A rational upper bound for sqrt(x), x >= 0, tight to ~1 part in 2^50."""
    if x < 0:
        raise ValueError("negative operand")
    if x == 0:
        return Fraction(0)
    # scale so the integer square root sees at least ~100 significant bits
    bits = x.numerator.bit_length() - x.denominator.bit_length()
    k = max(0, (100 - bits + 1) // 2)
    scaled = (x.numerator << (2 * k)) // x.denominator + 1
    root = math.isqrt(scaled) + 1  # root / 2^k > sqrt(x)
    return Fraction(root, 1 << k)


def _box_sort_key(boxes: List[ComplexBall]):
    def cmp(i: int, j: int) -> int:
        a, b = boxes[i], boxes[j]
        if not a.re.overlaps(b.re):
            return libmp.mpf_cmp(a.re.mid, b.re.mid)
        if not a.im.overlaps(b.im):
            return libmp.mpf_cmp(a.im.mid, b.im.mid)
        return 0

    return functools.cmp_to_key(cmp)


def embed(x: Element, e: Embedding, prec: int) -> ComplexBall:
    """Evaluate the coordinate vector x at the embedding e as a certified box."""
    root = e.refined(prec).box
    return poly_eval_ball([Fraction(c) for c in x], root, prec)


# --------------------------------------------------------------------------
# factorization of monic integer polynomials by certified root clustering


def factor_monic_int(poly: Sequence[int]) -> Dict[IntPoly, int]:
    """Factor a monic integer polynomial into monic integer irreducibles.

    Conjugation-closed subsets of the isolated roots propose factors through
    interval symmetric functions; exact division over Z confirms them.  The
    subsets are tried in increasing degree and a candidate is only accepted
    once every smaller degree has been decisively ruled out, so accepted
    factors are irreducible.
    """
    poly = tuple(int(c) for c in poly)
    if not poly or poly[-1] != 1:
        raise ValueError("factor_monic_int expects a monic polynomial")
    if len(poly) == 1:
        return {}
    sf = squarefree_part_int(poly)
    out: Dict[IntPoly, int] = {}
    rem = [Fraction(c) for c in poly]
    for fac in _factor_squarefree_monic(sf):
        ffac = [Fraction(c) for c in fac]
        mult = 0
        while True:
            q, r = poly_divmod(rem, ffac)
            if r:
                break
            rem = q
            mult += 1
        out[fac] = mult
    assert poly_degree(rem) == 0
    return dict(sorted(out.items()))


def _factor_squarefree_monic(poly: IntPoly) -> List[IntPoly]:
    if len(poly) - 1 <= 1:
        return [poly] if len(poly) - 1 == 1 else []
    found = _find_irreducible_factor(poly)
    if found == poly:
        return [poly]
    quotient, rem = poly_divmod([Fraction(c) for c in poly], [Fraction(c) for c in found])
    assert not rem
    qtuple = tuple(int(c) for c in quotient)
    return sorted([found] + _factor_squarefree_monic(qtuple))


def _find_irreducible_factor(poly: IntPoly) -> IntPoly:
    """An irreducible monic integer factor of a squarefree monic poly (or poly itself)."""
    m = len(poly) - 1
    prec = 128
    while prec <= _HARD_PREC_CAP:
        roots = isolate_roots(poly, prec)
        units: List[Tuple[int, ...]] = []
        for e in roots:
            if e.is_real:
                units.append((e.index,))
            elif e.index < e.conj_index:
                units.append((e.index, e.conj_index))
        indecisive_below = False
        for size in range(1, m // 2 + 1):
            confirmed = None
            indecisive_here = False
            for r in range(1, len(units) + 1):
                for combo in itertools.combinations(units, r):
                    if sum(len(u) for u in combo) != size:
                        continue
                    cand, decisive = _candidate_from_units(poly, roots, combo, prec)
                    if cand is not None and confirmed is None:
                        confirmed = cand
                    if not decisive:
                        indecisive_here = True
            # a confirmed factor of this degree is irreducible only when all
            # smaller degrees were decisively excluded
            if confirmed is not None and not indecisive_below:
                return confirmed
            indecisive_below = indecisive_below or indecisive_here
            if confirmed is not None:
                break
        if not indecisive_below:
            return poly
        prec *= 2
    raise RuntimeError("factorization by root clustering did not converge")


def _candidate_from_units(poly: IntPoly, roots, combo, prec: int):
    """(factor, decisive) for one conjugation-closed root subset.

    factor is the confirmed monic integer divisor or None; decisive=False
    means the coefficient intervals were too wide to settle the subset.
    """
    coeffs: List[RealBall] = [RealBall.one()]
    for unit in combo:
        if len(unit) == 1:
            r = roots[unit[0]].box.re
            factor = [r.neg(), RealBall.one()]
        else:
            z = roots[unit[0]].box
            factor = [z.abs2(prec), z.re.mul_int(2, prec).neg(), RealBall.one()]
        new = [RealBall.zero() for _ in range(len(coeffs) + len(factor) - 1)]
        for i, a in enumerate(coeffs):
            for j, b in enumerate(factor):
                new[i + j] = new[i + j].add(a.mul(b, prec), prec)
        coeffs = new
    ints: List[int] = []
    for c in coeffs[:-1]:
        lo, hi = ball_to_fraction_bounds(c)
        lo_i = math.ceil(lo)
        hi_i = math.floor(hi)
        if lo_i > hi_i:
            return None, True  # interval excludes every integer: not a factor
        if lo_i < hi_i:
            return None, False
        ints.append(lo_i)
    ints.append(1)
    _, rem = poly_divmod([Fraction(c) for c in poly], [Fraction(c) for c in ints])
    if rem:
        return None, True
    return tuple(ints), True


# --------------------------------------------------------------------------
# unit circle certification


def is_palindromic_or_anti(poly: IntPoly) -> bool:
    rev = tuple(reversed(poly))
    return poly == rev or poly == tuple(-c for c in rev)


def unit_circle_certified(poly: Sequence[int], index: int, max_prec: int = 4096) -> bool:
    """Certify that a root has absolute value exactly 1.

    For a polynomial with (anti)palindromic coefficients the map
    r -> 1/conjugate(r) permutes the roots.  When the enclosure of
    1/conjugate(box) meets only the root's own box, the permutation fixes
    that root, which forces r * conjugate(r) = 1.
    """
    poly = tuple(int(c) for c in poly)
    if poly[0] == 0 or not is_palindromic_or_anti(poly):
        return False
    prec = 64
    while prec <= max_prec:
        roots = isolate_roots(poly, prec)
        b = roots[index].box
        if not b.contains_zero():
            inv = b.conj().recip(prec)
            overlaps = [j for j in range(len(roots)) if not inv.box_disjoint(roots[j].box)]
            if overlaps == [index]:
                return True
            if len(overlaps) == 1 and overlaps[0] != index:
                return False  # the reciprocal-conjugate is certifiably a different root
        prec *= 2
    return False
