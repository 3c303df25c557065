"""Exact linear combinations of logarithms with certified sign decisions.

Log-magnitude data in this package is a finite Q-linear combination of two
kinds of atoms: log p for a prime p, and log|r| for r a certified root of a
monic irreducible integer polynomial.  Prime-log atoms are linearly
independent over Q by unique factorization, so a combination built from them
alone has an exact zero test: it vanishes iff every coefficient does.

Root atoms are normalized aggressively so that combinations collapse to the
prime-only case whenever the algebra allows it:

  * a linear factor has a rational (integer) root, so its log splits into
    prime atoms at once;
  * conjugate roots have equal absolute values, so conjugate pairs share a
    single atom;
  * a root certified to lie on the unit circle contributes log 1 = 0 and is
    dropped;
  * roots of an (anti)palindromic polynomial come in inverse pairs, and
    log|1/r| = -log|r| folds each pair onto one atom with a sign;
  * when every remaining root of one irreducible factor appears with the
    same per-root coefficient, the product of the absolute values is the
    absolute constant term, so the whole group collapses to log of an
    integer, hence to prime atoms.

Anything still carrying root atoms after normalization falls back to
certified interval evaluation, where a sign query may come back undecided at
the precision cap but never wrong.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .balls import (
    NEGATIVE,
    POSITIVE,
    RealBall,
    ZERO_UNDECIDED,
    interval_sign,
    max_precision,
)
from .numberfield import (
    IntPoly,
    factor_monic_int,
    is_palindromic_or_anti,
    isolate_roots,
    unit_circle_certified,
)
from .rationals import factor_fraction

# ('q', p) for log p, ('root', poly, index) for log|root_index(poly)|
Atom = Tuple


@functools.lru_cache(maxsize=256)
def _is_irreducible(poly: IntPoly) -> bool:
    return factor_monic_int(poly) == {poly: 1}


@functools.lru_cache(maxsize=1024)
def _circle_certified(poly: IntPoly, index: int) -> bool:
    if not is_palindromic_or_anti(poly):
        return False
    return unit_circle_certified(poly, index)


@functools.lru_cache(maxsize=1024)
def _canonical_index(poly: IntPoly, index: int) -> int:
    e = isolate_roots(poly, 64)[index]
    return min(e.index, e.conj_index)


@functools.lru_cache(maxsize=1024)
def _atom_multiplicity(poly: IntPoly, index: int) -> int:
    """Number of original roots folded into a canonical atom (1 or 2)."""
    e = isolate_roots(poly, 64)[index]
    return 1 if e.conj_index == e.index else 2


@functools.lru_cache(maxsize=1024)
def _inverse_partner(poly: IntPoly, index: int) -> int:
    """Canonical index of the root 1/r, for (anti)palindromic polys.

    The root multiset of such a polynomial is closed under r -> 1/r, so the
    reciprocal of the box of root #index overlaps exactly one isolating box
    once the precision suffices; matching is therefore certified.
    """
    prec = 64
    while True:
        embs = isolate_roots(poly, prec)
        try:
            target = embs[index].box.recip(prec)
        except ZeroDivisionError:
            prec *= 2
            continue
        hits = [
            e.index
            for e in embs
            if e.box.re.overlaps(target.re) and e.box.im.overlaps(target.im)
        ]
        if len(hits) == 1:
            return _canonical_index(poly, hits[0])
        prec *= 2
        if prec > max_precision():
            raise RuntimeError("inverse-pair matching exceeded the precision cap")


class ExactLog:
    """An immutable Q-linear combination of log atoms."""

    __slots__ = ("prime_part", "root_part")

    def __init__(self, prime_part: Dict[int, Fraction], root_part: Dict[Atom, Fraction]):
        self.prime_part = {p: c for p, c in sorted(prime_part.items()) if c}
        self.root_part = dict(sorted((a, c) for a, c in root_part.items() if c))

    # --- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "ExactLog":
        return ExactLog({}, {})

    @staticmethod
    def from_rational(x) -> "ExactLog":
        """log|x| for a nonzero rational x, as exact prime atoms."""
        x = Fraction(x)
        if x == 0:
            raise ValueError("log of zero")
        primes = {p: Fraction(e) for p, e in factor_fraction(abs(x)).items()}
        return ExactLog(primes, {})

    @staticmethod
    def from_root_abs(poly: Sequence[int], index: int, coeff=Fraction(1)) -> "ExactLog":
        """coeff * log|r| for the index-th certified root r of an irreducible poly."""
        poly = tuple(int(c) for c in poly)
        coeff = Fraction(coeff)
        if poly == (0, 1):
            raise ValueError("log of the zero root")
        if not _is_irreducible(poly):
            raise ValueError("root atoms require an irreducible polynomial")
        if len(poly) == 2:
            return ExactLog.from_rational(-poly[0]).scale(coeff)
        canon = _canonical_index(poly, index)
        if _circle_certified(poly, canon):
            return ExactLog.zero()
        if is_palindromic_or_anti(poly):
            # roots come in inverse pairs; fold log|1/r| = -log|r| onto the
            # smaller canonical index so paired atoms cancel exactly
            inv = _inverse_partner(poly, canon)
            if inv < canon:
                return ExactLog({}, {("root", poly, inv): -coeff})
        return ExactLog({}, {("root", poly, canon): coeff})._reduce_full_groups()

    # --- algebra --------------------------------------------------------

    def add(self, other: "ExactLog") -> "ExactLog":
        primes = dict(self.prime_part)
        for p, c in other.prime_part.items():
            primes[p] = primes.get(p, Fraction(0)) + c
        roots = dict(self.root_part)
        for a, c in other.root_part.items():
            roots[a] = roots.get(a, Fraction(0)) + c
        return ExactLog(primes, roots)._reduce_full_groups()

    def neg(self) -> "ExactLog":
        return self.scale(Fraction(-1))

    def sub(self, other: "ExactLog") -> "ExactLog":
        return self.add(other.neg())

    def scale(self, c) -> "ExactLog":
        c = Fraction(c)
        if c == 0:
            return ExactLog.zero()
        return ExactLog(
            {p: v * c for p, v in self.prime_part.items()},
            {a: v * c for a, v in self.root_part.items()},
        )

    def _reduce_full_groups(self) -> "ExactLog":
        """Collapse full equal-coefficient root groups to prime atoms.

        Roots certified on the unit circle never enter root_part, and their
        absolute values are exactly 1, so a group is full once every other
        canonical root of the polynomial is present.  The per-root
        coefficient must be shared; folded conjugate atoms count twice.
        """
        by_poly: Dict[IntPoly, List[Atom]] = {}
        for atom in self.root_part:
            by_poly.setdefault(atom[1], []).append(atom)
        if not by_poly:
            return self
        primes = dict(self.prime_part)
        roots = dict(self.root_part)
        changed = False
        for poly, atoms in by_poly.items():
            expected = set()
            for e in isolate_roots(poly, 64):
                canon = min(e.index, e.conj_index)
                if not _circle_certified(poly, canon):
                    expected.add(("root", poly, canon))
            if expected != set(atoms):
                continue
            per_root = None
            ok = True
            for atom in atoms:
                mult = _atom_multiplicity(poly, atom[2])
                share = roots[atom] / mult
                if per_root is None:
                    per_root = share
                elif per_root != share:
                    ok = False
                    break
            if not ok or per_root is None:
                continue
            const = abs(poly[0])
            for atom in atoms:
                del roots[atom]
            if const != 1:
                for p, e in factor_fraction(Fraction(const)).items():
                    primes[p] = primes.get(p, Fraction(0)) + per_root * e
            changed = True
        if not changed:
            return self
        return ExactLog(primes, roots)

    # --- queries --------------------------------------------------------

    def is_trivially_zero(self) -> bool:
        """Exact zero certificate: nothing left after normalization."""
        return not self.prime_part and not self.root_part

    def evaluate(self, prec: int) -> RealBall:
        total = RealBall.zero()
        for p, c in self.prime_part.items():
            term = RealBall.from_int(p).log(prec + 8)
            total = total.add(term.mul(RealBall.from_fraction(c, prec + 8), prec), prec)
        for (_, poly, index), c in self.root_part.items():
            term = _root_abs_log(poly, index, prec)
            total = total.add(term.mul(RealBall.from_fraction(c, prec + 8), prec), prec)
        return total

    def sign(self, max_prec: Optional[int] = None) -> str:
        """'positive' | 'negative' | 'zero' | 'zero-undecided'.

        'zero' only comes from the exact certificate; the interval route can
        certify a nonzero sign but reports 'zero-undecided' at the cap.
        """
        if self.is_trivially_zero():
            return "zero"
        return interval_sign(self.evaluate, max_prec=max_prec)

    def is_zero(self, max_prec: Optional[int] = None) -> Optional[bool]:
        """True/False when certified, None when undecided at the cap."""
        if self.is_trivially_zero():
            return True
        s = interval_sign(self.evaluate, max_prec=max_prec)
        if s in (POSITIVE, NEGATIVE):
            return False
        if not self.root_part:
            return False  # nonzero by independence even if the cap was hit
        return None

    def atoms_json(self) -> List[dict]:
        out = []
        for p, c in self.prime_part.items():
            out.append({"atom": {"kind": "prime", "p": p}, "coeff": str(c)})
        for (_, poly, index), c in self.root_part.items():
            out.append(
                {
                    "atom": {"kind": "root-abs", "poly": list(poly), "index": index},
                    "coeff": str(c),
                }
            )
        return out

    def __eq__(self, other):
        return (
            isinstance(other, ExactLog)
            and self.prime_part == other.prime_part
            and self.root_part == other.root_part
        )

    def __hash__(self):
        return hash(
            (tuple(self.prime_part.items()), tuple(self.root_part.items()))
        )

    def __repr__(self):
        bits = [f"{c}*log({p})" for p, c in self.prime_part.items()]
        bits += [f"{c}*log|root#{i} of {list(f)}|" for (_, f, i), c in self.root_part.items()]
        return "ExactLog(" + (" + ".join(bits) if bits else "0") + ")"


def _root_abs_log(poly: IntPoly, index: int, prec: int) -> RealBall:
    work = max(prec, 64)
    while True:
        box = isolate_roots(poly, work)[index].box
        mag2 = box.abs2(work)
        if mag2.is_positive():
            return mag2.log(work).mul(RealBall.from_fraction(Fraction(1, 2), work), prec)
        work *= 2


# --------------------------------------------------------------------------
# vectors of exact logs


def log_dot(n: Sequence[int], w: Sequence[ExactLog]) -> ExactLog:
    """Integer linear combination n . w."""
    total = ExactLog.zero()
    for ni, wi in zip(n, w):
        if ni:
            total = total.add(wi.scale(ni))
    return total


def vector_is_zero(w: Sequence[ExactLog], max_prec: Optional[int] = None) -> Optional[bool]:
    """True/False/None for a whole vector, undecided if any entry is."""
    verdicts = [entry.is_zero(max_prec) for entry in w]
    if any(v is False for v in verdicts):
        return False
    if all(v is True for v in verdicts):
        return True
    return None


def _coefficient_matrix(vecs: Iterable[Sequence[ExactLog]]):
    """Rows: one per atom appearing anywhere; columns: vector coordinates."""
    vecs = list(vecs)
    atoms = set()
    for w in vecs:
        for entry in w:
            atoms.update(("q", p) for p in entry.prime_part)
            atoms.update(entry.root_part)
    atoms = sorted(atoms, key=repr)
    mats = []
    for w in vecs:
        rows = []
        for atom in atoms:
            row = []
            for entry in w:
                if atom[0] == "q":
                    row.append(entry.prime_part.get(atom[1], Fraction(0)))
                else:
                    row.append(entry.root_part.get(atom, Fraction(0)))
            rows.append(row)
        mats.append(rows)
    return atoms, mats


def vectors_parallel(
    a: Sequence[ExactLog], b: Sequence[ExactLog], max_prec: Optional[int] = None
) -> str:
    """'parallel' | 'not-parallel' | 'undecided' for nonzero vectors.

    Rational proportionality of the atom-coefficient matrices certifies
    parallelism exactly.  Otherwise every 2x2 minor is evaluated as an
    interval: one minor excluding zero certifies non-parallelism, and
    anything else stays undecided at the cap.
    """
    d = len(a)
    _, (ca, cb) = _coefficient_matrix([a, b])
    flat_a = [x for row in ca for x in row]
    flat_b = [x for row in cb for x in row]
    ratio = None
    proportional = True
    for x, y in zip(flat_a, flat_b):
        if x == 0 and y == 0:
            continue
        if x == 0 or y == 0:
            proportional = False
            break
        r = y / x
        if ratio is None:
            ratio = r
        elif ratio != r:
            proportional = False
            break
    if proportional and ratio is not None:
        return "parallel"
    undecided = False
    for i in range(d):
        for j in range(i + 1, d):
            def minor(prec: int, i=i, j=j) -> RealBall:
                return a[i].evaluate(prec).mul(b[j].evaluate(prec), prec).sub(
                    a[j].evaluate(prec).mul(b[i].evaluate(prec), prec), prec
                )

            s = interval_sign(minor, max_prec=max_prec)
            if s in (POSITIVE, NEGATIVE):
                return "not-parallel"
            if s == ZERO_UNDECIDED:
                undecided = True
    return "undecided" if undecided else "parallel"
