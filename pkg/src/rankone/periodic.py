"""Exact periodic-point counts |F_j(alpha^n)| via place products.

For each component the group element h = prod_i g_i^{j n_i} is formed
exactly; the count is infinite when h = 1 and otherwise equals the product
of |h - 1|_w over the component's marked places, which collapses to integer
arithmetic in every supported class:

- s_integer: the prime-to-S part of |numerator(h) - denominator(h)|,
- function_field: a power of p read off from place orders of h - 1,
- number_field_units: |Norm(h - 1)| as one exact determinant.

det_oracle recomputes number-field counts by a second route (integer
matrix powers of the multiplication matrices, then one determinant) so the
two implementations can be checked against each other.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import numberfield as nf
from .errors import ResourceCapError, UnsupportedOperationError
from .fppoly import FpRationalFunction, fp_ord_at, fp_ord_infinity
from .linalg import det, identity, mat_mul, mat_pow, mat_sub
from .rationals import prime_to_s_part
from .system import (
    FunctionFieldComponent,
    NumberFieldUnitsComponent,
    SIntegerComponent,
    SystemDescriptor,
)

DEFAULT_BIT_BUDGET = 10 ** 6


class PeriodicCount:
    """An exact count, or the distinguished infinite value."""

    __slots__ = ("value",)

    def __init__(self, value: Optional[int]):
        if value is not None:
            value = int(value)
            if value < 1:
                raise ValueError("finite periodic counts are at least 1")
        self.value = value

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def as_text(self) -> str:
        return "inf" if self.value is None else str(self.value)

    def as_json(self):
        return self.value

    def __eq__(self, other):
        if isinstance(other, PeriodicCount):
            return self.value == other.value
        if other is None:
            return False
        if isinstance(other, int):
            return self.value == other
        if isinstance(other, float):
            return self.value is None and other == float("inf")
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"PeriodicCount({self.as_text()})"


INFINITE = PeriodicCount(None)


def _component_height(comp) -> int:
    """Rough bits-per-unit-exponent estimate used by the resource cap."""
    if isinstance(comp, SIntegerComponent):
        return max(
            r.numerator.bit_length() + r.denominator.bit_length() for r in comp.generators
        )
    if isinstance(comp, FunctionFieldComponent):
        bits = max(1, comp.p.bit_length())
        return max(
            (g.num.degree + g.den.degree + 1) * bits for g in comp.generators
        )
    deg = comp.field.degree
    coeff_bits = 1
    for g in comp.generators:
        for c in g:
            coeff_bits = max(
                coeff_bits, c.numerator.bit_length() + c.denominator.bit_length()
            )
    return deg * deg * coeff_bits


def _check_budget(sys: SystemDescriptor, exponents: Sequence[int], bit_budget: int) -> None:
    weight = sum(abs(e) for e in exponents)
    for comp, _ in sys.components:
        if weight * _component_height(comp) > bit_budget:
            raise ResourceCapError(
                f"estimated size {weight * _component_height(comp)} bits exceeds the {bit_budget}-bit budget"
            )


def _s_integer_count(comp: SIntegerComponent, exponents: Sequence[int]) -> Optional[int]:
    h = comp.power_product(exponents)
    if h == 1:
        return None
    diff = abs(h.numerator - h.denominator)
    return prime_to_s_part(diff, comp.s_primes())


def _function_field_count(comp: FunctionFieldComponent, exponents: Sequence[int]) -> Optional[int]:
    h = comp.power_product(exponents)
    if h.is_one():
        return None
    g = h.sub(FpRationalFunction.one(comp.p))
    exponent = 0
    for pi in comp.finite_places():
        exponent -= fp_ord_at(g, pi) * pi.degree
    if comp.infinite_place_needed():
        exponent -= fp_ord_infinity(g)
    # h - 1 has poles only at marked places, so the unmarked part of the
    # product formula forces a nonnegative exponent
    assert exponent >= 0, "negative count exponent violates the product formula"
    return comp.p ** exponent


def _number_field_count(comp: NumberFieldUnitsComponent, exponents: Sequence[int]) -> Optional[int]:
    h = comp.power_product(exponents)
    if h == nf.el_one(comp.field):
        return None
    delta = nf.el_sub(h, nf.el_one(comp.field))
    value = nf.norm(comp.field, delta)
    assert value.denominator == 1, "norm of an algebraic integer must be an integer"
    return abs(int(value))


def count(
    sys: SystemDescriptor,
    n: Sequence[int],
    j: int = 1,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> PeriodicCount:
    """|F_j(alpha^n)|: exact, with infinite detected by exact equality h = 1."""
    if j < 1:
        raise ValueError("period j must be a positive integer")
    if len(n) != sys.d:
        raise ValueError(f"expected a Z^{sys.d} element, got {len(n)} coordinates")
    exponents = [j * int(ni) for ni in n]
    _check_budget(sys, exponents, bit_budget)
    total = 1
    for comp, mult in sys.components:
        if isinstance(comp, SIntegerComponent):
            value = _s_integer_count(comp, exponents)
        elif isinstance(comp, FunctionFieldComponent):
            value = _function_field_count(comp, exponents)
        else:
            value = _number_field_count(comp, exponents)
        if value is None:
            return INFINITE
        total *= value ** mult
    return PeriodicCount(total)


def count_sequence(
    sys: SystemDescriptor,
    n: Sequence[int],
    j_max: int,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> List[PeriodicCount]:
    """[|F_1|, ..., |F_jmax|]; each period tested independently."""
    if j_max < 1:
        raise ValueError("j_max must be a positive integer")
    return [count(sys, n, j, bit_budget) for j in range(1, j_max + 1)]


class PeriodicGrid:
    """Counts over a finite box of lattice points."""

    __slots__ = ("ranges", "entries")

    def __init__(self, ranges: Sequence[Tuple[int, int]], entries: Dict[Tuple[int, ...], PeriodicCount]):
        self.ranges = tuple((int(lo), int(hi)) for lo, hi in ranges)
        self.entries = entries

    def points(self) -> Iterable[Tuple[int, ...]]:
        axes = [range(lo, hi + 1) for lo, hi in self.ranges]
        return itertools.product(*axes)

    def to_csv(self) -> str:
        d = len(self.ranges)
        header = ",".join(f"n{i + 1}" for i in range(d)) + ",count"
        lines = [header]
        for point in self.points():
            lines.append(
                ",".join(str(c) for c in point) + "," + self.entries[point].as_text()
            )
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "ranges": [[lo, hi] for lo, hi in self.ranges],
            "entries": [
                {"n": list(point), "count": self.entries[point].as_json()}
                for point in self.points()
            ],
        }


def grid(
    sys: SystemDescriptor,
    ranges: Sequence[Tuple[int, int]],
    j: int = 1,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> PeriodicGrid:
    """count(sys, n, j) for every n in the closed box given by ranges."""
    if len(ranges) != sys.d:
        raise ValueError(f"expected {sys.d} ranges, got {len(ranges)}")
    for lo, hi in ranges:
        if lo > hi:
            raise ValueError(f"empty range {lo}..{hi}")
    entries: Dict[Tuple[int, ...], PeriodicCount] = {}
    result = PeriodicGrid(ranges, entries)
    for point in result.points():
        entries[point] = count(sys, point, j, bit_budget)
    return result


def det_oracle(
    sys: SystemDescriptor,
    n: Sequence[int],
    j: int = 1,
    bit_budget: int = DEFAULT_BIT_BUDGET,
) -> PeriodicCount:
    """Independent matrix-arithmetic recomputation for number-field systems.

    Works entirely with multiplication matrices: integer matrix powers, one
    exact determinant.  Zero determinant reports the infinite count.
    """
    for comp, _ in sys.components:
        if not isinstance(comp, NumberFieldUnitsComponent):
            raise UnsupportedOperationError(
                "det_oracle requires every component to be number_field_units"
            )
    if j < 1:
        raise ValueError("period j must be a positive integer")
    if len(n) != sys.d:
        raise ValueError(f"expected a Z^{sys.d} element, got {len(n)} coordinates")
    exponents = [j * int(ni) for ni in n]
    _check_budget(sys, exponents, bit_budget)
    total = 1
    for comp, mult in sys.components:
        deg = comp.field.degree
        product = identity(deg)
        for g, e in zip(comp.generators, exponents):
            if e:
                m = nf.mult_matrix(comp.field, g)
                product = mat_mul(product, mat_pow(m, e))
        delta = mat_sub(product, identity(deg))
        value = det(delta)
        assert value.denominator == 1, "determinant of an integral matrix must be an integer"
        if value == 0:
            return INFINITE
        total *= abs(int(value)) ** mult
    return PeriodicCount(total)
