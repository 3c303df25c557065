"""Descriptor model for algebraic Z^d-actions of entropy rank one.

A descriptor is a JSON document naming one or more building blocks
(components), each of which expands into a finite list of characters.  A
character records, for one absolute value of the acting coefficient data,
the exact vector of logarithmic sizes of the d commuting generators.  Every
later computation (periodic counts, pole data, the expansive-subdynamics
portrait) consumes the character lists rather than the raw descriptor.

Three component classes are supported:

- ``s_integer``: d nonzero rationals acting on a ring of S-integers.
- ``number_field_units``: d units of the ring of integers of a number
  field, given by coordinate vectors in the power basis of a defining
  monic integer polynomial.  Coordinates may be rational since the ring
  of integers need not be generated by the defining root.
- ``function_field``: d nonzero rational functions over F_p acting in
  positive characteristic.

The archimedean characters of a component go into the V list, the
nonarchimedean ones into W.  Orderings are deterministic: components in
descriptor order, embeddings in certified root order, finite primes
ascending, finite places sorted by degree then coefficients with the
infinite place last.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import numberfield as nf
from .balls import ComplexBall, RealBall, default_precision, max_precision
from .errors import DescriptorError, UndecidedError
from .exactlog import ExactLog, log_dot, vector_is_zero
from .fppoly import (
    FpPoly,
    FpRationalFunction,
    fp_ord_at,
    fp_ord_infinity,
    parse_rational_function,
)
from .linalg import ball_det, rank
from .rationals import factor_fraction, is_prime

ARCHIMEDEAN = "archimedean"
NONARCHIMEDEAN = "nonarchimedean"

ERGODIC = "ergodic"
NON_ERGODIC = "non-ergodic"
ERGODICITY_UNDECIDED = "undecided"


def _parse_rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise DescriptorError(path, "expected a rational number, got a boolean")
    if isinstance(value, (int, str, Fraction)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DescriptorError(path, f"invalid rational {value!r}: {exc}") from None
    raise DescriptorError(path, f"expected a rational written as a string or integer, got {type(value).__name__}")


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise DescriptorError(path, f"missing required field {key!r}")
    return mapping[key]


def _reject_unknown(mapping: dict, allowed: Sequence[str], path: str) -> None:
    for key in mapping:
        if key not in allowed:
            raise DescriptorError(f"{path}.{key}" if path else key, "unknown field")


class Character:
    """One absolute value of the coefficient data, as exact log sizes.

    log_vector[i] is the exact logarithm of the size of the i-th commuting
    generator under this absolute value.  Archimedean characters also know
    the underlying complex values; nonarchimedean ones only carry sizes.
    """

    __slots__ = (
        "kind",
        "log_vector",
        "source",
        "component_index",
        "multiplicity",
        "_values",
    )

    def __init__(
        self,
        kind: str,
        log_vector: Sequence[ExactLog],
        source: dict,
        component_index: int,
        multiplicity: int,
        values=None,
    ):
        self.kind = kind
        self.log_vector = tuple(log_vector)
        self.source = source
        self.component_index = component_index
        self.multiplicity = multiplicity
        self._values = values

    @property
    def is_archimedean(self) -> bool:
        return self.kind == ARCHIMEDEAN

    def log_linear_form(self, v: Sequence) -> ExactLog:
        """Exact value of sum_i v_i * log size(generator_i), v rational."""
        coeffs = [Fraction(x) for x in v]
        if len(coeffs) != len(self.log_vector):
            raise ValueError("direction has the wrong dimension")
        return log_dot(coeffs, self.log_vector)

    def chi_star(self, v: Sequence, prec: int) -> RealBall:
        """Size of the character on the group element v, as exp of the log form."""
        return self.log_linear_form(v).evaluate(prec).exp(prec)

    def complex_values(self, prec: int) -> Tuple[ComplexBall, ...]:
        """The d complex generator values (archimedean characters only)."""
        if self._values is None:
            raise ValueError("nonarchimedean characters have no complex values")
        tag = self._values[0]
        if tag == "rational":
            return tuple(
                ComplexBall.from_fractions(r, Fraction(0), prec) for r in self._values[1]
            )
        min_poly, emb_index, gens = self._values[1], self._values[2], self._values[3]
        emb = nf.isolate_roots(min_poly, prec)[emb_index]
        return tuple(nf.embed(g, emb, prec) for g in gens)

    def rational_values(self) -> Optional[Tuple[Fraction, ...]]:
        """Exact generator values when the character is rational, else None."""
        if self._values is not None and self._values[0] == "rational":
            return tuple(self._values[1])
        return None

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "component": self.component_index,
            "multiplicity": self.multiplicity,
            "source": self.source,
            "log_vector": [w.atoms_json() for w in self.log_vector],
        }

    def __repr__(self):
        return f"Character({self.kind}, comp {self.component_index}, {self.source})"


def zero_test(chi: Character, v: Sequence, max_prec: Optional[int] = None) -> str:
    """'zero', 'nonzero', or 'undecided' for the log form of chi at v."""
    verdict = chi.log_linear_form(v).is_zero(max_prec)
    if verdict is True:
        return "zero"
    if verdict is False:
        return "nonzero"
    return "undecided"


class SIntegerComponent:
    """d nonzero rationals; one archimedean character, one per relevant prime."""

    kind = "s_integer"

    def __init__(self, generators: Sequence[Fraction], path: str):
        gens = tuple(generators)
        for i, r in enumerate(gens):
            if r == 0:
                raise DescriptorError(f"{path}.generators[{i}]", "generator must be nonzero")
        self.generators = gens

    @property
    def d(self) -> int:
        return len(self.generators)

    def s_primes(self) -> Tuple[int, ...]:
        primes = set()
        for r in self.generators:
            primes.update(factor_fraction(r))
        return tuple(sorted(primes))

    def characters(self, component_index: int, multiplicity: int) -> Tuple[List[Character], List[Character]]:
        arch = Character(
            ARCHIMEDEAN,
            [ExactLog.from_rational(r) for r in self.generators],
            {"place": "archimedean"},
            component_index,
            multiplicity,
            values=("rational", self.generators),
        )
        nonarch = []
        for p in self.s_primes():
            log_p = ExactLog.from_rational(Fraction(p))
            vec = []
            for r in self.generators:
                ordp = factor_fraction(r).get(p, 0)
                vec.append(log_p.scale(Fraction(-ordp)))
            nonarch.append(
                Character(
                    NONARCHIMEDEAN,
                    vec,
                    {"place": str(p)},
                    component_index,
                    multiplicity,
                )
            )
        return [arch], nonarch

    def power_product(self, exponents: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for r, e in zip(self.generators, exponents):
            out *= r ** e
        return out

    def ergodicity(self) -> str:
        # A relation prod r_i^{k_i} = 1 forces prod |r_i|^{k_i} = 1, and
        # conversely prod |r_i|^{k_i} = 1 gives the relation with 2k.  So
        # ergodicity is exactly full rank of the prime exponent matrix.
        primes = self.s_primes()
        rows = []
        for r in self.generators:
            fac = factor_fraction(r)
            rows.append([Fraction(fac.get(p, 0)) for p in primes])
        if not primes:
            return NON_ERGODIC if self.generators else ERGODIC
        return ERGODIC if rank(rows) == self.d else NON_ERGODIC

    def canonical(self, multiplicity: int) -> dict:
        return {
            "class": self.kind,
            "multiplicity": multiplicity,
            "generators": [str(r) for r in self.generators],
        }


class NumberFieldUnitsComponent:
    """d units of the ring of integers of Q[x]/(min_poly).

    Every embedding of the field contributes one archimedean character;
    unit generators make all finite places bounded, so W is empty.
    """

    kind = "number_field_units"

    def __init__(self, min_poly: Sequence[int], generators: Sequence[Sequence], path: str):
        try:
            self.field = nf.NumberFieldSpec(min_poly)
        except ValueError as exc:
            raise DescriptorError(f"{path}.min_poly", str(exc)) from None
        gens = []
        for i, coeffs in enumerate(generators):
            gpath = f"{path}.generators[{i}]"
            if not isinstance(coeffs, (list, tuple)):
                raise DescriptorError(gpath, "expected a coefficient vector")
            vals = [_parse_rational(c, f"{gpath}[{j}]") for j, c in enumerate(coeffs)]
            try:
                g = nf.el_from_coeffs(self.field, vals)
            except ValueError as exc:
                raise DescriptorError(gpath, str(exc)) from None
            if all(c == 0 for c in g):
                raise DescriptorError(gpath, "generator must be nonzero")
            if not nf.is_unit(self.field, g):
                raise DescriptorError(gpath, "generator is not a unit of the ring of integers")
            gens.append(g)
        self.generators: Tuple[nf.Element, ...] = tuple(gens)
        self._identities = None

    @property
    def d(self) -> int:
        return len(self.generators)

    def _root_identities(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """Per generator: its integer minimal polynomial and, per embedding
        of the field, the index of its value among that polynomial's roots."""
        if self._identities is not None:
            return self._identities
        out = []
        for g in self.generators:
            charpoly = nf.element_charpoly(self.field, g)
            int_cp = []
            for c in charpoly:
                if c.denominator != 1:
                    raise ValueError("unit with non-integral characteristic polynomial")
                int_cp.append(int(c))
            factors = nf.factor_monic_int(tuple(int_cp))
            if len(factors) != 1:
                raise RuntimeError("characteristic polynomial of a field element must be a prime power")
            min_poly = next(iter(factors))
            if len(min_poly) == 2:
                out.append((min_poly, tuple(0 for _ in range(self.field.degree))))
                continue
            prec = default_precision()
            while True:
                field_roots = nf.isolate_roots(self.field.min_poly, prec)
                g_roots = nf.isolate_roots(min_poly, prec)
                indices = []
                for emb in field_roots:
                    val = nf.embed(g, emb, prec)
                    hits = [k for k, r in enumerate(g_roots) if not val.box_disjoint(r.box)]
                    if len(hits) != 1:
                        indices = None
                        break
                    indices.append(hits[0])
                if indices is not None:
                    out.append((min_poly, tuple(indices)))
                    break
                prec *= 2
                if prec > max_precision():
                    raise UndecidedError("matching a generator value to a root of its minimal polynomial")
        self._identities = out
        return out

    def characters(self, component_index: int, multiplicity: int) -> Tuple[List[Character], List[Character]]:
        identities = self._root_identities()
        embeddings = nf.isolate_roots(self.field.min_poly, default_precision())
        arch = []
        for k, emb in enumerate(embeddings):
            vec = [
                ExactLog.from_root_abs(min_poly, indices[k])
                for (min_poly, indices) in identities
            ]
            arch.append(
                Character(
                    ARCHIMEDEAN,
                    vec,
                    {
                        "place": "archimedean",
                        "embedding_index": k,
                        "real": emb.is_real,
                    },
                    component_index,
                    multiplicity,
                    values=("embedding", self.field.min_poly, k, self.generators),
                )
            )
        return arch, []

    def power_product(self, exponents: Sequence[int]) -> nf.Element:
        out = nf.el_one(self.field)
        for g, e in zip(self.generators, exponents):
            if e:
                out = nf.el_mul(self.field, out, nf.el_pow(self.field, g, e))
        return out

    def ergodicity(self) -> Tuple[str, List[str]]:
        # Full real rank of the embedding log matrix certifies that no
        # nontrivial power product has all absolute values 1, hence no
        # relation.  Rank defect cannot be certified by intervals, so the
        # failure mode is an honest warning.
        veclists, _ = self.characters(0, 1)
        vectors = [c.log_vector for c in veclists]
        live = [w for w in vectors if vector_is_zero(w, default_precision()) is not True]
        if len(live) < self.d:
            return ERGODICITY_UNDECIDED, [
                "embedding log matrix has too few certifiably nonzero rows; ergodicity undecided"
            ]
        prec = default_precision()
        while prec <= max_precision():
            rows = [[w.evaluate(prec) for w in vec] for vec in live]
            if _ball_rank_at_least(rows, self.d, prec):
                return ERGODIC, []
            prec *= 2
        return ERGODICITY_UNDECIDED, [
            "embedding log matrix rank not certified at the precision cap; ergodicity undecided"
        ]

    def canonical(self, multiplicity: int) -> dict:
        return {
            "class": self.kind,
            "multiplicity": multiplicity,
            "min_poly": [int(c) for c in self.field.min_poly],
            "generators": [[str(c) for c in g] for g in self.generators],
        }


def _ball_rank_at_least(rows: List[List[RealBall]], target: int, prec: int) -> bool:
    """True when some target x target minor is certified nonzero."""
    import itertools

    n = len(rows)
    cols = len(rows[0]) if rows else 0
    if n < target or cols < target:
        return False
    for rsel in itertools.combinations(range(n), target):
        for csel in itertools.combinations(range(cols), target):
            sub = [[rows[i][j] for j in csel] for i in rsel]
            det = ball_det(sub, prec)
            if not det.contains_zero():
                return True
    return False


class FunctionFieldComponent:
    """d nonzero rational functions in F_p(t); all characters nonarchimedean."""

    kind = "function_field"

    def __init__(self, characteristic: int, generators: Sequence, path: str):
        if not isinstance(characteristic, int) or isinstance(characteristic, bool):
            raise DescriptorError(f"{path}.characteristic", "expected a prime integer")
        if not is_prime(characteristic):
            raise DescriptorError(f"{path}.characteristic", f"{characteristic} is not prime")
        self.p = characteristic
        gens = []
        for i, text in enumerate(generators):
            gpath = f"{path}.generators[{i}]"
            if not isinstance(text, str):
                raise DescriptorError(gpath, "expected a rational function written as a string")
            try:
                g = parse_rational_function(text, characteristic)
            except ValueError as exc:
                raise DescriptorError(gpath, str(exc)) from None
            if g.is_zero():
                raise DescriptorError(gpath, "generator must be nonzero")
            gens.append(g)
        self.generators: Tuple[FpRationalFunction, ...] = tuple(gens)

    @property
    def d(self) -> int:
        return len(self.generators)

    def finite_places(self) -> Tuple[FpPoly, ...]:
        places = set()
        for g in self.generators:
            for part in (g.num, g.den):
                for pi in part.factor():
                    if pi.degree >= 1:
                        places.add(pi)
        marked = [pi for pi in places if any(fp_ord_at(g, pi) != 0 for g in self.generators)]
        marked.sort(key=lambda pi: (pi.degree, tuple(pi.coeffs)))
        return tuple(marked)

    def infinite_place_needed(self) -> bool:
        return any(fp_ord_infinity(g) != 0 for g in self.generators)

    def characters(self, component_index: int, multiplicity: int) -> Tuple[List[Character], List[Character]]:
        log_p = ExactLog.from_rational(Fraction(self.p))
        nonarch = []
        checksum = [0] * self.d
        for pi in self.finite_places():
            deg = pi.degree
            vec = []
            for i, g in enumerate(self.generators):
                o = fp_ord_at(g, pi)
                checksum[i] += o * deg
                vec.append(log_p.scale(Fraction(-o * deg)))
            nonarch.append(
                Character(
                    NONARCHIMEDEAN,
                    vec,
                    {"place": pi.format()},
                    component_index,
                    multiplicity,
                )
            )
        if self.infinite_place_needed():
            vec = []
            for i, g in enumerate(self.generators):
                o = fp_ord_infinity(g)
                checksum[i] += o
                vec.append(log_p.scale(Fraction(-o)))
            nonarch.append(
                Character(
                    NONARCHIMEDEAN,
                    vec,
                    {"place": "infinity"},
                    component_index,
                    multiplicity,
                )
            )
        # product formula: total degree-weighted order vanishes per generator
        assert all(c == 0 for c in checksum), "place orders violate the product formula"
        return [], nonarch

    def power_product(self, exponents: Sequence[int]) -> FpRationalFunction:
        out = FpRationalFunction.one(self.p)
        for g, e in zip(self.generators, exponents):
            if e:
                out = out.mul(g.pow(e))
        return out

    def ergodicity(self) -> str:
        # prod g_i^{k_i} = 1 forces zero order at every place; conversely a
        # kernel vector of the order matrix makes the product a constant in
        # F_p^*, and scaling by p-1 yields an honest relation.  The order
        # matrix rank decides exactly.
        places = self.finite_places()
        rows = []
        for g in self.generators:
            row = [Fraction(fp_ord_at(g, pi) * pi.degree) for pi in places]
            row.append(Fraction(fp_ord_infinity(g)))
            rows.append(row)
        return ERGODIC if rank(rows) == self.d else NON_ERGODIC

    def canonical(self, multiplicity: int) -> dict:
        return {
            "class": self.kind,
            "multiplicity": multiplicity,
            "characteristic": self.p,
            "generators": [_format_rational_function(g) for g in self.generators],
        }


def _format_rational_function(g: FpRationalFunction) -> str:
    if g.den.is_one():
        return g.num.format()
    return f"({g.num.format()})/({g.den.format()})"


Component = Union[SIntegerComponent, NumberFieldUnitsComponent, FunctionFieldComponent]


class SystemDescriptor:
    """A validated descriptor plus its expanded character data."""

    def __init__(self, label: str, d: int, components: Sequence[Tuple[Component, int]]):
        self.label = label
        self.d = d
        self.components = tuple(components)
        self._characters: Optional[Tuple[Tuple[Character, ...], Tuple[Character, ...]]] = None

    def characters(self) -> Tuple[Tuple[Character, ...], Tuple[Character, ...]]:
        """(V, W): archimedean and nonarchimedean character lists."""
        if self._characters is None:
            arch: List[Character] = []
            nonarch: List[Character] = []
            for index, (comp, mult) in enumerate(self.components):
                a, w = comp.characters(index, mult)
                arch.extend(a)
                nonarch.extend(w)
            self._characters = (tuple(arch), tuple(nonarch))
        return self._characters

    def all_characters(self) -> Tuple[Character, ...]:
        arch, nonarch = self.characters()
        return arch + nonarch

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "d": self.d,
            "components": [comp.canonical(mult) for comp, mult in self.components],
        }

    def json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    def descriptor_hash(self) -> str:
        return hashlib.sha256(self.json_text().encode("utf-8")).hexdigest()

    def ergodicity(self) -> Tuple[str, List[str]]:
        """Overall status plus any warnings from undecided components."""
        statuses = []
        warnings: List[str] = []
        for index, (comp, _) in enumerate(self.components):
            result = comp.ergodicity()
            if isinstance(result, tuple):
                status, notes = result
                warnings.extend(f"components[{index}]: {note}" for note in notes)
            else:
                status = result
            statuses.append(status)
        if any(s == NON_ERGODIC for s in statuses):
            return NON_ERGODIC, warnings
        if all(s == ERGODIC for s in statuses):
            return ERGODIC, warnings
        return ERGODICITY_UNDECIDED, warnings


def parse_descriptor(data: Union[str, bytes, dict]) -> SystemDescriptor:
    """Validate a descriptor document (JSON text or parsed dict)."""
    if isinstance(data, (str, bytes)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DescriptorError("", f"invalid JSON: {exc}") from None
    else:
        doc = data
    if not isinstance(doc, dict):
        raise DescriptorError("", "descriptor must be a JSON object")
    _reject_unknown(doc, ("label", "d", "components"), "")

    label = doc.get("label", "")
    if not isinstance(label, str):
        raise DescriptorError("label", "must be a string")

    d = _require(doc, "d", "")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise DescriptorError("d", "must be a positive integer")

    comps_doc = _require(doc, "components", "")
    if not isinstance(comps_doc, list) or not comps_doc:
        raise DescriptorError("components", "must be a nonempty list")

    components: List[Tuple[Component, int]] = []
    for i, cdoc in enumerate(comps_doc):
        path = f"components[{i}]"
        if not isinstance(cdoc, dict):
            raise DescriptorError(path, "must be an object")
        cls = _require(cdoc, "class", path)
        mult = cdoc.get("multiplicity", 1)
        if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
            raise DescriptorError(f"{path}.multiplicity", "must be a positive integer")

        if cls == "s_integer":
            _reject_unknown(cdoc, ("class", "multiplicity", "generators"), path)
            gens_doc = _require(cdoc, "generators", path)
            if not isinstance(gens_doc, list):
                raise DescriptorError(f"{path}.generators", "must be a list")
            gens = [
                _parse_rational(g, f"{path}.generators[{j}]") for j, g in enumerate(gens_doc)
            ]
            comp: Component = SIntegerComponent(gens, path)
        elif cls == "number_field_units":
            _reject_unknown(cdoc, ("class", "multiplicity", "min_poly", "generators"), path)
            mp_doc = _require(cdoc, "min_poly", path)
            if not isinstance(mp_doc, list) or not all(
                isinstance(c, int) and not isinstance(c, bool) for c in mp_doc
            ):
                raise DescriptorError(f"{path}.min_poly", "must be a list of integers (ascending, monic)")
            gens_doc = _require(cdoc, "generators", path)
            if not isinstance(gens_doc, list):
                raise DescriptorError(f"{path}.generators", "must be a list")
            comp = NumberFieldUnitsComponent(mp_doc, gens_doc, path)
        elif cls == "function_field":
            _reject_unknown(cdoc, ("class", "multiplicity", "characteristic", "generators"), path)
            char = _require(cdoc, "characteristic", path)
            gens_doc = _require(cdoc, "generators", path)
            if not isinstance(gens_doc, list):
                raise DescriptorError(f"{path}.generators", "must be a list")
            comp = FunctionFieldComponent(char, gens_doc, path)
        else:
            raise DescriptorError(f"{path}.class", f"unknown component class {cls!r}")

        if comp.d != d:
            raise DescriptorError(
                f"{path}.generators", f"expected {d} generators for a Z^{d}-action, got {comp.d}"
            )
        components.append((comp, mult))

    return SystemDescriptor(label, d, components)


def fixture_names() -> List[str]:
    root = resources.files("rankone").joinpath("fixtures")
    return sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> SystemDescriptor:
    """Load one of the packaged example descriptors by name."""
    path = resources.files("rankone").joinpath("fixtures").joinpath(f"{name}.json")
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise DescriptorError("", f"no packaged descriptor named {name!r}; known: {', '.join(fixture_names())}") from None
    return parse_descriptor(text)
