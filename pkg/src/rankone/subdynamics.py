"""Directional portrait of an action: where it fails to be expansive.

Every character contributes a log-size linear form on direction space.  A
direction is expansive exactly when no form vanishes there, so the
non-expansive locus is a finite union of hyperplanes through the origin,
one per character with a nonzero log-vector.  Hyperplanes are labeled by
their source: `variety` for archimedean characters, `noetherian` for
nonarchimedean ones.  A character whose whole log-vector is zero kills
expansiveness everywhere; it is reported as a degenerate flag instead of a
hyperplane.

On the unit sphere the pole/zero data of the direction zeta functions is
carried by the branch functions

    f_L(v) = prod_{chi nonarch} max(chi*(-v), 1) * prod_{chi in L} chi*(-v)

indexed by multisets L of archimedean characters.  Two branches cross where
a signed combination of archimedean log-vectors vanishes (the crossing
set), and the common nonarchimedean prefactor is non-smooth exactly on the
noetherian hyperplanes (the non-smooth set).  Directional entropy is the
log of the largest branch value, scaled by the direction length; summing
max(0, -n.w_chi) over characters computes it exactly.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .balls import RealBall
from .errors import UndecidedError
from .exactlog import ExactLog, log_dot, vector_is_zero, vectors_parallel
from .system import Character, SystemDescriptor

VARIETY = "variety"
NOETHERIAN = "noetherian"
CROSSING_ONLY = "crossing-only"

INVERSE_ROOT = "inverse-root"
ROOT_LOCATION = "root-location"
CONVENTIONS = (INVERSE_ROOT, ROOT_LOCATION)

# The minimal-branch variant of directional entropy contradicts the exact
# period counts on every bundled system, so only the maximal branch is
# implemented; the note travels with entropy output.
ENTROPY_NOTE = (
    "directional entropy is the length-scaled log of the maximal branch "
    "value; the minimal-branch variant is inconsistent with exact period "
    "counts and is not provided"
)


class LabeledHyperplane:
    """A hyperplane {v : normal . v = 0} with its algebraic provenance.

    The normal is a vector of exact log combinations.  It is never
    certifiably zero; a normal whose zero test stays open at the precision
    cap is kept with `undecided` set rather than dropped.
    """

    __slots__ = ("normal", "label", "sources", "undecided")

    def __init__(
        self,
        normal: Sequence[ExactLog],
        label: str,
        sources: tuple,
        undecided: bool = False,
    ):
        if label not in (VARIETY, NOETHERIAN, CROSSING_ONLY):
            raise ValueError(f"unknown hyperplane label {label!r}")
        self.normal = tuple(normal)
        self.label = label
        self.sources = sources
        self.undecided = undecided

    def form_value(self, v: Sequence, prec: int = 64) -> RealBall:
        """Enclosure of normal . v for a float or rational direction."""
        coeffs = [Fraction(x) for x in v]
        if len(coeffs) != len(self.normal):
            raise ValueError("direction has the wrong dimension")
        return log_dot(coeffs, self.normal).evaluate(prec)

    def contains(self, v: Sequence, prec: int = 64, tol: Optional[float] = None) -> bool:
        """Whether v may lie on the hyperplane, within tol of the form value."""
        if tol is None:
            tol = 2.0 ** -(prec // 2)
        lo, hi = self.form_value(v, prec).float_bounds()
        return not (lo > tol or hi < -tol)

    def parallel_to(self, other: Sequence[ExactLog], max_prec: Optional[int] = None) -> str:
        """'parallel' | 'not-parallel' | 'undecided' against another normal."""
        normal = other.normal if isinstance(other, LabeledHyperplane) else tuple(other)
        return vectors_parallel(self.normal, normal, max_prec)

    def normal_floats(self, prec: int = 64) -> Tuple[float, ...]:
        return tuple(entry.evaluate(prec).mid_float() for entry in self.normal)

    def to_json(self, prec: int = 64) -> dict:
        return {
            "label": self.label,
            "normal_float": [_round12(x) for x in self.normal_floats(prec)],
            "normal_atoms": [entry.atoms_json() for entry in self.normal],
            "sources": list(self.sources),
            "undecided": self.undecided,
        }

    def __repr__(self):
        return f"LabeledHyperplane({self.label}, normal~{self.normal_floats()})"


def _round12(x: float) -> float:
    # fixed 12-significant-digit rendering keeps emitted JSON byte-stable
    return float(f"{x:.12e}")


def _character_ref(set_name: str, index: int, chi: Character) -> dict:
    ref = {"set": set_name, "index": index}
    ref.update(chi.source)
    return ref


def nonexpansive_hyperplanes(
    sys: SystemDescriptor, max_prec: Optional[int] = None
) -> List[LabeledHyperplane]:
    """One labeled hyperplane per character with nonzero log-vector.

    Characters whose log-vector is certifiably zero are skipped here; they
    are surfaced by degenerate_characters and as a portrait warning.
    """
    V, W = sys.characters()
    out: List[LabeledHyperplane] = []
    for set_name, label, chars in (("V", VARIETY, V), ("W", NOETHERIAN, W)):
        for i, chi in enumerate(chars):
            verdict = vector_is_zero(chi.log_vector, max_prec)
            if verdict is True:
                continue
            out.append(
                LabeledHyperplane(
                    chi.log_vector,
                    label,
                    (_character_ref(set_name, i, chi),),
                    undecided=(verdict is None),
                )
            )
    return out


def degenerate_characters(
    sys: SystemDescriptor, max_prec: Optional[int] = None
) -> List[dict]:
    """Characters with certifiably zero log-vectors (non-expansive everywhere)."""
    V, W = sys.characters()
    out = []
    for set_name, chars in (("V", V), ("W", W)):
        for i, chi in enumerate(chars):
            if vector_is_zero(chi.log_vector, max_prec) is True:
                out.append(_character_ref(set_name, i, chi))
    return out


def nonsmooth_set(
    sys: SystemDescriptor, max_prec: Optional[int] = None
) -> List[LabeledHyperplane]:
    """Exactly the noetherian hyperplanes: the common prefactor of every
    branch is max(chi*, 1) over nonarchimedean characters, smooth away from
    their vanishing loci and kinked on them."""
    return [h for h in nonexpansive_hyperplanes(sys, max_prec) if h.label == NOETHERIAN]


def _signed_combinations(sys: SystemDescriptor):
    """Yield (epsilon, normal) over signed archimedean multisets, mod sign.

    epsilon ranges over integer vectors with |epsilon_i| <= multiplicity_i,
    excluding zero, first nonzero entry positive.  epsilon encodes the pair
    of branch multisets J = positive part, L = negative part; the branches
    f_J and f_L cross where the combined log form vanishes.
    """
    V, _ = sys.characters()
    if not V:
        return
    ranges = [range(-chi.multiplicity, chi.multiplicity + 1) for chi in V]
    for eps in itertools.product(*ranges):
        first = next((e for e in eps if e != 0), None)
        if first is None or first < 0:
            continue
        normal = []
        for j in range(sys.d):
            entry = ExactLog.zero()
            for e, chi in zip(eps, V):
                if e:
                    entry = entry.add(chi.log_vector[j].scale(e))
            normal.append(entry)
        yield eps, tuple(normal)


def _pair_source(eps: Tuple[int, ...]) -> dict:
    plus = [i for i, e in enumerate(eps) for _ in range(max(e, 0))]
    minus = [i for i, e in enumerate(eps) for _ in range(max(-e, 0))]
    return {"J": plus, "L": minus}


def crossing_set(
    sys: SystemDescriptor, max_prec: Optional[int] = None
) -> List[LabeledHyperplane]:
    """Hyperplanes where two branch functions cross.

    A signed combination with certifiably zero normal means the two
    branches coincide globally; those are reported by
    crossing_coincidences, not here.  Zero tests open at the precision cap
    keep the hyperplane with the undecided flag set.
    """
    out: List[LabeledHyperplane] = []
    for eps, normal in _signed_combinations(sys):
        verdict = vector_is_zero(normal, max_prec)
        if verdict is True:
            continue
        out.append(
            LabeledHyperplane(
                normal,
                CROSSING_ONLY,
                (_pair_source(eps),),
                undecided=(verdict is None),
            )
        )
    return out


def crossing_coincidences(
    sys: SystemDescriptor, max_prec: Optional[int] = None
) -> List[dict]:
    """Branch pairs whose difference form is certifiably zero everywhere."""
    out = []
    for eps, normal in _signed_combinations(sys):
        if vector_is_zero(normal, max_prec) is True:
            out.append(_pair_source(eps))
    return out


# --------------------------------------------------------------------------
# branch functions on the unit sphere


def _check_unit(v: Sequence, prec: int) -> Tuple[Fraction, ...]:
    coeffs = tuple(Fraction(x) for x in v)
    tol = Fraction(1, 2 ** (prec // 2))
    norm2 = sum(c * c for c in coeffs)
    if abs(norm2 - 1) > tol:
        raise ValueError(f"direction is not a unit vector: |v|^2 = {float(norm2)}")
    return coeffs


def branch_subsets(sys: SystemDescriptor) -> List[Tuple[int, ...]]:
    """All archimedean multisets L, as sorted index tuples with repetition.

    The list has prod(multiplicity + 1) entries; with no archimedean
    characters it is just (empty,) and there is a single branch.
    """
    V, _ = sys.characters()
    ranges = [range(chi.multiplicity + 1) for chi in V]
    out = []
    for ks in itertools.product(*ranges):
        out.append(tuple(i for i, k in enumerate(ks) for _ in range(k)))
    return out


def f_eval(
    sys: SystemDescriptor, L: Sequence[int], v: Sequence, prec: int = 64
) -> RealBall:
    """One branch value at a unit direction, outward rounded.

    L is a multiset of archimedean character indices (repetitions up to the
    character multiplicity).  |v| must equal 1 within 2^(-prec/2).
    """
    V, W = sys.characters()
    coeffs = _check_unit(v, prec)
    minus_v = [-c for c in coeffs]
    counts = Counter(L)
    for i, k in counts.items():
        if not 0 <= i < len(V):
            raise ValueError(f"no archimedean character with index {i}")
        if k > V[i].multiplicity:
            raise ValueError(f"index {i} repeated beyond its multiplicity")
    one = RealBall.one()
    total = one
    for chi in W:
        factor = chi.chi_star(minus_v, prec).max_with(one, prec)
        total = total.mul(factor.pow_int(chi.multiplicity, prec), prec)
    for i, k in sorted(counts.items()):
        total = total.mul(V[i].chi_star(minus_v, prec).pow_int(k, prec), prec)
    return total


def circle_directions(samples: int) -> List[Tuple[float, float]]:
    """Evenly spaced unit directions on the circle, starting at angle 0."""
    return [
        (math.cos(2 * math.pi * k / samples), math.sin(2 * math.pi * k / samples))
        for k in range(samples)
    ]


def sphere_directions(samples: int) -> List[Tuple[float, float, float]]:
    """samples x samples grid over (theta, phi), poles avoided."""
    out = []
    for j in range(samples):
        phi = math.pi * (j + 0.5) / samples
        sp, cp = math.sin(phi), math.cos(phi)
        for k in range(samples):
            theta = 2 * math.pi * k / samples
            out.append((math.cos(theta) * sp, math.sin(theta) * sp, cp))
    return out


def default_directions(sys: SystemDescriptor, samples: Optional[int] = None):
    if sys.d == 2:
        return circle_directions(samples if samples is not None else 720)
    if sys.d == 3:
        return sphere_directions(samples if samples is not None else 180)
    return []


def omega_samples(
    sys: SystemDescriptor,
    directions: Sequence[Sequence[float]],
    convention: str = INVERSE_ROOT,
    prec: int = 64,
) -> List[Tuple[Tuple[float, ...], Tuple[int, ...], RealBall]]:
    """All branch values at each direction: (direction, subset, value) rows.

    inverse-root reports f_L itself; root-location reports the reciprocal.
    Character log-vectors are evaluated once and reused across directions.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    V, W = sys.characters()
    wprec = prec + 8
    v_logs = [[entry.evaluate(wprec) for entry in chi.log_vector] for chi in V]
    w_logs = [[entry.evaluate(wprec) for entry in chi.log_vector] for chi in W]
    subsets = branch_subsets(sys)
    one = RealBall.one()
    out = []
    for direction in directions:
        direction = tuple(float(x) for x in direction)
        _check_unit(direction, prec)
        d_balls = [RealBall.from_float(x) for x in direction]
        g = one
        for chi, logs in zip(W, w_logs):
            form = RealBall.zero()
            for x, w in zip(d_balls, logs):
                form = form.add(x.mul(w, wprec), wprec)
            factor = form.neg().exp(prec).max_with(one, prec)
            g = g.mul(factor.pow_int(chi.multiplicity, prec), prec)
        arch_vals = []
        for logs in v_logs:
            form = RealBall.zero()
            for x, w in zip(d_balls, logs):
                form = form.add(x.mul(w, wprec), wprec)
            arch_vals.append(form.neg().exp(prec))
        for subset in subsets:
            value = g
            for i in subset:
                value = value.mul(arch_vals[i], prec)
            if convention == ROOT_LOCATION:
                value = value.recip(prec)
            out.append((direction, subset, value))
    return out


# --------------------------------------------------------------------------
# directional entropy


def directional_entropy_atoms(
    sys: SystemDescriptor, n: Sequence[int], max_prec: Optional[int] = None
) -> ExactLog:
    """Entropy of the single transformation at integer direction n, exactly.

    Sum over characters of multiplicity * max(0, -n.w); the sign of each
    form is decided exactly for prime-atom forms and by certified intervals
    otherwise.  An open sign at the precision cap raises UndecidedError.
    """
    n = tuple(int(x) for x in n)
    if len(n) != sys.d:
        raise ValueError("direction has the wrong dimension")
    if all(x == 0 for x in n):
        raise ValueError("entropy of the zero direction is undefined")
    total = ExactLog.zero()
    for chi in sys.all_characters():
        form = chi.log_linear_form(n).neg()
        sign = form.sign(max_prec)
        if sign == "positive":
            total = total.add(form.scale(chi.multiplicity))
        elif sign == "zero-undecided":
            raise UndecidedError(f"sign of the log form of {chi!r} at {n}")
    return total


def directional_entropy(
    sys: SystemDescriptor,
    n: Sequence[int],
    prec: int = 64,
    max_prec: Optional[int] = None,
) -> RealBall:
    """Certified enclosure of the entropy along integer direction n."""
    return directional_entropy_atoms(sys, n, max_prec).evaluate(prec)


# --------------------------------------------------------------------------
# assembled portrait


class DirectionPortrait:
    """The full directional picture of one system, immutably assembled."""

    __slots__ = (
        "system",
        "hyperplanes",
        "degenerate",
        "crossing",
        "coincidences",
        "branches",
        "omega",
        "convention",
        "precision",
        "warnings",
    )

    def __init__(self, system, hyperplanes, degenerate, crossing, coincidences,
                 branches, omega, convention, precision, warnings):
        self.system = system
        self.hyperplanes = tuple(hyperplanes)
        self.degenerate = tuple(degenerate)
        self.crossing = tuple(crossing)
        self.coincidences = tuple(coincidences)
        self.branches = tuple(branches)
        self.omega = tuple(omega)
        self.convention = convention
        self.precision = precision
        self.warnings = tuple(warnings)

    def variety(self) -> List[LabeledHyperplane]:
        return [h for h in self.hyperplanes if h.label == VARIETY]

    def noetherian(self) -> List[LabeledHyperplane]:
        return [h for h in self.hyperplanes if h.label == NOETHERIAN]

    def f_graphs(self) -> List[Tuple[Tuple[int, ...], Callable[[Sequence], RealBall]]]:
        def make(subset):
            return lambda v, prec=self.precision: f_eval(self.system, subset, v, prec)

        return [(subset, make(subset)) for subset in self.branches]

    def to_json(self) -> dict:
        prec = self.precision
        return {
            "descriptor_hash": self.system.descriptor_hash(),
            "label": self.system.label,
            "d": self.system.d,
            "convention": self.convention,
            "precision_bits": prec,
            "hyperplanes": [h.to_json(prec) for h in self.hyperplanes],
            "nonsmooth": [h.to_json(prec) for h in self.hyperplanes if h.label == NOETHERIAN],
            "crossing": [h.to_json(prec) for h in self.crossing],
            "coincidences": list(self.coincidences),
            "degenerate": list(self.degenerate),
            "branches": [list(s) for s in self.branches],
            "omega": [
                {
                    "direction": [_round12(x) for x in direction],
                    "branch": list(subset),
                    "value": [_round12(b) for b in value.float_bounds()],
                }
                for direction, subset, value in self.omega
            ],
            "warnings": list(self.warnings),
            "notes": [ENTROPY_NOTE],
        }


def build_portrait(
    sys: SystemDescriptor,
    directions: Optional[Sequence[Sequence[float]]] = None,
    convention: str = INVERSE_ROOT,
    prec: int = 64,
    max_prec: Optional[int] = None,
) -> DirectionPortrait:
    """Assemble hyperplanes, crossings, branch data and optional samples.

    directions=None skips omega sampling (structural portrait only); pass
    default_directions(sys) or an explicit grid for curves.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    hyperplanes = nonexpansive_hyperplanes(sys, max_prec)
    degenerate = degenerate_characters(sys, max_prec)
    crossing = crossing_set(sys, max_prec)
    coincidences = crossing_coincidences(sys, max_prec)
    branches = branch_subsets(sys)
    warnings = []
    if degenerate:
        warnings.append(
            "non-expansive in every direction: a character has zero log-vector"
        )
    if any(h.undecided for h in hyperplanes) or any(h.undecided for h in crossing):
        warnings.append("some zero tests stayed open at the precision cap")
    omega = (
        omega_samples(sys, directions, convention, prec) if directions else ()
    )
    return DirectionPortrait(
        sys, hyperplanes, degenerate, crossing, coincidences,
        branches, omega, convention, prec, warnings,
    )
