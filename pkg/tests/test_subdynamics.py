"""Expansive subdynamics: hyperplanes, crossings, branches, entropy, portraits."""

import json
import math
from fractions import Fraction

import pytest

from rankone import (
    branch_subsets,
    build_portrait,
    count,
    crossing_coincidences,
    crossing_set,
    degenerate_characters,
    directional_entropy,
    directional_entropy_atoms,
    f_eval,
    is_expansive_element,
    load_fixture,
    nonexpansive_hyperplanes,
    nonsmooth_set,
    omega_samples,
)
from rankone.exactlog import ExactLog
from rankone.subdynamics import ENTROPY_NOTE, default_directions

S23 = load_fixture("times2times3")
LED = load_fixture("ledrappier")
QUARTIC = load_fixture("sqrt2sqrt3")
T235 = load_fixture("times2times3times5")
SEXTIC = load_fixture("dk-sextic")

SQRT_HALF = math.sqrt(0.5)


def axis_pattern(h):
    return tuple(entry.is_trivially_zero() for entry in h.normal)


# --- non-expansive hyperplanes -------------------------------------------------

def test_times2times3_has_three_hyperplanes():
    planes = nonexpansive_hyperplanes(S23)
    assert len(planes) == 3
    assert not any(h.undecided for h in planes)
    variety = [h for h in planes if h.label == "variety"]
    noeth = [h for h in planes if h.label == "noetherian"]
    assert len(variety) == 1 and len(noeth) == 2
    # variety normal is exactly (log 2, log 3) at the atom level
    assert [w.prime_part for w in variety[0].normal] == [
        {2: Fraction(1)}, {3: Fraction(1)},
    ]
    # noetherian normals span the axes
    assert sorted(axis_pattern(h) for h in noeth) == [(False, True), (True, False)]


def test_times2times3_variety_normal_floats():
    variety = [h for h in nonexpansive_hyperplanes(S23) if h.label == "variety"][0]
    nx, ny = variety.normal_floats(64)
    # parallel to (log 2, log 3): the cross product vanishes to 1e-12
    assert abs(nx * math.log(3) - ny * math.log(2)) < 1e-12


def test_ledrappier_noetherian_lines_exact():
    planes = nonexpansive_hyperplanes(LED)
    assert len(planes) == 3
    assert all(h.label == "noetherian" for h in planes)
    assert len(nonsmooth_set(LED)) == 3
    forms = sorted(
        tuple(w.prime_part.get(2, Fraction(0)) for w in h.normal) for h in planes
    )
    # lines n1 = 0, n2 = 0, n1 + n2 = 0, each with log-2 atoms
    assert forms == [(-1, 0), (0, -1), (1, 1)]
    # the n1 + n2 = 0 line contains the direction (1, -1)/sqrt2
    diag = [h for h in planes if axis_pattern(h) == (False, False)][0]
    assert diag.contains((SQRT_HALF, -SQRT_HALF))
    assert not diag.contains((SQRT_HALF, SQRT_HALF))


def test_quartic_has_four_variety_planes():
    planes = nonexpansive_hyperplanes(QUARTIC)
    assert len(planes) == 4
    assert all(h.label == "variety" for h in planes)


def test_sextic_degenerate_characters_detected():
    degenerate = degenerate_characters(SEXTIC)
    assert len(degenerate) == 2
    planes = nonexpansive_hyperplanes(SEXTIC)
    assert len(planes) == 4  # 6 embeddings minus the zero-vector pair


# --- crossing set ----------------------------------------------------------------

def test_crossing_equals_variety_for_times2times3():
    crossing = crossing_set(S23)
    variety = [h for h in nonexpansive_hyperplanes(S23) if h.label == "variety"]
    assert len(crossing) == 1
    assert crossing_coincidences(S23) == []
    assert crossing[0].parallel_to(variety[0].normal) == "parallel"
    assert crossing[0].sources[0] == {"J": [0], "L": []}


def test_crossing_empty_for_ledrappier():
    assert crossing_set(LED) == []
    assert crossing_coincidences(LED) == []


def test_quartic_crossing_census():
    # 3^4 - 1 signed combinations, halved by global sign: 40 candidates
    crossing = crossing_set(QUARTIC)
    coincidences = crossing_coincidences(QUARTIC)
    assert len(crossing) == 36
    assert len(coincidences) == 4
    assert not any(h.undecided for h in crossing)
    # every coincidence is a certified syntactic zero of the signed atom sum
    V, _ = QUARTIC.characters()
    for pair in coincidences:
        for k in range(2):
            entry = ExactLog.zero()
            for i in pair["J"]:
                entry = entry.add(V[i].log_vector[k])
            for i in pair["L"]:
                entry = entry.sub(V[i].log_vector[k])
            assert entry.is_trivially_zero()


def test_quartic_strict_inclusion_witness():
    # the pair J = {1, 3}, L = {} crosses along v1 = 0, which is not one of
    # the four non-expansive planes; certified within a 256-bit cap
    crossing = crossing_set(QUARTIC, max_prec=256)
    axis = [h for h in crossing if axis_pattern(h) == (False, True)]
    assert axis
    witness = axis[0]
    assert witness.contains((0.0, 1.0), prec=256)
    # |normal_x| = 2 log(1 + sqrt 2)
    nx, ny = witness.normal_floats(64)
    assert ny == 0.0
    assert abs(abs(nx) - 2 * math.log(1 + math.sqrt(2))) < 1e-9
    for h in nonexpansive_hyperplanes(QUARTIC, max_prec=256):
        assert witness.parallel_to(h.normal, max_prec=256) == "not-parallel"
    assert is_expansive_element(QUARTIC, (0, 1), max_prec=256) is True


def test_sextic_crossing_census():
    crossing = crossing_set(SEXTIC)
    coincidences = crossing_coincidences(SEXTIC)
    assert len(crossing) == 324
    assert len(coincidences) == 40
    assert not any(h.undecided for h in crossing)


# --- branch functions -------------------------------------------------------------

def test_branch_subsets():
    assert branch_subsets(S23) == [(), (0,)]
    assert branch_subsets(LED) == [()]
    assert len(branch_subsets(QUARTIC)) == 16
    assert len(branch_subsets(SEXTIC)) == 64


def test_branch_values_times2times3():
    # prefactor g(-e1) = max(2, 1) * max(1, 1) = 2; the archimedean factor
    # at e1 is exp(-log 2) = 1/2
    assert f_eval(S23, (), (1.0, 0.0)).contains_fraction(2)
    assert f_eval(S23, (0,), (1.0, 0.0)).contains_fraction(1)
    diag = f_eval(S23, (), (SQRT_HALF, SQRT_HALF))
    assert abs(diag.mid_float() - 6 ** SQRT_HALF) < 1e-9


def test_branch_values_ledrappier():
    val = f_eval(LED, (), (SQRT_HALF, SQRT_HALF))
    assert abs(val.mid_float() - 4 ** SQRT_HALF) < 1e-9


def test_f_eval_validates_inputs():
    with pytest.raises(ValueError):
        f_eval(S23, (), (1.0, 1.0))          # not a unit vector
    with pytest.raises(ValueError):
        f_eval(S23, (0, 0), (1.0, 0.0))      # repetition beyond multiplicity
    with pytest.raises(ValueError):
        f_eval(S23, (7,), (1.0, 0.0))        # no such character


def test_omega_convention_duality():
    directions = [(1.0, 0.0), (SQRT_HALF, SQRT_HALF), (0.0, -1.0)]
    inv = omega_samples(S23, directions, "inverse-root")
    loc = omega_samples(S23, directions, "root-location")
    assert len(inv) == len(loc) == 6
    for (va, sa, a), (vb, sb, b) in zip(inv, loc):
        assert va == vb and sa == sb
        assert a.mul(b, 64).contains_fraction(1)


def test_omega_rejects_unknown_convention():
    with pytest.raises(ValueError):
        omega_samples(S23, [(1.0, 0.0)], "midpoint")


def test_default_directions_dimension():
    assert len(default_directions(S23)) == 720
    assert len(default_directions(T235)) == 180 * 180
    for v in default_directions(T235)[:5]:
        assert abs(sum(x * x for x in v) - 1) < 1e-9


# --- directional entropy ------------------------------------------------------------

def test_entropy_times2times3():
    atoms = directional_entropy_atoms(S23, (1, 1))
    assert atoms.prime_part == {2: Fraction(1), 3: Fraction(1)}  # log 6
    atoms = directional_entropy_atoms(S23, (1, -1))
    assert atoms.prime_part == {3: Fraction(1)}                  # log 3
    ball = directional_entropy(S23, (1, 1))
    assert ball.contains_fraction(0) is False
    assert ball.relative_width() <= 1e-10


def test_entropy_ledrappier():
    atoms = directional_entropy_atoms(LED, (1, 1))
    assert atoms.prime_part == {2: Fraction(2)}                  # 2 log 2
    assert directional_entropy_atoms(LED, (1, 0)).prime_part == {2: Fraction(1)}


def test_entropy_scales_linearly():
    a = directional_entropy_atoms(S23, (1, 1))
    b = directional_entropy_atoms(S23, (3, 3))
    assert b.sub(a.scale(3)).is_trivially_zero()


def test_entropy_validates_direction():
    with pytest.raises(ValueError):
        directional_entropy_atoms(S23, (0, 0))
    with pytest.raises(ValueError):
        directional_entropy_atoms(S23, (1, 0, 0))


def test_entropy_matches_count_growth():
    # log(F_(j+1) / F_j) converges to the entropy; the clean geometric cases
    # are tight already at j = 20, the mixed-branch case shrinks with j
    def growth_error(sys_, n, j):
        fj = count(sys_, n, j).value
        fj1 = count(sys_, n, j + 1).value
        h = directional_entropy(sys_, n).mid_float()
        return abs((math.log(fj1) - math.log(fj)) - h) / h

    assert growth_error(S23, (1, 1), 20) <= 1e-9
    assert growth_error(LED, (1, 1), 20) <= 1e-9
    mixed20 = growth_error(S23, (2, -1), 20)
    mixed40 = growth_error(S23, (2, -1), 40)
    assert mixed40 < mixed20
    assert mixed40 <= (3 / 4) ** 40  # branch gap (3/4)^j dominates the error


# --- assembled portrait ----------------------------------------------------------------

def test_portrait_json_shape_and_determinism():
    portrait = build_portrait(S23, directions=[(1.0, 0.0), (0.0, 1.0)])
    doc = portrait.to_json()
    assert doc["descriptor_hash"] == S23.descriptor_hash()
    assert doc["convention"] == "inverse-root"
    assert ENTROPY_NOTE in doc["notes"]
    assert doc["warnings"] == []
    assert len(doc["hyperplanes"]) == 3
    assert len(doc["omega"]) == 4  # 2 directions x 2 branches
    again = build_portrait(S23, directions=[(1.0, 0.0), (0.0, 1.0)]).to_json()
    assert json.dumps(doc, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_portrait_variety_noetherian_split():
    portrait = build_portrait(S23)
    assert len(portrait.variety()) == 1
    assert len(portrait.noetherian()) == 2
    assert portrait.omega == ()


def test_portrait_f_graphs_evaluate():
    portrait = build_portrait(S23)
    graphs = dict((subset, fn) for subset, fn in portrait.f_graphs())
    assert set(graphs) == {(), (0,)}
    assert graphs[()]((1.0, 0.0)).contains_fraction(2)


def test_sextic_portrait_warns_nonexpansive_everywhere():
    portrait = build_portrait(SEXTIC)
    assert any("non-expansive in every direction" in w for w in portrait.warnings)
    assert len(portrait.degenerate) == 2
