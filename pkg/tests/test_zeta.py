"""Zeta factor fits: frozen factorizations, identity checks, failure modes."""

from fractions import Fraction

import pytest

from rankone import (
    ZetaCandidate,
    ZetaFactorization,
    count_sequence,
    inverse_roots,
    is_expansive_element,
    load_fixture,
    verify_generating_identity,
)
from rankone.errors import (
    FitInconsistencyError,
    UnsupportedOperationError,
)
from rankone.zeta import fit_exponents


def coeff_by_value(zf):
    return {c.exact: c.coefficient for c in zf.factors}


# --- expansiveness -----------------------------------------------------------

def test_expansive_classification_times2times3():
    sys_ = load_fixture("times2times3")
    assert is_expansive_element(sys_, (1, 1)) is True
    assert is_expansive_element(sys_, (1, -1)) is True
    # either coordinate zero kills a nonarchimedean form
    assert is_expansive_element(sys_, (1, 0)) is False
    assert is_expansive_element(sys_, (0, 1)) is False
    with pytest.raises(ValueError):
        is_expansive_element(sys_, (0, 0))


def test_expansive_classification_ledrappier():
    sys_ = load_fixture("ledrappier")
    assert is_expansive_element(sys_, (1, 1)) is True
    assert is_expansive_element(sys_, (1, -1)) is False  # n1 + n2 = 0
    assert is_expansive_element(sys_, (0, 3)) is False


# --- frozen fits ---------------------------------------------------------------

def test_times2times3_diagonal_factorization():
    sys_ = load_fixture("times2times3")
    zf = inverse_roots(sys_, (1, 1))
    assert zf.mu == 1
    assert zf.exact_values() == [Fraction(1), Fraction(6)]
    assert coeff_by_value(zf) == {Fraction(1): 1, Fraction(6): -1}
    F = count_sequence(sys_, (1, 1), 20)
    res = verify_generating_identity(zf, F, 20)
    assert res == {"ok": True, "max_deviation": 0.0, "failures": []}


def test_times2times3_antidiagonal_factorization():
    sys_ = load_fixture("times2times3")
    zf = inverse_roots(sys_, (1, -1))
    assert zf.mu == 1
    assert coeff_by_value(zf) == {Fraction(2): 1, Fraction(3): -1}


def test_ledrappier_factorizations():
    sys_ = load_fixture("ledrappier")
    zf = inverse_roots(sys_, (1, 1))
    assert coeff_by_value(zf) == {Fraction(4): -1}
    zf = inverse_roots(sys_, (2, 1))
    assert coeff_by_value(zf) == {Fraction(8): -1}
    F = count_sequence(sys_, (2, 1), 12)
    assert verify_generating_identity(zf, F, 12)["ok"]


def test_quartic_diagonal_factorization():
    sys_ = load_fixture("sqrt2sqrt3")
    zf = inverse_roots(sys_, (1, 1))
    assert zf.mu == -1
    assert len(zf.factors) == 14
    doubles = [c for c in zf.factors if c.multiplicity == 2]
    assert len(doubles) == 2
    assert all(c.coefficient == -2 for c in doubles)
    assert {c.coefficient for c in zf.factors} == {-2, -1, 1}
    F = count_sequence(sys_, (1, 1), 20)
    assert verify_generating_identity(zf, F, 20)["ok"]


# --- refusal and failure paths -----------------------------------------------

def test_non_expansive_direction_refused_without_force():
    sys_ = load_fixture("times2times3")
    with pytest.raises(UnsupportedOperationError):
        inverse_roots(sys_, (1, 0))


def test_forced_fit_reports_honest_inconsistency():
    # along (1, 0) Ledrappier's counts follow no finite inverse-root multiset
    sys_ = load_fixture("ledrappier")
    with pytest.raises(FitInconsistencyError):
        inverse_roots(sys_, (1, 0), force=True)


def test_flipped_coefficient_fails_verification():
    c1 = ZetaCandidate.exact_rational(1)
    c1.coefficient = 1
    c6 = ZetaCandidate.exact_rational(6)
    c6.coefficient = 1  # wrong sign: the true factorization needs -1
    bad = ZetaFactorization((1, 1), 1, [c1, c6], 0, 64)
    F = count_sequence(load_fixture("times2times3"), (1, 1), 4)
    res = verify_generating_identity(bad, F, 4)
    assert not res["ok"]
    assert res["failures"] == [1, 2, 3, 4]
    assert res["max_deviation"] > 0


# --- direct fit machinery ------------------------------------------------------

def test_fit_exponents_recovers_signs():
    cands = [ZetaCandidate.exact_rational(1), ZetaCandidate.exact_rational(6)]
    F = [6 ** j - 1 for j in range(1, 5)]
    coeffs, mu = fit_exponents(cands, F)
    assert coeffs == [1, -1]
    assert mu == 1


def test_fit_exponents_needs_enough_counts():
    cands = [ZetaCandidate.exact_rational(1), ZetaCandidate.exact_rational(6)]
    with pytest.raises(ValueError):
        fit_exponents(cands, [5])


def test_fit_exponents_inconsistent_candidates():
    cands = [ZetaCandidate.exact_rational(1), ZetaCandidate.exact_rational(5)]
    F = [6 ** j - 1 for j in range(1, 5)]
    with pytest.raises(FitInconsistencyError):
        fit_exponents(cands, F)


def test_multiplicity_widens_coefficient_range():
    # candidate value 2 with multiplicity 3: coefficient -3 reproduces 3 * 2^j
    cands = [ZetaCandidate.exact_rational(2, multiplicity=3)]
    F = [3 * 2 ** j for j in range(1, 4)]
    coeffs, mu = fit_exponents(cands, F)
    assert coeffs == [-3]
    assert mu == 1


# --- serialized shape ----------------------------------------------------------

def test_zeta_json_shape():
    sys_ = load_fixture("times2times3")
    doc = inverse_roots(sys_, (1, 1)).to_json()
    assert doc["convention"] == "inverse-root"
    assert doc["n"] == [1, 1]
    assert doc["mu"] == 1
    assert doc["verified_to"] >= 6
    exact = {f["c"]["value"]: f["lambda"] for f in doc["factors"]}
    assert exact == {"1": 1, "6": -1}
    assert all(f["c"]["type"] == "rational" for f in doc["branches"])
