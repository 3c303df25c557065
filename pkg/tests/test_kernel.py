"""Exact kernel: rational valuations, certified balls, exact log atoms."""

from fractions import Fraction

import pytest

from rankone.balls import (
    ComplexBall,
    RealBall,
    default_precision,
    interval_sign,
    max_precision,
)
from rankone.exactlog import ExactLog, log_dot, vector_is_zero, vectors_parallel
from rankone.rationals import (
    factor_fraction,
    factor_int,
    is_prime,
    padic_ord,
    prime_to_s_part,
)

import propsuites


# --- rational valuations ---------------------------------------------------

def test_is_prime_small():
    primes = [n for n in range(2, 60) if is_prime(n)]
    assert primes == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert not is_prime(1)
    assert not is_prime(561)  # Carmichael number


def test_factor_int():
    assert factor_int(720) == {2: 4, 3: 2, 5: 1}
    assert factor_int(97) == {97: 1}
    assert factor_int(1) == {}


def test_factor_fraction_signed_exponents():
    assert factor_fraction(Fraction(8, 45)) == {2: 3, 3: -2, 5: -1}


def test_padic_ord():
    assert padic_ord(Fraction(12), 2) == 2
    assert padic_ord(Fraction(1, 9), 3) == -2
    assert padic_ord(Fraction(7), 5) == 0


def test_prime_to_s_part():
    assert prime_to_s_part(720, (2, 3)) == 5
    assert prime_to_s_part(720, ()) == 720
    assert prime_to_s_part(1, (2,)) == 1


# --- real balls --------------------------------------------------------------

def test_ball_contains_exact_value_through_ops():
    prec = 53
    a = RealBall.from_fraction(Fraction(1, 3), prec)
    b = RealBall.from_fraction(Fraction(2, 7), prec)
    assert a.add(b, prec).contains_fraction(Fraction(1, 3) + Fraction(2, 7))
    assert a.mul(b, prec).contains_fraction(Fraction(2, 21))
    assert a.sub(b, prec).contains_fraction(Fraction(1, 21))
    assert a.recip(prec).contains_fraction(3)


def test_square_of_zero_straddling_interval_is_nonnegative():
    # interval [-2, 2]: the square must be [0, 4], not [-4, 4]
    ball = RealBall(RealBall.from_int(0).mid, RealBall.from_int(2).mid)
    sq = ball.square(53)
    assert sq.contains_fraction(0)
    assert sq.contains_fraction(4)
    assert not sq.contains_fraction(Fraction(-1, 100))


def test_recip_of_zero_straddling_interval_raises():
    ball = RealBall(RealBall.from_int(0).mid, RealBall.from_int(1).mid)
    with pytest.raises(ZeroDivisionError):
        ball.recip(53)


def test_exp_log_roundtrip_contains():
    prec = 64
    for x in (Fraction(3, 2), Fraction(10), Fraction(1, 7)):
        ball = RealBall.from_fraction(x, prec)
        assert ball.log(prec).exp(prec).contains_fraction(x)


def test_float_bounds_bracket_midpoint():
    ball = RealBall.from_fraction(Fraction(22, 7), 53)
    lo, hi = ball.float_bounds()
    assert lo <= 22 / 7 <= hi


def test_complex_abs_of_near_zero_box():
    # |z| on a box around 0 must clamp the squared modulus at 0, not fail
    z = ComplexBall.from_fractions(0, 0, 53)
    r = z.abs(53)
    assert r.contains_fraction(0)
    assert not r.is_negative()


def test_complex_mul_contains_exact_gaussian_value():
    prec = 64
    z = ComplexBall.from_fractions(Fraction(1, 3), Fraction(1, 5), prec)
    w = ComplexBall.from_fractions(Fraction(2, 7), Fraction(-1, 2), prec)
    prod = z.mul(w, prec)
    re = Fraction(1, 3) * Fraction(2, 7) - Fraction(1, 5) * Fraction(-1, 2)
    im = Fraction(1, 3) * Fraction(-1, 2) + Fraction(1, 5) * Fraction(2, 7)
    assert prod.re.contains_fraction(re)
    assert prod.im.contains_fraction(im)


def test_interval_sign_escalates_until_resolved():
    tiny = Fraction(1, 2 ** 200)

    def expr(prec):
        return RealBall.from_fraction(1 + tiny, prec).sub(RealBall.one(), prec)

    assert interval_sign(expr, max_prec=1024) == "positive"


def test_interval_sign_honest_undecided_at_cap():
    def expr(prec):
        third = RealBall.from_fraction(Fraction(1, 3), prec)
        return third.add(third, prec).add(third, prec).sub(RealBall.one(), prec)

    assert interval_sign(expr, max_prec=128) == "zero-undecided"


def test_precision_env_overrides(monkeypatch):
    monkeypatch.setenv("RANKONE_PRECISION_BITS", "96")
    monkeypatch.setenv("RANKONE_MAX_PRECISION_BITS", "512")
    assert default_precision() == 96
    assert max_precision() == 512


# --- exact log combinations ---------------------------------------------------

def test_exactlog_rational_atoms():
    six = ExactLog.from_rational(Fraction(6))
    assert six.prime_part == {2: Fraction(1), 3: Fraction(1)}
    half = ExactLog.from_rational(Fraction(1, 2))
    assert half.prime_part == {2: Fraction(-1)}
    assert ExactLog.from_rational(Fraction(1)).is_trivially_zero()


def test_exactlog_cancellation_is_syntactic_zero():
    a = ExactLog.from_rational(Fraction(12))   # log 12 = 2 log 2 + log 3
    b = ExactLog.from_rational(Fraction(4))
    c = ExactLog.from_rational(Fraction(3))
    assert a.sub(b).sub(c).is_trivially_zero()
    assert a.sub(b).sub(c).sign() == "zero"


def test_exactlog_evaluate_brackets_value():
    val = ExactLog.from_rational(Fraction(6)).evaluate(64)
    lo, hi = val.float_bounds()
    assert lo <= 1.791759469228055 <= hi
    assert hi - lo < 1e-15


def test_linear_poly_root_folds_to_rational_atoms():
    # x - 3 has the single root 3; the atom must be log 3, not a root atom
    log3 = ExactLog.from_root_abs((-3, 1), 0)
    assert log3.root_part == {}
    assert log3.prime_part == {3: Fraction(1)}


def test_unit_circle_root_contributes_zero():
    # x^2 + x + 1: both roots on the unit circle
    assert ExactLog.from_root_abs((1, 1, 1), 0).is_trivially_zero()


def test_full_galois_orbit_collapses_to_constant():
    # x^2 - 2x - 1 has roots 1 +- sqrt(2) with product -1: the orbit sum
    # is log|constant| = 0
    poly = (-1, -2, 1)
    total = ExactLog.from_root_abs(poly, 0).add(ExactLog.from_root_abs(poly, 1))
    assert total.is_trivially_zero()


def test_palindromic_inverse_pair_folds_to_negation():
    # x^2 - 3x + 1 has roots r and 1/r: the two logs are exact negatives
    poly = (1, -3, 1)
    a = ExactLog.from_root_abs(poly, 0)
    b = ExactLog.from_root_abs(poly, 1)
    assert a.add(b).is_trivially_zero()
    assert not a.is_trivially_zero()


def test_conjugate_pair_orbit_collapses_to_constant_term():
    # x^2 - x + 2: the conjugate pair is one atom with coefficient 2, which
    # is the full orbit, so it collapses to log|2| exactly
    two_log_r = ExactLog.from_root_abs((2, -1, 1), 0).scale(2)
    assert two_log_r.sub(ExactLog.from_rational(Fraction(2))).is_trivially_zero()


def test_cross_atom_true_zero_stays_undecided():
    # 2 log|sqrt 2| = log 2, but a single root of x^2 - 2 is an opaque atom
    # (the +-sqrt2 pair is real, not conjugate, so no fold applies); the
    # interval test must stay open rather than guess
    two_log_r = ExactLog.from_root_abs((-2, 0, 1), 1).scale(2)
    diff = two_log_r.sub(ExactLog.from_rational(Fraction(2)))
    assert not diff.is_trivially_zero()
    assert diff.sign(max_prec=256) == "zero-undecided"
    assert diff.is_zero(max_prec=256) is None


def test_exactlog_sign_certification():
    assert ExactLog.from_rational(Fraction(3, 2)).sign() == "positive"
    assert ExactLog.from_rational(Fraction(2, 3)).sign() == "negative"
    mixed = ExactLog.from_root_abs((1, -3, 1), 0)
    assert mixed.sign(max_prec=256) in ("positive", "negative")


def test_log_dot_rational_weights():
    vec = (ExactLog.from_rational(Fraction(2)), ExactLog.from_rational(Fraction(3)))
    form = log_dot((Fraction(2), Fraction(-1)), vec)
    # 2 log 2 - log 3 = log(4/3) > 0
    assert form.prime_part == {2: Fraction(2), 3: Fraction(-1)}
    assert form.sign() == "positive"


def test_vector_is_zero():
    zero = (ExactLog.zero(), ExactLog.zero())
    assert vector_is_zero(zero) is True
    axis = (ExactLog.from_rational(Fraction(2)), ExactLog.zero())
    assert vector_is_zero(axis) is False


def test_vectors_parallel_shared_atoms():
    a = (ExactLog.from_rational(Fraction(2)), ExactLog.from_rational(Fraction(3)))
    b = (ExactLog.from_rational(Fraction(8)), ExactLog.from_rational(Fraction(27)))
    assert vectors_parallel(a, b) == "parallel"
    c = (ExactLog.from_rational(Fraction(2)), ExactLog.from_rational(Fraction(5)))
    assert vectors_parallel(a, c) == "not-parallel"


def test_vectors_parallel_cross_atom_is_undecided():
    # (0, -log 3) and (0, log 2) are parallel as real vectors, but no shared
    # atom certificate exists; the honest answer is undecided
    a = (ExactLog.zero(), ExactLog.from_rational(Fraction(1, 3)))
    b = (ExactLog.zero(), ExactLog.from_rational(Fraction(2)))
    assert vectors_parallel(a, b, max_prec=256) == "undecided"


# --- randomized soundness -----------------------------------------------------

def test_interval_soundness_small():
    assert propsuites.interval_soundness(150, seed=27) > 0
