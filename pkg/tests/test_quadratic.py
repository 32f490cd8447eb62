from fractions import Fraction

import pytest

from sadic.quadratic import Quad, sqrt5


def test_arithmetic_in_the_field():
    r5 = sqrt5()
    assert r5 * r5 == Quad(5)
    phi = (1 + r5) / 2
    assert phi * phi == phi + 1
    assert (phi - 1) * phi == Quad(1)


def test_rational_embedding():
    q = Quad(Fraction(3, 2))
    assert q.is_rational
    assert q.as_fraction() == Fraction(3, 2)
    assert not sqrt5().is_rational
    with pytest.raises(ValueError):
        sqrt5().as_fraction()


def test_mixed_operands():
    r5 = sqrt5()
    assert 1 + r5 == r5 + 1
    assert 2 * r5 == r5 * 2
    assert 3 - r5 == -(r5 - 3)
    assert (1 / r5) * r5 == Quad(1)
    assert Fraction(1, 2) + r5 == r5 + Fraction(1, 2)


def test_exact_sign_and_order():
    r5 = sqrt5()
    # 2 < sqrt5 < 3 decided without floats
    assert (r5 - 2).sign() == 1
    assert (r5 - 3).sign() == -1
    assert Quad(0).sign() == 0
    assert r5 > 2 and r5 < Fraction(9, 4) + Fraction(1, 100) * r5
    # conjugate-sensitive case: a and b of opposite signs
    assert (Quad(7, -3, 5) ).sign() == 1  # 7 > 3*sqrt5 iff 49 > 45
    assert (Quad(6, -3, 5)).sign() == -1


def test_floor_and_mod1():
    r5 = sqrt5()
    assert r5.floor() == 2
    assert (-r5).floor() == -3
    assert Quad(Fraction(7, 2)).floor() == 3
    frac = (r5 * 10).mod1()
    assert Quad(0) <= frac < Quad(1)
    assert (r5 * 10) - frac == Quad((r5 * 10).floor())


def test_requires_matching_radicand():
    with pytest.raises(ValueError):
        sqrt5() + Quad(1, 1, 3)


def test_float_view_is_close():
    assert abs(float(sqrt5()) - 5 ** 0.5) < 1e-12
