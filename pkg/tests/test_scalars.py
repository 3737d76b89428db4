"""Exact Gaussian-rational scalar arithmetic."""

from fractions import Fraction

import pytest

from opdom.scalars import I_UNIT, ONE, ZERO, Scalar, format_scalar, parse_scalar


def test_of_coercions():
    assert Scalar.of(3) == Scalar(3)
    assert Scalar.of(Fraction(5, 2)) == Scalar(Fraction(5, 2))
    assert Scalar.of(2.5) == Scalar(Fraction(5, 2))
    assert Scalar.of(1 + 2j) == Scalar(1, 2)
    s = Scalar(7, -1)
    assert Scalar.of(s) is s


def test_field_arithmetic():
    a = Scalar(1, 2)
    b = Scalar(3, -1)
    assert a + b == Scalar(4, 1)
    assert a - b == Scalar(-2, 3)
    assert a * b == Scalar(5, 5)  # (1+2i)(3-i) = 3 - i + 6i + 2 = 5 + 5i
    assert (a / b) * b == a
    assert -a == Scalar(-1, -2)


def test_inverse_and_conjugate():
    z = Scalar(3, 4)
    assert z * z.inverse() == ONE
    assert z.conjugate() == Scalar(3, -4)
    assert (z * z.conjugate()).is_real()
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_predicates():
    assert ZERO.is_zero() and not ONE.is_zero()
    assert ONE.is_one()
    assert Scalar(Fraction(1, 2)).is_real()
    assert not I_UNIT.is_real()


def test_powers_of_i():
    assert I_UNIT * I_UNIT == Scalar(-1)
    assert I_UNIT * I_UNIT * I_UNIT * I_UNIT == ONE


def test_equality_coerces_numbers():
    assert Scalar(2) == 2
    assert Scalar(Fraction(1, 2)) == Fraction(1, 2)
    assert Scalar(0, 1) == 1j
    assert hash(Scalar(2)) == hash(Scalar.of(2))


def test_complex_and_abs():
    assert complex(Scalar(3, 4)) == 3 + 4j
    assert abs(Scalar(3, 4)) == pytest.approx(5.0)


def test_str_forms():
    cases = {
        Scalar(2): "2",
        Scalar(-1): "-1",
        Scalar(Fraction(5, 2)): "5/2",
        Scalar(0, 1): "i",
        Scalar(0, -1): "-i",
        Scalar(0, 3): "3i",
        Scalar(0, Fraction(5, 2)): "5/2i",
        Scalar(1, 2): "1+2i",
    }
    for s, text in cases.items():
        assert str(s) == text


def test_parse_round_trip():
    for text in ("0", "1", "-1", "2", "5/2", "-7/3", "i", "-i", "3i", "1+2i", "1-2i"):
        s = parse_scalar(text)
        assert parse_scalar(format_scalar(s)) == s


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("one")


def test_exactness_no_float_drift():
    # (1/3) summed three times is exactly 1, unlike binary floats
    third = Scalar(Fraction(1, 3))
    assert third + third + third == ONE
