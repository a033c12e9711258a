"""Quadratic-field class numbers, units, and square classes."""

from math import gcd, isqrt

import pytest
from hypothesis import given, settings, strategies as st

from biqtower.quadfield import (
    InvalidDiscriminantError,
    class_group_imaginary,
    class_number_real,
    discriminant_of,
    fundamental_unit,
    is_squarefree,
    narrow_class_number_real,
    two_valuation,
    unit_square_class,
)


def brute_form_count(D: int) -> int:
    """Independent count of primitive reduced positive definite forms."""
    count = 0
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if gcd(gcd(a, b), c) == 1:
                count += 1
    return count


def is_fundamental_negative(D: int) -> bool:
    if D >= 0:
        return False
    if D % 4 == 1:
        return is_squarefree(-D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(-m)
    return False


@given(st.integers(min_value=-4000, max_value=-3))
def test_imaginary_class_number_vs_brute_force(D):
    if not is_fundamental_negative(D):
        return
    h, factors, cl2 = class_group_imaginary(D)
    assert h == brute_form_count(D)
    prod = 1
    for f in factors:
        prod *= f
    assert prod == h
    assert sum(cl2) == two_valuation(h)


def test_known_imaginary_structures():
    assert class_group_imaginary(-23)[0] == 3
    assert class_group_imaginary(-47)[0] == 5
    assert class_group_imaginary(-4)[0] == 1
    h, factors, cl2 = class_group_imaginary(-455)
    assert h == 20 and tuple(factors) == (10, 2) and tuple(cl2) == (1, 1)
    h, factors, cl2 = class_group_imaginary(-260)
    assert h == 8 and tuple(factors) == (4, 2) and tuple(cl2) == (1, 2)


def test_rejects_non_fundamental():
    with pytest.raises(InvalidDiscriminantError):
        class_group_imaginary(-12)
    with pytest.raises(InvalidDiscriminantError):
        narrow_class_number_real(45)


def test_narrow_class_numbers():
    assert narrow_class_number_real(5) == 1
    assert narrow_class_number_real(65) == 2
    assert narrow_class_number_real(discriminant_of(455)) == 8


@settings(deadline=None)
@given(st.integers(min_value=2, max_value=400))
def test_fundamental_unit_norm_equation(m):
    if not is_squarefree(m):
        return
    unit = fundamental_unit(m)
    x, y, f = unit.x_num, unit.y_num, unit.denom
    assert f in (1, 2) and y > 0
    assert x * x - m * y * y == unit.norm * f * f
    assert unit.norm in (1, -1)
    if f == 2:
        assert m % 4 == 1 and x % 2 == 1 and y % 2 == 1


def test_fundamental_unit_known_values():
    u = fundamental_unit(65)
    assert (u.x_num, u.y_num, u.denom, u.norm) == (8, 1, 1, -1)
    u = fundamental_unit(5)
    assert (u.x_num, u.y_num, u.denom, u.norm) == (1, 1, 2, -1)
    u = fundamental_unit(455)
    assert u.norm == 1 and u.x_num ** 2 - 455 * u.y_num ** 2 == u.denom ** 2


def minimality_brute(m: int, unit) -> bool:
    """No smaller unit exists: scan Y below the claimed one in X^2 - m Y^2 = +-4."""
    y_cap = unit.y_num if unit.denom == 2 else 2 * unit.y_num
    for y in range(1, y_cap):
        for sign in (1, -1):
            val = m * y * y + 4 * sign
            if val > 0 and isqrt(val) ** 2 == val:
                return False
    return True


def test_fundamental_unit_minimality_small():
    for m in range(2, 120):
        if not is_squarefree(m):
            continue
        unit = fundamental_unit(m)
        if unit.y_num * unit.denom < 3000:
            assert minimality_brute(m, unit), f"unit for {m} is not minimal"


def test_square_class_witnesses():
    unit = fundamental_unit(5 * 13 * 7)
    w = unit_square_class(unit, 5, 13)
    assert w.sign in (1, -1)
    assert w.root1 ** 2 == 5 * 13 * (unit.x_num + w.sign)
    assert w.root2 ** 2 == 7 * (unit.x_num - w.sign)


def test_real_class_numbers():
    h, h2 = class_number_real(65)
    assert (h, h2) == (2, 2)
    h, h2 = class_number_real(455)
    assert h2 == 4
