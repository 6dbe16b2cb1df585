import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from novikov.chargroup import (MINUS_INFINITY, Character, GroupSpec, Scalar, chi_eval,
                               default_d, format_scalar, parse_scalar, scalar_cmp,
                               w_eval)
from novikov.errors import ContextMismatch

SQ2 = Scalar(0, 1, 2)


def test_free_abelian_mul():
    G = GroupSpec("free_abelian", 2)
    assert G.mul((1, 0), (0, 3)) == (1, 3)
    assert G.mul((2, -1), G.inv((2, -1))) == G.identity


def test_free_reduction():
    F = GroupSpec("free", 2, generators=("a", "b"))
    a, b = 1, 2
    assert F.mul((a, b), (-b, a)) == (a, a)
    w = (a, -b, a)
    assert F.mul(w, F.inv(w)) == ()


def test_free_reduction_confluent():
    F = GroupSpec("free", 3)
    rng = random.Random(1)
    for _ in range(200):
        words = [F.reduce(tuple(rng.choice((1, -1)) * rng.randint(1, 3)
                                for _ in range(rng.randint(0, 5)))) for _ in range(3)]
        x, y, z = words
        assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
        assert F.reduce(x + y + z) == F.mul(F.mul(x, y), z)


def test_chi_examples():
    G = GroupSpec("free_abelian", 2)
    chi = Character((Scalar(-1), -SQ2))
    v = chi_eval(chi, G, (-3, 1))
    assert v == Scalar(3, -1, 2)
    assert v > 0
    assert chi_eval(chi, G, G.identity) == 0
    assert chi_eval(Character((-1, 0)), G, (2, 5)) == -2


def test_chi_homomorphism_free():
    F = GroupSpec("free", 2)
    chi = Character((Scalar(-1), Scalar(Fraction(1, 2), 1, 2)))
    rng = random.Random(3)
    for _ in range(100):
        g = F.reduce(tuple(rng.choice((1, -1, 2, -2)) for _ in range(rng.randint(0, 6))))
        h = F.reduce(tuple(rng.choice((1, -1, 2, -2)) for _ in range(rng.randint(0, 6))))
        assert chi_eval(chi, F, F.mul(g, h)) == chi_eval(chi, F, g) + chi_eval(chi, F, h)
        assert w_eval(F, F.mul(g, h)) == w_eval(F, g) * w_eval(F, h)


def test_orientation():
    G = GroupSpec("free_abelian", 2)
    assert w_eval(G, (5, -2)) == 1
    G = GroupSpec("free_abelian", 2, orientation=(-1, 1))
    assert w_eval(G, (3, 7)) == -1
    assert w_eval(G, G.identity) == 1


def test_zero_character_rejected():
    with pytest.raises(ValueError):
        Character((0, 0))


def test_scalar_cmp_examples():
    assert Scalar(3) > SQ2 * 2
    assert scalar_cmp(Scalar(1) + SQ2, Scalar(1) + SQ2) == 0
    assert Scalar(-1) > -SQ2


def test_scalar_mixing_d():
    with pytest.raises(ContextMismatch):
        Scalar(0, 1, 2) + Scalar(0, 1, 3)
    # rationals combine with anything
    assert Scalar(1, 0, 3) + Scalar(0, 1, 2) == Scalar(1, 1, 2)


def test_minus_infinity():
    assert MINUS_INFINITY < Scalar(-10 ** 9)
    assert MINUS_INFINITY + Scalar(5) is MINUS_INFINITY
    assert not MINUS_INFINITY > Scalar(0)


fractions = st.fractions(min_value=-50, max_value=50, max_denominator=20)
scalars = st.builds(lambda a, b: Scalar(a, b, 2), fractions, fractions)


@given(scalars, scalars, scalars)
def test_order_transitive_antisymmetric(x, y, z):
    assert scalar_cmp(x, y) == -scalar_cmp(y, x)
    if x <= y and y <= z:
        assert x <= z
    assert (x < y) == ((y - x).sign() > 0)


@given(scalars)
def test_scalar_text_roundtrip(x):
    assert parse_scalar(format_scalar(x), 2) == x


def test_parse_scalar_forms():
    assert parse_scalar("-3/2+sqrt(2)") == Scalar(Fraction(-3, 2), 1, 2)
    assert parse_scalar("-sqrt(2)") == -SQ2
    assert parse_scalar("7") == Scalar(7)
    with pytest.raises(ValueError):
        parse_scalar("sqrt(4)")


def test_env_default_d(monkeypatch):
    monkeypatch.setenv("NOVIKOV_D", "5")
    assert default_d() == 5
    assert Character((Scalar(-1),)).d == 5
    monkeypatch.setenv("NOVIKOV_D", "8")
    with pytest.raises(ValueError):
        default_d()
