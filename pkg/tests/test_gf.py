import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qramp.gf import (FieldError, FieldSpec, is_irreducible, make_field, parse_field,
                      smallest_irreducible)

from oracles import oracle_for

SMALL = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)]


@pytest.fixture(scope="module", params=SMALL, ids=lambda pm: f"{pm[0]}^{pm[1]}")
def field(request):
    return make_field(*request.param)


def test_default_moduli():
    assert make_field(2, 2).modulus == (1, 1, 1)
    # x^3 + x + 1 is the smallest by integer value (0b1011 < 0b1101)
    assert make_field(2, 3).modulus == (1, 1, 0, 1)
    assert make_field(3, 2).modulus == (1, 0, 1)
    assert make_field(7).modulus == (0, 1)
    assert smallest_irreducible(2, 4) == [1, 1, 0, 0, 1]


def test_smallest_irreducible_is_smallest():
    # every smaller monic candidate of the same degree must be reducible
    for p, m in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2)]:
        best = smallest_irreducible(p, m)
        code = sum(c * p ** i for i, c in enumerate(best[:-1]))
        for tail in range(code):
            cand = [(tail // p ** i) % p for i in range(m)] + [1]
            assert not is_irreducible(cand, p)


def test_axioms_exhaustive(field):
    F = field
    q = F.q
    els = range(q)
    for a, b in itertools.product(els, els):
        assert F.add(a, b) == F.add(b, a)
        assert F.mul(a, b) == F.mul(b, a)
        assert F.sub(F.add(a, b), b) == a
    for a, b, c in itertools.product(els, els, els):
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a and F.mul(a, 0) == 0
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
            assert F.div(a, a) == 1


def test_matches_oracle(field):
    F = field
    O = oracle_for(F)
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.mul(a, b) == O.mul(a, b)
        assert F.add(a, b) == O.add(a, b)
    for a in range(1, F.q):
        assert F.inv(a) == O.inv(a)


def test_primitive_generates(field):
    F = field
    g = F.primitive
    seen = {F.pow(g, i) for i in range(F.q - 1)}
    assert seen == set(range(1, F.q))
    assert F.order(g) == F.q - 1


def test_tables(field):
    F = field
    assert F.mul_table.dtype == np.int64
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.mul_table[a, b] == F.mul(a, b)
        assert F.add_table[a, b] == F.add(a, b)
    assert list(F.neg_table) == [F.neg(a) for a in range(F.q)]


def test_pow_negative():
    F = make_field(2, 3)
    for a in range(1, 8):
        assert F.mul(F.pow(a, -2), F.pow(a, 2)) == 1
    assert F.pow(0, 0) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 511), st.integers(1, 511))
def test_large_field_euclid(a, b):
    # 2^9 has no log tables; the extended-Euclid path must still be a field
    F = make_field(2, 9)
    assert F.mul(a, F.inv(a)) == 1
    assert F.mul(a, b) == oracle_for(F).mul(a, b)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_gf256_distributive(a, b, c):
    F = make_field(2, 8)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


def test_descriptor_roundtrip():
    for p, m in SMALL + [(2, 8)]:
        F = make_field(p, m)
        assert parse_field(F.descriptor()) == F
    assert make_field(7).descriptor() == "7^1"
    assert make_field(2, 2).descriptor() == "2^2/1,1,1"
    assert parse_field("5") == make_field(5)


def test_explicit_modulus():
    F = make_field(2, 3, modulus=(1, 0, 1, 1))       # x^3 + x^2 + 1
    G = make_field(2, 3)
    assert F != G
    assert F.mul(2, 4) == 5                          # x * x^2 = x^2 + 1
    assert G.mul(2, 4) == 3                          # x * x^2 = x + 1


@pytest.mark.parametrize("args", [(4, 1), (6, 1), (2, 0), (1, 1)])
def test_bad_fields(args):
    with pytest.raises(FieldError):
        make_field(*args)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        make_field(2, 2, modulus=(1, 0, 1))          # x^2 + 1 = (x + 1)^2
    with pytest.raises(FieldError):
        FieldSpec(2, 2, (1, 1, 0))


def test_cap():
    with pytest.raises(FieldError):
        make_field(2, 17)
    with pytest.raises(FieldError):
        parse_field("2^x")


def test_elements():
    F = make_field(2, 2)
    G = make_field(3, 1)
    a, b = F(2), F(3)
    assert int(a * b) == F.mul(2, 3)
    assert (a + b).value == F.add(2, 3)
    assert (a - b) + b == a
    assert (a / b) * b == a
    assert a ** 3 == F(1)
    assert a.inverse() * a == F(1)
    assert a + 1 == F(3)                              # ints embed through F_2
    assert 1 - a == F(F.sub(1, 2))
    with pytest.raises(FieldError):
        a + G(1)
    with pytest.raises(FieldError):
        F(4)
    with pytest.raises(FieldError):
        F.coerce(G(1))
    with pytest.raises(FieldError):
        F.coerce(True)
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
