from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffcharsq.complex_core import Cochain, ComplexError, Ring, RingError, SimplicialComplex, coboundary
from diffcharsq.diagonal import (
    SIGN_ROWS,
    calibrate_signs,
    cup,
    cup_i,
    cup_i_defect,
    cut_terms,
    sign_unit,
    swap_sign,
)

from conftest import cached_space
from oracles import cone_cup_i


def _random(K, p, ring, rng, lo=-4, hi=5):
    return Cochain(K, p, ring, rng.integers(lo, hi, K.count(p)))


def _as_dict(K, c):
    return dict(zip(K.faces[c.degree], c.to_list()))


@pytest.mark.parametrize("i", range(5))
def test_cup_i_matches_cone_construction(i):
    rng = np.random.default_rng(10 + i)
    for n in range(i, 7):
        K = SimplicialComplex([tuple(range(n + 1))])
        for p in range(i, n + 1):
            q = n + i - p
            if q < i or q > n:
                continue
            f, g = _random(K, p, Ring.INT, rng), _random(K, q, Ring.INT, rng)
            got = cup_i(i, f, g).to_list()
            fd, gd = _as_dict(K, f), _as_dict(K, g)
            want = [cone_cup_i(i, fd, gd, p, q, s) for s in K.faces[n]]
            assert got == want, (i, p, q)


def test_cup_is_alexander_whitney():
    K = SimplicialComplex([(0, 1, 2, 3)])
    rng = np.random.default_rng(0)
    f, g = _random(K, 1, Ring.INT, rng), _random(K, 2, Ring.INT, rng)
    fd, gd = _as_dict(K, f), _as_dict(K, g)
    assert cup(f, g).to_list() == [fd[(0, 1)] * gd[(1, 2, 3)]]


def test_cup1_on_an_edge_by_hand():
    # f u_1 g on a 1-simplex for 1-cochains: a single cut at 0 or 1
    K = SimplicialComplex([(0, 1)])
    f = Cochain(K, 1, Ring.INT, [3])
    g = Cochain(K, 1, Ring.INT, [5])
    assert abs(cup_i(1, f, g).to_list()[0]) == 15


@pytest.mark.parametrize("name", ["circle(3)", "torus", "rp(2)", "klein_bottle", "rp(3)"])
@pytest.mark.parametrize("ring", [Ring.INT, Ring.MOD2])
def test_cup_i_relation_on_spaces(name, ring):
    K = cached_space(name)
    rng = np.random.default_rng(2)
    n = K.dimension
    for i in range(1, 5):
        for p in range(n + 1):
            for q in range(n + 1):
                if not 0 <= p + q - i + 1 <= n:
                    continue
                f, g = _random(K, p, ring, rng), _random(K, q, ring, rng)
                assert cup_i_defect(i, f, g).is_zero(), (i, p, q)


def test_leibniz_rule_for_cup():
    K = cached_space("torus")
    rng = np.random.default_rng(3)
    f, g = _random(K, 0, Ring.INT, rng), _random(K, 1, Ring.INT, rng)
    assert coboundary(cup(f, g)) == cup(coboundary(f), g) + cup(f, coboundary(g))


def test_cup_associative_on_cochains():
    K = cached_space("rp(3)")
    rng = np.random.default_rng(4)
    a, b, c = (_random(K, 1, Ring.INT, rng) for _ in range(3))
    assert cup(cup(a, b), c) == cup(a, cup(b, c))


def test_calibration_reproduces_frozen_table():
    table = calibrate_signs(4, 5)
    for (i, p, q), s in table.items():
        assert sign_unit(i, p, q) == s
        assert (SIGN_ROWS[i][p - i] == "+") == (s > 0)


def test_cut_terms_and_swap():
    assert cut_terms(0, 1, 1) == (((0, 1), (1, 2), 1),)
    assert cut_terms(3, 1, 1) == ()
    assert swap_sign(1, 1) == -1 and swap_sign(2, 3) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31), st.integers(0, 2))
def test_cup_i_bilinear(seed, i):
    K = cached_space("torus")
    rng = np.random.default_rng(seed)
    f1, f2, g = (_random(K, 1, Ring.INT, rng) for _ in range(3))
    assert cup_i(i, f1 + f2, g) == cup_i(i, f1, g) + cup_i(i, f2, g)


def test_cup_i_errors():
    K = cached_space("torus")
    f = Cochain.zeros(K, 1, Ring.INT)
    with pytest.raises(RingError):
        cup(f, Cochain.zeros(K, 1, Ring.MOD2))
    with pytest.raises(ValueError):
        cup_i(-1, f, f)
    with pytest.raises(ComplexError):
        cup_i(3, f, f)
    with pytest.raises(ValueError):
        cup_i_defect(0, f, f)
