from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

import diffcharsq.diffchar as dc
from diffcharsq.cohomology import CocycleError, cohomology_group, homology_group
from diffcharsq.complex_core import Chain, Cochain, DegreeError, Ring, RingError, boundary, coboundary
from diffcharsq.diffchar import (
    CSCochain,
    CharacterClass,
    MatrixError,
    b_homotopy,
    canonical_lift,
    character_from_form,
    classes_equal,
    cs_differential,
    cup_character,
    discrete_wedge,
    evaluate_character,
    flat_character,
    is_integral_form,
    proof_formula_defect,
    proposition_defect,
    q_map,
    random_character,
    random_cocycle,
    random_cs_cochain,
    sl2z_defect,
    solve_coboundary,
)
from diffcharsq.diagonal import cup, cup_i

from conftest import cached_space


def _rat(K, p, rng, den=4):
    return Cochain.from_values(K, p, Ring.RAT, [Fraction(int(a), int(b)) for a, b in zip(rng.integers(-3, 4, K.count(p)), rng.integers(1, den + 1, K.count(p)))])


@pytest.mark.parametrize("name", ["circle(3)", "torus", "rp(2)", "rp(3)"])
def test_differential_squares_to_zero(name):
    K = cached_space(name)
    rng = np.random.default_rng(0)
    for level in range(1, K.dimension + 2):
        for q in range(0, K.dimension):
            x = random_cs_cochain(K, level, q, rng)
            assert cs_differential(cs_differential(x)).is_zero(), (level, q)


def test_differential_components():
    K = cached_space("torus")
    rng = np.random.default_rng(1)
    x = random_cs_cochain(K, 1, 1, rng)
    dx = cs_differential(x)
    assert dx.c == coboundary(x.c)
    assert dx.h == x.omega - x.c.to_ring(Ring.RAT) - coboundary(x.h)
    assert dx.omega == coboundary(x.omega)
    # just below the level the form slot of the image is zero
    y = random_cs_cochain(K, 2, 1, rng)
    dy = cs_differential(y)
    assert dy.omega.is_zero()
    assert dy.h == (y.c.to_ring(Ring.RAT) + coboundary(y.h)) * -1


def test_wedge_is_graded_commutative_and_homotopic_to_cup():
    K = cached_space("torus")
    rng = np.random.default_rng(2)
    a, b = _rat(K, 1, rng), _rat(K, 1, rng)
    assert discrete_wedge(a, b) == discrete_wedge(b, a) * -1
    # on closed inputs wedge - cup = delta B^1
    za, zb = coboundary(_rat(K, 0, rng)), coboundary(_rat(K, 0, rng))
    assert discrete_wedge(za, zb) - cup(za, zb) == coboundary(b_homotopy(1, za, zb))
    assert b_homotopy(0, a, b).is_zero()
    assert b_homotopy(2, a, b) == cup_i(2, a, b) * Fraction(-1, 2)


def test_evaluation_of_flat_and_lifted_characters():
    K = cached_space("circle(3)")
    alpha = Cochain.from_values(K, 0, Ring.RAT, [Fraction(1, 3), Fraction(5, 4), Fraction(-1, 2)])
    x = CharacterClass(flat_character(alpha))
    for v in range(3):
        pt = Chain.from_dict(K, 0, Ring.INT, {v: 1})
        assert evaluate_character(x, pt) == [Fraction(1, 3), Fraction(1, 4), Fraction(1, 2)][v]
    T = cached_space("torus")
    c = cohomology_group(T, 2).generators[0]
    lift = CharacterClass(canonical_lift(c))
    for z in homology_group(T, 1).generators:
        assert evaluate_character(lift, z) == 0
    a = _rat(T, 1, np.random.default_rng(3))
    y = CharacterClass(flat_character(a))
    for z in homology_group(T, 1).generators:
        v = sum(x * w for x, w in zip(a.to_list(), z.to_list()))
        assert evaluate_character(y, z) == v - (v.numerator // v.denominator)


def test_classes_equal_examples():
    K = cached_space("torus")
    rng = np.random.default_rng(4)
    x = random_character(K, 2, rng)
    X = CharacterClass(x)
    shifted = CharacterClass(x + cs_differential(random_cs_cochain(K, 2, 1, rng)))
    assert classes_equal(X, shifted)
    # an integral flat shift (0, z, 0) with z an integral cocycle is trivial
    z = random_cocycle(K, 1, rng).to_ring(Ring.RAT)
    assert classes_equal(X, CharacterClass(x + flat_character(z)))
    # a half-integral flat shift along a nontrivial class is not
    g = cohomology_group(K, 1).generators[0].to_ring(Ring.RAT) * Fraction(1, 2)
    assert not classes_equal(X, CharacterClass(x + flat_character(g)))
    assert not classes_equal(X, CharacterClass(x + canonical_lift(cohomology_group(K, 2).generators[0])))


def test_graded_commutativity_of_character_cup():
    K = cached_space("torus")
    rng = np.random.default_rng(5)
    for _ in range(3):
        x, y = CharacterClass(random_character(K, 1, rng)), CharacterClass(random_character(K, 1, rng))
        assert classes_equal(x.cup(y), -(y.cup(x)))
        a, b = CharacterClass(random_character(K, 1, rng)), CharacterClass(random_character(K, 2, rng))
        assert classes_equal(a.cup(b), b.cup(a))


def _generators(K, level):
    """Canonical lifts of H^p(K; Z) generators and flat characters of H^(p-1)(K; Q) generators."""
    out = [CharacterClass(canonical_lift(g)) for g in cohomology_group(K, level).generators if not g.is_zero()]
    if level >= 1:
        for g in cohomology_group(K, level - 1, Ring.RAT).generators:
            out.append(CharacterClass(flat_character(g * Fraction(1, 2))))
    return out


@pytest.mark.parametrize("name", ["torus", "rp(3)"])
def test_associativity_on_generators(name):
    K = cached_space(name)
    gens = {p: _generators(K, p) for p in (2, 3) if p <= K.dimension}
    for p, xs in gens.items():
        for x in xs:
            for y in xs:
                for z in xs:
                    assert classes_equal(x.cup(y).cup(z), x.cup(y.cup(z)))


def test_triple_products_of_level_one_lifts_agree_up_to_exact_curvature():
    K = cached_space("torus^3")
    xs = [CharacterClass(canonical_lift(g)) for g in cohomology_group(K, 1).generators]
    H3 = cohomology_group(K, 3, Ring.RAT)
    for x in xs:
        for y in xs:
            for z in xs:
                left, right = x.cup(y).cup(z), x.cup(y.cup(z))
                assert left.rep.c == right.rep.c
                assert H3.is_coboundary(left.rep.omega - right.rep.omega)


def test_cup_character_components():
    K = cached_space("torus")
    rng = np.random.default_rng(7)
    x, y = random_character(K, 1, rng), random_character(K, 1, rng)
    p = cup_character(x, y)
    assert p.c == cup(x.c, y.c)
    assert p.omega == discrete_wedge(x.omega, y.omega)
    assert cs_differential(p).is_zero()


def _tensor(K, rng, p, q, pbar, qbar):
    return [(random_cs_cochain(K, p, pbar, rng), random_cs_cochain(K, q, qbar, rng))]


@pytest.mark.parametrize("name", ["torus", "rp(2)"])
def test_homotopy_relations_on_tensors(name):
    K = cached_space(name)
    rng = np.random.default_rng(8)
    for p, q in [(1, 1), (1, 2), (2, 2)]:
        for pbar in range(0, K.dimension + 1):
            for qbar in range(0, K.dimension + 1):
                t = _tensor(K, rng, p, q, pbar, qbar)
                for i in range(0, 4):
                    d = proposition_defect(i, t)
                    assert d is None or d.is_zero(), (p, q, pbar, qbar, i)
                    f = proof_formula_defect(i, t)
                    assert f is None or f.is_zero(), (p, q, pbar, qbar, i)


def _proposition_failures(K, rng, trials=6):
    fails = 0
    for _ in range(trials):
        t = _tensor(K, rng, 1, 1, 1, 1)
        for i in (1, 2):
            d = proposition_defect(i, t)
            fails += not (d is None or d.is_zero())
    return fails


def test_reading_g_with_first_factor_twice_breaks_the_relation(monkeypatch):
    K = cached_space("torus")
    orig = dc.homotopy_F

    def literal(i, x, y):
        y2 = CSCochain.make(K, y.level, y.degree, x.c if x.degree == y.degree else None, y.h, y.omega)
        return orig(i, x, y2)

    assert _proposition_failures(K, np.random.default_rng(9)) == 0
    monkeypatch.setattr(dc, "homotopy_F", literal)
    assert _proposition_failures(K, np.random.default_rng(9)) > 0


def test_flipping_a_homotopy_sign_breaks_the_relation(monkeypatch):
    K = cached_space("torus")
    orig = dc.homotopy_F

    def flipped(i, x, y):
        v = orig(i, x, y)
        return v * -1 if v is not None and i == 1 else v

    monkeypatch.setattr(dc, "homotopy_F", flipped)
    assert _proposition_failures(K, np.random.default_rng(10)) > 0


def test_character_from_form_and_integrality():
    K = cached_space("torus")
    g = cohomology_group(K, 1).generators[0].to_ring(Ring.RAT)
    w = g * 2 + coboundary(_rat(K, 0, np.random.default_rng(11)))
    assert is_integral_form(w)
    x = character_from_form(w)
    assert x.omega == w and cs_differential(x).is_zero()
    assert not is_integral_form(g * Fraction(1, 2))
    with pytest.raises(ValueError):
        character_from_form(g * Fraction(1, 2))


def test_solve_coboundary():
    K = cached_space("rp(2)")
    rng = np.random.default_rng(12)
    b = Cochain(K, 1, Ring.INT, rng.integers(-2, 3, K.count(1)))
    z = coboundary(b)
    for ring in (Ring.INT, Ring.RAT):
        h = solve_coboundary(z, ring)
        assert coboundary(h) == z.to_ring(ring)
    # the torsion generator is rationally but not integrally exact
    t = cohomology_group(K, 2).generators[0]
    assert solve_coboundary(t, Ring.INT) is None
    assert solve_coboundary(t, Ring.RAT) is not None


def test_q_map_on_circle():
    K = cached_space("circle(3)")
    g = cohomology_group(K, 1).generators[0]
    assert q_map(K, 0, g).values == (1,)
    assert q_map(K, 0, g * 2).values == (0,)


def test_input_validation():
    K = cached_space("torus")
    with pytest.raises(DegreeError):
        CSCochain.make(K, 0, 0)
    with pytest.raises(RingError):
        canonical_lift(Cochain.zeros(K, 1, Ring.RAT))
    with pytest.raises(CocycleError):
        canonical_lift(Cochain.from_dict(K, 1, Ring.INT, {0: 1}))
    with pytest.raises(CocycleError):
        CharacterClass(random_cs_cochain(K, 1, 1, np.random.default_rng(0)))
    with pytest.raises(MatrixError):
        sl2z_defect(K, ((1, 1), (1, 1)), None, None)


@pytest.mark.parametrize("name", ["circle(3)", "torus", "rp(3)"])
def test_square_of_odd_canonical_lift_has_closed_form(name):
    K = cached_space(name)
    rng = np.random.default_rng(13)
    for _ in range(3):
        c = random_cocycle(K, 1, rng)
        x = canonical_lift(c)
        sq = cup_character(x, x)
        cr = c.to_ring(Ring.RAT)
        F1 = dc.homotopy_F(1, x, x)
        assert sq.c == cup(c, c)
        assert sq.h == cup_i(1, cr, cr) * Fraction(-1, 2) - coboundary(F1 * Fraction(1, 2))
        assert sq.omega.is_zero()


def test_g1_of_odd_cocycle_bounds_twice_the_square():
    K = cached_space("torus")
    rng = np.random.default_rng(14)
    x = random_character(K, 1, rng)
    g1 = dc.homotopy_G(1, x, x)
    assert cs_differential(g1) == cup_character(x, x) * 2


def test_boundary_identity_for_evaluation():
    K = cached_space("torus")
    rng = np.random.default_rng(15)
    x = random_character(K, 2, rng)
    for _ in range(5):
        tau = Chain(K, 2, Ring.INT, rng.integers(-2, 3, K.count(2)))
        lhs = sum(a * b for a, b in zip(x.h.to_list(), boundary(tau).to_list()))
        rhs = sum(a * b for a, b in zip((x.omega - x.c.to_ring(Ring.RAT)).to_list(), tau.to_list()))
        assert Fraction(lhs - rhs).denominator == 1


def test_half_dual_of_nonbounding_cycle_evaluates_to_half():
    K = cached_space("circle(3)")
    g = cohomology_group(K, 1, Ring.RAT).generators[0]
    x = CharacterClass(CSCochain.make(K, 2, 2, None, g * Fraction(1, 2), None))
    z = homology_group(K, 1).generators[0]
    assert evaluate_character(x, z) == Fraction(1, 2)
    assert not classes_equal(x, CharacterClass(CSCochain.zero(K, 2, 2)))
