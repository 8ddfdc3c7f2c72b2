from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diffcharsq.complex_core import (
    Chain,
    Cochain,
    ComplexFileError,
    DescriptorError,
    NotFreeError,
    NotSimplicialError,
    OrientabilityError,
    Ring,
    RingError,
    ShapeError,
    SimplicialComplex,
    barycentric_subdivision,
    boundary,
    build_space_with_projections,
    build_standard_space,
    coboundary,
    fundamental_cycle,
    parse_complex,
    parse_space_descriptor,
    product_complex,
    quotient_by_free_involution,
)

from conftest import cached_space

SMALL = ["circle(3)", "circle(12)", "torus", "klein_bottle", "rp(2)", "rp(3)", "sphere(2)", "cp2"]

EULER = {
    "circle(3)": 0, "circle(12)": 0, "torus": 0, "klein_bottle": 0,
    "rp(2)": 1, "rp(3)": 0, "sphere(2)": 2, "cp2": 3, "rp(4)": 1, "rp(2) x circle(3)": 0,
}


@pytest.mark.parametrize("name", list(EULER))
def test_euler_characteristic(name):
    assert cached_space(name).euler_characteristic == EULER[name]


def test_known_face_counts():
    assert cached_space("rp(3)").f_vector == (40, 232, 384, 192)
    assert cached_space("cp2").f_vector == (9, 36, 84, 90, 36)
    assert cached_space("torus").f_vector == (9, 27, 18)
    assert cached_space("circle(12)").f_vector == (12, 12)


@pytest.mark.parametrize("name", SMALL)
def test_faces_sorted_and_closed(name):
    K = cached_space(name)
    for p in range(K.dimension + 1):
        faces = K.faces[p]
        assert list(faces) == sorted(faces)
        assert all(list(s) == sorted(s) and len(s) == p + 1 for s in faces)
    for p in range(1, K.dimension + 1):
        lower = set(K.faces[p - 1])
        assert all(s[:k] + s[k + 1:] in lower for s in K.faces[p] for k in range(p + 1))


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("ring", [Ring.INT, Ring.MOD2, Ring.RAT])
def test_coboundary_squares_to_zero(name, ring):
    K = cached_space(name)
    rng = np.random.default_rng(3)
    for p in range(K.dimension - 1):
        vals = rng.integers(-5, 6, K.count(p))
        c = Cochain(K, p, ring, vals) if ring is not Ring.RAT else Cochain.from_values(K, p, ring, [Fraction(int(v), 3) for v in vals])
        assert coboundary(coboundary(c)).is_zero()


@pytest.mark.parametrize("name", SMALL)
def test_boundary_squares_to_zero_and_adjoint(name):
    K = cached_space(name)
    rng = np.random.default_rng(4)
    for p in range(1, K.dimension + 1):
        z = Chain(K, p, Ring.INT, rng.integers(-3, 4, K.count(p)))
        if p >= 2:
            assert boundary(boundary(z)).is_zero()
        c = Cochain(K, p - 1, Ring.INT, rng.integers(-3, 4, K.count(p - 1)))
        lhs = sum(int(a) * int(b) for a, b in zip(coboundary(c).to_list(), z.to_list()))
        rhs = sum(int(a) * int(b) for a, b in zip(c.to_list(), boundary(z).to_list()))
        assert lhs == rhs


def test_coboundary_by_hand_on_triangle():
    K = SimplicialComplex([(0, 1, 2)])
    c = Cochain.from_dict(K, 1, Ring.INT, {K.index((0, 1)): 1})
    # (delta c)(012) = c(12) - c(02) + c(01)
    assert coboundary(c).to_list() == [1]
    c = Cochain.from_dict(K, 1, Ring.INT, {K.index((0, 2)): 1})
    assert coboundary(c).to_list() == [-1]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=27, max_size=27), st.lists(st.integers(-20, 20), min_size=27, max_size=27))
def test_cochain_arithmetic_is_linear(a, b):
    K = cached_space("torus")
    x, y = Cochain(K, 1, Ring.INT, a), Cochain(K, 1, Ring.INT, b)
    assert coboundary(x + y) == coboundary(x) + coboundary(y)
    assert (x - y) + y == x
    assert (x * 3).to_list() == [3 * v for v in a]
    assert x.to_ring(Ring.MOD2).to_list() == [v % 2 for v in a]


def test_rational_cochains_normalize():
    K = cached_space("circle(3)")
    c = Cochain.from_values(K, 0, Ring.RAT, [Fraction(1, 2), Fraction(1, 3), 1])
    assert c.to_list() == [Fraction(1, 2), Fraction(1, 3), Fraction(1)]
    assert (c * 6).to_ring(Ring.INT).to_list() == [3, 2, 6]
    assert c.frac_part().to_list() == [Fraction(1, 2), Fraction(1, 3), 0]
    with pytest.raises(RingError):
        c.to_ring(Ring.INT)


def test_ring_mismatch_rejected():
    K = cached_space("circle(3)")
    with pytest.raises(RingError):
        Cochain.zeros(K, 0, Ring.INT) + Cochain.zeros(K, 0, Ring.MOD2)


def test_descriptors():
    assert parse_space_descriptor("rp3") == [("rp", 3)]
    assert parse_space_descriptor("torus^5") == [("torus", 5)]
    assert parse_space_descriptor("circle") == [("circle", 3)]
    assert parse_space_descriptor("rp(2) x circle(3)") == [("rp", 2), ("circle", 3)]
    for bad in ["", "foo", "rp", "circle(2)", "sphere"]:
        with pytest.raises(DescriptorError):
            parse_space_descriptor(bad)


def test_product_projections_preserve_order_and_commute_with_coboundary():
    K, (pr1, pr2) = build_space_with_projections("rp(2) x circle(3)")
    assert pr1.is_order_preserving() and pr2.is_order_preserving()
    assert K.dimension == 3 and K.euler_characteristic == 0
    rng = np.random.default_rng(0)
    for pr in (pr1, pr2):
        B = pr.codomain
        for p in range(B.dimension):
            c = Cochain(B, p, Ring.INT, rng.integers(-3, 4, B.count(p)))
            assert coboundary(pr.pullback(c)) == pr.pullback(coboundary(c))


def test_product_of_circles_is_torus():
    S = cached_space("circle(3)")
    T, _, _ = product_complex(S, S)
    assert T.f_vector == (9, 27, 18)


def test_barycentric_subdivision_counts():
    K = cached_space("circle(3)")
    sd, labels = barycentric_subdivision(K)
    assert sd.f_vector == (6, 6) and len(labels) == 6
    tri = SimplicialComplex([(0, 1, 2)])
    sd, _ = barycentric_subdivision(tri)
    assert sd.f_vector == (7, 12, 6)


def test_quotient_requires_free_involution():
    S = cached_space("circle(12)")
    flip = [(v + 6) % 12 for v in range(12)]
    Q, _ = quotient_by_free_involution(S, flip)
    assert Q.f_vector == (6, 6)
    with pytest.raises(NotFreeError):
        quotient_by_free_involution(cached_space("circle(3)"), [0, 2, 1])


def test_fundamental_cycles():
    for name in ["circle(3)", "torus", "rp(3)", "sphere(2)", "cp2"]:
        K = cached_space(name)
        z = fundamental_cycle(K, Ring.INT)
        assert boundary(z).is_zero() and all(abs(v) == 1 for v in z.to_list())
    for name in ["klein_bottle", "rp(2)"]:
        with pytest.raises(OrientabilityError):
            fundamental_cycle(cached_space(name), Ring.INT)
        assert boundary(fundamental_cycle(cached_space(name), Ring.MOD2)).is_zero()
    with pytest.raises(ShapeError):
        fundamental_cycle(SimplicialComplex([(0, 1, 2)]), Ring.MOD2)


def test_complex_file_errors_carry_line_numbers():
    ok = parse_complex('{"vertices": 3, "facets": [[0, 1], [1, 2], [0, 2]]}')
    assert ok.f_vector == (3, 3)
    with pytest.raises(ComplexFileError) as exc:
        parse_complex('{"vertices": 3,\n "facets": [[0, 1],\n [0, 9]]}')
    assert exc.value.line == 3
    with pytest.raises(ComplexFileError) as exc:
        parse_complex('{"vertices": 3,\n "facets": [[0, 1]\n [0, 2]]}')
    assert exc.value.line == 3


def test_antipodal_quotients():
    S = cached_space("cross_polytope_sphere(2)")
    anti = [v ^ 1 for v in range(6)]
    with pytest.raises(NotSimplicialError):
        quotient_by_free_involution(S, anti)
    sd, labels = barycentric_subdivision(S)
    ident = {s: i for i, s in enumerate(labels)}
    tau = [ident[tuple(sorted(anti[v] for v in s))] for s in labels]
    Q, proj = quotient_by_free_involution(sd, tau)
    assert Q.euler_characteristic == 1
    assert all(2 * a == b for a, b in zip(Q.f_vector, sd.f_vector))
    rng = np.random.default_rng(6)
    for p in range(2):
        c = Cochain(Q, p, Ring.INT, rng.integers(-3, 4, Q.count(p)))
        assert coboundary(proj.pullback(c)) == proj.pullback(coboundary(c))


def test_product_with_a_point_is_the_same_complex():
    K = cached_space("rp(2)")
    P, _, _ = product_complex(K, SimplicialComplex([(0,)]))
    assert P.f_vector == K.f_vector


def test_simplex_sphere_counts_and_cycle():
    K = cached_space("simplex_sphere(2)")
    assert K.f_vector == (4, 6, 4) and K.euler_characteristic == 2
    z = fundamental_cycle(K, Ring.INT)
    assert boundary(z).is_zero() and len(z.to_list()) == 4


def test_rebuilding_gives_identical_face_order():
    a, b = build_standard_space("rp(3)"), build_standard_space("rp(3)")
    assert a is not b and all(list(a.faces[p]) == list(b.faces[p]) for p in range(4))
