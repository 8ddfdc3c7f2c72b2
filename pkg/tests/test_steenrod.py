from __future__ import annotations

import pytest

from diffcharsq.cohomology import CocycleError, cohomology_group
from diffcharsq.complex_core import Cochain, ComplexError, Ring, RingError, SimplicialComplex, build_space_with_projections
from diffcharsq.diagonal import cup
from diffcharsq.steenrod import (
    DualityError,
    is_spin,
    steenrod_square,
    stiefel_whitney_classes,
    unit_cochain,
    verify_axioms,
    wu_classes,
)

from conftest import cached_space
from oracles import sq_on_power


def _powers(K):
    """Cocycle representatives of a^j in H^j(RP^n; Z/2)."""
    a = cohomology_group(K, 1, Ring.MOD2).generators[0]
    out = [unit_cochain(K), a]
    for _ in range(2, K.dimension + 1):
        out.append(cup(out[-1], a))
    return out


@pytest.mark.parametrize("name", ["rp(3)", "rp(4)"])
def test_squares_on_projective_space_match_binomials(name):
    K = cached_space(name)
    pw = _powers(K)
    n = K.dimension
    for j in range(1, n + 1):
        assert cohomology_group(K, j, Ring.MOD2).coordinate_map(pw[j]) == [1]
        for i in range(0, n - j + 1):
            got = cohomology_group(K, i + j, Ring.MOD2).coordinate_map(steenrod_square(i, pw[j]))
            assert got == [sq_on_power(i, j)], (i, j)


@pytest.mark.parametrize("name", ["circle(3)", "torus", "klein_bottle", "rp(2)", "rp(3)", "cp2"])
def test_axioms(name):
    report = verify_axioms(cached_space(name))
    assert report.passed, report.to_json()
    assert report.checks["sq0_identity"].checked > 0


def test_axioms_with_product_projections():
    K, proj = build_space_with_projections("rp(2) x circle(3)")
    report = verify_axioms(K, proj)
    assert report.passed, report.to_json()


def test_sq2_on_cp2_is_the_cup_square():
    K = cached_space("cp2")
    u = cohomology_group(K, 2, Ring.MOD2).generators[0]
    assert cohomology_group(K, 4, Ring.MOD2).coordinate_map(steenrod_square(2, u)) == [1]


WU = {
    "rp(2)": [[1], [1], [0]],
    "rp(4)": [[1], [1], [1], [0], [0]],
    "rp(5)": [[1], [0], [1], [0], [0], [0]],
    "cp2": [[1], [], [1], [], [0]],
    "sphere(2)": [[1], [], [0]],
    "sphere(3)": [[1], [], [], [0]],
}
SW = {
    "rp(2)": [[1], [1], [1]],
    "rp(4)": [[1], [1], [0], [0], [1]],
    "rp(5)": [[1], [0], [1], [0], [1], [0]],
    "cp2": [[1], [], [1], [], [1]],
    "sphere(2)": [[1], [], [0]],
}


@pytest.mark.parametrize("name", list(WU))
def test_wu_classes(name):
    assert wu_classes(cached_space(name)).coordinates == WU[name]


@pytest.mark.parametrize("name", list(SW))
def test_stiefel_whitney_classes(name):
    assert stiefel_whitney_classes(cached_space(name)).coordinates == SW[name]


def test_spin_structure():
    assert is_spin(cached_space("torus^5"))
    assert not any(any(c) for c in wu_classes(cached_space("torus^5")).coordinates[1:])
    assert not is_spin(cached_space("rp(5)"))
    assert is_spin(cached_space("sphere(3)"))
    assert is_spin(cached_space("rp(3)"))


def test_klein_bottle_is_not_orientable():
    w = stiefel_whitney_classes(cached_space("klein_bottle"))
    assert any(w.coordinates[1]) and not any(w.coordinates[2])


def test_wu_needs_a_closed_manifold():
    with pytest.raises((DualityError, ComplexError)):
        wu_classes(SimplicialComplex([(0, 1, 2), (0, 1, 3)]))


def test_steenrod_square_input_checks():
    K = cached_space("rp(2)")
    with pytest.raises(RingError):
        steenrod_square(0, Cochain.zeros(K, 1, Ring.INT))
    with pytest.raises(CocycleError):
        steenrod_square(0, Cochain.from_dict(K, 1, Ring.MOD2, {0: 1}))
    a = cohomology_group(K, 1, Ring.MOD2).generators[0]
    assert steenrod_square(2, a).degree == 3 and steenrod_square(2, a).is_zero()
