"""Steenrod squares via cup-i products, axiom checks, Wu and Stiefel-Whitney classes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .cohomology import CocycleError, CohomologyPresentation, cohomology_group, is_cocycle, pair
from .complex_core import (
    Cochain,
    ComplexError,
    Ring,
    RingError,
    SimplicialComplex,
    VertexMap,
    fundamental_cycle,
)
from .diagonal import cup, cup_i
from .exactla import gf2_solve

__all__ = [
    "DualityError",
    "steenrod_square",
    "unit_cochain",
    "AxiomReport",
    "verify_axioms",
    "WuVector",
    "wu_classes",
    "stiefel_whitney_classes",
    "is_spin",
]


class DualityError(ComplexError):
    pass


def steenrod_square(i: int, z: Cochain) -> Cochain:
    """Sq^i z = D^(p-i)(z (x) z) for a mod-2 cocycle z of degree p; zero for i > p."""
    if z.ring is not Ring.MOD2:
        raise RingError("Steenrod squares act on mod-2 cochains")
    if i < 0:
        raise ValueError("negative Steenrod index")
    if not is_cocycle(z):
        raise CocycleError("Sq^i needs a cocycle")
    p = z.degree
    if i > p:
        return Cochain.zeros(z.complex, p + i, Ring.MOD2)
    return cup_i(p - i, z, z)


def unit_cochain(K: SimplicialComplex, ring: Ring | str = Ring.MOD2) -> Cochain:
    """The 0-cochain with value 1 on every vertex."""
    return Cochain(K, 0, ring, [1] * K.count(0))


def _class_of(H: CohomologyPresentation, z: Cochain) -> tuple[int, ...]:
    return tuple(H.coordinate_map(z))


# --------------------------------------------------------------------------
# axioms


@dataclass
class AxiomCheck:
    passed: bool = True
    checked: int = 0
    witness: dict | None = None

    def record(self, ok: bool, witness: dict) -> None:
        self.checked += 1
        if not ok and self.passed:
            self.passed = False
            self.witness = witness


@dataclass
class AxiomReport:
    checks: dict[str, AxiomCheck] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            name: {"passed": c.passed, "checked": c.checked, "witness": c.witness}
            for name, c in self.checks.items()
        }


def _classes(H: CohomologyPresentation, limit: int = 1 << 12):
    """All classes of H (as coordinate tuples) when there are at most ``limit``, else the basis."""
    r = len(H.generators)
    if (1 << r) <= limit:
        for bits in itertools.product((0, 1), repeat=r):
            if any(bits):
                yield bits
    else:
        for j in range(r):
            yield tuple(int(k == j) for k in range(r))


def verify_axioms(K: SimplicialComplex, projections: tuple[VertexMap, VertexMap] | None = None) -> AxiomReport:
    """Check Sq^0 = 1, Sq^p = cup square, vanishing above degree and the Cartan formula.

    The Cartan formula is tested on pairs of basis classes of K and, when the
    two projections of a product complex are given, on cup products of
    classes pulled back from the factors.
    """
    report = AxiomReport({"sq0_identity": AxiomCheck(), "top_square": AxiomCheck(),
                          "vanishing": AxiomCheck(), "cartan": AxiomCheck()})
    n = K.dimension
    H = [cohomology_group(K, p, Ring.MOD2) for p in range(n + 1)]
    for p in range(n + 1):
        for bits in _classes(H[p]):
            z = H[p].combination(bits)
            report.checks["sq0_identity"].record(
                _class_of(H[p], steenrod_square(0, z)) == bits, {"degree": p, "class": list(bits)}
            )
            if 2 * p <= n:
                ok = _class_of(H[2 * p], steenrod_square(p, z)) == _class_of(H[2 * p], cup(z, z))
                report.checks["top_square"].record(ok, {"degree": p, "class": list(bits)})
            for i in range(p + 1, n - p + 1):
                report.checks["vanishing"].record(
                    steenrod_square(i, z).is_zero(), {"degree": p, "i": i, "class": list(bits)}
                )
    pairs: list[tuple[Cochain, Cochain]] = []
    for p in range(n + 1):
        for q in range(n + 1 - p):
            for x in H[p].generators:
                for y in H[q].generators:
                    pairs.append((x, y))
    if projections is not None:
        pr1, pr2 = projections
        for p in range(pr1.codomain.dimension + 1):
            for q in range(pr2.codomain.dimension + 1):
                if p + q > n:
                    continue
                for a in cohomology_group(pr1.codomain, p, Ring.MOD2).generators:
                    for b in cohomology_group(pr2.codomain, q, Ring.MOD2).generators:
                        pairs.append((pr1.pullback(a), pr2.pullback(b)))
    for x, y in pairs:
        p, q = x.degree, y.degree
        xy = cup(x, y)
        for k in range(0, n - p - q + 1):
            lhs = steenrod_square(k, xy)
            rhs = Cochain.zeros(K, p + q + k, Ring.MOD2)
            for i in range(k + 1):
                rhs = rhs + cup(steenrod_square(i, x), steenrod_square(k - i, y))
            ok = H[p + q + k].is_coboundary(lhs - rhs)
            report.checks["cartan"].record(ok, {"degrees": [p, q], "k": k})
    return report


# --------------------------------------------------------------------------
# Wu and Stiefel-Whitney classes


@dataclass
class WuVector:
    """Wu classes v_0..v_n as mod-2 cocycles with their coordinates."""

    dimension: int
    classes: list[Cochain]
    coordinates: list[list[int]]

    def to_json(self) -> dict:
        return {f"v{k}": c for k, c in enumerate(self.coordinates)}


def _evaluate_top(z: Cochain, fundamental) -> int:
    return pair(z, fundamental)


def wu_classes(K: SimplicialComplex) -> WuVector:
    """Solve <v_k u x, [X]> = <Sq^k x, [X]> for every x of degree n - k."""
    key = ("wu",)
    if key in K._cache:
        return K._cache[key]
    n = K.dimension
    fund = fundamental_cycle(K, Ring.MOD2)
    classes: list[Cochain] = []
    coords: list[list[int]] = []
    for k in range(n + 1):
        Hk = cohomology_group(K, k, Ring.MOD2)
        Hd = cohomology_group(K, n - k, Ring.MOD2)
        if k == 0:
            v = unit_cochain(K)
            classes.append(v)
            coords.append(Hk.coordinate_map(v))
            continue
        if not Hd.generators or not Hk.generators:
            if Hd.generators or Hk.generators:
                raise DualityError(f"H^{k} and H^{n - k} differ in rank; not a closed manifold")
            classes.append(Cochain.zeros(K, k, Ring.MOD2))
            coords.append([])
            continue
        A = [[_evaluate_top(cup(y, x), fund) for y in Hk.generators] for x in Hd.generators]
        b = [_evaluate_top(steenrod_square(k, x), fund) for x in Hd.generators]
        res = gf2_solve(A, b)
        if res is None:
            raise DualityError(f"Wu system in degree {k} has no solution")
        sol, kernel = res
        if kernel or len(Hk.generators) != len(Hd.generators):
            raise DualityError(f"cup pairing H^{k} x H^{n - k} is degenerate")
        classes.append(Hk.combination(sol))
        coords.append(list(sol))
    wu = WuVector(n, classes, coords)
    K._cache[key] = wu
    return wu


def stiefel_whitney_classes(K: SimplicialComplex) -> WuVector:
    """w_j = sum_i Sq^(j-i) v_i, returned in the same container shape as the Wu vector."""
    wu = wu_classes(K)
    n = K.dimension
    classes, coords = [], []
    for j in range(n + 1):
        w = Cochain.zeros(K, j, Ring.MOD2)
        for i in range(j + 1):
            w = w + steenrod_square(j - i, wu.classes[i])
        classes.append(w)
        coords.append(cohomology_group(K, j, Ring.MOD2).coordinate_map(w))
    return WuVector(n, classes, coords)


def is_spin(K: SimplicialComplex) -> bool:
    """True iff w_1 and w_2 vanish (closed manifolds of dimension 1..5)."""
    if not 1 <= K.dimension <= 5:
        raise ComplexError("is_spin is implemented for dimensions 1..5")
    w = stiefel_whitney_classes(K)
    return not any(w.coordinates[1]) and (K.dimension < 2 or not any(w.coordinates[2]))
