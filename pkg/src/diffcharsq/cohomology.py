"""(Co)homology presentations with explicit generators and coordinates.

The chain complex is first shrunk by ``reduce_complex``; the remaining small
integral differentials are diagonalized with Smith normal form.  Generators
are pushed back to the simplicial complex through the recorded chain maps and
coordinates of arbitrary (co)cycles are pulled forward the same way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .complex_core import (
    Chain,
    Cochain,
    ComplexError,
    DegreeError,
    Ring,
    RingError,
    SimplicialComplex,
    boundary,
    coboundary,
)
from .exactla import SmithDecomposition, matmul, smith_normal_form
from .reduction import ReducedComplex, reduce_complex

__all__ = [
    "CocycleError",
    "CycleError",
    "CohomologyPresentation",
    "HomologyPresentation",
    "HomToZ2",
    "cohomology_group",
    "homology_group",
    "uct_iota",
    "uct_pi",
    "pair",
    "is_cocycle",
]


class CocycleError(ComplexError):
    pass


class CycleError(ComplexError):
    pass


def is_cocycle(c: Cochain) -> bool:
    return coboundary(c).is_zero()


@dataclass
class _Quotient:
    """ker(B)/im(A) for integer matrices A: Z^l -> Z^m, B: Z^m -> Z^n.

    ``basis`` columns (length m) span ker B; the first len(orders) are torsion
    generators of the given orders, the rest free.  ``coords(v)`` returns the
    coordinates of v in ker B with respect to ``basis`` (before reduction).
    """

    m: int
    orders: list[int]
    free_rank: int
    basis: list[list[int]]
    _rows: list[list[int]]  # linear map v -> coordinates

    def coords(self, v: Sequence[int]) -> list:
        return [sum(a * b for a, b in zip(row, v)) for row in self._rows]


def _quotient(A: list[list[int]], B: list[list[int]], m: int) -> _Quotient:
    if m == 0:
        return _Quotient(0, [], 0, [], [])
    # kernel of B
    if B and B[0]:
        sb = smith_normal_form(B)
        r = sb.rank
        V, Vi = sb.V, sb.V_inv
    else:
        r = 0
        V = [[int(i == j) for j in range(m)] for i in range(m)]
        Vi = V
    kdim = m - r
    K = [row[r:] for row in V]  # m x kdim
    Kinv = Vi[r:]  # kdim x m, left inverse on ker B
    if kdim == 0:
        return _Quotient(m, [], 0, [], [])
    # image of A inside ker B, in K coordinates
    if A and A[0]:
        Mp = matmul(Kinv, A)
        s2 = smith_normal_form(Mp)
        U2, U2i = s2.U, s2.U_inv
        factors = s2.factors
    else:
        U2 = [[int(i == j) for j in range(kdim)] for i in range(kdim)]
        U2i = U2
        factors = []
    basis_all = matmul(K, U2i)  # columns: new generators
    coord_all = matmul(U2, Kinv)  # rows: coordinate functionals
    orders: list[int] = []
    basis: list[list[int]] = []
    rows: list[list[int]] = []
    for j in range(kdim):
        d = factors[j] if j < len(factors) else 0
        if d == 1:
            continue
        if d > 1:
            orders.append(d)
        basis.append([basis_all[i][j] for i in range(m)])
        rows.append(coord_all[j])
    torsion_n = len(orders)
    return _Quotient(m, orders, len(basis) - torsion_n, basis, rows)


def _transpose(M: list[list[int]], nrows: int, ncols: int) -> list[list[int]]:
    if not M:
        return [[0] * nrows for _ in range(ncols)] if nrows == 0 else []
    return [list(col) for col in zip(*M)]


def _cohomology_quotient(R: ReducedComplex, k: int) -> _Quotient:
    key = ("cohom_q", k, R.mode)
    if key not in R.complex._cache:
        m = R.rank(k)
        # delta^{k-1} = d_k^T : M^{k-1} -> M^k ; delta^k = d_{k+1}^T : M^k -> M^{k+1}
        A = _transpose(R.matrix(k), R.rank(k - 1), m) if k >= 1 and R.rank(k - 1) else []
        B = _transpose(R.matrix(k + 1), m, R.rank(k + 1)) if R.rank(k + 1) else []
        if R.mode is Ring.MOD2 and (any(map(any, A)) or any(map(any, B))):
            raise ArithmeticError("mod-2 reduction left a nonzero differential")
        R.complex._cache[key] = _quotient(A, B, m)
    return R.complex._cache[key]


def _homology_quotient(R: ReducedComplex, k: int) -> _Quotient:
    key = ("hom_q", k, R.mode)
    if key not in R.complex._cache:
        m = R.rank(k)
        A = R.matrix(k + 1) if R.rank(k + 1) else []
        B = R.matrix(k) if k >= 1 and R.rank(k - 1) else []
        if R.mode is Ring.MOD2 and (any(map(any, A)) or any(map(any, B))):
            raise ArithmeticError("mod-2 reduction left a nonzero differential")
        R.complex._cache[key] = _quotient(A, B, m)
    return R.complex._cache[key]


# --------------------------------------------------------------------------


@dataclass
class CohomologyPresentation:
    """H^p(K; ring) with cocycle generators (torsion first, then free)."""

    complex: SimplicialComplex
    degree: int
    ring: Ring
    free_rank: int
    torsion_orders: list[int]
    generators: list[Cochain]
    _reduced: ReducedComplex = field(repr=False)
    _quot: _Quotient = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.generators)

    def coordinate_map(self, c: Cochain) -> list:
        """Coordinates of a cocycle: torsion parts mod their orders, free parts in the ring."""
        if c.complex is not self.complex or c.degree != self.degree:
            raise DegreeError("cochain does not belong to this group")
        if c.ring is not self.ring:
            raise RingError(f"expected a {self.ring.value} cochain, got {c.ring.value}")
        if not is_cocycle(c):
            raise CocycleError("coordinates requested for a non-cocycle")
        R = self._reduced
        off = R.offsets[self.degree]
        if self.ring is Ring.RAT:
            scale = c.den
            vals = c.values.tolist()
        else:
            scale = 1
            vals = c.values.tolist()
        phi = {off + i: int(v) for i, v in enumerate(vals) if v}
        restricted = R.restrict_cochain(self.degree, phi)
        vec = [restricted[x] for x in R.cells[self.degree]]
        raw = self._quot.coords(vec)
        if self.ring is Ring.MOD2:
            return [w & 1 for w in raw]
        orders = self._quot.orders  # integral torsion, also present under Rat
        if self.ring is Ring.RAT:
            return [Fraction(w, scale) for w in raw[len(orders):]]
        return [w % orders[j] if j < len(orders) else w for j, w in enumerate(raw)]

    coordinates = coordinate_map

    def is_coboundary(self, c: Cochain) -> bool:
        return not any(self.coordinate_map(c))

    def combination(self, coords: Sequence) -> Cochain:
        """The cocycle sum_j coords[j] * generators[j]."""
        if len(coords) != len(self.generators):
            raise DegreeError("wrong number of coordinates")
        out = Cochain.zeros(self.complex, self.degree, self.ring)
        for a, g in zip(coords, self.generators):
            if a:
                out = out + g * a
        return out

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "ring": self.ring.value,
            "free_rank": self.free_rank,
            "torsion": list(self.torsion_orders),
        }


def cohomology_group(K: SimplicialComplex, p: int, ring: Ring | str = Ring.INT) -> CohomologyPresentation:
    ring = Ring.parse(ring)
    if not 0 <= p <= K.dimension:
        raise DegreeError(f"degree {p} outside 0..{K.dimension}")
    key = ("cohomology", p, ring)
    if key in K._cache:
        return K._cache[key]
    R = reduce_complex(K, Ring.MOD2 if ring is Ring.MOD2 else Ring.INT)
    q = _cohomology_quotient(R, p)
    orders = list(q.orders)
    basis = q.basis
    if ring is Ring.RAT:
        basis = basis[len(orders):]
        orders_out: list[int] = []
    elif ring is Ring.MOD2:
        orders_out = []
    else:
        orders_out = orders
    off = R.offsets[p]
    gens = []
    for col in basis:
        psi = {c: v for c, v in zip(R.cells[p], col) if v}
        phi = R.extend_cochain(p, psi)
        vals = [0] * K.count(p)
        for cell, v in phi.items():
            if v:
                vals[cell - off] = v
        g = Cochain(K, p, ring, vals) if ring is not Ring.MOD2 else Cochain(K, p, ring, [v & 1 for v in vals])
        if not is_cocycle(g):
            raise ArithmeticError("generator is not a cocycle")
        gens.append(g)
    if ring is Ring.MOD2:
        free = len(gens)
    else:
        free = q.free_rank
    pres = CohomologyPresentation(K, p, ring, free, orders_out, gens, R, q)
    K._cache[key] = pres
    return pres


@dataclass
class HomologyPresentation:
    """H_p(K; ring) with cycle generators (torsion first, then free)."""

    complex: SimplicialComplex
    degree: int
    ring: Ring
    free_rank: int
    torsion_orders: list[int]
    generators: list[Chain]
    _reduced: ReducedComplex = field(repr=False)
    _quot: _Quotient = field(repr=False)

    def coordinate_map(self, z: Chain) -> list:
        if z.complex is not self.complex or z.degree != self.degree:
            raise DegreeError("chain does not belong to this group")
        if self.degree > 0 and not boundary(z).is_zero():
            raise CycleError("coordinates requested for a non-cycle")
        R = self._reduced
        off = R.offsets[self.degree]
        c = {off + i: int(v) for i, v in enumerate(z.values.tolist()) if v}
        proj = R.project_chain(self.degree, c)
        raw = self._quot.coords([proj[x] for x in R.cells[self.degree]])
        out = []
        for j, w in enumerate(raw):
            if self.ring is Ring.MOD2:
                out.append(w & 1)
            elif j < len(self.torsion_orders):
                out.append(w % self.torsion_orders[j])
            else:
                out.append(w)
        return out

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "ring": self.ring.value,
            "free_rank": self.free_rank,
            "torsion": list(self.torsion_orders),
        }


def homology_group(K: SimplicialComplex, p: int, ring: Ring | str = Ring.INT) -> HomologyPresentation:
    ring = Ring.parse(ring)
    if ring is Ring.RAT:
        raise RingError("rational homology is not needed; use Ring.INT")
    if not 0 <= p <= K.dimension:
        raise DegreeError(f"degree {p} outside 0..{K.dimension}")
    key = ("homology", p, ring)
    if key in K._cache:
        return K._cache[key]
    R = reduce_complex(K, ring)
    q = _homology_quotient(R, p)
    off = R.offsets[p]
    gens = []
    for col in q.basis:
        z = {c: v for c, v in zip(R.cells[p], col) if v}
        full = R.include_chain(p, z)
        vals = [0] * K.count(p)
        for cell, v in full.items():
            if v:
                vals[cell - off] = v
        ch = Chain(K, p, ring, vals if ring is Ring.INT else [v & 1 for v in vals])
        if p > 0 and not boundary(ch).is_zero():
            raise ArithmeticError("homology generator is not a cycle")
        gens.append(ch)
    orders = list(q.orders) if ring is Ring.INT else []
    free = q.free_rank if ring is Ring.INT else len(gens)
    pres = HomologyPresentation(K, p, ring, free, orders, gens, R, q)
    K._cache[key] = pres
    return pres


# --------------------------------------------------------------------------


def pair(c: Cochain, sigma: Chain):
    """Kronecker pairing sum_s c(s) sigma(s); mod 2 if either side is mod 2."""
    if c.complex is not sigma.complex:
        raise ComplexError("cochain and chain live on different complexes")
    if c.degree != sigma.degree:
        raise DegreeError(f"cannot pair degree {c.degree} with degree {sigma.degree}")
    if c.ring is Ring.MOD2 or sigma.ring is Ring.MOD2:
        if c.den != 1 or sigma.den != 1:
            raise RingError("cannot reduce non-integral data mod 2")
        a = np.asarray([int(v) & 1 for v in c.values.tolist()], dtype=np.int64)
        b = np.asarray([int(v) & 1 for v in sigma.values.tolist()], dtype=np.int64)
        return int(a @ b) & 1
    total = sum(x * y for x, y in zip(c.values.tolist(), sigma.values.tolist()) if x and y)
    den = c.den * sigma.den
    if den == 1 and c.ring is Ring.INT and sigma.ring is Ring.INT:
        return int(total)
    return Fraction(total, den)


def uct_iota(K: SimplicialComplex, p: int, c: Cochain) -> Cochain:
    """Reduction mod 2 of an integral cocycle."""
    if c.ring is not Ring.INT:
        raise RingError("uct_iota expects an integral cochain")
    if c.complex is not K or c.degree != p:
        raise DegreeError("cochain does not live in the requested degree")
    if not is_cocycle(c):
        raise CocycleError("uct_iota expects a cocycle")
    return c.to_ring(Ring.MOD2)


@dataclass(frozen=True)
class HomToZ2:
    """Element of Hom(H_p(K; Z), Z/2), one value per integral homology generator."""

    source: HomologyPresentation
    values: tuple[int, ...]

    def __eq__(self, other) -> bool:
        return isinstance(other, HomToZ2) and other.source is self.source and other.values == self.values

    def __hash__(self) -> int:
        return hash(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)


def uct_pi(K: SimplicialComplex, p: int, z: Cochain) -> HomToZ2:
    """Evaluate a mod-2 cocycle on the integral homology generators."""
    if z.ring is not Ring.MOD2:
        raise RingError("uct_pi expects a mod-2 cochain")
    if z.complex is not K or z.degree != p:
        raise DegreeError("cochain does not live in the requested degree")
    if not is_cocycle(z):
        raise CocycleError("uct_pi expects a cocycle")
    H = homology_group(K, p, Ring.INT)
    return HomToZ2(H, tuple(pair(z, g) for g in H.generators))
