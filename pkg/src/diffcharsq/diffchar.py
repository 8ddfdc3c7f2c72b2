"""Discrete differential-character complex, its cup product and homotopies.

Forms are rational cochains, d = delta, wedge is the symmetrized cup product
and the wedge-vs-cup homotopies are B^0 = 0, B^i = -1/2 D^i.  Elements of the
level-p complex in degree q are triples (c, h, omega) with c integral of
degree q, h rational of degree q - 1 and omega rational of degree q; omega is
absent below the level and h is absent in degree 0.  Missing components
are stored as ``None`` and read as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cohomology import (
    CocycleError,
    CycleError,
    HomToZ2,
    cohomology_group,
    homology_group,
    is_cocycle,
    pair,
    uct_iota,
    uct_pi,
)
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
    fundamental_cycle,
)
from .diagonal import cup, cup_i, swap_sign
from .exactla import solve_linear, SparseMatrix
from .steenrod import steenrod_square

__all__ = [
    "CSCochain",
    "CharacterClass",
    "MatrixError",
    "ConsistencyError",
    "cs_differential",
    "discrete_wedge",
    "b_homotopy",
    "cup_character",
    "homotopy_F",
    "homotopy_G",
    "tensor_differential",
    "proposition_defect",
    "proof_formula_defect",
    "evaluate_character",
    "classes_equal",
    "canonical_lift",
    "is_integral_form",
    "character_from_form",
    "flat_character",
    "solve_coboundary",
    "q_hat",
    "q_map",
    "TheoremReport",
    "verify_main_theorem",
    "cs_action",
    "sl2z_defect",
    "random_cs_cochain",
    "random_cocycle",
    "random_character",
]


class MatrixError(ValueError):
    pass


class ConsistencyError(ArithmeticError):
    pass


Pair = tuple["CSCochain", "CSCochain"]


def _rat(c: Cochain | None) -> Cochain | None:
    return None if c is None else c.to_ring(Ring.RAT)


def _add(a: Cochain | None, b: Cochain | None) -> Cochain | None:
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def _scale(a: Cochain | None, s) -> Cochain | None:
    return None if a is None else a * s


def _eq(a: Cochain | None, b: Cochain | None) -> bool:
    if a is None or a.is_zero():
        return b is None or b.is_zero()
    if b is None:
        return a.is_zero()
    return a == b


@dataclass(frozen=True)
class CSCochain:
    """(c, h, omega) in the level-``level`` complex, degree ``degree``."""

    complex: SimplicialComplex
    level: int
    degree: int
    c: Cochain | None
    h: Cochain | None
    omega: Cochain | None

    def __post_init__(self):
        if self.level < 1:
            raise DegreeError("levels start at 1")
        K, q = self.complex, self.degree
        for name, comp, deg, ring in (("c", self.c, q, Ring.INT), ("h", self.h, q - 1, Ring.RAT), ("omega", self.omega, q, Ring.RAT)):
            if comp is None:
                continue
            if comp.complex is not K or comp.degree != deg:
                raise DegreeError(f"component {name} must have degree {deg}")
            if comp.ring is not ring:
                raise RingError(f"component {name} must have ring {ring.value}")
        if self.omega is not None and q < self.level:
            raise DegreeError("no form component below the level")

    @property
    def has_form(self) -> bool:
        return self.degree >= self.level

    @classmethod
    def make(cls, K: SimplicialComplex, level: int, degree: int, c=None, h=None, omega=None) -> "CSCochain":
        """Build with zero-filled components where a slot exists; out-of-range slots become None."""
        def fill(comp, deg, ring):
            if deg < 0:
                if comp is not None and not comp.is_zero():
                    raise DegreeError("nonzero component in negative degree")
                return None
            if comp is None:
                return Cochain.zeros(K, deg, ring)
            return comp.to_ring(ring) if comp.ring is not ring else comp
        return cls(
            K,
            level,
            degree,
            fill(c, degree, Ring.INT),
            fill(h, degree - 1, Ring.RAT),
            fill(omega, degree, Ring.RAT) if degree >= level else _reject_form(omega),
        )

    @classmethod
    def zero(cls, K: SimplicialComplex, level: int, degree: int) -> "CSCochain":
        return cls.make(K, level, degree)

    def _check(self, other: "CSCochain") -> None:
        if other.complex is not self.complex or other.level != self.level or other.degree != self.degree:
            raise DegreeError(
                f"cannot combine level {self.level}/degree {self.degree} with level {other.level}/degree {other.degree}"
            )

    def __add__(self, other: "CSCochain") -> "CSCochain":
        self._check(other)
        return CSCochain(self.complex, self.level, self.degree, _add(self.c, other.c), _add(self.h, other.h), _add(self.omega, other.omega))

    def __neg__(self) -> "CSCochain":
        return self * -1

    def __sub__(self, other: "CSCochain") -> "CSCochain":
        return self + (-other)

    def __mul__(self, s: int) -> "CSCochain":
        if Fraction(s).denominator != 1:
            raise RingError("the integral component only admits integer scalars")
        s = int(s)
        return CSCochain(self.complex, self.level, self.degree, _scale(self.c, s), _scale(self.h, s), _scale(self.omega, s))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(comp is None or comp.is_zero() for comp in (self.c, self.h, self.omega))

    def __eq__(self, other) -> bool:
        if not isinstance(other, CSCochain):
            return NotImplemented
        return (
            other.complex is self.complex
            and other.level == self.level
            and other.degree == self.degree
            and _eq(self.c, other.c)
            and _eq(self.h, other.h)
            and _eq(self.omega, other.omega)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"CSCochain(level={self.level}, degree={self.degree}, c={self.c!r}, h={self.h!r}, omega={self.omega!r})"


def _reject_form(omega):
    if omega is not None and not omega.is_zero():
        raise DegreeError("no form component below the level")
    return None


# --------------------------------------------------------------------------
# differential, wedge, homotopies


def cs_differential(x: CSCochain) -> CSCochain:
    K, p, q = x.complex, x.level, x.degree
    dc = coboundary(x.c) if x.c is not None else None
    dh = coboundary(x.h) if x.h is not None else None
    new_h = _add(_scale(_rat(x.c), -1), _scale(dh, -1))
    if q < p:
        omega = None  # q = p - 1 gets a zero form slot from make()
    else:
        omega = coboundary(x.omega)
        new_h = _add(new_h, x.omega)
    return CSCochain.make(K, p, q + 1, dc, new_h, omega)


def discrete_wedge(alpha: Cochain, beta: Cochain) -> Cochain:
    """1/2 (alpha u beta + (-1)^{|alpha||beta|} beta u alpha) on rational cochains."""
    a, b = _rat(alpha), _rat(beta)
    return (cup(a, b) + swap_sign(a.degree, b.degree) * cup(b, a)) * Fraction(1, 2)


def b_homotopy(i: int, alpha: Cochain | None, beta: Cochain | None) -> Cochain | None:
    """B^0 = 0 and B^i = -1/2 D^i for i >= 1; None when an input is missing or the degree is negative."""
    if i < 0:
        raise ValueError("negative homotopy index")
    if alpha is None or beta is None:
        return None
    deg = alpha.degree + beta.degree - i
    if deg < 0:
        return None
    if i == 0:
        return Cochain.zeros(alpha.complex, deg, Ring.RAT)
    return cup_i(i, _rat(alpha), _rat(beta)) * Fraction(-1, 2)


def _D(i: int, a: Cochain | None, b: Cochain | None) -> Cochain | None:
    """D^i on rational versions of a and b; None for missing inputs, i < 0 or negative degree."""
    if i < 0 or a is None or b is None:
        return None
    if a.degree + b.degree - i < 0:
        return None
    return cup_i(i, _rat(a), _rat(b))


def _sum(terms: Iterable[tuple[int, Cochain | None]]) -> Cochain | None:
    out = None
    for s, t in terms:
        if t is not None:
            out = _add(out, t * s)
    return out


def homotopy_F(i: int, x: CSCochain, y: CSCochain) -> Cochain | None:
    """F^i(x (x) y), a rational cochain of degree |x| + |y| - i - 1."""
    if x.complex is not y.complex:
        raise ComplexError("arguments live on different complexes")
    c1, h1, w1 = x.c, x.h, x.omega
    c2, h2, w2 = y.c, y.h, y.omega
    sp = -1 if x.degree % 2 else 1
    if i % 2 == 0:
        out = _sum([
            (sp, _D(i - 1, h1, h2)),
            (sp, _D(i, c1, h2)),
            (1, _D(i, h1, w2)),
            (1, b_homotopy(i + 1, w1, w2)),
        ])
    else:
        out = _sum([
            (sp, _D(i - 1, h1, h2)),
            (-1, _D(i, h1, c2)),
            (-sp, _D(i, w1, h2)),
            (-1, b_homotopy(i + 1, w1, w2)),
        ])
    deg = x.degree + y.degree - i - 1
    if out is None and deg >= 0:
        out = Cochain.zeros(x.complex, deg, Ring.RAT)
    return out


def homotopy_G(i: int, x: CSCochain, y: CSCochain) -> CSCochain | None:
    """G^i(x (x) y) in level x.level + y.level; None when the degree is negative."""
    deg = x.degree + y.degree - i
    if deg < 0:
        return None
    level = x.level + y.level
    c = _D(i, x.c, y.c)
    c = c.to_ring(Ring.INT) if c is not None else None
    h = homotopy_F(i, x, y)
    omega = None
    if deg >= level and i == 0 and x.omega is not None and y.omega is not None:
        omega = discrete_wedge(x.omega, y.omega)
    return CSCochain.make(x.complex, level, deg, c, h, omega)


def cup_character(x: CSCochain, y: CSCochain) -> CSCochain:
    """(c1 u c2, (-1)^p c1 u h2 + h1 u omega2 + B^1(omega1, omega2), omega1 ^ omega2)."""
    if x.degree != x.level or y.degree != y.level:
        raise DegreeError("cup of characters needs level-p elements of degree p")
    if x.complex is not y.complex:
        raise ComplexError("arguments live on different complexes")
    p = x.level
    sp = -1 if p % 2 else 1
    h = _sum([(sp, _D(0, x.c, y.h)), (1, _D(0, x.h, y.omega)), (1, b_homotopy(1, x.omega, y.omega))])
    return CSCochain.make(x.complex, p + y.level, p + y.level, cup(x.c, y.c), h, discrete_wedge(x.omega, y.omega))


# --------------------------------------------------------------------------
# tensors: finite sums of pure tensors x (x) y with x, y in fixed bidegrees


Tensor = Sequence[Pair]


def tensor_differential(t: Tensor) -> list[tuple[int, CSCochain, CSCochain]]:
    """d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy, as signed pure tensors."""
    out = []
    for x, y in t:
        out.append((1, cs_differential(x), y))
        out.append((-1 if x.degree % 2 else 1, x, cs_differential(y)))
    return out


def _apply(op, i: int, signed: Iterable[tuple[int, CSCochain, CSCochain]]):
    out = None
    for s, x, y in signed:
        v = op(i, x, y)
        if v is None:
            continue
        v = v * s
        out = v if out is None else out + v
    return out


def _swap(t: Tensor) -> list[tuple[int, CSCochain, CSCochain]]:
    return [(swap_sign(x.degree, y.degree), y, x) for x, y in t]


def _combine(*parts):
    out = None
    for s, v in parts:
        if v is None:
            continue
        v = v * s
        out = v if out is None else out + v
    return out


def proposition_defect(i: int, t: Tensor):
    """G^i d - (-1)^i d G^i - G^(i-1) - (-1)^i G^(i-1) T on a tensor (for i = 0: G^0 d - d G^0)."""
    si = -1 if i % 2 else 1
    plain = [(1, x, y) for x, y in t]
    g_d = _apply(homotopy_G, i, tensor_differential(t))
    g = _apply(homotopy_G, i, plain)
    d_g = cs_differential(g) if g is not None else None
    if i == 0:
        return _combine((1, g_d), (-1, d_g))
    prev = _apply(homotopy_G, i - 1, plain)
    prev_t = _apply(homotopy_G, i - 1, _swap(t))
    return _combine((1, g_d), (-si, d_g), (-1, prev), (-si, prev_t))


def _is_zero(v) -> bool:
    return v is None or v.is_zero()


def proof_formula_defect(i: int, t: Tensor) -> Cochain | None:
    """Cochain-level identities among the F-homotopies:

    F^{2j} - F^{2j} T + D^{2j+1} + delta F^{2j+1} - F^{2j+1} d   (i = 2j),
    F^{2j+1} + F^{2j+1} T - D^{2j+2} - delta F^{2j+2} - F^{2j+2} d   (i = 2j + 1),
    where D^k acts on the integral components.
    """
    plain = [(1, x, y) for x, y in t]
    F = lambda k, signed: _apply(homotopy_F, k, signed)
    Dc = _combine(*[(1, _D(i + 1, x.c, y.c)) for x, y in t])
    f_next = F(i + 1, plain)
    df_next = coboundary(f_next) if f_next is not None else None
    if i % 2 == 0:
        return _combine((1, F(i, plain)), (-1, F(i, _swap(t))), (1, Dc), (1, df_next), (-1, F(i + 1, tensor_differential(t))))
    return _combine((1, F(i, plain)), (1, F(i, _swap(t))), (-1, Dc), (-1, df_next), (-1, F(i + 1, tensor_differential(t))))


# --------------------------------------------------------------------------
# characters


@dataclass(frozen=True)
class CharacterClass:
    """Class of a level-p cocycle of degree p."""

    rep: CSCochain

    def __post_init__(self):
        if self.rep.degree != self.rep.level:
            raise DegreeError("a character is represented in degree equal to its level")
        if not cs_differential(self.rep).is_zero():
            raise CocycleError("representative is not closed")

    @property
    def level(self) -> int:
        return self.rep.level

    @property
    def complex(self) -> SimplicialComplex:
        return self.rep.complex

    @property
    def curvature(self) -> Cochain:
        return self.rep.omega

    @property
    def integral_class(self) -> Cochain:
        return self.rep.c

    def __add__(self, other: "CharacterClass") -> "CharacterClass":
        return CharacterClass(self.rep + other.rep)

    def __mul__(self, s: int) -> "CharacterClass":
        return CharacterClass(self.rep * s)

    __rmul__ = __mul__

    def __neg__(self) -> "CharacterClass":
        return CharacterClass(-self.rep)

    def cup(self, other: "CharacterClass") -> "CharacterClass":
        return CharacterClass(cup_character(self.rep, other.rep))


def _frac_mod1(v) -> Fraction:
    v = Fraction(v)
    return v - (v.numerator // v.denominator)


def evaluate_character(x: CharacterClass | CSCochain, sigma: Chain) -> Fraction:
    """<h, sigma> mod 1 on an integral (p-1)-cycle."""
    rep = x.rep if isinstance(x, CharacterClass) else x
    if sigma.degree != rep.level - 1:
        raise DegreeError(f"level-{rep.level} characters evaluate on {rep.level - 1}-cycles")
    if sigma.ring is Ring.MOD2:
        raise RingError("characters evaluate on integral cycles")
    if sigma.degree > 0 and not boundary(sigma).is_zero():
        raise CycleError("characters evaluate on cycles only")
    return _frac_mod1(pair(rep.h, sigma))


def classes_equal(x: CharacterClass, y: CharacterClass) -> bool:
    """Equal curvature and integral pairing of the h-difference with H_{p-1}(X; Z)."""
    if x.level != y.level or x.complex is not y.complex:
        raise DegreeError("classes of different levels or complexes")
    if not _eq(x.rep.omega, y.rep.omega):
        return False
    if x.level - 1 > x.complex.dimension:
        return True
    diff = x.rep.h - y.rep.h
    H = homology_group(x.complex, x.level - 1, Ring.INT)
    return all(Fraction(pair(diff, g)).denominator == 1 for g in H.generators)


def canonical_lift(c: Cochain, level: int | None = None) -> CSCochain:
    """(c, 0, c) for an integral cocycle c."""
    if c.ring is not Ring.INT:
        raise RingError("canonical lifts need integral cochains")
    if not is_cocycle(c):
        raise CocycleError("canonical lifts need cocycles")
    p = c.degree if level is None else level
    if p != c.degree:
        raise DegreeError("the canonical lift lives in degree equal to the level")
    return CSCochain.make(c.complex, p, p, c, None, _rat(c))


def is_integral_form(omega: Cochain) -> bool:
    """Closed with integral periods on every integral cycle."""
    w = _rat(omega)
    if not is_cocycle(w):
        return False
    H = homology_group(w.complex, w.degree, Ring.INT)
    return all(Fraction(pair(w, g)).denominator == 1 for g in H.generators)


def _coboundary_rows(K: SimplicialComplex, q: int) -> list[list[int]]:
    """Dense matrix of delta: C^{q-1} -> C^q, one row per q-simplex."""
    rows = [[0] * K.count(q - 1) for _ in range(K.count(q))]
    for r, faces in enumerate(K.boundary_indices(q).tolist()):
        for k, f in enumerate(faces):
            rows[r][f] += -1 if k % 2 else 1
    return rows


def solve_coboundary(z: Cochain, ring: Ring | str = Ring.RAT) -> Cochain | None:
    """Some h over ``ring`` (Rat or Int) with delta h = z, or None when there is none."""
    ring = Ring.parse(ring)
    if ring is Ring.MOD2:
        raise RingError("solve_coboundary works over Rat or Int")
    K, q = z.complex, z.degree
    if q == 0:
        return None
    target = z.to_ring(ring) if ring is Ring.INT else _rat(z)
    res = solve_linear(_coboundary_rows(K, q), target.to_list(), ring, with_kernel=False)
    if res is None:
        return None
    h = Cochain.from_values(K, q - 1, ring, res.solution)
    if coboundary(h) != target:
        raise ConsistencyError("coboundary solve failed re-verification")
    return h


def character_from_form(omega: Cochain) -> CSCochain:
    """A cocycle (c, h, omega) with prescribed curvature omega in Omega^p_Z."""
    w = _rat(omega)
    if not is_integral_form(w):
        raise ValueError("form is not closed with integral periods")
    K, p = w.complex, w.degree
    H = cohomology_group(K, p, Ring.RAT)
    coords = H.coordinate_map(w)
    if any(Fraction(a).denominator != 1 for a in coords):
        raise ConsistencyError("integral periods but non-integral coordinates")
    Hz = cohomology_group(K, p, Ring.INT)
    free = Hz.generators[len(Hz.torsion_orders):]
    c = Cochain.zeros(K, p, Ring.INT)
    for a, g in zip(coords, free):
        c = c + g * int(a)
    rest = w - _rat(c)
    h = solve_coboundary(rest) if p > 0 else None
    if p > 0 and h is None:
        raise ConsistencyError("curvature minus integral lift is not exact")
    x = CSCochain.make(K, p, p, c, h, w)
    if not cs_differential(x).is_zero():
        raise ConsistencyError("constructed preimage is not closed")
    return x


def flat_character(alpha: Cochain) -> CSCochain:
    """(0, alpha, delta alpha): the image of a (p-1)-form in the level-p characters."""
    a = _rat(alpha)
    p = a.degree + 1
    return CSCochain.make(a.complex, p, p, None, a, coboundary(a))


# --------------------------------------------------------------------------
# q-maps and the comparison q = pi Sq iota


def q_hat(x: CSCochain | CharacterClass) -> CSCochain:
    rep = x.rep if isinstance(x, CharacterClass) else x
    return cup_character(rep, rep)


def q_map(K: SimplicialComplex, k: int, c: Cochain) -> HomToZ2:
    """Values of (c, 0, c) u (c, 0, c) on H_{4k+1}(K; Z), identified through 1/2 Z / Z = Z/2."""
    if c.ring is not Ring.INT or c.complex is not K or c.degree != 2 * k + 1:
        raise DegreeError(f"q^{2 * k} needs an integral cochain of degree {2 * k + 1} on K")
    if not is_cocycle(c):
        raise CocycleError("q-map needs an integral cocycle")
    if K.dimension < 4 * k + 1:
        raise DegreeError(f"q^{2 * k} needs dim K >= {4 * k + 1}")
    sq = q_hat(canonical_lift(c))
    if sq.omega is not None and not sq.omega.is_zero():
        raise ConsistencyError("curvature of an odd square is not zero")
    H = homology_group(K, 4 * k + 1, Ring.INT)
    values = []
    for g in H.generators:
        v = evaluate_character(sq, g)
        if v == 0:
            values.append(0)
        elif v == Fraction(1, 2):
            values.append(1)
        else:
            raise ConsistencyError(f"square evaluates to {v}, outside 1/2 Z / Z")
    return HomToZ2(H, tuple(values))


@dataclass
class TheoremReport:
    k: int
    samples: int
    mismatches: list[dict]
    rows: list[dict]

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"k": self.k, "samples": self.samples, "passed": self.passed, "rows": self.rows, "mismatches": self.mismatches}


def verify_main_theorem(K: SimplicialComplex, k: int, samples: Iterable[Cochain]) -> TheoremReport:
    """Compare q^{2k}(c) with pi(Sq^{2k}(iota c)) generator by generator."""
    rows, bad = [], []
    n = 0
    for j, c in enumerate(samples):
        n += 1
        lhs = q_map(K, k, c)
        rhs = uct_pi(K, 4 * k + 1, steenrod_square(2 * k, uct_iota(K, 2 * k + 1, c)))
        row = {"sample": j, "q": list(lhs.values), "pi_sq_iota": list(rhs.values)}
        rows.append(row)
        if lhs.values != rhs.values:
            bad.append(row)
    return TheoremReport(k, n, bad, rows)


# --------------------------------------------------------------------------
# Chern-Simons action on 5-manifolds


def _as_class(B) -> CharacterClass:
    return B if isinstance(B, CharacterClass) else CharacterClass(B)


def cs_action(X5: SimplicialComplex, B_RR, B_NS) -> Fraction:
    """-(B_RR u B_NS)(X) mod 1 on a closed oriented 5-dimensional complex."""
    x, y = _as_class(B_RR), _as_class(B_NS)
    if X5.dimension != 5:
        raise DegreeError("the action is defined on 5-dimensional complexes")
    if x.level != 3 or y.level != 3:
        raise DegreeError("fields are level-3 characters")
    fund = fundamental_cycle(X5, Ring.INT)
    return _frac_mod1(-evaluate_character(x.cup(y), fund))


def sl2z_defect(X5: SimplicialComplex, g, B_RR, B_NS) -> Fraction:
    """I(g.(B, C)) - I(B, C) mod 1 with g.(B, C) = (aB + bC, cB + dC)."""
    (a, b), (c, d) = ((int(v) for v in row) for row in g)
    if a * d - b * c != 1:
        raise MatrixError("g must have determinant 1")
    x, y = _as_class(B_RR), _as_class(B_NS)
    x2 = CharacterClass(x.rep * a + y.rep * b)
    y2 = CharacterClass(x.rep * c + y.rep * d)
    return _frac_mod1(cs_action(X5, x2, y2) - cs_action(X5, x, y))


# --------------------------------------------------------------------------
# random data for property checks


def _random_cochain(K: SimplicialComplex, q: int, ring: Ring, rng: np.random.Generator, bound: int = 3, den: int = 1) -> Cochain | None:
    if q < 0:
        return None
    n = K.count(q)
    nums = rng.integers(-bound, bound + 1, n)
    if ring is Ring.RAT:
        dens = rng.integers(1, den + 1, n)
        return Cochain.from_values(K, q, ring, [Fraction(int(a), int(b)) for a, b in zip(nums, dens)])
    return Cochain(K, q, ring, nums)


def random_cs_cochain(K: SimplicialComplex, level: int, degree: int, rng: np.random.Generator) -> CSCochain:
    c = _random_cochain(K, degree, Ring.INT, rng)
    h = _random_cochain(K, degree - 1, Ring.RAT, rng, den=4)
    omega = _random_cochain(K, degree, Ring.RAT, rng, den=4) if degree >= level else None
    return CSCochain.make(K, level, degree, c, h, omega)


def random_cocycle(K: SimplicialComplex, p: int, rng: np.random.Generator, bound: int = 3) -> Cochain:
    """Random integral combination of cohomology generators plus a random coboundary."""
    H = cohomology_group(K, p, Ring.INT)
    z = Cochain.zeros(K, p, Ring.INT)
    for g in H.generators:
        z = z + g * int(rng.integers(-bound, bound + 1))
    if p > 0:
        z = z + coboundary(_random_cochain(K, p - 1, Ring.INT, rng, bound=bound))
    return z


def random_character(K: SimplicialComplex, level: int, rng: np.random.Generator) -> CSCochain:
    """Random closed element of the level-p complex in degree p.

    Canonical lift of a random integral cocycle, plus a flat part
    (0, a, delta a), plus the differential of a random degree-(p-1) element.
    """
    x = canonical_lift(random_cocycle(K, level, rng))
    x = x + flat_character(_random_cochain(K, level - 1, Ring.RAT, rng, den=4))
    x = x + cs_differential(random_cs_cochain(K, level, level - 1, rng))
    return x
