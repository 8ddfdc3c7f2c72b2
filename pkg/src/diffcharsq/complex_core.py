"""Ordered simplicial complexes, (co)chains and the standard test spaces.

Every simplex is a strictly increasing tuple of vertex ids; ``faces[p]`` is
sorted lexicographically, which fixes the basis order of every matrix and
cochain vector built on the complex.
"""

from __future__ import annotations

import enum
import itertools
import json
import math
import re
from collections import deque
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Ring",
    "SimplicialComplex",
    "Cochain",
    "Chain",
    "VertexMap",
    "ComplexError",
    "DegreeError",
    "RingError",
    "DescriptorError",
    "NotFreeError",
    "NotSimplicialError",
    "ShapeError",
    "OrientabilityError",
    "ComplexFileError",
    "boundary_matrix",
    "coboundary",
    "boundary",
    "build_standard_space",
    "build_space_with_projections",
    "parse_space_descriptor",
    "product_complex",
    "barycentric_subdivision",
    "quotient_by_free_involution",
    "fundamental_cycle",
    "load_complex",
    "parse_complex",
]


class ComplexError(ValueError):
    pass


class DegreeError(ComplexError):
    pass


class RingError(ComplexError):
    pass


class DescriptorError(ComplexError):
    pass


class NotFreeError(ComplexError):
    pass


class NotSimplicialError(ComplexError):
    pass


class ShapeError(ComplexError):
    pass


class OrientabilityError(ComplexError):
    pass


class ComplexFileError(ComplexError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Ring(str, enum.Enum):
    INT = "int"
    MOD2 = "mod2"
    RAT = "rat"

    @classmethod
    def parse(cls, value: "Ring | str") -> "Ring":
        try:
            return cls(value)
        except ValueError:
            raise RingError(f"unknown ring {value!r}") from None


def _vertex_code_base(vertex_count: int, width: int) -> int | None:
    base = max(vertex_count, 2)
    if width * math.log2(base) >= 62:
        return None
    return base


class SimplicialComplex:
    """A finite ordered simplicial complex.

    Built from a list of facets; all faces are enumerated eagerly.  The
    instance is immutable apart from private lookup caches.
    """

    def __init__(self, facets: Iterable[Sequence[int]], vertex_count: int | None = None, name: str | None = None):
        cleaned = set()
        for facet in facets:
            simplex = tuple(sorted(int(v) for v in facet))
            if not simplex:
                raise ComplexError("empty facet")
            if len(set(simplex)) != len(simplex):
                raise ComplexError(f"facet {tuple(facet)} repeats a vertex")
            if simplex[0] < 0:
                raise ComplexError(f"facet {tuple(facet)} has a negative vertex")
            cleaned.add(simplex)
        if not cleaned:
            raise ComplexError("a complex needs at least one facet")
        top = max(v for s in cleaned for v in s)
        if vertex_count is None:
            vertex_count = top + 1
        elif top >= vertex_count:
            raise ComplexError(f"vertex {top} out of range for {vertex_count} vertices")

        self.name = name
        self.vertex_count = int(vertex_count)
        self.dimension = max(len(s) for s in cleaned) - 1

        by_dim: dict[int, list[tuple[int, ...]]] = {}
        for s in cleaned:
            by_dim.setdefault(len(s) - 1, []).append(s)
        arrays: list[np.ndarray] = []
        for p in range(self.dimension + 1):
            chunks = []
            for d, simplices in by_dim.items():
                if d < p:
                    continue
                block = np.array(sorted(simplices), dtype=np.int64)
                for cols in itertools.combinations(range(d + 1), p + 1):
                    chunks.append(block[:, cols])
            arrays.append(np.unique(np.concatenate(chunks), axis=0))
        self._arrays = arrays
        self.faces: tuple[tuple[tuple[int, ...], ...], ...] = tuple(
            tuple(map(tuple, a.tolist())) for a in arrays
        )
        self.facets = tuple(sorted(cleaned))
        self._cache: dict = {}

    def __repr__(self) -> str:
        label = self.name or "SimplicialComplex"
        return f"<{label}: f={self.f_vector}>"

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(f) for f in self.faces)

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** p * n for p, n in enumerate(self.f_vector))

    def count(self, p: int) -> int:
        return len(self.faces[p]) if 0 <= p <= self.dimension else 0

    def face_array(self, p: int) -> np.ndarray:
        if 0 <= p <= self.dimension:
            return self._arrays[p]
        return np.zeros((0, max(p + 1, 0)), dtype=np.int64)

    def _codes(self, p: int) -> np.ndarray | None:
        key = ("codes", p)
        if key not in self._cache:
            base = _vertex_code_base(self.vertex_count, p + 1)
            if base is None:
                self._cache[key] = None
            else:
                weights = base ** np.arange(p, -1, -1, dtype=np.int64)
                self._cache[key] = self.face_array(p) @ weights
        return self._cache[key]

    def lookup(self, p: int, rows: np.ndarray) -> np.ndarray:
        """Indices in ``faces[p]`` of the given vertex rows; -1 where absent."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, p + 1)
        if self.count(p) == 0:
            return np.full(len(rows), -1, dtype=np.int64)
        codes = self._codes(p)
        if codes is None:
            index = self.index_map(p)
            return np.array([index.get(tuple(r), -1) for r in rows.tolist()], dtype=np.int64)
        base = _vertex_code_base(self.vertex_count, p + 1)
        weights = base ** np.arange(p, -1, -1, dtype=np.int64)
        query = rows @ weights
        pos = np.searchsorted(codes, query)
        pos = np.minimum(pos, len(codes) - 1)
        found = codes[pos] == query
        return np.where(found, pos, -1)

    def index_map(self, p: int) -> dict[tuple[int, ...], int]:
        key = ("index", p)
        if key not in self._cache:
            self._cache[key] = {s: i for i, s in enumerate(self.faces[p])} if 0 <= p <= self.dimension else {}
        return self._cache[key]

    def index(self, simplex: Sequence[int]) -> int:
        simplex = tuple(simplex)
        try:
            return self.index_map(len(simplex) - 1)[simplex]
        except KeyError:
            raise ComplexError(f"{simplex} is not a simplex of {self!r}") from None

    def subface_indices(self, n: int, local: tuple[int, ...]) -> np.ndarray:
        """For each n-simplex s, the index of the face ``s[local]``."""
        key = ("sub", n, local)
        if key not in self._cache:
            rows = self.face_array(n)[:, list(local)]
            idx = self.lookup(len(local) - 1, rows)
            if len(idx) and idx.min() < 0:
                raise ComplexError("complex is not closed under faces")
            self._cache[key] = idx
        return self._cache[key]

    def boundary_indices(self, p: int) -> np.ndarray:
        """Array (N_p, p+1): column k is the index of the face omitting vertex k."""
        key = ("bd", p)
        if key not in self._cache:
            if p <= 0 or p > self.dimension:
                self._cache[key] = np.zeros((self.count(p), max(p + 1, 0)), dtype=np.int64)
            else:
                cols = [
                    self.subface_indices(p, tuple(j for j in range(p + 1) if j != k))
                    for k in range(p + 1)
                ]
                self._cache[key] = np.stack(cols, axis=1)
        return self._cache[key]

    def cofaces(self, p: int) -> list[list[int]]:
        """For each p-simplex, the indices of the (p+1)-simplices containing it."""
        key = ("cof", p)
        if key not in self._cache:
            out: list[list[int]] = [[] for _ in range(self.count(p))]
            if p < self.dimension:
                for j, row in enumerate(self.boundary_indices(p + 1).tolist()):
                    for i in row:
                        out[i].append(j)
            self._cache[key] = out
        return self._cache[key]

    def to_json(self) -> dict:
        return {"vertices": self.vertex_count, "facets": [list(f) for f in self.facets]}


# --------------------------------------------------------------------------
# cochains and chains


def _gcd_all(values: Iterable[int], start: int = 0) -> int:
    return reduce(math.gcd, values, start)


class _Vector:
    """Coefficient vector on the p-simplices of a complex.

    INT and RAT keep exact Python integers in an object array; RAT stores a
    common positive denominator ``den`` next to the integer numerators.
    MOD2 uses a uint8 array of 0/1.
    """

    __slots__ = ("complex", "degree", "ring", "values", "den")

    def __init__(self, complex: SimplicialComplex, degree: int, ring: Ring | str, values, den: int = 1):
        ring = Ring.parse(ring)
        if degree < 0:
            raise DegreeError(f"negative degree {degree}")
        n = complex.count(degree)
        if ring is Ring.MOD2:
            arr = np.asarray(values, dtype=np.int64) & 1 if not (isinstance(values, np.ndarray) and values.dtype == np.uint8) else values
            arr = np.asarray(arr, dtype=np.uint8)
            den = 1
        else:
            arr = np.empty(n, dtype=object)
            src = values.tolist() if isinstance(values, np.ndarray) else list(values)
            if len(src) != n:
                raise DegreeError(f"expected {n} coefficients in degree {degree}, got {len(src)}")
            arr[:] = [int(v) for v in src]
            if ring is Ring.INT and den != 1:
                raise RingError("integral vectors carry no denominator")
        if arr.shape != (n,):
            raise DegreeError(f"expected {n} coefficients in degree {degree}, got {arr.shape}")
        self.complex = complex
        self.degree = degree
        self.ring = ring
        self.values = arr
        self.den = int(den)
        if ring is Ring.RAT:
            self._normalize()

    @classmethod
    def _raw(cls, complex, degree, ring, values, den=1):
        obj = cls.__new__(cls)
        obj.complex = complex
        obj.degree = degree
        obj.ring = ring
        obj.values = values
        obj.den = den
        if ring is Ring.RAT:
            obj._normalize()
        return obj

    def _normalize(self) -> None:
        if self.den <= 0:
            raise RingError("denominator must be positive")
        if self.den == 1:
            return
        g = _gcd_all(self.values.tolist(), self.den)
        if g > 1:
            self.values = self.values // g
            self.den //= g

    # constructors -------------------------------------------------------
    @classmethod
    def zeros(cls, complex: SimplicialComplex, degree: int, ring: Ring | str):
        ring = Ring.parse(ring)
        n = complex.count(degree)
        if ring is Ring.MOD2:
            return cls._raw(complex, degree, ring, np.zeros(n, dtype=np.uint8))
        arr = np.empty(n, dtype=object)
        arr[:] = 0
        return cls._raw(complex, degree, ring, arr)

    @classmethod
    def from_values(cls, complex: SimplicialComplex, degree: int, ring: Ring | str, values):
        """Build from a sequence of ring elements (ints or Fractions for RAT)."""
        ring = Ring.parse(ring)
        values = list(values.tolist() if isinstance(values, np.ndarray) else values)
        if ring is Ring.RAT:
            fr = [Fraction(v) for v in values]
            den = reduce(lambda a, b: a * b // math.gcd(a, b), (f.denominator for f in fr), 1)
            return cls(complex, degree, ring, [f.numerator * (den // f.denominator) for f in fr], den)
        for v in values:
            if isinstance(v, Fraction) and v.denominator != 1:
                raise RingError(f"non-integral coefficient {v} for ring {ring.value}")
        return cls(complex, degree, ring, [int(v) for v in values])

    @classmethod
    def from_dict(cls, complex: SimplicialComplex, degree: int, ring: Ring | str, coeffs: dict):
        n = complex.count(degree)
        vals: list = [0] * n
        for i, v in coeffs.items():
            if not 0 <= i < n:
                raise DegreeError(f"index {i} out of range for degree {degree}")
            vals[i] = v
        return cls.from_values(complex, degree, ring, vals)

    @classmethod
    def indicator(cls, complex: SimplicialComplex, simplex: Sequence[int], ring: Ring | str = Ring.INT):
        simplex = tuple(simplex)
        return cls.from_dict(complex, len(simplex) - 1, ring, {complex.index(simplex): 1})

    # access -------------------------------------------------------------
    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int):
        v = self.values[i]
        if self.ring is Ring.RAT:
            return Fraction(int(v), self.den)
        return int(v)

    @property
    def coeffs(self) -> dict:
        """Sparse view: face index -> nonzero coefficient."""
        nz = np.flatnonzero(self.values != 0)
        return {int(i): self[int(i)] for i in nz}

    def to_list(self) -> list:
        return [self[i] for i in range(len(self))]

    def is_zero(self) -> bool:
        return not np.any(self.values != 0)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _check(self, other: "_Vector") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.complex is not self.complex:
            raise ComplexError("vectors live on different complexes")
        if other.degree != self.degree:
            raise DegreeError(f"degree mismatch: {self.degree} vs {other.degree}")
        if other.ring is not self.ring:
            raise RingError(f"ring mismatch: {self.ring.value} vs {other.ring.value}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, _Vector):
            return NotImplemented
        try:
            self._check(other)
        except (TypeError, ComplexError):
            return False
        return self.den == other.den and bool(np.all(self.values == other.values))

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other):
        self._check(other)
        if self.ring is Ring.MOD2:
            return self._raw(self.complex, self.degree, self.ring, self.values ^ other.values)
        if self.den == other.den:
            return self._raw(self.complex, self.degree, self.ring, self.values + other.values, self.den)
        den = self.den * other.den // math.gcd(self.den, other.den)
        vals = self.values * (den // self.den) + other.values * (den // other.den)
        return self._raw(self.complex, self.degree, self.ring, vals, den)

    def __neg__(self):
        if self.ring is Ring.MOD2:
            return self
        return self._raw(self.complex, self.degree, self.ring, -self.values, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, _Vector):
            return NotImplemented
        s = Fraction(scalar)
        if self.ring is Ring.MOD2:
            if s.denominator % 2 == 0:
                raise RingError("cannot divide by 2 over Z/2")
            return self._raw(self.complex, self.degree, self.ring, self.values * np.uint8(s.numerator & 1))
        if self.ring is Ring.INT and s.denominator != 1:
            raise RingError(f"cannot scale an integral vector by {s}")
        return self._raw(self.complex, self.degree, self.ring, self.values * s.numerator, self.den * s.denominator)

    __rmul__ = __mul__

    def to_ring(self, ring: Ring | str):
        """Coefficient change: Z -> Z/2 and Z -> Q always; Q -> Z and Z/2 -> Z only for integral data."""
        ring = Ring.parse(ring)
        if ring is self.ring:
            return self
        cls = type(self)
        if ring is Ring.MOD2:
            if self.den != 1:
                raise RingError("non-integral vector has no mod-2 reduction")
            vals = np.array([int(v) & 1 for v in self.values.tolist()], dtype=np.uint8)
            return cls._raw(self.complex, self.degree, ring, vals)
        if self.ring is Ring.MOD2:
            vals = np.empty(len(self.values), dtype=object)
            vals[:] = self.values.astype(np.int64).tolist()
            return cls._raw(self.complex, self.degree, ring, vals)
        if ring is Ring.INT and self.den != 1:
            raise RingError("vector has non-integral coefficients")
        return cls._raw(self.complex, self.degree, ring, self.values.copy(), self.den)

    def frac_part(self):
        """Coefficients reduced into [0, 1) (RAT only)."""
        if self.ring is not Ring.RAT:
            raise RingError("fractional part needs rational coefficients")
        return type(self)._raw(self.complex, self.degree, self.ring, self.values % self.den, self.den)

    def __repr__(self) -> str:
        items = ", ".join(f"{self.complex.faces[self.degree][i]}: {v}" for i, v in list(self.coeffs.items())[:6])
        more = ", ..." if len(self.coeffs) > 6 else ""
        return f"{type(self).__name__}(deg={self.degree}, {self.ring.value}, {{{items}{more}}})"


class Cochain(_Vector):
    __slots__ = ()


class Chain(_Vector):
    __slots__ = ()


_SIGNS_CACHE: dict[int, np.ndarray] = {}


def _alternating(n: int) -> np.ndarray:
    if n not in _SIGNS_CACHE:
        s = np.empty(n, dtype=object)
        s[:] = [(-1) ** k for k in range(n)]
        _SIGNS_CACHE[n] = s
    return _SIGNS_CACHE[n]


def coboundary(c: Cochain) -> Cochain:
    """(delta c)(s) = c(boundary s); no extra sign."""
    K, p = c.complex, c.degree
    n_next = K.count(p + 1)
    if n_next == 0:
        return Cochain.zeros(K, p + 1, c.ring)
    idx = K.boundary_indices(p + 1)
    gathered = c.values[idx]
    if c.ring is Ring.MOD2:
        return Cochain._raw(K, p + 1, c.ring, np.bitwise_xor.reduce(gathered, axis=1))
    vals = (gathered * _alternating(p + 2)).sum(axis=1)
    return Cochain._raw(K, p + 1, c.ring, _as_object(vals), c.den)


def _as_object(vals) -> np.ndarray:
    if isinstance(vals, np.ndarray) and vals.dtype == object:
        return vals
    out = np.empty(len(vals), dtype=object)
    out[:] = [int(v) for v in np.asarray(vals).tolist()]
    return out


def boundary(chain: Chain) -> Chain:
    K, p = chain.complex, chain.degree
    if p == 0:
        raise DegreeError("0-chains have no boundary")
    idx = K.boundary_indices(p)
    out = Chain.zeros(K, p - 1, chain.ring)
    vals = out.values
    if chain.ring is Ring.MOD2:
        for k in range(p + 1):
            np.bitwise_xor.at(vals, idx[:, k], chain.values)
        return Chain._raw(K, p - 1, chain.ring, vals)
    for k in range(p + 1):
        np.add.at(vals, idx[:, k], chain.values if k % 2 == 0 else -chain.values)
    return Chain._raw(K, p - 1, chain.ring, vals, chain.den)


def boundary_matrix(K: SimplicialComplex, p: int):
    """Integer matrix of the boundary C_p -> C_{p-1} (column j = boundary of simplex j)."""
    from .exactla import SparseMatrix

    if not 1 <= p <= K.dimension:
        raise DegreeError(f"boundary degree {p} outside 1..{K.dimension}")
    idx = K.boundary_indices(p)
    cols = [{int(i): (-1) ** k for k, i in enumerate(row)} for row in idx.tolist()]
    return SparseMatrix(K.count(p - 1), K.count(p), cols)


# --------------------------------------------------------------------------
# simplicial maps


class VertexMap:
    """A simplicial vertex map between complexes."""

    def __init__(self, domain: SimplicialComplex, codomain: SimplicialComplex, images: Sequence[int]):
        images = np.asarray(images, dtype=np.int64)
        if images.shape != (domain.vertex_count,):
            raise ComplexError("vertex map needs one image per domain vertex")
        self.domain = domain
        self.codomain = codomain
        self.images = images
        self._cache: dict = {}

    def _plan(self, p: int):
        if p not in self._cache:
            img = self.images[self.domain.face_array(p)]
            order = np.argsort(img, axis=1, kind="stable")
            srt = np.take_along_axis(img, order, axis=1)
            degenerate = np.any(np.diff(srt, axis=1) == 0, axis=1) if p > 0 else np.zeros(len(img), bool)
            inv = np.zeros(len(img), dtype=np.int64)
            for a in range(p + 1):
                for b in range(a + 1, p + 1):
                    inv += img[:, a] > img[:, b]
            target = np.full(len(img), -1, dtype=np.int64)
            live = ~degenerate
            if live.any():
                target[live] = self.codomain.lookup(p, srt[live])
                if target[live].min() < 0:
                    raise NotSimplicialError("vertex map does not send simplices to simplices")
            self._cache[p] = (target, live, np.where(inv % 2 == 0, 1, -1))
        return self._cache[p]

    def is_order_preserving(self) -> bool:
        for p in range(1, self.domain.dimension + 1):
            img = self.images[self.domain.face_array(p)]
            if np.any(np.diff(img, axis=1) < 0):
                return False
        return True

    def pullback(self, c: Cochain) -> Cochain:
        """Cochain pullback; degenerate images give 0, reordered images pick up the permutation sign."""
        if c.complex is not self.codomain:
            raise ComplexError("cochain does not live on the codomain")
        target, live, sign = self._plan(c.degree)
        if c.ring is Ring.MOD2:
            vals = np.zeros(len(target), dtype=np.uint8)
            vals[live] = c.values[target[live]]
            return Cochain._raw(self.domain, c.degree, c.ring, vals)
        vals = np.empty(len(target), dtype=object)
        vals[:] = 0
        vals[live] = c.values[target[live]] * sign[live]
        return Cochain._raw(self.domain, c.degree, c.ring, vals, c.den)

    def pushforward(self, chain: Chain) -> Chain:
        if chain.complex is not self.domain:
            raise ComplexError("chain does not live on the domain")
        target, live, sign = self._plan(chain.degree)
        out = Chain.zeros(self.codomain, chain.degree, chain.ring)
        vals = out.values
        if chain.ring is Ring.MOD2:
            np.bitwise_xor.at(vals, target[live], chain.values[live])
            return Chain._raw(self.codomain, chain.degree, chain.ring, vals)
        np.add.at(vals, target[live], chain.values[live] * sign[live])
        return Chain._raw(self.codomain, chain.degree, chain.ring, vals, chain.den)


# --------------------------------------------------------------------------
# constructions


def product_complex(K1: SimplicialComplex, K2: SimplicialComplex):
    """Staircase triangulation of |K1| x |K2| with its two projections.

    Vertex (v, w) gets id ``v * n2 + w``; simplices are chains in the product
    order whose projections are simplices, so both projections preserve order.
    """
    n2 = K2.vertex_count
    facets = []
    for s in K1.facets:
        for t in K2.facets:
            a, b = len(s) - 1, len(t) - 1
            for steps in itertools.combinations(range(a + b), a):
                i = j = 0
                path = [s[0] * n2 + t[0]]
                step_set = set(steps)
                for k in range(a + b):
                    if k in step_set:
                        i += 1
                    else:
                        j += 1
                    path.append(s[i] * n2 + t[j])
                facets.append(path)
    name = f"{K1.name or 'K1'} x {K2.name or 'K2'}"
    K = SimplicialComplex(facets, K1.vertex_count * n2, name=name)
    ids = np.arange(K.vertex_count)
    return K, VertexMap(K, K1, ids // n2), VertexMap(K, K2, ids % n2)


def barycentric_subdivision(K: SimplicialComplex):
    """First barycentric subdivision.

    New vertices are the faces of K, ordered by (dimension, lexicographic);
    returns the subdivision and the list mapping new vertex ids to faces.
    """
    labels = [s for p in range(K.dimension + 1) for s in K.faces[p]]
    ident = {s: i for i, s in enumerate(labels)}
    facets = []
    for s in K.facets:
        for perm in itertools.permutations(s):
            flag = [ident[tuple(sorted(perm[: k + 1]))] for k in range(len(s))]
            facets.append(flag)
    name = f"sd({K.name})" if K.name else None
    return SimplicialComplex(facets, len(labels), name=name), labels


def quotient_by_free_involution(K: SimplicialComplex, tau: Sequence[int]):
    """Quotient of K by a free simplicial involution given on vertices.

    Orbits are relabelled by increasing smallest member.  Raises NotFreeError
    when some simplex meets its image and NotSimplicialError when the
    identification would glue distinct simplex pairs together.
    """
    tau = np.asarray(tau, dtype=np.int64)
    n = K.vertex_count
    if tau.shape != (n,) or tau.min() < 0 or tau.max() >= n or np.any(tau[tau] != np.arange(n)):
        raise ComplexError("tau is not an involution of the vertex set")
    for p in range(K.dimension + 1):
        faces = K.face_array(p)
        img = np.sort(tau[faces], axis=1)
        if np.any(K.lookup(p, img) < 0):
            raise ComplexError("tau does not map simplices to simplices")
        for row, im in zip(faces.tolist(), img.tolist()):
            if set(row) & set(im):
                raise NotFreeError(f"simplex {tuple(row)} meets its image {tuple(im)}")
    reps = np.minimum(np.arange(n), tau)
    order = np.unique(reps)
    relabel = np.searchsorted(order, reps)
    for p in range(K.dimension + 1):
        faces = K.face_array(p)
        q = np.sort(relabel[faces], axis=1)
        uniq = np.unique(q, axis=0)
        if 2 * len(uniq) != len(faces):
            raise NotSimplicialError(f"identification collapses {p}-simplices; subdivide first")
    facets = [tuple(sorted(relabel[list(f)].tolist())) for f in K.facets]
    name = f"{K.name}/tau" if K.name else None
    Q = SimplicialComplex(facets, len(order), name=name)
    return Q, VertexMap(K, Q, relabel)


def _simplex_sphere(n: int) -> SimplicialComplex:
    return SimplicialComplex(itertools.combinations(range(n + 2), n + 1), name=f"simplex_sphere({n})")


def _cross_polytope_sphere(n: int) -> SimplicialComplex:
    facets = [[2 * i + b for i, b in enumerate(bits)] for bits in itertools.product((0, 1), repeat=n + 1)]
    return SimplicialComplex(facets, 2 * (n + 1), name=f"cross_polytope_sphere({n})")


def _circle(m: int) -> SimplicialComplex:
    if m < 3:
        raise DescriptorError("circle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(m - 1)] + [(0, m - 1)]
    return SimplicialComplex(edges, m, name=f"circle({m})")


def _torus(k: int = 2) -> SimplicialComplex:
    K = _circle(3)
    for _ in range(k - 1):
        K, _, _ = product_complex(K, _circle(3))
    K.name = "torus" if k == 2 else f"torus^{k}"
    return K


def _klein_bottle(m: int = 3, n: int = 4) -> SimplicialComplex:
    # grid of m columns and n rows (rows periodic); column m glued to column 0 with a flip
    def vid(x: int, y: int) -> int:
        if x == m:
            x, y = 0, -y
        return x * n + y % n

    facets = []
    for x in range(m):
        for y in range(n):
            a, b, c, d = vid(x, y), vid(x + 1, y), vid(x, y + 1), vid(x + 1, y + 1)
            facets += [(a, b, d), (a, c, d)]
    return SimplicialComplex(facets, m * n, name="klein_bottle")


def _antipodal(n: int) -> np.ndarray:
    return np.arange(2 * (n + 1)) ^ 1


def _rp(n: int) -> SimplicialComplex:
    if n < 1:
        raise DescriptorError("rp(n) needs n >= 1")
    S = _cross_polytope_sphere(n)
    sd, labels = barycentric_subdivision(S)
    anti = _antipodal(n)
    ident = {s: i for i, s in enumerate(labels)}
    tau = [ident[tuple(sorted(anti[list(s)].tolist()))] for s in labels]
    Q, _ = quotient_by_free_involution(sd, tau)
    Q.name = f"rp({n})"
    return Q


# 9-vertex CP^2: orbits of four facets under translations of (Z/3)^2, vertex (a, b) -> 3a + b
_CP2_BASE = ((0, 1, 2, 3, 4), (0, 1, 3, 4, 6), (0, 1, 3, 5, 7), (0, 1, 4, 5, 6))


def _cp2() -> SimplicialComplex:
    facets = set()
    for da, db in itertools.product(range(3), repeat=2):
        for f in _CP2_BASE:
            facets.add(tuple(sorted(((v // 3 + da) % 3) * 3 + (v % 3 + db) % 3 for v in f)))
    return SimplicialComplex(facets, 9, name="cp2")


_DESCRIPTOR = re.compile(r"^\s*([a-z_0-9]+?)\s*(?:\(\s*(\d+)\s*\)|\^\s*(\d+))?\s*$")
_SHORT = re.compile(r"^([a-z_]+?)(\d+)$")


_SPHERES = {"simplex_sphere": "simplex_sphere", "sphere": "simplex_sphere", "s": "simplex_sphere",
            "cross_polytope_sphere": "cross_polytope_sphere", "cross": "cross_polytope_sphere"}


def parse_space_descriptor(descriptor: str) -> list[tuple[str, int | None]]:
    """Validate a descriptor and return its factors as (canonical name, argument).

    Accepted: ``simplex_sphere(n)``, ``cross_polytope_sphere(n)``,
    ``circle(m)``, ``torus``, ``torus^k``, ``klein_bottle``, ``rp(n)``,
    ``cp2``, ``point``, products ``A x B`` and the short forms ``rp3``,
    ``sphere2``, ``circle12``, ``torus5``.  Nothing is built.
    """
    if not isinstance(descriptor, str):
        raise DescriptorError(f"space descriptor must be a string, got {descriptor!r}")
    parts = [p.strip() for p in re.split(r"\s+x\s+|\s*\*\s*", descriptor.strip().lower()) if p.strip()]
    if not parts:
        raise DescriptorError("empty space descriptor")
    return [_parse_single(part) for part in parts]


def _parse_single(descriptor: str) -> tuple[str, int | None]:
    m = _DESCRIPTOR.match(descriptor)
    if not m:
        raise DescriptorError(f"unsupported space descriptor {descriptor!r}")
    name, arg = m.group(1), m.group(2) or m.group(3)
    if arg is None:
        short = _SHORT.match(name)
        if short and short.group(1) in {"rp", "sphere", "simplex_sphere", "cross", "circle", "torus", "s"}:
            name, arg = short.group(1), short.group(2)
    n = int(arg) if arg is not None else None
    if name in _SPHERES:
        if n is None or n < 1:
            raise DescriptorError("spheres need a dimension n >= 1")
        return _SPHERES[name], n
    if name == "circle":
        if n is not None and n < 3:
            raise DescriptorError("circle(m) needs m >= 3")
        return "circle", 3 if n is None else n
    if name == "rp":
        if n is None or n < 1:
            raise DescriptorError("rp(n) needs n >= 1")
        return "rp", n
    if name == "torus":
        if n is not None and n < 1:
            raise DescriptorError("torus^k needs k >= 1")
        return "torus", 2 if n is None else n
    if name in ("klein_bottle", "klein") and n is None:
        return "klein_bottle", None
    if name in ("cp2", "point") and n is None:
        return name, None
    raise DescriptorError(f"unsupported space descriptor {descriptor!r}")


def _construct(name: str, n: int | None) -> SimplicialComplex:
    builders = {
        "simplex_sphere": _simplex_sphere,
        "cross_polytope_sphere": _cross_polytope_sphere,
        "circle": _circle,
        "rp": _rp,
        "torus": _torus,
    }
    if name in builders:
        return builders[name](n)
    if name == "klein_bottle":
        return _klein_bottle()
    if name == "cp2":
        return _cp2()
    return SimplicialComplex([(0,)], 1, name="point")


def build_standard_space(descriptor: str) -> SimplicialComplex:
    """Build a named test space (see ``parse_space_descriptor``)."""
    return build_space_with_projections(descriptor)[0]


def build_space_with_projections(descriptor: str) -> tuple[SimplicialComplex, tuple[VertexMap, VertexMap] | None]:
    """Build a space; for a product of two factors also return both projections."""
    factors = parse_space_descriptor(descriptor)
    spaces = [_construct(name, n) for name, n in factors]
    if len(spaces) == 1:
        return spaces[0], None
    K, pr1, pr2 = product_complex(spaces[0], spaces[1])
    for other in spaces[2:]:
        K, _, _ = product_complex(K, other)
    K.name = " x ".join(s.name or "?" for s in spaces)
    return K, ((pr1, pr2) if len(spaces) == 2 else None)


# --------------------------------------------------------------------------
# fundamental cycles


def _check_pseudomanifold(K: SimplicialComplex) -> list[list[int]]:
    n = K.dimension
    if n == 0:
        raise ShapeError("a 0-dimensional complex is not a closed pseudomanifold")
    if len(K.facets) != K.count(n):
        raise ShapeError("complex is not pure")
    cof = K.cofaces(n - 1)
    if any(len(c) != 2 for c in cof):
        raise ShapeError("some (n-1)-simplex does not lie in exactly two n-simplices")
    neighbours: list[list[int]] = [[] for _ in range(K.count(n))]
    for a, b in cof:
        neighbours[a].append(b)
        neighbours[b].append(a)
    seen = {0}
    queue = deque([0])
    while queue:
        s = queue.popleft()
        for t in neighbours[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    if len(seen) != K.count(n):
        raise ShapeError("dual graph is disconnected")
    return cof


def fundamental_cycle(K: SimplicialComplex, ring: Ring | str = Ring.INT) -> Chain:
    """Fundamental n-cycle of a closed pseudomanifold (coherently oriented over Z or Q)."""
    ring = Ring.parse(ring)
    cof = _check_pseudomanifold(K)
    n = K.dimension
    key = ("fundamental", ring)
    if key in K._cache:
        return K._cache[key]
    if ring is Ring.MOD2:
        chain = Chain._raw(K, n, ring, np.ones(K.count(n), dtype=np.uint8))
    else:
        idx = K.boundary_indices(n)
        # incidence sign of each (n-1)-face in each top simplex
        incidence: dict[tuple[int, int], int] = {}
        for s, row in enumerate(idx.tolist()):
            for k, f in enumerate(row):
                incidence[(s, f)] = (-1) ** k
        orient = [0] * K.count(n)
        orient[0] = 1
        adj: list[list[tuple[int, int]]] = [[] for _ in range(K.count(n))]
        for f, (a, b) in enumerate(cof):
            adj[a].append((b, f))
            adj[b].append((a, f))
        queue = deque([0])
        while queue:
            s = queue.popleft()
            for t, f in adj[s]:
                want = -orient[s] * incidence[(s, f)] * incidence[(t, f)]
                if orient[t] == 0:
                    orient[t] = want
                    queue.append(t)
                elif orient[t] != want:
                    raise OrientabilityError(f"{K!r} is not orientable")
        chain = Chain(K, n, ring, orient)
    if not boundary(chain).is_zero():
        raise ShapeError("top chain is not closed")
    K._cache[key] = chain
    return chain


# --------------------------------------------------------------------------
# file format


def _facet_lines(text: str) -> list[int]:
    """Line numbers of the inner lists of the "facets" array, in order."""
    start = text.find('"facets"')
    if start < 0:
        return []
    bracket = text.find("[", start)
    lines = []
    for m in re.finditer(r"\[[^\[\]]*\]", text[bracket + 1 :]):
        lines.append(text.count("\n", 0, bracket + 1 + m.start()) + 1)
    return lines


def parse_complex(text: str, name: str | None = None) -> SimplicialComplex:
    """Parse ``{"vertices": n, "facets": [[...], ...]}`` with line-precise errors."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFileError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    if not isinstance(data, dict) or "vertices" not in data or "facets" not in data:
        raise ComplexFileError('expected an object with keys "vertices" and "facets"', 1)
    n = data["vertices"]
    facets = data["facets"]
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise ComplexFileError('"vertices" must be a positive integer', _key_line(text, "vertices"))
    if not isinstance(facets, list) or not facets:
        raise ComplexFileError('"facets" must be a nonempty list', _key_line(text, "facets"))
    lines = _facet_lines(text)
    seen: dict[tuple[int, ...], int] = {}
    for k, facet in enumerate(facets):
        line = lines[k] if k < len(lines) else None
        if not isinstance(facet, list) or not facet or not all(isinstance(v, int) and not isinstance(v, bool) for v in facet):
            raise ComplexFileError(f"facet {k} must be a nonempty list of integers", line)
        bad = [v for v in facet if not 0 <= v < n]
        if bad:
            raise ComplexFileError(f"facet {k} has vertex {bad[0]} outside 0..{n - 1}", line)
        if any(a >= b for a, b in zip(facet, facet[1:])):
            raise ComplexFileError(f"facet {k} is not strictly increasing", line)
        key = tuple(facet)
        if key in seen:
            raise ComplexFileError(f"facet {k} duplicates facet {seen[key]}", line)
        seen[key] = k
    return SimplicialComplex(facets, n, name=name)


def _key_line(text: str, key: str) -> int:
    pos = text.find(f'"{key}"')
    return text.count("\n", 0, max(pos, 0)) + 1


def load_complex(path: str | Path) -> SimplicialComplex:
    path = Path(path)
    return parse_complex(path.read_text(encoding="utf-8"), name=path.stem)
