"""Alexander-Whitney cup product and the cup-i family D^i on ordered cochains.

D^i(f (x) g) on an n-simplex (n = p + q - i) sums over "interval cuts": cut
points 0 <= n_1 < ... < n_{i+1} <= n split [0, n] into i + 2 closed intervals
sharing their endpoints; the odd-numbered intervals make up the front face fed
to f, the even-numbered ones the back face fed to g.  Cuts that repeat a vertex
on one side are dropped.  A term carries the sign

    (-1)^(sum of the non-cut vertices on the f side) * sigma(i, p, q)

where the unit sigma(i, p, q) is chosen so that, with T(f (x) g) =
(-1)^(pq) g (x) f and delta(f (x) g) = df (x) g + (-1)^p f (x) dg,

    D^i delta - (-1)^i delta D^i = D^(i-1) + (-1)^i D^(i-1) T

holds on the nose over Z.  The units are frozen in ``SIGN_ROWS`` (they turn
out not to depend on q) and can be re-derived with ``calibrate_signs``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .complex_core import Cochain, ComplexError, Ring, RingError, SimplicialComplex, coboundary

__all__ = [
    "CupFamily",
    "SIGN_ROWS",
    "DEFAULT_FAMILY",
    "cup",
    "cup_i",
    "cup_i_defect",
    "swap_sign",
    "cut_terms",
    "sign_unit",
    "calibrate_signs",
]

# SIGN_ROWS[i][m] is sigma(i, i + m, q) for every q >= i.
SIGN_ROWS: dict[int, str] = {
    0: "++--++--++",
    1: "-++--++--+",
    2: "++--++--++",
    3: "-++--++--+",
    4: "++--++--++",
    5: "-++--++--+",
    6: "++--++--++",
    7: "-++--++--+",
    8: "++--++--++",
}


@lru_cache(maxsize=None)
def cut_terms(i: int, p: int, q: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """Unsigned-by-unit terms (front, back, local sign) of D^i in bidegree (p, q)."""
    n = p + q - i
    if i < 0 or n < 0 or i > min(p, q):
        return ()
    terms = []
    for pts in itertools.combinations(range(n + 1), i + 1):
        bounds = (0,) + pts + (n,)
        front: list[int] = []
        back: list[int] = []
        for j in range(i + 2):
            (front if j % 2 == 0 else back).extend(range(bounds[j], bounds[j + 1] + 1))
        if len(front) != p + 1 or len(set(front)) != len(front) or len(set(back)) != len(back):
            continue
        cut = set(pts)
        exponent = sum(v for v in front if v not in cut)
        terms.append((tuple(front), tuple(back), -1 if exponent % 2 else 1))
    return tuple(terms)


def swap_sign(p: int, q: int) -> int:
    """Sign of T on a tensor of degrees (p, q)."""
    return -1 if (p * q) % 2 else 1


@dataclass(frozen=True)
class CupFamily:
    """A cup-i family given by its unit table; ``max_i`` bounds the verified range."""

    max_i: int = 4

    def unit(self, i: int, p: int, q: int) -> int:
        return sign_unit(i, p, q)


DEFAULT_FAMILY = CupFamily()

_calibrated: dict[tuple[int, int, int], int] = {}


def sign_unit(i: int, p: int, q: int) -> int:
    if i == 0:
        return -1 if (p * (p - 1) // 2) % 2 else 1
    row = SIGN_ROWS.get(i)
    m = p - i
    if row is not None and 0 <= m < len(row):
        return 1 if row[m] == "+" else -1
    key = (i, p, q)
    if key not in _calibrated:
        _calibrated.update(calibrate_signs(i, p + q - i))
    return _calibrated[key]


def _check_pair(f: Cochain, g: Cochain) -> None:
    if f.complex is not g.complex:
        raise ComplexError("cochains live on different complexes")
    if f.ring is not g.ring:
        raise RingError(f"ring mismatch: {f.ring.value} vs {g.ring.value}")


def _int64_view(values: np.ndarray) -> np.ndarray | None:
    """int64 copy of an object array when every entry is small, else None."""
    try:
        arr = values.astype(np.int64)
    except OverflowError:
        return None
    if len(arr) and np.abs(arr).max() >= 1 << 28:
        return None
    return arr


def _evaluate(i: int, f: Cochain, g: Cochain, units) -> Cochain:
    _check_pair(f, g)
    K = f.complex
    p, q = f.degree, g.degree
    n = p + q - i
    if n < 0:
        raise ComplexError(f"D^{i} of degrees ({p}, {q}) has negative degree")
    terms = cut_terms(i, p, q)
    if n > K.dimension or not terms:
        return Cochain.zeros(K, n, f.ring)
    unit = units(i, p, q)
    if f.ring is Ring.MOD2:
        out = np.zeros(K.count(n), dtype=np.uint8)
        for front, back, _ in terms:
            out ^= f.values[K.subface_indices(n, front)] & g.values[K.subface_indices(n, back)]
        return Cochain._raw(K, n, f.ring, out)
    fv, gv = _int64_view(f.values), _int64_view(g.values)
    small = fv is not None and gv is not None
    if small:
        out = np.zeros(K.count(n), dtype=np.int64)
    else:
        fv, gv = f.values, g.values
        out = np.zeros(K.count(n), dtype=object)
    for front, back, sign in terms:
        prod = fv[K.subface_indices(n, front)] * gv[K.subface_indices(n, back)]
        if sign * unit > 0:
            out += prod
        else:
            out -= prod
    if small:
        vals = np.empty(len(out), dtype=object)
        vals[:] = out.tolist()
        out = vals
    return Cochain._raw(K, n, f.ring, out, f.den * g.den)


def cup_i(i: int, f: Cochain, g: Cochain, family: CupFamily = DEFAULT_FAMILY) -> Cochain:
    """D^i(f (x) g); zero when i exceeds either degree."""
    if i < 0:
        raise ValueError("cup-i index must be nonnegative")
    n = f.degree + g.degree - i
    if n < 0:
        _check_pair(f, g)
        raise ComplexError(f"D^{i} lowers degree {f.degree + g.degree} below zero")
    return _evaluate(i, f, g, family.unit)


def cup(f: Cochain, g: Cochain) -> Cochain:
    """Alexander-Whitney cup product: front p-face times back q-face."""
    return cup_i(0, f, g)


def _relation_defect(i: int, f: Cochain, g: Cochain, units) -> Cochain:
    p, q = f.degree, g.degree
    ev = lambda j, a, b: _evaluate(j, a, b, units)
    df, dg = coboundary(f), coboundary(g)
    sp = -1 if p % 2 else 1
    si = -1 if i % 2 else 1
    out = ev(i, df, g) + sp * ev(i, f, dg)
    if p + q - i >= 0:
        out = out - si * coboundary(ev(i, f, g))
    out = out - ev(i - 1, f, g) - (si * swap_sign(p, q)) * ev(i - 1, g, f)
    return out


def cup_i_defect(i: int, f: Cochain, g: Cochain, family: CupFamily = DEFAULT_FAMILY) -> Cochain:
    """D^i delta(f (x) g) - (-1)^i delta D^i(f (x) g) - D^(i-1)(f (x) g) - (-1)^i D^(i-1) T(f (x) g)."""
    if i < 1:
        raise ValueError("the relation needs i >= 1")
    _check_pair(f, g)
    if f.degree + g.degree - i + 1 < 0:
        raise ComplexError(f"relation for D^{i} undefined in degrees ({f.degree}, {g.degree})")
    return _relation_defect(i, f, g, family.unit)


# --------------------------------------------------------------------------
# calibration


def _model_simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex([tuple(range(n + 1))], n + 1, name=f"simplex({n})")


def calibrate_signs(i_max: int, n_max: int, samples: int = 3, seed: int = 0) -> dict[tuple[int, int, int], int]:
    """Determine sigma(i, p, q) for 1 <= i <= i_max and p + q - i <= n_max by search.

    Within a fixed total p + q, the relation applied to inputs of degrees
    (a - 1, b) involves exactly one unknown unit, sigma(i, a, b), once the
    units with smaller a are known; it is fixed by random integral cochains
    on the model simplex and must be the unique sign that kills the defect.
    """
    rng = np.random.default_rng(seed)
    table: dict[tuple[int, int, int], int] = {}

    def units(j: int, a: int, b: int) -> int:
        if j == 0:
            return sign_unit(0, a, b)
        if j > min(a, b):
            return 1
        return table[(j, a, b)]

    for i in range(1, i_max + 1):
        for total in range(2 * i, n_max + i + 1):
            n = total - i
            K = _model_simplex(n)
            for a in range(i, total - i + 1):
                b = total - a
                key = (i, a, b)
                candidates = {1, -1}
                for _ in range(samples):
                    f = Cochain(K, a - 1, Ring.INT, rng.integers(-3, 4, K.count(a - 1)))
                    g = Cochain(K, b, Ring.INT, rng.integers(-3, 4, K.count(b)))
                    passing = set()
                    for s in sorted(candidates):
                        table[key] = s
                        if _relation_defect(i, f, g, units).is_zero():
                            passing.add(s)
                    candidates = passing
                    if len(candidates) <= 1:
                        break
                if len(candidates) != 1:
                    raise ArithmeticError(f"no unique unit for D^{i} in bidegree ({a}, {b})")
                table[key] = candidates.pop()
    return table
