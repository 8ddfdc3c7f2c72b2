"""Exact linear algebra over Z, Z/2 and Q.

Matrices are stored column-wise as dicts ``row -> nonzero int``.  Smith
normal form runs on dense Python-int lists (arbitrary precision) and is meant
for the small matrices left after chain-complex reduction; elimination over
GF(2) packs rows into Python int bitsets, elimination over Q keeps sparse rows
of Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complex_core import Ring

__all__ = [
    "DimensionError",
    "SparseMatrix",
    "SmithDecomposition",
    "SolveResult",
    "smith_normal_form",
    "solve_linear",
    "rank",
    "kernel_basis",
    "gf2_rank",
    "gf2_solve",
    "matmul",
    "identity",
]


class DimensionError(ValueError):
    pass


class SparseMatrix:
    """Integer (or rational) matrix stored as a list of sparse columns."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Sequence[dict] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise DimensionError(f"expected {ncols} columns, got {len(cols)}")
        self.cols = [{r: v for r, v in c.items() if v} for c in cols]
        for c in self.cols:
            for r in c:
                if not 0 <= r < nrows:
                    raise DimensionError(f"row index {r} out of range for {nrows} rows")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged dense matrix")
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j]} for j in range(ncols)]
        return cls(nrows, ncols, cols)

    def to_dense(self) -> list[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def transpose(self) -> "SparseMatrix":
        cols: list[dict] = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return SparseMatrix(self.ncols, self.nrows, cols)

    def dot(self, x: Sequence) -> list:
        if len(x) != self.ncols:
            raise DimensionError(f"vector of length {len(x)} for {self.ncols} columns")
        out: list = [0] * self.nrows
        for j, c in enumerate(self.cols):
            xj = x[j]
            if xj:
                for i, v in c.items():
                    out[i] += v * xj
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = []
        for c in other.cols:
            acc: dict = {}
            for k, w in c.items():
                for i, v in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            cols.append(acc)
        return SparseMatrix(self.nrows, other.ncols, cols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseMatrix) and self.shape == other.shape and self.cols == other.cols

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    if not A:
        return []
    inner = len(B)
    if len(A[0]) != inner:
        raise DimensionError("inner dimensions differ")
    ncols = len(B[0]) if inner else 0
    out = []
    for row in A:
        acc = [0] * ncols
        for k, a in enumerate(row):
            if a:
                for j, b in enumerate(B[k]):
                    if b:
                        acc[j] += a * b
        out.append(acc)
    return out


def _dense(A) -> list[list[int]]:
    if isinstance(A, SparseMatrix):
        return A.to_dense()
    return [list(map(int, r)) for r in A]


# --------------------------------------------------------------------------
# Smith normal form


@dataclass
class SmithDecomposition:
    """U·A·V = D with U, V unimodular; ``U_inv``/``V_inv`` are their inverses."""

    D: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    U_inv: list[list[int]]
    V_inv: list[list[int]]
    factors: list[int] = field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.factors)


def smith_normal_form(A, verify: bool = True) -> SmithDecomposition:
    """Smith normal form with both transforms and their inverses.

    Pivot choice is deterministic: the nonzero entry of least absolute value,
    ties broken by row then column.
    """
    M = _dense(A)
    m = len(M)
    n = len(M[0]) if m else (A.ncols if isinstance(A, SparseMatrix) else 0)
    U, Ui = identity(m), identity(m)
    V, Vi = identity(n), identity(n)

    def row_add(dst: int, src: int, k: int) -> None:  # row_dst += k row_src
        if not k:
            return
        M[dst] = [a + k * b for a, b in zip(M[dst], M[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]
        for r in Ui:
            r[src] -= k * r[dst]

    def col_add(dst: int, src: int, k: int) -> None:  # col_dst += k col_src
        if not k:
            return
        for r in M:
            r[dst] += k * r[src]
        for r in V:
            r[dst] += k * r[src]
        Vi[src] = [a - k * b for a, b in zip(Vi[src], Vi[dst])]

    def row_swap(a: int, b: int) -> None:
        if a != b:
            M[a], M[b] = M[b], M[a]
            U[a], U[b] = U[b], U[a]
            for r in Ui:
                r[a], r[b] = r[b], r[a]

    def col_swap(a: int, b: int) -> None:
        if a != b:
            for r in M:
                r[a], r[b] = r[b], r[a]
            for r in V:
                r[a], r[b] = r[b], r[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    def row_neg(a: int) -> None:
        M[a] = [-x for x in M[a]]
        U[a] = [-x for x in U[a]]
        for r in Ui:
            r[a] = -r[a]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = M[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            p = M[t][t]
            dirty = False
            for i in range(t + 1, m):
                if M[i][t]:
                    row_add(i, t, -(M[i][t] // p))
                    if M[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if M[t][j]:
                    col_add(j, t, -(M[t][j] // p))
                    if M[t][j]:
                        dirty = True
            if dirty:
                # move the smallest leftover into the pivot position and retry
                cand = [(abs(M[i][t]), i, t) for i in range(t + 1, m) if M[i][t]]
                cand += [(abs(M[t][j]), t, j) for j in range(t + 1, n) if M[t][j]]
                _, i, j = min(cand)
                if j == t:
                    row_swap(t, i)
                else:
                    col_swap(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(M[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if M[t][t] < 0:
            row_neg(t)
        t += 1

    factors = [M[k][k] for k in range(min(m, n)) if M[k][k]]
    dec = SmithDecomposition(M, U, V, Ui, Vi, factors)
    if verify:
        _verify_snf(A, dec)
    return dec


def _verify_snf(A, dec: SmithDecomposition) -> None:
    orig = _dense(A)
    m = len(orig)
    if m == 0 or not orig[0]:
        return
    if matmul(matmul(dec.U, orig), dec.V) != dec.D:
        raise ArithmeticError("Smith decomposition failed re-verification")
    for i, row in enumerate(dec.D):
        for j, v in enumerate(row):
            if v and i != j:
                raise ArithmeticError("Smith form not diagonal")
    f = dec.factors
    if any(b % a for a, b in zip(f, f[1:])):
        raise ArithmeticError("invariant factors do not divide each other")


# --------------------------------------------------------------------------
# GF(2)


def _bits(seq: Iterable[int]) -> int:
    out = 0
    for k, v in enumerate(seq):
        if v & 1:
            out |= 1 << k
    return out


def _gf2_echelon(rows: list[int]) -> dict[int, int]:
    """Reduced pivot table lowbit -> row (rows are int bitsets)."""
    pivots: dict[int, int] = {}
    for r in rows:
        for b, pr in pivots.items():
            if (r >> b) & 1:
                r ^= pr
        if r:
            low = (r & -r).bit_length() - 1
            for b in list(pivots):
                if (pivots[b] >> low) & 1:
                    pivots[b] ^= r
            pivots[low] = r
    return pivots


def gf2_rank(rows: Sequence[int]) -> int:
    return len(_gf2_echelon(list(rows)))


def gf2_solve(A: Sequence[Sequence[int]], b: Sequence[int]):
    """Solve A x = b over GF(2) for a dense 0/1 matrix; returns (x, kernel) or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    if len(b) != m:
        raise DimensionError("right-hand side length mismatch")
    # augmented rows: bits 0..n-1 = coefficients, bit n = rhs
    rows = [_bits(A[i]) | ((b[i] & 1) << n) for i in range(m)]
    pivots = _gf2_echelon(rows)
    if n in pivots:
        return None
    x = [0] * n
    for col, r in pivots.items():
        x[col] = (r >> n) & 1
    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for col, r in pivots.items():
            v[col] = (r >> f) & 1
        kernel.append(v)
    return x, kernel


# --------------------------------------------------------------------------
# Q


def _rat_solve(A: Sequence[Sequence], b: Sequence, n: int):
    """Sparse Gauss-Jordan over Q; rows kept as dicts col -> Fraction."""
    rows = []
    for i, r in enumerate(A):
        d = {j: Fraction(v) for j, v in enumerate(r) if v}
        if b[i]:
            d[n] = Fraction(b[i])
        rows.append(d)
    return _rat_solve_rows(rows, n)


def _rat_solve_rows(rows: list[dict], n: int):
    pivots: dict[int, dict] = {}
    order: list[int] = []
    for r in rows:
        for col in [c for c in order if c in r]:
            if col not in r:
                continue
            k = r[col]
            for c, v in pivots[col].items():
                nv = r.get(c, 0) - k * v
                if nv:
                    r[c] = nv
                else:
                    r.pop(c, None)
        keys = [c for c in r if c < n]
        if not keys:
            if r.get(n):
                return None
            continue
        col = min(keys, key=lambda c: (len(r), c))
        inv = 1 / r[col]
        r = {c: v * inv for c, v in r.items()}
        for pc in order:
            pr = pivots[pc]
            if col in pr:
                k = pr[col]
                for c, v in r.items():
                    nv = pr.get(c, 0) - k * v
                    if nv:
                        pr[c] = nv
                    else:
                        pr.pop(c, None)
        pivots[col] = r
        order.append(col)
    x = [Fraction(0)] * n
    for col, r in pivots.items():
        x[col] = r.get(n, Fraction(0))
    free = [j for j in range(n) if j not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for col, r in pivots.items():
            if f in r:
                v[col] = -r[f]
        kernel.append(v)
    return x, kernel


# --------------------------------------------------------------------------
# public solver


@dataclass
class SolveResult:
    solution: list
    kernel: list[list]


def _as_rows(A) -> tuple[list[list], int, int]:
    if isinstance(A, SparseMatrix):
        return A.to_dense(), A.nrows, A.ncols
    rows = [list(r) for r in A]
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise DimensionError("ragged matrix")
    return rows, m, n


def solve_linear(A, b: Sequence, ring: Ring | str = Ring.RAT, ncols: int | None = None, with_kernel: bool = True) -> SolveResult | None:
    """One solution of A x = b over the ring plus a kernel basis, or None.

    Over Int the kernel basis is a lattice basis of the integral kernel.
    With ``with_kernel=False`` the kernel is returned empty.  Every returned
    vector is re-verified by substitution.
    """
    ring = Ring.parse(ring)
    rows, m, n = _as_rows(A)
    if ncols is not None and m == 0:
        n = ncols
    if len(b) != m:
        raise DimensionError(f"right-hand side has length {len(b)}, matrix has {m} rows")
    if ring is Ring.MOD2:
        if m == 0:
            return SolveResult([0] * n, [[int(i == j) for j in range(n)] for i in range(n)] if with_kernel else [])
        res = gf2_solve([[v & 1 for v in r] for r in rows], [v & 1 for v in b])
    elif ring is Ring.RAT:
        res = _rat_solve(rows, b, n)
    else:
        res = _int_solve(rows, b, m, n)
    if res is None:
        return None
    x, ker = res
    if not with_kernel:
        ker = []
    sparse = [[(j, a) for j, a in enumerate(r) if a] for r in rows]

    def check(v, rhs) -> bool:
        for r, t in zip(sparse, rhs):
            acc = sum(a * v[j] for j, a in r)
            if (acc - t) % 2 if ring is Ring.MOD2 else acc != t:
                return False
        return True

    if not check(x, b) or not all(check(v, [0] * m) for v in ker):
        raise ArithmeticError("linear solve failed re-verification")
    return SolveResult(x, ker)


def _int_solve(rows: list[list[int]], b: Sequence, m: int, n: int):
    if any(Fraction(v).denominator != 1 for v in b):
        return None
    b = [int(v) for v in b]
    if m == 0:
        return [0] * n, [[int(i == j) for j in range(n)] for i in range(n)]
    dec = smith_normal_form(rows)
    # U A V = D, so A x = b  <=>  D y = U b with x = V y
    ub = [sum(u * v for u, v in zip(r, b)) for r in dec.U]
    y = [0] * n
    for k in range(m):
        d = dec.D[k][k] if k < n else 0
        if d == 0:
            if ub[k]:
                return None
        elif ub[k] % d:
            return None
        else:
            y[k] = ub[k] // d
    x = [sum(dec.V[i][k] * y[k] for k in range(n)) for i in range(n)]
    r = dec.rank
    kernel = [[dec.V[i][k] for i in range(n)] for k in range(r, n)]
    return x, kernel


def rank(A, ring: Ring | str = Ring.RAT) -> int:
    ring = Ring.parse(ring)
    rows, m, n = _as_rows(A)
    if ring is Ring.MOD2:
        return gf2_rank([_bits(r) for r in rows])
    res = _rat_solve(rows, [0] * m, n)
    assert res is not None
    return n - len(res[1])


def kernel_basis(A, ring: Ring | str = Ring.RAT, ncols: int | None = None) -> list[list]:
    rows, m, n = _as_rows(A)
    res = solve_linear(rows, [0] * m, ring, ncols=ncols if m == 0 else None)
    assert res is not None
    return res.kernel
