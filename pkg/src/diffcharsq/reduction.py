"""Algebraic reduction of the simplicial chain complex.

Repeatedly cancels a pair (a, b), dim a = dim b + 1, whose incidence
kappa = <d a, b> is a unit, replacing d x by d x - <d x, b> kappa^-1 d a for
the other cofaces x of b.  What is left is a much smaller chain complex M
together with the chain maps

    f: C -> M   (projection),    g: M -> C   (inclusion),    f g = id,

and their duals on cochains.  Every cancellation is recorded so that the four
maps can be replayed on single vectors:

* ``extend_cochain``   (f^*: M^k -> C^k) reversed pass over pairs with dim b = k
* ``restrict_cochain`` (g^*: C^k -> M^k) forward pass over pairs with dim a = k
* ``include_chain``    (g: M_k -> C_k)   reversed pass over pairs with dim a = k
* ``project_chain``    (f: C_k -> M_k)   forward pass over pairs with dim b = k

Over Z only coefficients +-1 are cancelled, so torsion survives in M.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .complex_core import Ring, SimplicialComplex

__all__ = ["ReducedComplex", "reduce_complex"]


@dataclass
class _Step:
    a: int
    b: int
    kinv: int
    beta: dict  # d a - kappa b, in the complex current at this step
    lam: dict  # <d x, b> for the other cofaces x of b


class ReducedComplex:
    """Result of reducing C_*(K) over Z (``Ring.INT``) or Z/2 (``Ring.MOD2``)."""

    def __init__(self, K: SimplicialComplex, mode: Ring):
        self.complex = K
        self.mode = mode
        self.offsets = np.cumsum([0] + [K.count(p) for p in range(K.dimension + 1)]).tolist()
        self.steps: list[list[_Step]] = [[] for _ in range(K.dimension + 1)]  # by dim b
        self.cells: list[list[int]] = []  # surviving global ids per dimension
        self.differential: list[dict[int, dict[int, int]]] = []  # k -> cell -> boundary dict

    # ------------------------------------------------------------------
    def _dim_of(self, cell: int) -> int:
        for k in range(len(self.offsets) - 1):
            if cell < self.offsets[k + 1]:
                return k
        raise IndexError(cell)

    def local(self, k: int, cell: int) -> int:
        return cell - self.offsets[k]

    def matrix(self, k: int) -> list[list[int]]:
        """Dense matrix of d_k: M_k -> M_{k-1} (rows: M_{k-1} cells)."""
        rows = self.cells[k - 1] if k >= 1 else []
        cols = self.cells[k] if 0 <= k < len(self.cells) else []
        pos = {c: i for i, c in enumerate(rows)}
        out = [[0] * len(cols) for _ in rows]
        if k >= 1:
            for j, c in enumerate(cols):
                for r, v in self.differential[k][c].items():
                    out[pos[r]][j] = v
        return out

    def rank(self, k: int) -> int:
        return len(self.cells[k]) if 0 <= k < len(self.cells) else 0

    # ------------------------------------------------------------------
    # replay of the chain maps on dicts keyed by global cell id
    def _field(self, x: int) -> int:
        return x & 1 if self.mode is Ring.MOD2 else x

    def extend_cochain(self, k: int, values: dict[int, object]) -> dict[int, object]:
        phi = dict(values)
        for st in reversed(self.steps[k]):
            acc = 0
            for y, v in st.beta.items():
                w = phi.get(y)
                if w:
                    acc += v * w
            if acc:
                phi[st.b] = self._field(-st.kinv * acc)
        return phi

    def restrict_cochain(self, k: int, phi: dict[int, object]) -> dict[int, object]:
        phi = dict(phi)
        if k >= 1:
            for st in self.steps[k - 1]:
                va = phi.get(st.a)
                if va:
                    s = st.kinv * va
                    for x, lx in st.lam.items():
                        phi[x] = self._field(phi.get(x, 0) - lx * s)
        return {c: phi.get(c, 0) for c in self.cells[k]}

    def include_chain(self, k: int, z: dict[int, object]) -> dict[int, object]:
        z = dict(z)
        if k >= 1:
            for st in reversed(self.steps[k - 1]):
                acc = 0
                for x, lx in st.lam.items():
                    w = z.get(x)
                    if w:
                        acc += lx * w
                if acc:
                    z[st.a] = self._field(z.get(st.a, 0) - st.kinv * acc)
        return z

    def project_chain(self, k: int, c: dict[int, object]) -> dict[int, object]:
        c = dict(c)
        for st in self.steps[k]:
            cb = c.pop(st.b, 0)
            if cb:
                s = st.kinv * cb
                for y, v in st.beta.items():
                    c[y] = self._field(c.get(y, 0) - s * v)
        return {x: c.get(x, 0) for x in self.cells[k]}


def reduce_complex(K: SimplicialComplex, mode: Ring | str = Ring.INT) -> ReducedComplex:
    """Reduce C_*(K); results are cached on the complex."""
    mode = Ring.parse(mode)
    if mode is Ring.RAT:
        mode = Ring.INT
    key = ("reduction", mode)
    if key in K._cache:
        return K._cache[key]
    R = ReducedComplex(K, mode)
    mod2 = mode is Ring.MOD2
    off = R.offsets
    n_cells = off[-1]
    bd: list[dict[int, int] | None] = [None] * n_cells
    cbd: list[dict[int, int] | None] = [dict() for _ in range(n_cells)]
    for v in range(K.count(0)):
        bd[v] = {}
    for p in range(1, K.dimension + 1):
        idx = (K.boundary_indices(p) + off[p - 1]).tolist()
        base = off[p]
        for j, row in enumerate(idx):
            cell = base + j
            d = {f: (1 if (mod2 or k % 2 == 0) else -1) for k, f in enumerate(row)}
            bd[cell] = d
            for f, v in d.items():
                cbd[f][cell] = v

    def is_unit(v: int) -> bool:
        return v == 1 or v == -1 if not mod2 else v & 1 == 1

    for k in range(K.dimension):
        heap = [(len(cbd[b]), b) for b in range(off[k], off[k + 1]) if cbd[b]]
        heapq.heapify(heap)
        alive_b = {b for b in range(off[k], off[k + 1]) if bd[b] is not None}
        while heap:
            size, b = heapq.heappop(heap)
            if b not in alive_b or size != len(cbd[b]):
                continue
            best = None
            for a, kap in cbd[b].items():
                if is_unit(kap):
                    cost = len(bd[a])
                    if best is None or cost < best[0]:
                        best = (cost, a, kap)
            if best is None:
                continue
            _, a, kap = best
            kinv = 1 if mod2 else kap  # kappa = +-1 is its own inverse
            da = bd[a]
            beta = {y: v for y, v in da.items() if y != b}
            lam = {x: v for x, v in cbd[b].items() if x != a}
            touched = set()
            for x, lx in lam.items():
                s = lx * kinv
                dx = bd[x]
                for y, v in da.items():
                    nv = dx.get(y, 0) - s * v
                    if mod2:
                        nv &= 1
                    if nv:
                        dx[y] = nv
                        cbd[y][x] = nv
                    else:
                        dx.pop(y, None)
                        cbd[y].pop(x, None)
                    touched.add(y)
            # remove a and b
            for z in cbd[a]:
                bd[z].pop(a, None)
            for y in da:
                cbd[y].pop(a, None)
            for y in bd[b]:
                cbd[y].pop(b, None)
            bd[a] = bd[b] = None
            cbd[a] = cbd[b] = None
            alive_b.discard(b)
            R.steps[k].append(_Step(a, b, kinv, beta, lam))
            for y in touched:
                if y in alive_b:
                    heapq.heappush(heap, (len(cbd[y]), y))
    for p in range(K.dimension + 1):
        cells = [c for c in range(off[p], off[p + 1]) if bd[c] is not None]
        R.cells.append(cells)
        R.differential.append({c: dict(bd[c]) for c in cells})
    K._cache[key] = R
    return R
