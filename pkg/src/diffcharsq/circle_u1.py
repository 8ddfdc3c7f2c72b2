"""U(1)-valued maps on the circle as degree-0 characters.

Orientation: vertex i of circle(m) sits at theta_i = 2 pi i / m and the
integral fundamental 1-cycle of circle(m) is [0,1] + ... + [m-2,m-1] - [0,m-1],
the direction of increasing theta.  The quadrature expression
Delta_f G(0) - int F dG equals the character of f u g evaluated on the
opposite cycle (decreasing theta): for constant F = a it gives -a Delta_g,
while the increasing cycle gives +a Delta_g.  ``discrete_product_value`` therefore
evaluates on the decreasing cycle, and the two sides are compared directly.

On circle(m) the discrete product reproduces the trapezoidal rule on the m
vertex samples exactly, so against a fine quadrature the gap decays like 1/m^2.

This is the only module that touches floating point.  Discretization turns
every float sample into an exact Fraction before anything else happens.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .cohomology import pair
from .complex_core import Cochain, Ring, SimplicialComplex, build_standard_space, coboundary, fundamental_cycle
from .diffchar import CSCochain, CharacterClass, cup_character, evaluate_character

__all__ = [
    "SamplingError",
    "ResolutionError",
    "QuadratureError",
    "CircleMap",
    "cs_product_quadrature",
    "discretize_circle_map",
    "discrete_product_value",
    "winding_of",
    "q0_circle",
    "random_circle_map",
    "GUARD_BAND",
]

TWO_PI = 2.0 * math.pi
GUARD_BAND = 0.05


class SamplingError(ValueError):
    pass


class ResolutionError(ValueError):
    pass


class QuadratureError(ArithmeticError):
    pass


@dataclass
class CircleMap:
    """f(theta) = exp(2 pi i F(theta)) with F(theta + 2 pi) = F(theta) + winding.

    ``samples`` holds F at theta_k = 2 pi k / M for k = 0..M (so the last
    sample equals the first plus the winding); F is linearly interpolated in
    between.  ``func`` optionally keeps an exact callable for resampling.
    """

    winding: int
    samples: np.ndarray
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.ndim != 1 or len(s) < 3:
            raise SamplingError("need at least three samples")
        if not np.all(np.isfinite(s)):
            raise SamplingError("samples must be finite")
        if abs(s[-1] - s[0] - self.winding) > 1e-9 * max(1.0, abs(self.winding)):
            raise SamplingError("last sample must equal the first plus the winding number")
        self.samples = s

    @classmethod
    def from_function(cls, F: Callable, winding: int, n: int = 1024) -> "CircleMap":
        theta = np.linspace(0.0, TWO_PI, n + 1)
        vals = np.asarray(F(theta), dtype=float)
        vals[-1] = vals[0] + winding
        return cls(int(winding), vals, F)

    @classmethod
    def from_csv(cls, path: str | Path, winding: int) -> "CircleMap":
        """Read rows ``theta, F(theta)`` covering [0, 2 pi]; resampled onto a uniform grid."""
        rows = []
        with open(path, newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), 1):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if lineno == 1:
                        continue  # header
                    raise SamplingError(f"line {lineno}: expected 'theta, F' numbers") from None
        if len(rows) < 3:
            raise SamplingError("need at least three samples")
        theta, vals = np.array(rows).T
        if abs(theta[0]) > 1e-12 or abs(theta[-1] - TWO_PI) > 1e-9 or np.any(np.diff(theta) <= 0):
            raise SamplingError("theta must increase from 0 to 2 pi")
        grid = np.linspace(0.0, TWO_PI, len(theta))
        uniform = np.interp(grid, theta, vals)
        uniform[-1] = uniform[0] + winding
        return cls(int(winding), uniform)

    def lift(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.func is not None:
            out = np.asarray(self.func(theta), dtype=float)
        else:
            grid = np.linspace(0.0, TWO_PI, len(self.samples))
            out = np.interp(theta, grid, self.samples)
        return out

    def grid_values(self, n: int) -> np.ndarray:
        """F at theta_k = 2 pi k / n, k = 0..n, with the endpoint condition enforced."""
        vals = self.lift(np.linspace(0.0, TWO_PI, n + 1)).astype(float)
        vals[-1] = vals[0] + self.winding
        return vals


def cs_product_quadrature(f: CircleMap, g: CircleMap, n: int = 4096) -> float:
    """Delta_f G(0) - int_0^{2 pi} F dG mod 1, trapezoidal on n intervals."""
    if n < 8:
        raise SamplingError("quadrature needs n >= 8")
    F = f.grid_values(n)
    G = g.grid_values(n)
    integral = float(np.sum(np.diff(G) * (F[:-1] + F[1:]) * 0.5))
    value = f.winding * G[0] - integral
    return float(value - math.floor(value))


def discretize_circle_map(f: CircleMap, m: int, K: SimplicialComplex | None = None) -> CSCochain:
    """Level-1 degree-1 cocycle (c, h, omega) on circle(m) with h = frac F at the vertices."""
    if m < 3:
        raise SamplingError("circle needs m >= 3")
    if K is None:
        K = build_standard_space(f"circle({m})")
    elif K.f_vector != (m, m) or K.faces[1][-1] != (m - 2, m - 1):
        raise SamplingError(f"complex is not circle({m})")
    F = [Fraction(float(v)) for v in f.grid_values(m)]  # exact rationals of the float samples
    F[m] = F[0] + f.winding
    steps = [F[i + 1] - F[i] for i in range(m)]
    if any(abs(s) >= Fraction(1, 2) for s in steps):
        raise ResolutionError("increment of at least 1/2 between vertices; refine the circle")
    h = [v - math.floor(v) for v in F[:m]]
    omega = {}
    for idx, (a, b) in enumerate(K.faces[1]):
        if b == a + 1:
            omega[idx] = F[b] - F[a]
        else:  # the closing edge (0, m-1) runs against theta
            omega[idx] = F[m - 1] - F[m]
    h_c = Cochain.from_values(K, 0, Ring.RAT, h)
    w_c = Cochain.from_dict(K, 1, Ring.RAT, omega)
    c_rat = w_c - coboundary(h_c)
    c = c_rat.to_ring(Ring.INT)  # raises if not integral
    return CSCochain.make(K, 1, 1, c, h_c, w_c)


def winding_of(x: CSCochain) -> Fraction:
    """Sum of the form over the increasing-theta cycle."""
    return pair(x.omega, fundamental_cycle(x.complex, Ring.INT))


def discrete_product_value(f: CircleMap, g: CircleMap, m: int) -> Fraction:
    """(x_f u x_g) on the decreasing-theta cycle of circle(m), exact, in [0, 1)."""
    K = build_standard_space(f"circle({m})")
    xf = discretize_circle_map(f, m, K)
    xg = discretize_circle_map(g, m, K)
    prod = CharacterClass(cup_character(xf, xg))
    return evaluate_character(prod, fundamental_cycle(K, Ring.INT) * -1)


def _nearest_half(v: float) -> int:
    d0 = min(v, 1.0 - v)
    d1 = abs(v - 0.5)
    if min(d0, d1) > GUARD_BAND:
        raise QuadratureError(f"value {v:.6f} is not within {GUARD_BAND} of 0 or 1/2")
    return 0 if d0 <= d1 else 1


def q0_circle(f: CircleMap, n: int = 4096) -> int:
    """(f u f)(S^1) by quadrature, read through 1/2 Z / Z = Z/2."""
    return _nearest_half(cs_product_quadrature(f, f, n))


def random_circle_map(rng: np.random.Generator, winding: int | None = None, modes: int = 3, amplitude: float = 0.15) -> CircleMap:
    """Smooth random lift: winding * t + a0 + sum of small trigonometric modes."""
    if winding is None:
        winding = int(rng.integers(-4, 5))
    a0 = float(rng.uniform(-2, 2))
    coef = rng.uniform(-amplitude, amplitude, size=(modes, 2))

    def F(theta):
        theta = np.asarray(theta, dtype=float)
        out = winding * theta / TWO_PI + a0
        for k in range(modes):
            out = out + coef[k, 0] * np.sin((k + 1) * theta) + coef[k, 1] * (np.cos((k + 1) * theta) - 1.0)
        return out

    return CircleMap.from_function(F, winding, 1024)
