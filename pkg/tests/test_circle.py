from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from diffcharsq.circle_u1 import (
    CircleMap,
    QuadratureError,
    _nearest_half,
    ResolutionError,
    SamplingError,
    cs_product_quadrature,
    discrete_product_value,
    discretize_circle_map,
    q0_circle,
    random_circle_map,
    winding_of,
)
from diffcharsq.complex_core import Ring, coboundary
from diffcharsq.diffchar import cs_differential

TWO_PI = 2 * math.pi


def _linear(winding, offset=0.0):
    return CircleMap.from_function(lambda t: winding * np.asarray(t) / TWO_PI + offset, winding)


def _mod1(v):
    return v - math.floor(v)


def _dist(a, b):
    d = abs(a - b) % 1.0
    return min(d, 1.0 - d)


def test_identity_map_squared_is_half():
    f = _linear(1)
    assert _dist(cs_product_quadrature(f, f, 4096), 0.5) < 1e-12


def test_constant_g_gives_winding_times_g0():
    f = random_circle_map(np.random.default_rng(0), winding=3)
    g = _linear(0, 0.37)
    assert _dist(cs_product_quadrature(f, g), _mod1(3 * 0.37)) < 1e-12


def test_constant_f_gives_minus_a_winding_g():
    f = _linear(0, 0.29)
    g = random_circle_map(np.random.default_rng(1), winding=2)
    assert _dist(cs_product_quadrature(f, g), _mod1(-0.29 * 2)) < 1e-12


def _poly_integral(df, a, dg, b):
    """Exact int_0^1 F dG for F = df u + a u^2 (1-u)^2 and G = dg u + b u^2 (1-u)^2."""
    # coefficients in u of F and G' (as Fractions), then integrate the product
    F = [Fraction(0), Fraction(df) + 0, a, -2 * a, a]
    G = [Fraction(0), Fraction(dg), b, -2 * b, b]
    dG = [k * G[k] for k in range(1, len(G))]
    total = Fraction(0)
    for i, x in enumerate(F):
        for j, y in enumerate(dG):
            total += x * y / (i + j + 1)
    return total


@pytest.mark.parametrize("df,a,dg,b", [(1, Fraction(3, 10), 2, Fraction(-1, 5)), (2, Fraction(1, 2), -1, Fraction(7, 10)), (0, Fraction(1, 4), 3, Fraction(1, 3))])
def test_quadrature_matches_polynomial_closed_form(df, a, dg, b):
    def lift(d, c):
        return lambda t: (lambda u: d * u + float(c) * u**2 * (1 - u) ** 2)(np.asarray(t) / TWO_PI)

    f = CircleMap.from_function(lift(df, a), df)
    g = CircleMap.from_function(lift(dg, b), dg)
    exact = _mod1(float(-_poly_integral(df, a, dg, b)))  # G(0) = 0
    assert _dist(cs_product_quadrature(f, g, 2**14), exact) < 1e-10


def test_quadrature_converges_quadratically():
    rng = np.random.default_rng(2)
    f, g = random_circle_map(rng, 1), random_circle_map(rng, 2)
    ref = cs_product_quadrature(f, g, 2**15)
    e1 = _dist(cs_product_quadrature(f, g, 256), ref)
    e2 = _dist(cs_product_quadrature(f, g, 512), ref)
    assert e2 < 0.3 * e1


def test_discretization_is_a_cocycle_with_total_winding():
    rng = np.random.default_rng(3)
    for w in (-2, 0, 1, 3):
        f = random_circle_map(rng, w)
        x = discretize_circle_map(f, 64)
        assert cs_differential(x).is_zero()
        assert winding_of(x) == w
        assert x.c.ring is Ring.INT
        assert x.omega - x.c.to_ring(Ring.RAT) == coboundary(x.h)


def test_linear_lift_telescopes():
    x = discretize_circle_map(_linear(1), 12)
    assert winding_of(x) == 1


def test_constant_map_discretizes_to_flat_data():
    x = discretize_circle_map(_linear(0, 2.25), 7)
    assert x.omega.is_zero() and x.c.is_zero()
    assert set(x.h.to_list()) == {Fraction(1, 4)}


def test_aliasing_and_bad_input_rejected():
    with pytest.raises(ResolutionError):
        discretize_circle_map(_linear(5), 8)
    with pytest.raises(SamplingError):
        discretize_circle_map(_linear(1), 2)
    with pytest.raises(SamplingError):
        cs_product_quadrature(_linear(1), _linear(1), 4)
    with pytest.raises(SamplingError):
        CircleMap(1, np.array([0.0, 0.5, 0.7]))


@pytest.mark.parametrize("w,expected", [(0, 0), (1, 1), (2, 0), (-1, 1), (3, 1)])
def test_q0_is_winding_parity(w, expected):
    f = random_circle_map(np.random.default_rng(10 + w), w)
    assert q0_circle(f) == expected


def test_q0_guard_band_rejects_values_far_from_half_integers():
    f = CircleMap(1, np.array([0.0, 0.25, 0.5, 0.75, 1.0]))
    assert q0_circle(f) == 1
    with pytest.raises(QuadratureError):
        _nearest_half(0.25)


def test_q0_invariant_under_resampling():
    rng = np.random.default_rng(4)
    f = random_circle_map(rng, 3)
    resampled = CircleMap(3, f.grid_values(777))
    assert q0_circle(f) == q0_circle(resampled) == 1


def _trapezoid(f, g, m):
    F = [Fraction(float(v)) for v in f.grid_values(m)]
    G = [Fraction(float(v)) for v in g.grid_values(m)]
    F[m], G[m] = F[0] + f.winding, G[0] + g.winding
    v = f.winding * G[0] - sum((G[k + 1] - G[k]) * (F[k] + F[k + 1]) / 2 for k in range(m))
    return v - math.floor(v)


@pytest.mark.parametrize("m", [12, 16, 33])
def test_discrete_product_equals_vertex_trapezoid(m):
    rng = np.random.default_rng(m)
    f, g = random_circle_map(rng, 1), random_circle_map(rng, -2)
    assert discrete_product_value(f, g, m) == _trapezoid(f, g, m)


def test_discrete_product_within_half_over_m():
    rng = np.random.default_rng(5)
    for _ in range(3):
        f, g = random_circle_map(rng), random_circle_map(rng)
        ref = cs_product_quadrature(f, g, 4096)
        for m in (32, 64):
            assert _dist(float(discrete_product_value(f, g, m)), ref) <= 0.5 / m


def test_csv_round_trip(tmp_path):
    theta = np.linspace(0, TWO_PI, 50)
    p = tmp_path / "f.csv"
    p.write_text("theta,F\n" + "\n".join(f"{float(t)!r},{float(t) / TWO_PI + 0.1!r}" for t in theta))
    f = CircleMap.from_csv(p, 1)
    assert abs(f.samples[-1] - f.samples[0] - 1) < 1e-12
    bad = tmp_path / "bad.csv"
    bad.write_text("theta,F\n0,0\n1,x\n")
    with pytest.raises(SamplingError, match="line 3"):
        CircleMap.from_csv(bad, 1)
