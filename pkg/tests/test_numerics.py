import math
import random

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from implicitlaw.errors import MaxDepth, MaxIterations, NoBracket
from implicitlaw.numerics import (
    Bracket,
    RngState,
    Tolerances,
    erf,
    erfc,
    integrate_adaptive,
    next_uniform,
    solve_monotone,
)

from oracles import ERF_1, INV_SQRT_2PI, SINE_ROOT_1, bisect_root, erf_taylor


def quintic(t):
    return t**5 + t


def quintic_d(t):
    return 5 * t**4 + 1


# --- solve_monotone ----------------------------------------------------------


def test_solve_quintic():
    oracle = bisect_root(quintic, 1.0, 0.0, 1.0)
    root = solve_monotone(quintic, quintic_d, 1.0, Bracket(0, 1))
    assert root == pytest.approx(0.754877666246693, abs=1e-9)
    assert root == pytest.approx(oracle, abs=1e-12)
    assert abs(quintic(root) - 1.0) <= 1e-12


def test_solve_identity():
    assert solve_monotone(lambda t: t, lambda t: 1.0, 0.3, Bracket(0, 1)) == pytest.approx(0.3, abs=1e-15)


def test_solve_flat_sine():
    g = lambda t: t + 0.9 * math.sin(t)  # noqa: E731
    dg = lambda t: 1 + 0.9 * math.cos(t)  # noqa: E731
    root = solve_monotone(g, dg, 1.0, Bracket(0, 1))
    assert abs(g(root) - 1.0) <= 1e-12
    assert root == pytest.approx(SINE_ROOT_1, abs=1e-12)
    assert round(root, 4) == 0.5385


def test_solve_decreasing():
    root = solve_monotone(lambda t: -quintic(t), lambda t: -quintic_d(t), -1.0, Bracket(0, 1))
    assert root == pytest.approx(bisect_root(quintic, 1.0, 0.0, 1.0), abs=1e-12)


def test_solve_endpoint_roots():
    assert solve_monotone(quintic, quintic_d, 0.0, Bracket(0, 1)) == 0.0
    assert solve_monotone(quintic, quintic_d, 2.0, Bracket(0, 1)) == 1.0


def test_no_bracket():
    with pytest.raises(NoBracket):
        solve_monotone(quintic, quintic_d, 5.0, Bracket(0, 1))


def test_max_iterations():
    with pytest.raises(MaxIterations):
        solve_monotone(quintic, lambda t: 0.0, 1.0, Bracket(0, 1), Tolerances(max_iter=3))


def test_zero_derivative_falls_back_to_bisection():
    root = solve_monotone(quintic, lambda t: 0.0, 1.0, Bracket(0, 1))
    assert abs(quintic(root) - 1.0) <= 1e-12 or abs(root - bisect_root(quintic, 1.0, 0, 1)) <= 1e-12


def test_bad_derivative_never_escapes_bracket():
    seen = []

    def g(t):
        seen.append(t)
        return quintic(t)

    # derivative off by a huge factor sends raw Newton steps far outside
    root = solve_monotone(g, lambda t: 1e-6, 1.0, Bracket(0, 1))
    assert abs(quintic(root) - 1.0) <= 1e-12 or abs(root - bisect_root(quintic, 1.0, 0, 1)) <= 1e-12
    assert all(0.0 <= t <= 1.0 for t in seen)


def _random_monotone(rng):
    c5 = rng.uniform(0.0, 2.0)
    c1 = rng.uniform(1.0, 3.0)
    s = rng.uniform(-0.9, 0.9) * c1  # |s| < c1 keeps the derivative positive
    k = rng.uniform(0.5, 1.0)
    sign = rng.choice([-1.0, 1.0])

    def g(t):
        return sign * (c5 * t**5 + c1 * t + s / k * math.sin(k * t))

    def dg(t):
        return sign * (5 * c5 * t**4 + c1 + s * math.cos(k * t))

    return g, dg


def test_residual_on_random_quintic_plus_sine_corpus():
    rng = random.Random(7)
    for _ in range(100):
        g, dg = _random_monotone(rng)
        lo, hi = -rng.uniform(1, 3), rng.uniform(1, 3)
        seen = []

        def traced(t):
            seen.append(t)
            return g(t)

        target = g(rng.uniform(lo, hi))
        root = solve_monotone(traced, dg, target, Bracket(lo, hi))
        assert abs(g(root) - target) <= 1e-12 * max(1.0, abs(target))
        assert all(lo <= t <= hi for t in seen)


# --- integrate_adaptive ------------------------------------------------------


def test_integrate_constant():
    assert integrate_adaptive(lambda t: 1.0, 0.0, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_integrate_quintic_derivative():
    assert integrate_adaptive(quintic_d, 0.0, 1.0) == pytest.approx(2.0, abs=1e-9)


def test_integrate_normal_mass():
    total = integrate_adaptive(lambda t: INV_SQRT_2PI * math.exp(-t * t / 2), -8.0, 8.0)
    # erf oracle: mass within 8 sigma is erf(8/sqrt 2) = 1 - 1.2e-15
    assert total == pytest.approx(erf_taylor(8 / math.sqrt(2), terms=200), abs=1e-9)
    assert total == pytest.approx(1.0, abs=1e-9)


@given(st.lists(st.floats(-3, 3), min_size=4, max_size=4), st.floats(-2, 0), st.floats(0.01, 2))
def test_simpson_exact_on_cubics(c, lo, width):
    hi = lo + width
    g = lambda t: c[0] + c[1] * t + c[2] * t**2 + c[3] * t**3  # noqa: E731
    antideriv = lambda t: c[0] * t + c[1] * t**2 / 2 + c[2] * t**3 / 3 + c[3] * t**4 / 4  # noqa: E731
    assert integrate_adaptive(g, lo, hi) == pytest.approx(antideriv(hi) - antideriv(lo), abs=1e-12)


def test_integrate_empty_interval():
    assert integrate_adaptive(quintic, 1.0, 1.0) == 0.0


def test_integrate_jump_hits_max_depth():
    with pytest.raises(MaxDepth):
        integrate_adaptive(lambda t: 1.0 if t < 0.3 else 0.0, 0.0, 1.0, Tolerances(max_quad_depth=30))


# --- erf ---------------------------------------------------------------------


def test_erf_values():
    assert erf(0.0) == 0.0
    assert abs(erf(1.0) - ERF_1) <= 1e-10
    assert abs(erf(1.0) - erf_taylor(1.0)) <= 1e-10
    assert erf(-1.0) == -erf(1.0)


@pytest.mark.parametrize("x", [0.1, 0.5, 1.5, 1.99, 2.0, 2.01, 2.5, 3.0, 4.0])
def test_erf_against_taylor_oracle(x):
    assert abs(erf(x) - erf_taylor(x, terms=200)) <= 1e-10


def test_erf_symmetry_exact_and_monotone():
    xs = np.linspace(-7, 7, 10_001)
    values = [erf(float(x)) for x in xs]
    assert all(erf(-float(x)) == -v for x, v in zip(xs, values))
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert all(abs(erf(float(x))) < 1 for x in np.linspace(-5, 5, 1001))


def test_erfc_tail_consistency():
    for x in np.linspace(-4, 4, 81):
        assert erf(float(x)) + erfc(float(x)) == pytest.approx(1.0, abs=1e-15)
    for x in (2.5, 5.0, 10.0):
        assert erfc(x) == pytest.approx(float(mpmath.erfc(x)), rel=1e-12)


# --- splitmix64 --------------------------------------------------------------


def test_splitmix_reference_vector():
    rng = RngState(1234567)
    assert [rng.next_u64() for _ in range(5)] == [
        6457827717110365317,
        3203168211198807973,
        9817491932198370423,
        4593380528125082431,
        16408922859458223821,
    ]
    assert RngState(0).next_u64() == 0xE220A8397B1DCDAF


def test_same_seed_same_stream():
    a, b = RngState(42), RngState(42)
    assert [next_uniform(a) for _ in range(1000)] == [next_uniform(b) for _ in range(1000)]


def test_uniform_range_and_mean():
    rng = RngState(2024)
    n = 1_000_000
    total = 0.0
    for _ in range(n):
        u = rng.next_uniform()
        assert 0.0 < u < 1.0
        total += u
    # 3 sigma band, sigma_mean = 1/sqrt(12 n)
    assert abs(total / n - 0.5) <= 0.001


def test_zero_output_is_clamped():
    class Zero(RngState):
        def next_u64(self):
            return 0

    assert Zero().next_uniform() == 2.0**-53


def test_bracket_validation():
    with pytest.raises(ValueError):
        Bracket(1, 0)
    with pytest.raises(ValueError):
        Bracket(0, math.inf)
    assert 0.5 in Bracket(0, 1)
