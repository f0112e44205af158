import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from implicitlaw.distributions import Normal, Uniform
from implicitlaw.errors import EmptyInput
from implicitlaw.numerics import RngState
from implicitlaw.transform import ImplicitDensity
from implicitlaw.verify import (
    cdf_pdf_consistency,
    check_normalization,
    ks_critical,
    ks_distance,
    run_full_verification,
)


def uniform_cdf(x):
    return min(1.0, max(0.0, x))


def test_normalization_examples(ex1, ex3):
    for d in (ex1, ex3):
        integral, ok = check_normalization(d)
        assert ok and integral == pytest.approx(1.0, abs=1e-6)


def test_normalization_partial_mass():
    d = ImplicitDensity.build("t", (0, 0.5), Uniform(0, 1), full_mass=False)
    integral, ok = check_normalization(d)
    assert ok
    assert integral == pytest.approx(0.5, abs=1e-12)
    assert d.transported_mass == 0.5


def test_normalization_rejects_bad_tol(ex1):
    with pytest.raises(ValueError):
        check_normalization(ex1, 0.0)


def test_ks_single_point():
    assert ks_distance([0.5], uniform_cdf) == 0.5


def test_ks_midpoint_quantiles():
    n = 100
    xs = [(i - 0.5) / n for i in range(1, n + 1)]
    # every gap is exactly half a step
    assert ks_distance(xs, uniform_cdf) == pytest.approx(0.005, abs=1e-15)


def test_ks_empty_and_unsorted():
    with pytest.raises(EmptyInput):
        ks_distance([], uniform_cdf)
    with pytest.raises(ValueError):
        ks_distance([0.3, 0.1], uniform_cdf)


@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=50))
def test_ks_in_unit_interval(xs):
    d = ks_distance(sorted(xs), uniform_cdf)
    assert 0.0 <= d <= 1.0


def test_ks_exponential_example(ex2):
    n = 100_000
    xs = sorted(ex2.samples(n, RngState(42)))
    assert ks_distance(xs, ex2.cdf) <= ks_critical(n)
    assert ks_critical(n) <= 0.00516


def test_consistency_examples(ex1, identity, ex4):
    assert cdf_pdf_consistency(ex1, 101) <= 1e-4
    assert cdf_pdf_consistency(identity, 101) <= 1e-10
    assert cdf_pdf_consistency(ex4, 101, -1.5, 1.5) <= 1e-4


def test_consistency_detects_a_wrong_density(ex1):
    class Doubled(ImplicitDensity):
        def pdf(self, t):
            return 2.0 * super().pdf(t)

    bad = Doubled(ex1.map, ex1.source)
    assert cdf_pdf_consistency(bad, 101) > 0.5


def test_consistency_grid_minimum(ex1):
    with pytest.raises(ValueError):
        cdf_pdf_consistency(ex1, 8)


@pytest.mark.parametrize("name", ["ex1", "ex4"])
def test_full_verification_passes(name, request):
    d = request.getfixturevalue(name)
    report = run_full_verification(d, 100_000, 42)
    assert report.normalization_pass and report.ks_pass and report.consistency_pass
    assert report.all_pass
    assert report.ks_critical == pytest.approx(1.63 / math.sqrt(100_000))
    assert report.n_samples == 100_000 and report.seed == 42
    assert report.normalization_integral <= 1 + 1e-6


def test_report_is_reproducible(ex3):
    assert run_full_verification(ex3, 2000, 7) == run_full_verification(ex3, 2000, 7)


def test_mismatched_sampler_fails_ks(ex4):
    class WrongSource(ImplicitDensity):
        # draws use a shifted source while cdf and pdf keep the original law
        def sample(self, rng):
            return self.map.invert(Normal(0.5, 1.0).sample(rng))

    double = WrongSource(ex4.map, ex4.source)
    report = run_full_verification(double, 10_000, 42)
    assert not report.ks_pass
    assert report.normalization_pass and report.consistency_pass
    assert not report.all_pass


def test_pass_flags_match_thresholds(ex1):
    r = run_full_verification(ex1, 5000, 3)
    assert r.ks_pass == (r.ks_statistic <= r.ks_critical)
    assert r.consistency_pass == (r.max_cdf_pdf_deviation <= 1e-4)
    assert r.normalization_pass == (abs(r.normalization_integral - 1.0) <= 1e-6)


def test_minimum_sample_count(ex1):
    with pytest.raises(ValueError):
        run_full_verification(ex1, 10, 1)
