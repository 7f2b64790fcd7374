import math

import numpy as np
import pytest
from scipy import integrate

from lebmaps.branches import AffineBranch, Interval
from lebmaps.datasets import make_doubling_map, make_tripling_map
from lebmaps.distortion import distortion_level
from lebmaps.exceptions import PreconditionError
from lebmaps.modulus import Modulus
from lebmaps.perturbation import (
    LowerBoundParams,
    PerturbationConfig,
    build_perturbed_branch,
    c1_distance,
    perturb_map,
    predicted_lower_bound,
    unbounded_demo,
)
from lebmaps.transfer import invariance_defect, pullback_measure_defect

LOG2 = Modulus.log_reciprocal(2.0)
B1 = AffineBranch.onto(Interval(0.0, 0.5))


def cfg(eps, **kw):
    return PerturbationConfig(eps, LOG2, **kw)


@pytest.fixture(scope="module")
def perturbed():
    return perturb_map(make_doubling_map(), cfg(0.05))


def test_zero_epsilon_is_identity():
    b = build_perturbed_branch(B1, cfg(0.0))
    x = np.linspace(0, 0.5, 1001)
    assert np.max(np.abs(b(x) - B1(x))) <= 1e-10
    assert np.array_equal(b.deriv(x), B1.deriv(x))
    pm = perturb_map(make_doubling_map(), cfg(0.0))
    for a, c in zip(make_doubling_map().branches, pm.branches):
        xs = np.linspace(a.domain.lo, a.domain.hi, 1001)
        assert np.max(np.abs(a(xs) - c(xs))) <= 1e-10


def test_derivative_values():
    b = build_perturbed_branch(B1, cfg(0.05, v0_radius=0.1))
    assert b.deriv(0.0) == 2.0
    assert b.deriv(0.05) == pytest.approx(2 + 0.05 / (2 - math.log(0.05)), abs=1e-14)
    assert b.deriv(0.05) == pytest.approx(2.010007, abs=1e-5)
    lo, hi = b.endpoint_derivs()
    assert (lo, hi) == (2.0, 2.0)


def test_value_is_integral_of_derivative():
    b = build_perturbed_branch(B1, cfg(0.05))
    for x in (0.03, 0.1, 0.17, 0.3, 0.44, 0.5):
        val, _ = integrate.quad(lambda s: float(b.deriv(s)), 0, x, points=[0.1, 0.15, 0.2, 0.45], limit=200)
        assert b(x) == pytest.approx(val, abs=1e-9)
    assert b(0.5) == 1.0
    total, _ = integrate.quad(lambda s: float(b.deriv(s)), 0, 0.5, points=[0.1, 0.15, 0.2, 0.45], limit=200)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_c1_closeness_within_epsilon():
    for eps in (0.05, 0.01):
        b = build_perturbed_branch(B1, cfg(eps))
        x = np.linspace(0, 0.5, 10_000)
        dist = np.max(np.abs(b(x) - B1(x))) + np.max(np.abs(b.deriv(x) - B1.deriv(x)))
        assert dist <= eps


def test_epsilon_too_large_reports_bound():
    with pytest.raises(PreconditionError, match="largest admissible epsilon"):
        build_perturbed_branch(B1, cfg(50.0))


def test_window_validation():
    with pytest.raises(ValueError):
        build_perturbed_branch(B1, cfg(0.05, v0_radius=0.2))
    with pytest.raises(ValueError):
        build_perturbed_branch(B1, cfg(0.05, compensation_window=Interval(0.1, 0.3)))


def test_perturb_map_preserves_lebesgue(perturbed):
    assert perturbed.degree == 2
    assert invariance_defect(perturbed, 1000) <= 1e-8
    edges = np.linspace(0, 1, 65)
    assert pullback_measure_defect(perturbed, [Interval(a, b) for a, b in zip(edges, edges[1:])]) <= 1e-10
    assert perturbed.circle_c1 == "verified"


def test_c1_distance_scales_with_epsilon():
    m = make_doubling_map()
    ratios = [c1_distance(m, perturb_map(m, cfg(e))) / e for e in (0.05, 0.01, 0.002)]
    assert max(ratios) <= 1.0
    assert max(ratios) - min(ratios) < 0.05


def test_degree_three_middle_branch_untouched():
    m = make_tripling_map()
    pm = perturb_map(m, cfg(0.05))
    assert pm.degree == 3
    assert pm.branches[1] is m.branches[1]
    assert invariance_defect(pm, 1000) <= 1e-8


def test_requires_fixed_point_and_invariance(nonpreserving):
    with pytest.raises(PreconditionError):
        perturb_map(nonpreserving, cfg(0.05))


def test_predicted_bound_holder_geometric():
    p = LowerBoundParams(2.0, 1.0)
    w = Modulus.holder(1.0)
    for k in (1, 5, 20):
        assert predicted_lower_bound(p, w, k) == pytest.approx(0.5 * (1 - 2.0**-k), rel=1e-14)


def test_predicted_bound_log_oracle():
    p = LowerBoundParams(2.0, 1.0)
    oracle = 0.5 * sum(1 / (2 + j * math.log(2)) for j in range(1, 9))
    assert predicted_lower_bound(p, LOG2, 8) == pytest.approx(oracle, rel=1e-14)
    assert oracle == pytest.approx(0.8725422735525721, rel=1e-14)


def test_predicted_bound_diverges_like_loglog():
    p = LowerBoundParams(2.0, 1.0)
    ln2 = math.log(2)
    vals = [predicted_lower_bound(p, LOG2, k) for k in range(1, 200)]
    assert np.all(np.diff(vals) > 0)
    for k in (64, 1024):
        # integral comparison for the decreasing summand 1/(2 + j ln 2)
        lower = (math.log(2 + (k + 1) * ln2) - math.log(2 + ln2)) / (2 * ln2)
        assert predicted_lower_bound(p, LOG2, k) >= lower
    assert predicted_lower_bound(p, LOG2, 1024) > 1.5 * predicted_lower_bound(p, LOG2, 64)


def test_lower_bound_params_validation():
    with pytest.raises(ValueError):
        LowerBoundParams(1.0, 0.5)
    with pytest.raises(ValueError):
        LowerBoundParams(2.0, 1.5)


@pytest.mark.parametrize("k", [2, 4])
def test_distortion_continuous_in_epsilon(k):
    m = make_doubling_map()
    vals = [distortion_level(perturb_map(m, cfg(e)), k) for e in (0.01, 0.005, 0.0025)]
    assert distortion_level(m, k) == 0.0
    assert vals[0] > vals[1] > vals[2] > 0
    assert vals[2] < 0.3 * vals[0]


def test_demo_zero_epsilon_is_flat():
    res = unbounded_demo(make_doubling_map(), cfg(0.0), 10)
    assert all(v == 0.0 for v in res.report.pair_bounds)


def test_demo_rejects_bad_x0():
    with pytest.raises(ValueError):
        unbounded_demo(make_doubling_map(), cfg(0.05), 3, x0=0.5)
