import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from lebmaps.branches import (
    AffineBranch,
    Interval,
    SinePerturbedBranch,
    TabulatedBranch,
    branch_deriv,
    branch_eval,
    branch_inverse,
)
from lebmaps.exceptions import DomainError

SINE = SinePerturbedBranch(Interval(0.0, 0.5), 2.0, 0.1, 1.0)


def test_interval_rejects_degenerate():
    with pytest.raises(ValueError):
        Interval(0.5, 0.5)
    with pytest.raises(ValueError):
        Interval(-0.1, 0.5)


@pytest.mark.parametrize(
    "branch, x, expected",
    [
        (AffineBranch(Interval(0.0, 0.5), 2.0, 0.0), 0.25, 0.5),
        (SINE, 0.5, 1.0),
        (SINE, 0.25, 0.6),
    ],
)
def test_branch_eval_examples(branch, x, expected):
    assert branch_eval(branch, x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "x, expected",
    [(0.0, 2 + 0.2 * math.pi), (0.5, 2 - 0.2 * math.pi)],
)
def test_sine_derivative_examples(x, expected):
    assert branch_deriv(SINE, x) == pytest.approx(expected, rel=1e-15)


def test_affine_derivative_is_slope():
    b = AffineBranch(Interval(0.0, 0.5), 2.0, 0.0)
    assert np.all(branch_deriv(b, np.linspace(0, 0.5, 7)) == 2.0)


def test_inverse_examples():
    assert branch_inverse(AffineBranch(Interval(0.0, 0.5), 2.0, 0.0), 0.5) == 0.25
    assert branch_inverse(AffineBranch(Interval(1 / 3, 2 / 3), 3.0, -1.0), 0.0) == 1 / 3
    oracle = optimize.bisect(lambda x: 2 * x + 0.1 * math.sin(2 * math.pi * x) - 0.6, 0.0, 0.5, xtol=1e-15)
    assert branch_inverse(SINE, 0.6) == pytest.approx(oracle, abs=1e-12)
    assert branch_inverse(SINE, 0.6) == pytest.approx(0.25, abs=1e-12)


def test_domain_errors():
    with pytest.raises(DomainError):
        branch_eval(SINE, 0.6)
    with pytest.raises(DomainError):
        branch_deriv(SINE, -0.01)
    with pytest.raises(DomainError):
        branch_inverse(SINE, 1.5)


def test_vectorized_shapes():
    u = np.linspace(0, 1, 12).reshape(3, 4)
    x = SINE.inverse(u)
    assert x.shape == (3, 4)
    assert isinstance(SINE.inverse(0.3), float)


amplitudes = st.floats(min_value=-0.12, max_value=0.12)
unit = st.floats(min_value=0.0, max_value=1.0)


@settings(max_examples=60, deadline=None)
@given(amplitudes, unit)
def test_inverse_round_trip(a, u):
    b = SinePerturbedBranch(Interval(0.0, 0.5), 2.0, a, 1.0)
    assert abs(b(b.inverse(u)) - u) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(amplitudes)
def test_inverse_monotone(a):
    b = SinePerturbedBranch(Interval(0.5, 1.0), 2.0, a, 2.0)
    x = b.inverse(np.linspace(0.0, 1.0, 501))
    assert np.all(np.diff(x) > 0)


@pytest.mark.parametrize(
    "branch",
    [SINE, SinePerturbedBranch(Interval(0.25, 1.0), 4 / 3, 0.03, 2 / 1.5), AffineBranch.onto(Interval(0.2, 0.7))],
)
def test_derivative_matches_centered_difference(branch):
    h = 1e-6
    lo, hi = branch.domain.lo, branch.domain.hi
    x = np.linspace(lo + 10 * h, hi - 10 * h, 50)
    fd = (branch(x + h) - branch(x - h)) / (2 * h)
    assert np.max(np.abs(fd / branch.deriv(x) - 1)) <= 1e-5


def _tab():
    dom = Interval(0.0, 0.5)
    return TabulatedBranch.from_function(dom, SINE, SINE.deriv, n=257)


def test_tabulated_branch_tracks_source():
    tab = _tab()
    x = np.linspace(0, 0.5, 1001)
    assert np.max(np.abs(tab(x) - SINE(x))) < 1e-7
    assert np.max(np.abs(tab.deriv(x) - SINE.deriv(x))) < 1e-4
    assert tab(0.0) == 0.0 and tab(0.5) == pytest.approx(1.0, abs=1e-15)


def test_tabulated_branch_is_monotone_and_invertible():
    tab = _tab()
    x = np.linspace(0, 0.5, 20001)
    assert np.all(np.diff(tab(x)) > 0)
    u = np.linspace(0, 1, 101)
    assert np.max(np.abs(tab(tab.inverse(u)) - u)) <= 1e-12


def test_tabulated_needs_enough_samples():
    x = np.linspace(0, 0.5, 50)
    with pytest.raises(ValueError):
        TabulatedBranch(Interval(0.0, 0.5), x, 2 * x, np.full(50, 2.0))


def test_tabulated_limiter_keeps_monotone_with_wild_derivatives():
    x = np.linspace(0, 0.5, 129)
    f = 2 * x
    df = np.where(np.arange(129) % 2 == 0, 40.0, 1.5)
    tab = TabulatedBranch(Interval(0.0, 0.5), x, f, df)
    xs = np.linspace(0, 0.5, 50001)
    assert np.all(np.diff(tab(xs)) >= 0)


def test_branches_are_immutable():
    with pytest.raises(Exception):
        SINE.amplitude = 0.2
