"""Ready-made maps and partial specifications used in docs, tests and the CLI."""

import numpy as np

from .branches import AffineBranch, Interval, SinePerturbedBranch
from .extension import PartialMapSpec
from .maps import FullBranchMap


def make_doubling_map():
    """``x -> 2x mod 1`` as a two-branch map."""
    return FullBranchMap(
        (
            AffineBranch(Interval(0.0, 0.5), 2.0, 0.0),
            AffineBranch(Interval(0.5, 1.0), 2.0, -1.0),
        )
    )


def make_tripling_map():
    """``x -> 3x mod 1`` as a three-branch map."""
    return FullBranchMap(
        (
            AffineBranch(Interval(0.0, 1 / 3), 3.0, 0.0),
            AffineBranch(Interval(1 / 3, 2 / 3), 3.0, -1.0),
            AffineBranch(Interval(2 / 3, 1.0), 3.0, -2.0),
        )
    )


def make_doubling_spec():
    """First branch of the doubling map, second one missing."""
    return PartialMapSpec((0.0, 0.5, 1.0), (AffineBranch(Interval(0.0, 0.5), 2.0, 0.0),), 2)


def make_tripling_spec():
    """Outer branches of the tripling map, middle one missing."""
    return PartialMapSpec(
        (0.0, 1 / 3, 2 / 3, 1.0),
        (
            AffineBranch(Interval(0.0, 1 / 3), 3.0, 0.0),
            AffineBranch(Interval(2 / 3, 1.0), 3.0, -2.0),
        ),
        2,
    )


def make_sine_spec(amplitude=0.1):
    """``f_1(x) = 2x + a sin(2 pi x)`` on ``[0, 1/2]``, second branch missing."""
    b1 = SinePerturbedBranch(Interval(0.0, 0.5), 2.0, amplitude, 1.0)
    return PartialMapSpec((0.0, 0.5, 1.0), (b1,), 2)


def make_sine_pair_map(amplitude=0.1):
    """Two translated copies of ``2x + a sin(2 pi x)``; smooth but not Lebesgue-preserving."""
    return FullBranchMap(
        (
            SinePerturbedBranch(Interval(0.0, 0.5), 2.0, amplitude, 1.0),
            SinePerturbedBranch(Interval(0.5, 1.0), 2.0, amplitude, 1.0),
        )
    )


def make_nonpreserving_map():
    """Affine slopes 2 and 2.5; the second branch overshoots to 1.25.

    Every point has one preimage per branch, with inverse derivatives summing
    to 0.9, so the Lebesgue invariance defect is exactly 0.1.
    """
    return FullBranchMap(
        (
            AffineBranch(Interval(0.0, 0.5), 2.0, 0.0),
            AffineBranch(Interval(0.5, 1.0), 2.5, -1.25),
        )
    )


def make_random_sine_spec(rng, min_margin=1e-2, max_degree=4):
    """Draw a sine-perturbed partial spec whose extension margin is at least ``min_margin``.

    Degree, partition, missing index, amplitudes and frequencies are all
    random; draws are repeated until the margin requirement holds.
    """
    from .extension import condition_one_margin

    while True:
        n = int(rng.integers(2, max_degree + 1))
        lengths = rng.uniform(0.6, 1.4, size=n)
        lengths /= lengths.sum()
        part = np.concatenate([[0.0], np.cumsum(lengths)])
        part[-1] = 1.0
        i0 = int(rng.integers(1, n + 1))
        branches = []
        for i in range(1, n + 1):
            if i == i0:
                continue
            dom = Interval(part[i - 1], part[i])
            slope = 1.0 / dom.length
            freq = int(rng.integers(1, 4)) / (2.0 * dom.length)
            room = (slope - 1.05) / (2.0 * np.pi * freq)
            amp = float(rng.uniform(-0.8, 0.8)) * max(room, 0.0)
            branches.append(SinePerturbedBranch(dom, slope, amp, freq))
        spec = PartialMapSpec(tuple(part), tuple(branches), i0)
        if condition_one_margin(spec) >= min_margin:
            return spec
