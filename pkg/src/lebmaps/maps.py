"""Full branch maps of the unit interval and their structural validation."""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .branches import Branch

TAU_BRANCH = 1e-9
SIGMA_MIN = 1.01
CIRCLE_C1_STATES = ("unchecked", "verified", "failed")


@dataclass(frozen=True, eq=False)
class FullBranchMap:
    """Ordered adjacent branches covering ``[0, 1]``.

    ``sigma`` is a certified lower bound for the derivative, filled in by
    :func:`certify`; ``circle_c1`` records whether the derivative matching
    at the partition points (including ``0 ~ 1``) has been checked.
    """

    branches: Tuple[Branch, ...]
    sigma: Optional[float] = None
    circle_c1: str = "unchecked"

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))
        if len(self.branches) < 2:
            raise ValueError("a full branch map needs at least two branches")
        if self.circle_c1 not in CIRCLE_C1_STATES:
            raise ValueError(f"circle_c1 must be one of {CIRCLE_C1_STATES}")
        his = np.array([b.domain.hi for b in self.branches])
        if np.any(np.diff(his) <= 0):
            raise ValueError("branch domains must be ordered left to right")
        object.__setattr__(self, "_his", his)

    @property
    def degree(self):
        return len(self.branches)

    @property
    def partition(self):
        return tuple([self.branches[0].domain.lo] + [b.domain.hi for b in self.branches])

    def locate(self, x):
        """0-based branch index for each point; shared endpoints go left."""
        idx = np.searchsorted(self._his, np.asarray(x, dtype=float), side="left")
        return np.minimum(idx, self.degree - 1)

    def evaluate(self, x):
        """Vectorized ``(f(x), branch_index)`` with 1-based indices."""
        x = np.asarray(x, dtype=float)
        idx = self.locate(x)
        y = np.empty_like(x)
        for i, b in enumerate(self.branches):
            sel = idx == i
            if np.any(sel):
                y[sel] = b(x[sel])
        return y, idx + 1

    def deriv(self, x):
        x = np.asarray(x, dtype=float)
        idx = self.locate(x)
        d = np.empty_like(x)
        for i, b in enumerate(self.branches):
            sel = idx == i
            if np.any(sel):
                d[sel] = b.deriv(x[sel])
        return d

    def __call__(self, x):
        y, _ = self.evaluate(x)
        return y if y.ndim else float(y)


def map_eval(m, x):
    """Return ``(f(x), branch_index)`` for a scalar ``x`` in ``[0, 1]``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    y, idx = m.evaluate(np.asarray(float(x)))
    return float(y), int(idx)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    tiling_defect: float
    min_derivative: float
    max_endpoint_defect: float
    max_log_derivative_jump: float
    failures: Tuple[str, ...] = ()

    def to_dict(self):
        return {
            "passed": self.passed,
            "tiling_defect": self.tiling_defect,
            "min_derivative": self.min_derivative,
            "max_endpoint_defect": self.max_endpoint_defect,
            "max_log_derivative_jump": self.max_log_derivative_jump,
            "failures": list(self.failures),
        }


def validate_full_branch_map(
    m, grid_size=1000, sigma_min=SIGMA_MIN, tau_branch=TAU_BRANCH, continuity_slack=0.1
):
    """Check tiling, onto-ness, expansion and derivative continuity on a grid.

    Continuity is judged on ``log f'`` so steep branches are not penalized:
    adjacent grid samples must differ by at most ``continuity_slack``.
    Failures are collected in the report, never raised.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    part = m.partition
    tiling = max(abs(part[0] - 0.0), abs(part[-1] - 1.0))
    for left, right in zip(m.branches, m.branches[1:]):
        tiling = max(tiling, abs(left.domain.hi - right.domain.lo))

    min_d = np.inf
    endpoint = 0.0
    jump = 0.0
    for b in m.branches:
        lo, hi = b.domain.lo, b.domain.hi
        endpoint = max(endpoint, abs(float(b._f(np.array(lo)))), abs(float(b._f(np.array(hi))) - 1.0))
        _, _, d = b.sample(grid_size)
        min_d = min(min_d, float(np.min(d)))
        jump = max(jump, float(np.max(np.abs(np.diff(np.log(d))))))

    failures = []
    if tiling > tau_branch:
        failures.append("tiling defect")
    if endpoint > tau_branch:
        failures.append("endpoint defect")
    if not min_d >= sigma_min or min_d <= 0:
        failures.append("expansion violated")
    if jump > continuity_slack:
        failures.append("derivative discontinuity")
    return ValidationReport(
        passed=not failures,
        tiling_defect=float(tiling),
        min_derivative=float(min_d),
        max_endpoint_defect=float(endpoint),
        max_log_derivative_jump=jump,
        failures=tuple(failures),
    )


def certify(m, **kwargs):
    """Validate ``m`` and return ``(map_with_sigma, report)``.

    The returned map carries the observed minimum derivative as ``sigma``
    when validation passes; otherwise ``m`` is returned unchanged.
    """
    report = validate_full_branch_map(m, **kwargs)
    if report.passed:
        m = replace(m, sigma=report.min_derivative)
    return m, report
