"""Construct the unique missing branch of a Lebesgue-preserving full branch map."""

from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .branches import ExtendedBranch, Interval
from .exceptions import PreconditionError
from .maps import FullBranchMap, certify

DELTA_UNIFORM = 1e-3
TAU_MATCH = 1e-9
MARGIN_GRID = 10_000


@dataclass(frozen=True, eq=False)
class PartialMapSpec:
    """``n - 1`` known branches plus the index (1-based) of the missing one."""

    partition: Tuple[float, ...]
    branches: Tuple
    missing_index: int

    def __post_init__(self):
        part = tuple(float(p) for p in self.partition)
        object.__setattr__(self, "partition", part)
        object.__setattr__(self, "branches", tuple(self.branches))
        n = len(part) - 1
        if n < 2:
            raise ValueError("partition must have at least three points")
        if part[0] != 0.0 or part[-1] != 1.0 or any(b <= a for a, b in zip(part, part[1:])):
            raise ValueError("partition must increase strictly from 0 to 1")
        if not 1 <= self.missing_index <= n:
            raise ValueError(f"missing_index must lie in [1, {n}]")
        if len(self.branches) != n - 1:
            raise ValueError(f"expected {n - 1} given branches, got {len(self.branches)}")
        for i, b in zip(self.given_indices, self.branches):
            lo, hi = part[i - 1], part[i]
            if abs(b.domain.lo - lo) > 1e-12 or abs(b.domain.hi - hi) > 1e-12:
                raise ValueError(f"branch {i} domain does not match the partition")

    @property
    def degree(self):
        return len(self.partition) - 1

    @property
    def given_indices(self):
        return [i for i in range(1, self.degree + 1) if i != self.missing_index]

    @property
    def missing_domain(self):
        i = self.missing_index
        return Interval(self.partition[i - 1], self.partition[i])

    @classmethod
    def from_map(cls, m, missing_index):
        others = [b for i, b in enumerate(m.branches, 1) if i != missing_index]
        return cls(m.partition, others, missing_index)


def _inverse_sum(branches, u):
    s = np.zeros_like(u)
    for b in branches:
        _, d = b._inv_with_deriv(u)
        s = s + 1.0 / d
    return s


def condition_one_margin(spec, grid_size=MARGIN_GRID):
    """``1 - max_u sum_{i != i0} 1 / f_i'(f_i^{-1}(u))`` over a uniform grid.

    The grid includes both image endpoints. A positive value means the
    extension exists, with that much room to spare on the grid.
    """
    if grid_size < 100:
        raise ValueError("grid_size must be at least 100")
    u = np.linspace(0.0, 1.0, grid_size)
    return float(1.0 - np.max(_inverse_sum(spec.branches, u)))


def extend_missing_branch(spec, delta_uniform=DELTA_UNIFORM, grid_size=MARGIN_GRID):
    """Return the unique branch on the missing interval that makes the full
    map preserve Lebesgue measure.

    Raises
    ------
    PreconditionError
        If the inverse-derivative sum comes closer to 1 than ``delta_uniform``
        somewhere on the grid.
    """
    if not delta_uniform > 0:
        raise ValueError("delta_uniform must be positive")
    margin = condition_one_margin(spec, grid_size)
    if margin < delta_uniform:
        raise PreconditionError(
            f"extension condition fails: margin {margin:.6g} < delta_uniform {delta_uniform:.3g}"
        )
    return ExtendedBranch(spec.missing_domain, spec.branches, spec.missing_index)


def assemble(spec, branch):
    """Insert ``branch`` at the missing slot and return the full branch map."""
    branches = list(spec.branches)
    branches.insert(spec.missing_index - 1, branch)
    return FullBranchMap(tuple(branches))


@dataclass(frozen=True)
class BoundaryMatch:
    point: float
    left_derivative: float
    right_derivative: float
    gap: float


@dataclass(frozen=True)
class MatchingReport:
    """Derivative limits on both sides of every partition point.

    ``boundaries`` lists all interior points followed by the wrap-around
    point (reported at 0). ``mismatches`` keeps those whose gap exceeds the
    tolerance, and ``worst_gap`` is the largest listed mismatch (0 if none).
    ``printed_form`` holds the endpoint values ``1 / (1 - sum f_i'(x_i^-))``
    and ``1 / (1 - sum f_i'(x_i^+))`` built from derivative values rather
    than their reciprocals, kept for comparison only.
    """

    boundaries: Tuple[BoundaryMatch, ...]
    mismatches: Tuple[BoundaryMatch, ...]
    worst_gap: float
    max_raw_gap: float
    tolerance: float
    printed_form: Optional[Tuple[float, float]] = None

    @property
    def verified(self):
        return not self.mismatches

    def gap_at(self, point):
        for b in self.boundaries:
            if abs(b.point - point) <= 1e-12:
                return b
        raise KeyError(point)

    def to_dict(self):
        def row(b):
            return {
                "point": b.point,
                "left_derivative": b.left_derivative,
                "right_derivative": b.right_derivative,
                "gap": b.gap,
            }

        return {
            "verified": self.verified,
            "worst_gap": self.worst_gap,
            "max_raw_gap": self.max_raw_gap,
            "tolerance": self.tolerance,
            "boundaries": [row(b) for b in self.boundaries],
            "mismatches": [row(b) for b in self.mismatches],
            "printed_form": list(self.printed_form) if self.printed_form else None,
        }


def c1_matching_report(m, i0=None, tau_match=TAU_MATCH):
    """Compare one-sided derivatives at each partition point and at ``0 ~ 1``."""
    ends = [b.endpoint_derivs() for b in m.branches]
    rows = []
    for i in range(m.degree - 1):
        left, right = ends[i][1], ends[i + 1][0]
        rows.append(BoundaryMatch(m.branches[i].domain.hi, left, right, abs(left - right)))
    left, right = ends[-1][1], ends[0][0]
    rows.append(BoundaryMatch(0.0, left, right, abs(left - right)))

    if i0 is None:
        found = [i for i, b in enumerate(m.branches, 1) if isinstance(b, ExtendedBranch)]
        i0 = found[0] if found else None
    printed = None
    if i0 is not None:
        given = [b for i, b in enumerate(m.branches, 1) if i != i0]
        with np.errstate(divide="ignore"):
            sum_lo = sum(b.endpoint_derivs()[0] for b in given)
            sum_hi = sum(b.endpoint_derivs()[1] for b in given)
            printed = (float(np.divide(1.0, 1.0 - sum_lo)), float(np.divide(1.0, 1.0 - sum_hi)))

    mismatches = tuple(r for r in rows if r.gap > tau_match)
    return MatchingReport(
        boundaries=tuple(rows),
        mismatches=mismatches,
        worst_gap=max((r.gap for r in mismatches), default=0.0),
        max_raw_gap=max(r.gap for r in rows),
        tolerance=tau_match,
        printed_form=printed,
    )


def assemble_circle_map(spec, delta_uniform=DELTA_UNIFORM, grid_size=MARGIN_GRID, tau_match=TAU_MATCH):
    """Extend, validate, certify sigma, and set the circle-C1 flag."""
    branch = extend_missing_branch(spec, delta_uniform, grid_size)
    m, report = certify(assemble(spec, branch))
    if not report.passed:
        raise PreconditionError(f"assembled map failed validation: {', '.join(report.failures)}")
    matching = c1_matching_report(m, spec.missing_index, tau_match)
    return replace(m, circle_c1="verified" if matching.verified else "failed")
