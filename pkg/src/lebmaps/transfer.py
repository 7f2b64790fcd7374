"""Transfer operator on grid densities and Lebesgue-invariance defects."""

import csv
from dataclasses import dataclass

import numpy as np

DEFAULT_NODES = 4096


@dataclass(frozen=True, eq=False)
class DensityGrid:
    """Nonnegative density sampled at ``N`` uniform nodes of ``[0, 1]``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("a density grid needs at least two nodes")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("density values must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, func, n_nodes=DEFAULT_NODES):
        return cls(func(np.linspace(0.0, 1.0, n_nodes)))

    @property
    def N(self):
        return self.values.size

    @property
    def nodes(self):
        return np.linspace(0.0, 1.0, self.N)

    def __call__(self, x):
        return np.interp(x, self.nodes, self.values)

    def integral(self):
        return float(np.trapezoid(self.values, self.nodes))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["x", "value"])
            for x, v in zip(self.nodes, self.values):
                w.writerow([f"{x:.15g}", f"{v:.15g}"])


def _apply(m, values, nodes):
    out = np.zeros((values.shape[0], nodes.size))
    for b in m.branches:
        y, d = b._inv_with_deriv(nodes)
        for row, v in zip(out, values):
            row += np.interp(y, nodes, v) / d
    return out


def transfer_apply(m, h):
    """``Ph(x) = sum_i h(f_i^{-1}(x)) / f_i'(f_i^{-1}(x))`` at the grid nodes.

    ``h`` is interpolated linearly between nodes.
    """
    if not isinstance(h, DensityGrid):
        h = DensityGrid(h)
    return DensityGrid(_apply(m, h.values[None, :], h.nodes)[0])


def invariance_defect(m, N=1000):
    """``max_j |P1(x_j) - 1|`` on ``N`` uniform nodes."""
    if N < 100:
        raise ValueError("N must be at least 100")
    nodes = np.linspace(0.0, 1.0, N)
    total = np.zeros(N)
    for b in m.branches:
        _, d = b._inv_with_deriv(nodes)
        total += 1.0 / d
    return float(np.max(np.abs(total - 1.0)))


def pullback_measure_defect(m, intervals):
    """Largest ``|lambda(f^{-1}(I)) - lambda(I)|`` over the given intervals."""
    lo = np.array([iv.lo for iv in intervals], dtype=float)
    hi = np.array([iv.hi for iv in intervals], dtype=float)
    total = np.zeros_like(lo)
    for b in m.branches:
        total += b._inv(hi) - b._inv(lo)
    return float(np.max(np.abs(total - (hi - lo))))
