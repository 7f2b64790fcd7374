"""Cylinder partitions and the level-k distortion statistic.

Cylinders and the samples inside them are produced backwards: a point of
the cylinder with itinerary ``a_1 ... a_k`` is ``f_{a_1}^{-1} o ... o
f_{a_k}^{-1}(u)`` for ``u`` in ``[0, 1]``. Inverse branches contract, so this
is stable where forward orbits are not, and every intermediate point of the
orbit comes for free.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .branches import Interval
from .exceptions import BudgetExceededError

BUDGET = 2**20
DEFAULT_SAMPLES = 32
TAU_GROWTH = 0.05
_CHUNK_POINTS = 2**21


def _check_budget(n, k, prefix, budget):
    count = n ** (k - len(prefix))
    if count > budget:
        raise BudgetExceededError(f"{n}^{k - len(prefix)} cylinders exceed budget {budget}")
    return count


def _pullback_chunks(m, k, u, prefix=()):
    """Yield ``(start, points, log_derivs)`` blocks in lexicographic itinerary order.

    ``points[c, s]`` is the sample ``s`` of cylinder ``start + c``;
    ``log_derivs[c, s]`` is ``log (f^k)'`` there.
    """
    n = m.degree
    prefix = tuple(prefix)
    if len(prefix) > k or any(not 1 <= a <= n for a in prefix):
        raise ValueError("invalid itinerary prefix")
    free = k - len(prefix)
    # outer free letters are split off so each block stays small
    outer = 0
    while outer < free and (n ** (free - outer)) * u.size > _CHUNK_POINTS:
        outer += 1
    inner = free - outer

    y = u[None, :]
    acc = np.zeros_like(y)
    for _ in range(inner):
        ys, accs = [], []
        for b in m.branches:
            x, d = b._inv_with_deriv(y)
            ys.append(x)
            accs.append(acc + np.log(d))
        y = np.concatenate(ys, axis=0)
        acc = np.concatenate(accs, axis=0)

    block = y.shape[0]
    for j, word in enumerate(itertools.product(range(n), repeat=outer)):
        yy, aa = y, acc
        for a in reversed(_letters(prefix, word)):
            x, d = m.branches[a]._inv_with_deriv(yy)
            yy, aa = x, aa + np.log(d)
        yield j * block, yy, aa


def _letters(prefix, word):
    # 0-based letters applied after the inner block: prefix first, then outer word
    return tuple(a - 1 for a in prefix) + tuple(word)


def _itinerary(index, k, n, prefix):
    free = k - len(prefix)
    digits = []
    for _ in range(free):
        index, r = divmod(index, n)
        digits.append(r + 1)
    return tuple(prefix) + tuple(reversed(digits))


@dataclass(frozen=True, eq=False)
class CylinderSet:
    """Level-``k`` injectivity domains of ``f^k`` in spatial order."""

    level: int
    bounds: np.ndarray
    itineraries: Tuple[Tuple[int, ...], ...]

    @property
    def cylinders(self):
        return [(Interval(lo, hi), w) for (lo, hi), w in zip(self.bounds, self.itineraries)]

    def __len__(self):
        return len(self.itineraries)

    def __iter__(self):
        return iter(self.cylinders)


def cylinders(m, k, budget=BUDGET, prefix=()):
    """Enumerate the level-``k`` cylinders (optionally those starting with ``prefix``)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    _check_budget(m.degree, k, prefix, budget)
    bounds = []
    for _, y, _ in _pullback_chunks(m, k, np.array([0.0, 1.0]), prefix):
        bounds.append(y)
    bounds = np.concatenate(bounds, axis=0)
    words = tuple(_itinerary(i, k, m.degree, prefix) for i in range(bounds.shape[0]))
    return CylinderSet(k, bounds, words)


def birkhoff_log_deriv(m, x, k):
    """``sum_{i<k} log f'(f^i(x))`` along the forward orbit of ``x``."""
    total = 0.0
    y = np.asarray(float(x))
    for _ in range(k):
        total += math.log(float(m.deriv(y)))
        y = np.asarray(m(y))
    return total


def _level(m, k, samples, prefix, budget):
    if samples < 2:
        raise ValueError("samples must be at least 2")
    _check_budget(m.degree, k, prefix, budget)
    u = np.linspace(0.0, 1.0, samples)
    best, best_idx = -1.0, 0
    for start, _, acc in _pullback_chunks(m, k, u, prefix):
        osc = acc.max(axis=1) - acc.min(axis=1)
        j = int(np.argmax(osc))
        if osc[j] > best:
            best, best_idx = float(osc[j]), start + j
    return best, _itinerary(best_idx, k, m.degree, prefix)


def distortion_level(m, k, samples=DEFAULT_SAMPLES, prefix=(), budget=BUDGET):
    """Sampled ``d_k``: the largest oscillation of ``log (f^k)'`` over a cylinder.

    ``samples`` points per cylinder are taken uniformly in the image
    coordinate ``u = f^k(x)``, endpoints included. The result is a lower
    bound for the true supremum and never decreases under nested refinement.
    """
    return _level(m, k, samples, tuple(prefix), budget)[0]


@dataclass(frozen=True)
class DistortionReport:
    """Per-level distortion values with a heuristic growth label.

    ``classification`` is "growing" or "bounded-so-far" and describes finite
    data only; it is not a proof of either property.
    """

    d: Tuple[float, ...]
    samples_per_cylinder: int
    argmax_cylinder: Tuple[Tuple[int, ...], ...]
    classification: str
    predicted_lower_bounds: Optional[Tuple[float, ...]] = None
    pair_bounds: Optional[Tuple[float, ...]] = None

    @property
    def k_max(self):
        return len(self.d)


def classify_growth(d, tau_growth=TAU_GROWTH):
    """Label a distortion sequence "growing" or "bounded-so-far".

    Smooth maps have increments that shrink geometrically; unbounded
    distortion shows increments that decay slowly. The sequence is called
    growing when the rise over the last ``ceil(k/3)`` levels exceeds
    ``tau_growth`` relative to the current value and that rise is not
    explained by geometric decay of the preceding increments.
    """
    d = np.asarray(d, dtype=float)
    k = d.size
    w = math.ceil(k / 3)
    if k < 2 * w + 1 or d[-1] <= 0:
        return "bounded-so-far"
    rise = d[-1] - d[-1 - w]
    prev = d[-1 - w] - d[-1 - 2 * w]
    if rise <= tau_growth * d[-1]:
        return "bounded-so-far"
    # geometric decay would shrink the late rise well below the earlier one
    if prev > 0 and rise < 0.5 * prev:
        return "bounded-so-far"
    return "growing"


def distortion_profile(
    m,
    k_max,
    samples=DEFAULT_SAMPLES,
    tau_growth=TAU_GROWTH,
    prefix=(),
    predicted=None,
    budget=BUDGET,
):
    """Compute ``d_1 .. d_kmax`` and classify their growth.

    ``prefix`` restricts every level to cylinders whose itinerary starts
    with the given word (truncated to the level).
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    _check_budget(m.degree, k_max, tuple(prefix)[:k_max], budget)
    d, arg = [], []
    for k in range(1, k_max + 1):
        val, word = _level(m, k, samples, tuple(prefix)[:k], budget)
        d.append(val)
        arg.append(word)
    return DistortionReport(
        d=tuple(d),
        samples_per_cylinder=samples,
        argmax_cylinder=tuple(arg),
        classification=classify_growth(d, tau_growth),
        predicted_lower_bounds=None if predicted is None else tuple(predicted),
    )
