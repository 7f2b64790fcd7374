"""Non-Dini perturbations near the fixed point and the resulting distortion growth."""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .branches import Interval, PerturbedBranch
from .distortion import DistortionReport, birkhoff_log_deriv, classify_growth, distortion_level
from .exceptions import PreconditionError
from .extension import DELTA_UNIFORM, PartialMapSpec, assemble_circle_map
from .maps import SIGMA_MIN
from .modulus import Modulus
from .transfer import invariance_defect

TAU_PRESERVING = 1e-8
CHECK_GRID = 10_000


@dataclass(frozen=True)
class PerturbationConfig:
    """Where and how strongly to perturb the first branch.

    Unset geometry defaults scale with the first branch domain ``I_1``:
    ``v0_radius = |I_1|/5``, ``blend_width = |I_1|/10`` and the compensation
    window ``[lo + 0.4|I_1|, lo + 0.9|I_1|]``.
    """

    epsilon: float
    modulus: Modulus
    v0_radius: Optional[float] = None
    blend_width: Optional[float] = None
    compensation_window: Optional[Interval] = None

    def resolve(self, domain):
        L = domain.length
        return replace(
            self,
            v0_radius=L / 5.0 if self.v0_radius is None else self.v0_radius,
            blend_width=L / 10.0 if self.blend_width is None else self.blend_width,
            compensation_window=(
                Interval(domain.lo + 0.4 * L, domain.lo + 0.9 * L)
                if self.compensation_window is None
                else self.compensation_window
            ),
        )


@dataclass(frozen=True)
class LowerBoundParams:
    sigma_hat: float
    C: float

    def __post_init__(self):
        if not self.sigma_hat > 1.0:
            raise ValueError("sigma_hat must exceed 1")
        if not 0.0 < self.C <= 1.0:
            raise ValueError("C must lie in (0, 1]")


def _make_branch(b1, cfg, epsilon):
    return PerturbedBranch(
        b1, cfg.modulus, epsilon, cfg.v0_radius, cfg.blend_width, cfg.compensation_window
    )


def build_perturbed_branch(b1, cfg, sigma_min=SIGMA_MIN, grid_size=CHECK_GRID):
    """Replace the derivative of ``b1`` by ``b1' + eps * w`` near its left end.

    The added mass is removed again on the compensation window, so the
    result still maps onto ``[0, 1]`` with unchanged endpoint derivatives.

    Raises
    ------
    PreconditionError
        If the compensated derivative would drop below ``sigma_min``; the
        message reports the largest admissible epsilon on the check grid.
    """
    cfg = cfg.resolve(b1.domain)
    out = _make_branch(b1, cfg, cfg.epsilon)
    x = np.linspace(b1.domain.lo, b1.domain.hi, grid_size)
    g = out._df(x)
    if np.min(g) < sigma_min:
        base = b1._df(x)
        per_eps = (_make_branch(b1, cfg, 1.0)._df(x) - base)
        neg = per_eps < 0
        eps_max = float(np.min((base[neg] - sigma_min) / -per_eps[neg])) if np.any(neg) else np.inf
        raise PreconditionError(
            f"epsilon {cfg.epsilon} too large: derivative drops to {np.min(g):.6g} < {sigma_min}; "
            f"largest admissible epsilon is {eps_max:.6g}"
        )
    return out


def c1_distance(m1, m2, grid_size=CHECK_GRID):
    """``max_i (sup |f_i - g_i| + sup |f_i' - g_i'|)`` over branch grids."""
    dist = 0.0
    for a, b in zip(m1.branches, m2.branches):
        x = np.linspace(a.domain.lo, a.domain.hi, grid_size)
        dv = np.max(np.abs(a._f(x) - b._f(x)))
        dd = np.max(np.abs(a._df(x) - b._df(x)))
        dist = max(dist, float(dv + dd))
    return dist


def perturb_map(m, cfg, delta_uniform=DELTA_UNIFORM, sigma_min=SIGMA_MIN):
    """Perturb branch 1, keep branches ``2 .. n-1``, and re-extend branch ``n``.

    The returned map preserves Lebesgue measure by construction.
    """
    defect = invariance_defect(m, 1000)
    if defect > TAU_PRESERVING:
        raise PreconditionError(f"input map does not preserve Lebesgue measure (defect {defect:.3g})")
    b1 = m.branches[0]
    if b1.domain.lo != 0.0 or abs(float(b1._f(np.array(0.0)))) > 1e-12:
        raise PreconditionError("the first branch must fix 0")
    new1 = build_perturbed_branch(b1, cfg, sigma_min)
    spec = PartialMapSpec(m.partition, (new1,) + m.branches[1:-1], m.degree)
    try:
        return assemble_circle_map(spec, delta_uniform)
    except PreconditionError as exc:
        raise PreconditionError(f"re-extension after perturbation failed ({exc}); epsilon too large") from exc


def predicted_lower_bound(params, w, k):
    """``(1/sigma_hat) * sum_{i<k} w(C sigma_hat^(i-k))``.

    Diverges as ``k`` grows exactly when ``w`` is not Dini-integrable.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    j = np.arange(1, k + 1, dtype=float)
    t = params.C * params.sigma_hat ** (-j)
    return float(np.sum(w(t)) / params.sigma_hat)


@dataclass(frozen=True, eq=False)
class DemoResult:
    """Output of :func:`unbounded_demo`: the report plus the maps involved."""

    report: DistortionReport
    perturbed_map: object
    x0: float
    lower_bound_params: LowerBoundParams


def unbounded_demo(
    m, cfg, k_max, delta_uniform=DELTA_UNIFORM, x0=None, samples=32, tau_growth=0.05
):
    """Perturb ``m`` and track distortion along the leftmost cylinders.

    For each ``k`` the point ``x_k = f_1^{-k}(x0)`` lies in the leftmost
    level-``k`` cylinder; the pair value ``|log (f^k)'(x_k) - log (f^k)'(0)|``
    is a lower bound for ``d_k``. It is recorded together with the sampled
    distortion of that cylinder and the modulus-driven prediction.
    """
    pm = perturb_map(m, cfg, delta_uniform)
    cfg = cfg.resolve(m.branches[0].domain)
    if x0 is None:
        x0 = 0.5 * cfg.v0_radius
    if not 0.0 < x0 <= cfg.v0_radius:
        raise ValueError("x0 must lie in V0 without the fixed point")
    params = LowerBoundParams(pm.sigma, min(1.0, cfg.v0_radius))
    b1 = pm.branches[0]

    pairs, left_d, pred = [], [], []
    xk = float(x0)
    for k in range(1, k_max + 1):
        xk = float(b1.inverse(xk))
        pairs.append(abs(birkhoff_log_deriv(pm, xk, k) - birkhoff_log_deriv(pm, 0.0, k)))
        left_d.append(distortion_level(pm, k, samples, prefix=(1,) * k))
        pred.append(predicted_lower_bound(params, cfg.modulus, k))

    report = DistortionReport(
        d=tuple(left_d),
        samples_per_cylinder=samples,
        argmax_cylinder=tuple((1,) * k for k in range(1, k_max + 1)),
        classification=classify_growth(left_d, tau_growth),
        predicted_lower_bounds=tuple(pred),
        pair_bounds=tuple(pairs),
    )
    return DemoResult(report, pm, float(x0), params)
