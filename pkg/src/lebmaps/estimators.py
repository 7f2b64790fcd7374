"""Estimator-style front ends (``fit`` / ``transform`` / ``predict``).

Each class keeps its configuration in constructor parameters, so
``get_params`` / ``set_params`` / ``clone`` work as usual, and stores
results in trailing-underscore attributes after ``fit``.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import distortion as _dist
from . import extension as _ext
from . import perturbation as _pert
from . import transfer as _tr
from .validation import (
    check_densities,
    check_full_branch_map,
    check_modulus,
    check_partial_spec,
    check_points,
)


class MissingBranchExtension(BaseEstimator):
    """Fit on a PartialMapSpec; the fitted object is the completed circle map.

    Attributes
    ----------
    map_ : FullBranchMap
    branch_ : ExtendedBranch
    margin_ : float
        Grid margin of the inverse-derivative sum below 1.
    matching_report_ : MatchingReport
    """

    def __init__(self, delta_uniform=_ext.DELTA_UNIFORM, grid_size=_ext.MARGIN_GRID, tau_match=_ext.TAU_MATCH):
        self.delta_uniform = delta_uniform
        self.grid_size = grid_size
        self.tau_match = tau_match

    def fit(self, X, y=None):
        spec = check_partial_spec(X)
        self.margin_ = _ext.condition_one_margin(spec, self.grid_size)
        self.map_ = _ext.assemble_circle_map(spec, self.delta_uniform, self.grid_size, self.tau_match)
        self.branch_ = self.map_.branches[spec.missing_index - 1]
        self.matching_report_ = _ext.c1_matching_report(self.map_, spec.missing_index, self.tau_match)
        return self

    def predict(self, X):
        """Evaluate the completed map at points of ``[0, 1]``."""
        check_is_fitted(self, "map_")
        return self.map_(check_points(X))


class TransferOperator(TransformerMixin, BaseEstimator):
    """Transfer operator of a fitted map acting on grid densities."""

    def __init__(self, n_nodes=_tr.DEFAULT_NODES):
        self.n_nodes = n_nodes

    def fit(self, X, y=None):
        self.map_ = check_full_branch_map(X)
        self.invariance_defect_ = _tr.invariance_defect(self.map_, max(self.n_nodes, 100))
        return self

    def transform(self, X):
        """Apply the operator to each row of ``X`` (densities on ``n_nodes`` nodes)."""
        check_is_fitted(self, "map_")
        H = check_densities(X, self.n_nodes)
        return _tr._apply(self.map_, H, np.linspace(0.0, 1.0, self.n_nodes))


class DistortionProfile(BaseEstimator):
    """Sampled distortion ``d_1 .. d_kmax`` of a fitted map."""

    def __init__(self, k_max=10, samples=_dist.DEFAULT_SAMPLES, tau_growth=_dist.TAU_GROWTH, prefix=None, budget=_dist.BUDGET):
        self.k_max = k_max
        self.samples = samples
        self.tau_growth = tau_growth
        self.prefix = prefix
        self.budget = budget

    def fit(self, X, y=None):
        m = check_full_branch_map(X)
        self.report_ = _dist.distortion_profile(
            m, self.k_max, self.samples, self.tau_growth, tuple(self.prefix or ()), budget=self.budget
        )
        self.d_ = np.array(self.report_.d)
        self.classification_ = self.report_.classification
        return self


class LebesguePerturbation(TransformerMixin, BaseEstimator):
    """Non-Dini perturbation of branch 1 followed by re-extension of branch n.

    ``transform`` applies the perturbation to any Lebesgue-preserving map;
    ``fit`` additionally records the result and its C1 distance.
    """

    def __init__(
        self,
        epsilon=0.05,
        modulus="log:2",
        v0_radius=None,
        blend_width=None,
        compensation_window=None,
        delta_uniform=_ext.DELTA_UNIFORM,
    ):
        self.epsilon = epsilon
        self.modulus = modulus
        self.v0_radius = v0_radius
        self.blend_width = blend_width
        self.compensation_window = compensation_window
        self.delta_uniform = delta_uniform

    def _config(self):
        return _pert.PerturbationConfig(
            self.epsilon, check_modulus(self.modulus), self.v0_radius, self.blend_width, self.compensation_window
        )

    def fit(self, X, y=None):
        m = check_full_branch_map(X)
        self.map_ = _pert.perturb_map(m, self._config(), self.delta_uniform)
        self.c1_distance_ = _pert.c1_distance(m, self.map_)
        return self

    def transform(self, X):
        return _pert.perturb_map(check_full_branch_map(X), self._config(), self.delta_uniform)

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X).map_


class UnboundedDistortionDemo(BaseEstimator):
    """Run the leftmost-cylinder distortion experiment on a perturbed map."""

    def __init__(self, epsilon=0.05, modulus="log:2", k_max=40, samples=32, x0=None, delta_uniform=_ext.DELTA_UNIFORM):
        self.epsilon = epsilon
        self.modulus = modulus
        self.k_max = k_max
        self.samples = samples
        self.x0 = x0
        self.delta_uniform = delta_uniform

    def fit(self, X, y=None):
        m = check_full_branch_map(X)
        cfg = _pert.PerturbationConfig(self.epsilon, check_modulus(self.modulus))
        result = _pert.unbounded_demo(m, cfg, self.k_max, self.delta_uniform, self.x0, self.samples)
        self.report_ = result.report
        self.perturbed_map_ = result.perturbed_map
        self.pair_bounds_ = np.array(result.report.pair_bounds)
        self.predicted_ = np.array(result.report.predicted_lower_bounds)
        return self
