"""Input validation helpers shared by the estimators and the CLI."""

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import PreconditionError
from .extension import PartialMapSpec
from .maps import FullBranchMap, validate_full_branch_map
from .modulus import Modulus


def check_full_branch_map(m, validate=False, **kwargs):
    """Ensure ``m`` is a FullBranchMap; optionally run structural validation."""
    if not isinstance(m, FullBranchMap):
        raise TypeError(f"expected a FullBranchMap, got {type(m).__name__}")
    if validate:
        report = validate_full_branch_map(m, **kwargs)
        if not report.passed:
            raise PreconditionError(f"map failed validation: {', '.join(report.failures)}")
    return m


def check_partial_spec(spec):
    if not isinstance(spec, PartialMapSpec):
        raise TypeError(f"expected a PartialMapSpec, got {type(spec).__name__}")
    return spec


def check_modulus(w):
    """Accept a Modulus or a string such as ``"log:2"``."""
    if isinstance(w, Modulus):
        return w
    if isinstance(w, str):
        return Modulus.parse(w)
    raise TypeError("modulus must be a Modulus or a string like 'log:2'")


def check_densities(H, n_nodes=None):
    """Return ``H`` as a 2-d float array of nonnegative rows.

    A single density (1-d input) becomes one row.
    """
    H = np.asarray(H, dtype=float)
    if H.ndim == 1:
        H = H[None, :]
    H = check_array(H, ensure_min_features=2)
    if n_nodes is not None and H.shape[1] != n_nodes:
        raise ValueError(f"densities have {H.shape[1]} nodes, expected {n_nodes}")
    if np.any(H < 0):
        raise ValueError("densities must be nonnegative")
    return H


def check_points(x):
    x = np.asarray(x, dtype=float)
    if np.any((x < 0.0) | (x > 1.0)) or not np.all(np.isfinite(x)):
        raise ValueError("points must lie in [0, 1]")
    return x
