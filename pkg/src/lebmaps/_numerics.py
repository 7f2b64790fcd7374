"""Vectorized root finding and fixed-order quadrature used by the branches."""

import numpy as np
from numpy.polynomial.legendre import leggauss

from .exceptions import NumericError

TAU_INV = 1e-12

_EPS = np.finfo(float).eps
_GL_NODES, _GL_WEIGHTS = leggauss(32)


def solve_increasing(func, dfunc, target, lo, hi, x0=None, tol=TAU_INV, maxiter=200):
    """Solve ``func(x) = target`` for an increasing ``func`` on ``[lo, hi]``.

    Newton steps are taken while they stay strictly inside the current
    bracket; otherwise the bracket is bisected. Works elementwise on arrays.

    Parameters
    ----------
    func, dfunc : callable
        Vectorized function and its derivative.
    target : array_like
        Right-hand sides.
    lo, hi : float
        Bracket, with ``func(lo) <= target <= func(hi)`` assumed.
    x0 : array_like, optional
        Initial guesses; defaults to linear interpolation between ``lo``
        and ``hi`` treating ``func`` as mapping onto ``[0, 1]``.
    tol : float
        Maximal accepted residual ``|func(x) - target|``.

    Returns
    -------
    ndarray
        Roots with the shape of ``target``.
    """
    target = np.asarray(target, dtype=float)
    shape = target.shape
    t = target.ravel()
    a = np.full(t.shape, float(lo))
    b = np.full(t.shape, float(hi))
    if x0 is None:
        x = lo + np.clip(t, 0.0, 1.0) * (hi - lo)
    else:
        x = np.clip(np.asarray(x0, dtype=float).ravel().copy(), lo, hi)

    # absolute floor so targets near zero (even subnormal) terminate
    floor = _EPS * (float(hi) - float(lo))
    active = np.arange(t.size)
    for _ in range(maxiter):
        if active.size == 0:
            break
        xa = x[active]
        r = func(xa) - t[active]
        done = r == 0.0
        below = r < 0.0
        a[active[below]] = xa[below]
        b[active[~below & ~done]] = xa[~below & ~done]

        d = dfunc(xa)
        with np.errstate(divide="ignore", invalid="ignore"):
            xn = xa - r / d
        aa, bb = a[active], b[active]
        bad = ~np.isfinite(xn) | (xn <= aa) | (xn >= bb)
        xn = np.where(bad, 0.5 * (aa + bb), xn)
        xn = np.where(done, xa, xn)

        step = np.abs(xn - xa)
        small = step <= 4.0 * _EPS * np.maximum(np.abs(xn), floor)
        collapsed = (bb - aa) <= 4.0 * _EPS * np.maximum(np.abs(xn), floor)
        x[active] = xn
        active = active[~(done | small | collapsed)]
    else:
        if active.size:
            raise NumericError(f"root finding did not converge for {active.size} points")

    resid = np.abs(func(x) - t)
    if np.any(resid > tol):
        raise NumericError(f"root residual {resid.max():.3e} exceeds tolerance {tol:.1e}")
    return x.reshape(shape)


def gauss_legendre(func, a, b):
    """Integrate ``func`` over ``[a, b]`` elementwise with 32-point Gauss-Legendre.

    ``a`` and ``b`` may be arrays of the same shape; ``func`` must accept
    arrays of shape ``a.shape + (32,)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    pts = mid[..., None] + half[..., None] * _GL_NODES
    return half * np.sum(_GL_WEIGHTS * func(pts), axis=-1)
