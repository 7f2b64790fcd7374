"""Expanding branches ``f_i : I_i -> [0, 1]`` in several representations.

Every branch is immutable and vectorized: evaluation, derivative and inverse
accept scalars or arrays and return the same kind.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from ._numerics import TAU_INV, gauss_legendre, solve_increasing
from .exceptions import DomainError
from .modulus import Modulus

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class Interval:
    """Closed subinterval ``[lo, hi]`` of ``[0, 1]`` with ``lo < hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (0.0 <= lo < hi <= 1.0):
            raise ValueError(f"invalid interval [{lo}, {hi}]")

    @property
    def length(self):
        return self.hi - self.lo

    def contains(self, x, slack=0.0):
        x = np.asarray(x, dtype=float)
        return (x >= self.lo - slack) & (x <= self.hi + slack)


def _out(arr):
    return arr if arr.ndim else float(arr)


class Branch:
    """Common machinery; subclasses provide ``_f``, ``_df`` and may override
    ``_inv`` / ``_inv_with_deriv``."""

    kind = "abstract"
    domain: Interval

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if not np.all(self.domain.contains(x, _DOMAIN_SLACK)):
            raise DomainError(
                f"point outside branch domain [{self.domain.lo}, {self.domain.hi}]"
            )
        return x

    def __call__(self, x):
        return _out(self._f(self._check(x)))

    def deriv(self, x):
        return _out(self._df(self._check(x)))

    def inverse(self, u):
        u = np.asarray(u, dtype=float)
        return _out(self._inv(u))

    def inverse_with_deriv(self, u):
        """Return ``(f^{-1}(u), f'(f^{-1}(u)))``."""
        x, d = self._inv_with_deriv(np.asarray(u, dtype=float))
        return _out(x), _out(d)

    def endpoint_derivs(self):
        """One-sided derivatives at the left and right end of the domain."""
        _, d = self._inv_with_deriv(np.array([0.0, 1.0]))
        return float(d[0]), float(d[1])

    def sample(self, n):
        """Grid of ``n`` points covering the domain: ``(x, f(x), f'(x))``."""
        x = np.linspace(self.domain.lo, self.domain.hi, n)
        return x, self._f(x), self._df(x)

    # defaults built on the forward map
    def _inv(self, u):
        lo, hi = self.domain.lo, self.domain.hi
        x = solve_increasing(self._f, self._df, u, lo, hi, tol=TAU_INV)
        x = np.where(u == 0.0, lo, x)
        return np.where(u == 1.0, hi, x)

    def _inv_with_deriv(self, u):
        x = self._inv(u)
        return x, self._df(x)


@dataclass(frozen=True, eq=False)
class AffineBranch(Branch):
    """``f(x) = slope * x + intercept``."""

    domain: Interval
    slope: float
    intercept: float
    kind = "affine"

    @classmethod
    def onto(cls, domain):
        """The affine branch mapping ``domain`` onto ``[0, 1]``."""
        slope = 1.0 / domain.length
        return cls(domain, slope, -domain.lo * slope)

    def _f(self, x):
        return self.slope * x + self.intercept

    def _df(self, x):
        return np.full_like(x, self.slope)

    def _inv(self, u):
        return (u - self.intercept) / self.slope


@dataclass(frozen=True, eq=False)
class SinePerturbedBranch(Branch):
    """``f(x) = slope (x - lo) + amplitude sin(2 pi frequency (x - lo))``.

    Maps the domain onto ``[0, 1]`` when ``slope * length == 1`` and
    ``2 * frequency * length`` is an integer.
    """

    domain: Interval
    slope: float
    amplitude: float
    frequency: float
    kind = "sine_perturbed"

    def _f(self, x):
        t = x - self.domain.lo
        return self.slope * t + self.amplitude * np.sin(2.0 * np.pi * self.frequency * t)

    def _df(self, x):
        t = x - self.domain.lo
        w = 2.0 * np.pi * self.frequency
        return self.slope + self.amplitude * w * np.cos(w * t)


def _fritsch_carlson(x, y, d):
    # scale derivative pairs into the monotone region alpha^2 + beta^2 <= 9
    d = d.copy()
    secant = np.diff(y) / np.diff(x)
    for k, s in enumerate(secant):
        a, b = d[k] / s, d[k + 1] / s
        r = a * a + b * b
        if r > 9.0:
            tau = 3.0 / np.sqrt(r)
            d[k] = tau * a * s
            d[k + 1] = tau * b * s
    return d


@dataclass(frozen=True, eq=False)
class TabulatedBranch(Branch):
    """Monotone piecewise-cubic Hermite branch through ``(x, f, f')`` samples.

    Derivative samples are limited (Fritsch-Carlson) so the interpolant stays
    strictly increasing. At least 129 samples are required.
    """

    domain: Interval
    x: np.ndarray
    f: np.ndarray
    df: np.ndarray
    kind = "tabulated"
    _spline: CubicHermiteSpline = field(init=False, repr=False)
    _dspline: object = field(init=False, repr=False)

    MIN_SAMPLES = 129

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        f = np.asarray(self.f, dtype=float)
        df = np.asarray(self.df, dtype=float)
        if x.ndim != 1 or x.shape != f.shape or x.shape != df.shape:
            raise ValueError("x, f and df must be 1-d arrays of equal length")
        if x.size < self.MIN_SAMPLES:
            raise ValueError(f"tabulated branch needs at least {self.MIN_SAMPLES} samples")
        if np.any(np.diff(x) <= 0) or np.any(np.diff(f) <= 0):
            raise ValueError("tabulated samples must be strictly increasing in x and f")
        if np.any(df <= 0):
            raise ValueError("tabulated derivatives must be positive")
        if abs(x[0] - self.domain.lo) > _DOMAIN_SLACK or abs(x[-1] - self.domain.hi) > _DOMAIN_SLACK:
            raise ValueError("tabulated grid must span the branch domain")
        for name, arr in (("x", x), ("f", f), ("df", df)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        spline = CubicHermiteSpline(x, f, _fritsch_carlson(x, f, df))
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_dspline", spline.derivative())

    @classmethod
    def from_function(cls, domain, func, dfunc, n=129):
        x = np.linspace(domain.lo, domain.hi, n)
        return cls(domain, x, np.asarray(func(x), float), np.asarray(dfunc(x), float))

    def _f(self, x):
        return self._spline(x)

    def _df(self, x):
        return self._dspline(x)


@dataclass(frozen=True, eq=False)
class ExtendedBranch(Branch):
    """The missing branch that makes a full branch map preserve Lebesgue measure.

    Stored through its inverse

        g(u) = lo + u - sum_i (f_i^{-1}(u) - lo_i),

    the sum running over the other branches. Its derivative at
    ``x = g(u)`` is ``1 / (1 - sum_i 1 / f_i'(f_i^{-1}(u)))``.
    """

    domain: Interval
    others: Tuple[Branch, ...]
    missing_index: int
    kind = "extended"

    def __post_init__(self):
        object.__setattr__(self, "others", tuple(self.others))

    def inverse_sum(self, u):
        """``sum_i 1 / f_i'(f_i^{-1}(u))`` over the given branches."""
        return self._inv_parts(np.asarray(u, dtype=float))[1]

    def _inv_parts(self, u):
        shift = np.zeros_like(u)
        recip = np.zeros_like(u)
        for b in self.others:
            xb, db = b._inv_with_deriv(u)
            shift = shift + (xb - b.domain.lo)
            recip = recip + 1.0 / db
        return shift, recip

    def _inv(self, u):
        shift, _ = self._inv_parts(u)
        return self.domain.lo + u - shift

    def _inv_with_deriv(self, u):
        shift, recip = self._inv_parts(u)
        return self.domain.lo + u - shift, 1.0 / (1.0 - recip)

    def _f(self, x):
        lo, hi = self.domain.lo, self.domain.hi
        u0 = (x - lo) / (hi - lo)

        def g(u):
            return self._inv(u)

        def dg(u):
            return 1.0 - self._inv_parts(u)[1]

        u = solve_increasing(g, dg, x, 0.0, 1.0, x0=u0, tol=TAU_INV)
        u = np.where(x == lo, 0.0, u)
        return np.clip(u, 0.0, 1.0)

    def _df(self, x):
        return 1.0 / (1.0 - self._inv_parts(self._f(x))[1])

    def sample(self, n):
        # uniform in the image, where the closed form lives
        u = np.linspace(0.0, 1.0, n)
        x, d = self._inv_with_deriv(u)
        return x, u, d


def _smoothstep_down(s):
    # 1 at s <= 0, 0 at s >= 1, C^1
    s = np.clip(s, 0.0, 1.0)
    return 1.0 - s * s * (3.0 - 2.0 * s)


@dataclass(frozen=True, eq=False)
class PerturbedBranch(Branch):
    """Branch whose derivative is ``base' + eps * w(t)`` near the left end.

    With ``t = x - lo``, the derivative is

        g(x) = base'(x) + eps * w(t) * chi(t) - kappa * bump(x)

    where ``chi`` is 1 on ``[0, v0_radius]`` and falls smoothly to 0 across
    ``blend_width``, and ``bump = sin^2`` lives on ``compensation_window``.
    ``kappa`` makes the total added mass vanish, so the branch still maps
    its domain onto ``[0, 1]`` and both endpoint derivatives are unchanged.
    """

    base: Branch
    modulus: Modulus
    epsilon: float
    v0_radius: float
    blend_width: float
    compensation_window: Interval
    kind = "perturbed"
    domain: Interval = field(init=False)
    kappa: float = field(init=False)
    _mass: float = field(init=False, repr=False)

    def __post_init__(self):
        dom = self.base.domain
        object.__setattr__(self, "domain", dom)
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")
        if not 0.0 < self.v0_radius < dom.length / 4.0:
            raise ValueError("v0_radius must lie in (0, |I_1| / 4)")
        if self.blend_width <= 0:
            raise ValueError("blend_width must be positive")
        win = self.compensation_window
        if not (win.lo >= dom.lo + self.v0_radius + self.blend_width and win.hi < dom.hi):
            raise ValueError(
                "compensation window must sit inside the domain, after the blend zone"
            )
        mass = self._bump_free_mass(np.array(dom.length))
        object.__setattr__(self, "_mass", float(mass))
        object.__setattr__(self, "kappa", self.epsilon * float(mass) / (0.5 * win.length))

    def _chi(self, t):
        return _smoothstep_down((t - self.v0_radius) / self.blend_width)

    def _bump_free_mass(self, t):
        """``int_0^t w(s) chi(s) ds``."""
        t = np.asarray(t, dtype=float)
        r, w = self.v0_radius, self.blend_width
        core = self.modulus.antiderivative(np.minimum(t, r))
        tb = np.clip(t, r, r + w)
        blend = gauss_legendre(lambda s: self.modulus(s) * self._chi(s), np.full_like(tb, r), tb)
        return core + blend

    def _bump(self, x):
        win = self.compensation_window
        s = (x - win.lo) / win.length
        inside = (s > 0.0) & (s < 1.0)
        return np.where(inside, np.sin(np.pi * s) ** 2, 0.0)

    def _bump_integral(self, x):
        win = self.compensation_window
        s = np.clip((x - win.lo) / win.length, 0.0, 1.0)
        return 0.5 * win.length * (s - np.sin(2.0 * np.pi * s) / (2.0 * np.pi))

    def perturbation(self, x):
        """``g(x) - base'(x)``."""
        x = self._check(x)
        t = x - self.domain.lo
        return _out(self.epsilon * self.modulus(t) * self._chi(t) - self.kappa * self._bump(x))

    def _f(self, x):
        t = x - self.domain.lo
        val = self.base._f(x)
        if self.epsilon:
            val = val + self.epsilon * self._bump_free_mass(t) - self.kappa * self._bump_integral(x)
        return np.where(x == self.domain.hi, 1.0, val)

    def _df(self, x):
        t = x - self.domain.lo
        d = self.base._df(x)
        if self.epsilon:
            d = d + self.epsilon * self.modulus(t) * self._chi(t) - self.kappa * self._bump(x)
        return d


def branch_eval(b, x):
    """Value of branch ``b`` at ``x``; raises DomainError outside its domain."""
    return b(x)


def branch_deriv(b, x):
    return b.deriv(x)


def branch_inverse(b, u):
    """Preimage of ``u`` in ``[0, 1]`` under ``b``."""
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr < 0.0) | (u_arr > 1.0)):
        raise DomainError("inverse argument must lie in [0, 1]")
    return b.inverse(u)
