"""Moduli of continuity and the Dini-integrability diagnostic."""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate, special

KINDS = ("holder", "log_reciprocal", "log_squared")


@dataclass(frozen=True)
class Modulus:
    """A concave modulus of continuity ``w`` on ``[0, 1]``.

    ``holder``          w(t) = t**alpha,            0 < alpha <= 1
    ``log_reciprocal``  w(t) = 1 / (c - ln t),      c >= 2
    ``log_squared``     w(t) = 1 / (c - ln t)**2,   c >= 2

    Values are clamped at ``cap`` when one is given. Only ``log_reciprocal``
    fails to be Dini-integrable.

    ``log_squared`` is concave only where ``c - ln t >= 3``; for ``c < 3``
    pass ``cap=1/9`` (the value at ``t = exp(c - 3)``) to get a modulus that
    is concave on all of ``[0, 1]``.
    """

    kind: str
    param: float
    cap: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown modulus kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "holder" and not 0.0 < self.param <= 1.0:
            raise ValueError("Holder exponent must lie in (0, 1]")
        if self.kind != "holder" and self.param < 2.0:
            raise ValueError("logarithmic moduli need c >= 2 to stay concave on (0, 1]")
        if self.cap is not None and not self.cap > 0.0:
            raise ValueError("cap must be positive")

    @classmethod
    def holder(cls, alpha, cap=None):
        return cls("holder", float(alpha), cap)

    @classmethod
    def log_reciprocal(cls, c=2.0, cap=None):
        return cls("log_reciprocal", float(c), cap)

    @classmethod
    def log_squared(cls, c=2.0, cap=None):
        return cls("log_squared", float(c), cap)

    @classmethod
    def parse(cls, text):
        """Parse ``holder:0.5``, ``log:2`` or ``logsq:2``."""
        name, _, value = text.partition(":")
        aliases = {
            "holder": "holder",
            "log": "log_reciprocal",
            "log_reciprocal": "log_reciprocal",
            "logsq": "log_squared",
            "log_squared": "log_squared",
        }
        if name not in aliases or not value:
            raise ValueError(f"cannot parse modulus {text!r}")
        return cls(aliases[name], float(value))

    @property
    def concave_until(self):
        """Right end of the interval ``[0, t]`` on which ``w`` is concave."""
        if self.kind != "log_squared" or self.param >= 3.0:
            return 1.0
        knee = np.exp(self.param - 3.0)
        # a cap reached before the inflection point makes w concave throughout
        return 1.0 if self._cap_point() <= knee * (1 + 1e-12) else float(knee)

    @property
    def is_dini(self):
        return self.kind != "log_reciprocal"

    def _raw(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        pos = t > 0
        tp = t[pos]
        if self.kind == "holder":
            out[pos] = tp**self.param
        elif self.kind == "log_reciprocal":
            out[pos] = 1.0 / (self.param - np.log(tp))
        else:
            out[pos] = 1.0 / (self.param - np.log(tp)) ** 2
        return out

    def _cap_point(self):
        # the t beyond which the cap is active (w is increasing)
        if self.cap is None:
            return np.inf
        if self.kind == "holder":
            return self.cap ** (1.0 / self.param)
        if self.kind == "log_reciprocal":
            return np.exp(self.param - 1.0 / self.cap)
        return np.exp(self.param - 1.0 / np.sqrt(self.cap))

    def __call__(self, t):
        w = self._raw(t)
        if self.cap is not None:
            w = np.minimum(w, self.cap)
        return w if w.ndim else float(w)

    def _raw_antiderivative(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        pos = t > 0
        tp = t[pos]
        c = self.param
        if self.kind == "holder":
            out[pos] = tp ** (c + 1.0) / (c + 1.0)
        elif self.kind == "log_reciprocal":
            # substitute s = c - ln u
            out[pos] = np.exp(c) * special.exp1(c - np.log(tp))
        else:
            L = c - np.log(tp)
            out[pos] = tp / L - np.exp(c) * special.exp1(L)
        return out

    def antiderivative(self, t):
        """Closed-form ``int_0^t w(s) ds``."""
        t = np.asarray(t, dtype=float)
        tc = self._cap_point()
        if not np.isfinite(tc):
            out = self._raw_antiderivative(t)
        else:
            base = self._raw_antiderivative(np.minimum(t, tc))
            out = base + self.cap * np.maximum(t - tc, 0.0)
        return out if out.ndim else float(out)


def modulus_eval(w, t):
    """Evaluate ``w`` at ``t`` in ``[0, 1]``; ``w(0) = 0`` exactly."""
    t_arr = np.asarray(t, dtype=float)
    if np.any((t_arr < 0.0) | (t_arr > 1.0)):
        raise ValueError("modulus argument must lie in [0, 1]")
    return w(t_arr)


def dini_tail(w, delta):
    """Return ``int_delta^1 w(t)/t dt``.

    The integral is taken in the variable ``s = -ln t`` where the integrand
    ``w(exp(-s))`` is smooth and bounded, which keeps adaptive quadrature
    well conditioned for tiny ``delta``. Non-Dini moduli show up as tails
    that keep growing along ``delta = 2**-j``.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    upper = -np.log(delta)
    val, _ = integrate.quad(
        lambda s: float(w(np.exp(-s))), 0.0, upper, epsabs=0.0, epsrel=1e-10, limit=500
    )
    return val
