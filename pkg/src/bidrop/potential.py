"""Nondimensional intermolecular potential of the two-layer film model.

The upper liquid dewets from the lower one under a potential with
long-range attraction and short-range repulsion.  In nondimensional
variables its derivative is

    phi_eps'(h) = (1/eps) * [ (eps/h)**(n+1) - (eps/h)**(ell+1) ],

which vanishes at the ultra-thin film thickness h = eps.  The same
function can be written with a single rescaled profile Phi through
phi_eps'(h) = Phi'(h/eps)/eps.  The antiderivative is normalized so
that Phi(v) -> 0 as v -> infinity, which fixes

    Phi(v) = -v**(-n)/n + v**(-ell)/ell,       Phi(1) = -(ell-n)/(n*ell).

For the standard exponent pair (n, ell) = (2, 8) this gives
Phi(v) = -1/(2 v**2) + 1/(8 v**8) and Phi(1) = -3/8.  The shifted
potential W_eps = (Phi(h/eps) - Phi(1))/|Phi(1)| is nonnegative, zero
exactly at h = eps and tends to 1 from below as h/eps -> infinity; it
is the potential entering the sharp-interface energies.

All evaluators accept scalars or numpy arrays and are pure functions.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "PotentialSpec",
    "SteepRegionWarning",
    "phi_prime_eps",
    "phi_eps",
    "phi_second_eps",
    "Phi",
    "Phi_prime",
    "Phi_second",
    "Phi_minus_min",
    "Phi_gap",
    "W_eps",
]

# Below this multiple of eps the repulsive branch grows like h**-(ell+1);
# evaluation stays exact but callers are warned that they are sampling it.
STEEP_FRACTION = 0.01


class SteepRegionWarning(UserWarning):
    """Emitted when the potential is evaluated far inside the repulsive wall."""


@dataclass(frozen=True)
class PotentialSpec:
    """Exponents and ultra-thin film thickness of the potential.

    Attributes
    ----------
    n, ell : int
        Attraction / repulsion exponents, ell > n >= 1.  The pair (2, 8)
        is the one used throughout the acceptance checks.
    epsilon : float
        Nondimensional thickness of the ultra-thin wetting layer, > 0.
    """

    n: int = 2
    ell: int = 8
    epsilon: float = 0.1

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and isinstance(self.ell, (int, np.integer))):
            raise DomainError("exponents n and ell must be integers")
        if not self.ell > self.n >= 1:
            raise DomainError(f"need ell > n >= 1, got n={self.n}, ell={self.ell}")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon}")

    @property
    def phi_min(self) -> float:
        """Minimum value Phi(1) = -(ell-n)/(n*ell) of the rescaled potential."""
        return -(self.ell - self.n) / (self.n * self.ell)

    @property
    def abs_phi_min(self) -> float:
        return (self.ell - self.n) / (self.n * self.ell)


def _checked_positive(value, name):
    arr = np.asarray(value, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{name} must be positive and finite")
    return arr


def _warn_if_steep(spec, h):
    if np.any(h < STEEP_FRACTION * spec.epsilon):
        warnings.warn(
            "potential evaluated below eps/100; repulsive wall is steep there",
            SteepRegionWarning,
            stacklevel=3,
        )


def phi_prime_eps(spec: PotentialSpec, h):
    """Derivative of the nondimensional potential at layer thickness h > 0."""
    h = _checked_positive(h, "h")
    _warn_if_steep(spec, h)
    r = spec.epsilon / h
    out = (r ** (spec.n + 1) - r ** (spec.ell + 1)) / spec.epsilon
    return out if out.ndim else float(out)


def Phi(spec: PotentialSpec, v):
    """Rescaled potential Phi(v), normalized so Phi(inf) = 0."""
    v = _checked_positive(v, "v")
    out = -(v ** (-spec.n)) / spec.n + (v ** (-spec.ell)) / spec.ell
    return out if out.ndim else float(out)


def Phi_prime(spec: PotentialSpec, v):
    """Phi'(v) = v**-(n+1) - v**-(ell+1)."""
    v = _checked_positive(v, "v")
    out = v ** (-(spec.n + 1)) - v ** (-(spec.ell + 1))
    return out if out.ndim else float(out)


def Phi_second(spec: PotentialSpec, v):
    """Phi''(v); equals n*ell/... > 0 at v = 1 (the potential minimum)."""
    v = _checked_positive(v, "v")
    out = -(spec.n + 1) * v ** (-(spec.n + 2)) + (spec.ell + 1) * v ** (-(spec.ell + 2))
    return out if out.ndim else float(out)


def phi_eps(spec: PotentialSpec, h):
    """Nondimensional potential phi_eps(h) = Phi(h/eps)."""
    h = _checked_positive(h, "h")
    _warn_if_steep(spec, h)
    out = Phi(spec, h / spec.epsilon)
    return out


def phi_second_eps(spec: PotentialSpec, h):
    """Second derivative of phi_eps: Phi''(h/eps)/eps**2."""
    h = _checked_positive(h, "h")
    return Phi_second(spec, h / spec.epsilon) / spec.epsilon**2


def Phi_minus_min(spec: PotentialSpec, v):
    """Phi(v) - Phi(1), computed without cancellation near v = 1.

    For (n, ell) = (2, 8) the difference factorizes exactly as

        (v-1)**2 * (3 v**6 + 6 v**5 + 5 v**4 + 4 v**3 + 3 v**2 + 2 v + 1) / (8 v**8),

    which is used verbatim.  Other exponent pairs fall back to an
    expm1-based form that is still accurate to ~1e-8 relative at
    |v - 1| = 1e-8.
    """
    v = _checked_positive(v, "v")
    if spec.n == 2 and spec.ell == 8:
        poly = ((((((3 * v + 6) * v + 5) * v + 4) * v + 3) * v + 2) * v + 1)
        out = (v - 1.0) ** 2 * poly / (8.0 * v**8)
    else:
        t = np.log(v)
        out = np.expm1(-spec.ell * t) / spec.ell - np.expm1(-spec.n * t) / spec.n
    return out if out.ndim else float(out)


# Fixed Gauss-Legendre rule for the Taylor-remainder integral below.
_GAP_NODES, _GAP_WEIGHTS = np.polynomial.legendre.leggauss(16)
_GAP_THETA = 0.5 * (_GAP_NODES + 1.0)
_GAP_W = 0.5 * _GAP_WEIGHTS


def Phi_gap(spec: PotentialSpec, v0, tau):
    """Second-order Taylor gap Phi(v0+tau) - Phi(v0) - Phi'(v0)*tau.

    Evaluated through the integral remainder
    tau**2 * int_0^1 (1-theta) Phi''(v0 + theta*tau) dtheta so that no
    near-equal quantities are subtracted; this keeps full relative
    precision even for tau ~ 1e-9, where the direct difference would
    lose every digit.  This is the radicand of the droplet first
    integral expressed around the far-field thickness.
    """
    v0 = np.asarray(v0, dtype=float)
    tau = np.asarray(tau, dtype=float)
    v0_b, tau_b = np.broadcast_arrays(v0, tau)
    pts = v0_b[..., None] + _GAP_THETA * tau_b[..., None]
    if np.any(pts <= 0.0):
        raise DomainError("Phi_gap sampled at non-positive thickness")
    vals = Phi_second(spec, pts)
    out = tau_b**2 * np.sum(_GAP_W * (1.0 - _GAP_THETA) * vals, axis=-1)
    return out if out.ndim else float(out)


def W_eps(spec: PotentialSpec, h):
    """Shifted nonnegative potential (Phi(h/eps) - Phi(1)) / |Phi(1)|."""
    h = _checked_positive(h, "h")
    _warn_if_steep(spec, h)
    out = Phi_minus_min(spec, np.asarray(h, dtype=float) / spec.epsilon) / spec.abs_phi_min
    return out
