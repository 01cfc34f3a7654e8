"""Sharp-interface droplets: closed-form minimizers of the limit energy.

As the ultra-thin film thickness tends to zero the two-layer energy
converges to

    E_inf(h1, h2) = int sigma/2 |grad h1|^2 + 1/2 |grad h2|^2
                    + |Phi(1)| chi{h2 > h1},

whose minimizers under the two mass constraints are parabolic caps
zeta(x) = alpha (s^2 - |x - x0|^2)+ split between the interfaces in the
ratio sigma/(sigma+1).  With c = |Phi(1)| (sigma+1)/sigma the support
radius and amplitude follow from the cap mass and the contact-angle
(Neumann triangle) condition sigma (grad h1)^2 + (grad h2)^2 = 2|Phi(1)|
at the contact line; the merged-interface slope there is sqrt(2c),
identical to the contact slope of the matched asymptotic expansion.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .droplet import TwoLayerProfile
from .errors import DomainError, ValidationError

__all__ = [
    "SharpMinimizer",
    "SharpDroplet",
    "sharp_droplet",
    "gamma_minimizer",
    "neumann_triangle",
    "energy_infinity",
]


def _check_sigma(sigma):
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")


@dataclass(frozen=True)
class SharpDroplet:
    """Parabolic cap of the sharp-interface model for the merged thickness."""

    sigma: float
    s: float
    coefficient: float      # cap is coefficient * (s^2 - x^2) on |x| <= s
    contact_slope: float    # magnitude of dh/dx at x = s

    def height(self, x):
        x = np.asarray(x, dtype=float)
        out = np.maximum(self.coefficient * (self.s**2 - x * x), 0.0)
        return out if out.ndim else float(out)

    @property
    def apex(self) -> float:
        return self.coefficient * self.s**2

    @property
    def mass(self) -> float:
        return (4.0 / 3.0) * self.coefficient * self.s**3


def sharp_droplet(sigma, s=None, mass=None, abs_phi_min=3.0 / 8.0) -> SharpDroplet:
    """Sharp-interface parabola with the matched contact-slope condition.

    The cap f(x) = a (s^2 - x^2) satisfies f(s) = 0, f'(0) = 0 and
    |f'(s)| = sqrt(2 (sigma+1)/sigma |Phi(1)|).  Given s the amplitude
    follows from the slope condition; given the mass instead, s follows
    first from mass = (2/3) |f'(s)| s^2.  With neither argument the
    default s is the matched-asymptotics contact point, which makes the
    cap identical to the leading outer solution.
    """
    _check_sigma(sigma)
    slope = np.sqrt(2.0 * (sigma + 1.0) / sigma * abs_phi_min)
    if s is None and mass is None:
        s = 4.0 / np.sqrt(3.0) * np.sqrt(sigma / (sigma + 1.0))
    elif s is None:
        if not mass > 0:
            raise DomainError("mass must be positive")
        s = np.sqrt(3.0 * mass / (2.0 * slope))
    coefficient = slope / (2.0 * s)
    return SharpDroplet(sigma=float(sigma), s=float(s), coefficient=float(coefficient),
                        contact_slope=float(slope))


def neumann_triangle(sigma, c):
    """One-sided contact slopes (h1, h2, h2-h1) at the sharp contact line.

    Outward normal convention: the lower interface rises with slope
    sqrt(2c)/(1+sigma), the upper one falls with slope
    sigma sqrt(2c)/(1+sigma), and their difference falls with the full
    sqrt(2c).  They satisfy sigma g1^2 + g2^2 = 2c sigma/(sigma+1).
    """
    _check_sigma(sigma)
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    root = np.sqrt(2.0 * c)
    slope_h1 = root / (1.0 + sigma)
    slope_h2 = -root * sigma / (1.0 + sigma)
    return slope_h1, slope_h2, slope_h2 - slope_h1


@dataclass(frozen=True)
class SharpMinimizer:
    """Closed-form minimizer of the sharp-interface energy on a ball.

    The merged thickness is the cap zeta(x) = alpha (s^2 - |x - x0|^2)+
    and the interfaces are h2 = sigma/(sigma+1) zeta + h_level,
    h1 = h2 - zeta.  ``large_mass`` marks the branch where the cap fills
    the whole domain (s = R) and the contact-angle condition is waived.
    """

    dimension: int
    x0: float
    s: float
    alpha: float
    h_level: float
    c: float
    sigma: float
    m1: float
    m2: float
    R: float
    large_mass: bool = False

    def zeta(self, x):
        x = np.asarray(x, dtype=float)
        out = self.alpha * np.maximum(self.s**2 - (x - self.x0) ** 2, 0.0)
        return out if out.ndim else float(out)

    def h2(self, x):
        out = self.sigma / (self.sigma + 1.0) * np.asarray(self.zeta(x)) + self.h_level
        return out if np.ndim(out) else float(out)

    def h1(self, x):
        out = np.asarray(self.h2(x)) - np.asarray(self.zeta(x))
        return out if np.ndim(out) else float(out)

    @property
    def contact_slope(self) -> float:
        """|grad (h2 - h1)| at the contact line, sqrt(2c) on the angle branch."""
        return 2.0 * self.alpha * self.s

    def contact_slopes_pair(self):
        """(n.grad h1, n.grad h2) one-sided at the contact line."""
        g = self.contact_slope
        return g / (1.0 + self.sigma), -g * self.sigma / (1.0 + self.sigma)

    def cap_mass(self) -> float:
        if self.dimension == 1:
            return (4.0 / 3.0) * self.alpha * self.s**3
        return 0.5 * np.pi * self.alpha * self.s**4

    def energy(self, abs_phi_min) -> float:
        """Closed-form E_inf: weighted cap Dirichlet energy plus support cost."""
        lam = self.sigma / (self.sigma + 1.0)
        if self.dimension == 1:
            grad_sq = (8.0 / 3.0) * self.alpha**2 * self.s**3
            support = 2.0 * self.s
        else:
            grad_sq = 2.0 * np.pi * self.alpha**2 * self.s**4
            support = np.pi * self.s**2
        return 0.5 * lam * grad_sq + abs_phi_min * support

    def sample(self, x) -> TwoLayerProfile:
        """Layer pair on the given grid (x is radius when dimension = 2)."""
        x = np.asarray(x, dtype=float)
        h1 = np.asarray(self.h1(x))
        h2 = np.asarray(self.h2(x))
        return TwoLayerProfile(
            x=x, h1=h1, h2=h2, sigma=self.sigma,
            d=float(self.h_level), m1=self.m1, m2=self.m2,
        )


def gamma_minimizer(m1, m2, sigma, abs_Phi1, dimension=1, R=4.0, x0=0.0) -> SharpMinimizer:
    """Sharp-interface minimizer with masses (m1, m2) on the ball of radius R.

    c = |Phi(1)| (sigma+1)/sigma.  In one dimension
    s = (9 m2^2 / (8c))**(1/4) and alpha = (2 c^3 / (9 m2^2))**(1/4);
    in two (radial) dimensions s = (8 m2^2 / (pi^2 c))**(1/6) and the
    amplitude sqrt(2c)/(2s) that makes the cap mass and contact angle
    simultaneously exact.  When the computed s exceeds R the large-mass
    branch is taken: s = R, x0 = 0, amplitude fixed by mass alone and
    no angle condition.  The far-field level follows from m1 through
    h = (m1 + m2/(sigma+1)) / |Omega|.
    """
    _check_sigma(sigma)
    if min(m1, m2) <= 0:
        raise ValidationError("masses must be positive")
    if not abs_Phi1 > 0:
        raise DomainError("abs_Phi1 must be positive")
    if dimension not in (1, 2):
        raise DomainError("dimension must be 1 or 2")
    if not R > 0:
        raise DomainError("R must be positive")
    c = abs_Phi1 * (sigma + 1.0) / sigma

    if dimension == 1:
        s = (9.0 * m2**2 / (8.0 * c)) ** 0.25
        alpha = (2.0 * c**3 / (9.0 * m2**2)) ** 0.25
        volume = 2.0 * R
    else:
        s = (8.0 * m2**2 / (np.pi**2 * c)) ** (1.0 / 6.0)
        alpha = np.sqrt(2.0 * c) / (2.0 * s)
        volume = np.pi * R**2

    large_mass = s > R
    if large_mass:
        s, x0 = R, 0.0
        alpha = 0.75 * m2 / R**3 if dimension == 1 else 2.0 * m2 / (np.pi * R**4)
    elif abs(x0) + s > R:
        raise ValidationError("cap support must stay inside the domain")

    h_level = (m1 + m2 / (sigma + 1.0)) / volume
    if h_level - alpha * s**2 / (sigma + 1.0) <= 0.0:
        raise ValidationError("m1 too small: lower interface would touch bottom")

    return SharpMinimizer(
        dimension=dimension,
        x0=float(x0),
        s=float(s),
        alpha=float(alpha),
        h_level=float(h_level),
        c=float(c),
        sigma=float(sigma),
        m1=float(m1),
        m2=float(m2),
        R=float(R),
        large_mass=large_mass,
    )


def energy_infinity(two_layer: TwoLayerProfile, abs_Phi1, dimension=1) -> float:
    """Sharp-interface energy of a sampled layer pair.

    Gradient terms by the trapezoidal rule; the support measure of
    {h2 - h1 > theta} (theta = 1e-9 max gap) by linear-interpolation of
    the threshold crossings, so the measure converges quadratically in
    the grid spacing.  For dimension = 2 the grid is interpreted as a
    radius and the polar weight 2 pi r is applied.
    """
    x, h1, h2 = two_layer.x, two_layer.h1, two_layer.h2
    if len(x) != len(h1) or len(x) != len(h2):
        raise ValidationError("mismatched grids in energy evaluation")
    gap = h2 - h1
    theta = 1e-9 * float(np.max(gap)) if np.max(gap) > 0 else 0.0

    g1 = np.gradient(h1, x)
    g2 = np.gradient(h2, x)
    sigma = two_layer.sigma
    density = 0.5 * sigma * g1**2 + 0.5 * g2**2
    if dimension == 2:
        weight = 2.0 * np.pi * x
    else:
        weight = np.ones_like(x)
    grad_energy = float(np.trapezoid(density * weight, x))

    # support measure with interpolated crossings
    above = gap > theta
    gl, gr = gap[:-1] - theta, gap[1:] - theta
    xl, xr = x[:-1], x[1:]
    both = above[:-1] & above[1:]
    enter = ~above[:-1] & above[1:]
    leave = above[:-1] & ~above[1:]
    den = np.where(gl != gr, gl - gr, 1.0)   # xc only used across sign changes
    xc = xl + (xr - xl) * gl / den
    if dimension == 2:
        seg = lambda a, b: np.pi * (b * b - a * a)
    else:
        seg = lambda a, b: b - a
    measure = float(
        np.sum(np.where(both, seg(xl, xr), 0.0))
        + np.sum(np.where(enter, seg(xc, xr), 0.0))
        + np.sum(np.where(leave, seg(xl, xc), 0.0))
    )
    return grad_energy + abs_Phi1 * measure
