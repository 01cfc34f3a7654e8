"""Stationary droplet profiles of the two-layer film by exact quadrature.

The difference h = h2 - h1 of the two interface heights satisfies a
second-order ODE whose first integral is separable,

    dx/dh = -1 / sqrt( 2 (sigma+1)/sigma * R(h) ),
    R(h)  = Phi(h/eps) - Phi(h_inf/eps) - Phi'(h_inf/eps) (h - h_inf)/eps,

so the profile is obtained by integrating dx/dh between the apex
(normalized to h = 1) and the far-field film thickness h_inf.  The
integrable square-root singularity at the apex is removed by the
substitution h = 1 - u**2 and the exponential far-field approach by
w = log(h - h_inf); every integral is then a smooth panel quadrature.

The same first integral, with the far field replaced by the turning
point of a finite interval, yields the Neumann stationary state on
(0, L): half a period of the conservative oscillation in the tilted
potential V(h) = (sigma+1)/sigma * phi_eps(h) - P h, with the pressure
parameter P shot so the droplet carries the prescribed mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from ._quad import cumulative_panels
from .errors import DomainError, ModelError, NumericalError, ValidationError
from .potential import (
    PotentialSpec,
    Phi,
    Phi_gap,
    Phi_prime,
    Phi_second,
    phi_eps,
    phi_prime_eps,
)

__all__ = [
    "GridSpec",
    "DropletProfile",
    "TwoLayerProfile",
    "PressureField",
    "MobilityMatrix",
    "solve_h_infinity",
    "first_integral_slope",
    "solve_droplet",
    "reconstruct_layers",
    "neumann_stationary",
    "pressures",
    "mobility",
]


def _sigma_ratio(sigma: float) -> float:
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return (sigma + 1.0) / sigma


# --------------------------------------------------------------------------
# far-field thickness
# --------------------------------------------------------------------------

def solve_h_infinity(epsilon, tolerance=1e-13, max_iter=60, spec=None):
    """Far-field film thickness of the apex-normalized droplet.

    Solves 0 = Phi(1/eps) - Phi(w) - Phi'(w)(1 - h_inf)/eps for
    h_inf = eps*w by Newton iteration seeded at h_inf = eps (the series
    h_inf = eps + eps^2/16 + ... guarantees the root sits just above the
    seed), with a bisection fallback on the bracket (eps, 2 eps).
    """
    if spec is None:
        spec = PotentialSpec(epsilon=float(epsilon))
    eps = spec.epsilon
    if not 0.0 < eps < 0.5:
        raise DomainError(f"epsilon must lie in (0, 0.5), got {eps}")

    phi_top = Phi(spec, 1.0 / eps)

    def residual(h_inf):
        w = h_inf / eps
        return phi_top - Phi(spec, w) - Phi_prime(spec, w) * (1.0 - h_inf) / eps

    def residual_prime(h_inf):
        # d/dh_inf of the residual collapses to -Phi''(w) (1-h_inf)/eps^2.
        return -Phi_second(spec, h_inf / eps) * (1.0 - h_inf) / eps**2

    h = eps
    for _ in range(max_iter):
        f = residual(h)
        step = f / residual_prime(h)
        h_new = h - step
        if not eps < h_new < 2.0 * eps:
            break
        h = h_new
        if abs(step) < tolerance * eps:
            if abs(residual(h)) < max(tolerance, 1e3 * np.finfo(float).eps):
                return h
    # Newton left the bracket or stalled: fall back to bisection.
    lo, hi = eps * (1.0 + 1e-14), 2.0 * eps
    if residual(lo) * residual(hi) > 0:
        raise NumericalError(
            "far-field thickness: no sign change on (eps, 2 eps)",
            residual=residual(h),
        )
    h = brentq(residual, lo, hi, xtol=tolerance * eps, rtol=8 * np.finfo(float).eps)
    res = residual(h)
    if abs(res) > 1e-9:
        raise NumericalError("far-field thickness: residual too large", residual=res)
    return h


# --------------------------------------------------------------------------
# first integral
# --------------------------------------------------------------------------

def _radicand(spec, h, h_inf):
    """R(h) = Phi(h/eps) - Phi(w) - Phi'(w) (h - h_inf)/eps of the first integral.

    R vanishes quadratically at h = h_inf, so the direct difference loses
    all digits there; below |h/eps - w| = 1/4 it is replaced by the
    integral-remainder form, which carries full relative precision.  The
    remainder quadrature is in turn only valid for small increments,
    hence the hybrid.
    """
    eps = spec.epsilon
    h = np.asarray(h, dtype=float)
    w = h_inf / eps
    tau = h / eps - w
    out = np.empty_like(tau)
    near = np.abs(tau) < 0.25
    if np.any(near):
        out[near] = Phi_gap(spec, w, tau[near])
    far = ~near
    if np.any(far):
        out[far] = (
            Phi(spec, h[far] / eps) - Phi(spec, w) - Phi_prime(spec, w) * tau[far]
        )
    return out if out.ndim else float(out)


def first_integral_slope(h, epsilon, sigma, h_infinity, tolerance=1e-10):
    """Decreasing-branch slope dh/dx of the stationary droplet at height h.

    Returns -sqrt(2 (sigma+1)/sigma * R(h)); a radicand more negative
    than -tolerance signals an inconsistent (h, h_infinity) pair.
    """
    ratio = _sigma_ratio(sigma)
    spec = PotentialSpec(epsilon=float(epsilon))
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr <= 0.0):
        raise DomainError("h must be positive")
    rad = np.asarray(_radicand(spec, h_arr, h_infinity), dtype=float)
    if np.any(rad < -tolerance):
        raise DomainError(
            f"negative radicand {float(np.min(rad)):.3e}: h outside [h_inf, 1] branch"
        )
    out = -np.sqrt(2.0 * ratio * np.clip(rad, 0.0, None))
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# profile by quadrature
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GridSpec:
    """Panel counts for the three regularized quadrature regions.

    apex_panels cover h = 1 - u**2 near the apex, mid_panels the plain
    h-integration, tail_panels the w = log(h - h_inf) far field, which
    is truncated at h = h_inf (1 + tail_cutoff) and continued by the
    constant h_inf.
    """

    apex_panels: int = 240
    mid_panels: int = 320
    tail_panels: int = 640
    order: int = 12
    tail_cutoff: float = 1e-8
    apex_split: float = 0.55   # h_a = h_inf + apex_split*(1 - h_inf)
    tail_start: float = 0.5    # h_b = h_inf + tail_start*eps

    def __post_init__(self):
        if min(self.apex_panels, self.mid_panels, self.tail_panels) < 8:
            raise ValidationError("grid too coarse: need at least 8 panels per region")


@dataclass
class DropletProfile:
    """Sampled stationary profile h(x) with h(0) = 1 and h -> h_infinity."""

    sigma: float
    epsilon: float
    h_infinity: float
    x: np.ndarray
    h: np.ndarray
    contact_estimate: float
    apex_height: float = 1.0
    _spec: PotentialSpec = field(repr=False, default=None)

    def __post_init__(self):
        if self._spec is None:
            self._spec = PotentialSpec(epsilon=self.epsilon)

    @cached_property
    def _interp_h(self):
        return PchipInterpolator(self.x, self.h, extrapolate=False)

    @cached_property
    def _interp_x(self):
        # x as a monotone function of decreasing h
        return PchipInterpolator(self.h[::-1], self.x[::-1], extrapolate=False)

    def height(self, x):
        """h at arbitrary x >= 0 (constant h_infinity beyond the last sample)."""
        x = np.asarray(x, dtype=float)
        out = np.where(x <= self.x[-1], self._interp_h(np.clip(x, 0.0, self.x[-1])), self.h_infinity)
        return out if out.ndim else float(out)

    def x_of_h(self, h):
        """Inverse profile: position where the droplet has height h."""
        h = np.asarray(h, dtype=float)
        out = self._interp_x(np.clip(h, self.h[-1], self.h[0]))
        return out if out.ndim else float(out)

    def slope(self, h):
        """Exact first-integral slope at height h (decreasing branch)."""
        return first_integral_slope(h, self.epsilon, self.sigma, self.h_infinity)

    def curvature_of_h(self, h):
        """Exact h'' from the twice-integrated ODE, as a function of h."""
        ratio = _sigma_ratio(self.sigma)
        return ratio * (
            phi_prime_eps(self._spec, h) - phi_prime_eps(self._spec, self.h_infinity)
        )


def solve_droplet(epsilon, sigma, grid_spec: GridSpec | None = None) -> DropletProfile:
    """Apex-normalized droplet profile on x >= 0 by adaptive panel quadrature.

    The position is accumulated as x(h) = int_h^1 dh'/|slope(h')| over
    three regularized regions (apex substitution h = 1 - u**2, plain
    middle, exponential tail in w = log(h - h_inf)).  Sample locations
    are the panel knots, so spacing is automatically fine both at the
    apex and through the contact zone.
    """
    gs = grid_spec or GridSpec()
    ratio = _sigma_ratio(sigma)
    spec = PotentialSpec(epsilon=float(epsilon))
    h_inf = solve_h_infinity(epsilon, spec=spec)

    rad_at_one = float(_radicand(spec, 1.0, h_inf))

    def inv_speed_anchored(h):
        # apex-anchored radicand vanishes exactly at h = 1 even though
        # h_inf carries a finite Newton residual
        rad = _radicand(spec, h, h_inf) - rad_at_one
        return 1.0 / np.sqrt(2.0 * ratio * np.clip(rad, 1e-300, None))

    # region boundaries
    h_a = h_inf + gs.apex_split * (1.0 - h_inf)
    h_b = h_inf + gs.tail_start * epsilon
    if not h_inf < h_b < h_a < 1.0:
        h_b = h_inf + 0.25 * (h_a - h_inf)

    # apex region: h = 1 - u^2
    u_knots = np.linspace(0.0, np.sqrt(1.0 - h_a), gs.apex_panels + 1)
    x_apex = cumulative_panels(
        lambda u: 2.0 * u * inv_speed_anchored(1.0 - u * u), u_knots, order=gs.order
    )
    h_apex = 1.0 - u_knots**2

    # middle region: plain h, traversed downward (oriented integral is
    # negative, hence the subtraction)
    h_knots = np.linspace(h_a, h_b, gs.mid_panels + 1)
    x_mid = x_apex[-1] - cumulative_panels(inv_speed_anchored, h_knots, order=gs.order)

    # tail region: w = log(h - h_inf); the anchored radicand here equals
    # the gap form to machine precision, so use the gap form directly.
    def inv_speed_tail(w):
        h = h_inf + np.exp(w)
        rad = _radicand(spec, h, h_inf)
        return np.exp(w) / np.sqrt(2.0 * ratio * rad)

    w_hi = np.log(h_b - h_inf)
    w_lo = np.log(gs.tail_cutoff * h_inf)
    w_knots = np.linspace(w_hi, w_lo, gs.tail_panels + 1)
    x_tail = x_mid[-1] - cumulative_panels(inv_speed_tail, w_knots, order=gs.order)
    h_tail = h_inf + np.exp(w_knots)

    x = np.concatenate([x_apex, x_mid[1:], x_tail[1:]])
    h = np.concatenate([h_apex, h_knots[1:], h_tail[1:]])
    if not (np.all(np.diff(x) > 0) and np.all(np.diff(h) < 0)):
        raise NumericalError("droplet quadrature produced a non-monotone profile")

    # numerical contact point: where h crosses 2 eps
    if h[-1] < 2.0 * epsilon < h[0]:
        contact = float(PchipInterpolator(h[::-1], x[::-1])(2.0 * epsilon))
    else:
        contact = float(x[-1])

    return DropletProfile(
        sigma=float(sigma),
        epsilon=float(epsilon),
        h_infinity=h_inf,
        x=x,
        h=h,
        contact_estimate=contact,
        _spec=spec,
    )


# --------------------------------------------------------------------------
# two-layer reconstruction
# --------------------------------------------------------------------------

@dataclass
class TwoLayerProfile:
    """Sampled pair (h1, h2) on a shared grid.

    h1_xx / h2_xx, when present, are exact curvature fields inherited
    from the first integral of the generating profile; pressure
    evaluation uses them instead of finite differences.
    """

    x: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    sigma: float
    d: float
    m1: float
    m2: float
    h1_xx: np.ndarray | None = None
    h2_xx: np.ndarray | None = None

    def __post_init__(self):
        if np.any(self.h2 - self.h1 < -1e-14):
            raise ValidationError("h2 must dominate h1 pointwise")

    @property
    def thickness(self):
        return self.h2 - self.h1


def reconstruct_layers(profile: DropletProfile, d: float) -> TwoLayerProfile:
    """Split a droplet h into the layer pair (h1, h2) over a substrate depth d.

    h1 = -(h - h_inf)/(sigma+1) + d,  h2 = sigma (h - h_inf)/(sigma+1) + d + h_inf,
    so h2 - h1 = h identically and the deviations of the two interfaces
    from their far fields stay in the exact ratio sigma.
    """
    sigma = profile.sigma
    h_inf = profile.h_infinity
    d_min = (1.0 - h_inf) / (sigma + 1.0)
    if not d > d_min:
        raise ValidationError(
            f"lower layer pierced: need depth d > {d_min:.6g}, got {d:.6g}"
        )
    excess = profile.h - h_inf
    h1 = -excess / (sigma + 1.0) + d
    h2 = sigma * excess / (sigma + 1.0) + d + h_inf
    ratio = _sigma_ratio(sigma)
    hxx = ratio * (
        phi_prime_eps(profile._spec, profile.h)
        - phi_prime_eps(profile._spec, h_inf)
    )
    grid = profile.x
    m1 = float(np.trapezoid(h1, grid))
    m2 = float(np.trapezoid(profile.h, grid))
    return TwoLayerProfile(
        x=grid,
        h1=h1,
        h2=h2,
        sigma=sigma,
        d=float(d),
        m1=m1,
        m2=m2,
        h1_xx=-hxx / (sigma + 1.0),
        h2_xx=sigma * hxx / (sigma + 1.0),
    )


# --------------------------------------------------------------------------
# pressures and mobility
# --------------------------------------------------------------------------

@dataclass
class PressureField:
    """Interface pressures along a profile with their Lagrange multipliers."""

    x: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    lambda1: float
    lambda2: float

    def max_gradient(self):
        """Sup of |dp/dx| over interior nodes, for both pressures."""
        dx = np.diff(self.x)
        g1 = np.abs(np.diff(self.p1) / dx)
        g2 = np.abs(np.diff(self.p2) / dx)
        return float(np.max(g1)), float(np.max(g2))


def _second_difference(y, x):
    """Second derivative on a uniform grid; one-sided copies at the ends."""
    dx = x[1] - x[0]
    if not np.allclose(np.diff(x), dx, rtol=1e-8, atol=1e-12):
        raise ValidationError("finite-difference pressures require a uniform grid")
    out = np.empty_like(y)
    out[1:-1] = (y[2:] - 2.0 * y[1:-1] + y[:-2]) / dx**2
    out[0] = (y[0] - 2.0 * y[1] + y[2]) / dx**2
    out[-1] = (y[-1] - 2.0 * y[-2] + y[-3]) / dx**2
    return out


def pressures(two_layer: TwoLayerProfile, epsilon, sigma) -> PressureField:
    """Interface pressures p1 = -sigma h1'' - phi', p2 = -h2'' + phi'.

    Uses the profile's exact curvature fields when it carries them,
    otherwise second-order central differences (one-sided at the ends).
    lambda1 is the mean of phi' over the domain; lambda2 the average
    residual of the h1 equation.
    """
    if len(two_layer.x) < 5:
        raise ValidationError("pressure evaluation needs at least 5 grid points")
    spec = PotentialSpec(epsilon=float(epsilon))
    thick = two_layer.thickness
    if np.any(thick <= 0.0):
        raise DomainError("layers touch: h2 - h1 must stay positive")
    phip = phi_prime_eps(spec, thick)
    if two_layer.h1_xx is not None and two_layer.h2_xx is not None:
        h1xx, h2xx = two_layer.h1_xx, two_layer.h2_xx
    else:
        h1xx = _second_difference(two_layer.h1, two_layer.x)
        h2xx = _second_difference(two_layer.h2, two_layer.x)
    p1 = -sigma * h1xx - phip
    p2 = -h2xx + phip
    length = two_layer.x[-1] - two_layer.x[0]
    lambda1 = float(np.trapezoid(phip, two_layer.x) / length)
    lambda2 = float(np.mean(p1[2:-2]) + lambda1) if len(p1) > 6 else float(np.mean(p1) + lambda1)
    return PressureField(x=two_layer.x, p1=p1, p2=p2, lambda1=lambda1, lambda2=lambda2)


@dataclass(frozen=True)
class MobilityMatrix:
    """Thickness-dependent 2x2 mobility coupling fluxes to pressure gradients."""

    mu: float
    entries: np.ndarray
    det: float


def mobility(h1_val, h2_val, mu) -> MobilityMatrix:
    """Mobility matrix Q at layer heights (h1, h2) and viscosity ratio mu.

    Q = (1/mu) [[h1^3/3, h1^3/3 + h1^2 (h2-h1)/2],
                [sym.,   mu (h2-h1)^3/3 + h1 h2 (h2-h1) + h1^3/3]].

    Symmetric, and singular exactly on the boundary h2 = h1 of the
    admissible set.
    """
    if not mu > 0:
        raise DomainError(f"viscosity ratio must be positive, got {mu}")
    if not h1_val > 0:
        raise DomainError(f"h1 must be positive, got {h1_val}")
    if h2_val < h1_val:
        raise DomainError("ordering violated: need h2 >= h1")
    gap = h2_val - h1_val
    q11 = h1_val**3 / 3.0
    q12 = q11 + 0.5 * h1_val**2 * gap
    q22 = mu * gap**3 / 3.0 + h1_val * h2_val * gap + q11
    entries = np.array([[q11, q12], [q12, q22]]) / mu
    det = float(entries[0, 0] * entries[1, 1] - entries[0, 1] * entries[1, 0])
    return MobilityMatrix(mu=float(mu), entries=entries, det=det)


# --------------------------------------------------------------------------
# Neumann stationary state on a finite interval
# --------------------------------------------------------------------------

def _tilted_potential(spec, ratio, pressure):
    """V(h) and V'(h) for the finite-interval oscillation."""

    def value(h):
        return ratio * phi_eps(spec, h) - pressure * h

    def deriv(h):
        return ratio * phi_prime_eps(spec, h) - pressure

    return value, deriv


class _NeumannOrbit:
    """Half-period orbit machinery for one pressure parameter P.

    The stationary state on (0, L) is half a period of the conservative
    motion h'' = V'(h) between the film-side turning point theta (just
    above the local minimum h_lo of V) and the apex H on the outer
    descending branch, with V(H) = V(theta).  Near theta the orbit
    lingers logarithmically, so the film side is integrated in
    y = log(h - theta), which resolves the layer uniformly however
    close theta sits to h_lo.
    """

    # below this offset from h_lo the half-period exceeds any length
    # double precision can distinguish from the homoclinic limit
    _REL_FLOOR = 1e-12
    _Y_DEPTH = 80.0

    def __init__(self, spec, sigma, pressure, panels=280, order=16):
        self.spec = spec
        self.sigma = sigma
        self.ratio = _sigma_ratio(sigma)
        self.pressure = pressure
        self.panels = panels
        self.order = order
        eps = spec.epsilon
        self.V, self.Vp = _tilted_potential(spec, self.ratio, pressure)
        v_peak = ((spec.ell + 1.0) / (spec.n + 1.0)) ** (1.0 / (spec.ell - spec.n))
        p_max = self.ratio * phi_prime_eps(spec, eps * v_peak)
        if not 0.0 < pressure < p_max:
            raise ModelError(
                f"pressure {pressure:.4g} outside the droplet range (0, {p_max:.4g})"
            )
        self.h_lo = brentq(self.Vp, eps * (1.0 + 1e-13), eps * v_peak, xtol=1e-16)
        hi = eps * v_peak * 2.0
        while self.Vp(hi) > 0.0:
            hi *= 2.0
            if hi > 1e6:
                raise NumericalError("no upper critical point of the tilted potential")
        self.h_hi = brentq(self.Vp, eps * v_peak, hi, xtol=1e-16)
        big = 2.0 * self.h_hi
        v_lo = self.V(self.h_lo)
        while self.V(big) > v_lo:
            big *= 2.0
            if big > 1e9:
                raise NumericalError("tilted potential does not descend below film level")
        self.h_top_max = brentq(lambda h: self.V(h) - v_lo, self.h_hi, big, xtol=1e-15)
        self.theta_floor = self.h_lo + self._REL_FLOOR * (self.h_hi - self.h_lo)

    def apex_of(self, theta):
        """Apex height H with V(H) = V(theta) on the descending branch."""
        v_theta = self.V(theta)
        return brentq(
            lambda h: self.V(h) - v_theta,
            self.h_hi,
            self.h_top_max * (1.0 + 1e-12),
            xtol=1e-15,
        )

    def _gap(self, h, ref, slope_ref):
        """V(h) - V(ref), cancellation-free near the turning point h = ref."""
        h = np.asarray(h, dtype=float)
        eps = self.spec.epsilon
        tau = (h - ref) / eps
        out = np.empty_like(tau)
        near = np.abs(tau) < 1e-2
        if np.any(near):
            out[near] = self.ratio * Phi_gap(self.spec, ref / eps, tau[near]) + (
                h[near] - ref
            ) * slope_ref
        far = ~near
        if np.any(far):
            out[far] = (
                self.ratio * (Phi(self.spec, h[far] / eps) - Phi(self.spec, ref / eps))
                - self.pressure * (h[far] - ref)
            )
        return out

    def _film_side(self, theta, apex, weight, cumulative=False, y_min=None):
        """Integral of weight(h) dh / sqrt(2(V - V(theta))) over the film half.

        Parametrized by y = log(h - theta); the integrand decays like
        exp(y/2) at the turning end, so a fixed y-depth bounds the
        truncation error by ~exp(y_min/2).
        """
        slope_theta = self.Vp(theta)
        h_mid = theta + 0.45 * (apex - theta)
        if y_min is None:
            y_min = np.log(h_mid - theta) - self._Y_DEPTH
        y_knots = np.linspace(np.log(h_mid - theta), y_min, self.panels + 1)

        def f(y):
            t = np.exp(y)
            h = theta + t
            gap = np.clip(self._gap(h, theta, slope_theta), 1e-300, None)
            return t * weight(h) / np.sqrt(2.0 * gap)

        if cumulative:
            return y_knots, -cumulative_panels(f, y_knots, order=self.order)
        return -cumulative_panels(f, y_knots, order=self.order)[-1]

    def _apex_side(self, theta, apex, weight, cumulative=False):
        """Same integral over the apex half, parametrized by u = sqrt(H - h)."""
        slope_apex = self.Vp(apex)
        h_mid = theta + 0.45 * (apex - theta)
        u_knots = np.linspace(0.0, np.sqrt(apex - h_mid), self.panels + 1)

        def f(u):
            h = apex - u * u
            gap = np.clip(self._gap(h, apex, slope_apex), 1e-300, None)
            return 2.0 * u * weight(h) / np.sqrt(2.0 * gap)

        if cumulative:
            return u_knots, cumulative_panels(f, u_knots, order=self.order)
        return cumulative_panels(f, u_knots, order=self.order)[-1]

    def half_period(self, theta, apex=None):
        apex = self.apex_of(theta) if apex is None else apex
        one = lambda h: np.ones_like(h)
        return self._apex_side(theta, apex, one) + self._film_side(theta, apex, one)

    def orbit_mass(self, theta, apex=None):
        apex = self.apex_of(theta) if apex is None else apex
        ident = lambda h: h
        return 2.0 * (
            self._apex_side(theta, apex, ident) + self._film_side(theta, apex, ident)
        )

    def solve_theta(self, half_length):
        """Film-side turning point whose half-period equals half_length.

        Returns (theta, exact) where exact=False marks the
        quasi-homoclinic regime: the half-period at the smallest
        resolvable amplitude offset is already shorter than L/2, and the
        orbit is continued by the constant film thickness theta.
        """
        span = self.h_hi - self.h_lo
        t_floor = self.half_period(self.theta_floor)
        if t_floor <= half_length:
            return self.theta_floor, False

        def period_of_logdelta(ld):
            return self.half_period(self.h_lo + np.exp(ld)) - half_length

        ld_lo = np.log(self.theta_floor - self.h_lo)
        f_lo = t_floor - half_length
        ld = ld_lo
        for _ in range(60):
            ld_next = ld + 0.5 * np.log(10.0)
            theta = self.h_lo + np.exp(ld_next)
            if theta >= self.h_hi:
                raise ModelError(
                    "no droplet fits: half-period exceeds L/2 for every amplitude"
                )
            f_next = period_of_logdelta(ld_next)
            if f_next < 0.0:
                ld_root = brentq(period_of_logdelta, ld, ld_next, xtol=1e-13)
                return self.h_lo + np.exp(ld_root), True
            ld, f_lo = ld_next, f_next
        raise NumericalError("film-side amplitude search failed to bracket")

    def profile(self, theta, n_half=420):
        """Right half-profile from the apex: (offsets from center, h)."""
        apex = self.apex_of(theta)
        one = lambda h: np.ones_like(h)
        u_knots, x_up = self._apex_side(theta, apex, one, cumulative=True)
        h_up = apex - u_knots**2
        y_floor = np.log(1e-16 * max(theta, self.spec.epsilon))
        y_knots, x_low = self._film_side(
            theta, apex, one, cumulative=True, y_min=y_floor
        )
        h_low = theta + np.exp(y_knots)
        x = np.concatenate([x_up, x_up[-1] + x_low[1:]])
        h = np.concatenate([h_up, h_low[1:]])
        return x, h


def neumann_stationary(
    m1,
    m2,
    L,
    epsilon,
    sigma,
    n_grid=2048,
    mass_tol=1e-11,
):
    """Stationary two-layer state on (0, L) with Neumann boundary conditions.

    Builds the droplet h of the difference equation as half a period of
    the conservative oscillation centered at L/2, shooting over the
    pressure parameter P > 0 until the droplet mass equals m2, then
    lifts it to the layer pair with the constant fixed by m1.  Returns
    the profile resampled on a uniform n_grid-point grid together with
    its (constant) pressure field; lambda2 = 0 and
    lambda1 = P sigma/(sigma+1) = mean of phi' over the interval.
    """
    if min(m1, m2, L) <= 0:
        raise ValidationError("masses and interval length must be positive")
    spec = PotentialSpec(epsilon=float(epsilon))
    ratio = _sigma_ratio(sigma)

    # sharp-interface seed for the pressure bracket
    k_slope = np.sqrt(2.0 * ratio * spec.abs_phi_min)
    s_cap = np.sqrt(3.0 * m2 / (2.0 * k_slope))
    apex_guess = 0.5 * k_slope * s_cap
    if 2.0 * s_cap > 0.95 * L:
        raise ModelError(
            f"droplet of mass {m2} needs support ~{2 * s_cap:.3g}, interval is {L}"
        )
    p_seed = ratio * spec.abs_phi_min / apex_guess

    def total_mass(orbit, theta):
        apex = orbit.apex_of(theta)
        pad = max(0.0, 0.5 * L - orbit.half_period(theta, apex))
        return orbit.orbit_mass(theta, apex) + 2.0 * theta * pad

    def mass_at(pressure):
        orbit = _NeumannOrbit(spec, sigma, pressure)
        theta, _ = orbit.solve_theta(0.5 * L)
        return total_mass(orbit, theta) - m2, orbit, theta

    # scan pressures around the sharp-interface seed until the mass
    # mismatch changes sign; pressures without a droplet branch (too low
    # for this interval) are simply skipped
    samples = []
    bracket = None
    factor = 1.0
    for step in range(24):
        for fac in (factor, 1.0 / factor):
            pressure = p_seed * fac
            try:
                value = mass_at(pressure)[0]
            except (ModelError, NumericalError):
                continue
            samples.append((pressure, value))
        ordered = sorted(samples)
        for (pa, va), (pb, vb) in zip(ordered, ordered[1:]):
            if va == 0.0:
                bracket = (pa, pa)
            elif va * vb < 0.0:
                bracket = (pa, pb)
        if bracket is not None:
            break
        factor *= 1.45
    if bracket is None:
        raise NumericalError("could not bracket the droplet mass in pressure")

    if bracket[0] == bracket[1]:
        pressure = bracket[0]
    else:
        pressure = brentq(
            lambda p: mass_at(p)[0],
            bracket[0],
            bracket[1],
            xtol=1e-15,
            rtol=4 * np.finfo(float).eps,
        )
    mass_err, orbit, theta = mass_at(pressure)
    if abs(mass_err) > mass_tol * max(m2, 1.0):
        raise NumericalError("mass shooting did not converge", residual=mass_err)

    off, h_half = orbit.profile(theta)
    x_right = 0.5 * L + off
    if x_right[-1] < L:
        # quasi-homoclinic regime: continue with the constant film
        x_right = np.append(x_right, L)
        h_half = np.append(h_half, theta)
    else:
        x_right[-1] = L  # half-period equals L/2 to quadrature tolerance
    interp = PchipInterpolator(x_right, h_half)

    grid = np.linspace(0.0, L, int(n_grid))
    folded = 0.5 * L + np.abs(grid - 0.5 * L)
    h_bar = interp(np.clip(folded, x_right[0], L))

    c1 = (m1 + m2 / (sigma + 1.0)) / L
    h1 = -h_bar / (sigma + 1.0) + c1
    h2 = sigma * h_bar / (sigma + 1.0) + c1
    if np.any(h1 <= 0.0):
        raise ValidationError("lower layer pierced: increase m1")

    hxx = ratio * phi_prime_eps(spec, h_bar) - pressure  # exact h'' = V'(h)
    profile = TwoLayerProfile(
        x=grid,
        h1=h1,
        h2=h2,
        sigma=float(sigma),
        d=float(-theta / (sigma + 1.0) + c1),
        m1=float(m1),
        m2=float(m2),
        h1_xx=-hxx / (sigma + 1.0),
        h2_xx=sigma * hxx / (sigma + 1.0),
    )
    field = pressures(profile, epsilon, sigma)
    # stash the shooting parameters for diagnostics
    field.lambda2 = 0.0
    profile.pressure_parameter = pressure
    profile.film_thickness = theta
    profile.apex = orbit.apex_of(theta)
    return profile, field
