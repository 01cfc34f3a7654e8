"""Matched asymptotic expansion of the stationary droplet for small eps.

Outer region (the droplet cap): h = f0 + eps f1 + eps^2 f2 with the
closed-form parabola f0(x) = 1 - (3/16) (sigma+1)/sigma x^2 vanishing at
the contact point s = (4/sqrt 3) sqrt(sigma/(sigma+1)).  Inner region
(contact zone of width eps): h = eps v0(z) + eps^2 v1(z) in the
stretched variable z = (x - s)/eps.  The inner equations are derived
from the first integral of the profile ODE written in inner variables,

    v0' = -sqrt(2 (sigma+1)/sigma) sqrt(Phi(v0) - Phi(1)),

and its linearization for v1; the radicand constant -Phi(1) = 3/8 is
what makes the inner slope at z -> -infinity equal the outer slope of
f0 at s.  Matching the two expansions fixes the inner translation
(a1 = -1) and forces a logarithmic switch-back constant

    C = -log(eps) - 35/96 - log( (sqrt 3 / 8) sqrt((sigma+1)/sigma) )

in the first inner correction.  The composite solution glues the two
expansions with their common part removed; the second-order outer
correction f2 carries simple-pole and logarithmic singularities at s
whose coefficients (s/3 for the pole, exactly 1 for the log, constant
log(2s) - 19/96) cancel row by row against the inner expansion.

Everything here is specific to the exponent pair (n, ell) = (2, 8).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from ._quad import cumulative_panels
from .droplet import DropletProfile, TwoLayerProfile, reconstruct_layers, solve_h_infinity
from .errors import DomainError, ModelError, NumericalError, ValidationError
from .potential import PotentialSpec

__all__ = [
    "h_infinity_series",
    "outer_f0",
    "contact_point",
    "outer_corrections",
    "inner_profiles",
    "composite_solution",
    "composite_layers",
    "dirichlet_leading_order",
    "AsymptoticSolution",
    "OuterExpansion",
    "InnerExpansion",
]

_SQRT3 = np.sqrt(3.0)

# Far-film thickness series h_inf = sum_k coeffs[k] eps^(k+1).  The first
# three coefficients are the classical ones; the fourth feeds the
# second-order outer equation and is validated by the order-5 agreement
# of the series with the Newton root.
H_INF_COEFFS = (1.0, 1.0 / 16.0, 45.0 / 512.0, 71.0 / 1536.0)


def _ratio(sigma: float) -> float:
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    return (sigma + 1.0) / sigma


def slope_scale(sigma: float) -> float:
    """Magnitude (sqrt 3 / 2) sqrt((sigma+1)/sigma) of the contact slope."""
    return 0.5 * _SQRT3 * np.sqrt(_ratio(sigma))


def h_infinity_series(epsilon, order: int = 3):
    """Series approximation eps + eps^2/16 + 45 eps^3/512 (+ optional eps^4 term)."""
    if order not in (1, 2, 3, 4):
        raise DomainError("series order must be between 1 and 4")
    eps = np.asarray(epsilon, dtype=float)
    out = np.zeros_like(eps)
    for k in reversed(range(order)):
        out = (out + H_INF_COEFFS[k]) * eps
    return out if out.ndim else float(out)


def contact_point(sigma: float) -> float:
    """Leading-order contact point s = (4/sqrt 3) sqrt(sigma/(sigma+1))."""
    _ratio(sigma)
    return 4.0 / _SQRT3 * np.sqrt(sigma / (sigma + 1.0))


def outer_f0(x, sigma):
    """Leading-order outer parabola f0(x) = 1 - (3/16)((sigma+1)/sigma) x^2."""
    x = np.asarray(x, dtype=float)
    out = 1.0 - (3.0 / 16.0) * _ratio(sigma) * x * x
    return out if out.ndim else float(out)


def outer_f0_prime(x, sigma):
    x = np.asarray(x, dtype=float)
    out = -(3.0 / 8.0) * _ratio(sigma) * x
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# outer corrections f1, f2
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OuterGrid:
    """Sampling and integration knobs for the outer corrections."""

    x_start_rel: float = 1e-6   # integration starts at x = x_start_rel * s
    u_min_rel: float = 1e-6     # ODE integration halts at s - x = u_min_rel * s
    n_coarse: int = 480
    n_refine: int = 240
    rtol: float = 1e-11
    atol: float = 1e-14
    fit_window: tuple = (1e-4, 5e-3)   # in units of s, distances from s


@dataclass
class OuterExpansion:
    """Outer corrections f1, f2 on (0, s) with their matching diagnostics.

    f1 solves f1' = f1/x - (3/16) r x (r = (sigma+1)/sigma), its
    homogeneous multiple of x fixed by the matching value f1(s) = -1.
    f2 solves the second-order balance of the first integral,

        f2' = f2/x + (4/3)(1/f0^2 - 1)/x + (29/512) r x,

    starting from the even regular branch f2 ~ (285/512) r x^2; the
    coefficient 29/512 carries the eps^4 term of the far-film series.
    Near s the solution behaves like B/(s-x) - log(s-x) + const with
    B = s/3; ``pole_coef``, ``log_coef`` and ``const_offset`` report the
    fitted values against those targets (const against
    log(2s) - 19/96).
    """

    sigma: float
    s: float
    c1: float
    x: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    pole_coef: float
    log_coef: float
    const_fit: float
    const_offset: float
    fit_residual: float
    _reg2: PchipInterpolator = field(repr=False, default=None)

    @property
    def pole_target(self) -> float:
        return self.s / 3.0  # = (4/9) sqrt(3 sigma/(sigma+1))

    @property
    def const_target(self) -> float:
        return np.log(2.0 * self.s) - 19.0 / 96.0

    def f0_at(self, x):
        return outer_f0(x, self.sigma)

    def f1_at(self, x):
        x = np.asarray(x, dtype=float)
        out = self.c1 * x - (3.0 / 16.0) * _ratio(self.sigma) * x * x
        return out if out.ndim else float(out)

    def reg2_at(self, x):
        """Regular part f2 - B/(s-x) + log(s-x), smooth up to x = s."""
        x = np.asarray(x, dtype=float)
        out = self._reg2(np.clip(x, self.x[0], self.s))
        return out if out.ndim else float(out)

    def f2_at(self, x):
        x = np.asarray(x, dtype=float)
        delta = self.s - x
        if np.any(delta <= 0.0):
            raise DomainError("f2 is defined on x < s")
        out = self.reg2_at(x) + self.pole_target / delta - np.log(delta)
        return out if out.ndim else float(out)


def outer_corrections(sigma, grid_spec: OuterGrid | None = None) -> OuterExpansion:
    """Integrate the first and second outer corrections on (0, s).

    Both ODEs are integrated numerically (the second one in u = s - x,
    halting at u = u_min and continued by its local expansion); the
    homogeneous mode of f1 is fixed by the matching requirement
    f1(s) = -1, and the fitted pole/log/constant structure of f2 near
    s is stored for comparison against the matching rows.
    """
    gs = grid_spec or OuterGrid()
    r = _ratio(sigma)
    s = contact_point(sigma)

    # -- f1: integrate the particular branch, then add the matching multiple of x
    x0 = gs.x_start_rel * s

    def rhs_f1(x, f):
        return f / x - (3.0 / 16.0) * r * x

    sol1 = solve_ivp(
        rhs_f1,
        (x0, s),
        [-(3.0 / 16.0) * r * x0 * x0],
        rtol=gs.rtol,
        atol=gs.atol,
        dense_output=True,
    )
    if not sol1.success:
        raise NumericalError("f1 integration failed: " + sol1.message)
    f1_at_s = float(sol1.y[0, -1])
    c1 = (-1.0 - f1_at_s) / s

    # -- f2 in u = s - x
    u0 = s - x0
    u_min = gs.u_min_rel * s

    def rhs_f2(u, f):
        x = s - u
        f0 = 1.0 - (3.0 / 16.0) * r * x * x
        q = (4.0 / 3.0) * (1.0 / (f0 * f0) - 1.0) / x + (29.0 / 512.0) * r * x
        return -(f[0] / x + q)

    x_coarse = np.linspace(x0, s * (1.0 - 1e-2), gs.n_coarse)
    x_refine = s - np.geomspace(1e-2 * s, u_min, gs.n_refine)
    x_knots = np.unique(np.concatenate([x_coarse, x_refine]))
    sol2 = solve_ivp(
        rhs_f2,
        (u0, u_min),
        [(285.0 / 512.0) * r * x0 * x0],
        t_eval=s - x_knots,   # descending in u = ascending in x
        rtol=gs.rtol,
        atol=gs.atol,
    )
    if not sol2.success:
        raise NumericalError("f2 integration failed: " + sol2.message)
    u_vals = sol2.t
    f2_vals = sol2.y[0]
    x_vals = s - u_vals

    # -- matching fit near s: f2 ~ B/delta - c_log log(delta) + c0 + ...
    lo, hi = gs.fit_window
    mask = (u_vals >= lo * s) & (u_vals <= hi * s)
    delta = u_vals[mask]
    basis = np.column_stack(
        [
            1.0 / delta,
            np.log(delta),
            np.ones_like(delta),
            delta,
            delta * np.log(delta),
            delta * delta,
        ]
    )
    coef, res, *_ = np.linalg.lstsq(basis, f2_vals[mask], rcond=None)
    pole_coef, log_coef, const_fit = float(coef[0]), float(-coef[1]), float(coef[2])
    pred = basis @ coef
    fit_residual = float(np.max(np.abs(pred - f2_vals[mask])))

    pole_target = s / 3.0
    const_target = np.log(2.0 * s) - 19.0 / 96.0
    const_offset = const_fit - const_target

    # regular part, extended smoothly to x = s with the fitted constant
    reg2_vals = f2_vals - pole_target / u_vals + np.log(u_vals)
    x_ext = np.append(x_vals, s)
    reg2_ext = np.append(reg2_vals, const_fit)
    reg2 = PchipInterpolator(x_ext, reg2_ext, extrapolate=True)

    f1_vals = c1 * x_vals - (3.0 / 16.0) * r * x_vals * x_vals
    return OuterExpansion(
        sigma=float(sigma),
        s=s,
        c1=c1,
        x=x_vals,
        f1=f1_vals,
        f2=f2_vals,
        pole_coef=pole_coef,
        log_coef=log_coef,
        const_fit=const_fit,
        const_offset=float(const_offset),
        fit_residual=fit_residual,
        _reg2=reg2,
    )


# --------------------------------------------------------------------------
# inner profiles v0, v1
# --------------------------------------------------------------------------

def _g_tilde(v):
    """(Phi(v) - Phi(1)) / (v-1)^2 for (2, 8); smooth, equals 3 at v = 1."""
    v = np.asarray(v, dtype=float)
    poly = ((((((3 * v + 6) * v + 5) * v + 4) * v + 3) * v + 2) * v + 1)
    return poly / (8.0 * v**8)


@dataclass(frozen=True)
class InnerGrid:
    """Range and resolution of the inner tables."""

    z_min: float = -60.0
    z_max: float = 45.0
    n_left: int = 900        # knots on the algebraic (large v) side
    n_tail: int = 700        # knots on the exponential tail side
    v_join: float = 1.5
    w_floor: float = -28.0   # tail cut: v - 1 = exp(w_floor)
    order: int = 16


@dataclass
class InnerExpansion:
    """Inner profiles v0, v1 of the contact zone, translation-anchored.

    v0 is built by quadrature of the separable inner ODE and inverted
    onto a z-grid; the translation is fixed so that
    v0(z) + k z -> a1 = -1 as z -> -infinity (k the contact slope
    magnitude).  v1 = v1_base + gamma * mode, where mode is the
    normalized translation mode (-v0'/k) and v1_base carries a vanishing
    additive constant in its z -> -infinity expansion; the matching
    constant gamma = C + 1/6 is supplied per eps at evaluation time.
    """

    sigma: float
    k: float
    a1: float
    z: np.ndarray
    v0: np.ndarray
    mu: np.ndarray
    v1_base: np.ndarray
    a1_fit: float
    z_split: float
    _v0_left: PchipInterpolator = field(repr=False, default=None)
    _w_right: PchipInterpolator = field(repr=False, default=None)
    _v1_interp: PchipInterpolator = field(repr=False, default=None)
    _w_slope_end: float = field(repr=False, default=0.0)

    def v0_at(self, z):
        z = np.asarray(z, dtype=float)
        out = np.empty_like(z)
        left = z < self.z[0]
        mid = (z >= self.z[0]) & (z <= self.z_split)
        tail = (z > self.z_split) & (z <= self.z[-1])
        beyond = z > self.z[-1]
        if np.any(left):
            zl = z[left]
            out[left] = -self.k * zl - 1.0 - (2.0 / (3.0 * self.k)) / zl \
                + (2.0 / (3.0 * self.k**2)) / zl**2
        if np.any(mid):
            out[mid] = self._v0_left(z[mid])
        if np.any(tail):
            out[tail] = 1.0 + np.exp(self._w_right(z[tail]))
        if np.any(beyond):
            w_end = self._w_right(self.z[-1])
            out[beyond] = 1.0 + np.exp(w_end + self._w_slope_end * (z[beyond] - self.z[-1]))
        return out if out.ndim else float(out)

    def mu_at(self, z):
        """sqrt(Phi(v0) - Phi(1)) along the orbit (the translation mode, scaled)."""
        v = np.asarray(self.v0_at(z), dtype=float)
        out = (v - 1.0) * np.sqrt(_g_tilde(v))
        return out if out.ndim else float(out)

    def mode_at(self, z):
        """Translation mode normalized to 1 at z -> -infinity."""
        r = _ratio(self.sigma)
        out = np.sqrt(2.0 * r) * np.asarray(self.mu_at(z)) / self.k
        return out if np.ndim(out) else float(out)

    def v1_at(self, z, gamma):
        """First inner correction including the matching constant gamma = C + 1/6."""
        z = np.asarray(z, dtype=float)
        base = np.empty_like(z)
        inside = (z >= self.z[0]) & (z <= self.z[-1])
        left = z < self.z[0]
        beyond = z > self.z[-1]
        if np.any(inside):
            base[inside] = self._v1_interp(z[inside])
        if np.any(left):
            zl = z[left]
            r = _ratio(self.sigma)
            # zero-constant asymptote of the base correction
            base[left] = -(3.0 / 16.0) * r * zl * zl - self.k * zl - np.log(-zl)
        if np.any(beyond):
            base[beyond] = 1.0 / 16.0
        out = base + gamma * np.asarray(self.mode_at(z))
        return out if out.ndim else float(out)


@lru_cache(maxsize=8)
def _build_inner(sigma_key: float, grid_key: tuple) -> InnerExpansion:
    sigma = float(sigma_key)
    gs = InnerGrid(*grid_key) if grid_key else InnerGrid()
    r = _ratio(sigma)
    k = slope_scale(sigma)
    root_2r = np.sqrt(2.0 * r)

    def speed(v):
        # |v0'| as a function of v; equals sqrt(2r (Phi(v) - Phi(1)))
        v = np.asarray(v, dtype=float)
        return root_2r * (v - 1.0) * np.sqrt(_g_tilde(v))

    # anchor so v0(z) + k z -> -1: integrate [1 - k/speed] out to v = inf,
    # in t = 1/v.  The integrand is written through expm1/log1p because
    # 1 - k/speed ~ -2/(3 v^2) would otherwise cancel to noise at large v.
    v_join = gs.v_join
    t_hi = 1.0 / v_join
    t_knots = np.linspace(0.0, t_hi, 400)

    def anchor_integrand(t):
        # e = (8/3)(Phi(1/t) - Phi(1)) - 1, exact two-term form
        e = -4.0 * t * t / 3.0 + t**8 / 3.0
        return -np.expm1(-0.5 * np.log1p(e)) / (t * t)

    anchor = cumulative_panels(anchor_integrand, t_knots, order=gs.order)[-1]
    z_join = (-1.0 - v_join - anchor) / k

    # left (algebraic) side: v from v_join up to v_max
    v_max = max(k * (-gs.z_min) + 8.0, v_join + 5.0)
    v_knots = np.concatenate(
        [
            np.linspace(v_join, 3.0, gs.n_left // 2 + 1),
            np.geomspace(3.0, v_max, gs.n_left // 2 + 1)[1:],
        ]
    )
    z_left = z_join - cumulative_panels(lambda v: 1.0 / speed(v), v_knots, order=gs.order)
    # ascending z: reverse (z decreases as v grows)
    z_left_sorted = z_left[::-1]
    v_left_sorted = v_knots[::-1]

    # tail side: w = log(v - 1) from log(v_join - 1) down to w_floor
    w_knots = np.linspace(np.log(v_join - 1.0), gs.w_floor, gs.n_tail + 1)

    def dz_dw(w):
        return 1.0 / (root_2r * np.sqrt(_g_tilde(1.0 + np.exp(w))))

    z_tail = z_join - cumulative_panels(dz_dw, w_knots, order=gs.order)
    w_slope_end = -root_2r * np.sqrt(_g_tilde(1.0 + np.exp(w_knots[-1])))

    v0_left_interp = PchipInterpolator(z_left_sorted, v_left_sorted)
    w_right_interp = PchipInterpolator(z_tail, w_knots)

    z_all = np.concatenate([z_left_sorted, z_tail[1:]])
    v0_all = np.concatenate([v_left_sorted, 1.0 + np.exp(w_knots[1:])])
    mu_all = (v0_all - 1.0) * np.sqrt(_g_tilde(v0_all))

    # v1 by variation of constants along the orbit: d(v1/mu)/dv =
    # -(3/16)(v-1)(Phi - Phi(1))^(-3/2).  Accumulated from the deep left
    # knot where the base asymptote fixes the integration constant.
    def j_den_left(v):
        v = np.asarray(v, dtype=float)
        return (v - 1.0) ** (-2) * _g_tilde(v) ** (-1.5)

    j_left = cumulative_panels(j_den_left, v_knots, order=gs.order)
    # oriented from v_join upward; J must grow from the deep end downward
    j_left_from_deep = (3.0 / 16.0) * (j_left[-1] - j_left)      # at v_knots
    j_deep = 0.0

    def j_den_tail(w):
        w = np.asarray(w, dtype=float)
        return np.exp(-w) * _g_tilde(1.0 + np.exp(w)) ** (-1.5)

    j_tail_inc = (3.0 / 16.0) * (
        -cumulative_panels(j_den_tail, w_knots, order=gs.order)
    )
    # w decreasing: oriented integral negative, so flip sign for growth
    j_tail = j_left_from_deep[0] + j_tail_inc

    z_start = z_left_sorted[0]
    base_start = (
        -(3.0 / 16.0) * r * z_start * z_start
        - k * z_start
        - np.log(-z_start)
    )
    mu_start = mu_all[0]
    b_const = base_start / mu_start

    j_all = np.concatenate([j_left_from_deep[::-1], j_tail[1:]])
    v1_base_all = mu_all * (b_const + j_all)
    v1_interp = PchipInterpolator(z_all, v1_base_all)

    # diagnostic fit of the additive constant of v0 + k z at large -z
    fit_mask = (z_all >= -40.0) & (z_all <= -15.0)
    zf = z_all[fit_mask]
    resid = v0_all[fit_mask] + k * zf + (2.0 / (3.0 * k)) / zf
    a1_fit = float(np.mean(resid - (2.0 / (3.0 * k**2)) / zf**2))

    return InnerExpansion(
        sigma=sigma,
        k=k,
        a1=-1.0,
        z=z_all,
        v0=v0_all,
        mu=mu_all,
        v1_base=v1_base_all,
        a1_fit=a1_fit,
        z_split=float(z_join),
        _v0_left=v0_left_interp,
        _w_right=w_right_interp,
        _v1_interp=v1_interp,
        _w_slope_end=float(w_slope_end),
    )


def switchback_constant(epsilon: float, sigma: float) -> float:
    """Logarithmic switch-back constant C of the first inner correction."""
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    r = _ratio(sigma)
    return -np.log(epsilon) - 35.0 / 96.0 - np.log(_SQRT3 / 8.0 * np.sqrt(r))


def inner_profiles(sigma, z_range=(-30.0, 30.0), grid_spec=None, epsilon=0.1):
    """Sampled inner profiles (v0, v1) on a z-grid covering z_range.

    v1 includes its eps-dependent matching constant C(eps) + 1/6, the
    logarithmic switch-back.  Returns (z, v0, v1, expansion).
    """
    z_lo, z_hi = float(z_range[0]), float(z_range[1])
    if z_hi - z_lo < 1.0 or z_hi < 20.0:
        raise ValidationError("z_range must extend to at least z = 20")
    inner = _build_inner(round(float(sigma), 12), ())
    z = np.linspace(z_lo, z_hi, 2001)
    gamma = switchback_constant(epsilon, sigma) + 1.0 / 6.0
    return z, inner.v0_at(z), inner.v1_at(z, gamma), inner


# --------------------------------------------------------------------------
# assembled solution and composite
# --------------------------------------------------------------------------

@dataclass
class AsymptoticSolution:
    """All matched-expansion ingredients for one (sigma, epsilon) pair."""

    sigma: float
    epsilon: float
    s: float
    h_inf_coeffs: tuple
    a1: float
    C: float
    outer: OuterExpansion
    inner: InnerExpansion

    @classmethod
    def build(cls, sigma, epsilon, outer_grid=None):
        outer = _build_outer(round(float(sigma), 12), outer_grid)
        inner = _build_inner(round(float(sigma), 12), ())
        return cls(
            sigma=float(sigma),
            epsilon=float(epsilon),
            s=contact_point(sigma),
            h_inf_coeffs=H_INF_COEFFS[:3],
            a1=inner.a1,
            C=switchback_constant(epsilon, sigma),
            outer=outer,
            inner=inner,
        )

    @property
    def gamma(self) -> float:
        return self.C + 1.0 / 6.0

    def composite(self, x):
        """Uniformly valid composite profile at positions x >= 0."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0.0):
            raise DomainError("composite is defined for x >= 0")
        eps, s, sigma = self.epsilon, self.s, self.sigma
        r = _ratio(sigma)
        k = self.inner.k
        z = (x - s) / eps
        v0 = np.asarray(self.inner.v0_at(z), dtype=float)
        v1 = np.asarray(self.inner.v1_at(z, self.gamma), dtype=float)

        inner_only = eps * v0 + eps * eps * v1
        out = np.array(inner_only, copy=True)

        mask = x < s
        if np.any(mask):
            xm, zm = x[mask], z[mask]
            row1 = eps * (v0[mask] + k * zm)
            row2 = eps * eps * (
                v1[mask] + (3.0 / 16.0) * r * zm * zm + k * zm
            )
            f0 = outer_f0(xm, sigma)
            row3 = f0 + eps * (self.outer.f1_at(xm) + 1.0)
            row4 = eps * eps * (
                self.outer.reg2_at(xm)
                + 19.0 / 96.0
                + np.log(_SQRT3 / 8.0 * np.sqrt(r))
            )
            out[mask] = row1 + row2 + row3 + row4
        return out if out.ndim else float(out)


@lru_cache(maxsize=8)
def _build_outer(sigma_key: float, grid_spec=None) -> OuterExpansion:
    return outer_corrections(float(sigma_key), grid_spec)


def composite_solution(x, epsilon, sigma):
    """Composite matched-asymptotic profile at x (scalar or array)."""
    return AsymptoticSolution.build(sigma, epsilon).composite(x)


def composite_layers(epsilon, sigma, d, grid=None) -> TwoLayerProfile:
    """Two-layer reconstruction of the composite profile.

    The composite h is evaluated on a grid refined around the contact
    zone and split into (h1, h2) exactly as for the quadrature profile.
    """
    sol = AsymptoticSolution.build(sigma, epsilon)
    s = sol.s
    if grid is None:
        coarse = np.linspace(0.0, s + 20.0 * epsilon, 1200)
        fine = np.linspace(s - 5.0 * epsilon, s + 5.0 * epsilon, 800)
        grid = np.unique(np.concatenate([coarse, fine]))
    h = np.asarray(sol.composite(grid), dtype=float)
    h_inf = solve_h_infinity(epsilon)
    profile = DropletProfile(
        sigma=float(sigma),
        epsilon=float(epsilon),
        h_infinity=h_inf,
        x=grid,
        h=h,
        contact_estimate=s,
    )
    layers = reconstruct_layers(profile, d)
    # the composite is not an exact stationary state, so do not carry
    # first-integral curvature fields on it
    layers.h1_xx = None
    layers.h2_xx = None
    return layers


# --------------------------------------------------------------------------
# Dirichlet leading order
# --------------------------------------------------------------------------

def dirichlet_leading_order(A, B, L, sigma, m1, m2, n_grid=2001) -> TwoLayerProfile:
    """Leading-order stationary layers under pinned boundary values.

    On the droplet support omega = (L/2 - s, L/2 + s) both interfaces
    are quadratic with curvatures set by the Lagrange multipliers; in
    the ultra-thin exterior they coincide and stay quadratic (constant
    exactly when lambda2 = 0, which reproduces the unpinned structure).
    The support radius follows from the upper-layer mass through the
    printed relation s^2 = 2 sigma (sigma+1) / (lambda2 - (sigma+1) lambda1)^2,
    and (lambda1, lambda2, C1) solve the linear system of the boundary
    value and the two mass constraints.
    """
    if min(L, m1, m2) <= 0:
        raise ValidationError("L, m1, m2 must be positive")
    if B < A:
        raise ValidationError("boundary values must satisfy B >= A")
    r = _ratio(sigma)
    # mass of the cap: m2 = (2/3) kappa s^3 with kappa = sqrt(2 r)/s
    s = np.sqrt(3.0 * m2 / (2.0 * np.sqrt(2.0 * r)))
    if 2.0 * s >= L:
        raise ModelError(f"droplet support 2s = {2 * s:.4g} does not fit in L = {L}")
    kappa = np.sqrt(2.0 * r) / s

    # unknowns (lambda1, lambda2, C1)
    i_omega = -4.0 * s**3 / 3.0                    # int_omega ((x-L/2)^2 - s^2)
    i_outer = L**3 / 12.0 - s * s * L - i_omega    # same integral over the rest
    mat = np.array(
        [
            [sigma + 1.0, -1.0, 0.0],
            [0.0, -0.5 / (sigma + 1.0) * (L * L / 4.0 - s * s), 1.0],
            [i_omega / (2.0 * sigma), -i_omega / (2.0 * sigma) - i_outer / (2.0 * (sigma + 1.0)), L],
        ]
    )
    rhs = np.array([sigma * kappa, A, m1])
    try:
        lam1, lam2, c1 = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise ModelError(f"inconsistent constraint system: {exc}") from exc

    x = np.linspace(0.0, L, int(n_grid))
    q = (x - 0.5 * L) ** 2 - s * s
    inside = np.abs(x - 0.5 * L) < s
    h1 = np.where(inside, 0.5 * (lam1 - lam2) / sigma * q + c1,
                  -0.5 * lam2 / (sigma + 1.0) * q + c1)
    h2 = np.where(inside, -0.5 * lam1 * q + c1,
                  -0.5 * lam2 / (sigma + 1.0) * q + c1)
    profile = TwoLayerProfile(
        x=x,
        h1=h1,
        h2=h2,
        sigma=float(sigma),
        d=float(c1),
        m1=float(m1),
        m2=float(m2),
    )
    profile.lambda1 = float(lam1)
    profile.lambda2 = float(lam2)
    profile.support_radius = float(s)
    profile.c1 = float(c1)
    return profile
