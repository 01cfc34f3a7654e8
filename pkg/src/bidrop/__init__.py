"""Stationary droplet solutions of two-layer thin liquid films.

Three independent routes to the same stationary states, built to
cross-validate each other:

* :mod:`bidrop.droplet` - exact quadrature of the profile ODE's first
  integral, layer reconstruction, pressures and the mobility matrix;
* :mod:`bidrop.asymptotics` - matched asymptotic expansion with
  logarithmic switch-back terms and the uniformly valid composite;
* :mod:`bidrop.sharp_interface` - closed-form minimizers of the
  vanishing-film limit energy with the Neumann-triangle contact angles;
* :mod:`bidrop.minimizer` - discrete constrained energy minimization,
  symmetric-decreasing rearrangement, and the small-thickness
  convergence study tying the routes together.
"""

from .errors import (
    BidropError,
    DomainError,
    ModelError,
    NumericalError,
    ValidationError,
)
from .potential import PotentialSpec, Phi, W_eps, phi_eps, phi_prime_eps
from .droplet import (
    DropletProfile,
    GridSpec,
    MobilityMatrix,
    PressureField,
    TwoLayerProfile,
    first_integral_slope,
    mobility,
    neumann_stationary,
    pressures,
    reconstruct_layers,
    solve_droplet,
    solve_h_infinity,
)
from .asymptotics import (
    AsymptoticSolution,
    composite_layers,
    composite_solution,
    contact_point,
    dirichlet_leading_order,
    h_infinity_series,
    inner_profiles,
    outer_corrections,
    outer_f0,
)
from .sharp_interface import (
    SharpMinimizer,
    energy_infinity,
    gamma_minimizer,
    neumann_triangle,
    sharp_droplet,
)
from .minimizer import (
    DiscreteState,
    MinimizationReport,
    MinimizeOptions,
    energy_eps,
    energy_gradient,
    gamma_convergence_study,
    initial_state,
    make_state,
    minimize,
    rearrange_decreasing,
    rearranged_pair,
)

__version__ = "0.1.0"
