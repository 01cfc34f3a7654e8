"""Command-line interface: solve, expand, compare, minimize, study, sharp.

Every subcommand reads its parameters from flags, optionally overlaid
on a plain ``key = value`` config file (flags win), and writes CSV data
plus a JSON report into the output directory.  Outputs depend only on
the configuration and the recorded seed, so repeated runs are
byte-identical.  Exit codes: 0 success, 1 numerical failure,
2 invalid input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import asymptotics, droplet, minimizer, sharp_interface
from .errors import DomainError, ModelError, NumericalError, ValidationError
from .output import write_csv, write_json
from .potential import PotentialSpec

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_INVALID = 2


def _read_config(path):
    values = {}
    with open(path, "r", encoding="utf-8") as handle:
        for raw in handle:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValidationError(f"config line without '=': {raw.rstrip()}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _merge_config(args, parser):
    """Overlay config-file values under explicitly passed flags."""
    if not getattr(args, "config", None):
        return args
    file_values = _read_config(args.config)
    explicit = {
        token.split("=", 1)[0].lstrip("-").replace("-", "_")
        for token in sys.argv[1:]
        if token.startswith("--")
    }
    for key, raw in file_values.items():
        if key in explicit or not hasattr(args, key):
            continue
        current = getattr(args, key)
        if isinstance(current, bool):
            setattr(args, key, raw.lower() in ("1", "true", "yes"))
        elif isinstance(current, int) and not isinstance(current, bool):
            setattr(args, key, int(raw))
        elif isinstance(current, float):
            setattr(args, key, float(raw))
        else:
            setattr(args, key, raw)
    return args


def _common_params(args):
    return {
        "seed": args.seed,
        "out_dir": args.out,
    }


def _out(args, name):
    import os

    return os.path.join(args.out, name)


def _positive(args, names):
    for name in names:
        value = getattr(args, name)
        if value is not None and not value > 0:
            raise ValidationError(f"--{name.replace('_', '-')} must be positive, got {value}")


def cmd_solve(args):
    _positive(args, ["eps", "sigma"])
    if not args.eps < 0.5:
        raise ValidationError("--eps must be below 0.5")
    profile = droplet.solve_droplet(args.eps, args.sigma)
    write_csv(_out(args, "droplet.csv"), ["x", "h"], [profile.x, profile.h])

    report = {
        "command": "solve",
        "params": {"eps": args.eps, "sigma": args.sigma, "depth": args.depth,
                   **_common_params(args)},
        "h_infinity": profile.h_infinity,
        "contact_estimate": profile.contact_estimate,
        "apex_height": profile.apex_height,
    }
    if args.depth is not None:
        layers = droplet.reconstruct_layers(profile, args.depth)
        write_csv(
            _out(args, "two_layer.csv"),
            ["x", "h1", "h2"],
            [layers.x, layers.h1, layers.h2],
        )
        field = droplet.pressures(layers, args.eps, args.sigma)
        g1, g2 = field.max_gradient()
        report["pressures"] = {
            "lambda1": field.lambda1,
            "lambda2": field.lambda2,
            "max_dp1_dx": g1,
            "max_dp2_dx": g2,
        }
    write_json(_out(args, "solve_report.json"), report)
    return EXIT_OK


def cmd_expand(args):
    _positive(args, ["eps", "sigma"])
    sol = asymptotics.AsymptoticSolution.build(args.sigma, args.eps)
    outer = sol.outer
    write_csv(
        _out(args, "outer.csv"),
        ["x", "f0", "f1", "f2"],
        [outer.x, outer.f0_at(outer.x), outer.f1, outer.f2],
    )
    z, v0, v1, inner = asymptotics.inner_profiles(
        args.sigma, (-30.0, 30.0), epsilon=args.eps
    )
    write_csv(_out(args, "inner.csv"), ["z", "v0", "v1"], [z, v0, v1])
    write_json(
        _out(args, "expand_report.json"),
        {
            "command": "expand",
            "params": {"eps": args.eps, "sigma": args.sigma, **_common_params(args)},
            "s": sol.s,
            "a1": inner.a1,
            "a1_fit": inner.a1_fit,
            "C": sol.C,
            "matching": {
                "pole_coef": outer.pole_coef,
                "pole_target": outer.pole_target,
                "log_coef": outer.log_coef,
                "const_fit": outer.const_fit,
                "const_offset": outer.const_offset,
                "fit_residual": outer.fit_residual,
            },
        },
    )
    return EXIT_OK


def cmd_compare(args):
    _positive(args, ["sigma", "depth"])
    eps_values = [float(tok) for tok in args.eps_list.split(",") if tok]
    if not eps_values or any(not 0 < e < 0.5 for e in eps_values):
        raise ValidationError("--eps-list must contain values in (0, 0.5)")
    sup_errors = {}
    for eps in eps_values:
        profile = droplet.solve_droplet(eps, args.sigma)
        sol = asymptotics.AsymptoticSolution.build(args.sigma, eps)
        x_max = sol.s + 5.0 * eps
        grid = np.linspace(0.0, x_max, args.grid)
        h_num = profile.height(grid)
        h_comp = sol.composite(grid)
        err = np.abs(h_num - h_comp)
        tag = f"{eps:g}"
        write_csv(
            _out(args, f"compare_eps{tag}.csv"),
            ["x", "h_numeric", "h_composite", "abs_error"],
            [grid, h_num, h_comp, err],
        )
        layers = asymptotics.composite_layers(eps, args.sigma, args.depth)
        write_csv(
            _out(args, f"layers_eps{tag}.csv"),
            ["x", "h1", "h2"],
            [layers.x, layers.h1, layers.h2],
        )
        sup_errors[tag] = float(np.max(err))

    cap = sharp_interface.sharp_droplet(args.sigma)
    xs = np.linspace(0.0, cap.s * 1.4, args.grid)
    h_cap = cap.height(xs)
    h1_sharp = -h_cap / (args.sigma + 1.0) + args.depth
    h2_sharp = args.sigma * h_cap / (args.sigma + 1.0) + args.depth
    write_csv(
        _out(args, "sharp_layers.csv"),
        ["x", "h1", "h2"],
        [xs, h1_sharp, h2_sharp],
    )
    write_json(
        _out(args, "compare_report.json"),
        {
            "command": "compare",
            "params": {
                "eps_list": args.eps_list,
                "sigma": args.sigma,
                "depth": args.depth,
                "grid": args.grid,
                **_common_params(args),
            },
            "sup_errors": sup_errors,
        },
    )
    return EXIT_OK


def cmd_minimize(args):
    _positive(args, ["eps", "sigma", "m1", "m2", "length", "tol"])
    init = minimizer.initial_state(
        args.m1, args.m2, args.length, args.eps, args.sigma, n_nodes=args.grid
    )
    opts = minimizer.MinimizeOptions(tol=args.tol, max_iter=args.max_iter)
    state, report = minimizer.minimize(init, opts)
    write_csv(
        _out(args, "profiles.csv"),
        ["x", "h1", "h2"],
        [state.x, state.h1, state.h2],
    )
    energies = report.energy_history
    stride = max(1, len(energies) // 2000)
    write_json(
        _out(args, "minimize_report.json"),
        {
            "command": "minimize",
            "params": {
                "eps": args.eps,
                "sigma": args.sigma,
                "m1": args.m1,
                "m2": args.m2,
                "length": args.length,
                "grid": args.grid,
                "tol": args.tol,
                **_common_params(args),
            },
            "converged": report.converged,
            "iterations": report.iterations,
            "lambda1": report.lambda1,
            "lambda2": report.lambda2,
            "el_residual": report.el_residual,
            "grad_norm": report.grad_norm,
            "floor_active": report.floor_active,
            "energy_first": energies[0],
            "energy_final": energies[-1],
            "energy_history": energies[::stride],
        },
    )
    return EXIT_OK if report.converged else EXIT_NUMERICAL


def cmd_study(args):
    _positive(args, ["sigma", "m1", "m2", "length", "tol"])
    eps_values = [float(tok) for tok in args.eps_list.split(",") if tok]
    opts = minimizer.MinimizeOptions(tol=args.tol, max_iter=args.max_iter)
    result = minimizer.gamma_convergence_study(
        eps_values, args.m1, args.m2, args.sigma, args.length, options=opts
    )
    header, data = result.as_table()
    write_csv(
        _out(args, "study.csv"),
        header,
        [[row[j] for row in data] for j in range(len(header))],
    )
    write_json(
        _out(args, "study_report.json"),
        {
            "command": "study",
            "params": {
                "eps_list": args.eps_list,
                "sigma": args.sigma,
                "m1": args.m1,
                "m2": args.m2,
                "length": args.length,
                "tol": args.tol,
                **_common_params(args),
            },
            "contact_slope_target": result.contact_slope_target,
            "sharp_energy": result.sharp_energy,
            "gap_decreasing": result.gap_decreasing,
            "slope_error_decreasing": result.slope_error_decreasing,
            "rows_converged": [r.converged for r in result.rows],
        },
    )
    all_converged = all(r.converged for r in result.rows)
    return EXIT_OK if all_converged else EXIT_NUMERICAL


def cmd_sharp(args):
    _positive(args, ["sigma", "m1", "m2", "radius"])
    spec = PotentialSpec(epsilon=0.1)
    mini = sharp_interface.gamma_minimizer(
        args.m1, args.m2, args.sigma, spec.abs_phi_min,
        dimension=args.dimension, R=args.radius,
    )
    xs = np.linspace(-args.radius if args.dimension == 1 else 0.0, args.radius, args.grid)
    write_csv(
        _out(args, "sharp.csv"),
        ["x", "h1", "h2", "zeta"],
        [xs, mini.h1(xs), mini.h2(xs), mini.zeta(xs)],
    )
    g1, g2 = mini.contact_slopes_pair()
    write_json(
        _out(args, "sharp_report.json"),
        {
            "command": "sharp",
            "params": {
                "sigma": args.sigma,
                "m1": args.m1,
                "m2": args.m2,
                "dimension": args.dimension,
                "radius": args.radius,
                **_common_params(args),
            },
            "s": mini.s,
            "alpha": mini.alpha,
            "h_level": mini.h_level,
            "c": mini.c,
            "large_mass": mini.large_mass,
            "cap_mass": mini.cap_mass(),
            "contact_slope_h1": g1,
            "contact_slope_h2": g2,
            "contact_slope_gap": mini.contact_slope,
            "energy": mini.energy(spec.abs_phi_min),
        },
    )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bidrop",
        description="Stationary two-layer thin-film droplets: quadrature, "
        "matched asymptotics, and sharp-interface minimizers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--seed", type=int, default=0, help="seed recorded in reports")
        p.add_argument("--config", default=None, help="key = value config file; flags override")

    p = sub.add_parser("solve", help="droplet profile by exact quadrature")
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--sigma", type=float, default=1.2)
    p.add_argument("--depth", type=float, default=None,
                   help="substrate depth d; adds the two-layer CSV and pressures")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("expand", help="matched-asymptotic expansion tables")
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--sigma", type=float, default=1.2)
    common(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("compare", help="numeric vs composite comparison data")
    p.add_argument("--eps-list", default="0.2,0.05", dest="eps_list")
    p.add_argument("--sigma", type=float, default=1.2)
    p.add_argument("--depth", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=1200)
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("minimize", help="discrete constrained energy minimization")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--m1", type=float, default=1.5)
    p.add_argument("--m2", type=float, default=1.0)
    p.add_argument("--length", type=float, default=3.0)
    p.add_argument("--grid", type=int, default=1024)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=200_000, dest="max_iter")
    common(p)
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("study", help="small-eps convergence study of minimizers")
    p.add_argument("--eps-list", default="0.2,0.1,0.05", dest="eps_list")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--m1", type=float, default=1.5)
    p.add_argument("--m2", type=float, default=1.0)
    p.add_argument("--length", type=float, default=3.0)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iter", type=int, default=200_000, dest="max_iter")
    common(p)
    p.set_defaults(func=cmd_study)

    p = sub.add_parser("sharp", help="closed-form sharp-interface minimizer")
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--m1", type=float, default=1.5)
    p.add_argument("--m2", type=float, default=1.0)
    p.add_argument("--dimension", type=int, choices=(1, 2), default=1)
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=801)
    common(p)
    p.set_defaults(func=cmd_sharp)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args, parser)
        return args.func(args)
    except (ValidationError, DomainError) as exc:
        _emit_error(args, "invalid_input", exc)
        return EXIT_INVALID
    except (NumericalError, ModelError) as exc:
        _emit_error(args, "numerical_failure", exc)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"bidrop: i/o error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _emit_error(args, kind, exc):
    message = str(exc)
    print(f"bidrop: {kind}: {message}", file=sys.stderr)
    try:
        write_json(
            _out(args, "error.json"),
            {"error": kind, "type": type(exc).__name__, "message": message},
        )
    except OSError:
        pass


if __name__ == "__main__":
    sys.exit(main())
