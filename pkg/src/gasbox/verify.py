"""Built-in property sweep: the structural guarantees of the scheme
checked on randomized samples, printable from the command line.

The sample ranges follow the admissible regime the analysis covers:
density and temperature log-uniform in [1e-3, 1e3], velocity components
uniform in [-10, 10].
"""

import numpy as np

from .diagnostics import (
    entropy_balance_residual,
    internal_energy_residual,
    ke_balance_residual,
    shuffle_gap_and_scale,
)
from .fluxes import LambdaVariant, convective_flux, density_jump_sensor, lambda_alt_coeffs
from .grid import build_grid, sbp_residual
from .means import arith_mean, geo_mean, log_mean
from .rhs import apply_boundary_state, assemble_rhs, boundary_node_mask
from .thermo import GasParams, conserved_from_primitives, primitives

__all__ = ["random_states", "random_admissible_field", "run_verification"]


def random_states(rng, n, gas, rho_range=(1e-3, 1e3), temp_range=(1e-3, 1e3), vel_max=10.0):
    """Random admissible primitive states as one batch array."""
    rho = np.exp(rng.uniform(np.log(rho_range[0]), np.log(rho_range[1]), n))
    temp = np.exp(rng.uniform(np.log(temp_range[0]), np.log(temp_range[1]), n))
    vel = tuple(rng.uniform(-vel_max, vel_max, n) for _ in range(3))
    return primitives(rho, vel, rho * gas.R * temp, gas)


def random_admissible_field(rng, grid, gas, rho_range=(1e-3, 1e3), temp_range=(1e-3, 1e3), vel_max=10.0):
    """Random conserved field with positive state and no-slip walls."""
    shape = grid.shape
    rho = np.exp(rng.uniform(np.log(rho_range[0]), np.log(rho_range[1]), shape))
    temp = np.exp(rng.uniform(np.log(temp_range[0]), np.log(temp_range[1]), shape))
    vel = tuple(rng.uniform(-vel_max, vel_max, shape) for _ in range(3))
    u5 = conserved_from_primitives(rho, vel, rho * gas.R * temp, gas)
    return apply_boundary_state(u5, grid)


class _Report:
    def __init__(self):
        self.failures = 0

    def check(self, name, worst, bound, larger_is_worse=True):
        ok = worst <= bound if larger_is_worse else worst >= bound
        status = "ok" if ok else "FAIL"
        rel = "<=" if larger_is_worse else ">="
        print(f"  {name:<52} {status}  (worst {worst:.3e} {rel} {bound:.0e})")
        if not ok:
            self.failures += 1


def run_verification(seed=0, fast=False):
    """Run every randomized property check; returns True when all pass."""
    rng = np.random.default_rng(seed)
    gas = GasParams(gamma=1.4, R=1.0, mu0=0.01, mu1=1e-4, kappa_r=1e-6)
    n_pairs = 10**4 if fast else 10**6
    n_shuffle = 10**4 if fast else 10**5
    rep = _Report()
    print(f"gasbox verification sweep (seed={seed}, pairs={n_pairs})")

    # mean algebra on pairs spanning ratios 1e-6..1e6
    a = np.exp(rng.uniform(np.log(1e-3), np.log(1e3), n_pairs))
    ratio = np.exp(rng.uniform(np.log(1e-6), np.log(1e6), n_pairs))
    b = a * ratio
    am, lm, gm = arith_mean(a, b), log_mean(a, b), geo_mean(a, b)
    rep.check("mean ordering geo <= log <= arith", float(np.max(np.maximum(gm - lm, lm - am) / am)), 1e-15)
    rep.check("reciprocal ordering 1/geo >= 1/log >= 1/arith",
              float(np.max(np.maximum(1 / lm - 1 / gm, 1 / am - 1 / lm) * am)), 1e-15)
    nz = a != b
    half = np.abs(am - lm)[nz] / np.abs(b - a)[nz]
    rep.check("mean-vs-logmean jump ratio bounded by 1/2", float(np.max(half)), 0.5 + 1e-12)
    rep.check("sensor dominates 1/2", float(np.min(density_jump_sensor(a, b, LambdaVariant.FIRST_ORDER))),
              0.5, larger_is_worse=False)
    dominated = np.maximum.reduce([
        np.full(n_pairs, 0.5),
        np.abs(b - a) / (12.0 * am),
        np.abs(np.sqrt(b) - np.sqrt(a)) / (2.0 * (np.sqrt(b) + np.sqrt(a))),
        0.5 * am * np.abs(b - a) / (a * a + a * b + b * b),
        np.abs(b - a) / lm,
    ])
    sensor = density_jump_sensor(a, b, LambdaVariant.FIRST_ORDER)
    rep.check("sensor dominates all alternative jump ratios",
              float(np.max((dominated - sensor) / np.maximum(1.0, sensor))), 1e-14)

    # split-average identity on signed pairs; scale = largest term differenced
    sa = rng.uniform(-1e3, 1e3, n_pairs)
    sb = rng.uniform(-1e3, 1e3, n_pairs)
    ta = rng.uniform(-1e3, 1e3, n_pairs)
    tb = rng.uniform(-1e3, 1e3, n_pairs)
    lhs = 0.5 * (sa * ta + sb * tb)
    rhs = arith_mean(sa, sb) * arith_mean(ta, tb) + 0.25 * (sb - sa) * (tb - ta)
    scale = np.maximum.reduce([np.ones(n_pairs), np.abs(sa * ta), np.abs(sb * tb),
                               np.abs(rhs - 0.25 * (sb - sa) * (tb - ta)),
                               np.abs(0.25 * (sb - sa) * (tb - ta))])
    rep.check("product-average splitting identity", float(np.max(np.abs(lhs - rhs) / scale)), 1e-15)

    # flux consistency at equal states
    states = random_states(rng, n_pairs if fast else 10**4, gas)
    worst = 0.0
    for ax in range(3):
        flux = convective_flux(ax, states, states, gas)
        un = states.vel[ax]
        exact = np.stack([
            states.rho * un,
            states.rho * states.vel[0] * un + (states.p if ax == 0 else 0.0),
            states.rho * states.vel[1] * un + (states.p if ax == 1 else 0.0),
            states.rho * states.vel[2] * un + (states.p if ax == 2 else 0.0),
            (states.p / (gas.gamma - 1.0) + 0.5 * states.rho * states.speed_sq + states.p) * un,
        ])
        scale = np.maximum(1.0, np.abs(exact))
        worst = max(worst, float(np.max(np.abs(flux - exact) / scale)))
    rep.check("two-point flux consistency at equal states", worst, 1e-13)

    # positivity of the rewritten mass-flux coefficients
    left = random_states(rng, n_pairs, gas)
    right = random_states(rng, n_pairs, gas)
    worst_a = worst_c = np.inf
    for variant in LambdaVariant:
        lam_a, lam_c = lambda_alt_coeffs(0, left, right, variant)
        worst_a = min(worst_a, float(np.min(lam_a)))
        worst_c = min(worst_c, float(np.min(lam_c)))
    rep.check("rewritten coefficient (arith form) nonnegative", worst_a, -1e-15, larger_is_worse=False)
    rep.check("rewritten coefficient (geo form) nonnegative", worst_c, -1e-15, larger_is_worse=False)

    # shuffle gaps
    for variant in LambdaVariant:
        worst = np.inf
        for ax in range(3):
            lhs_states = random_states(rng, n_shuffle, gas)
            rhs_states = random_states(rng, n_shuffle, gas)
            gap, scale = shuffle_gap_and_scale(ax, lhs_states, rhs_states, variant, gas)
            worst = min(worst, float(np.min(gap / scale)))
        rep.check(f"face entropy inequality gap ({variant.value})", worst, -1e-12, larger_is_worse=False)

    # field-level identities
    worst_ke = worst_ie = worst_ent = 0.0
    worst_cons = 0.0
    fields = 3 if fast else 10
    for n in (4, 8):
        grid = build_grid((n, n, n))
        for _ in range(fields):
            u5 = random_admissible_field(rng, grid, gas)
            worst_ke = max(worst_ke, ke_balance_residual(u5, grid, gas))
            worst_ie = max(worst_ie, internal_energy_residual(u5, grid, gas))
            resid, production, _, _ = entropy_balance_residual(u5, grid, gas)
            worst_ent = max(worst_ent, resid)
            if production > 1e-11 * max(1.0, abs(production)):
                worst_ent = np.inf
            tend = assemble_rhs(u5, grid, gas)
            vol = grid.cell_volumes
            flux_scale = max(1.0, float(np.sum(vol * np.abs(tend[0]))), float(np.sum(vol * np.abs(tend[4]))))
            worst_cons = max(worst_cons,
                             abs(float(np.sum(vol * tend[0]))) / flux_scale,
                             abs(float(np.sum(vol * tend[4]))) / flux_scale)
            if np.any(tend[1:4][:, boundary_node_mask(grid)] != 0.0):
                worst_cons = np.inf
    rep.check("kinetic-energy balance residual", worst_ke, 1e-11)
    rep.check("internal-energy balance residual", worst_ie, 1e-10)
    rep.check("entropy balance residual / sign", worst_ent, 1e-10)
    rep.check("mass/energy tendency totals / wall momentum rows", worst_cons, 1e-13)

    # summation-by-parts identity
    grid = build_grid((8, 8, 8))
    worst = 0.0
    for _ in range(100 if fast else 1000):
        a = rng.uniform(1.0, 2.0, grid.shape)
        for ax in range(3):
            shape = list(grid.shape)
            shape[ax] += 1
            b = rng.uniform(1.0, 2.0, shape)
            scale = float(np.max(np.abs(a)) * np.max(np.abs(b)) * grid.shape[ax]) * grid.shape[0] ** 2
            worst = max(worst, sbp_residual(a, b, grid, ax) / scale)
    rep.check("summation-by-parts identity residual", worst, 1e-13)

    if rep.failures:
        print(f"verification FAILED: {rep.failures} check(s)")
        return False
    print("verification passed")
    return True
