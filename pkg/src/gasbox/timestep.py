"""Explicit time advancement: CFL-limited step size, SSP three-stage
Runge-Kutta, and positivity-based step rejection.

The spatial scheme is advanced with the optimal three-stage, third-order
strong-stability-preserving Runge-Kutta method (a convex combination of
forward-Euler substeps), written in increment form

    u1     = u + dt k1,                 k1 = L(u,  t)
    u2     = u + dt (k1 + k2) / 4,      k2 = L(u1, t + dt)
    u_next = u + dt (k1 + k2 + 4 k3)/6, k3 = L(u2, t + dt/2).

A positivity fault in any stage (or in the final state) rejects the step;
the controller retries with dt/2 up to a bounded number of times and
aborts the run if that fails.
"""

from dataclasses import dataclass, field

import numpy as np

from .fluxes import LambdaVariant, diffusion_coeffs
from .rhs import assemble_rhs, face_states
from .thermo import PositivityError, primitives_from_conserved

__all__ = [
    "SolverParams",
    "RunAbort",
    "stable_dt",
    "ssprk3_step",
    "StepController",
]


@dataclass
class SolverParams:
    """Numerical controls of a run."""

    cfl: float = 0.5
    lambda_variant: LambdaVariant = LambdaVariant.FIRST_ORDER
    dt_min: float = 1.0e-12
    max_rejects: int = 12

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError("cfl must lie in (0, 1]")
        if self.dt_min <= 0.0:
            raise ValueError("dt_min must be positive")
        if self.max_rejects < 0:
            raise ValueError("max_rejects must be nonnegative")


class RunAbort(Exception):
    """Unrecoverable failure; carries the last good state for a dump."""

    def __init__(self, message, t, state):
        self.t = t
        self.state = state
        super().__init__(message)


def stable_dt(u5, grid, gas, params):
    """Largest stable explicit step, scaled by the CFL number.

    Convective limit h/(|v_n| + c) per axis with c = sqrt(gamma R T);
    diffusive limit h^2/(2 dim D) with D the largest of the combined face
    diffusion coefficients and the radiative temperature diffusivity
    4 kappa_r T^3 / (c_v rho).
    """
    prim = primitives_from_conserved(np.asarray(u5, dtype=float), gas)
    sound = np.sqrt(gas.gamma * gas.R * prim.T)
    dim = grid.ndim_active

    dt_conv = np.inf
    diff_max = 0.0
    h_min = np.inf
    for ax in grid.active_axes:
        h = grid.spacing[ax]
        h_min = min(h_min, h)
        wave = np.max(np.abs(prim.vel[ax]) + sound)
        dt_conv = min(dt_conv, h / wave)
        left, right = face_states(prim, ax)
        coeffs = diffusion_coeffs(ax, left, right, h, params.lambda_variant, gas)
        if coeffs.tilde_nu.size:
            diff_max = max(diff_max, float(np.max(coeffs.tilde_nu)))
    if gas.kappa_r > 0.0:
        rad = 4.0 * gas.kappa_r * prim.T ** 3 / (gas.c_v * prim.rho)
        diff_max = max(diff_max, float(np.max(rad)))

    dt = dt_conv
    if diff_max > 0.0:
        dt = min(dt, h_min * h_min / (2.0 * dim * diff_max))
    return params.cfl * dt


def ssprk3_step(u, dt, t, rhs):
    """One SSP-RK3 step of du/dt = rhs(u, t); pure function of the inputs."""
    k1 = rhs(u, t)
    u1 = u + dt * k1
    k2 = rhs(u1, t + dt)
    u2 = u + (0.25 * dt) * (k1 + k2)
    k3 = rhs(u2, t + 0.5 * dt)
    return u + dt * ((1.0 / 6.0) * (k1 + k2) + (2.0 / 3.0) * k3)


class StepController:
    """Owns the state between steps; rejects and halves on positivity faults."""

    def __init__(self, grid, gas, params, source=None):
        self.grid = grid
        self.gas = gas
        self.params = params
        self.source = source
        self.rejections = 0

    def _rhs(self, u, t):
        return assemble_rhs(u, self.grid, self.gas, self.params.lambda_variant,
                            source=self.source, t=t)

    def attempt_step(self, u, t, dt):
        """Advance one step, halving dt on positivity faults.

        Returns (u_new, dt_used).  Raises :class:`RunAbort` when the step
        cannot be completed within the rejection budget.
        """
        for _ in range(self.params.max_rejects + 1):
            try:
                u_new = ssprk3_step(u, dt, t, self._rhs)
                primitives_from_conserved(u_new, self.gas)  # validate final state
                return u_new, dt
            except PositivityError:
                self.rejections += 1
                dt *= 0.5
                if dt < self.params.dt_min:
                    break
        raise RunAbort(f"positivity could not be restored at t = {t:.6g}", t, u)

    def advance(self, u, t, t_end, on_step=None, max_steps=None, fixed_dt=None):
        """Run to t_end; ``on_step(u, t, dt)`` fires after each accepted step."""
        steps = 0
        while t < t_end - 1e-14 * max(1.0, abs(t_end)):
            dt = fixed_dt if fixed_dt is not None else stable_dt(u, self.grid, self.gas, self.params)
            dt = min(dt, t_end - t)
            u, dt_used = self.attempt_step(u, t, dt)
            t += dt_used
            steps += 1
            if on_step is not None:
                on_step(u, t, dt_used)
            if max_steps is not None and steps >= max_steps:
                break
        return u, t
