"""Manufactured smooth solution for convergence verification.

A one-dimensional analytic state compatible with the wall conditions is
chosen (velocity vanishes at the walls, density and temperature have zero
wall-normal gradient there), and the forcing that makes it an exact
solution of the governing system is derived symbolically with sympy and
compiled to numpy functions.  The symbolic residual is independent of the
discrete operators, so it serves as an external oracle for the spatial
and temporal convergence studies.

The shapes

    rho = rho0 + a_rho cos(pi x/L) cos(omega t)
    u   =        a_vel sin(pi x/L) sin(omega t)
    T   = T0   + a_T   cos(2 pi x/L) cos(omega t)

additionally make every equation residual an even function of x at the
walls (and the momentum residual zero there), so the half-width wall
cells retain the interior's formal accuracy.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sp

from .thermo import conserved_from_primitives

__all__ = ["MMSWave"]


@dataclass(frozen=True)
class MMSWave:
    """Parameters of the manufactured wave (amplitudes keep rho, T > 0)."""

    rho0: float = 1.0
    rho_amp: float = 0.2
    temp0: float = 1.0
    temp_amp: float = 0.1
    vel_amp: float = 0.2
    omega: float = 2.0 * np.pi
    length: float = 1.0

    def __post_init__(self):
        if abs(self.rho_amp) >= self.rho0 or abs(self.temp_amp) >= self.temp0:
            raise ValueError("amplitudes must keep density and temperature positive")

    def _fields(self, grid, t, funcs):
        x = grid.nodes[0][:, None, None]
        out = []
        for f in funcs:
            val = np.asarray(f(x, t), dtype=float)
            out.append(np.broadcast_to(val, grid.shape).copy())
        return out

    def conserved(self, grid, t, gas):
        """Exact conserved field sampled at the nodes."""
        rho_f, u_f, temp_f = _compiled_state(self, gas)
        rho, u, temp = self._fields(grid, t, (rho_f, u_f, temp_f))
        zero = np.zeros_like(rho)
        return conserved_from_primitives(rho, (u, zero, zero), rho * gas.R * temp, gas)

    def source(self, gas):
        """Forcing callable ``(grid, t) -> (5,) + grid.shape`` for the tendency."""
        funcs = _compiled_source(self, gas)

        def forcing(grid, t):
            rows = self._fields(grid, t, funcs)
            zero = np.zeros(grid.shape)
            return np.stack([rows[0], rows[1], zero, zero, rows[2]])

        return forcing


@lru_cache(maxsize=None)
def _symbolic(ms, gas):
    x, t = sp.symbols("x t", real=True)
    k = sp.pi / ms.length
    rho = ms.rho0 + ms.rho_amp * sp.cos(k * x) * sp.cos(ms.omega * t)
    u = ms.vel_amp * sp.sin(k * x) * sp.sin(ms.omega * t)
    temp = ms.temp0 + ms.temp_amp * sp.cos(2 * k * x) * sp.cos(ms.omega * t)

    gamma = sp.Float(gas.gamma)
    R = sp.Float(gas.R)
    p = rho * R * temp
    energy = p / (gamma - 1) + rho * u ** 2 / 2
    nu = sp.Float(gas.mu0) / rho + sp.Float(gas.mu1) * rho

    def residual(q, conv_flux, extra=0):
        return sp.diff(q, t) + sp.diff(conv_flux, x) - sp.diff(nu * sp.diff(q, x), x) - extra

    s_mass = residual(rho, rho * u)
    s_mom = residual(rho * u, rho * u ** 2 + p)
    s_energy = residual(energy, (energy + p) * u,
                        sp.diff(sp.Float(gas.kappa_r) * sp.diff(temp ** 4, x), x))
    return x, t, rho, u, temp, s_mass, s_mom, s_energy


@lru_cache(maxsize=None)
def _compiled_state(ms, gas):
    x, t, rho, u, temp, *_ = _symbolic(ms, gas)
    return tuple(sp.lambdify((x, t), expr, "numpy") for expr in (rho, u, temp))


@lru_cache(maxsize=None)
def _compiled_source(ms, gas):
    # lambdify straight from the derivative expressions: simplification is
    # expensive on the energy residual and buys nothing numerically
    x, t, _, _, _, s_mass, s_mom, s_energy = _symbolic(ms, gas)
    return tuple(sp.lambdify((x, t), expr, "numpy") for expr in (s_mass, s_mom, s_energy))
