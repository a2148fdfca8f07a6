"""Ideal-gas state algebra and entropy quantities.

Conserved fields are arrays (rho, m1, m2, m3, E) stacked along a leading
component axis.  Primitive quantities are kept together with
beta = 1/(2 R T) = rho/(2 p), which appears in every flux formula; it is
computed once here so all downstream formulas share one value.

The entropy machinery uses the specific entropy s = log(p / rho^gamma)
and the scaled entropy function

    U = -rho s / (gamma - 1),

whose gradient with respect to the conserved variables is exactly the
variable vector

    w = (gamma/(gamma-1) - s/(gamma-1) - beta |v|^2,
         2 beta u, 2 beta v, 2 beta w, -2 beta).

The unscaled -rho s differs from U only by the constant positive factor
(gamma - 1), so monotonicity statements transfer either way; the scaled
form is the one for which w . du/dt = dU/dt holds identically.
"""

from dataclasses import dataclass, field
import warnings

import numpy as np

from .means import arith_mean, log_mean

__all__ = [
    "GasParams",
    "PositivityError",
    "PrimitiveFields",
    "EntropyQuantities",
    "primitives",
    "primitives_from_conserved",
    "conserved_from_primitives",
    "specific_entropy",
    "entropy_quantities",
    "entropy_variables",
    "delta_w",
]


class PositivityError(Exception):
    """Nonpositive density, pressure or temperature at some cell.

    Recoverable: the time integrator catches it to reject a step.  Carries
    the offending quantity name, cell index and value for diagnostics.
    """

    def __init__(self, quantity, index, value):
        self.quantity = quantity
        self.index = index
        self.value = value
        super().__init__(f"nonpositive {quantity} = {value:.6g} at cell {index}")


@dataclass(frozen=True)
class GasParams:
    """Physical constants of the gas and its diffusion model.

    gamma must lie in (1, 5/3] (ideal-gas validity window); mu0 is the
    rarefied-gas diffusion coefficient, mu1 the dense-gas one (normally
    mu0 >> mu1), kappa_r the radiative temperature-diffusion coefficient.
    c_v is stored once as R/(gamma-1) so every formula shares the value.
    """

    gamma: float = 1.4
    R: float = 1.0
    mu0: float = 0.0
    mu1: float = 0.0
    kappa_r: float = 0.0
    c_v: float = field(init=False)

    def __post_init__(self):
        if not 1.0 < self.gamma <= 5.0 / 3.0:
            raise ValueError(f"gamma must satisfy 1 < gamma <= 5/3 (ideal-gas validity), got {self.gamma}")
        if self.R <= 0.0:
            raise ValueError("gas constant R must be positive")
        for name in ("mu0", "mu1", "kappa_r"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.mu1 > self.mu0 > 0.0 or (self.mu0 == 0.0 and self.mu1 > 0.0):
            warnings.warn("mu1 exceeds mu0; the diffusion model expects mu0 >> mu1", stacklevel=2)
        object.__setattr__(self, "c_v", self.R / (self.gamma - 1.0))

    @property
    def c_p(self):
        return self.gamma * self.c_v


@dataclass(frozen=True)
class PrimitiveFields:
    """Primitive view of a conserved field: arrays of identical shape."""

    rho: np.ndarray
    vel: tuple  # (u, v, w)
    p: np.ndarray
    T: np.ndarray
    beta: np.ndarray

    @property
    def speed_sq(self):
        u, v, w = self.vel
        return u * u + v * v + w * w


def _first_bad_index(mask):
    return tuple(int(i) for i in np.argwhere(mask)[0])


def primitives_from_conserved(u5, gas):
    """Convert a conserved array (5, ...) to primitive fields.

    Raises :class:`PositivityError` (with the first offending cell) if
    density or pressure is not strictly positive.
    """
    u5 = np.asarray(u5, dtype=float)
    rho = u5[0]
    bad = ~(rho > 0.0)
    if np.any(bad):
        idx = _first_bad_index(bad)
        raise PositivityError("density", idx, float(rho[idx]))
    vel = tuple(u5[c] / rho for c in (1, 2, 3))
    kinetic = 0.5 * rho * (vel[0] ** 2 + vel[1] ** 2 + vel[2] ** 2)
    p = (gas.gamma - 1.0) * (u5[4] - kinetic)
    bad = ~(p > 0.0)
    if np.any(bad):
        idx = _first_bad_index(bad)
        raise PositivityError("pressure", idx, float(p[idx]))
    T = p / (rho * gas.R)
    beta = rho / (2.0 * p)
    return PrimitiveFields(rho=rho, vel=vel, p=p, T=T, beta=beta)


def primitives(rho, vel, p, gas):
    """Build :class:`PrimitiveFields` directly from rho, velocity and pressure."""
    rho = np.asarray(rho, dtype=float)
    vel = tuple(np.broadcast_to(np.asarray(c, dtype=float), rho.shape).copy() for c in vel)
    p = np.asarray(p, dtype=float)
    if np.any(rho <= 0.0):
        raise PositivityError("density", _first_bad_index(rho <= 0.0), float(np.min(rho)))
    if np.any(p <= 0.0):
        raise PositivityError("pressure", _first_bad_index(p <= 0.0), float(np.min(p)))
    return PrimitiveFields(rho=rho, vel=vel, p=p, T=p / (rho * gas.R), beta=rho / (2.0 * p))


def conserved_from_primitives(rho, vel, p, gas):
    """Assemble the conserved array (5, ...) from rho, velocity and pressure."""
    rho = np.asarray(rho, dtype=float)
    u, v, w = (np.asarray(c, dtype=float) for c in vel)
    p = np.asarray(p, dtype=float)
    energy = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v + w * w)
    return np.stack([rho, rho * u, rho * v, rho * w, energy])


def specific_entropy(prim, gas):
    """s = log(p / rho^gamma)."""
    return np.log(prim.p) - gas.gamma * np.log(prim.rho)


def entropy_variables(prim, gas):
    """Entropy-variable vector w (5, ...) in the beta scaling."""
    s = specific_entropy(prim, gas)
    gm1 = gas.gamma - 1.0
    u, v, w = prim.vel
    w1 = gas.gamma / gm1 - s / gm1 - prim.beta * prim.speed_sq
    return np.stack([w1, 2.0 * prim.beta * u, 2.0 * prim.beta * v, 2.0 * prim.beta * w, -2.0 * prim.beta])


@dataclass(frozen=True)
class EntropyQuantities:
    """Specific entropy, entropy function/flux, variables and potentials."""

    s: np.ndarray
    U: np.ndarray
    F: tuple
    w: np.ndarray
    psi: tuple


def entropy_quantities(prim, gas):
    """All entropy quantities of a primitive field at once.

    U = -rho s/(gamma-1) and F = -m s/(gamma-1) form the entropy pair for
    the variable vector w; the potentials are the momentum components.
    """
    s = specific_entropy(prim, gas)
    gm1 = gas.gamma - 1.0
    U = -prim.rho * s / gm1
    momenta = tuple(prim.rho * c for c in prim.vel)
    F = tuple(-m * s / gm1 for m in momenta)
    return EntropyQuantities(s=s, U=U, F=F, w=entropy_variables(prim, gas), psi=momenta)


def delta_w(left, right, gas):
    """Jump of the entropy variables across a face, built from face means.

    Equals entropy_variables(right) - entropy_variables(left) identically
    (the log means turn the entropy-log jumps into algebraic quotients);
    this mean form is the one whose contraction with the fluxes telescopes
    in the entropy estimate.
    """
    gm1 = gas.gamma - 1.0
    d_rho = right.rho - left.rho
    d_beta = right.beta - left.beta
    rho_log = log_mean(left.rho, right.rho)
    beta_log = log_mean(left.beta, right.beta)
    beta_bar = arith_mean(left.beta, right.beta)

    speed_sq_bar = arith_mean(left.speed_sq, right.speed_sq)
    w1 = d_rho / rho_log + (1.0 / (gm1 * beta_log) - speed_sq_bar) * d_beta
    momentum_rows = []
    for ul, ur in zip(left.vel, right.vel):
        u_bar = arith_mean(ul, ur)
        w1 = w1 - 2.0 * u_bar * beta_bar * (ur - ul)
        momentum_rows.append(2.0 * beta_bar * (ur - ul) + 2.0 * u_bar * d_beta)
    return np.stack([w1, *momentum_rows, -2.0 * d_beta])
