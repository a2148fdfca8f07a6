"""Two-point face fluxes: convective part, diffusion coefficients and
diffusive part.

Every function takes the primitive states on the two sides of a face
(arrays of any matching shape, so the same code serves randomized pair
sweeps and whole face slabs) plus the axis whose velocity component is
normal to the face.  Flux vectors are stacked along a leading component
axis: (mass, x-, y-, z-momentum, energy).

The convective flux is the kinetic-energy/entropy-compatible two-point
flux built from arithmetic means and the logarithmic mean of
beta = rho/(2p).  The diffusive flux applies one coefficient to the
forward differences of all conserved quantities; it splits into the
physical part (coefficient nu = mu0/log-mean(rho) + mu1*mean(rho)) and a
vanishing upwind-type part (coefficient h*lambda) whose size is
controlled by a density-jump sensor.  Two sensors are provided: the
default carries a 1/2 floor (formally first order); the alternative
floorless sensor vanishes with the jump (formally second order).
"""

import enum
from dataclasses import dataclass

import numpy as np

from .means import arith_mean, log_mean

__all__ = [
    "LambdaVariant",
    "DiffusionCoeffs",
    "density_jump_sensor",
    "lambda_coeff",
    "lambda_alt_coeffs",
    "diffusion_coeffs",
    "convective_flux",
    "frak_p",
    "diffusive_flux",
    "split_diffusive_flux",
]


class LambdaVariant(enum.Enum):
    """Artificial-diffusion sensor choice."""

    FIRST_ORDER = "first-order"    # max(1/2, |jump of log rho|)
    SECOND_ORDER = "second-order"  # max(|(mean-logmean)/jump|, |jump of log rho|)


# The floorless sensor needs (mean(rho) - logmean(rho)) / (rho_R - rho_L),
# which cancels catastrophically for small jumps.  For |zeta| below this
# cutoff (zeta = jump / (2 mean)) an odd series in zeta is used instead.
_RATIO_SERIES_CUTOFF = 1.0e-2


def _mean_logmean_jump_ratio(rho_l, rho_r):
    """(arith mean - log mean) / jump for a positive pair; 0 at equal values.

    Expanding both means in zeta = (b - a)/(b + a) gives

        ratio = (zeta/2) * (1/3 + z/5 + z^2/7 + z^3/9)
                         / (1 + z/3 + z^2/5 + z^3/7 + z^4/9),    z = zeta^2,

    accurate to ~1e-15 relative for |zeta| < 1e-2; outside that window the
    direct formula has already lost at most ~4 digits to cancellation.
    The value is bounded by 1/2 in magnitude and has the sign of the jump.
    """
    rho_l = np.asarray(rho_l, dtype=float)
    rho_r = np.asarray(rho_r, dtype=float)
    zeta = (rho_r - rho_l) / (rho_r + rho_l)
    z = zeta * zeta
    num = 1.0 / 3.0 + z * (1.0 / 5.0 + z * (1.0 / 7.0 + z * (1.0 / 9.0)))
    den = 1.0 + z * (1.0 / 3.0 + z * (1.0 / 5.0 + z * (1.0 / 7.0 + z * (1.0 / 9.0))))
    series = 0.5 * zeta * num / den

    d_rho = rho_r - rho_l
    safe = np.where(d_rho == 0.0, 1.0, d_rho)
    direct = (arith_mean(rho_l, rho_r) - log_mean(rho_l, rho_r)) / safe
    out = np.where(np.abs(zeta) < _RATIO_SERIES_CUTOFF, series, direct)
    return np.where(d_rho == 0.0, 0.0, out)


def density_jump_sensor(rho_l, rho_r, variant):
    """Sensor R multiplying |normal velocity| in the diffusion coefficient."""
    rho_l = np.asarray(rho_l, dtype=float)
    rho_r = np.asarray(rho_r, dtype=float)
    dlog = np.abs(np.log(rho_r) - np.log(rho_l))
    if variant is LambdaVariant.FIRST_ORDER:
        return np.maximum(0.5, dlog)
    return np.maximum(np.abs(_mean_logmean_jump_ratio(rho_l, rho_r)), dlog)


def lambda_coeff(axis, left, right, variant):
    """Artificial diffusion coefficient |u_n| R + |jump of u_n| / 4."""
    un_l = left.vel[axis]
    un_r = right.vel[axis]
    sensor = density_jump_sensor(left.rho, right.rho, variant)
    return np.abs(arith_mean(un_l, un_r)) * sensor + 0.25 * np.abs(un_r - un_l)


def lambda_alt_coeffs(axis, left, right, variant):
    """Effective coefficients of the rewritten mass flux, both nonnegative.

    mean(rho u) - lambda * jump(rho) equals
      mean(rho) mean(u) - lambda_a * jump(rho)      and
      geomean(rho) mean(u) - lambda_c * jump(rho);
    the sensor dominates the extra mean-difference ratios, so both
    coefficients stay nonnegative.
    """
    lam = lambda_coeff(axis, left, right, variant)
    un_l = left.vel[axis]
    un_r = right.vel[axis]
    u_bar = arith_mean(un_l, un_r)
    lam_a = lam - 0.25 * (un_r - un_l)
    # (mean - geomean)/jump == (sqrt(b) - sqrt(a)) / (2 (sqrt(b) + sqrt(a)));
    # the term is subtracted: splitting mean(rho) into geomean + difference
    # moves the difference into the coefficient with a minus sign, and the
    # sensor bounds its magnitude either way
    sl = np.sqrt(np.asarray(left.rho, dtype=float))
    sr = np.sqrt(np.asarray(right.rho, dtype=float))
    lam_c = lam_a - u_bar * (sr - sl) / (2.0 * (sr + sl))
    return lam_a, lam_c


@dataclass(frozen=True)
class DiffusionCoeffs:
    """Per-face diffusion coefficients: physical, artificial and combined."""

    nu_face: np.ndarray
    lambda_face: np.ndarray
    tilde_nu: np.ndarray  # nu_face + h * lambda_face
    r_star: np.ndarray    # sensor value actually used


def diffusion_coeffs(axis, left, right, h_axis, variant, gas):
    """All face diffusion coefficients for one pair/slab."""
    rho_log = log_mean(left.rho, right.rho)
    rho_bar = arith_mean(left.rho, right.rho)
    nu = gas.mu0 / rho_log + gas.mu1 * rho_bar
    sensor = density_jump_sensor(left.rho, right.rho, variant)
    un_l = left.vel[axis]
    un_r = right.vel[axis]
    lam = np.abs(arith_mean(un_l, un_r)) * sensor + 0.25 * np.abs(un_r - un_l)
    return DiffusionCoeffs(
        nu_face=np.asarray(nu, dtype=float),
        lambda_face=np.asarray(lam, dtype=float),
        tilde_nu=np.asarray(nu + h_axis * lam, dtype=float),
        r_star=np.asarray(sensor, dtype=float),
    )


def face_pressure(left, right):
    """Face pressure mean(rho) / (2 mean(beta))."""
    return arith_mean(left.rho, right.rho) / (2.0 * arith_mean(left.beta, right.beta))


def convective_flux(axis, left, right, gas):
    """Entropy-compatible convective two-point flux through one face.

    mass      mean(rho u_n)
    momentum  mean(v_c) mean(rho u_n) + p_face on the normal row
    energy    mean(rho u_n) [1/(2(gamma-1) logmean(beta))
                             - mean(|v|^2)/2 + |mean v|^2] + p_face mean(u_n)

    Reduces to the exact analytic flux when both states agree.
    """
    rho_un_mean = arith_mean(left.rho * left.vel[axis], right.rho * right.vel[axis])
    p_face = face_pressure(left, right)
    beta_log = log_mean(left.beta, right.beta)

    vel_bar = [arith_mean(l, r) for l, r in zip(left.vel, right.vel)]
    speed_sq_bar = arith_mean(left.speed_sq, right.speed_sq)
    mean_vel_sq = sum(vb * vb for vb in vel_bar)

    momentum = []
    for c in range(3):
        row = vel_bar[c] * rho_un_mean
        if c == axis:
            row = row + p_face
        momentum.append(row)
    energy = (
        rho_un_mean / (2.0 * (gas.gamma - 1.0) * beta_log)
        - 0.5 * speed_sq_bar * rho_un_mean
        + mean_vel_sq * rho_un_mean
        + p_face * vel_bar[axis]
    )
    return np.stack([rho_un_mean, *momentum, energy])


def frak_p(left, right, h_axis, gas):
    """Pressure-diffusion scalar of the energy flux.

    (1 / (2 logmean(beta))) D+ rho + (mean(rho)/2) D+ (1/beta); direction
    enters only through which pair is handed in.
    """
    beta_log = log_mean(left.beta, right.beta)
    d_rho = (right.rho - left.rho) / h_axis
    d_inv_beta = (1.0 / right.beta - 1.0 / left.beta) / h_axis
    return d_rho / (2.0 * beta_log) + 0.5 * arith_mean(left.rho, right.rho) * d_inv_beta


def _gradient_vector(axis, left, right, h_axis, gas):
    """Gradient stencil of the conserved variables; multiplying it by a
    diffusion coefficient yields the diffusive flux (radiation excluded)."""
    d_rho = (right.rho - left.rho) / h_axis
    rows = [d_rho]
    for ul, ur in zip(left.vel, right.vel):
        rows.append((right.rho * ur - left.rho * ul) / h_axis)
    d_rho_speed_sq = (right.rho * right.speed_sq - left.rho * left.speed_sq) / h_axis
    jump_vel_sq = sum((ur - ul) ** 2 for ul, ur in zip(left.vel, right.vel))
    energy = (
        frak_p(left, right, h_axis, gas) / (gas.gamma - 1.0)
        + 0.5 * d_rho_speed_sq
        - 0.25 * jump_vel_sq * d_rho
    )
    rows.append(energy)
    return np.stack(rows)


def _radiation_row(left, right, h_axis, gas):
    return gas.kappa_r * (right.T ** 4 - left.T ** 4) / h_axis


def diffusive_flux(axis, left, right, coeffs, h_axis, gas):
    """Total diffusive face flux: tilde-nu times the gradient stencil plus
    the radiative temperature term on the energy row."""
    grad = _gradient_vector(axis, left, right, h_axis, gas)
    flux = coeffs.tilde_nu * grad
    if gas.kappa_r != 0.0:
        flux[4] = flux[4] + _radiation_row(left, right, h_axis, gas)
    return flux


def split_diffusive_flux(axis, left, right, coeffs, h_axis, gas):
    """Diffusive flux split into its physical and artificial parts.

    Returns (total, nu_part, lambda_part) where the lambda part is the
    flux evaluated with coefficient h*lambda and no radiation, the nu part
    uses nu and carries the radiation term, and the total is formed as
    their sum (so the decomposition is bitwise by construction).
    """
    grad = _gradient_vector(axis, left, right, h_axis, gas)
    lambda_part = (h_axis * coeffs.lambda_face) * grad
    nu_part = coeffs.nu_face * grad
    if gas.kappa_r != 0.0:
        nu_part[4] = nu_part[4] + _radiation_row(left, right, h_axis, gas)
    return nu_part + lambda_part, nu_part, lambda_part
