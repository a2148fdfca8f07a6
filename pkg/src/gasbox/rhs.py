"""Semi-discrete tendency assembly with the closed-box wall closures.

The update for every node is

    du/dt = - sum over active axes of  (F_{+} - F_{-}) / width,

where F are total face fluxes (convective minus diffusive) on the faces
of the node's control volume.  Wall closures:

* wall faces carry zero mass and energy flux, both convective (no-slip
  kills the transport) and diffusive (homogeneous Neumann for density and
  temperature);
* momentum rows of every wall node are frozen (tendency forced to exact
  zero), which is the flux-mirroring convention in disguise: with zero
  initial wall momentum the no-slip state persists for all time;
* fluxes tangential to a wall are computed normally.

Fields must be admissible on entry: positive density and pressure
everywhere, zero momentum on wall nodes.
"""

import numpy as np

from .fluxes import LambdaVariant, convective_flux, diffusion_coeffs, split_diffusive_flux
from .thermo import PrimitiveFields, primitives_from_conserved

__all__ = [
    "boundary_node_mask",
    "apply_boundary_state",
    "face_states",
    "face_flux_parts",
    "assemble_rhs",
]


def boundary_node_mask(grid):
    """Boolean mask of wall nodes (first/last index along active axes)."""
    mask = np.zeros(grid.shape, dtype=bool)
    for ax in grid.active_axes:
        idx = [slice(None)] * 3
        idx[ax] = 0
        mask[tuple(idx)] = True
        idx[ax] = -1
        mask[tuple(idx)] = True
    return mask


def apply_boundary_state(u5, grid):
    """Return a copy with momentum zeroed on all wall nodes; rho, E untouched."""
    out = np.array(u5, dtype=float, copy=True)
    mask = boundary_node_mask(grid)
    out[1:4, mask] = 0.0
    return out


def _slab(a, axis, lo, hi):
    index = [slice(None)] * a.ndim
    index[axis] = slice(lo, hi)
    return a[tuple(index)]


def face_states(prim, axis):
    """Left/right primitive views on the interior faces along ``axis``."""
    def cut(a, lo, hi):
        return _slab(a, axis, lo, hi)

    left = PrimitiveFields(
        rho=cut(prim.rho, None, -1),
        vel=tuple(cut(c, None, -1) for c in prim.vel),
        p=cut(prim.p, None, -1),
        T=cut(prim.T, None, -1),
        beta=cut(prim.beta, None, -1),
    )
    right = PrimitiveFields(
        rho=cut(prim.rho, 1, None),
        vel=tuple(cut(c, 1, None) for c in prim.vel),
        p=cut(prim.p, 1, None),
        T=cut(prim.T, 1, None),
        beta=cut(prim.beta, 1, None),
    )
    return left, right


def face_flux_parts(axis, prim, grid, gas, variant):
    """Interior-face fluxes along one axis, split for the diagnostics.

    Returns (convective, diffusive_nu, diffusive_lambda, coeffs); the total
    face flux is convective - (diffusive_nu + diffusive_lambda).
    """
    left, right = face_states(prim, axis)
    h = grid.spacing[axis]
    conv = convective_flux(axis, left, right, gas)
    coeffs = diffusion_coeffs(axis, left, right, h, variant, gas)
    _, nu_part, lambda_part = split_diffusive_flux(axis, left, right, coeffs, h, gas)
    return conv, nu_part, lambda_part, coeffs


def _flux_divergence(total_face, grid, axis):
    """(F_{+} - F_{-}) / width per node, wall faces extended with zeros."""
    ax = axis + 1  # leading component axis
    shape = list(total_face.shape)
    shape[ax] += 2
    ext = np.zeros(shape, dtype=float)
    _slab(ext, ax, 1, -1)[...] = total_face
    return np.diff(ext, axis=ax) / grid.width_along(axis)


def assemble_rhs(u5, grid, gas, variant=LambdaVariant.FIRST_ORDER, source=None, t=0.0):
    """Tendency du/dt of the full scheme on an admissible field.

    Raises :class:`~gasbox.thermo.PositivityError` if density or pressure
    is nonpositive anywhere (checked once, on entry).  ``source``, if
    given, is called as ``source(grid, t)`` and added before the wall
    momentum rows are frozen.
    """
    u5 = np.asarray(u5, dtype=float)
    prim = primitives_from_conserved(u5, gas)
    tend = np.zeros_like(u5)
    for ax in grid.active_axes:
        conv, nu_part, lambda_part, _ = face_flux_parts(ax, prim, grid, gas, variant)
        total = conv - (nu_part + lambda_part)
        tend -= _flux_divergence(total, grid, ax)
    if source is not None:
        tend = tend + source(grid, t)
    tend[1:4, boundary_node_mask(grid)] = 0.0
    return tend
