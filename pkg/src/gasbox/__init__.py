"""gasbox: entropy-dissipative finite-volume solver for a mass-diffusive
compressible gas in a closed box with no-slip adiabatic walls."""

from .config import ConfigError, RunConfig, parse_config
from .diagnostics import DiagnosticsRecord, totals
from .fluxes import LambdaVariant
from .grid import Grid, build_grid
from .initial import initial_condition
from .mms import MMSWave
from .rhs import apply_boundary_state, assemble_rhs
from .thermo import GasParams, PositivityError, primitives_from_conserved
from .timestep import RunAbort, SolverParams, StepController, ssprk3_step, stable_dt

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "DiagnosticsRecord",
    "totals",
    "LambdaVariant",
    "Grid",
    "build_grid",
    "initial_condition",
    "MMSWave",
    "apply_boundary_state",
    "assemble_rhs",
    "GasParams",
    "PositivityError",
    "primitives_from_conserved",
    "RunAbort",
    "SolverParams",
    "StepController",
    "ssprk3_step",
    "stable_dt",
    "__version__",
]
