"""Shared batch-run driver used by the CLI, the convergence studies and
the acceptance tests."""

from dataclasses import dataclass, field

import numpy as np

from .diagnostics import totals
from .grid import build_grid
from .initial import initial_condition
from .mms import MMSWave
from .timestep import StepController

__all__ = ["RunResult", "mms_from_initial", "simulate"]

_MMS_RENAMES = {"rho": "rho0", "temperature": "temp0"}
_MMS_KEYS = {"rho0", "temp0", "rho_amp", "temp_amp", "vel_amp", "omega"}


def mms_from_initial(initial_params):
    """Build the manufactured wave matching an [initial] parameter block."""
    kwargs = {}
    for key, value in initial_params.items():
        if key == "preset" or value is None:
            continue
        name = _MMS_RENAMES.get(key, key)
        if name in _MMS_KEYS:
            kwargs[name] = value
    return MMSWave(**kwargs)


@dataclass
class RunResult:
    grid: object
    state: np.ndarray
    t: float
    steps: int
    records: list = field(default_factory=list)
    history: list = field(default_factory=list)
    rejections: int = 0


def simulate(cfg, n_override=None, collect_history=False, record_cadence=None):
    """Advance a configured run to t_end.

    ``n_override`` replaces the grid resolution (used by grid sweeps);
    with ``collect_history`` the conserved field is stored at every
    diagnostics instant for the a priori norm report.
    """
    grid = build_grid(n_override if n_override is not None else cfg.grid_n, cfg.extent)
    gas = cfg.gas
    params = {k: v for k, v in cfg.initial.items() if k != "preset"}
    preset = cfg.initial["preset"]
    u = initial_condition(preset, grid, gas, **params)

    source = None
    if preset == "mms_wave":
        source = mms_from_initial(cfg.initial).source(gas)

    cadence = record_cadence if record_cadence is not None else cfg.cadence
    controller = StepController(grid, gas, cfg.solver, source=source)
    result = RunResult(grid=grid, state=u, t=0.0, steps=0)
    result.records.append(totals(u, grid, gas, t=0.0))
    if collect_history:
        result.history.append((0.0, u.copy()))

    def on_step(u_new, t_new, dt_used):
        result.steps += 1
        if result.steps % cadence == 0:
            result.records.append(totals(u_new, grid, gas, t=t_new, dt=dt_used))
            if collect_history:
                result.history.append((t_new, u_new.copy()))

    u, t = controller.advance(u, 0.0, cfg.t_end, on_step=on_step)
    if result.steps % cadence != 0:
        result.records.append(totals(u, grid, gas, t=t))
        if collect_history:
            result.history.append((t, u.copy()))
    result.state = u
    result.t = t
    result.rejections = controller.rejections
    return result
