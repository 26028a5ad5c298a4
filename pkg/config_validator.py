# Copyright Polymorph Corporation (2026)

"""
Run configuration validation for mie-riemann.

Each validator returns (value, warning or None). Hard errors raise ValueError
with guidance on how to fix the value; soft warnings are returned so the CLI
can print them to stderr and carry on.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from riemann import MAX_SUBSTEPS

# Above these the run still works but is unusual enough to mention
CFL_WARNING = 0.5
SUBSTEP_WARNING = 1024
CELLS_WARNING = 50


@dataclass
class RunConfig:
    """Everything a CLI command needs, after merging flags over file and env defaults."""
    command: str
    problem: Optional[str] = None
    config_path: Optional[str] = None
    cells: Optional[int] = None
    cfl: float = 0.4
    tol: float = 1e-8
    substeps: int = 1
    hugoniot_tol: float = 1e-8
    gauges: Optional[List[float]] = None
    snapshots: List[float] = field(default_factory=list)
    time: Optional[float] = None
    out: str = './out'
    json: bool = False
    positive_phase: bool = False


def _number(value: Any, name: str, cast=float):
    try:
        number = cast(value)
    except (TypeError, ValueError):
        raise ValueError(
            f"{name} must be a number (got {value!r}).\n"
            f"Pass it on the command line, e.g. --{name.replace('_', '-')} ..., "
            "or set it in the JSON defaults file."
        )
    if cast is float and not math.isfinite(number):
        raise ValueError(f"{name} must be finite (got {value!r}).")
    return number


def validate_cells(cells):
    """
    Validate the cell count.

    Args:
        cells: Requested number of cells (or None for the problem default)

    Returns:
        tuple: (cells or None, warning_message or None)

    Raises:
        ValueError: fewer than 3 cells
    """
    if cells is None:
        return None, None
    if isinstance(cells, float) and not cells.is_integer():
        raise ValueError(f"cells must be a whole number (got {cells!r}).")
    cells = _number(cells, 'cells', int)
    if cells < 3:
        raise ValueError(
            f"cells must be at least 3 (got {cells}).\n"
            "The cut-cell scheme needs a cell on each side of the interface cell."
        )
    if cells < CELLS_WARNING:
        return cells, f"WARNING: only {cells} cells; wave positions will be smeared over a large fraction of the domain."
    return cells, None


def validate_cfl(cfl):
    """
    Validate the Courant number.

    Returns:
        tuple: (cfl, warning_message or None)

    Raises:
        ValueError: cfl outside (0, 1]
    """
    cfl = _number(cfl, 'cfl')
    if not 0 < cfl <= 1:
        raise ValueError(
            f"cfl must lie in (0, 1] (got {cfl}).\n"
            "The explicit update is unstable above 1; 0.4 is the default."
        )
    if cfl > CFL_WARNING:
        return cfl, f"WARNING: cfl={cfl} is above {CFL_WARNING}; the interface may outrun its control volume."
    return cfl, None


def validate_tolerance(tol, name='tol'):
    """
    Validate a relative tolerance.

    Returns:
        tuple: (tol, warning_message or None)

    Raises:
        ValueError: tolerance not positive
    """
    tol = _number(tol, name)
    if tol <= 0:
        raise ValueError(
            f"{name} must be positive (got {tol}).\n"
            "Typical values are 1e-8 for the outer iteration and the Hugoniot solve."
        )
    if tol >= 1e-2:
        return tol, f"WARNING: {name}={tol} is loose; star states will be inaccurate."
    return tol, None


def validate_substeps(substeps):
    """
    Validate the number of RK4 steps per rarefaction evaluation.

    Returns:
        tuple: (substeps, warning_message or None)

    Raises:
        ValueError: fewer than one step or more than MAX_SUBSTEPS
    """
    if isinstance(substeps, float) and not substeps.is_integer():
        raise ValueError(f"substeps must be a whole number (got {substeps!r}).")
    substeps = _number(substeps, 'substeps', int)
    if substeps < 1:
        raise ValueError(f"substeps must be at least 1 (got {substeps}).")
    if substeps > MAX_SUBSTEPS:
        raise ValueError(f"substeps must not exceed {MAX_SUBSTEPS} (got {substeps}).")
    if substeps > SUBSTEP_WARNING:
        return substeps, f"WARNING: substeps={substeps} exceeds {SUBSTEP_WARNING}; solves will be slow."
    return substeps, None


def parse_float_list(text, name='list'):
    """
    Parse a comma-separated list of numbers such as "0.1,0.2".

    Returns:
        list: sorted, de-duplicated floats (empty for None or "")

    Raises:
        ValueError: empty item or non-numeric item
    """
    if text is None:
        return []
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        text = str(text).strip()
        if not text:
            return []
        items = text.split(',')
    values = []
    for item in items:
        if isinstance(item, str) and not item.strip():
            raise ValueError(f"{name}: empty item in {text!r}; use e.g. 0.1,0.2")
        try:
            value = float(item)
        except (TypeError, ValueError):
            raise ValueError(f"{name}: {item!r} is not a number; use e.g. 0.1,0.2")
        if not math.isfinite(value):
            raise ValueError(f"{name}: {item!r} is not finite")
        values.append(value)
    return sorted(set(values))


def build_run_config(command: str, flags: Dict[str, Any], defaults: Dict[str, Any]) -> Tuple[RunConfig, List[str]]:
    """
    Merge command-line flags over the loaded defaults and validate the result.

    Args:
        command: Subcommand name
        flags: Parsed flag values; None means "not given"
        defaults: Defaults from load_config (JSON file over environment)

    Returns:
        tuple: (RunConfig, list of warning messages)

    Raises:
        ValueError: any field fails validation
    """
    def pick(key):
        value = flags.get(key)
        return defaults.get(key) if value is None else value

    warnings = []

    def take(result):
        value, warning = result
        if warning:
            warnings.append(warning)
        return value

    time = flags.get('time')
    if time is not None:
        time = _number(time, 'time')
        if time < 0:
            raise ValueError(f"time must be non-negative (got {time}).")

    gauges = flags.get('gauges')
    config = RunConfig(
        command=command,
        problem=flags.get('problem'),
        config_path=flags.get('config'),
        cells=take(validate_cells(pick('cells'))),
        cfl=take(validate_cfl(pick('cfl'))),
        tol=take(validate_tolerance(pick('tol'))),
        substeps=take(validate_substeps(pick('substeps'))),
        hugoniot_tol=take(validate_tolerance(pick('hugoniot_tol'), 'hugoniot_tol')),
        gauges=parse_float_list(gauges, 'gauges') if gauges is not None else None,
        snapshots=parse_float_list(flags.get('snapshots'), 'snapshots'),
        time=time,
        out=str(pick('out') or './out'),
        json=bool(flags.get('json')),
        positive_phase=bool(flags.get('positive_phase')),
    )
    if config.snapshots and config.snapshots[0] < 0:
        raise ValueError(f"snapshots must be non-negative (got {config.snapshots[0]}).")
    return config, warnings
