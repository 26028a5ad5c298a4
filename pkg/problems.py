# Copyright Polymorph Corporation (2026)

"""
Benchmark problems and blast-wave diagnostics.

Planar shock tubes on [0, 1] with the interface at 0.5, and spherically
symmetric charges (reflective centre, outflow at the outer radius). Problems
round-trip through a JSON record mirroring the ProblemSpec field names.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from eos import BUILTIN_EOS, EosError, EosModel, eos_from_dict, eos_to_dict
from flow1d import (
    Boundary,
    Geometry,
    GaugeRecord,
    Snapshot,
    run_simulation,
)
from riemann import FluidState, StarState, VacuumError, check_vacuum, validate_state

logger = logging.getLogger(__name__)

ARRIVAL_THRESHOLD = 1e-3
REFERENCE_CELLS = 10000
PLANAR_CELLS = 400
SPHERICAL_CELLS = 4000

__all__ = [
    'GaugeRecord', 'ProblemSpec', 'ShockMetrics', 'UnknownProblemError', 'ProblemConfigError',
    'BUILTIN_PROBLEMS', 'builtin_problem', 'problem_to_dict', 'problem_from_dict',
    'load_problem', 'export_problem', 'validate_problem', 'shock_metrics', 'wave_positions',
    'reference_profile',
]


class UnknownProblemError(KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ''


class ProblemConfigError(ValueError):
    pass


@dataclass
class ProblemSpec:
    """Geometry, materials, initial data and run defaults of one problem.

    Fluid "minus" lies below the interface (left, or inside the charge),
    fluid "plus" above it. interface_pos=None describes a single-medium run
    filled with fluid minus.
    """
    name: str
    geometry: Geometry
    domain: Tuple[float, float]
    interface_pos: Optional[float]
    eos_minus: EosModel
    state_minus: FluidState
    eos_plus: Optional[EosModel]
    state_plus: Optional[FluidState]
    t_end: float
    p_ambient: float
    bc_left: Boundary = Boundary.OUTFLOW
    bc_right: Boundary = Boundary.OUTFLOW
    cells: int = PLANAR_CELLS
    gauges: List[float] = field(default_factory=list)
    description: str = ''


@dataclass
class ShockMetrics:
    peak_overpressure: float
    impulse: float
    arrival_time: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'peak_overpressure': self.peak_overpressure,
            'impulse': self.impulse,
            'arrival_time': self.arrival_time,
        }


# Builtins

def _tube(name: str, eos_l: str, left: Tuple[float, float, float], eos_r: str,
          right: Tuple[float, float, float], t_end: float, description: str) -> ProblemSpec:
    return ProblemSpec(
        name=name,
        geometry=Geometry.PLANAR,
        domain=(0.0, 1.0),
        interface_pos=0.5,
        eos_minus=BUILTIN_EOS[eos_l],
        state_minus=FluidState(*left),
        eos_plus=BUILTIN_EOS[eos_r],
        state_plus=FluidState(*right),
        t_end=t_end,
        p_ambient=right[2],
        cells=PLANAR_CELLS,
        gauges=[0.6],
        description=description,
    )


def _charge(name: str, eos_in: str, inner: Tuple[float, float, float], eos_out: str,
            outer: Tuple[float, float, float], radius: float, extent: float, t_end: float,
            gauges: List[float], description: str) -> ProblemSpec:
    return ProblemSpec(
        name=name,
        geometry=Geometry.SPHERICAL,
        domain=(0.0, extent),
        interface_pos=radius,
        eos_minus=BUILTIN_EOS[eos_in],
        state_minus=FluidState(*inner),
        eos_plus=BUILTIN_EOS[eos_out],
        state_plus=FluidState(*outer),
        t_end=t_end,
        p_ambient=outer[2],
        bc_left=Boundary.REFLECTIVE,
        bc_right=Boundary.OUTFLOW,
        cells=SPHERICAL_CELLS,
        gauges=gauges,
        description=description,
    )


BUILTIN_PROBLEMS: Dict[str, Callable[[], ProblemSpec]] = {
    'sod': lambda: _tube(
        'sod', 'ideal_air', (1.0, 0.0, 1.0), 'ideal_air', (0.125, 0.0, 0.1), 0.2,
        'Sod shock tube, ideal gas 1.4'),
    'shyue': lambda: _tube(
        'shyue', 'jwl_shyue', (1700.0, 0.0, 1e12), 'jwl_shyue', (1000.0, 0.0, 5e10), 1.2e-5,
        'JWL shock tube'),
    'saurel': lambda: _tube(
        'saurel', 'cochran_chan_saurel', (1134.0, 1000.0, 2e10), 'cochran_chan_saurel',
        (500.0, 1000.0, 2e10), 4e-5,
        'Density discontinuity advected in liquid nitromethane (Cochran-Chan)'),
    'gas_water_sg': lambda: _tube(
        'gas_water_sg', 'ideal_gas_2', (1630.0, 0.0, 7e9), 'stiffened_water', (1000.0, 0.0, 1e5),
        8e-5, 'Ideal gas 2.0 against stiffened-gas water'),
    'gas_water_poly': lambda: _tube(
        'gas_water_poly', 'ideal_gas_2', (1630.0, 0.0, 7e9), 'polynomial_water',
        (1000.0, 0.0, 1e5), 8e-5, 'Ideal gas 2.0 against polynomial water'),
    'jwl_poly': lambda: _tube(
        'jwl_poly', 'jwl_tnt', (1630.0, 0.0, 8.3e9), 'polynomial_water', (1000.0, 0.0, 1e5),
        8e-5, 'TNT products (JWL) against polynomial water'),
    'air_blast': lambda: _charge(
        'air_blast', 'ideal_products', (618.935, 0.0, 6.314e12), 'ideal_air',
        (1.29, 0.0, 1.013e5), 0.3, 5000.0, 1.5, [50.0, 100.0, 200.0, 300.0, 400.0, 600.0],
        'One-kiloton air blast, ideal products 1.2 in ideal air 1.4'),
    'udex': lambda: _charge(
        'udex', 'jwl_tnt', (1630.0, 0.0, 9.5e9), 'polynomial_water', (1000.0, 0.0, 1e5),
        0.245, 15.0, 7e-3, [1.0, 2.0, 3.0, 4.0, 6.0, 8.0],
        'Underwater explosion of a 100 kg TNT charge'),
    'tnt_air': lambda: _charge(
        'tnt_air', 'jwl_tnt', (1630.0, 0.0, 9.5e9), 'ideal_air', (1.29, 0.0, 1.013e5),
        0.0527, 20.0, 1.2e-2, [0.5, 1.0, 2.0, 3.0, 4.0, 5.0],
        'TNT charge detonated in air'),
}


def builtin_problem(name: str) -> ProblemSpec:
    """Return a validated builtin problem.

    Raises:
        UnknownProblemError: name is not a builtin
    """
    factory = BUILTIN_PROBLEMS.get(name)
    if factory is None:
        raise UnknownProblemError(
            f"unknown problem {name!r}; choose one of: {', '.join(BUILTIN_PROBLEMS)}")
    problem = factory()
    validate_problem(problem)
    return problem


def validate_problem(problem: ProblemSpec) -> ProblemSpec:
    """Check geometry, EOS validity of the initial states and the vacuum condition.

    Raises:
        ProblemConfigError: inconsistent geometry or inadmissible states
        VacuumError: the interface Riemann problem has no solution
    """
    lo, hi = problem.domain
    if not lo < hi:
        raise ProblemConfigError(f"{problem.name}: empty domain [{lo}, {hi}]")
    if problem.geometry is Geometry.SPHERICAL and lo < 0:
        raise ProblemConfigError(f"{problem.name}: spherical domain must start at r >= 0 (got {lo})")
    if problem.t_end < 0:
        raise ProblemConfigError(f"{problem.name}: t_end must be non-negative (got {problem.t_end})")
    if problem.cells < 3:
        raise ProblemConfigError(f"{problem.name}: need at least 3 cells (got {problem.cells})")
    outside = [g for g in problem.gauges if not lo <= g <= hi]
    if outside:
        raise ProblemConfigError(f"{problem.name}: gauges {outside} outside domain [{lo}, {hi}]")
    try:
        validate_state(problem.eos_minus, problem.state_minus)
        if problem.interface_pos is None:
            return problem
        if not lo < problem.interface_pos < hi:
            raise ProblemConfigError(
                f"{problem.name}: interface {problem.interface_pos} outside domain ({lo}, {hi})")
        if problem.eos_plus is None or problem.state_plus is None:
            raise ProblemConfigError(f"{problem.name}: two-medium problem needs eos_plus and state_plus")
        validate_state(problem.eos_plus, problem.state_plus)
    except EosError as e:
        raise ProblemConfigError(f"{problem.name}: {e}") from e

    du = problem.state_plus.u - problem.state_minus.u
    if du > 0:
        check = check_vacuum(problem.eos_minus, problem.state_minus,
                             problem.eos_plus, problem.state_plus)
        if check.margin <= 0:
            raise VacuumError(
                f"{problem.name}: initial data open a vacuum (margin {check.margin:.6g} m/s)",
                check.margin)
    return problem


# JSON records

def _state_to_dict(state: Optional[FluidState]) -> Optional[Dict[str, float]]:
    if state is None:
        return None
    return {'rho': state.rho, 'u': state.u, 'p': state.p}


def _state_from_dict(record: Any, where: str) -> FluidState:
    try:
        return FluidState(float(record['rho']), float(record['u']), float(record['p']))
    except (KeyError, TypeError, ValueError) as e:
        raise ProblemConfigError(f"{where}: expected {{'rho', 'u', 'p'}} (got {record!r})") from e


def problem_to_dict(problem: ProblemSpec) -> Dict[str, Any]:
    return {
        'name': problem.name,
        'description': problem.description,
        'geometry': problem.geometry.value,
        'domain': list(problem.domain),
        'interface_pos': problem.interface_pos,
        'eos_minus': eos_to_dict(problem.eos_minus),
        'state_minus': _state_to_dict(problem.state_minus),
        'eos_plus': eos_to_dict(problem.eos_plus) if problem.eos_plus is not None else None,
        'state_plus': _state_to_dict(problem.state_plus),
        't_end': problem.t_end,
        'p_ambient': problem.p_ambient,
        'bc_left': problem.bc_left.value,
        'bc_right': problem.bc_right.value,
        'cells': problem.cells,
        'gauges': list(problem.gauges),
    }


def problem_from_dict(record: Dict[str, Any]) -> ProblemSpec:
    """Build and validate a ProblemSpec from its JSON record.

    Raises:
        ProblemConfigError: missing or malformed fields
    """
    if not isinstance(record, dict):
        raise ProblemConfigError(f"problem record must be an object (got {type(record).__name__})")
    required = ['name', 'geometry', 'domain', 'eos_minus', 'state_minus', 't_end']
    missing = [k for k in required if k not in record]
    if missing:
        raise ProblemConfigError(f"problem record is missing {', '.join(missing)}")
    name = str(record['name'])
    try:
        geometry = Geometry(record['geometry'])
        bc_default = 'reflective' if geometry is Geometry.SPHERICAL else 'outflow'
        bc_left = Boundary(record.get('bc_left', bc_default))
        bc_right = Boundary(record.get('bc_right', 'outflow'))
    except ValueError as e:
        raise ProblemConfigError(f"{name}: {e}") from e
    try:
        lo, hi = (float(v) for v in record['domain'])
    except (TypeError, ValueError) as e:
        raise ProblemConfigError(f"{name}: domain must be [lo, hi] (got {record['domain']!r})") from e

    two_medium = record.get('interface_pos') is not None
    try:
        eos_minus = eos_from_dict(record['eos_minus'])
        eos_plus = eos_from_dict(record['eos_plus']) if two_medium else None
    except KeyError as e:
        raise ProblemConfigError(f"{name}: two-medium problem is missing {e}") from e
    except EosError as e:
        raise ProblemConfigError(f"{name}: {e}") from e

    state_minus = _state_from_dict(record['state_minus'], f"{name}.state_minus")
    state_plus = _state_from_dict(record.get('state_plus'), f"{name}.state_plus") if two_medium else None
    state_ref = state_plus or state_minus
    try:
        problem = ProblemSpec(
            name=name,
            geometry=geometry,
            domain=(lo, hi),
            interface_pos=float(record['interface_pos']) if two_medium else None,
            eos_minus=eos_minus,
            state_minus=state_minus,
            eos_plus=eos_plus,
            state_plus=state_plus,
            t_end=float(record['t_end']),
            p_ambient=float(record.get('p_ambient', state_ref.p)),
            bc_left=bc_left,
            bc_right=bc_right,
            cells=int(record.get('cells', SPHERICAL_CELLS if geometry is Geometry.SPHERICAL else PLANAR_CELLS)),
            gauges=[float(g) for g in record.get('gauges', [])],
            description=str(record.get('description', '')),
        )
    except (TypeError, ValueError) as e:
        raise ProblemConfigError(f"{name}: {e}") from e
    return validate_problem(problem)


def load_problem(path: str) -> ProblemSpec:
    """Read a problem JSON file.

    Raises:
        ProblemConfigError: unreadable JSON or invalid record (the path is named)
    """
    try:
        with open(path, 'r') as f:
            record = json.load(f)
    except json.JSONDecodeError as e:
        raise ProblemConfigError(f"{path}: invalid JSON ({e})") from e
    except OSError as e:
        raise ProblemConfigError(f"{path}: cannot read problem file ({e.strerror})") from e
    try:
        return problem_from_dict(record)
    except ProblemConfigError as e:
        raise ProblemConfigError(f"{path}: {e}") from e


def export_problem(name: str, path: str) -> Dict[str, Any]:
    record = problem_to_dict(builtin_problem(name))
    with open(path, 'w') as f:
        json.dump(record, f, indent=2)
        f.write('\n')
    return record


# Diagnostics

def shock_metrics(record: GaugeRecord, p_ambient: float, delta: float = ARRIVAL_THRESHOLD,
                  positive_phase_only: bool = False) -> ShockMetrics:
    """Peak overpressure, impulse and arrival time of a gauge record.

    Args:
        record: Pressure history
        p_ambient: Ambient pressure
        delta: Relative overpressure that marks the arrival
        positive_phase_only: Integrate only from arrival to the first return to ambient

    Returns:
        ShockMetrics; arrival_time is None when the shock never reaches the gauge
    """
    t, p = record.samples()
    if t.size == 0:
        raise ValueError(f"gauge at {record.radius} m has no samples")
    over = p - p_ambient
    peak = float(np.max(over))
    above = np.flatnonzero(p > p_ambient * (1.0 + delta))
    arrival_index = int(above[0]) if above.size else None
    arrival = float(t[arrival_index]) if arrival_index is not None else None

    positive = np.maximum(over, 0.0)
    if not positive_phase_only:
        impulse = float(trapezoid(positive, t)) if t.size > 1 else 0.0
    elif arrival_index is None:
        impulse = 0.0
    else:
        start = max(arrival_index - 1, 0)
        after = np.flatnonzero(over[arrival_index:] <= 0.0)
        stop = arrival_index + int(after[0]) + 1 if after.size else t.size
        impulse = float(trapezoid(positive[start:stop], t[start:stop]))
    return ShockMetrics(peak, impulse, arrival)


def _crossing(x: np.ndarray, p: np.ndarray, level: float, from_left: bool) -> Optional[float]:
    s = np.sign(p - level)
    idx = np.flatnonzero(s[:-1] * s[1:] <= 0)
    idx = idx[(s[idx] != 0) | (s[idx + 1] != 0)]
    if idx.size == 0:
        return None
    k = int(idx[0] if from_left else idx[-1])
    if p[k + 1] == p[k]:
        return float(x[k])
    w = (level - p[k]) / (p[k + 1] - p[k])
    return float(x[k] + w * (x[k + 1] - x[k]))


def wave_positions(snap: Snapshot, star: StarState, state_l: FluidState, state_r: FluidState,
                   x_interface: float) -> Dict[str, Optional[float]]:
    """Locate the left wave, contact and right wave in a pressure profile.

    Each nonlinear wave is placed where the pressure crosses the mid-level
    between the far-field and star pressures on its side of the contact.
    """
    x = np.asarray(snap.x)
    p = np.asarray(snap.p)
    left = x < x_interface
    out: Dict[str, Optional[float]] = {'left': None, 'contact': float(x_interface), 'right': None}
    if np.count_nonzero(left) > 1 and abs(star.p_star - state_l.p) > 0:
        out['left'] = _crossing(x[left], p[left], 0.5 * (state_l.p + star.p_star), True)
    if np.count_nonzero(~left) > 1 and abs(star.p_star - state_r.p) > 0:
        out['right'] = _crossing(x[~left], p[~left], 0.5 * (state_r.p + star.p_star), False)
    return out


def reference_profile(problem: ProblemSpec, cells: int = REFERENCE_CELLS, **run_options) -> Snapshot:
    """Fine-mesh run of a planar problem used as the reference for coarse runs."""
    if problem.geometry is not Geometry.PLANAR:
        raise ProblemConfigError(f"{problem.name}: reference profiles are for planar problems")
    logger.info(f"reference profile for {problem.name} on {cells} cells")
    return run_simulation(problem, cells=cells, gauges=[], **run_options).snapshots[-1]
