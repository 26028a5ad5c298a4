# Copyright Polymorph Corporation (2026)

"""
One-dimensional two-medium cut-cell finite-volume scheme.

Fluid "minus" occupies [x_0, x_I] and fluid "plus" occupies [x_I, x_N]; the
interface x_I is a single tracked coordinate moved with the star velocity of
the interface Riemann problem. Edge fluxes are local Lax-Friedrichs between
control volumes of the same fluid; the interface carries only pressure work.
Spherical runs use the r^2-weighted form of the Euler equations with the
geometric source (0, 2 r p, 0), integrated with forward Euler.

Conserved arrays have shape (cells, 3): mass, momentum, total energy per unit
volume. Empty sub-cells hold zeros.
"""

import csv
import logging
import math
import time as wallclock
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from eos import EosError, EosModel, internal_energy, pressure, sound_speed
from riemann import (
    DEFAULT_HUGONIOT_TOL,
    DEFAULT_MAX_ITER,
    DEFAULT_SUBSTEPS,
    DEFAULT_TOL,
    FluidState,
    RiemannError,
    StarState,
    solve_star,
)

if TYPE_CHECKING:
    from problems import ProblemSpec

logger = logging.getLogger(__name__)

DEFAULT_CFL = 0.4
SMALL_CELL_FRACTION = 0.5
CSV_FORMAT = '{:.16e}'


class Geometry(Enum):
    PLANAR = 'planar'
    SPHERICAL = 'spherical'


class Boundary(Enum):
    REFLECTIVE = 'reflective'
    OUTFLOW = 'outflow'


class ConsState(NamedTuple):
    """Conserved variables of one fluid in one (sub-)cell."""
    mass: float
    momentum: float
    energy: float


class SimulationError(RuntimeError):
    """A step failed; carries the time, cell and states needed to reproduce it."""

    def __init__(self, message: str, time: float = math.nan, cell: Optional[int] = None,
                 states: Optional[Dict[str, Any]] = None, cause: Optional[BaseException] = None):
        super().__init__(message)
        self.time = time
        self.cell = cell
        self.states = states or {}
        self.cause = cause

    def to_dict(self) -> Dict[str, Any]:
        return {
            'type': type(self.cause or self).__name__,
            'message': str(self),
            'time': self.time,
            'cell': self.cell,
            'states': self.states,
        }


class CflViolation(SimulationError):
    """Interface would cross more than one control volume in a step."""


class PositivityError(SimulationError):
    """A control volume lost positive density or hyperbolicity."""


@dataclass
class SchemeOptions:
    """Interface Riemann solver settings and the small-cell threshold."""
    tol: float = DEFAULT_TOL
    substeps: int = DEFAULT_SUBSTEPS
    hugoniot_tol: float = DEFAULT_HUGONIOT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    theta: float = SMALL_CELL_FRACTION


@dataclass
class Mesh1D:
    """Cut-cell grid with per-cell two-fluid conservative states."""
    geometry: Geometry
    nodes: np.ndarray
    minus: np.ndarray
    plus: np.ndarray
    interface_pos: Optional[float]
    eos_minus: EosModel
    eos_plus: Optional[EosModel]
    bc_left: Boundary = Boundary.REFLECTIVE
    bc_right: Boundary = Boundary.OUTFLOW
    time: float = 0.0
    boundary_inflow: np.ndarray = field(default_factory=lambda: np.zeros((2, 3)))
    last_star: Optional[StarState] = None

    @property
    def cells(self) -> int:
        return len(self.nodes) - 1

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    @property
    def interface_cell(self) -> Optional[int]:
        if self.interface_pos is None:
            return None
        return int(np.searchsorted(self.nodes, self.interface_pos, side='right')) - 1

    def sub_lengths(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lengths occupied by fluid minus and fluid plus in every cell."""
        lo, hi = self.nodes[:-1], self.nodes[1:]
        if self.interface_pos is None:
            return hi - lo, np.zeros_like(lo)
        x_i = self.interface_pos
        return np.clip(x_i - lo, 0.0, hi - lo), np.clip(hi - x_i, 0.0, hi - lo)

    def sub_measures(self) -> Tuple[np.ndarray, np.ndarray]:
        """Volumes (per steradian when spherical) occupied by each fluid."""
        lo, hi = self.nodes[:-1], self.nodes[1:]
        if self.interface_pos is None:
            return measure(self.geometry, lo, hi), np.zeros_like(lo)
        x_i = self.interface_pos
        m_minus = np.where(lo < x_i, measure(self.geometry, lo, np.minimum(hi, x_i)), 0.0)
        m_plus = np.where(hi > x_i, measure(self.geometry, np.maximum(lo, x_i), hi), 0.0)
        return m_minus, m_plus


@dataclass
class GaugeRecord:
    """Pressure history at a fixed coordinate."""
    radius: float
    times: List[float] = field(default_factory=list)
    pressures: List[float] = field(default_factory=list)

    def append(self, t: float, p: float) -> None:
        self.times.append(t)
        self.pressures.append(p)

    def samples(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.times, dtype=float), np.asarray(self.pressures, dtype=float)


@dataclass
class Snapshot:
    """Primitive-variable profile at one time."""
    time: float
    x: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    p: np.ndarray
    e: np.ndarray
    fluid: List[str]


@dataclass
class ConservationAudit:
    """Per-fluid totals (rows minus, plus; columns mass, momentum, energy)."""
    initial: np.ndarray
    final: np.ndarray
    boundary_inflow: np.ndarray
    mass_drift_minus: float
    mass_drift_plus: float
    momentum_drift: Optional[float]
    energy_drift: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'initial': self.initial.tolist(),
            'final': self.final.tolist(),
            'boundary_inflow': self.boundary_inflow.tolist(),
            'mass_drift_minus': self.mass_drift_minus,
            'mass_drift_plus': self.mass_drift_plus,
            'momentum_drift': self.momentum_drift,
            'energy_drift': self.energy_drift,
        }


@dataclass
class RunResult:
    snapshots: List[Snapshot]
    gauges: List[GaugeRecord]
    mesh: Mesh1D
    audit: ConservationAudit
    steps: int
    interface_history: List[Tuple[float, float, float]]
    wall_time: float

    def interface_audit(self) -> Dict[str, Optional[float]]:
        """Displacement of the interface against the integral of u*."""
        if not self.interface_history:
            return {'initial': None, 'final': None, 'displacement': None,
                    'integral': None, 'trapezoid': None}
        t = np.array([h[0] for h in self.interface_history])
        x = np.array([h[1] for h in self.interface_history])
        u = np.array([h[2] for h in self.interface_history])
        if len(u) > 1:
            u[0] = u[1]
        dt = np.diff(t)
        return {
            'initial': float(x[0]),
            'final': float(x[-1]),
            'displacement': float(x[-1] - x[0]),
            # u[k] is the star velocity used over the step ending at t[k]
            'integral': float(np.sum(u[1:] * dt)),
            'trapezoid': float(np.sum(0.5 * (u[1:] + u[:-1]) * dt)),
        }


# Geometry

def measure(geometry: Geometry, a, b):
    """Length (planar) or volume per steradian (spherical) of [a, b]."""
    if geometry is Geometry.PLANAR:
        return b - a
    return (b - a) * (a * a + a * b + b * b) / 3.0


def face_area(geometry: Geometry, r):
    if geometry is Geometry.PLANAR:
        return np.ones_like(np.asarray(r, dtype=float))
    return np.asarray(r, dtype=float) ** 2


# State conversions and fluxes

def conservative(eos: EosModel, rho, u, p) -> np.ndarray:
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    e = internal_energy(eos, rho, p)
    return np.stack([rho, rho * u, rho * (e + 0.5 * u * u)], axis=-1)


def primitive(eos: EosModel, U) -> Tuple[Any, Any, Any, Any]:
    """(rho, u, p, c) from conserved variables."""
    U = np.asarray(U, dtype=float)
    rho = U[..., 0]
    u = U[..., 1] / rho
    e = U[..., 2] / rho - 0.5 * u * u
    p = pressure(eos, rho, e)
    c = sound_speed(eos, rho, p)
    return rho, u, p, c


def physical_flux(eos: EosModel, U) -> np.ndarray:
    U = np.asarray(U, dtype=float)
    _, u, p, _ = primitive(eos, U)
    return np.stack([U[..., 1], U[..., 1] * u + p, (U[..., 2] + p) * u], axis=-1)


def _llf(U_l, U_r, prim_l, prim_r, normal=1.0):
    _, u_l, p_l, c_l = prim_l
    _, u_r, p_r, c_r = prim_r
    F_l = np.stack([U_l[..., 1], U_l[..., 1] * u_l + p_l, (U_l[..., 2] + p_l) * u_l], axis=-1)
    F_r = np.stack([U_r[..., 1], U_r[..., 1] * u_r + p_r, (U_r[..., 2] + p_r) * u_r], axis=-1)
    lam = np.maximum(np.abs(u_l) + c_l, np.abs(u_r) + c_r)
    return 0.5 * (F_l + F_r) * normal - 0.5 * np.asarray(lam)[..., None] * (U_r - U_l)


def llf_flux(eos: EosModel, left, right, normal: float = 1.0) -> np.ndarray:
    """Local Lax-Friedrichs flux between two states of the same fluid."""
    U_l = np.asarray(left, dtype=float)
    U_r = np.asarray(right, dtype=float)
    return _llf(U_l, U_r, primitive(eos, U_l), primitive(eos, U_r), normal)


def interface_flux(star: StarState, normal: float, area: float, dt: float) -> np.ndarray:
    """Pressure work across the interface for the side whose outward normal is `normal`."""
    return dt * area * np.array([0.0, star.p_star * normal, star.p_star * star.u_star * normal])


def geometric_source(state, r, p, dt, geometry: Geometry = Geometry.SPHERICAL) -> np.ndarray:
    """dt * (0, 2 r p, 0) per unit radial length of the r^2-weighted system."""
    src = np.zeros_like(np.asarray(state, dtype=float))
    if geometry is Geometry.SPHERICAL:
        src[..., 1] = dt * 2.0 * np.asarray(r) * np.asarray(p)
    return src


def _ghost(U: np.ndarray, bc: Boundary) -> np.ndarray:
    if bc is Boundary.REFLECTIVE:
        return U * np.array([1.0, -1.0, 1.0])
    return U.copy()


# Control-volume layout

class _Layout(NamedTuple):
    j: int
    start: int
    end: int
    small_minus: bool
    small_plus: bool


def _layout(nodes: np.ndarray, x_i: float, theta: float) -> _Layout:
    n = len(nodes) - 1
    if not nodes[0] < x_i < nodes[-1]:
        raise SimulationError(f"interface {x_i:.9g} m left the domain [{nodes[0]:.6g}, {nodes[-1]:.6g}]")
    j = int(np.searchsorted(nodes, x_i, side='right')) - 1
    dx = nodes[j + 1] - nodes[j]
    l_minus = x_i - nodes[j]
    l_plus = nodes[j + 1] - x_i
    start = j - 1 if (l_minus < theta * dx and j >= 1) else j
    end = j + 1 if (l_plus < theta * dx and j + 1 <= n - 1) else j
    return _Layout(j, start, end,
                   start == j and l_minus < theta * dx,
                   end == j and l_plus < theta * dx)


def _checked_primitive(eos: EosModel, U: np.ndarray, cells: np.ndarray, t: float, fluid: str):
    rho = U[:, 0]
    bad = ~(rho > 0)
    if np.any(bad):
        k = int(np.argmax(bad))
        raise PositivityError(f"non-positive density {rho[k]:.6g} in {fluid} cell {cells[k]}",
                              t, int(cells[k]), {fluid: U[k].tolist()})
    try:
        return primitive(eos, U)
    except EosError as e:
        for k in range(len(U)):
            try:
                primitive(eos, U[k])
            except EosError:
                raise PositivityError(f"inadmissible {fluid} state in cell {cells[k]}: {e}",
                                      t, int(cells[k]), {fluid: U[k].tolist()}, e) from e
        raise


def _sweep(eos: EosModel, geometry: Geometry, bounds: np.ndarray, Q: np.ndarray,
           cells: np.ndarray, dt: float, t: float, fluid: str,
           left_bc: Optional[Boundary], right_bc: Optional[Boundary],
           left_flux: Optional[np.ndarray], right_flux: Optional[np.ndarray]):
    """Update the contents of consecutive control volumes of one fluid.

    Each end is either a domain boundary (bc given) or the interface (flux given,
    oriented along +x and already multiplied by area and dt).

    Returns:
        new contents, and the content gained through domain boundaries
    """
    vol = measure(geometry, bounds[:-1], bounds[1:])
    U = Q / vol[:, None]
    prim = _checked_primitive(eos, U, cells, t, fluid)
    m = len(U)
    G = np.zeros((m + 1, 3))
    if m > 1:
        G[1:-1] = _llf(U[:-1], U[1:], tuple(v[:-1] for v in prim), tuple(v[1:] for v in prim))
    area = face_area(geometry, bounds)
    inflow = np.zeros(3)
    if left_bc is not None:
        ghost = _ghost(U[0], left_bc)
        G[0] = _llf(ghost, U[0], primitive(eos, ghost), tuple(v[0] for v in prim))
        inflow += dt * area[0] * G[0]
        left_term = dt * area[0] * G[0]
    else:
        left_term = left_flux
    if right_bc is not None:
        ghost = _ghost(U[-1], right_bc)
        G[-1] = _llf(U[-1], ghost, tuple(v[-1] for v in prim), primitive(eos, ghost))
        inflow -= dt * area[-1] * G[-1]
        right_term = dt * area[-1] * G[-1]
    else:
        right_term = right_flux
    fluxes = dt * area[:, None] * G
    fluxes[0] = left_term
    fluxes[-1] = right_term
    Q_new = Q + fluxes[:-1] - fluxes[1:]
    if geometry is Geometry.SPHERICAL:
        r_mid = 0.5 * (bounds[:-1] + bounds[1:])
        Q_new += geometric_source(U, r_mid, prim[2], dt) * (bounds[1:] - bounds[:-1])[:, None]
    return Q_new, inflow


def _state_dict(state: FluidState) -> Dict[str, float]:
    return {'rho': state.rho, 'u': state.u, 'p': state.p}


def advance_step(mesh: Mesh1D, dt: float, options: Optional[SchemeOptions] = None) -> Mesh1D:
    """Advance the mesh by one forward-Euler step of length dt.

    Raises:
        CflViolation: the interface would leave its control volumes
        SimulationError: interface Riemann failure, with cell context
        PositivityError: an updated state is not admissible
    """
    options = options or SchemeOptions()
    geo = mesh.geometry
    x = mesh.nodes
    n = mesh.cells
    t = mesh.time
    all_vol = measure(geo, x[:-1], x[1:])

    if mesh.interface_pos is None:
        Q = mesh.minus * all_vol[:, None]
        Q_new, inflow = _sweep(mesh.eos_minus, geo, x, Q, np.arange(n), dt, t, 'minus',
                               mesh.bc_left, mesh.bc_right, None, None)
        minus = Q_new / all_vol[:, None]
        _checked_primitive(mesh.eos_minus, minus, np.arange(n), t + dt, 'minus')
        total_inflow = mesh.boundary_inflow.copy()
        total_inflow[0] += inflow
        return replace(mesh, minus=minus, plus=np.zeros_like(mesh.plus), time=t + dt,
                       boundary_inflow=total_inflow, last_star=None)

    x_i = mesh.interface_pos
    lay = _layout(x, x_i, options.theta)
    j = lay.j

    # Fluid minus: cells 0..start-1 and the interface CV [x_start, x_I]
    b_minus = np.append(x[:lay.start + 1], x_i)
    Q_minus = mesh.minus[:lay.start] * all_vol[:lay.start, None]
    tail = sum(measure(geo, x[c], min(x[c + 1], x_i)) * mesh.minus[c]
               for c in range(lay.start, j + 1) if x[c] < x_i)
    Q_minus = np.vstack([Q_minus, np.atleast_2d(tail)])
    cells_minus = np.arange(lay.start + 1)

    # Fluid plus: the interface CV [x_I, x_{end+1}] and cells end+1..n-1
    b_plus = np.insert(x[lay.end + 1:], 0, x_i)
    head = sum(measure(geo, max(x[c], x_i), x[c + 1]) * mesh.plus[c]
               for c in range(j, lay.end + 1))
    Q_plus = np.vstack([np.atleast_2d(head), mesh.plus[lay.end + 1:] * all_vol[lay.end + 1:, None]])
    cells_plus = np.arange(lay.end, n)

    U_l = Q_minus[-1] / measure(geo, b_minus[-2], x_i)
    U_r = Q_plus[0] / measure(geo, x_i, b_plus[1])
    rho_l, u_l, p_l, _ = _checked_primitive(mesh.eos_minus, U_l[None, :], cells_minus[-1:], t, 'minus')
    rho_r, u_r, p_r, _ = _checked_primitive(mesh.eos_plus, U_r[None, :], cells_plus[:1], t, 'plus')
    state_l = FluidState(float(rho_l[0]), float(u_l[0]), float(p_l[0]))
    state_r = FluidState(float(rho_r[0]), float(u_r[0]), float(p_r[0]))
    try:
        star = solve_star(mesh.eos_minus, state_l, mesh.eos_plus, state_r,
                          tol=options.tol, max_iter=options.max_iter,
                          substeps=options.substeps, hugoniot_tol=options.hugoniot_tol)
    except (RiemannError, EosError, ValueError) as e:
        raise SimulationError(
            f"interface Riemann problem failed at t={t:.9g} s in cell {j}: {e}",
            t, j, {'minus': _state_dict(state_l), 'plus': _state_dict(state_r),
                   'eos_minus': mesh.eos_minus.label(), 'eos_plus': mesh.eos_plus.label()},
            e,
        ) from e

    # Same +x oriented pressure work leaves minus and enters plus
    work = interface_flux(star, 1.0, float(face_area(geo, x_i)), dt)
    Q_minus_new, inflow_minus = _sweep(mesh.eos_minus, geo, b_minus, Q_minus, cells_minus, dt, t,
                                       'minus', mesh.bc_left, None, None, work)
    Q_plus_new, inflow_plus = _sweep(mesh.eos_plus, geo, b_plus, Q_plus, cells_plus, dt, t,
                                     'plus', None, mesh.bc_right, work, None)

    x_new = x_i + star.u_star * dt
    if not b_minus[-2] < x_new < b_plus[1]:
        raise CflViolation(
            f"interface moved from {x_i:.9g} to {x_new:.9g} m, beyond its control volumes "
            f"[{b_minus[-2]:.9g}, {b_plus[1]:.9g}]",
            t, j, {'minus': _state_dict(state_l), 'plus': _state_dict(state_r)},
        )

    minus = np.zeros_like(mesh.minus)
    plus = np.zeros_like(mesh.plus)
    minus[:lay.start] = Q_minus_new[:-1] / all_vol[:lay.start, None]
    U_minus_cv = Q_minus_new[-1] / measure(geo, b_minus[-2], x_new)
    covered = (np.arange(n) >= lay.start) & (x[:-1] < x_new)
    minus[covered] = U_minus_cv
    plus[lay.end + 1:] = Q_plus_new[1:] / all_vol[lay.end + 1:, None]
    U_plus_cv = Q_plus_new[0] / measure(geo, x_new, b_plus[1])
    covered = (np.arange(n) <= lay.end) & (x[1:] > x_new)
    plus[covered] = U_plus_cv

    _checked_primitive(mesh.eos_minus, np.vstack([minus[:lay.start], U_minus_cv[None, :]]),
                       cells_minus, t + dt, 'minus')
    _checked_primitive(mesh.eos_plus, np.vstack([U_plus_cv[None, :], plus[lay.end + 1:]]),
                       cells_plus, t + dt, 'plus')

    total_inflow = mesh.boundary_inflow.copy()
    total_inflow[0] += inflow_minus
    total_inflow[1] += inflow_plus
    return replace(mesh, minus=minus, plus=plus, interface_pos=x_new, time=t + dt,
                   boundary_inflow=total_inflow, last_star=star)


def cfl_time_step(mesh: Mesh1D, cfl: float = DEFAULT_CFL, theta: float = SMALL_CELL_FRACTION) -> float:
    """Largest stable step: cfl * min(dx / (|u| + c)) over occupied cells.

    Cut sub-cells use the full cell length; an interface control volume that
    cannot be merged because it touches the domain boundary uses its own length.
    """
    if not 0 < cfl <= 1:
        raise ValueError(f"cfl must lie in (0, 1] (got {cfl!r})")
    dx = np.diff(mesh.nodes)
    dt = math.inf
    cells = np.arange(mesh.cells)
    speeds = {}
    for fluid, U, model in (('minus', mesh.minus, mesh.eos_minus), ('plus', mesh.plus, mesh.eos_plus)):
        occupied = U[:, 0] > 0
        if not np.any(occupied):
            continue
        _, u, _, c = _checked_primitive(model, U[occupied], cells[occupied], mesh.time, fluid)
        speed = np.abs(u) + c
        dt = min(dt, float(np.min(dx[occupied] / speed)))
        speeds[fluid] = dict(zip(cells[occupied].tolist(), speed.tolist()))

    if mesh.interface_pos is not None:
        lay = _layout(mesh.nodes, mesh.interface_pos, theta)
        x_i = mesh.interface_pos
        if lay.small_minus:
            dt = min(dt, (x_i - mesh.nodes[lay.j]) / speeds['minus'][lay.j])
        if lay.small_plus:
            dt = min(dt, (mesh.nodes[lay.j + 1] - x_i) / speeds['plus'][lay.j])
    return cfl * dt


# Diagnostics

def conservation_totals(mesh: Mesh1D) -> np.ndarray:
    """Integrated mass, momentum and energy of each fluid (rows minus, plus)."""
    m_minus, m_plus = mesh.sub_measures()
    return np.vstack([m_minus @ mesh.minus, m_plus @ mesh.plus])


def _relative(delta: float, scale: float) -> float:
    return abs(delta) / scale if scale > 0 else abs(delta)


def conservation_audit(mesh: Mesh1D, initial: np.ndarray) -> ConservationAudit:
    final = conservation_totals(mesh)
    inflow = mesh.boundary_inflow
    residual = final - initial - inflow
    momentum_drift = energy_drift = None
    if mesh.geometry is Geometry.PLANAR:
        combined = residual.sum(axis=0)
        scale = np.max(np.abs(np.vstack([initial.sum(axis=0), final.sum(axis=0),
                                         inflow.sum(axis=0)])), axis=0)
        momentum_drift = _relative(combined[1], scale[1])
        energy_drift = _relative(combined[2], scale[2])
    return ConservationAudit(
        initial=initial.copy(),
        final=final,
        boundary_inflow=inflow.copy(),
        mass_drift_minus=_relative(residual[0, 0], abs(initial[0, 0])),
        mass_drift_plus=_relative(residual[1, 0], abs(initial[1, 0])),
        momentum_drift=momentum_drift,
        energy_drift=energy_drift,
    )


def snapshot(mesh: Mesh1D) -> Snapshot:
    """Primitive profile at cell centers; cut cells report their larger fluid part."""
    n = mesh.cells
    rho, u, p, e = (np.full(n, np.nan) for _ in range(4))
    has_minus = mesh.minus[:, 0] > 0
    has_plus = mesh.plus[:, 0] > 0
    l_minus, l_plus = mesh.sub_lengths()
    use_minus = has_minus & (~has_plus | (l_minus >= l_plus))
    use_plus = has_plus & ~use_minus
    for mask, U, model in ((use_minus, mesh.minus, mesh.eos_minus), (use_plus, mesh.plus, mesh.eos_plus)):
        if np.any(mask):
            r_, u_, p_, _ = primitive(model, U[mask])
            rho[mask], u[mask], p[mask] = r_, u_, p_
            e[mask] = internal_energy(model, r_, p_)
    fluid = ['cut' if a and b else ('minus' if a else 'plus') for a, b in zip(has_minus, has_plus)]
    return Snapshot(mesh.time, mesh.centers.copy(), rho, u, p, e, fluid)


def gauge_pressure(mesh: Mesh1D, radius: float) -> float:
    """Pressure of the fluid present at a coordinate."""
    k = int(np.clip(np.searchsorted(mesh.nodes, radius, side='right') - 1, 0, mesh.cells - 1))
    if mesh.interface_pos is None or radius < mesh.interface_pos:
        U, model = mesh.minus[k], mesh.eos_minus
    else:
        U, model = mesh.plus[k], mesh.eos_plus
    return float(primitive(model, U)[2])


def initial_mesh(problem: 'ProblemSpec', cells: int) -> Mesh1D:
    """Uniform mesh over the problem domain with the two initial states."""
    if cells < 3:
        raise ValueError(f"need at least 3 cells (got {cells})")
    lo, hi = problem.domain
    nodes = np.linspace(lo, hi, cells + 1)
    s_m, s_p = problem.state_minus, problem.state_plus
    U_minus = conservative(problem.eos_minus, s_m.rho, s_m.u, s_m.p)
    minus = np.zeros((cells, 3))
    plus = np.zeros((cells, 3))
    x_i = problem.interface_pos
    if x_i is None:
        minus[:] = U_minus
        eos_plus = None
    else:
        minus[nodes[:-1] < x_i] = U_minus
        plus[nodes[1:] > x_i] = conservative(problem.eos_plus, s_p.rho, s_p.u, s_p.p)
        eos_plus = problem.eos_plus
    return Mesh1D(
        geometry=problem.geometry,
        nodes=nodes,
        minus=minus,
        plus=plus,
        interface_pos=x_i,
        eos_minus=problem.eos_minus,
        eos_plus=eos_plus,
        bc_left=problem.bc_left,
        bc_right=problem.bc_right,
    )


def run_simulation(problem: 'ProblemSpec', cells: Optional[int] = None, cfl: float = DEFAULT_CFL,
                   t_end: Optional[float] = None, gauges: Optional[Sequence[float]] = None,
                   snapshot_times: Optional[Sequence[float]] = None,
                   options: Optional[SchemeOptions] = None,
                   max_steps: int = 10_000_000) -> RunResult:
    """Time loop with last-step clipping to hit every snapshot time and t_end exactly.

    Args:
        problem: Problem definition
        cells: Cell count (defaults to the problem's)
        cfl: Courant number
        t_end: Final time (defaults to the problem's)
        gauges: Coordinates whose pressure is recorded after every step
        snapshot_times: Times at which primitive profiles are stored (t_end always is)
        options: Interface solver settings
        max_steps: Hard limit on the number of steps

    Returns:
        RunResult with snapshots, gauge records, final mesh and conservation audit

    Raises:
        SimulationError: a step failed (time, cell and states attached)
    """
    started = wallclock.perf_counter()
    cells = cells or problem.cells
    t_end = problem.t_end if t_end is None else t_end
    gauges = list(problem.gauges if gauges is None else gauges)
    options = options or SchemeOptions()
    if t_end < 0:
        raise ValueError(f"t_end must be non-negative (got {t_end!r})")

    mesh = initial_mesh(problem, cells)
    initial_totals = conservation_totals(mesh)
    requested = sorted({float(t) for t in (snapshot_times or []) if 0 <= t <= t_end} | {float(t_end)})
    dropped = [t for t in (snapshot_times or []) if not 0 <= t <= t_end]
    if dropped:
        logger.warning(f"ignoring snapshot times outside [0, {t_end}]: {dropped}")

    records = [GaugeRecord(r) for r in gauges]
    for rec in records:
        rec.append(0.0, gauge_pressure(mesh, rec.radius))
    history = []
    if mesh.interface_pos is not None:
        history.append((0.0, mesh.interface_pos, 0.0))

    snapshots = []
    steps = 0
    logger.info(f"run {problem.name}: {cells} cells, cfl={cfl}, t_end={t_end:g} s")
    for target in requested:
        while mesh.time < target:
            if steps >= max_steps:
                raise SimulationError(f"step limit {max_steps} reached at t={mesh.time:.9g} s", mesh.time)
            dt = cfl_time_step(mesh, cfl, options.theta)
            clipped = mesh.time + dt >= target
            if clipped:
                dt = target - mesh.time
            mesh = advance_step(mesh, dt, options)
            if clipped:
                mesh.time = target
            steps += 1
            for rec in records:
                rec.append(mesh.time, gauge_pressure(mesh, rec.radius))
            if mesh.last_star is not None:
                history.append((mesh.time, mesh.interface_pos, mesh.last_star.u_star))
        snapshots.append(snapshot(mesh))

    audit = conservation_audit(mesh, initial_totals)
    wall = wallclock.perf_counter() - started
    logger.info(f"run {problem.name}: {steps} steps in {wall:.2f} s, "
                f"mass drift {audit.mass_drift_minus:.2e}/{audit.mass_drift_plus:.2e}")
    return RunResult(snapshots, records, mesh, audit, steps, history, wall)


# CSV output

def _fmt(v: float) -> str:
    return CSV_FORMAT.format(v)


def write_snapshot_csv(path: str, snap: Snapshot) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['x', 'rho', 'u', 'p', 'e', 'fluid'])
        for row in zip(snap.x, snap.rho, snap.u, snap.p, snap.e, snap.fluid):
            writer.writerow([_fmt(v) for v in row[:5]] + [row[5]])


def write_gauge_csv(path: str, record: GaugeRecord) -> None:
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['t', 'p'])
        for t, p in zip(record.times, record.pressures):
            writer.writerow([_fmt(t), _fmt(p)])
