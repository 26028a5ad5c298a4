# Copyright Polymorph Corporation (2026)

"""
Approximate multi-medium Riemann solver for Mie-Grüneisen fluids.

The star pressure solves f(p) = F_l(p) + F_r(p) + u_r - u_l = 0, where F_k is
the shock branch (Hugoniot locus, density from a safeguarded Newton solve of
the Hugoniot function) when p > p_k and the rarefaction branch (isentrope,
one RK4 step per outer iteration by default) otherwise. The outer loop is an
inexact Newton iteration started from the acoustic approximation.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from eos import (
    DensityInterval,
    EosDomainError,
    EosModel,
    check_density,
    coefficients,
    internal_energy,
    sound_speed,
    sound_speed_squared,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
DEFAULT_HUGONIOT_TOL = 1e-8
DEFAULT_MAX_ITER = 100
DEFAULT_SUBSTEPS = 1
MAX_SUBSTEPS = 4096
MAX_STEP_RATIO = 4.0
SPLIT_STEP_RATIO = 2.0
SAMPLE_SUBSTEPS = 256
PRESSURE_FLOOR_FRACTION = 1e-8
VACUUM_RTOL = 1e-9
WEAK_WAVE = 1e-10


class RiemannError(RuntimeError):
    """Base class for Riemann solver failures."""


class VacuumError(RiemannError):
    """Initial data generate a vacuum; no solution is constructed."""

    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin


class NonConvergence(RiemannError):
    """Iteration limit reached; carries the iterate history."""

    def __init__(self, message: str, history: List[float]):
        super().__init__(message)
        self.history = list(history)


class HugoniotDomainError(RiemannError):
    """No Hugoniot root inside the density validity interval."""

    def __init__(self, message: str, p: float, rho_bound: float):
        super().__init__(message)
        self.p = p
        self.rho_bound = rho_bound


class IsentropeBreakdown(RiemannError):
    """RK4 isentrope stage left the admissible domain or lost hyperbolicity."""

    def __init__(self, message: str, stage: int, p: float, rho: float):
        super().__init__(message)
        self.stage = stage
        self.p = p
        self.rho = rho


@dataclass(frozen=True)
class FluidState:
    """Primitive state (rho, u, p) on one side of a Riemann problem."""
    rho: float
    u: float
    p: float

    def mirrored(self) -> 'FluidState':
        return FluidState(self.rho, -self.u, self.p)

    def shifted(self, du: float) -> 'FluidState':
        return FluidState(self.rho, self.u + du, self.p)


class WaveType(Enum):
    SHOCK = 'shock'
    RAREFACTION = 'rarefaction'


class BranchValue(NamedTuple):
    """Branch function value, derivative and the density behind the wave."""
    F: float
    Fp: float
    rho: float
    wave: WaveType


class CompressionLimit(NamedTuple):
    rho: float
    beyond_validity: bool


@dataclass
class StarState:
    """Converged star region and wave fan."""
    p_star: float
    u_star: float
    rho_star_l: float
    rho_star_r: float
    wave_l: WaveType
    wave_r: WaveType
    speeds_l: Tuple[float, ...]
    speeds_r: Tuple[float, ...]
    iterations: int
    residual: float
    history: List[float] = field(default_factory=list)

    @property
    def star_l(self) -> FluidState:
        return FluidState(self.rho_star_l, self.u_star, self.p_star)

    @property
    def star_r(self) -> FluidState:
        return FluidState(self.rho_star_r, self.u_star, self.p_star)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p_star': self.p_star,
            'u_star': self.u_star,
            'rho_star_l': self.rho_star_l,
            'rho_star_r': self.rho_star_r,
            'wave_l': self.wave_l.value,
            'wave_r': self.wave_r.value,
            'speeds_l': list(self.speeds_l),
            'speeds_r': list(self.speeds_r),
            'iterations': self.iterations,
            'residual': self.residual,
        }


@dataclass
class VacuumCheck:
    """Result of the vacuum test: solvable iff margin > 0."""
    margin: float
    integral_l: float
    integral_r: float
    tail: float
    converged: bool
    tail_flagged: bool

    def __float__(self):
        return self.margin


class IsentropeIntegral(NamedTuple):
    value: float
    tail: float
    converged: bool


def validate_state(eos: EosModel, state: FluidState) -> float:
    """Check a state against its EOS and return its sound speed."""
    check_density(eos, state.rho)
    if not (math.isfinite(state.u) and math.isfinite(state.p)):
        raise EosDomainError(f"state has non-finite velocity or pressure: {state}", state.rho)
    return float(sound_speed(eos, state.rho, state.p))


# Hugoniot locus

def hugoniot_function(eos: EosModel, state: FluidState, p, rho):
    """Hugoniot function Phi_k(p, rho); zero on the shock locus through state."""
    kk = coefficients(eos, state.rho)
    k = coefficients(eos, rho)
    return (kk.gamma * state.rho * (p - k.h)
            - k.gamma * rho * (state.p - kk.h)
            - 0.5 * kk.gamma * (p + state.p) * k.gamma * (rho - state.rho))


def hugoniot_derivative(eos: EosModel, state: FluidState, p, rho):
    """Partial derivative of the Hugoniot function with respect to rho."""
    kk = coefficients(eos, state.rho)
    k = coefficients(eos, rho)
    return (-kk.gamma * state.rho * k.dh
            - (k.gamma + rho * k.dgamma) * (state.p - kk.h)
            - 0.5 * kk.gamma * (p + state.p) * (k.dgamma * (rho - state.rho) + k.gamma))


def hugoniot_slope(eos: EosModel, state: FluidState, p, rho):
    """Slope dp/drho of the Hugoniot locus at (p, rho)."""
    kk = coefficients(eos, state.rho)
    k = coefficients(eos, rho)
    dphi = hugoniot_derivative(eos, state, p, rho)
    return -2.0 * dphi / (kk.gamma * (2.0 * state.rho - k.gamma * (rho - state.rho)))


def compression_limit(eos: EosModel, state: FluidState) -> CompressionLimit:
    """Root of W(rho) = (rho/rho_k - 1) Gamma(rho) - 2.

    The root is clamped only to the admissible domain. beyond_validity flags a
    root past the density up to which C1-C3 are guaranteed (the JWL alpha bound).
    """
    rho_k = state.rho

    def w(rho):
        return (rho / rho_k - 1.0) * float(coefficients(eos, rho).gamma) - 2.0

    upper = eos.admissible_domain().upper
    if math.isfinite(upper) and w(upper) < 0:
        logger.debug(f"compressive limit beyond admissible bound {upper:.6g}; clamping")
        root = upper
    else:
        hi = 2.0 * rho_k
        while w(hi) < 0:
            hi *= 2.0
        if math.isfinite(upper):
            hi = min(hi, upper)
        root = float(brentq(w, rho_k, hi, xtol=1e-12 * rho_k, rtol=1e-12))
    beyond = root > eos.validity_domain().upper
    if beyond:
        logger.debug(f"compressive limit {root:.6g} lies beyond the validity bound "
                     f"{eos.validity_domain().upper:.6g} of {eos.label()}")
    return CompressionLimit(root, beyond)


def rho_max(eos: EosModel, state: FluidState) -> float:
    """Compressive limit of the density behind a shock from state."""
    return compression_limit(eos, state).rho


def hugoniot_density(eos: EosModel, state: FluidState, p: float,
                     tol: float = DEFAULT_HUGONIOT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    """Density behind a shock of post-shock pressure p.

    Newton iteration on the Hugoniot function, started from the acoustic
    estimate and kept inside the bracket [rho_k, rho_max] by bisection.

    Raises:
        ValueError: p <= p_k
        HugoniotDomainError: no sign change inside the validity interval
        NonConvergence: iteration limit reached
    """
    if not p > state.p:
        raise ValueError(f"hugoniot_density requires p > p_k (got p={p!r}, p_k={state.p!r})")
    limit = compression_limit(eos, state)
    lo, hi = state.rho, limit.rho
    if not float(hugoniot_function(eos, state, p, hi)) < 0:
        raise HugoniotDomainError(
            f"Hugoniot out of domain: no root for p={p:.9g} Pa below rho={hi:.9g} kg/m^3 "
            f"({eos.label()})",
            p, hi,
        )
    c_k = float(sound_speed(eos, state.rho, state.p))
    rho = state.rho + (p - state.p) / c_k**2
    if not lo < rho < hi:
        rho = hi
    history = [rho]
    for _ in range(max_iter):
        phi = float(hugoniot_function(eos, state, p, rho))
        if phi > 0:
            lo = rho
        elif phi < 0:
            hi = rho
        else:
            return rho
        dphi = float(hugoniot_derivative(eos, state, p, rho))
        new = rho - phi / dphi if dphi < 0 else math.nan
        if not lo < new < hi:
            logger.debug(f"hugoniot Newton step left bracket at p={p:.6g}; bisecting")
            new = 0.5 * (lo + hi)
        history.append(new)
        if abs(new - rho) <= tol * new:
            return new
        rho = new
    raise NonConvergence(f"Hugoniot density did not converge for p={p:.9g} Pa", history)


def shock_branch(eos: EosModel, state: FluidState, p: float,
                 hugoniot_tol: float = DEFAULT_HUGONIOT_TOL) -> BranchValue:
    """Shock branch F_k(p) and its derivative for p > p_k."""
    rho_t = hugoniot_density(eos, state, p, tol=hugoniot_tol)
    jump = p - state.p
    dv = 1.0 / state.rho - 1.0 / rho_t
    F = math.sqrt(max(jump * dv, 0.0))
    if F == 0.0:
        c_k = float(sound_speed(eos, state.rho, state.p))
        return BranchValue(0.0, 1.0 / (state.rho * c_k), rho_t, WaveType.SHOCK)
    chi = float(hugoniot_slope(eos, state, p, rho_t))
    Fp = (dv + jump / (rho_t**2 * chi)) / (2.0 * F)
    return BranchValue(F, Fp, rho_t, WaveType.SHOCK)


# Isentrope

def _stage_speed_sq(eos: EosModel, domain: DensityInterval, rho: float, p: float, stage: int) -> float:
    if not (rho > 0 and bool(domain.contains(rho))):
        raise IsentropeBreakdown(
            f"isentrope breakdown at stage {stage}: rho={rho:.9g} kg/m^3 outside "
            f"{domain.describe()} at p={p:.9g} Pa ({eos.label()})",
            stage, p, rho,
        )
    c2 = float(sound_speed_squared(eos, rho, p))
    if not c2 > 0:
        raise IsentropeBreakdown(
            f"isentrope breakdown at stage {stage}: c^2={c2:.6g} at rho={rho:.9g} kg/m^3, "
            f"p={p:.9g} Pa ({eos.label()})",
            stage, p, rho,
        )
    return c2


def _rk4_step(eos: EosModel, domain: DensityInterval, p_a: float, rho_a: float,
              p_b: float) -> Tuple[float, float]:
    """One RK4 step of the isentrope from p_a to p_b.

    Returns the increment of the integral of dp/(rho c) and the density at p_b.
    """
    h = p_a - p_b
    p_mid = p_a - 0.5 * h
    c1 = _stage_speed_sq(eos, domain, rho_a, p_a, 1)
    rho2 = rho_a - h / (2.0 * c1)
    c2 = _stage_speed_sq(eos, domain, rho2, p_mid, 2)
    rho3 = rho_a - h / (2.0 * c2)
    c3 = _stage_speed_sq(eos, domain, rho3, p_mid, 3)
    rho4 = rho_a - h / c3
    c4 = _stage_speed_sq(eos, domain, rho4, p_b, 4)
    dF = -(h / 6.0) * (1.0 / (rho_a * math.sqrt(c1)) + 2.0 / (rho2 * math.sqrt(c2))
                       + 2.0 / (rho3 * math.sqrt(c3)) + 1.0 / (rho4 * math.sqrt(c4)))
    rho_b = rho_a - (h / 6.0) * (1.0 / c1 + 2.0 / c2 + 2.0 / c3 + 1.0 / c4)
    return dF, rho_b


def isentrope_nodes(p_start: float, p_end: float, substeps: int = DEFAULT_SUBSTEPS) -> np.ndarray:
    """Pressure nodes of the RK4 isentrope from p_start down to p_end.

    substeps equal pressure steps; any step that would lower the pressure by
    more than MAX_STEP_RATIO is split into geometrically spaced pieces no
    deeper than SPLIT_STEP_RATIO.
    """
    coarse = np.linspace(p_start, p_end, substeps + 1)
    coarse[-1] = p_end
    ratios = coarse[:-1] / coarse[1:]
    deep = ratios > MAX_STEP_RATIO
    if not np.any(deep):
        return coarse
    pieces = np.where(deep, np.ceil(np.log(ratios) / math.log(SPLIT_STEP_RATIO) - 1e-9), 1).astype(int)
    parts = [coarse[:1]]
    for p_a, p_b, n in zip(coarse[:-1], coarse[1:], pieces):
        parts.append(np.geomspace(p_a, p_b, max(int(n), 1) + 1)[1:])
    nodes = np.concatenate(parts)
    nodes[-1] = p_end
    return nodes


def rarefaction_branch(eos: EosModel, state: FluidState, p: float,
                       substeps: int = DEFAULT_SUBSTEPS) -> BranchValue:
    """Rarefaction branch F_k(p) and its derivative for p <= p_k.

    Args:
        eos: Model of this side
        state: Initial state (rho_k, u_k, p_k)
        p: Target pressure
        substeps: Equal RK4 steps between p_k and p (1 is the single-step scheme;
            steps deeper than MAX_STEP_RATIO are split, see isentrope_nodes)

    Raises:
        ValueError: p > p_k or substeps outside [1, MAX_SUBSTEPS]
        IsentropeBreakdown: a stage density leaves the admissible domain or c^2 <= 0
    """
    if p > state.p:
        raise ValueError(f"rarefaction_branch requires p <= p_k (got p={p!r}, p_k={state.p!r})")
    if not 1 <= substeps <= MAX_SUBSTEPS:
        raise ValueError(f"substeps must be between 1 and {MAX_SUBSTEPS} (got {substeps})")
    domain = eos.admissible_domain()
    if p == state.p:
        c_k = math.sqrt(_stage_speed_sq(eos, domain, state.rho, state.p, 1))
        return BranchValue(0.0, 1.0 / (state.rho * c_k), state.rho, WaveType.RAREFACTION)
    nodes = isentrope_nodes(state.p, p, substeps)
    F = 0.0
    rho = state.rho
    for p_a, p_b in zip(nodes[:-1], nodes[1:]):
        dF, rho = _rk4_step(eos, domain, float(p_a), rho, float(p_b))
        F += dF
    c_end = math.sqrt(_stage_speed_sq(eos, domain, rho, p, 5))
    return BranchValue(F, 1.0 / (rho * c_end), rho, WaveType.RAREFACTION)


def wave_branch(eos: EosModel, state: FluidState, p: float, substeps: int = DEFAULT_SUBSTEPS,
                hugoniot_tol: float = DEFAULT_HUGONIOT_TOL) -> BranchValue:
    """Shock branch above p_k, rarefaction branch at or below it."""
    if p > state.p:
        return shock_branch(eos, state, p, hugoniot_tol)
    return rarefaction_branch(eos, state, p, substeps)


def pressure_function(eos_l: EosModel, state_l: FluidState, eos_r: EosModel, state_r: FluidState,
                      p: float, substeps: int = DEFAULT_SUBSTEPS,
                      hugoniot_tol: float = DEFAULT_HUGONIOT_TOL) -> float:
    """f(p) = F_l(p) + F_r(p) + u_r - u_l, increasing in p."""
    bl = wave_branch(eos_l, state_l, p, substeps, hugoniot_tol)
    br = wave_branch(eos_r, state_r, p, substeps, hugoniot_tol)
    return bl.F + br.F + state_r.u - state_l.u


def pressure_floor(state_l: FluidState, state_r: FluidState) -> float:
    """Lower clamp for Newton iterates.

    Every supported family has a defined sound speed for all p > 0 inside its
    admissible domain, so the floor is a fixed fraction of the smaller pressure.
    """
    p_min = min(state_l.p, state_r.p)
    if not p_min > 0:
        raise ValueError(f"solver requires positive initial pressures (got {state_l.p!r}, {state_r.p!r})")
    return PRESSURE_FLOOR_FRACTION * p_min


def acoustic_guess(eos_l: EosModel, state_l: FluidState, eos_r: EosModel, state_r: FluidState,
                   p_floor: Optional[float] = None) -> float:
    """Star pressure of the linearized (acoustic) Riemann problem, floored."""
    z_l = state_l.rho * validate_state(eos_l, state_l)
    z_r = state_r.rho * validate_state(eos_r, state_r)
    p0 = (z_l * state_r.p + z_r * state_l.p + z_l * z_r * (state_l.u - state_r.u)) / (z_l + z_r)
    if p_floor is None:
        p_floor = pressure_floor(state_l, state_r)
    return max(p0, p_floor)


# Vacuum

def _integral_on_nodes(eos: EosModel, domain: DensityInterval, state: FluidState,
                       p_floor: float, steps: int):
    nodes = np.geomspace(state.p, p_floor, steps + 1)
    nodes[-1] = p_floor
    total = 0.0
    rho = state.rho
    rho_prev = rho
    for p_a, p_b in zip(nodes[:-1], nodes[1:]):
        rho_prev = rho
        dF, rho = _rk4_step(eos, domain, float(p_a), rho, float(p_b))
        total -= dF
    p_prev = float(nodes[-2])
    g_prev = 1.0 / (rho_prev * math.sqrt(_stage_speed_sq(eos, domain, rho_prev, p_prev, 1)))
    g_floor = 1.0 / (rho * math.sqrt(_stage_speed_sq(eos, domain, rho, p_floor, 1)))
    return total, p_prev, g_prev, g_floor


def isentrope_integral(eos: EosModel, state: FluidState, p_floor: float,
                       rtol: float = VACUUM_RTOL, max_steps: int = 1 << 15) -> IsentropeIntegral:
    """Integral of dp/(rho c) along the isentrope from 0 to p_k.

    Adaptive RK4 on geometrically spaced nodes down to p_floor (step doubling
    until successive values agree to rtol), plus a power-law tail below the floor.
    """
    if not 0 < p_floor < state.p:
        raise ValueError(f"need 0 < p_floor < p_k (got {p_floor!r}, {state.p!r})")
    domain = eos.admissible_domain()
    steps = 64
    body, p_prev, g_prev, g_floor = _integral_on_nodes(eos, domain, state, p_floor, steps)
    converged = False
    while steps < max_steps:
        steps *= 2
        refined, p_prev, g_prev, g_floor = _integral_on_nodes(eos, domain, state, p_floor, steps)
        change = abs(refined - body)
        body = refined
        if change <= rtol * abs(body):
            converged = True
            break
    # g ~ p^(-a) near the floor
    a = math.log(g_floor / g_prev) / math.log(p_prev / p_floor)
    if a >= 1.0:
        converged = False
    a = min(max(a, 0.0), 0.999)
    tail = p_floor * g_floor / (1.0 - a)
    return IsentropeIntegral(body + tail, tail, converged)


def check_vacuum(eos_l: EosModel, state_l: FluidState, eos_r: EosModel,
                 state_r: FluidState, rtol: float = VACUUM_RTOL) -> VacuumCheck:
    """Margin of the vacuum condition; positive means a unique solution exists.

    Raises:
        IsentropeBreakdown: an isentrope fails before reaching the pressure floor
    """
    validate_state(eos_l, state_l)
    validate_state(eos_r, state_r)
    floor = pressure_floor(state_l, state_r)
    parts = []
    for eos, state in ((eos_l, state_l), (eos_r, state_r)):
        if state.p <= floor:
            parts.append(IsentropeIntegral(0.0, 0.0, True))
            continue
        parts.append(isentrope_integral(eos, state, floor, rtol))
    left, right = parts
    margin = left.value + right.value - (state_r.u - state_l.u)
    tail = left.tail + right.tail
    flagged = tail > 1e-6 * abs(margin)
    converged = left.converged and right.converged
    if not converged:
        logger.warning(f"vacuum integral not converged before p_floor={floor:.6g} Pa")
    elif flagged:
        logger.info(f"vacuum integral tail {tail:.6g} m/s exceeds 1e-6 of margin {margin:.6g} m/s")
    return VacuumCheck(margin, left.value, right.value, tail, converged, flagged)


def _ensure_solvable(eos_l, state_l, c_l, eos_r, state_r, c_r):
    du = state_r.u - state_l.u
    # The integrand 1/(rho c) grows as p falls when the fundamental derivative is positive.
    if du < state_l.p / (state_l.rho * c_l) + state_r.p / (state_r.rho * c_r):
        return
    check = check_vacuum(eos_l, state_l, eos_r, state_r)
    if check.margin <= 0:
        raise VacuumError(
            f"vacuum: u_r - u_l = {du:.9g} m/s exceeds the vacuum limit "
            f"{check.integral_l + check.integral_r:.9g} m/s",
            check.margin,
        )


# Star state

def _wave_speeds(eos: EosModel, state: FluidState, branch: BranchValue, u_star: float,
                 p_star: float, sign: float, c_k: float) -> Tuple[float, ...]:
    """Wave speeds on one side; sign is -1 for the left wave and +1 for the right."""
    if branch.wave is WaveType.SHOCK:
        if p_star - state.p <= WEAK_WAVE * state.p:
            return (state.u + sign * c_k,)
        sigma = (branch.rho * u_star - state.rho * state.u) / (branch.rho - state.rho)
        return (sigma,)
    c_star = float(sound_speed(eos, branch.rho, p_star))
    return (state.u + sign * c_k, u_star + sign * c_star)


def solve_star(eos_l: EosModel, state_l: FluidState, eos_r: EosModel, state_r: FluidState,
               tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
               substeps: int = DEFAULT_SUBSTEPS, hugoniot_tol: float = DEFAULT_HUGONIOT_TOL,
               check: bool = True) -> StarState:
    """Solve the two-medium Riemann problem for the star state.

    Args:
        eos_l, state_l: Left model and state
        eos_r, state_r: Right model and state
        tol: Relative pressure change that stops the outer iteration
        max_iter: Outer iteration limit
        substeps: RK4 steps per rarefaction-branch evaluation
        hugoniot_tol: Relative density change that stops the Hugoniot solve
        check: Verify the vacuum condition first

    Returns:
        StarState with star pressure, velocity, densities, wave types and speeds

    Newton steps that leave the sign-change bracket [lo, hi] of the increasing
    function f are replaced by a bisection in log pressure; the lower end starts
    at the pressure floor, which is evaluated once before the first step below it.

    Raises:
        VacuumError: initial data violate the vacuum condition, or f(p_floor) >= 0
        NonConvergence: max_iter exceeded
    """
    c_l = validate_state(eos_l, state_l)
    c_r = validate_state(eos_r, state_r)
    if check:
        _ensure_solvable(eos_l, state_l, c_l, eos_r, state_r, c_r)
    floor = pressure_floor(state_l, state_r)
    p = acoustic_guess(eos_l, state_l, eos_r, state_r, floor)
    du = state_r.u - state_l.u

    def evaluate(q):
        bl = wave_branch(eos_l, state_l, q, substeps, hugoniot_tol)
        br = wave_branch(eos_r, state_r, q, substeps, hugoniot_tol)
        return bl, br, bl.F + br.F + du

    lo, hi = floor, math.inf
    lo_evaluated = False
    history = [p]
    for iteration in range(1, max_iter + 1):
        bl, br, residual = evaluate(p)
        if residual < 0:
            lo, lo_evaluated = p, True
        elif residual > 0:
            hi = p
        slope = bl.Fp + br.Fp
        p_new = p - residual / slope if slope > 0 else math.nan
        if residual != 0 and not lo < p_new < hi:
            if not lo_evaluated:
                f_floor = evaluate(floor)[2]
                if f_floor >= 0:
                    raise VacuumError(f"vacuum: f(p_floor) = {f_floor:.6g} m/s >= 0", -f_floor)
                lo_evaluated = True
            p_new = math.sqrt(lo * hi) if math.isfinite(hi) else 2.0 * p
            logger.debug(f"iteration {iteration}: Newton step left [{lo:.6g}, {hi:.6g}]; bisecting")
        history.append(p_new)
        logger.debug(f"iteration {iteration}: p={p_new:.12g} residual={residual:.3e}")
        converged = abs(p_new - p) < tol * p_new or hi - lo < tol * hi
        p = p_new
        if converged:
            break
    else:
        raise NonConvergence(
            f"star pressure did not converge in {max_iter} iterations (last p={p:.9g} Pa)",
            history,
        )

    bl, br, residual = evaluate(p)
    u_star = 0.5 * (state_l.u + state_r.u + br.F - bl.F)
    return StarState(
        p_star=p,
        u_star=u_star,
        rho_star_l=bl.rho,
        rho_star_r=br.rho,
        wave_l=bl.wave,
        wave_r=br.wave,
        speeds_l=_wave_speeds(eos_l, state_l, bl, u_star, p, -1.0, c_l),
        speeds_r=_wave_speeds(eos_r, state_r, br, u_star, p, 1.0, c_r),
        iterations=iteration,
        residual=abs(residual),
        history=history,
    )


# Sampling

def _fan_state(eos: EosModel, state: FluidState, p_star: float, xi: float, sign: float,
               substeps: int) -> FluidState:
    """State inside a rarefaction fan where u + sign*c = xi."""
    domain = eos.admissible_domain()

    def characteristic(p, p_a, rho_a, F_a):
        if p == p_a:
            rho, F = rho_a, F_a
        else:
            dF, rho = _rk4_step(eos, domain, p_a, rho_a, p)
            F = F_a + dF
        u = state.u + sign * F
        c = math.sqrt(_stage_speed_sq(eos, domain, rho, p, 1))
        return u + sign * c - xi, rho, u

    nodes = isentrope_nodes(state.p, p_star, substeps)
    rho_a, F_a = state.rho, 0.0
    g_a = characteristic(float(nodes[0]), float(nodes[0]), rho_a, F_a)[0]
    for p_a, p_b in zip(nodes[:-1], nodes[1:]):
        p_a, p_b = float(p_a), float(p_b)
        g_b, rho_b, _ = characteristic(p_b, p_a, rho_a, F_a)
        if g_a == 0.0:
            return FluidState(rho_a, state.u + sign * F_a, p_a)
        if g_a * g_b <= 0:
            p = brentq(lambda q: characteristic(q, p_a, rho_a, F_a)[0], p_b, p_a,
                       xtol=1e-15 * state.p, rtol=1e-13)
            _, rho, u = characteristic(p, p_a, rho_a, F_a)
            return FluidState(rho, u, p)
        dF, _ = _rk4_step(eos, domain, p_a, rho_a, p_b)
        rho_a, F_a, g_a = rho_b, F_a + dF, g_b
    return FluidState(rho_a, state.u + sign * F_a, p_star)


def sample_solution(eos_l: EosModel, state_l: FluidState, eos_r: EosModel, state_r: FluidState,
                    star: StarState, xi_over_tau: float,
                    substeps: int = SAMPLE_SUBSTEPS) -> FluidState:
    """Self-similar solution at x/t = xi_over_tau."""
    xi = xi_over_tau
    if xi <= star.u_star:
        if star.wave_l is WaveType.SHOCK:
            return state_l if xi < star.speeds_l[0] else star.star_l
        head, tail = star.speeds_l
        if xi <= head:
            return state_l
        if xi >= tail:
            return star.star_l
        return _fan_state(eos_l, state_l, star.p_star, xi, -1.0, substeps)
    if star.wave_r is WaveType.SHOCK:
        return state_r if xi > star.speeds_r[0] else star.star_r
    head, tail = star.speeds_r
    if xi >= head:
        return state_r
    if xi <= tail:
        return star.star_r
    return _fan_state(eos_r, state_r, star.p_star, xi, 1.0, substeps)


def sample_profile(eos_l: EosModel, state_l: FluidState, eos_r: EosModel, state_r: FluidState,
                   star: StarState, x: np.ndarray, t: float, x0: float,
                   substeps: int = SAMPLE_SUBSTEPS) -> Dict[str, np.ndarray]:
    """Exact-solver profile at time t for positions x, interface initially at x0.

    Returns:
        dict of arrays x, rho, u, p, e and side labels ('minus' left of the contact)
    """
    x = np.asarray(x, dtype=float)
    out = {name: np.empty_like(x) for name in ('rho', 'u', 'p', 'e')}
    side = []
    for i, xi_pos in enumerate(x):
        if t > 0:
            xi = (xi_pos - x0) / t
        else:
            xi = -math.inf if xi_pos < x0 else math.inf
        s = sample_solution(eos_l, state_l, eos_r, state_r, star, xi, substeps)
        left = xi <= star.u_star
        model = eos_l if left else eos_r
        out['rho'][i] = s.rho
        out['u'][i] = s.u
        out['p'][i] = s.p
        out['e'][i] = float(internal_energy(model, s.rho, s.p))
        side.append('minus' if left else 'plus')
    out['x'] = x
    out['side'] = np.array(side)
    return out
