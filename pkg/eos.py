# Copyright Polymorph Corporation (2026)

"""
Mie-Grüneisen equations of state.

Every model has the form p(rho, e) = Gamma(rho) * rho * e + h(rho). Five
families are supported (ideal gas, stiffened gas, polynomial, JWL and
Cochran-Chan), each with analytic first and second derivatives of Gamma and h,
the derived thermodynamic quantities used by the Riemann solver, and the
density interval on which the structural conditions C1-C3 hold:

    C1: Gamma' <= 0, (rho Gamma)' >= 0, (rho Gamma)'' >= 0
    C2: 0 < Gamma <= Gamma_inf + 2
    C3: h' >= 0, h'' >= 0

All quantities are SI. Functions accept floats or numpy arrays.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, fields
from typing import Any, ClassVar, Dict, List, NamedTuple, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


class EosError(ValueError):
    """Base class for equation-of-state errors."""


class EosConfigError(EosError):
    """Coefficients violate the sufficient conditions of their family."""


class EosDomainError(EosError):
    """Density outside the validity domain of the model."""

    def __init__(self, message: str, rho: Optional[float] = None):
        super().__init__(message)
        self.rho = rho


class HyperbolicityError(EosDomainError):
    """Sound-speed radicand is not positive at (rho, p)."""

    def __init__(self, message: str, rho: Optional[float] = None, p: Optional[float] = None):
        super().__init__(message, rho)
        self.p = p


class CoeffBundle(NamedTuple):
    """Gamma(rho), h(rho) and their first two derivatives."""
    gamma: ArrayLike
    dgamma: ArrayLike
    d2gamma: ArrayLike
    h: ArrayLike
    dh: ArrayLike
    d2h: ArrayLike


class DensityInterval(NamedTuple):
    """Density interval on which C1-C3 are guaranteed."""
    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def contains(self, rho: ArrayLike) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        above = rho >= self.lower if self.lower_closed else rho > self.lower
        below = rho <= self.upper if self.upper_closed else rho < self.upper
        return above & below

    def describe(self) -> str:
        left = '[' if self.lower_closed else '('
        right = ']' if self.upper_closed else ')'
        return f"{left}{self.lower:.6g}, {self.upper:.6g}{right}"


class EosModel(ABC):
    """Common interface of the Mie-Grüneisen families."""

    kind: ClassVar[str] = ''

    @abstractmethod
    def _coefficients(self, rho: ArrayLike) -> CoeffBundle:
        ...

    @abstractmethod
    def validity_domain(self) -> DensityInterval:
        ...

    def admissible_domain(self) -> DensityInterval:
        """Densities the model accepts. Wider than validity_domain where that bound is only sufficient."""
        return self.validity_domain()

    @property
    @abstractmethod
    def gamma_infinity(self) -> float:
        ...

    @property
    def reference_density(self) -> float:
        return float(getattr(self, 'rho0', 1.0))

    def label(self) -> str:
        params = ', '.join(f"{f.name}={getattr(self, f.name):g}" for f in fields(self) if f.init)
        return f"{self.kind}({params})"


def _require_positive(model: EosModel, *names: str) -> None:
    for name in names:
        value = getattr(model, name)
        if not (math.isfinite(value) and value > 0):
            raise EosConfigError(f"{model.kind}: coefficient {name} must be positive (got {value!r})")


@dataclass(frozen=True)
class Ideal(EosModel):
    """Ideal gas, p = (gamma - 1) rho e."""
    gamma: float
    kind: ClassVar[str] = 'ideal'

    def __post_init__(self):
        if not self.gamma > 1:
            raise EosConfigError(f"ideal: gamma must exceed 1 (got {self.gamma!r})")

    def _coefficients(self, rho):
        zero = np.zeros_like(rho, dtype=float)
        return CoeffBundle(zero + (self.gamma - 1.0), zero, zero, zero, zero, zero)

    def validity_domain(self):
        return DensityInterval(0.0, math.inf)

    @property
    def gamma_infinity(self):
        return self.gamma - 1.0


@dataclass(frozen=True)
class Stiffened(EosModel):
    """Stiffened gas, p = (gamma - 1) rho e - gamma p_inf."""
    gamma: float
    p_inf: float
    kind: ClassVar[str] = 'stiffened'

    def __post_init__(self):
        if not self.gamma > 1:
            raise EosConfigError(f"stiffened: gamma must exceed 1 (got {self.gamma!r})")
        if not (math.isfinite(self.p_inf) and self.p_inf >= 0):
            raise EosConfigError(f"stiffened: p_inf must be non-negative (got {self.p_inf!r})")

    def _coefficients(self, rho):
        zero = np.zeros_like(rho, dtype=float)
        return CoeffBundle(zero + (self.gamma - 1.0), zero, zero,
                           zero - self.gamma * self.p_inf, zero, zero)

    def validity_domain(self):
        return DensityInterval(0.0, math.inf)

    @property
    def gamma_infinity(self):
        return self.gamma - 1.0

    @property
    def reference_density(self):
        return 1000.0


@dataclass(frozen=True)
class Polynomial(EosModel):
    """Polynomial EOS with mu = rho/rho0 - 1.

    Compression (mu >= 0): p = A1 mu + A2 mu^2 + A3 mu^3 + (B0 + B1 mu) rho0 e
    Tension (mu < 0):      p = T1 mu + T2 mu^2 + (B0 + B1 mu) rho0 e

    Both branches share Gamma = B1 + (B0 - B1) rho0 / rho, which keeps the
    sound speed continuous at mu = 0 whenever A1 = T1.
    """
    a1: float
    a2: float
    a3: float
    b0: float
    b1: float
    t1: float
    t2: float
    rho0: float
    kind: ClassVar[str] = 'polynomial'

    def __post_init__(self):
        _require_positive(self, 'a1', 'a2', 'a3', 'b0', 'b1', 't1', 'rho0')
        if not (math.isfinite(self.t2) and self.t2 >= 0):
            raise EosConfigError(f"polynomial: t2 must be non-negative (got {self.t2!r})")
        if not self.b1 <= self.b0 <= self.b1 + 2:
            raise EosConfigError(
                f"polynomial: requires b1 <= b0 <= b1 + 2 (got b0={self.b0}, b1={self.b1})"
            )
        if not self.t1 >= 2 * self.t2:
            raise EosConfigError(
                f"polynomial: requires t1 >= 2*t2 (got t1={self.t1}, t2={self.t2})"
            )

    def _coefficients(self, rho):
        rho0 = self.rho0
        mu = rho / rho0 - 1.0
        db = self.b0 - self.b1
        gamma = self.b1 + db * rho0 / rho
        dgamma = -db * rho0 / rho**2
        d2gamma = 2.0 * db * rho0 / rho**3

        compressed = mu >= 0
        h = np.where(compressed,
                     mu * (self.a1 + mu * (self.a2 + mu * self.a3)),
                     mu * (self.t1 + mu * self.t2))
        dh = np.where(compressed,
                      (self.a1 + 2.0 * self.a2 * mu + 3.0 * self.a3 * mu**2) / rho0,
                      (self.t1 + 2.0 * self.t2 * mu) / rho0)
        d2h = np.where(compressed,
                       (2.0 * self.a2 + 6.0 * self.a3 * mu) / rho0**2,
                       2.0 * self.t2 / rho0**2 + 0.0 * mu)
        return CoeffBundle(gamma, dgamma, d2gamma, h, dh, d2h)

    def validity_domain(self):
        return DensityInterval(self.b0 * self.rho0 / (self.b1 + 2.0), math.inf, lower_closed=True)

    @property
    def gamma_infinity(self):
        return self.b1


@dataclass(frozen=True)
class Jwl(EosModel):
    """Jones-Wilkins-Lee detonation-products EOS.

    h(rho) = A1 (1 - omega rho / (R1 rho0)) exp(-R1 rho0 / rho)
           + A2 (1 - omega rho / (R2 rho0)) exp(-R2 rho0 / rho)
    """
    a1: float
    a2: float
    omega: float
    r1: float
    r2: float
    rho0: float
    alpha: float = field(init=False, repr=False, compare=False)
    kind: ClassVar[str] = 'jwl'

    def __post_init__(self):
        _require_positive(self, 'a1', 'a2', 'omega', 'r1', 'r2', 'rho0')
        if not self.r1 > self.r2:
            raise EosConfigError(f"jwl: requires r1 > r2 (got r1={self.r1}, r2={self.r2})")
        # Upper bound of G(nu) = (A2 R2 / A1 R1)(2 + omega - R2 nu) exp((R1 - R2) nu).
        exponent = ((2.0 + self.omega) * (self.r1 - self.r2) - self.r2) / self.r2
        alpha = (self.a2 * self.r2**2 / (self.a1 * self.r1 * (self.r1 - self.r2))) * math.exp(exponent)
        object.__setattr__(self, 'alpha', alpha)

    def _coefficients(self, rho):
        rho0, omega = self.rho0, self.omega
        zero = np.zeros_like(rho, dtype=float)
        h = zero.copy()
        dh = zero.copy()
        d2h = zero.copy()
        for a, r in ((self.a1, self.r1), (self.a2, self.r2)):
            x = r * rho0 / rho
            decay = a * np.exp(-x)
            h = h + decay * (1.0 - omega / x)
            dh = dh + decay * (x / rho - omega / rho - omega / (r * rho0))
            d2h = d2h + decay * x / rho**2 * (x - 2.0 - omega)
        return CoeffBundle(zero + omega, zero, zero, h, dh, d2h)

    def validity_domain(self):
        upper = self.r1 * self.rho0 / (2.0 + self.omega + self.alpha)
        return DensityInterval(0.0, upper, upper_closed=True)

    def admissible_domain(self):
        # Beyond the alpha bound C1-C3 are no longer guaranteed; c^2 > 0 is still checked.
        return DensityInterval(0.0, math.inf)

    @property
    def gamma_infinity(self):
        return self.omega


@dataclass(frozen=True)
class CochranChan(EosModel):
    """Cochran-Chan EOS for condensed explosives.

    h(rho) = A1 (R1 - 1 - omega)/(R1 - 1) (rho/rho0)^R1
           - A2 (R2 - 1 - omega)/(R2 - 1) (rho/rho0)^R2
    """
    a1: float
    a2: float
    omega: float
    r1: float
    r2: float
    rho0: float
    kind: ClassVar[str] = 'cochran_chan'

    def __post_init__(self):
        _require_positive(self, 'a1', 'a2', 'omega', 'r1', 'r2', 'rho0')
        if not 1.0 < self.r2 <= 1.0 + self.omega <= self.r1:
            raise EosConfigError(
                "cochran_chan: requires 1 < r2 <= 1 + omega <= r1 "
                f"(got r1={self.r1}, r2={self.r2}, omega={self.omega})"
            )

    def _coefficients(self, rho):
        rho0, omega = self.rho0, self.omega
        x = rho / rho0
        zero = np.zeros_like(rho, dtype=float)
        h = zero.copy()
        dh = zero.copy()
        d2h = zero.copy()
        for a, r, sign in ((self.a1, self.r1, 1.0), (self.a2, self.r2, -1.0)):
            k = sign * a * (r - 1.0 - omega)
            h = h + k / (r - 1.0) * x**r
            dh = dh + k * r / ((r - 1.0) * rho0) * x**(r - 1.0)
            d2h = d2h + k * r / rho0**2 * x**(r - 2.0)
        return CoeffBundle(zero + omega, zero, zero, h, dh, d2h)

    def validity_domain(self):
        return DensityInterval(0.0, math.inf)

    @property
    def gamma_infinity(self):
        return self.omega


EOS_KINDS = {cls.kind: cls for cls in (Ideal, Stiffened, Polynomial, Jwl, CochranChan)}

# Parameter sets of the benchmark problems
BUILTIN_EOS: Dict[str, EosModel] = {
    'ideal_air': Ideal(gamma=1.4),
    'ideal_products': Ideal(gamma=1.2),
    'ideal_gas_2': Ideal(gamma=2.0),
    'stiffened_water': Stiffened(gamma=7.15, p_inf=3.31e8),
    'polynomial_water': Polynomial(a1=2.2e9, a2=9.54e9, a3=1.45e10, b0=0.28, b1=0.28,
                                   t1=2.2e9, t2=0.0, rho0=1000.0),
    'jwl_shyue': Jwl(a1=8.545e11, a2=2.05e10, omega=0.25, r1=4.6, r2=1.35, rho0=1840.0),
    'jwl_tnt': Jwl(a1=3.712e11, a2=3.23e9, omega=0.30, r1=4.15, r2=0.95, rho0=1630.0),
    'cochran_chan_saurel': CochranChan(a1=8.192e8, a2=1.508e9, omega=1.19, r1=4.53, r2=1.42,
                                       rho0=1134.0),
}


def _as_output(value, scalar: bool):
    return float(value) if scalar else np.asarray(value, dtype=float)


def _check_positive(rho: ArrayLike) -> np.ndarray:
    arr = np.asarray(rho, dtype=float)
    bad = ~np.isfinite(arr) | (arr <= 0)
    if np.any(bad):
        worst = float(arr[bad].flat[0]) if arr.ndim else float(arr)
        raise EosDomainError(f"density must be positive and finite (got {worst!r})", worst)
    return arr


def check_density(eos: EosModel, rho: ArrayLike) -> np.ndarray:
    """Raise EosDomainError unless every density lies inside the admissible domain."""
    arr = _check_positive(rho)
    domain = eos.admissible_domain()
    inside = domain.contains(arr)
    if not np.all(inside):
        worst = float(arr[~inside].flat[0]) if arr.ndim else float(arr)
        raise EosDomainError(
            f"density {worst:.9g} kg/m^3 outside the admissible domain {domain.describe()} "
            f"of {eos.label()}",
            worst,
        )
    return arr


def coefficients(eos: EosModel, rho: ArrayLike) -> CoeffBundle:
    """Gamma, h and their first two derivatives at rho.

    Raises:
        EosDomainError: if any density is non-positive.
    """
    arr = _check_positive(rho)
    scalar = arr.ndim == 0
    bundle = eos._coefficients(arr)
    return CoeffBundle(*(_as_output(v, scalar) for v in bundle))


def gamma_infinity(eos: EosModel) -> float:
    return eos.gamma_infinity


def validity_domain(eos: EosModel) -> DensityInterval:
    return eos.validity_domain()


def pressure(eos: EosModel, rho: ArrayLike, e: ArrayLike) -> ArrayLike:
    """p = Gamma(rho) rho e + h(rho)."""
    arr = check_density(eos, rho)
    c = eos._coefficients(arr)
    p = c.gamma * arr * e + c.h
    return _as_output(p, np.ndim(p) == 0)


def internal_energy(eos: EosModel, rho: ArrayLike, p: ArrayLike) -> ArrayLike:
    """e = (p - h(rho)) / (Gamma(rho) rho)."""
    arr = check_density(eos, rho)
    c = eos._coefficients(arr)
    e = (p - c.h) / (c.gamma * arr)
    return _as_output(e, np.ndim(e) == 0)


def sound_speed_squared(eos: EosModel, rho: ArrayLike, p: ArrayLike) -> ArrayLike:
    """Raw radicand (1/rho + Gamma'/Gamma)(p - h) + p Gamma/rho + h'.

    No domain checks; callers that diagnose breakdown themselves use this.
    """
    c = eos._coefficients(rho)
    return (1.0 / rho + c.dgamma / c.gamma) * (p - c.h) + p * c.gamma / rho + c.dh


def sound_speed(eos: EosModel, rho: ArrayLike, p: ArrayLike) -> ArrayLike:
    """Speed of sound c(p, rho).

    Raises:
        EosDomainError: density outside the admissible domain.
        HyperbolicityError: non-positive radicand.
    """
    arr = check_density(eos, rho)
    c2 = sound_speed_squared(eos, arr, p)
    bad = ~(c2 > 0)
    if np.any(bad):
        idx = np.argmax(np.atleast_1d(bad))
        rho_bad = float(np.atleast_1d(np.broadcast_to(arr, np.shape(c2)))[idx])
        p_bad = float(np.atleast_1d(np.broadcast_to(p, np.shape(c2)))[idx])
        raise HyperbolicityError(
            f"hyperbolicity loss: c^2 <= 0 at rho={rho_bad:.9g} kg/m^3, p={p_bad:.9g} Pa "
            f"for {eos.label()}",
            rho_bad, p_bad,
        )
    c = np.sqrt(c2)
    return _as_output(c, np.ndim(c) == 0)


def fundamental_derivative(eos: EosModel, rho: ArrayLike, p: ArrayLike) -> ArrayLike:
    """Fundamental derivative of gas dynamics for a Mie-Grüneisen model."""
    arr = check_density(eos, rho)
    c2 = np.asarray(sound_speed(eos, arr, p), dtype=float) ** 2
    k = eos._coefficients(arr)
    e = (p - k.h) / (k.gamma * arr)
    d_rho_gamma = k.gamma + arr * k.dgamma
    d2_rho_gamma = 2.0 * k.dgamma + arr * k.d2gamma
    numerator = (0.5 * (arr * d2_rho_gamma + d_rho_gamma * (2.0 + k.gamma)) * e
                 + 0.5 * arr * k.d2h
                 + p / (2.0 * arr) * (k.gamma**2 + 2.0 * d_rho_gamma)
                 + 0.5 * (2.0 + k.gamma) * k.dh)
    g = numerator / c2
    return _as_output(g, np.ndim(g) == 0)


@dataclass
class ConditionResult:
    """Outcome of one structural check over a sample grid."""
    name: str
    passed: bool
    worst: float
    detail: str = ''


def default_density_grid(eos: EosModel, samples: int = 60) -> np.ndarray:
    """Log-spaced densities inside the validity domain around the reference density."""
    domain = eos.validity_domain()
    rho_ref = eos.reference_density
    lo = max(0.1 * rho_ref, domain.lower)
    hi = min(5.0 * rho_ref, domain.upper)
    grid = np.geomspace(lo, hi, samples)
    return grid[domain.contains(grid)]


def _fd_relative_error(analytic, f, rho, step, natural):
    """Centered-difference mismatch relative to the larger of the derivative and its natural scale."""
    fd = (f(rho + step) - f(rho - step)) / (2.0 * step)
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(fd)), natural)
    scale = np.maximum(scale, 1e-300)
    return np.abs(analytic - fd) / scale


def condition_report(eos: EosModel, rho_grid: Optional[np.ndarray] = None,
                     p_grid: Optional[np.ndarray] = None) -> List[ConditionResult]:
    """Check C1-C3, the fundamental derivative and derivative consistency on a grid.

    Args:
        eos: Model to check
        rho_grid: Densities to sample (defaults to default_density_grid)
        p_grid: Pressures for the fundamental-derivative sweep

    Returns:
        One ConditionResult per check
    """
    rho = np.asarray(rho_grid if rho_grid is not None else default_density_grid(eos), dtype=float)
    rho = rho[eos.validity_domain().contains(rho)]
    if p_grid is None:
        p_grid = np.geomspace(1e5, 1e12, 40)
    k = coefficients(eos, rho)
    gamma_inf = eos.gamma_infinity
    tiny = 1e-12

    results = []

    def record(name, violation, detail=''):
        worst = float(np.max(violation)) if np.size(violation) else 0.0
        results.append(ConditionResult(name, worst <= 0.0, worst, detail))

    scale_g = np.abs(k.gamma) / rho
    record("C1 Gamma' <= 0", k.dgamma - tiny * scale_g)
    record("C1 (rho Gamma)' >= 0", -(k.gamma + rho * k.dgamma) - tiny * np.abs(k.gamma))
    record("C1 (rho Gamma)'' >= 0", -(2.0 * k.dgamma + rho * k.d2gamma) - tiny * scale_g)
    record("C2 0 < Gamma <= Gamma_inf + 2",
           np.maximum(-k.gamma, k.gamma - (gamma_inf + 2.0) - tiny))
    scale_h = np.abs(k.h) / rho + np.abs(k.dh) + 1.0
    record("C3 h' >= 0", -k.dh - tiny * scale_h)
    record("C3 h'' >= 0", -k.d2h - tiny * scale_h / rho)

    # Centered differences away from the polynomial branch switch
    step = 1e-5 * rho
    mask = np.ones_like(rho, dtype=bool)
    if isinstance(eos, Polynomial):
        mask = np.abs(rho - eos.rho0) > 2.0 * step
    r = rho[mask]
    s = step[mask]
    fd_tol = 1e-6

    def field_of(name):
        return lambda x: getattr(eos._coefficients(x), name)

    g0, g1, h0, h1 = (np.abs(v[mask]) for v in (k.gamma, k.dgamma, k.h, k.dh))
    errors = [
        _fd_relative_error(k.dgamma[mask], field_of('gamma'), r, s, g0 / r),
        _fd_relative_error(k.d2gamma[mask], field_of('dgamma'), r, s, np.maximum(g1, g0 / r) / r),
        _fd_relative_error(k.dh[mask], field_of('h'), r, s, h0 / r),
        _fd_relative_error(k.d2h[mask], field_of('dh'), r, s, np.maximum(h1, h0 / r) / r),
    ]
    worst_fd = max((float(np.max(err)) for err in errors if np.size(err)), default=0.0)
    results.append(ConditionResult("finite-difference derivatives", worst_fd <= fd_tol,
                                   worst_fd - fd_tol, f"max relative error {worst_fd:.3e}"))

    rr, pp = np.meshgrid(rho, np.asarray(p_grid, dtype=float), indexing='ij')
    kk = eos._coefficients(rr)
    admissible = (pp > np.maximum(kk.h, 0.0)) & (sound_speed_squared(eos, rr, pp) > 0)
    if np.any(admissible):
        g = fundamental_derivative(eos, rr[admissible], pp[admissible])
        record("fundamental derivative > 0", -np.asarray(g),
               f"{int(np.count_nonzero(admissible))} admissible samples")
    else:
        results.append(ConditionResult("fundamental derivative > 0", False, math.inf,
                                       "no admissible samples"))

    if isinstance(eos, Polynomial):
        eps = 1e-12
        p_ref = 1e5
        c_lo = math.sqrt(sound_speed_squared(eos, eos.rho0 * (1.0 - eps), p_ref))
        c_hi = math.sqrt(sound_speed_squared(eos, eos.rho0 * (1.0 + eps), p_ref))
        jump = abs(c_hi - c_lo) / c_hi
        results.append(ConditionResult("sound speed continuous at mu=0", jump <= 1e-10,
                                       jump - 1e-10, f"relative jump {jump:.3e}"))

    domain = eos.validity_domain()
    results.append(ConditionResult("validity domain", True, 0.0, domain.describe()))
    return results


def eos_to_dict(eos: EosModel) -> Dict[str, Any]:
    """Tagged JSON record for a model."""
    record: Dict[str, Any] = {'kind': eos.kind}
    for f in fields(eos):
        if f.init:
            record[f.name] = getattr(eos, f.name)
    return record


def eos_from_dict(record: Dict[str, Any]) -> EosModel:
    """Build a model from a tagged record, or a builtin name string.

    Raises:
        EosConfigError: unknown kind, missing or unexpected fields.
    """
    if isinstance(record, str):
        if record not in BUILTIN_EOS:
            raise EosConfigError(f"unknown builtin EOS {record!r}; known: {', '.join(sorted(BUILTIN_EOS))}")
        return BUILTIN_EOS[record]
    if not isinstance(record, dict) or 'kind' not in record:
        raise EosConfigError(f"EOS record needs a 'kind' field (got {record!r})")
    kind = record['kind']
    cls = EOS_KINDS.get(kind)
    if cls is None:
        raise EosConfigError(f"unknown EOS kind {kind!r}; expected one of {', '.join(EOS_KINDS)}")
    names = [f.name for f in fields(cls) if f.init]
    params = {k: v for k, v in record.items() if k != 'kind'}
    missing = [n for n in names if n not in params]
    extra = [k for k in params if k not in names]
    if missing or extra:
        raise EosConfigError(f"{kind}: missing fields {missing} / unexpected fields {extra}")
    try:
        return cls(**{n: float(params[n]) for n in names})
    except (TypeError, ValueError) as e:
        if isinstance(e, EosConfigError):
            raise
        raise EosConfigError(f"{kind}: invalid coefficient value ({e})") from e
