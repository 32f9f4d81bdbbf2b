"""Effective decay rate of a repeatedly measured spin-boson qubit.

Units: hbar = 1, frequencies and rates in the same units as ``omega_c``.
The "normalized" closed forms assume Delta^2 = 2, omega_c = 1, T = 0.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, EtaSingular, NegativeRate, QuadratureFailure, TruncationWarning

QUAD_EPSABS = 1e-10
QUAD_LIMIT = 10_000


@dataclass(frozen=True)
class SpinBosonParams:
    """Ohmic spin-boson parameters. ``beta = inf`` means zero temperature."""

    delta: float
    eta: float
    bias: float = 0.0
    omega_c: float = 1.0
    beta: float = math.inf

    def __post_init__(self):
        if not self.delta >= 0:
            raise DomainError(f"delta must be >= 0, got {self.delta}")
        if not self.eta > 0:
            raise DomainError(f"eta must be > 0, got {self.eta}")
        if not self.bias >= 0:
            raise DomainError(f"bias must be >= 0, got {self.bias}")
        if not self.omega_c > 0:
            raise DomainError(f"omega_c must be > 0, got {self.omega_c}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta}")

    @classmethod
    def normalized(cls, eta: float, bias: float = 0.0) -> "SpinBosonParams":
        return cls(delta=math.sqrt(2.0), eta=eta, bias=bias)

    def with_bias(self, bias: float) -> "SpinBosonParams":
        return SpinBosonParams(self.delta, self.eta, bias, self.omega_c, self.beta)


def _log_x_over_sinh(x: float) -> float:
    if x < 1e-4:
        x2 = x * x
        return -x2 / 6.0 + x2 * x2 / 180.0
    if x > 20.0:
        return math.log(2.0 * x) - x - math.log1p(-math.exp(-2.0 * x))
    return math.log(x / math.sinh(x))


def _magnitude(t: float, p: SpinBosonParams) -> float:
    """Non-oscillating part of the kernel: algebraic decay times thermal factor."""
    wt = p.omega_c * t
    log_mag = -p.eta * math.log1p(wt * wt)
    if math.isfinite(p.beta):
        # (pi/beta)^{2 eta} t^{2 eta} csch^{2 eta}(pi t / beta) = (x / sinh x)^{2 eta}
        log_mag += 2.0 * p.eta * _log_x_over_sinh(math.pi * t / p.beta)
    return math.exp(log_mag)


def _phase_shift(t: float, p: SpinBosonParams) -> float:
    return 2.0 * p.eta * math.atan(p.omega_c * t)


def kernel_time(t: float, p: SpinBosonParams) -> float:
    """Time-domain integrand of the effective rate (equal to 1 at t = 0)."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    return math.cos(p.bias * t + _phase_shift(t, p)) * _magnitude(t, p)


def gamma_rate(
    tau: float,
    p: SpinBosonParams,
    *,
    epsabs: float = QUAD_EPSABS,
    limit: int = QUAD_LIMIT,
) -> float:
    """Effective decay rate (Delta^2/2) * int_0^tau kernel_time(t) dt.

    Adaptive Gauss-Kronrod quadrature (QUADPACK) with absolute tolerance
    ``epsabs``; raises :class:`QuadratureFailure` if the error estimate is
    still above tolerance after ``limit`` subdivisions.
    """
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if tau == 0:
        return 0.0
    scale = 0.5 * p.delta**2
    value, abserr, info, *rest = integrate.quad(
        kernel_time, 0.0, tau, args=(p,), epsabs=epsabs, epsrel=0.0, limit=limit, full_output=1
    )
    if info["last"] >= limit and abserr > epsabs:
        raise QuadratureFailure(f"gamma_rate(tau={tau}): error {abserr:.2e} > {epsabs:.0e}")
    return scale * value


def gamma_closed(tau: float, eta: float, *, at_half: str = "raise") -> float:
    """Closed-form normalized rate.

    At eta = 1/2 (within 1e-9) the expression is 0/0. ``at_half="raise"``
    raises :class:`EtaSingular`; ``at_half="limit"`` returns the analytic
    limit arctan(tau).
    """
    if tau < 0:
        raise DomainError(f"tau must be >= 0, got {tau}")
    if abs(eta - 0.5) <= 1e-9:
        if at_half == "limit":
            return math.atan(tau)
        raise EtaSingular("closed-form rate is singular at eta = 1/2")
    phase = 2.0 * eta * math.atan(tau)
    return (1.0 + tau * tau) ** (-eta) * (math.sin(phase) - tau * math.cos(phase)) / (2.0 * eta - 1.0)


def gamma_derivative(tau: float, eta: float, bias: float = 0.0) -> float:
    """d(gamma)/d(tau) in normalized units, with bias entering the phase."""
    return (1.0 + tau * tau) ** (-eta) * math.cos(bias * tau + 2.0 * eta * math.atan(tau))


def large_tau_asymptote(tau: float, eta: float) -> float:
    """Leading large-tau behaviour of the normalized rate, eta != 1/2."""
    return math.cos(math.pi * eta) / (1.0 - 2.0 * eta) * tau ** (1.0 - 2.0 * eta)


class CrossoverKind(str, enum.Enum):
    UNBIASED = "unbiased"
    BIASED = "biased"
    NONE = "none"


@dataclass(frozen=True)
class CrossoverResult:
    kind: CrossoverKind
    tau_analytic: float | None = None
    tau_numeric: float | None = None
    mu: float | None = None


def crossover_time(p: SpinBosonParams, *, xtol: float = 1e-12) -> CrossoverResult:
    """Smallest tau > 0 at which the rate derivative changes sign.

    The thermal and algebraic factors of the kernel are positive, so the
    sign change happens where bias*tau + 2 eta arctan(omega_c tau) = pi/2
    at any temperature.
    """

    def phase(tau):
        return p.bias * tau + 2.0 * p.eta * math.atan(p.omega_c * tau) - 0.5 * math.pi

    if p.bias == 0.0:
        if p.eta <= 0.5:
            return CrossoverResult(CrossoverKind.NONE)
        analytic = math.tan(math.pi / (4.0 * p.eta)) / p.omega_c
    hi = 1.0
    while phase(hi) <= 0.0:
        hi *= 2.0
        if hi > 1e15:
            return CrossoverResult(CrossoverKind.NONE)
    root = optimize.bisect(phase, 0.0, hi, xtol=xtol, maxiter=200)
    if p.bias == 0.0:
        return CrossoverResult(CrossoverKind.UNBIASED, tau_analytic=analytic, tau_numeric=root)
    mu = (0.5 * math.pi - 2.0 * p.eta * math.atan(p.omega_c * root)) / p.bias
    return CrossoverResult(CrossoverKind.BIASED, tau_numeric=root, mu=mu)


def filter_function(omega, tau: float, bias: float = 0.0):
    """Spectral window of measurements spaced by tau, (tau/2pi) sinc^2((w-bias) tau/2)."""
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau}")
    x = (np.asarray(omega, dtype=float) - bias) * tau / 2.0
    out = tau / (2.0 * math.pi) * np.sinc(x / math.pi) ** 2
    return float(out) if np.ndim(out) == 0 else out


def filter_mass(tau: float, bias: float = 0.0, half_width: float | None = None) -> float:
    """Integral of the filter over |omega - bias| <= half_width (default 400/tau)."""
    if half_width is None:
        half_width = 400.0 / tau
    # integrate lobe by lobe; zeros are spaced 2 pi / tau apart
    edges = np.arange(0.0, half_width, 2.0 * math.pi / tau)
    edges = np.append(edges, half_width)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(lambda w: filter_function(w + bias, tau, bias), lo, hi, epsabs=1e-14)[0]
    return 2.0 * total


def _fourier(f, nu: float, kind: str, p: SpinBosonParams) -> float:
    """int_0^inf f(t) cos(nu t) or sin(nu t) dt with nu >= 0."""
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            if nu == 0.0:
                if kind == "sin":
                    return 0.0
                return integrate.quad(f, 0.0, math.inf, limit=1000)[0]
            return integrate.quad(f, 0.0, math.inf, weight=kind, wvar=nu, limlst=200, limit=1000)[0]
        except integrate.IntegrationWarning as exc:
            warnings.warn(f"coupling spectrum tail did not converge at nu={nu:g}: {exc}", TruncationWarning, stacklevel=3)
            return math.nan


def coupling_spectrum(omega: float, p: SpinBosonParams) -> float:
    """Reservoir coupling function K(omega) = 2 Re int_0^inf e^{i omega t} kernel_time(t) dt.

    The kernel is split into a slowly varying envelope times cos/sin of
    (omega +- bias) t, and each piece is integrated to infinity with a
    Fourier-weighted quadrature. At zero temperature the envelope decays only
    like t^{-2 eta}, so K diverges at omega = +-bias when eta <= 1/2; that
    case returns ``inf`` with a :class:`TruncationWarning`.
    """

    def c_env(t):
        return _magnitude(t, p) * math.cos(_phase_shift(t, p))

    def s_env(t):
        return _magnitude(t, p) * math.sin(_phase_shift(t, p))

    def cos_part(nu):
        if nu == 0.0 and not math.isfinite(p.beta) and p.eta <= 0.5:
            warnings.warn("zero-temperature coupling spectrum diverges at this frequency", TruncationWarning, stacklevel=3)
            return math.inf
        return _fourier(c_env, abs(nu), "cos", p)

    def sin_part(nu):
        return math.copysign(1.0, nu) * _fourier(s_env, abs(nu), "sin", p)

    nu_plus = omega + p.bias
    nu_minus = omega - p.bias
    return cos_part(nu_plus) + cos_part(nu_minus) - sin_part(nu_plus) + sin_part(nu_minus)


def gamma_overlap(tau: float, p: SpinBosonParams, *, cutoff_factor: float = 60.0) -> float:
    """Rate from the overlap 2 (Delta/2)^2 int_0^inf K(w) F_tau(w - bias) dw.

    The frequency integral is cut where the filter falls below 1e-12 of its
    peak or where K has decayed (``cutoff_factor`` * omega_c above the bias).
    """
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau}")
    upper = p.bias + min(2e6 / tau, cutoff_factor * p.omega_c)

    def integrand(w):
        return coupling_spectrum(w, p) * filter_function(w, tau, p.bias)

    pieces = [0.0, p.bias, upper] if p.bias > 0 else [0.0, upper]
    total = 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        total += integrate.quad(integrand, lo, hi, limit=500, epsabs=1e-9)[0]
    return 0.5 * p.delta**2 * total


@dataclass(frozen=True)
class SurvivalPair:
    """Amplitudes (u, v) of the undecayed and decayed branches."""

    u: float
    v: float
    lossy: bool = field(default=False)

    def __post_init__(self):
        if self.u < 0 or self.v < 0 or not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise DomainError(f"survival amplitudes must be finite and >= 0, got ({self.u}, {self.v})")
        norm = self.u**2 + self.v**2
        if self.lossy:
            if norm > 1.0 + 1e-9:
                raise DomainError(f"lossy survival norm {norm} exceeds 1")
        elif abs(norm - 1.0) > 1e-12:
            raise DomainError(f"ideal survival norm {norm} differs from 1")

    @classmethod
    def from_probabilities(cls, u2: float, v2: float, lossy: bool = False) -> "SurvivalPair":
        return cls(math.sqrt(u2), math.sqrt(v2), lossy)

    @property
    def u2(self) -> float:
        return self.u * self.u

    @property
    def v2(self) -> float:
        return self.v * self.v

    def swapped(self) -> "SurvivalPair":
        return SurvivalPair(self.v, self.u, self.lossy)


def survival(tau: float, p: SpinBosonParams, *, repeats: int = 1) -> SurvivalPair:
    """Survival amplitudes after measurement interval tau: u^2 = exp(-repeats gamma tau).

    Raises :class:`NegativeRate` when the rate is negative (possible under
    bias, where the kernel oscillates), since u^2 would then exceed one.
    """
    return survival_from_rate(gamma_rate(tau, p), tau, repeats=repeats)


def survival_from_rate(gamma: float, tau: float, *, repeats: int = 1) -> SurvivalPair:
    exponent = repeats * gamma * tau
    if exponent < 0:
        raise NegativeRate(f"effective rate {gamma:.6g} is negative at tau={tau}")
    return SurvivalPair(math.sqrt(math.exp(-exponent)), math.sqrt(-math.expm1(-exponent)))
