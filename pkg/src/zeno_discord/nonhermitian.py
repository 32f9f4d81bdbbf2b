"""Two-level system under continuous, high-precision energy measurement.

The measurement adds an anti-Hermitian term to the Hamiltonian whose
strength grows as the precision E_r sharpens. Occupation probabilities are
available in two modes:

``propagator``
    From the explicit 2x2 propagator, internally consistent; the default.
``printed``
    Stand-alone resonant closed forms for the coherent, incoherent and
    exceptional-point regimes, kept as a regression baseline. They are not
    the kappa -> 0 limit of each other and do not conserve probability even
    without measurement back-action.
"""
from __future__ import annotations

import cmath
import enum
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .correlations import CorrelationReport, Side, Status, discord
from .dynamics import InitialState, Partition, partition_state
from .errors import DomainError
from .qstate import ValidationMode
from .spinboson import SurvivalPair

log = logging.getLogger(__name__)

EP_RTOL = 1e-12
_SERIES_CUTOFF = 1e-6


@dataclass(frozen=True)
class PrecisionModel:
    e1: float
    e2: float
    e_target: float
    e_r: float
    v0: float
    omega: float
    tau_meas: float

    def __post_init__(self):
        if not self.e2 > self.e1:
            raise DomainError("need e2 > e1")
        if not self.e_r > 0:
            raise DomainError(f"precision e_r must be > 0, got {self.e_r}")
        if not self.tau_meas > 0:
            raise DomainError(f"measurement duration must be > 0, got {self.tau_meas}")
        if not self.v0 >= 0:
            raise DomainError(f"drive amplitude must be >= 0, got {self.v0}")

    @classmethod
    def unit_system(cls, r: float, *, v0: float = 1.0, delta_e: float = 1.0, tau: float = 2.0 * math.pi):
        """Resonantly driven model with E = E1 and precision r (hbar = 1)."""
        return cls(e1=0.0, e2=delta_e, e_target=0.0, e_r=r, v0=v0, omega=delta_e, tau_meas=tau)

    @property
    def delta_e(self) -> float:
        return self.e2 - self.e1


@dataclass(frozen=True)
class DecayParams:
    lambda1: float
    lambda2: float
    lambda_t: float

    @property
    def omega_shift(self) -> float:
        return self.lambda2 - self.lambda1


class Regime(str, enum.Enum):
    COHERENT = "coherent"
    INCOHERENT = "incoherent"
    EXCEPTIONAL = "exceptional"


def decay_params(m: PrecisionModel) -> DecayParams:
    denom = 2.0 * m.tau_meas * m.e_r**2
    return DecayParams(
        lambda1=(m.e1 - m.e_target) ** 2 / denom,
        lambda2=(m.e2 - m.e_target) ** 2 / denom,
        lambda_t=(m.e2 - m.e1) ** 2 / denom,
    )


def critical_precision(delta_e: float, tau: float, v0: float) -> float:
    """Precision E_r at which lambda_t equals the drive amplitude (exceptional point)."""
    if not (delta_e > 0 and tau > 0 and v0 > 0):
        raise DomainError("critical_precision needs positive arguments")
    return delta_e / math.sqrt(2.0 * tau * v0)


def regime(m: PrecisionModel) -> Regime:
    lam = decay_params(m).lambda_t
    if abs(m.v0 - lam) <= EP_RTOL * max(m.v0, lam):
        return Regime.EXCEPTIONAL
    return Regime.COHERENT if m.v0 > lam else Regime.INCOHERENT


def _cos_and_sinc(kappa: complex, t: float) -> tuple[complex, complex]:
    """cos(kappa t) and sin(kappa t)/kappa, both even in kappa."""
    z = kappa * t
    if abs(z) < _SERIES_CUTOFF:
        z2 = z * z
        return 1.0 - z2 / 2.0, t * (1.0 - z2 / 6.0)
    return cmath.cos(z), cmath.sin(z) / kappa


def propagator(m: PrecisionModel, t: float) -> np.ndarray:
    """2x2 matrix mapping (C1(0), C2(0)) to (C1(t), C2(t))."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    q = 0.5 * (m.omega - m.delta_e + 2j * decay_params(m).omega_shift)
    p = m.v0
    kappa = cmath.sqrt(q * q + p * p)
    cos_kt, sinc_kt = _cos_and_sinc(kappa, t)
    alpha1 = q * sinc_kt  # cos(theta) sin(kappa t)
    alpha2 = p * sinc_kt  # sin(theta) sin(kappa t)
    return np.array([[cos_kt - 1j * alpha1, -1j * alpha2], [-1j * alpha2, cos_kt + 1j * alpha1]])


class Occupation(NamedTuple):
    p11: float
    p10: float


def _printed(m: PrecisionModel, t: float) -> Occupation:
    lam = decay_params(m).lambda_t
    v0 = m.v0
    damp = math.exp(-lam * t)
    kind = regime(m)
    if kind is Regime.EXCEPTIONAL:
        x = 0.5 * lam * t
        return Occupation((1.0 - x) ** 2 * damp, x * x * damp)
    if kind is Regime.COHERENT:
        k0 = 2.0 * math.sqrt(v0 * v0 - lam * lam)
        c, s = math.cos(k0 * t), math.sin(k0 * t)
    else:
        k0 = 2.0 * math.sqrt(lam * lam - v0 * v0)
        with np.errstate(over="ignore"):
            c, s = float(np.cosh(k0 * t)), float(np.sinh(k0 * t))
    with np.errstate(all="ignore"):
        return Occupation(
            float(np.float64(damp) * (c - lam / k0 * s) ** 2),
            float(np.float64(damp) * (v0 / k0) ** 2 * s * s),
        )


def occupation_probs(m: PrecisionModel, t: float, mode: str = "propagator") -> Occupation:
    """Probabilities of finding |1> (p11) or |0> (p10) at time t, starting from |1>."""
    if t < 0:
        raise DomainError(f"t must be >= 0, got {t}")
    if mode == "printed":
        return _printed(m, t)
    if mode != "propagator":
        raise ValueError(f"unknown mode {mode!r}")
    with np.errstate(all="ignore"):
        u = propagator(m, t)
        damp = math.exp(-decay_params(m).lambda_t * t)
        out = Occupation(abs(u[1, 1]) ** 2 * damp, abs(u[0, 1]) ** 2 * damp)
    if log.isEnabledFor(logging.DEBUG):
        alt = _printed(m, t)
        gap = max(abs(out.p11 - alt.p11), abs(out.p10 - alt.p10))
        if gap > 1e-9:
            log.debug("propagator/printed modes differ by %.3e at t=%g", gap, t)
    return out


def mode_discrepancy(m: PrecisionModel, t: float) -> float:
    """Largest difference between the two occupation modes."""
    a = occupation_probs(m, t, "propagator")
    b = occupation_probs(m, t, "printed")
    return max(abs(a.p11 - b.p11), abs(a.p10 - b.p10))


def discord_under_measurement(
    m: PrecisionModel,
    t: float,
    init: InitialState,
    part: Partition | str,
    *,
    mode: str = "propagator",
    side: Side | str = Side.A,
) -> CorrelationReport:
    """Discord of the monitored pair with u^2 = p11 and v^2 = p10 (both qubits alike).

    Cells where the occupations are non-finite or exceed unit total, or where
    the resulting state leaves the entropy domain, come back indeterminate.
    """
    side = Side(side)
    occ = occupation_probs(m, t, mode)
    if not (math.isfinite(occ.p11) and math.isfinite(occ.p10)):
        return CorrelationReport(side, Status.INDETERMINATE, reason="non-finite occupation")
    if occ.p11 + occ.p10 > 1.0 + 1e-9:
        return CorrelationReport(side, Status.INDETERMINATE, reason="occupations sum above one")
    s = SurvivalPair.from_probabilities(occ.p11, occ.p10, lossy=True)
    return discord(partition_state(init, s, s, part), side, ValidationMode.LOSSY)
