"""Reduced two-qubit (or two-reservoir) states of independently decaying qubits."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .qstate import XState
from .spinboson import SurvivalPair


class Family(str, enum.Enum):
    PHI = "phi"  # a|00> + b|11>
    PSI = "psi"  # c|01> + d|10>


class Partition(str, enum.Enum):
    QUBIT_QUBIT = "qubit_qubit"
    RESERVOIR_RESERVOIR = "reservoir_reservoir"


@dataclass(frozen=True)
class InitialState:
    family: Family
    amp: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not 0.0 <= self.amp <= 1.0:
            raise DomainError(f"amplitude must lie in [0, 1], got {self.amp}")

    @property
    def partner(self) -> float:
        return math.sqrt(max(0.0, 1.0 - self.amp * self.amp))


def _check_amp(amp: float) -> float:
    if not 0.0 <= amp <= 1.0:
        raise DomainError(f"amplitude must lie in [0, 1], got {amp}")
    return math.sqrt(max(0.0, 1.0 - amp * amp))


def evolve_phi(a: float, s1: SurvivalPair, s2: SurvivalPair) -> XState:
    """State of a|00> + b|11> after each qubit decays with amplitudes (u_i, v_i)."""
    b = _check_amp(a)
    b2 = b * b
    return XState(
        d1=a * a + b2 * s1.v2 * s2.v2,
        d2=b2 * s1.v2 * s2.u2,
        d3=b2 * s1.u2 * s2.v2,
        d4=b2 * s1.u2 * s2.u2,
        outer=a * b * s1.u * s2.u,
        lossy=s1.lossy or s2.lossy,
    )


def evolve_psi(c: float, s1: SurvivalPair, s2: SurvivalPair) -> XState:
    """State of c|01> + d|10> after each qubit decays with amplitudes (u_i, v_i)."""
    d = _check_amp(c)
    return XState(
        d1=c * c * s2.v2 + d * d * s1.v2,
        d2=c * c * s2.u2,
        d3=d * d * s1.u2,
        d4=0.0,
        inner=c * d * s1.u * s2.u,
        lossy=s1.lossy or s2.lossy,
    )


def partition_state(init: InitialState, s1: SurvivalPair, s2: SurvivalPair, part: Partition | str) -> XState:
    """Qubit-qubit state, or the reservoir-reservoir state obtained by swapping u and v."""
    if Partition(part) is Partition.RESERVOIR_RESERVOIR:
        s1, s2 = s1.swapped(), s2.swapped()
    if init.family is Family.PHI:
        return evolve_phi(init.amp, s1, s2)
    return evolve_psi(init.amp, s1, s2)
