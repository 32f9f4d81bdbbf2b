"""Small dense density-matrix utilities for one and two qubits.

Density matrices are plain ``numpy`` arrays of shape ``(2, 2)`` or ``(4, 4)``
in the computational basis ``|00>, |01>, |10>, |11>`` (qubit 1 is the left
tensor factor). Two-qubit states of X form have their own light-weight type,
:class:`XState`, whose spectrum is available in closed form.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, IndeterminateEntropy, NonHermitianInput

HERMITIAN_TOL = 1e-12
NEGATIVE_EIG_TOL = 1e-9
TRACE_TOL = 1e-9


class ValidationMode(str, enum.Enum):
    IDEAL = "ideal"
    LOSSY = "lossy"


@dataclass(frozen=True)
class XState:
    """Two-qubit X state.

    ``outer`` sits at positions (1,4)/(4,1) and ``inner`` at (2,3)/(3,2),
    both real. ``lossy`` marks states built from non-normalised survival
    amplitudes, where unit trace is not expected.
    """

    d1: float
    d2: float
    d3: float
    d4: float
    outer: float = 0.0
    inner: float = 0.0
    lossy: bool = field(default=False, compare=False)

    @property
    def diagonal(self) -> tuple[float, float, float, float]:
        return (self.d1, self.d2, self.d3, self.d4)

    @property
    def trace(self) -> float:
        return self.d1 + self.d2 + self.d3 + self.d4

    def to_matrix(self) -> np.ndarray:
        m = np.diag(np.array(self.diagonal, dtype=complex))
        m[0, 3] = m[3, 0] = self.outer
        m[1, 2] = m[2, 1] = self.inner
        return m

    def eigenvalues(self) -> np.ndarray:
        """Spectrum from the two decoupled 2x2 blocks, sorted descending."""
        ev = [
            *_block_eigenvalues(self.d1, self.d4, self.outer),
            *_block_eigenvalues(self.d2, self.d3, self.inner),
        ]
        return np.sort(np.array(ev))[::-1]


def _block_eigenvalues(a: float, d: float, c: float) -> tuple[float, float]:
    mean = 0.5 * (a + d)
    radius = math.hypot(0.5 * (a - d), c)
    return mean + radius, mean - radius


def _as_matrix(m) -> np.ndarray:
    if isinstance(m, XState):
        return m.to_matrix()
    return np.asarray(m, dtype=complex)


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    return bool(np.max(np.abs(m - m.conj().T)) <= tol * scale)


def eigenvalues_hermitian(m) -> np.ndarray:
    """Eigenvalues of a Hermitian 2x2 or 4x4 matrix (or an XState), descending.

    Raises
    ------
    NonHermitianInput
        If ``m`` differs from its conjugate transpose by more than 1e-12
        (relative to its largest entry when that exceeds one).
    """
    if isinstance(m, XState):
        return m.eigenvalues()
    m = _as_matrix(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not is_hermitian(m):
        raise NonHermitianInput("matrix is not Hermitian within tolerance")
    if m.shape == (2, 2):
        a, d, c = m[0, 0].real, m[1, 1].real, abs(m[0, 1])
        return np.array(_block_eigenvalues(a, d, c))
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))[::-1]


def entropy_from_eigenvalues(ev) -> float:
    """Shannon entropy (bits) of a spectrum, clamping round-off negatives."""
    ev = np.asarray(ev, dtype=float)
    if np.any(ev < -NEGATIVE_EIG_TOL):
        raise IndeterminateEntropy(f"eigenvalue {ev.min():.3e} below -{NEGATIVE_EIG_TOL:g}")
    ev = ev[ev > 0.0]
    return float(-np.sum(ev * np.log2(ev)))


def von_neumann_entropy(m) -> float:
    """Von Neumann entropy in bits, with 0 log 0 := 0."""
    return entropy_from_eigenvalues(eigenvalues_hermitian(m))


def binary_entropy(x: float) -> float:
    """H(x) = -x log2 x - (1-x) log2 (1-x)."""
    if not (-1e-12 <= x <= 1.0 + 1e-12):
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def partial_trace(m, keep: int) -> np.ndarray:
    """Reduce a two-qubit matrix to qubit ``keep`` (1 or 2)."""
    r = _as_matrix(m).reshape(2, 2, 2, 2)
    if keep == 1:
        return np.einsum("ijkj->ik", r)
    if keep == 2:
        return np.einsum("ijik->jk", r)
    raise ValueError(f"keep must be 1 or 2, got {keep!r}")


@dataclass(frozen=True)
class ValidationReport:
    mode: ValidationMode
    trace: float
    trace_deficit: float
    min_eigenvalue: float
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_state(m, mode: ValidationMode | str = ValidationMode.IDEAL) -> ValidationReport:
    """Check a density matrix against the ideal or lossy contract. Never raises."""
    mode = ValidationMode(mode)
    mat = _as_matrix(m)
    violations = []
    if not np.all(np.isfinite(mat)):
        return ValidationReport(mode, math.nan, math.nan, math.nan, ("non-finite entries",))
    if not is_hermitian(mat):
        violations.append("non-hermitian")
        herm = 0.5 * (mat + mat.conj().T)
    else:
        herm = mat
    trace = float(np.trace(herm).real)
    min_ev = float(np.min(np.linalg.eigvalsh(herm)))
    if mode is ValidationMode.IDEAL:
        if abs(trace - 1.0) > TRACE_TOL:
            violations.append(f"trace {trace:.12g} differs from 1")
        if min_ev < -NEGATIVE_EIG_TOL:
            violations.append(f"negative eigenvalue {min_ev:.3e}")
    elif trace > 1.0 + TRACE_TOL:
        violations.append(f"trace {trace:.12g} exceeds 1")
    return ValidationReport(mode, trace, 1.0 - trace, min_ev, tuple(violations))
