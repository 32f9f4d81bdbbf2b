"""Entanglement and discord-type correlations of two-qubit states.

Quantum discord is computed with rank-one projective measurements on one
side, optimised over the Bloch sphere by a fixed coarse grid followed by a
Nelder-Mead refinement. The run is deterministic: same input, same bits.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DomainError, IndeterminateEntropy
from .qstate import (
    NEGATIVE_EIG_TOL,
    ValidationMode,
    XState,
    binary_entropy,
    eigenvalues_hermitian,
    entropy_from_eigenvalues,
    partial_trace,
    validate_state,
)

THETA_GRID = 60
PHI_GRID = 24
REFINE_XATOL = 1e-7
DISCORD_CLAMP = 1e-6

_SY_SY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


class Side(str, enum.Enum):
    A = "A"
    B = "B"


class Status(str, enum.Enum):
    DETERMINATE = "determinate"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class MeasurementBasis:
    """Projector onto cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> and its complement."""

    theta: float
    phi: float

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        n0, n1 = _basis_vectors(np.array([self.theta]), np.array([self.phi]))
        return n0[0], n1[0]

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        n0, _ = self.vectors()
        p0 = np.outer(n0, n0.conj())
        return p0, np.eye(2) - p0


@dataclass(frozen=True)
class CorrelationReport:
    side: Side
    status: Status
    concurrence: float | None = None
    mutual_info: float | None = None
    classical_corr: float | None = None
    discord: float | None = None
    basis: MeasurementBasis | None = None
    reason: str | None = None

    @property
    def determinate(self) -> bool:
        return self.status is Status.DETERMINATE


def _matrix(m) -> np.ndarray:
    return m.to_matrix() if isinstance(m, XState) else np.asarray(m, dtype=complex)


def concurrence(x: XState) -> float:
    """Wootters concurrence of an X state from its closed form."""
    return 2.0 * max(
        0.0,
        abs(x.outer) - math.sqrt(max(x.d2 * x.d3, 0.0)),
        abs(x.inner) - math.sqrt(max(x.d1 * x.d4, 0.0)),
    )


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    w = np.where(w > 1e-15 * max(w.max(), 1e-300), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def concurrence_wootters(m) -> float:
    """Concurrence from the spin-flipped spectrum of a general two-qubit state.

    The square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy) are
    obtained as singular values of sqrt(rho) sqrt(rho_tilde), which keeps
    them accurate near zero.
    """
    rho = _matrix(m)
    root = _psd_sqrt(rho)
    root_tilde = _SY_SY @ root.conj() @ _SY_SY
    lam = np.linalg.svd(root @ root_tilde, compute_uv=False)
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def mutual_information(m) -> float:
    """I(rho) = S(rho_A) + S(rho_B) - S(rho) in bits."""
    rho = _matrix(m)
    return (
        entropy_from_eigenvalues(eigenvalues_hermitian(partial_trace(rho, 1)))
        + entropy_from_eigenvalues(eigenvalues_hermitian(partial_trace(rho, 2)))
        - entropy_from_eigenvalues(eigenvalues_hermitian(m if isinstance(m, XState) else rho))
    )


def _basis_vectors(theta: np.ndarray, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e = np.exp(1j * phi)
    n0 = np.stack([c + 0j, e * s], axis=-1)
    n1 = np.stack([-np.conj(e) * s, c + 0j], axis=-1)
    return n0, n1


def _side_blocks(rho: np.ndarray, side: Side) -> np.ndarray:
    """blocks[a, c] is the 2x2 operator on the unmeasured qubit multiplying conj(n_a) n_c."""
    r = rho.reshape(2, 2, 2, 2)
    return r.transpose(0, 2, 1, 3) if side is Side.A else r.transpose(1, 3, 0, 2)


def _conditional_entropies(rho: np.ndarray, theta: np.ndarray, phi: np.ndarray, side: Side) -> np.ndarray:
    """sum_k p_k S(rho_other|k) for a batch of measurement angles."""
    blocks = _side_blocks(rho, side)
    total = np.zeros(theta.shape)
    for n in _basis_vectors(theta, phi):
        w = n.conj()[:, :, None] * n[:, None, :]  # w[g, a, c] = conj(n_a) n_c
        sigma = w.reshape(-1, 4) @ blocks.reshape(4, 4)  # columns: (b, d) entries
        s00, s11 = sigma[:, 0].real, sigma[:, 3].real
        p = s00 + s11
        radius = np.hypot(0.5 * (s00 - s11), np.abs(sigma[:, 1]))
        for lam in (0.5 * p + radius, 0.5 * p - radius):
            if np.any(lam < -NEGATIVE_EIG_TOL * np.maximum(p, 1.0)):
                raise IndeterminateEntropy("post-measurement state has a negative eigenvalue")
            ok = (lam > 0.0) & (p > 0.0)
            ratio = np.where(ok, lam / np.where(p > 0, p, 1.0), 1.0)
            total -= np.where(ok, lam * np.log2(ratio), 0.0)
    return total


def _scalar_objective(rho: np.ndarray, side: Side):
    """Pure-Python version of _conditional_entropies for one angle pair (refinement hot loop)."""
    b = _side_blocks(rho, side)
    q00 = [complex(z) for z in b[0, 0].ravel()]
    q01 = [complex(z) for z in b[0, 1].ravel()]
    q10 = [complex(z) for z in b[1, 0].ravel()]
    q11 = [complex(z) for z in b[1, 1].ravel()]
    log2 = math.log2
    neg_tol = NEGATIVE_EIG_TOL

    def f(x):
        theta, phi = float(x[0]), float(x[1])
        c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
        e = complex(math.cos(phi), math.sin(phi))
        total = 0.0
        for n0, n1 in ((complex(c), e * s), (-e.conjugate() * s, complex(c))):
            w00 = (n0.conjugate() * n0).real
            w11 = (n1.conjugate() * n1).real
            w01 = n0.conjugate() * n1
            w10 = w01.conjugate()
            s00 = (w00 * q00[0] + w01 * q01[0] + w10 * q10[0] + w11 * q11[0]).real
            s11 = (w00 * q00[3] + w01 * q01[3] + w10 * q10[3] + w11 * q11[3]).real
            s01 = w00 * q00[1] + w01 * q01[1] + w10 * q10[1] + w11 * q11[1]
            p = s00 + s11
            radius = math.hypot(0.5 * (s00 - s11), abs(s01))
            for lam in (0.5 * p + radius, 0.5 * p - radius):
                if lam < -neg_tol * max(p, 1.0):
                    raise IndeterminateEntropy("post-measurement state has a negative eigenvalue")
                if lam > 0.0 and p > 0.0:
                    total -= lam * log2(lam / p)
        return total

    return f


def conditional_entropy_projective(m, basis: MeasurementBasis, side: Side | str = Side.A) -> float:
    """Average entropy of the unmeasured qubit after measuring ``side`` in ``basis``."""
    vals = _conditional_entropies(_matrix(m), np.array([basis.theta]), np.array([basis.phi]), Side(side))
    return float(vals[0])


def optimal_measurement(m, side: Side | str = Side.A) -> tuple[float, MeasurementBasis]:
    """Minimum conditional entropy over projective measurements and the minimiser."""
    side = Side(side)
    rho = _matrix(m)
    thetas = np.linspace(0.0, 0.5 * math.pi, THETA_GRID)
    phis = np.linspace(0.0, math.pi, PHI_GRID, endpoint=False)
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    vals = _conditional_entropies(rho, th.ravel(), ph.ravel(), side)
    # argmin returns the first minimum: smallest theta, then smallest phi
    best = int(np.argmin(vals))
    x0 = np.array([th.ravel()[best], ph.ravel()[best]])
    best_val = float(vals[best])

    objective = _scalar_objective(rho, side)
    step = np.array([thetas[1] - thetas[0], phis[1] - phis[0]])
    simplex = np.array([x0, x0 + [step[0], 0.0], x0 + [0.0, step[1]]])
    res = optimize.minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={"initial_simplex": simplex, "xatol": REFINE_XATOL, "fatol": 1e-15, "maxiter": 4000},
    )
    if res.fun < best_val:
        return float(res.fun), MeasurementBasis(float(res.x[0]), float(res.x[1]))
    return best_val, MeasurementBasis(float(x0[0]), float(x0[1]))


def classical_correlation(m, side: Side | str = Side.A) -> float:
    """S(rho_other) minus the minimal measurement-conditioned entropy."""
    side = Side(side)
    other = 2 if side is Side.A else 1
    s_other = entropy_from_eigenvalues(eigenvalues_hermitian(partial_trace(_matrix(m), other)))
    return s_other - optimal_measurement(m, side)[0]


def _indeterminate(side, reason, concurrence_value=None) -> CorrelationReport:
    return CorrelationReport(side, Status.INDETERMINATE, concurrence=concurrence_value, reason=reason)


def discord(m, side: Side | str = Side.A, mode: ValidationMode | str | None = None) -> CorrelationReport:
    """Full correlation report for a two-qubit state; failures go into ``status``.

    ``mode`` defaults to lossy for XStates tagged lossy and ideal otherwise.
    """
    side = Side(side)
    if mode is None:
        mode = ValidationMode.LOSSY if getattr(m, "lossy", False) else ValidationMode.IDEAL
    rho = _matrix(m)
    check = validate_state(rho, mode)
    if not check.ok:
        return _indeterminate(side, "; ".join(check.violations))
    if check.min_eigenvalue < -NEGATIVE_EIG_TOL:
        return _indeterminate(side, f"negative eigenvalue {check.min_eigenvalue:.3e}")
    conc = concurrence(m) if isinstance(m, XState) else concurrence_wootters(rho)
    try:
        spectra = [
            eigenvalues_hermitian(m if isinstance(m, XState) else rho),
            eigenvalues_hermitian(partial_trace(rho, 1)),
            eigenvalues_hermitian(partial_trace(rho, 2)),
        ]
        if any(ev.max() > 1.0 + NEGATIVE_EIG_TOL for ev in spectra):
            return _indeterminate(side, "entropy argument outside [0, 1]", conc)
        s_ab, s_a, s_b = (entropy_from_eigenvalues(ev) for ev in spectra)
        min_cond, basis = optimal_measurement(rho, side)
    except IndeterminateEntropy as exc:
        return _indeterminate(side, str(exc), conc)
    mutual = s_a + s_b - s_ab
    classical = (s_b if side is Side.A else s_a) - min_cond
    disc = mutual - classical
    if not all(math.isfinite(v) for v in (mutual, classical, disc)):
        return _indeterminate(side, "non-finite entropy", conc)
    if disc < -DISCORD_CLAMP:
        return _indeterminate(side, f"negative discord {disc:.3e}", conc)
    if disc < 0.0:
        disc, classical = 0.0, mutual
    return CorrelationReport(side, Status.DETERMINATE, conc, mutual, classical, disc, basis)


def _half_plus_root(radicand: float) -> float:
    if radicand < -1e-12:
        raise DomainError(f"negative radicand {radicand}")
    return 0.5 * (1.0 + math.sqrt(max(radicand, 0.0)))


def discord_closed_phi(b2: float, u: float, v: float) -> float:
    """Closed-form discord of the symmetric-decay phi state."""
    uv2 = (u * v) ** 2
    return binary_entropy(b2 * u * u) - binary_entropy(_half_plus_root(1.0 - 4.0 * b2 * uv2))


def discord_closed_psi(c2: float, u: float, v: float) -> float:
    """Closed-form discord of the symmetric-decay psi state, measuring qubit B.

    For a measurement on qubit A pass 1 - c2 instead.
    """
    d2 = 1.0 - c2
    uv2 = (u * v) ** 2
    return (
        binary_entropy(c2 * u * u)
        - binary_entropy(u * u)
        + binary_entropy(_half_plus_root(1.0 - 4.0 * d2 * uv2))
    )


def discord_difference_phi(b2: float, u: float, v: float) -> float:
    """Qubit-qubit minus reservoir-reservoir discord for the phi state."""
    return binary_entropy(b2 * u * u) - binary_entropy(b2 * v * v)
