"""Built-in oracle suite run by ``zeno-discord validate``.

Each check pairs an implementation with an independent route and reports
the largest deviation seen against a fixed tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import correlations as corr
from .dynamics import evolve_phi
from .errors import EtaSingular, ZenoDiscordError
from .qstate import XState
from .spinboson import (
    QUAD_EPSABS,
    QUAD_LIMIT,
    SpinBosonParams,
    SurvivalPair,
    crossover_time,
    gamma_closed,
    gamma_derivative,
    gamma_rate,
)

ETAS = (0.05, 0.25, 0.75, 1.0)
TAU_GRID = np.linspace(0.01, 10.0, 50)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        text = f"{flag} {self.name}: max deviation {self.max_deviation:.3e} (tolerance {self.tolerance:.0e})"
        return f"{text} {self.detail}".rstrip()


def _result(name, dev, tol, detail="") -> CheckResult:
    return CheckResult(name, bool(dev <= tol), float(dev), tol, detail)


def check_closed_vs_quadrature(epsabs=QUAD_EPSABS, limit=QUAD_LIMIT) -> CheckResult:
    dev = 0.0
    for eta in ETAS:
        p = SpinBosonParams.normalized(eta)
        for tau in TAU_GRID:
            dev = max(dev, abs(gamma_rate(tau, p, epsabs=epsabs, limit=limit) - gamma_closed(tau, eta)))
    return _result("closed form vs quadrature", dev, 1e-8)


def check_derivative(h=1e-5) -> CheckResult:
    dev = 0.0
    for eta in ETAS:
        for tau in TAU_GRID:
            fd = (gamma_closed(tau + h, eta) - gamma_closed(tau - h, eta)) / (2 * h)
            dev = max(dev, abs(fd - gamma_derivative(tau, eta)))
    return _result("finite difference vs derivative", dev, 1e-6)


def check_crossover() -> CheckResult:
    dev = 0.0
    for eta in (0.6, 0.75, 1.0):
        res = crossover_time(SpinBosonParams.normalized(eta))
        dev = max(dev, abs(res.tau_numeric - math.tan(math.pi / (4 * eta))))
    return _result("crossover bisection vs tan(pi/(4 eta))", dev, 1e-6)


def check_eta_half(epsabs=QUAD_EPSABS, limit=QUAD_LIMIT) -> CheckResult:
    try:
        gamma_closed(1.0, 0.5)
    except EtaSingular:
        raised = True
    else:
        raised = False
    p = SpinBosonParams.normalized(0.5)
    dev = max(abs(gamma_closed(t, 0.5, at_half="limit") - gamma_rate(t, p, epsabs=epsabs, limit=limit)) for t in TAU_GRID)
    if not raised:
        dev = math.inf
    return _result("eta = 1/2 singular handling", dev, 1e-8, "(EtaSingular raised, limit used)" if raised else "")


def random_xstates(n: int, seed: int = 2024) -> list[XState]:
    """Random valid X states with both coherences present."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        d = rng.dirichlet(np.ones(4))
        outer = rng.uniform(-1, 1) * math.sqrt(d[0] * d[3])
        inner = rng.uniform(-1, 1) * math.sqrt(d[1] * d[2])
        out.append(XState(*d, outer=outer, inner=inner))
    return out


def check_wootters(n=1000) -> CheckResult:
    dev = max(abs(corr.concurrence(x) - corr.concurrence_wootters(x.to_matrix())) for x in random_xstates(n))
    return _result("X-state concurrence vs Wootters", dev, 1e-10)


def check_discord_closed_form() -> CheckResult:
    dev = 0.0
    for b2 in (0.2, 0.5, 0.8):
        for u2 in np.linspace(0.0, 1.0, 11):
            s = SurvivalPair.from_probabilities(u2, 1.0 - u2)
            rep = corr.discord(evolve_phi(math.sqrt(1.0 - b2), s, s))
            dev = max(dev, abs(rep.discord - corr.discord_closed_phi(b2, s.u, s.v)))
    return _result("optimizer discord vs closed form", dev, 1e-4)


def run_checks(*, quad_epsabs: float = QUAD_EPSABS, quad_limit: int = QUAD_LIMIT) -> list[CheckResult]:
    """Run every oracle check. The quadrature knobs exist so tests can loosen them."""
    checks = [
        ("closed form vs quadrature", lambda: check_closed_vs_quadrature(quad_epsabs, quad_limit)),
        ("finite difference vs derivative", check_derivative),
        ("crossover bisection vs tan(pi/(4 eta))", check_crossover),
        ("eta = 1/2 singular handling", lambda: check_eta_half(quad_epsabs, quad_limit)),
        ("X-state concurrence vs Wootters", check_wootters),
        ("optimizer discord vs closed form", check_discord_closed_form),
    ]
    results = []
    for name, fn in checks:
        try:
            results.append(fn())
        except ZenoDiscordError as exc:
            results.append(CheckResult(name, False, math.inf, math.nan, f"({type(exc).__name__}: {exc})"))
    return results
