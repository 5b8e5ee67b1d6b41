"""Differential checks: closed forms and identities against brute-force states."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import analytic, histories
from . import machine as mach
from .clusterops import expect_k, format_index
from .errors import ImpossibleOutcomeError
from .machine import MachineSpec, StepLabel

TOLERANCE = 1e-10

Predictor = Callable[[int, MachineSpec], analytic.PredictionSet]


@dataclass
class FamilyResult:
    name: str
    max_residual: float = 0.0
    worst: Optional[tuple] = None  # (m, j, index) of the largest residual
    checked: int = 0
    skipped: Optional[str] = None

    def update(self, residual: float, where: tuple) -> None:
        self.checked += 1
        if self.worst is None or residual > self.max_residual:
            self.max_residual = residual
            self.worst = where

    def ok(self, tol: float = TOLERANCE) -> bool:
        return self.skipped is not None or self.max_residual <= tol


@dataclass
class MachineReport:
    spec: MachineSpec
    period: Optional[int]
    period_rule: Optional[int]
    cycles: int
    families: dict[str, FamilyResult] = field(default_factory=dict)

    def ok(self, tol: float = TOLERANCE) -> bool:
        return all(f.ok(tol) for f in self.families.values())

    def failures(self, tol: float = TOLERANCE) -> list[FamilyResult]:
        return [f for f in self.families.values() if not f.ok(tol)]


def format_angle(angle: mach.Angle) -> str:
    if not isinstance(angle, Fraction):
        return repr(float(angle))
    x = 2 * angle
    if x == 0:
        return "0"
    num = "" if abs(x.numerator) == 1 else str(abs(x.numerator))
    sign = "-" if x < 0 else ""
    den = "" if x.denominator == 1 else f"/{x.denominator}"
    return f"{sign}{num}pi{den}"


def random_rational_machine(M: int, rng: np.random.Generator, max_den: int = 12) -> MachineSpec:
    """Angles 2pi * n/d with d uniform in 1..max_den and n uniform in 0..d-1."""
    angles = []
    for _ in range(M):
        d = int(rng.integers(1, max_den + 1))
        angles.append(Fraction(int(rng.integers(0, d)), d))
    return MachineSpec(tuple(angles), name="random")


def verify_machine(
    spec: MachineSpec,
    cycles: Optional[int] = None,
    predictor: Predictor = analytic.predict,
    max_period: int = mach.PERIOD_SCAN_CAP,
) -> MachineReport:
    """Run every differential family on one machine.

    Without ``cycles`` the horizon is the verified period, or ``max_period``
    when no period was found within that many cycles.
    """
    p = mach.period(spec, max_cycles=max_period)
    horizon = cycles or p or max_period
    report = MachineReport(spec, p, mach.period_rule(spec), horizon)
    closed = FamilyResult("closed_form")
    web = FamilyResult("web")
    periodic = FamilyResult("periodic")
    parallel = FamilyResult("parallelism")
    postpone = FamilyResult("postponement")
    report.families = {f.name: f for f in (closed, web, periodic, parallel, postpone)}

    M = spec.M
    standard = analytic.standard_indices(M)
    web_pairs = analytic.web_indices(M + 1)

    def hook(label: StepLabel, psi: np.ndarray) -> None:
        values = {}
        for pair, single in web_pairs:
            values[pair] = expect_k(psi, pair)
            values[single] = expect_k(psi, single)
        web.update(analytic.web_residual(values), (label.m, label.j, "web"))
        if label.j == 2 * M and spec.uniform:
            predicted = predictor(label.m, spec)
            for q in standard:
                residual = abs(predicted.values[q] - expect_k(psi, q))
                closed.update(residual, (label.m, label.j, format_index(q)))

    mach.run(spec, horizon, hook=hook)

    if not spec.uniform:
        reason = "angles vary from cycle to cycle"
        for fam in (closed, periodic, parallel):
            fam.skipped = reason
    else:
        if p is None:
            periodic.skipped = "no verified period"
        else:
            for m in range(1, p + 1):
                a, b = predictor(m, spec), predictor(m + p, spec)
                for q in standard:
                    periodic.update(abs(a.values[q] - b.values[q]), (m, 2 * M, format_index(q)))
        parallel.update(histories.parallelism_residual(spec), (1, 2 * M, "head"))

    for mu in range(1, M + 1):
        for outcome in (0, 1):
            try:
                residual = histories.postponement_residual(spec, mu, outcome)
            except ImpossibleOutcomeError:
                continue
            postpone.update(residual, (1, 2 * mu, f"cell {mu} -> {outcome}"))
    return report


def describe(report: MachineReport, tol: float = TOLERANCE) -> list[str]:
    spec = report.spec
    angles = ", ".join(format_angle(a) for a in spec.angles)
    lines = [f"machine {spec.name}  M={spec.M}  angles=({angles})"]
    period = "none" if report.period is None else str(report.period)
    rule = "none" if report.period_rule is None else str(report.period_rule)
    lines.append(f"  period {period} (arithmetic rule {rule}); cycles checked {report.cycles}")
    for fam in report.families.values():
        if fam.skipped:
            lines.append(f"  {fam.name:<13} skipped: {fam.skipped}")
            continue
        status = "ok" if fam.ok(tol) else "FAIL"
        lines.append(f"  {fam.name:<13} max residual {fam.max_residual:.3e}  {status}")
    return lines
