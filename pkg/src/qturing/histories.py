"""Reduced descriptions of the first cycle: decision trees and tape readout.

A head history lists the lambda_3 outcomes (+1 for |1>, -1 for |0>) the head
would show if it were measured right after each pair gate.  The pair gate
flips a cell exactly when the head is |0>, so in the first cycle tape bit
``mu`` is 1 iff the head outcome at T_2mu was -1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import machine as mach
from .errors import DimensionError, ImpossibleOutcomeError, UnsupportedError
from .gates import MIN_PROBABILITY, project
from .machine import MachineSpec
from .statespace import HEAD, TOL, reduced_density

MAX_BRANCH_M = 20


@dataclass
class HistoryBranch:
    outcomes: tuple[int, ...]
    probability: float
    final_head: np.ndarray

    @property
    def signs(self) -> str:
        return format_history(self.outcomes)

    @property
    def tape(self) -> str:
        return tape_bits(self.outcomes)


def format_history(outcomes: Sequence[int]) -> str:
    return "".join("+" if o > 0 else "-" for o in outcomes)


def tape_bits(outcomes: Sequence[int]) -> str:
    """Tape record left by a head history, cells 1..M left to right."""
    return "".join("1" if o < 0 else "0" for o in outcomes)


def history_from_tape(bits: str) -> tuple[int, ...]:
    return tuple(-1 if b == "1" else 1 for b in bits)


def _rotation(alpha: float) -> np.ndarray:
    c, s = np.cos(alpha / 2), np.sin(alpha / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _require_uniform(spec: MachineSpec) -> None:
    if not spec.uniform:
        raise UnsupportedError("decision trees are defined for uniform machines only")


def enumerate_histories(spec: MachineSpec, upto: Optional[int] = None) -> list[HistoryBranch]:
    """Exact decision tree of a lone head spin measured after every rotation.

    ``upto`` truncates the tree after that many measurements.  Branches whose
    probability falls below the projection threshold are dropped.
    """
    _require_uniform(spec)
    if spec.M > MAX_BRANCH_M:
        raise DimensionError(f"decision trees are capped at M = {MAX_BRANCH_M}")
    depth = spec.M if upto is None else upto
    if not 0 <= depth <= spec.M:
        raise ValueError(f"upto must lie in 0..{spec.M}")
    basis = np.eye(2, dtype=complex)
    branches = [((), 1.0, basis[0])]
    for alpha in [mach.radians(a) for a in spec.angles[:depth]]:
        rot = _rotation(alpha)
        grown = []
        for outcomes, prob, head in branches:
            rotated = rot @ head
            for bit, sign in ((1, 1), (0, -1)):
                born = float(abs(rotated[bit]) ** 2)
                if prob * born >= MIN_PROBABILITY:
                    grown.append((outcomes + (sign,), prob * born, basis[bit]))
        branches = grown
    return [HistoryBranch(o, p, h.copy()) for o, p, h in branches]


def ensemble_density(branches: Sequence[HistoryBranch], tol: float = TOL) -> np.ndarray:
    total = sum(b.probability for b in branches)
    if abs(total - 1.0) > tol:
        raise ValueError(f"branch probabilities sum to {total!r}, not 1")
    rho = np.zeros((2, 2), dtype=complex)
    for b in branches:
        rho += b.probability * np.outer(b.final_head, b.final_head.conj())
    return rho


def trace_distance(rho: np.ndarray, sigma: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho - sigma))))


def parallelism_residual(spec: MachineSpec) -> float:
    """Largest trace distance, over the first cycle's pair steps, between the
    machine head's reduced state and the measured-ensemble state."""
    _require_uniform(spec)
    worst = 0.0
    psi = spec.initial_state()
    for mu in range(1, spec.M + 1):
        psi = mach.step(psi, spec, 2 * mu - 1)
        psi = mach.step(psi, spec, 2 * mu)
        ensemble = ensemble_density(enumerate_histories(spec, upto=mu))
        worst = max(worst, trace_distance(reduced_density(psi, HEAD), ensemble))
    return worst


def parallelism_diagnostic(spec: MachineSpec, cycles: int) -> list[tuple[int, int, float]]:
    """Trace distances (m, j, d) at every pair step of several cycles.

    The ensemble side keeps measuring the lone spin after every rotation, which
    leaves its state diagonal, so it is propagated as a dephased density matrix.
    No bound is claimed beyond the first cycle.
    """
    _require_uniform(spec)
    out = []
    psi = spec.initial_state()
    rho = np.diag([1.0, 0.0]).astype(complex)
    for m in range(1, cycles + 1):
        for mu in range(1, spec.M + 1):
            psi = mach.step(mach.step(psi, spec, 2 * mu - 1, m), spec, 2 * mu, m)
            rot = _rotation(mach.radians(spec.angles_for(m)[mu - 1]))
            rho = np.diag(np.diag(rot @ rho @ rot.conj().T))
            out.append((m, 2 * mu, trace_distance(reduced_density(psi, HEAD), rho)))
    return out


def tape_distribution(psi: np.ndarray, cells: Sequence[int]) -> dict[str, float]:
    """Joint outcome probabilities from measuring ``cells`` one after another.

    Keys list the bits of cells in ascending cell order regardless of the
    measurement order.
    """
    results: dict[str, float] = {}
    order = sorted(cells)

    def descend(state, remaining, bits, prob):
        if not remaining:
            key = "".join(str(bits[c]) for c in order)
            results[key] = results.get(key, 0.0) + prob
            return
        cell, rest = remaining[0], remaining[1:]
        for outcome in (0, 1):
            try:
                collapsed, p = project(state, cell, outcome)
            except ImpossibleOutcomeError:
                continue
            descend(collapsed, rest, {**bits, cell: outcome}, prob * p)

    descend(psi, list(cells), {}, 1.0)
    return results


def tape_readout(spec: MachineSpec, cycle: int = 1) -> dict[str, HistoryBranch]:
    """Head history implied by each possible tape readout after cycle 1."""
    _require_uniform(spec)
    if cycle != 1:
        raise UnsupportedError("tape and head history only identify each other in cycle 1")
    psi = mach.run(spec, 1)
    M = spec.M
    out = {}
    # Rows: tape configuration (cells 1..M as an integer), columns: head bit.
    table = psi.reshape(2**M, 2)
    for tape_int in range(2**M):
        amps = table[tape_int]
        prob = float(np.vdot(amps, amps).real)
        if prob < MIN_PROBABILITY:
            continue
        bits = "".join(str((tape_int >> (mu - 1)) & 1) for mu in range(1, M + 1))
        out[bits] = HistoryBranch(history_from_tape(bits), prob, amps / np.sqrt(prob))
    return out


def postponement_residual(spec: MachineSpec, mu: int, outcome: int, cycle: int = 1) -> float:
    """Compare measuring cell ``mu`` right after its pair gate with measuring it
    at the end of the cycle.  Returns the larger of the state distance and the
    probability difference."""
    if not 1 <= mu <= spec.M:
        raise ValueError(f"memory cell {mu} outside 1..{spec.M}")
    start = mach.run(spec, cycle - 1)
    early = start
    prob_early = None
    for j in range(1, 2 * spec.M + 1):
        early = mach.step(early, spec, j, cycle)
        if j == 2 * mu:
            early, prob_early = project(early, mu, outcome)
    late, prob_late = project(mach.run(spec, 1, psi=start, first_cycle=cycle), mu, outcome)
    return max(float(np.linalg.norm(early - late)), abs(prob_early - prob_late))
