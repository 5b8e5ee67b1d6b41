"""The machine's two unitaries plus projective collapse.

Control convention: the pair gate flips memory cell ``mu`` when the head is
in |0> (resonance) and does nothing when the head is in |1>.  This is the
opposite of the textbook CNOT.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .clusterops import apply_generator
from .errors import ImpossibleOutcomeError, SubsystemError
from .statespace import HEAD, check_subsystem, local_view, num_subsystems

MIN_PROBABILITY = 1e-14


def rotate_head(psi: np.ndarray, alpha: float) -> np.ndarray:
    """U_alpha(S) = cos(alpha/2) - i sin(alpha/2) lambda_1(S)."""
    c, s = np.cos(alpha / 2), np.sin(alpha / 2)
    view = local_view(psi, HEAD)
    out = np.empty_like(view)
    out[:, 0, :] = c * view[:, 0, :] - 1j * s * view[:, 1, :]
    out[:, 1, :] = -1j * s * view[:, 0, :] + c * view[:, 1, :]
    return out.reshape(psi.shape)


def _check_memory(mu: int, n: int) -> None:
    check_subsystem(mu, n)
    if mu == HEAD:
        raise SubsystemError("pair gate target must be a memory cell (mu >= 1)")


def cnot(psi: np.ndarray, mu: int) -> np.ndarray:
    """Zero-controlled NOT: flip bit ``mu`` on components whose head bit is 0."""
    n = num_subsystems(psi)
    _check_memory(mu, n)
    view = local_view(psi, mu)
    out = view.copy()
    # The last axis runs over bits 0..mu-1; even positions have head bit 0.
    out[:, 0, 0::2] = view[:, 1, 0::2]
    out[:, 1, 0::2] = view[:, 0, 0::2]
    return out.reshape(psi.shape)


def project(psi: np.ndarray, mu: int, outcome: int) -> tuple[np.ndarray, float]:
    """Collapse subsystem ``mu`` onto |outcome>; returns (state, probability)."""
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    view = local_view(psi, mu)
    out = np.zeros_like(view)
    out[:, outcome, :] = view[:, outcome, :]
    probability = float(np.vdot(out, out).real)
    if probability < MIN_PROBABILITY:
        raise ImpossibleOutcomeError(
            f"outcome {outcome} on subsystem {mu} has probability {probability:.3e}"
        )
    return out.reshape(psi.shape) / np.sqrt(probability), probability


def commutator_residual(alpha: float, mu: int, psi: np.ndarray) -> float:
    """Distance between [U(S,mu), U_alpha(S)] psi and its closed form.

    The closed form is sin(alpha/2) (1 - lambda_1(mu)) lambda_2(S) psi.
    """
    _check_memory(mu, num_subsystems(psi))
    lhs = cnot(rotate_head(psi, alpha), mu) - rotate_head(cnot(psi, mu), alpha)
    l2 = apply_generator(psi, HEAD, 2)
    rhs = np.sin(alpha / 2) * (l2 - apply_generator(l2, mu, 1))
    return float(np.linalg.norm(lhs - rhs))


@dataclass(frozen=True)
class HeadRotation:
    alpha: float


@dataclass(frozen=True)
class PairCnot:
    target: int

    def __post_init__(self):
        if self.target < 1:
            raise SubsystemError("pair gate target must be a memory cell (mu >= 1)")


@dataclass(frozen=True)
class Projection:
    subsystem: int
    outcome: int

    def __post_init__(self):
        if self.outcome not in (0, 1):
            raise ValueError(f"outcome must be 0 or 1, got {self.outcome!r}")


GateOp = Union[HeadRotation, PairCnot, Projection]


def apply_gate(psi: np.ndarray, op: GateOp) -> np.ndarray:
    if isinstance(op, HeadRotation):
        return rotate_head(psi, op.alpha)
    if isinstance(op, PairCnot):
        return cnot(psi, op.target)
    if isinstance(op, Projection):
        return project(psi, op.subsystem, op.outcome)[0]
    raise TypeError(f"unknown gate {op!r}")
