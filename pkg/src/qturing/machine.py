"""The cyclic Turing sequencer.

One cycle is 2M ordered steps: odd step 2mu-1 rotates the head by alpha_mu,
even step 2mu applies the zero-controlled NOT between head and cell mu.

Angles are either ``Fraction`` values, meaning that fraction of a full turn
(``Fraction(1, 4)`` is pi/2), or plain floats in radians.  Only the exact
form takes part in period detection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import DimensionError, UnsupportedError
from .gates import GateOp, HeadRotation, PairCnot, apply_gate
from .statespace import TOL, equal_up_to_global_phase, ground_state, num_subsystems

Angle = Union[Fraction, float]

MAX_M = 20
PERIOD_SCAN_CAP = 64


def radians(angle: Angle) -> float:
    if isinstance(angle, Fraction):
        return 2 * math.pi * float(angle % 1)
    return float(angle)


def cos_scaled(angle: Angle, factor: Union[int, Fraction] = 1) -> float:
    """cos(factor * angle), reducing exact angles modulo a full turn first."""
    if isinstance(angle, Fraction):
        return math.cos(2 * math.pi * float((angle * factor) % 1))
    return math.cos(float(factor) * angle)


def sin_scaled(angle: Angle, factor: Union[int, Fraction] = 1) -> float:
    if isinstance(angle, Fraction):
        return math.sin(2 * math.pi * float((angle * factor) % 1))
    return math.sin(float(factor) * angle)


class StepLabel(NamedTuple):
    m: int
    j: int


@dataclass(frozen=True, eq=False)
class MachineSpec:
    angles: tuple[Angle, ...]
    g: float = 1.0
    initial: Optional[np.ndarray] = None
    # Optional per-cycle angle lists; cycle m uses cycle_angles[m-1] while
    # available and falls back to ``angles`` afterwards.
    cycle_angles: Optional[tuple[tuple[Angle, ...], ...]] = None
    name: str = field(default="custom")

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(self.angles))
        if not 1 <= len(self.angles) <= MAX_M:
            raise DimensionError(f"need 1 <= M <= {MAX_M}, got {len(self.angles)}")
        for a in self.angles:
            if isinstance(a, Fraction) and a.denominator < 1:
                raise ValueError(f"bad exact angle {a!r}")
        if self.cycle_angles is not None:
            rows = tuple(tuple(row) for row in self.cycle_angles)
            if any(len(row) != self.M for row in rows):
                raise DimensionError("every per-cycle angle list needs M entries")
            object.__setattr__(self, "cycle_angles", rows)
        if self.initial is not None:
            if num_subsystems(self.initial) != self.M + 1:
                raise DimensionError("initial state does not match M")

    @property
    def M(self) -> int:
        return len(self.angles)

    @property
    def uniform(self) -> bool:
        return self.cycle_angles is None

    @property
    def exact(self) -> bool:
        return all(isinstance(a, Fraction) for a in self.angles)

    def angles_for(self, m: int) -> tuple[Angle, ...]:
        if self.cycle_angles is not None and m <= len(self.cycle_angles):
            return self.cycle_angles[m - 1]
        return self.angles

    def initial_state(self) -> np.ndarray:
        if self.initial is None:
            return ground_state(self.M)
        return np.array(self.initial, dtype=complex)


def zeno(M: int = 4) -> MachineSpec:
    """alpha_mu = pi/M for every cell."""
    return MachineSpec((Fraction(1, 2 * M),) * M, name="zeno")


def coin(M: int = 4) -> MachineSpec:
    """alpha_mu = pi/2 for every cell."""
    return MachineSpec((Fraction(1, 4),) * M, name="coin")


def cat(M: int = 4) -> MachineSpec:
    """alpha_1 = pi/2, all others zero."""
    return MachineSpec((Fraction(1, 4),) + (Fraction(0),) * (M - 1), name="cat")


PRESETS: dict[str, Callable[[int], MachineSpec]] = {"zeno": zeno, "coin": coin, "cat": cat}


def step_op(spec: MachineSpec, j: int, m: int = 1) -> GateOp:
    if not 1 <= j <= 2 * spec.M:
        raise ValueError(f"step {j} outside 1..{2 * spec.M}")
    mu = (j + 1) // 2
    if j % 2:
        return HeadRotation(radians(spec.angles_for(m)[mu - 1]))
    return PairCnot(mu)


def step(psi: np.ndarray, spec: MachineSpec, j: int, m: int = 1) -> np.ndarray:
    return apply_gate(psi, step_op(spec, j, m))


Hook = Callable[[StepLabel, np.ndarray], None]


def _readonly(psi: np.ndarray) -> np.ndarray:
    view = psi.view()
    view.flags.writeable = False
    return view


def run(
    spec: MachineSpec,
    cycles: int,
    hook: Optional[Hook] = None,
    psi: Optional[np.ndarray] = None,
    first_cycle: int = 1,
) -> np.ndarray:
    """Apply ``cycles`` full cycles; ``hook`` sees (label, state) after every step.

    ``psi`` and ``first_cycle`` allow resuming from an intermediate state.
    """
    if cycles < 0:
        raise ValueError(f"cycles must be >= 0, got {cycles}")
    state = spec.initial_state() if psi is None else psi
    for m in range(first_cycle, first_cycle + cycles):
        for j in range(1, 2 * spec.M + 1):
            state = step(state, spec, j, m)
            if hook is not None:
                hook(StepLabel(m, j), _readonly(state))
    return state


def trajectory(spec: MachineSpec, cycles: int) -> list[tuple[StepLabel, np.ndarray]]:
    """Every step-end state of the first ``cycles`` cycles, in order."""
    out = []
    run(spec, cycles, hook=lambda label, state: out.append((label, state)))
    return out


def state_at(spec: MachineSpec, m: int, j: int) -> np.ndarray:
    """|psi^(m,j)>; (m, 0) is the start of cycle m."""
    state = run(spec, m - 1)
    for jj in range(1, j + 1):
        state = step(state, spec, jj, m)
    return state


def schedule(spec: MachineSpec) -> list[float]:
    """Step-end times T_0..T_2M of one cycle; pair gates take zero time."""
    if spec.g <= 0:
        raise ValueError(f"coupling g must be positive, got {spec.g}")
    times = [0.0]
    for a in spec.angles:
        alpha = float(a) * 2 * math.pi if isinstance(a, Fraction) else a
        if alpha < 0:
            raise ValueError(f"negative angle {a!r} has no pulse duration")
        times.append(times[-1] + alpha / spec.g)
        times.append(times[-1])
    return times


def period_rule(spec: MachineSpec) -> Optional[int]:
    """Least even common multiple of the angle denominators (in turns)."""
    if not (spec.exact and spec.uniform):
        return None
    lcm = 1
    for a in spec.angles:
        lcm = math.lcm(lcm, a.denominator)
    return lcm if lcm % 2 == 0 else 2 * lcm


def period(
    spec: MachineSpec, max_cycles: int = PERIOD_SCAN_CAP, tol: float = TOL
) -> Optional[int]:
    """Smallest multiple of ``period_rule`` after which the state ray recurs.

    The arithmetic rule alone can undershoot (the cat machine recurs after 8
    cycles, not 4), so each candidate is checked by running the machine.
    Returns None for float angles or when no candidate <= ``max_cycles`` passes.
    """
    seed = period_rule(spec)
    if seed is None:
        return None
    start = spec.initial_state()
    state = start
    done = 0
    for candidate in range(seed, max_cycles + 1, seed):
        state = run(spec, candidate - done, psi=state, first_cycle=done + 1)
        done = candidate
        if equal_up_to_global_phase(state, start, tol):
            return candidate
    return None
