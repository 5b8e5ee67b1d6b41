"""Simulator for a cyclic quantum Turing machine: one head spin S coupled in
turn to M memory spins, with closed-form correlation predictions."""

from .machine import MachineSpec, cat, coin, period, run, zeno
from .statespace import ground_state

__all__ = ["MachineSpec", "cat", "coin", "zeno", "run", "period", "ground_state"]
__version__ = "0.1.0"
