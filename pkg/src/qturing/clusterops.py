"""Cluster operators Q = lambda_j(S) lambda_k(1) ... lambda_n(M) and their algebra.

A cluster index is a tuple of generator labels in {0, 1, 2, 3}, head first.
Its text form is the digit string, e.g. ``"33000"``.

Operators act on states through strided views over one bit at a time; dense
matrices are only built on the small-network paths (``coefficients``,
``transform_entry``, ``cluster_matrix``), which are capped at M <= 5.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, SubsystemError
from .statespace import LAMBDA, check_subsystem, local_view, num_subsystems

ClusterIndex = tuple[int, ...]

DENSE_MAX_SUBSYSTEMS = 6


def cluster_index(q: Sequence[int] | str) -> ClusterIndex:
    if isinstance(q, str):
        if not q or any(c not in "0123" for c in q):
            raise ValueError(f"cluster index {q!r} must be a string of digits 0-3")
        return tuple(int(c) for c in q)
    out = tuple(int(j) for j in q)
    if any(j not in (0, 1, 2, 3) for j in out):
        raise ValueError(f"cluster index {q!r} has entries outside 0..3")
    return out


def format_index(q: Sequence[int]) -> str:
    return "".join(str(j) for j in q)


def cluster_order(q: Sequence[int]) -> int:
    return sum(1 for j in q if j)


def single_site(n: int, sites: dict[int, int]) -> ClusterIndex:
    """Index with generator ``sites[mu]`` at each listed subsystem, identity elsewhere."""
    q = [0] * n
    for mu, j in sites.items():
        check_subsystem(mu, n)
        q[mu] = j
    return tuple(q)


def apply_generator(psi: np.ndarray, mu: int, j: int) -> np.ndarray:
    """lambda_j acting on subsystem ``mu``."""
    if j not in (0, 1, 2, 3):
        raise ValueError(f"generator index {j} outside 0..3")
    view = local_view(psi, mu)
    if j == 0:
        return psi.copy()
    out = np.empty_like(view)
    if j == 1:
        out[:, 0, :] = view[:, 1, :]
        out[:, 1, :] = view[:, 0, :]
    elif j == 2:
        out[:, 0, :] = 1j * view[:, 1, :]
        out[:, 1, :] = -1j * view[:, 0, :]
    else:
        out[:, 0, :] = -view[:, 0, :]
        out[:, 1, :] = view[:, 1, :]
    return out.reshape(psi.shape)


def _check_length(psi: np.ndarray, q: Sequence[int]) -> int:
    n = num_subsystems(psi)
    if len(q) != n:
        raise DimensionError(f"cluster index of length {len(q)} on a {n}-spin state")
    return n


def apply_cluster(psi: np.ndarray, q: Sequence[int]) -> np.ndarray:
    _check_length(psi, q)
    out = psi
    for mu, j in enumerate(q):
        if j:
            out = apply_generator(out, mu, j)
    return out.copy() if out is psi else out


def expect_k(psi: np.ndarray, q: Sequence[int]) -> float:
    """Correlation K = <psi|Q|psi> of a normalized state."""
    return float(np.vdot(psi, apply_cluster(psi, q)).real)


def expect_many(psi: np.ndarray, indices: Iterable[Sequence[int]]) -> dict[ClusterIndex, float]:
    return {tuple(q): expect_k(psi, q) for q in indices}


def cluster_matrix(q: Sequence[int]) -> np.ndarray:
    """Dense Q for small networks."""
    n = len(q)
    if n > DENSE_MAX_SUBSYSTEMS:
        raise DimensionError(f"dense cluster matrices are limited to {DENSE_MAX_SUBSYSTEMS} spins")
    mat = np.ones((1, 1), dtype=complex)
    for j in q:
        # Subsystem mu is bit mu, so later factors go on the left.
        mat = np.kron(LAMBDA[j], mat)
    return mat


def _permutation_phase(q: Sequence[int]) -> tuple[int, np.ndarray]:
    """Q|s> = phase[s] |s ^ flip> for every basis index s."""
    n = len(q)
    s = np.arange(2**n)
    flip = 0
    phase = np.ones(2**n, dtype=complex)
    for mu, j in enumerate(q):
        bit = (s >> mu) & 1
        if j in (1, 2):
            flip |= 1 << mu
        if j == 2:
            phase *= np.where(bit == 0, -1j, 1j)
        elif j == 3:
            phase *= np.where(bit == 0, -1.0, 1.0)
    return flip, phase


@dataclass
class OperatorCoefficients:
    """Sparse expansion A = 2**-(M+1) * sum_q A_q Q_q."""

    num_subsystems: int
    terms: dict[ClusterIndex, complex] = field(default_factory=dict)

    def __getitem__(self, q: Sequence[int] | str) -> complex:
        return self.terms.get(cluster_index(q), 0.0)

    def dense(self) -> np.ndarray:
        dim = 2**self.num_subsystems
        mat = np.zeros((dim, dim), dtype=complex)
        for q, value in self.terms.items():
            mat += value * cluster_matrix(q)
        return mat / dim


def _check_square(A: np.ndarray) -> int:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0].bit_length() - 1
    if A.shape[0] != 1 << n or n < 2:
        raise DimensionError(f"matrix size {A.shape[0]} is not 2**(M+1) with M >= 1")
    if n > DENSE_MAX_SUBSYSTEMS:
        raise DimensionError(f"dense path limited to {DENSE_MAX_SUBSYSTEMS} spins")
    return n


def coefficients(A: np.ndarray, tol: float = 1e-12) -> OperatorCoefficients:
    """All nonzero A_q = Tr{A Q_q} of a dense operator."""
    A = np.asarray(A, dtype=complex)
    n = _check_square(A)
    scale = max(1.0, float(np.abs(A).max()))
    columns = np.arange(2**n)
    terms = {}
    for q in itertools.product(range(4), repeat=n):
        flip, phase = _permutation_phase(q)
        value = complex(np.sum(A[columns, columns ^ flip] * phase))
        if abs(value) > tol * scale:
            terms[q] = value
    return OperatorCoefficients(n, terms)


def correlation_c(A: OperatorCoefficients, B: OperatorCoefficients, mu: int) -> float:
    """Symmetrized same-site correlation of two traceless operators on ``mu``.

    Only the traceless single-site components at ``mu`` may be present; for a
    two-level system the result does not depend on the state.
    """
    n = A.num_subsystems
    if B.num_subsystems != n:
        raise DimensionError("operators live on different networks")
    check_subsystem(mu, n)
    allowed = {single_site(n, {mu: j}) for j in (1, 2, 3)}
    for op in (A, B):
        stray = [format_index(q) for q in op.terms if q not in allowed]
        if stray:
            raise SubsystemError(f"coefficients outside subsystem {mu}: {', '.join(stray)}")
    total = sum(A[q] * B[q] for q in allowed)
    return float(np.real(total)) / 4**n


def _check_unitary(U: np.ndarray, tol: float = 1e-10) -> None:
    if np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) > tol:
        raise ValueError("transform matrix is not unitary")


def transform_entry(U: np.ndarray, row: Sequence[int], col: Sequence[int]) -> float:
    """X[row, col] = 2**-(M+1) Tr{U^+ Q_row U Q_col}."""
    U = np.asarray(U, dtype=complex)
    n = _check_square(U)
    _check_unitary(U)
    if len(row) != n or len(col) != n:
        raise DimensionError(f"cluster indices must have length {n}")
    value = np.trace(U.conj().T @ cluster_matrix(row) @ U @ cluster_matrix(col)) / 2**n
    if abs(value.imag) > 1e-10:
        raise ValueError(f"transform entry has imaginary part {value.imag:.3e}")
    return float(value.real)


def local_x_matrix(alpha: float) -> np.ndarray:
    """Head-rotation action on the local generator labels (0, 1, 2, 3).

    A rotation of the head Bloch vector about axis 1, acting in the 2-3 plane.
    """
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, c, -s],
            [0.0, 0.0, s, c],
        ]
    )
