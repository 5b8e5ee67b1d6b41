"""Product space of one head spin S and M memory spins.

Basis states use a single integer index ``s``.  The head S sits on the
least-significant bit and memory cell ``mu`` on bit ``mu``, so
``|1> = |0...001>`` has only the head excited and ``|2> = |0...010>`` only
memory cell 1.  Subsystem id 0 is always the head.

States are plain complex numpy vectors of length ``2**(M+1)``.  All functions
here return new arrays and never modify their inputs.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, InvalidBitError, SubsystemError

TOL = 1e-12
MAX_SUBSYSTEMS = 21

HEAD = 0

# Local SU(2) generators in the (|0>, |1>) ordering.  lambda_2 = i|0><1| - i|1><0|
# and lambda_3 = |1><1| - |0><0|; both signs differ from the usual Pauli
# convention and every other module relies on them.
LAMBDA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, 1j], [-1j, 0]], dtype=complex),
    np.array([[-1, 0], [0, 1]], dtype=complex),
)


class BlochVector(NamedTuple):
    k1: float
    k2: float
    k3: float

    @property
    def length(self) -> float:
        return float(np.sqrt(self.k1**2 + self.k2**2 + self.k3**2))


def num_subsystems(psi: np.ndarray) -> int:
    """Number of spins ``M + 1`` encoded by a state vector's length."""
    size = psi.shape[0] if psi.ndim == 1 else -1
    n = size.bit_length() - 1
    if size < 4 or size != 1 << n:
        raise DimensionError(f"state length {psi.shape} is not 2**(M+1) with M >= 1")
    return n


def check_subsystem(mu: int, n: int) -> None:
    if not 0 <= mu < n:
        raise SubsystemError(f"subsystem {mu} outside 0..{n - 1}")


def ground_state(M: int) -> np.ndarray:
    """All spins in |0>: the machine's starting state."""
    if M < 1 or M + 1 > MAX_SUBSYSTEMS:
        raise DimensionError(f"need 1 <= M <= {MAX_SUBSYSTEMS - 1}, got {M}")
    psi = np.zeros(2 ** (M + 1), dtype=complex)
    psi[0] = 1.0
    return psi


def basis_state(M: int, index: int) -> np.ndarray:
    psi = ground_state(M)
    if not 0 <= index < psi.size:
        raise DimensionError(f"basis index {index} outside 0..{psi.size - 1}")
    psi[0] = 0.0
    psi[index] = 1.0
    return psi


def encode_basis(bits: Sequence[int]) -> int:
    """Map per-subsystem occupations (head first) to the single index."""
    index = 0
    for position, bit in enumerate(bits):
        if bit not in (0, 1):
            raise InvalidBitError(f"bit {bit!r} at subsystem {position} is not 0 or 1")
        index |= int(bit) << position
    return index


def decode_basis(index: int, n: int) -> tuple[int, ...]:
    if not 0 <= index < 1 << n:
        raise DimensionError(f"index {index} outside 0..{(1 << n) - 1}")
    return tuple((index >> position) & 1 for position in range(n))


def _same_shape(a: np.ndarray, b: np.ndarray) -> None:
    num_subsystems(a)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def inner_product(a: np.ndarray, b: np.ndarray) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _same_shape(a, b)
    return complex(np.vdot(a, b))


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    """Ray comparison of two normalized states."""
    return abs(inner_product(a, b)) >= 1.0 - tol


def equal_amplitudes(a: np.ndarray, b: np.ndarray, tol: float = TOL) -> bool:
    _same_shape(a, b)
    return bool(np.max(np.abs(a - b)) <= tol)


def norm(psi: np.ndarray) -> float:
    return float(np.linalg.norm(psi))


def local_view(psi: np.ndarray, mu: int) -> np.ndarray:
    """Reshape to ``(high, 2, low)`` so axis 1 is the bit of subsystem ``mu``."""
    n = num_subsystems(psi)
    check_subsystem(mu, n)
    return psi.reshape(2 ** (n - mu - 1), 2, 2**mu)


def bloch_vector(psi: np.ndarray, mu: int) -> BlochVector:
    """Local expectation values <lambda_j(mu)>, j = 1, 2, 3."""
    view = local_view(psi, mu)
    a0, a1 = view[:, 0, :], view[:, 1, :]
    overlap = np.vdot(a0, a1)
    k1 = 2.0 * overlap.real
    k2 = -2.0 * overlap.imag
    k3 = float(np.vdot(a1, a1).real - np.vdot(a0, a0).real)
    return BlochVector(float(k1), float(k2), k3)


def reduced_density(psi: np.ndarray, mu: int) -> np.ndarray:
    """Partial trace onto subsystem ``mu``; rows/columns ordered (|0>, |1>)."""
    n = num_subsystems(psi)
    check_subsystem(mu, n)
    # C-order reshape puts subsystem mu on axis n-1-mu.
    tensor = np.moveaxis(psi.reshape((2,) * n), n - 1 - mu, 0).reshape(2, -1)
    return tensor @ tensor.conj().T


def density_from_bloch(k: Sequence[float]) -> np.ndarray:
    return 0.5 * (LAMBDA[0] + sum(kj * LAMBDA[j] for j, kj in enumerate(k, start=1)))


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return psi / np.linalg.norm(psi)


def random_product_state(n: int, rng: np.random.Generator) -> tuple[np.ndarray, list[np.ndarray]]:
    """Random product state plus its local factors (head first)."""
    factors = []
    for _ in range(n):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        factors.append(v / np.linalg.norm(v))
    psi = np.ones(1, dtype=complex)
    for v in factors:
        # Later subsystems are more significant bits.
        psi = np.kron(v, psi)
    return psi, factors
