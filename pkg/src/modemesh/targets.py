"""Target unitaries to compile: discrete Fourier transforms and chain dynamics.

The discrete Fourier transform sends site amplitudes to momentum amplitudes;
the optional shifted variant recenters zero momentum in the middle of the
output register (the usual fftshift reordering), which is the natural frame
for reading out momentum distributions.

Chain Hamiltonians model a line of sites with nearest-neighbor and
next-nearest-neighbor tunneling under open boundaries; their exact time
evolution operators are generic dense unitaries and exercise the compiler on
physically motivated targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import DimensionError, FormatError
from .numerics import hermitian_eig, load_json, matrix_from_json, matrix_to_json, save_json


def dft_matrix(n: int, shifted: bool = False) -> np.ndarray:
    """The ``n x n`` discrete Fourier transform, entry ``(k, j) = w^{jk}/sqrt(n)``
    with ``w = exp(2*pi*i/n)``.

    With ``shifted=True`` the rows are cyclically rotated by ``n // 2`` so the
    zero-momentum row lands at index ``n // 2`` (for odd ``n`` that is the
    central index ``(n-1)//2``).
    """
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    j = np.arange(n)
    m = np.exp(2j * math.pi * np.outer(j, j) / n) / math.sqrt(n)
    if shifted:
        m = np.roll(m, n // 2, axis=0)
    return m


@dataclass
class Hamiltonian:
    """A Hermitian operator with a human-readable label."""

    dim: int
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        from .errors import SymmetryError

        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (self.dim, self.dim):
            raise DimensionError(
                f"Hamiltonian shape {self.matrix.shape} does not match dim={self.dim}"
            )
        dev = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if not (dev <= 1e-10):
            raise SymmetryError("Hamiltonian is not Hermitian", deviation=dev)


def chain_hamiltonian(n: int, t_nn: float = 1.0, t_nnn: float = 0.0) -> Hamiltonian:
    """Open chain with hopping amplitudes ``-t_nn`` (adjacent) and ``-t_nnn``
    (next-nearest)."""
    if n < 2:
        raise DimensionError(f"chain needs at least 2 sites, got {n}")
    h = np.zeros((n, n), dtype=complex)
    for i in range(n - 1):
        h[i, i + 1] = h[i + 1, i] = -t_nn
    for i in range(n - 2):
        h[i, i + 2] = h[i + 2, i] = -t_nnn
    return Hamiltonian(dim=n, matrix=h, label=f"chain(n={n}, t_nn={t_nn}, t_nnn={t_nnn})")


def evolution_unitary(h: Hamiltonian, tau: float) -> np.ndarray:
    """Exact evolution ``exp(-i * H * tau)`` via eigendecomposition."""
    values, vectors = hermitian_eig(h.matrix)
    phases = np.exp(-1j * values * tau)
    return (vectors * phases) @ vectors.conj().T


# ---------------------------------------------------------------------------
# Hamiltonian file format: the matrix wire format plus a label
# ---------------------------------------------------------------------------

def hamiltonian_to_json(h: Hamiltonian) -> dict[str, Any]:
    obj = matrix_to_json(h.matrix)
    obj["label"] = h.label
    return obj


def hamiltonian_from_json(obj) -> Hamiltonian:
    m = matrix_from_json(obj)
    if m.shape[0] != m.shape[1]:
        raise FormatError(f"Hamiltonian must be square, got {m.shape[0]}x{m.shape[1]}")
    label = obj.get("label", "") if isinstance(obj, dict) else ""
    return Hamiltonian(dim=m.shape[0], matrix=m, label=str(label))


def load_hamiltonian(path) -> Hamiltonian:
    """Parse a Hamiltonian file; malformed input raises :class:`FormatError`
    (with line/column for JSON syntax errors), non-Hermitian content raises
    :class:`SymmetryError`."""
    return hamiltonian_from_json(load_json(path))


def save_hamiltonian(h: Hamiltonian, path) -> None:
    save_json(hamiltonian_to_json(h), path)
