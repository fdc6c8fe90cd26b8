"""Shared test helpers: independent reference implementations.

The reference routines below rebuild matrices from first principles (explicit
block embedding and plain matrix products) so the package's own composition
code is never used to check itself.
"""

from __future__ import annotations

import numpy as np
import pytest


def ref_rotation_block(theta: float, phi: float) -> np.ndarray:
    """The two-mode rotation block, written out directly."""
    return np.array(
        [
            [np.exp(1j * phi) * np.cos(theta), -np.sin(theta)],
            [np.exp(1j * phi) * np.sin(theta), np.cos(theta)],
        ],
        dtype=complex,
    )


def ref_embed(block: np.ndarray, n: int, dim: int) -> np.ndarray:
    """Embed a 2x2 block on modes (n, n+1) into a dim x dim identity."""
    m = np.eye(dim, dtype=complex)
    m[n : n + 2, n : n + 2] = block
    return m


def ref_circuit_matrix(circuit) -> np.ndarray:
    """Independent dense reconstruction of a rotation circuit.

    gates[0] acts first, so the matrix product runs right-to-left over the
    gate list; the diagonal and global phase multiply from the left.
    """
    m = np.eye(circuit.dim, dtype=complex)
    for gate in circuit.gates:
        m = ref_embed(ref_rotation_block(gate.theta, gate.phi), gate.n, circuit.dim) @ m
    m = np.diag(np.exp(1j * np.asarray(circuit.diagonal_phases))) @ m
    return np.exp(1j * circuit.global_phase) * m


def ref_x_block(alpha: float) -> np.ndarray:
    return np.array(
        [
            [np.cos(alpha / 2), -1j * np.sin(alpha / 2)],
            [-1j * np.sin(alpha / 2), np.cos(alpha / 2)],
        ],
        dtype=complex,
    )


def ref_schedule_matrix(schedule) -> np.ndarray:
    """Independent dense composition of a pulse schedule (phase not applied)."""
    from modemesh.nativegates import Dimerize, GlobalX, LocalZ

    dim = schedule.dim
    m = np.eye(dim, dtype=complex)
    pairs: list[tuple[int, int]] = []
    for op in schedule.ops:
        if isinstance(op, Dimerize):
            start = 0 if op.parity == "even" else 1
            pairs = [(i, i + 1) for i in range(start, dim - 1, 2)]
        elif isinstance(op, GlobalX):
            step = np.eye(dim, dtype=complex)
            for lo, _hi in pairs:
                step[lo : lo + 2, lo : lo + 2] = ref_x_block(op.angle)
            m = step @ m
        elif isinstance(op, LocalZ):
            m = np.diag(np.exp(1j * np.asarray(op.phases))) @ m
        else:  # pragma: no cover
            raise AssertionError(f"unknown op {op!r}")
    return m


@pytest.fixture
def rng_seed() -> int:
    return 20260826
