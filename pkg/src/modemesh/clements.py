"""Rectangular-mesh decomposition of unitaries into adjacent two-mode rotations.

Any ``N x N`` unitary ``U`` factors as

    U = exp(i * global_phase) * diag(exp(i * diagonal_phases)) * T_M ... T_1

where every ``T_k`` is a Givens-type rotation acting on a pair of adjacent
modes ``(n, n+1)``:

    T(n, theta, phi) restricted to (n, n+1) =
        [[exp(i*phi) * cos(theta), -sin(theta)],
         [exp(i*phi) * sin(theta),  cos(theta)]]

The factorization uses the Clements-style snake: sub-diagonals of the working
matrix are nulled alternately by right-multiplication with inverse rotations
(column mixing) and left-multiplication (row mixing), starting from the
bottom-left corner.  Rotations that end up on the left of the residual
diagonal are commuted through it, so the emitted circuit always has the
single-sided diagonal form above.  The gate count is exactly ``N*(N-1)/2``
and the as-soon-as-possible layering has depth at most ``N``, with every
layer holding gates of a single mode-pair parity (a brick-wall mesh).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Any, Iterable

import numpy as np

from .errors import ConsistencyError, DimensionError, FormatError, UnitarityError
from .numerics import (
    load_json,
    save_json,
    unitarity_deviation,
    wrap_pi,
    wrap_two_pi,
)


@dataclass(frozen=True)
class GivensGate:
    """One adjacent two-mode rotation: modes ``(n, n+1)``, angles in radians.

    ``layer`` is the brick-wall time slot assigned by :func:`schedule_layers`
    (-1 when the gate has not been scheduled yet).
    """

    n: int
    theta: float
    phi: float
    layer: int = -1


@dataclass
class GivensCircuit:
    """A diagonal of per-mode phases followed by a sequence of rotations.

    ``gates`` is stored in application order: ``gates[0]`` acts on the state
    first.  The represented operator is

        exp(i*global_phase) * diag(exp(i*diagonal_phases)) * gates[-1] ... gates[0]
    """

    dim: int
    gates: list[GivensGate]
    diagonal_phases: np.ndarray
    global_phase: float = 0.0

    def __post_init__(self):
        self.diagonal_phases = np.asarray(self.diagonal_phases, dtype=float)
        if self.dim < 1:
            raise DimensionError(f"circuit dimension must be >= 1, got {self.dim}")
        if self.diagonal_phases.shape != (self.dim,):
            raise DimensionError(
                f"diagonal has length {self.diagonal_phases.shape}, expected ({self.dim},)"
            )
        for gate in self.gates:
            _check_mode_index(gate.n, self.dim)

    @property
    def depth(self) -> int:
        """Number of brick-wall layers (0 for a gate-free circuit)."""
        if not self.gates:
            return 0
        return max(g.layer for g in self.gates) + 1


def _check_mode_index(n: int, dim: int) -> None:
    if not 0 <= n <= dim - 2:
        raise DimensionError(f"gate mode index {n} out of range for dimension {dim}")


def _t_block(theta: float, phi: float) -> np.ndarray:
    """The 2x2 rotation block in the convention used throughout the package."""
    c, s = math.cos(theta), math.sin(theta)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[e * c, -s], [e * s, c]], dtype=complex)


def t_matrix(n: int, theta: float, phi: float, dim: int) -> np.ndarray:
    """Embed the rotation block on modes ``(n, n+1)`` into a ``dim x dim`` identity."""
    if dim < 2:
        raise DimensionError(f"t_matrix needs dimension >= 2, got {dim}")
    _check_mode_index(n, dim)
    m = np.eye(dim, dtype=complex)
    m[n : n + 2, n : n + 2] = _t_block(theta, phi)
    return m


def _factor_diag_times_t(m: np.ndarray) -> tuple[float, float, float, float]:
    """Factor a 2x2 unitary as ``diag(e^{ia}, e^{ib}) @ t_block(theta, phi)``.

    Returns ``(a, b, theta, phi)``.  The extraction always reads each phase
    off the larger-magnitude entry of its row so the reassembly error stays
    at the level of the input's own deviation from unitarity.
    """
    m00, m01 = m[0, 0], m[0, 1]
    m10, m11 = m[1, 0], m[1, 1]
    c, s = abs(m00), abs(m01)
    theta = math.atan2(s, c)
    if c >= s:
        x = float(np.angle(m00))  # a + phi
        b = float(np.angle(m11))
        if s > 0.0:
            a = float(np.angle(-m01))
            phi = x - a
        else:
            phi = 0.0
            a = x
    else:
        a = float(np.angle(-m01))
        u = float(np.angle(m10))  # b + phi
        if c > 0.0:
            phi = float(np.angle(m00)) - a
            b = u - phi
        else:
            phi = 0.0
            b = u
    return a, b, theta, phi


def decompose(
    u,
    *,
    unitarity_tol: float = 1e-10,
    nulling_tol: float = 1e-10,
    drift_tol: float = 1e-8,
) -> GivensCircuit:
    """Decompose a unitary into the single-sided diagonal-plus-rotations form.

    The snake walks sub-diagonals from the bottom-left corner inward.
    Odd sweeps null their sub-diagonal by right-multiplying the working
    matrix with inverse rotations (mixing adjacent columns, moving up the
    sub-diagonal); even sweeps left-multiply (mixing adjacent rows, moving
    down).  Left-applied rotations are afterwards commuted through the
    residual diagonal so the circuit carries all rotations on one side.

    Raises :class:`UnitarityError` when the input deviates from unitarity
    by more than ``unitarity_tol`` and :class:`ConsistencyError` when the
    nulling pattern or unitarity of the working matrix degrades beyond the
    stated internal tolerances.
    """
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DimensionError(f"decompose expects a square matrix, got shape {u.shape}")
    n = u.shape[0]
    dev = unitarity_deviation(u)
    if not (dev <= unitarity_tol):
        raise UnitarityError("decompose input is not unitary", deviation=dev)

    work = u.copy()
    right_gates: list[tuple[int, float, float]] = []
    left_gates: list[tuple[int, float, float]] = []
    nulled: list[tuple[int, int]] = []

    for sweep in range(1, n):
        if sweep % 2 == 1:
            # Right multiplications, climbing the sub-diagonal from the corner.
            for j in range(sweep):
                row, col = n - 1 - j, sweep - 1 - j
                num, den = work[row, col], work[row, col + 1]
                theta = math.atan2(abs(num), abs(den))
                phi = float(np.angle(num * np.conj(den)))
                cs, sn = math.cos(theta), math.sin(theta)
                e = complex(math.cos(phi), -math.sin(phi))
                lo = work[:, col].copy()
                hi = work[:, col + 1].copy()
                work[:, col] = e * cs * lo - sn * hi
                work[:, col + 1] = e * sn * lo + cs * hi
                right_gates.append((col, theta, phi))
                nulled.append((row, col))
        else:
            # Left multiplications, descending the sub-diagonal.
            for j in range(1, sweep + 1):
                row, col = n + j - sweep - 1, j - 1
                num, den = -work[row, col], work[row - 1, col]
                theta = math.atan2(abs(num), abs(den))
                phi = float(np.angle(num * np.conj(den)))
                cs, sn = math.cos(theta), math.sin(theta)
                e = complex(math.cos(phi), math.sin(phi))
                top = work[row - 1, :].copy()
                bot = work[row, :].copy()
                work[row - 1, :] = e * cs * top - sn * bot
                work[row, :] = e * sn * top + cs * bot
                left_gates.append((row - 1, theta, phi))
                nulled.append((row, col))
        residual = max(abs(work[r, c]) for r, c in nulled)
        if residual > nulling_tol:
            raise ConsistencyError(
                f"nulling failed after sweep {sweep}: residual {residual:.3e}"
            )
        drift = unitarity_deviation(work)
        if drift > drift_tol:
            raise ConsistencyError(
                f"working matrix lost unitarity after sweep {sweep}: {drift:.3e}"
            )

    lam = np.angle(np.diagonal(work)).astype(float)

    # Commute the left rotations through the diagonal: T^{-1} D = D' T'.
    gates = [GivensGate(m, wrap_two_pi(t), wrap_two_pi(p)) for m, t, p in right_gates]
    for mode, theta, phi in reversed(left_gates):
        block = _t_block(theta, phi).conj().T @ np.diag(
            np.exp(1j * lam[mode : mode + 2])
        )
        a, b, theta2, phi2 = _factor_diag_times_t(block)
        lam[mode], lam[mode + 1] = a, b
        gates.append(GivensGate(mode, wrap_two_pi(theta2), wrap_two_pi(phi2)))

    gates = schedule_layers(gates)
    return GivensCircuit(
        dim=n, gates=gates, diagonal_phases=wrap_pi(lam), global_phase=0.0
    )


def reconstruct(circuit: GivensCircuit) -> np.ndarray:
    """Multiply the circuit back out into a dense matrix."""
    n = circuit.dim
    m = np.eye(n, dtype=complex)
    for gate in circuit.gates:
        _check_mode_index(gate.n, n)
        block = _t_block(gate.theta, gate.phi)
        rows = m[gate.n : gate.n + 2, :]
        m[gate.n : gate.n + 2, :] = block @ rows
    m = np.exp(1j * circuit.diagonal_phases)[:, None] * m
    return complex(math.cos(circuit.global_phase), math.sin(circuit.global_phase)) * m


def schedule_layers(gates: Iterable[GivensGate]) -> list[GivensGate]:
    """Assign as-soon-as-possible layer indices.

    Each gate lands one layer after the latest previous gate that touches
    either of its modes.  For circuits emitted by :func:`decompose` the
    result is a brick-wall: every layer holds a single mode-pair parity and
    the depth never exceeds the matrix dimension.
    """
    avail: dict[int, int] = {}
    out: list[GivensGate] = []
    for gate in gates:
        layer = max(avail.get(gate.n, 0), avail.get(gate.n + 1, 0))
        avail[gate.n] = layer + 1
        avail[gate.n + 1] = layer + 1
        out.append(replace(gate, layer=layer))
    return out


def transmission_profile(circuit: GivensCircuit) -> list[dict[str, float]]:
    """Per-gate mesh data for visual inspection (not asserted anywhere).

    Reports, for every gate, its layer, mode index, transmission probability
    ``cos(theta)**2`` and phase ``phi`` so the mesh pattern of a compiled
    target can be plotted.
    """
    return [
        {
            "layer": gate.layer,
            "n": gate.n,
            "transmission": math.cos(gate.theta) ** 2,
            "phi": gate.phi,
        }
        for gate in circuit.gates
    ]


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def circuit_to_json(circuit: GivensCircuit) -> dict[str, Any]:
    return {
        "dim": circuit.dim,
        "global_phase": float(circuit.global_phase),
        "diagonal": [float(x) for x in circuit.diagonal_phases],
        "gates": [
            {"n": g.n, "theta": float(g.theta), "phi": float(g.phi), "layer": g.layer}
            for g in circuit.gates
        ],
    }


def circuit_from_json(obj) -> GivensCircuit:
    try:
        dim = int(obj["dim"])
        global_phase = float(obj["global_phase"])
        diagonal = [float(x) for x in obj["diagonal"]]
        gates = [
            GivensGate(int(g["n"]), float(g["theta"]), float(g["phi"]), int(g["layer"]))
            for g in obj["gates"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed circuit object: {exc}") from exc
    return GivensCircuit(dim, gates, np.array(diagonal), global_phase)


def save_circuit(circuit: GivensCircuit, path) -> None:
    save_json(circuit_to_json(circuit), path)


def load_circuit(path) -> GivensCircuit:
    return circuit_from_json(load_json(path))
