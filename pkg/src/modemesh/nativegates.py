"""Lowering of two-mode rotations to the native pulse set.

The hardware exposes two controls on a dimerized lattice:

* ``GlobalX(alpha)`` - the same two-mode mixing pulse applied to every
  active dimer ``(n, n+1)``:

      X(alpha) = [[cos(alpha/2), -i*sin(alpha/2)],
                  [-i*sin(alpha/2), cos(alpha/2)]]

* ``LocalZ(phases)`` - an independently programmable phase per site.  On a
  single dimer the asymmetric convention ``Z(xi) = diag(1, exp(i*xi))``
  phases the higher-index site, so a whole layer of dimer Z gates is just a
  per-site phase vector.

Every rotation block ``t_block(theta, phi)`` factors exactly into four
native pulses plus a scalar phase::

    t_block(theta, phi) = exp(i*alpha) * X(3*pi/2) Z(2*theta) X(pi/2) Z(-phi),
    alpha = phi - theta + pi

:func:`absorb_phases` turns a whole rotation circuit into a flat pulse
schedule by streaming that identity through the brick-wall: the scalar
prefactors and the circuit's diagonal are pushed leftward layer by layer
(via :func:`commute_phase`) into a per-site phase accumulator, which is
emitted as one trailing ``LocalZ``.  The leftover uniform phase is reported
in ``PulseSchedule.global_phase`` and never applied to hardware.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Union

import numpy as np

from .clements import GivensCircuit, GivensGate, _t_block, schedule_layers
from .errors import ConsistencyError, DimensionError, FormatError, UnitarityError
from .numerics import load_json, save_json, unitarity_deviation, wrap_pi, wrap_two_pi

HALF_PI = math.pi / 2.0
THREE_HALF_PI = 3.0 * math.pi / 2.0


def x_matrix(alpha: float) -> np.ndarray:
    """Two-mode tunneling pulse applied by the global drive."""
    c, s = math.cos(alpha / 2.0), math.sin(alpha / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def z_matrix(xi: float) -> np.ndarray:
    """Site-local phase gate, asymmetric convention ``diag(1, e^{i xi})``."""
    return np.array([[1.0, 0.0], [0.0, complex(math.cos(xi), math.sin(xi))]])


def symmetric_z(xi: float) -> np.ndarray:
    """Traceless-phase variant ``diag(e^{-i xi/2}, e^{i xi/2})``."""
    half = complex(math.cos(xi / 2.0), math.sin(xi / 2.0))
    return np.array([[np.conj(half), 0.0], [0.0, half]])


@dataclass(frozen=True)
class NativeGateParams:
    """Angles of the four-pulse realization of one rotation block."""

    theta: float
    phi: float
    alpha: float  # scalar prefactor exp(i*alpha)


def zxzx_params(theta: float, phi: float) -> NativeGateParams:
    """Native pulse angles realizing ``t_block(theta, phi)`` exactly."""
    return NativeGateParams(theta=theta, phi=phi, alpha=phi - theta + math.pi)


def zxzx_product(params: NativeGateParams) -> np.ndarray:
    """Multiply out ``exp(i*alpha) X(3pi/2) Z(2 theta) X(pi/2) Z(-phi)``."""
    m = (
        x_matrix(THREE_HALF_PI)
        @ z_matrix(2.0 * params.theta)
        @ x_matrix(HALF_PI)
        @ z_matrix(-params.phi)
    )
    return complex(math.cos(params.alpha), math.sin(params.alpha)) * m


def native_block(theta: float, phi: float) -> np.ndarray:
    """The phase-free pulse product ``X(3pi/2) Z(2 theta) X(pi/2) Z(-phi)``.

    Closed form (equal to ``exp(-i*alpha) * t_block(theta, phi)``)::

        [[-e^{i theta} cos(theta),        e^{i (theta-phi)} sin(theta)],
         [-e^{i theta} sin(theta),       -e^{i (theta-phi)} cos(theta)]]

    Its determinant is ``exp(i*(2*theta - phi))``; in particular the product
    can never equal the identity (the closest representative is
    ``native_block(0, 0) == -I``).
    """
    c, s = math.cos(theta), math.sin(theta)
    ea = complex(math.cos(theta), math.sin(theta))
    eb = complex(math.cos(theta - phi), math.sin(theta - phi))
    return np.array([[-ea * c, eb * s], [-ea * s, -eb * c]], dtype=complex)


def commute_phase(m) -> tuple[tuple[float, float], tuple[float, float]]:
    """Push a 2x2 unitary's phase content to the left of a native block.

    Returns ``((a, b), (theta, phi))`` with

        diag(exp(i*a), exp(i*b)) @ native_block(theta, phi) == m

    to within the input's own deviation from unitarity.  ``theta`` lies in
    ``[0, pi/2]``; each phase is read off the larger-magnitude entry of its
    row, so degenerate (diagonal or anti-diagonal) inputs are exact.  The
    representative is not unique - only the reassembly above is contractual.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DimensionError(f"commute_phase expects a 2x2 matrix, got {m.shape}")
    dev = unitarity_deviation(m)
    if not (dev <= 1e-12):
        raise UnitarityError("commute_phase input is not unitary", deviation=dev)

    m00, m01 = m[0, 0], m[0, 1]
    m10, m11 = m[1, 0], m[1, 1]
    c, s = abs(m00), abs(m01)
    theta = math.atan2(s, c)
    if c >= s:
        x = float(np.angle(-m00))  # a + theta
        a = x - theta
        v = float(np.angle(-m11))  # b + theta - phi
        if s > 0.0:
            phi = x - float(np.angle(m01))
            b = v + phi - theta
        else:
            phi = 0.0
            b = v - theta
    else:
        u = float(np.angle(-m10))  # b + theta
        b = u - theta
        if c > 0.0:
            y = float(np.angle(m01))  # a + theta - phi
            phi = float(np.angle(-m00)) - y
            a = float(np.angle(-m00)) - theta
        else:
            phi = 0.0
            a = float(np.angle(m01)) - theta
    return (wrap_pi(a), wrap_pi(b)), (theta, wrap_pi(phi))


# ---------------------------------------------------------------------------
# Pulse schedules
# ---------------------------------------------------------------------------

Parity = Literal["even", "odd"]


@dataclass(frozen=True)
class Dimerize:
    """Select the active dimerization: even pairs (0,1),(2,3),... or odd."""

    parity: Parity


@dataclass(frozen=True)
class GlobalX:
    """Apply ``x_matrix(angle)`` on every active dimer simultaneously."""

    angle: float


@dataclass(frozen=True)
class LocalZ:
    """Apply per-site phases ``exp(i*phases[k])``; zeros mean 'no pulse'."""

    phases: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "phases", np.asarray(self.phases, dtype=float))


ScheduleOp = Union[Dimerize, GlobalX, LocalZ]


@dataclass
class PulseSchedule:
    """Flat list of hardware operations in application order.

    ``global_phase`` is pure metadata: the physical pulses realize the target
    only up to ``exp(i*global_phase)``, which is unobservable and therefore
    reported rather than applied.
    """

    dim: int
    ops: list[ScheduleOp]
    global_phase: float = 0.0


def dimer_pairs(dim: int, parity: Parity) -> list[tuple[int, int]]:
    """Adjacent pairs active under the given dimerization.

    Sites that fit no pair (the edges, depending on parity and on whether
    ``dim`` is even) stay idle.
    """
    start = 0 if parity == "even" else 1
    return [(i, i + 1) for i in range(start, dim - 1, 2)]


def absorb_phases(circuit: GivensCircuit) -> PulseSchedule:
    """Compile a rotation circuit into native pulses with phases absorbed.

    Walks the brick-wall layer by layer keeping a per-site phase accumulator
    ``lam`` (the diagonal that has built up to the left of everything already
    emitted).  For every dimer of the layer's parity - including dimers with
    no explicit gate, which still feel the global pulses - the pending phases
    are folded into the gate block and re-factored with
    :func:`commute_phase`; the fresh angles become this layer's Z pulses and
    the left phases become the new accumulator entries.  Each layer emits::

        Dimerize(parity), LocalZ(-phi'), GlobalX(pi/2), LocalZ(2*theta'), GlobalX(3*pi/2)

    and one trailing ``LocalZ`` realizes the merged diagonal.  All stored Z
    angles are wrapped to ``[0, 2*pi)``; they are consumed verbatim by the
    noise model, so the wrap convention is part of the contract.
    """
    n = circuit.dim
    gates = schedule_layers(circuit.gates)
    layers: dict[int, list[GivensGate]] = {}
    for gate in gates:
        layers.setdefault(gate.layer, []).append(gate)

    lam = np.zeros(n, dtype=float)
    ops: list[ScheduleOp] = []
    for layer_index in sorted(layers):
        layer_gates = layers[layer_index]
        parities = {gate.n % 2 for gate in layer_gates}
        if len(parities) != 1:
            raise ConsistencyError(
                f"layer {layer_index} mixes dimer parities; cannot be realized "
                "with a single global pulse"
            )
        parity: Parity = "even" if parities.pop() == 0 else "odd"
        by_mode = {gate.n: gate for gate in layer_gates}
        z_phi = np.zeros(n, dtype=float)
        z_theta = np.zeros(n, dtype=float)
        for lo, hi in dimer_pairs(n, parity):
            gate = by_mode.get(lo)
            theta, phi = (gate.theta, gate.phi) if gate is not None else (0.0, 0.0)
            block = _t_block(theta, phi) @ np.diag(np.exp(1j * lam[[lo, hi]]))
            (a, b), (theta2, phi2) = commute_phase(block)
            z_phi[hi] = wrap_two_pi(-phi2)
            z_theta[hi] = wrap_two_pi(2.0 * theta2)
            lam[lo], lam[hi] = a, b
        ops.append(Dimerize(parity))
        ops.append(LocalZ(z_phi))
        ops.append(GlobalX(HALF_PI))
        ops.append(LocalZ(z_theta))
        ops.append(GlobalX(THREE_HALF_PI))

    final = lam + circuit.diagonal_phases
    global_phase = circuit.global_phase + float(final[0])
    trailing = wrap_two_pi(final - final[0])
    ops.append(LocalZ(trailing))
    return PulseSchedule(dim=n, ops=ops, global_phase=wrap_pi(global_phase))


def z_angle_values(schedule: PulseSchedule) -> np.ndarray:
    """All stored LocalZ angles of a schedule, flattened (data for plots)."""
    chunks = [op.phases for op in schedule.ops if isinstance(op, LocalZ)]
    if not chunks:
        return np.zeros(0)
    return np.concatenate(chunks)


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------

def schedule_to_json(schedule: PulseSchedule) -> dict[str, Any]:
    ops: list[dict[str, Any]] = []
    for op in schedule.ops:
        if isinstance(op, Dimerize):
            ops.append({"op": "dimerize", "parity": op.parity})
        elif isinstance(op, GlobalX):
            ops.append({"op": "global_x", "angle": float(op.angle)})
        elif isinstance(op, LocalZ):
            ops.append({"op": "local_z", "phases": [float(x) for x in op.phases]})
        else:  # pragma: no cover - exhaustive by construction
            raise ConsistencyError(f"unknown schedule op {op!r}")
    return {"dim": schedule.dim, "global_phase": float(schedule.global_phase), "ops": ops}


def schedule_from_json(obj) -> PulseSchedule:
    try:
        dim = int(obj["dim"])
        global_phase = float(obj["global_phase"])
        raw_ops = obj["ops"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed schedule object: {exc}") from exc
    ops: list[ScheduleOp] = []
    for raw in raw_ops:
        try:
            kind = raw["op"]
            if kind == "dimerize":
                if raw["parity"] not in ("even", "odd"):
                    raise FormatError(f"bad parity {raw['parity']!r}")
                ops.append(Dimerize(raw["parity"]))
            elif kind == "global_x":
                ops.append(GlobalX(float(raw["angle"])))
            elif kind == "local_z":
                phases = np.array([float(x) for x in raw["phases"]], dtype=float)
                if phases.shape != (dim,):
                    raise FormatError(
                        f"local_z length {phases.shape[0]} does not match dim={dim}"
                    )
                ops.append(LocalZ(phases))
            else:
                raise FormatError(f"unknown schedule op kind {kind!r}")
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed schedule op {raw!r}: {exc}") from exc
    return PulseSchedule(dim=dim, ops=ops, global_phase=global_phase)


def save_schedule(schedule: PulseSchedule, path) -> None:
    save_json(schedule_to_json(schedule), path)


def load_schedule(path) -> PulseSchedule:
    return schedule_from_json(load_json(path))
