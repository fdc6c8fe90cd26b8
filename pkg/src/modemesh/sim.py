"""State-vector simulation of pulse schedules.

The engine walks a :class:`~modemesh.nativegates.PulseSchedule` op by op:
``Dimerize`` selects the active pairs, ``GlobalX`` applies the same 2x2
mixing block to every active pair, and ``LocalZ`` multiplies per-site
phases.  All three are exactly unitary, so norms are preserved to machine
precision and the noiseless run is exactly linear in the input state.

Noise enters only at ``LocalZ`` ops: when :class:`ExecutionOptions` carries
a noise model, each phase vector is transformed by the model just before it
is applied.  The simulator is agnostic about what that transformation does -
it only requires an object with ``perturb(phases, generator) -> phases``.

Internally the engine operates on an ``(dim, batch)`` block of column
states, which makes Monte-Carlo averaging over many input states a single
pass per noise realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConsistencyError, DimensionError, ValidationError
from .nativegates import Dimerize, GlobalX, LocalZ, PulseSchedule, dimer_pairs, x_matrix
from .numerics import Rng, as_generator


@dataclass
class ExecutionOptions:
    """Execution knobs for :func:`apply_schedule`.

    ``noise`` is any object exposing ``perturb(phases, generator)``;
    ``rng`` seeds the draws for one run and is required when noise is set.
    With ``record_trace`` enabled, the per-op probability snapshots of the
    last run are kept on ``last_trace``; an options object being traced
    should not be shared between concurrent runs.
    """

    noise: object | None = None
    rng: Rng | None = None
    record_trace: bool = False
    last_trace: list[np.ndarray] | None = field(default=None, repr=False)


def _apply_ops(schedule: PulseSchedule, block: np.ndarray, noise=None, gen=None, trace=None):
    """Run the op list over an ``(dim, batch)`` block in place."""
    pairs: list[tuple[int, int]] = []
    if trace is not None:
        trace.append(np.abs(block) ** 2)
    for op in schedule.ops:
        if isinstance(op, Dimerize):
            pairs = dimer_pairs(schedule.dim, op.parity)
        elif isinstance(op, GlobalX):
            xm = x_matrix(op.angle)
            for lo, hi in pairs:
                top = block[lo, :].copy()
                bot = block[hi, :]
                block[lo, :] = xm[0, 0] * top + xm[0, 1] * bot
                block[hi, :] = xm[1, 0] * top + xm[1, 1] * bot
        elif isinstance(op, LocalZ):
            phases = op.phases
            if noise is not None:
                phases = noise.perturb(phases, gen)
            block *= np.exp(1j * phases)[:, None]
        else:  # pragma: no cover - exhaustive by construction
            raise ConsistencyError(f"unknown schedule op {op!r}")
        if trace is not None:
            trace.append(np.abs(block) ** 2)
    return block


def _start_run(schedule: PulseSchedule, options: ExecutionOptions | None):
    if options is None or options.noise is None:
        return None, None
    if options.rng is None:
        raise ValidationError("ExecutionOptions.rng is required when noise is set")
    return options.noise, as_generator(options.rng)


def apply_schedule(schedule: PulseSchedule, psi, options: ExecutionOptions | None = None):
    """Apply a pulse schedule to a state vector.

    The reported ``schedule.global_phase`` is *not* applied; the returned
    state equals the target state only up to that phase, which drops out of
    every probability and fidelity.
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (schedule.dim,):
        raise DimensionError(
            f"state shape {psi.shape} does not match schedule dim {schedule.dim}"
        )
    noise, gen = _start_run(schedule, options)
    trace: list[np.ndarray] | None = None
    if options is not None and options.record_trace:
        trace = []
    block = _apply_ops(schedule, psi[:, None].copy(), noise=noise, gen=gen, trace=trace)
    if options is not None and options.record_trace:
        options.last_trace = [t[:, 0] for t in trace]
    return block[:, 0]


def apply_schedule_traced(
    schedule: PulseSchedule, psi, options: ExecutionOptions | None = None
) -> tuple[np.ndarray, list[np.ndarray]]:
    """Like :func:`apply_schedule` but also return per-op probability
    snapshots (the initial state first, then one per op)."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (schedule.dim,):
        raise DimensionError(
            f"state shape {psi.shape} does not match schedule dim {schedule.dim}"
        )
    noise, gen = _start_run(schedule, options)
    trace: list[np.ndarray] = []
    block = _apply_ops(schedule, psi[:, None].copy(), noise=noise, gen=gen, trace=trace)
    return block[:, 0], [t[:, 0] for t in trace]


def schedule_to_unitary(schedule: PulseSchedule) -> np.ndarray:
    """Compose the schedule into a dense matrix (noiseless, phase not applied)."""
    eye = np.eye(schedule.dim, dtype=complex)
    return _apply_ops(schedule, eye)


def fidelity(ideal, actual) -> float:
    """Squared overlap ``|<ideal|actual>|**2`` of two state vectors."""
    ideal = np.asarray(ideal, dtype=complex)
    actual = np.asarray(actual, dtype=complex)
    if ideal.shape != actual.shape or ideal.ndim != 1:
        raise DimensionError(
            f"fidelity expects two equal-length vectors, got {ideal.shape} and {actual.shape}"
        )
    return float(np.abs(np.vdot(ideal, actual)) ** 2)
