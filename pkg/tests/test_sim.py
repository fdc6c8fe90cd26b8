"""Tests for the pulse-schedule simulator."""

import math

import numpy as np
import pytest

from conftest import ref_schedule_matrix
from modemesh.clements import decompose
from modemesh.errors import DimensionError, ValidationError
from modemesh.nativegates import Dimerize, GlobalX, LocalZ, PulseSchedule, absorb_phases
from modemesh.noise import NoiseModel
from modemesh.numerics import Rng, haar_unitary, random_state
from modemesh.sim import (
    ExecutionOptions,
    apply_schedule,
    apply_schedule_traced,
    fidelity,
    schedule_to_unitary,
)
from modemesh.targets import dft_matrix


class TestBasicOps:
    def test_local_z_multiplies_phases(self):
        phases = np.array([0.2, -1.0, 3.0])
        schedule = PulseSchedule(dim=3, ops=[LocalZ(phases)])
        psi = np.array([1.0, 2.0, 3.0], dtype=complex)
        out = apply_schedule(schedule, psi)
        assert np.array_equal(out, psi * np.exp(1j * phases))

    def test_global_x_even_dimerization(self):
        schedule = PulseSchedule(dim=4, ops=[Dimerize("even"), GlobalX(math.pi)])
        # X(pi) maps e_lo -> -i e_hi on every active pair.
        out = apply_schedule(schedule, np.array([1, 0, 0, 0], dtype=complex))
        assert np.allclose(out, [0, -1j, 0, 0], atol=1e-15)
        out = apply_schedule(schedule, np.array([0, 0, 1, 0], dtype=complex))
        assert np.allclose(out, [0, 0, 0, -1j], atol=1e-15)

    def test_global_x_needs_dimerization(self):
        # Without a Dimerize op no pairs are active and X does nothing.
        schedule = PulseSchedule(dim=4, ops=[GlobalX(math.pi)])
        psi = random_state(4, Rng(60))
        assert np.array_equal(apply_schedule(schedule, psi), psi)

    def test_odd_dimerization_leaves_edge_sites_idle(self):
        schedule = PulseSchedule(dim=3, ops=[Dimerize("odd"), GlobalX(1.1)])
        psi = np.array([0.5, 0.1j, -0.2], dtype=complex)
        out = apply_schedule(schedule, psi)
        assert out[0] == psi[0]
        assert abs(out[1] - psi[1]) > 1e-3

    def test_engine_matches_reference_composition(self):
        schedule = absorb_phases(decompose(haar_unitary(6, Rng(61))))
        assert np.max(np.abs(schedule_to_unitary(schedule) - ref_schedule_matrix(schedule))) < 1e-12

    def test_apply_matches_unitary_action(self):
        schedule = absorb_phases(decompose(dft_matrix(5)))
        psi = random_state(5, Rng(62))
        direct = apply_schedule(schedule, psi)
        via_matrix = schedule_to_unitary(schedule) @ psi
        assert np.max(np.abs(direct - via_matrix)) < 1e-13

    def test_norm_preserved(self):
        schedule = absorb_phases(decompose(haar_unitary(7, Rng(63))))
        psi = random_state(7, Rng(64))
        assert np.linalg.norm(apply_schedule(schedule, psi)) == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        schedule = PulseSchedule(dim=3, ops=[])
        with pytest.raises(DimensionError):
            apply_schedule(schedule, np.zeros(4, dtype=complex))


class TestNoiseHook:
    def test_noise_requires_rng(self):
        schedule = absorb_phases(decompose(dft_matrix(3)))
        options = ExecutionOptions(noise=NoiseModel(sigma=0.1))
        with pytest.raises(ValidationError):
            apply_schedule(schedule, random_state(3, Rng(65)), options)

    def test_noisy_run_is_reproducible(self):
        schedule = absorb_phases(decompose(dft_matrix(4)))
        psi = random_state(4, Rng(66))
        model = NoiseModel(sigma=0.05)
        a = apply_schedule(schedule, psi, ExecutionOptions(noise=model, rng=Rng(1, 5)))
        b = apply_schedule(schedule, psi, ExecutionOptions(noise=model, rng=Rng(1, 5)))
        c = apply_schedule(schedule, psi, ExecutionOptions(noise=model, rng=Rng(1, 6)))
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_noise_perturbs_but_preserves_norm(self):
        schedule = absorb_phases(decompose(dft_matrix(4)))
        psi = random_state(4, Rng(67))
        clean = apply_schedule(schedule, psi)
        noisy = apply_schedule(
            schedule, psi, ExecutionOptions(noise=NoiseModel(sigma=0.05), rng=Rng(2, 0))
        )
        assert np.max(np.abs(clean - noisy)) > 1e-4
        assert np.linalg.norm(noisy) == pytest.approx(1.0, abs=1e-12)

    def test_zero_noise_equals_clean_run(self):
        schedule = absorb_phases(decompose(dft_matrix(4)))
        psi = random_state(4, Rng(68))
        clean = apply_schedule(schedule, psi)
        noisy = apply_schedule(
            schedule, psi, ExecutionOptions(noise=NoiseModel(sigma=0.0), rng=Rng(3, 0))
        )
        assert np.max(np.abs(clean - noisy)) < 1e-15


class TestTracing:
    def test_trace_shape_and_content(self):
        schedule = absorb_phases(decompose(dft_matrix(4)))
        psi = np.eye(4, dtype=complex)[:, 0]
        final, trace = apply_schedule_traced(schedule, psi)
        assert len(trace) == len(schedule.ops) + 1
        assert np.array_equal(trace[0], np.abs(psi) ** 2)
        for probs in trace:
            assert probs.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(trace[-1], np.abs(final) ** 2, atol=1e-15)

    def test_options_record_trace(self):
        schedule = absorb_phases(decompose(dft_matrix(3)))
        options = ExecutionOptions(record_trace=True)
        psi = random_state(3, Rng(69))
        out = apply_schedule(schedule, psi, options)
        assert options.last_trace is not None
        assert len(options.last_trace) == len(schedule.ops) + 1
        assert np.allclose(options.last_trace[-1], np.abs(out) ** 2, atol=1e-15)

    def test_traced_and_untraced_agree(self):
        schedule = absorb_phases(decompose(dft_matrix(4)))
        psi = random_state(4, Rng(70))
        a = apply_schedule(schedule, psi)
        b, _ = apply_schedule_traced(schedule, psi)
        assert np.array_equal(a, b)


class TestFidelity:
    def test_hand_values(self):
        e0 = np.array([1, 0], dtype=complex)
        e1 = np.array([0, 1], dtype=complex)
        plus = np.array([1, 1], dtype=complex) / math.sqrt(2)
        assert fidelity(e0, e0) == pytest.approx(1.0)
        assert fidelity(e0, e1) == pytest.approx(0.0)
        assert fidelity(e0, plus) == pytest.approx(0.5)
        assert fidelity(e0, 1j * e0) == pytest.approx(1.0)

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            fidelity(np.zeros(2), np.zeros(3))
        with pytest.raises(DimensionError):
            fidelity(np.zeros((2, 2)), np.zeros((2, 2)))
