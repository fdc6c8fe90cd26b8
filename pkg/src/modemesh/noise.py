"""Noise channels, Monte-Carlo infidelity estimation, and power-law fits.

Two imperfections of the site-local phase control are modeled; the global
mixing pulses are taken as error-free.

* Multiplicative angle noise: every applied phase is ``intended * (1 + d)``
  with ``d ~ N(0, sigma**2)`` drawn independently per site and per LocalZ
  application.  Zero intended angles therefore receive exactly zero noise -
  idle sites and identity gates are intrinsically error-free.

* Nearest-neighbor crosstalk: addressing site ``i`` leaks a fraction
  ``epsilon`` of the neighbors' angles onto it,
  ``out[i] = applied[i] + epsilon * (applied[i-1] + applied[i+1])`` with open
  boundaries.  By default the leaked angles are the noisy ones (the physical
  pulse leaks); ``crosstalk_from_noisy=False`` selects the idealized variant
  that leaks the intended angles instead.

Infidelity is quantified as ``1 - |<ideal|noisy>|**2`` averaged over random
input states and independent noise realizations, and summarized by fitting

    log(infidelity) = log(C) + k*log(N) + b*log(sigma)

on the crosstalk-free rows of a sweep.  Because the raw infidelity and the
per-mode infidelity (raw divided by N) differ only by the N-normalization,
``fit_power_law`` can fit either; both are worth reporting since the two
conventions shift ``k`` by exactly one.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import FormatError, InsufficientDataError, ValidationError
from .nativegates import PulseSchedule
from .numerics import Rng, as_generator, random_state
from .sim import _apply_ops, schedule_to_unitary


@dataclass
class NoiseModel:
    """Parameters of the two phase-noise channels plus the master seed."""

    sigma: float = 0.0
    epsilon: float = 0.0
    seed: int = 0
    crosstalk_from_noisy: bool = True

    def __post_init__(self):
        if self.sigma < 0 or self.epsilon < 0:
            raise ValidationError(
                f"noise strengths must be non-negative, got sigma={self.sigma}, "
                f"epsilon={self.epsilon}"
            )

    def perturb(self, phases: np.ndarray, gen) -> np.ndarray:
        """Hook consumed by the simulator at each LocalZ op."""
        return perturb_phases(phases, self, gen)


def perturb_phases(intended, model: NoiseModel, rng) -> np.ndarray:
    """One noisy realization of a LocalZ phase vector.

    ``rng`` may be an :class:`Rng` (a fresh stream is opened) or an existing
    numpy generator (the stream continues, which is what the simulator does
    across the layers of one run).
    """
    intended = np.asarray(intended, dtype=float)
    gen = as_generator(rng)
    delta = gen.standard_normal(intended.shape[0])
    applied = intended * (1.0 + model.sigma * delta)
    if model.epsilon == 0.0:
        return applied
    source = applied if model.crosstalk_from_noisy else intended
    leak = np.zeros_like(applied)
    leak[1:] += source[:-1]
    leak[:-1] += source[1:]
    return applied + model.epsilon * leak


def monte_carlo_infidelity(
    schedule: PulseSchedule,
    model: NoiseModel,
    n_states: int,
    n_noise: int,
    *,
    stream_base: int = 0,
) -> tuple[float, float]:
    """Mean and standard deviation of ``1 - |<ideal|noisy>|**2``.

    Samples the full cross product of ``n_states`` random input states and
    ``n_noise`` independent noise realizations of the schedule.  Stream
    ``stream_base`` (of ``model.seed``) drives the state draws and streams
    ``stream_base + 1 + t`` drive realization ``t``, so results do not depend
    on evaluation order and sweeps can lay cells out deterministically.
    """
    if n_states < 1 or n_noise < 1:
        raise ValidationError(
            f"need at least one state and one noise instance, got {n_states}, {n_noise}"
        )
    n = schedule.dim
    state_gen = Rng(model.seed, stream_base).generator()
    states = np.column_stack([random_state(n, state_gen) for _ in range(n_states)])
    ideal = schedule_to_unitary(schedule) @ states
    samples = np.empty((n_noise, n_states), dtype=float)
    for t in range(n_noise):
        gen = Rng(model.seed, stream_base + 1 + t).generator()
        noisy = _apply_ops(schedule, states.copy(), noise=model, gen=gen)
        overlap = np.abs(np.sum(ideal.conj() * noisy, axis=0)) ** 2
        samples[t, :] = 1.0 - overlap
    return float(samples.mean()), float(samples.std())


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    label: str
    n: int
    sigma: float
    epsilon: float
    mean_infidelity: float
    std_infidelity: float
    n_states: int
    n_noise: int


@dataclass
class SweepResult:
    rows: list[SweepRow] = field(default_factory=list)


def sweep(
    targets: Sequence[tuple[str, PulseSchedule]],
    sigmas: Sequence[float],
    epsilons: Sequence[float],
    seed: int,
    n_states: int,
    n_noise: int,
    *,
    crosstalk_from_noisy: bool = True,
) -> SweepResult:
    """Monte-Carlo infidelity over the grid ``targets x epsilons x sigmas``.

    Rows come out ordered by (target, epsilon, sigma).  Each grid cell gets
    its own block of RNG streams derived from ``seed`` and the cell's
    position, so the full table is reproducible and independent of any
    evaluation-order choice.
    """
    result = SweepResult()
    stride = n_noise + 1
    cell = 0
    for label, schedule in targets:
        for epsilon in epsilons:
            for sigma in sigmas:
                model = NoiseModel(
                    sigma=sigma,
                    epsilon=epsilon,
                    seed=seed,
                    crosstalk_from_noisy=crosstalk_from_noisy,
                )
                mean, std = monte_carlo_infidelity(
                    schedule, model, n_states, n_noise, stream_base=cell * stride
                )
                result.rows.append(
                    SweepRow(
                        label=label,
                        n=schedule.dim,
                        sigma=float(sigma),
                        epsilon=float(epsilon),
                        mean_infidelity=mean,
                        std_infidelity=std,
                        n_states=n_states,
                        n_noise=n_noise,
                    )
                )
                cell += 1
    return result


_CSV_HEADER = [
    "label",
    "N",
    "sigma",
    "epsilon",
    "mean_infidelity",
    "std_infidelity",
    "n_states",
    "n_noise",
]


def sweep_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_CSV_HEADER)
    for r in result.rows:
        writer.writerow(
            [
                r.label,
                r.n,
                repr(r.sigma),
                repr(r.epsilon),
                repr(r.mean_infidelity),
                repr(r.std_infidelity),
                r.n_states,
                r.n_noise,
            ]
        )
    return buf.getvalue()


def sweep_from_csv(text: str) -> SweepResult:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError("empty sweep CSV") from None
    if header != _CSV_HEADER:
        raise FormatError(f"unexpected sweep CSV header: {header!r}")
    rows = []
    for lineno, raw in enumerate(reader, start=2):
        if not raw:
            continue
        if len(raw) != len(_CSV_HEADER):
            raise FormatError("wrong number of columns in sweep CSV", line=lineno)
        try:
            rows.append(
                SweepRow(
                    label=raw[0],
                    n=int(raw[1]),
                    sigma=float(raw[2]),
                    epsilon=float(raw[3]),
                    mean_infidelity=float(raw[4]),
                    std_infidelity=float(raw[5]),
                    n_states=int(raw[6]),
                    n_noise=int(raw[7]),
                )
            )
        except ValueError as exc:
            raise FormatError(f"bad sweep CSV value: {exc}", line=lineno) from exc
    return SweepResult(rows=rows)


def save_sweep(result: SweepResult, path) -> None:
    Path(path).write_text(sweep_to_csv(result))


def load_sweep(path) -> SweepResult:
    return sweep_from_csv(Path(path).read_text())


# ---------------------------------------------------------------------------
# Power-law fit
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares fit of ``infidelity = C * N**k * sigma**b`` in log space."""

    c: float
    k: float
    b: float
    residual: float  # root-mean-square residual of log(infidelity)


def fit_power_law(result: SweepResult | Iterable[SweepRow], per_mode: bool = False) -> PowerLawFit:
    """Fit the crosstalk-free rows of a sweep to a power law.

    Only rows with ``epsilon == 0`` and a strictly positive mean infidelity
    participate.  With ``per_mode=True`` the infidelity is divided by N
    before fitting, which lowers the fitted ``k`` by exactly one and leaves
    ``b`` untouched.  Raises :class:`InsufficientDataError` unless the usable
    rows span at least two distinct N and two distinct sigma values.
    """
    rows = result.rows if isinstance(result, SweepResult) else list(result)
    usable = [r for r in rows if r.epsilon == 0.0 and r.mean_infidelity > 0.0 and r.sigma > 0.0]
    if len(usable) < 3:
        raise InsufficientDataError(
            f"power-law fit needs >= 3 usable rows (epsilon == 0, mean > 0), got {len(usable)}"
        )
    ns = {r.n for r in usable}
    sigmas = {r.sigma for r in usable}
    if len(ns) < 2 or len(sigmas) < 2:
        raise InsufficientDataError(
            f"power-law fit needs >= 2 distinct N and sigma values, got "
            f"{len(ns)} N values and {len(sigmas)} sigma values"
        )
    y = np.array(
        [
            math.log(r.mean_infidelity / r.n) if per_mode else math.log(r.mean_infidelity)
            for r in usable
        ]
    )
    design = np.column_stack(
        [
            np.ones(len(usable)),
            np.log([r.n for r in usable]),
            np.log([r.sigma for r in usable]),
        ]
    )
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return PowerLawFit(
        c=float(math.exp(coef[0])),
        k=float(coef[1]),
        b=float(coef[2]),
        residual=float(np.sqrt(np.mean(resid**2))),
    )


def fit_to_json(fit: PowerLawFit) -> dict[str, Any]:
    return {"C": fit.c, "k": fit.k, "b": fit.b, "residual": fit.residual}


def fit_from_json(obj) -> PowerLawFit:
    try:
        return PowerLawFit(
            c=float(obj["C"]), k=float(obj["k"]), b=float(obj["b"]),
            residual=float(obj["residual"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed fit object: {exc}") from exc
