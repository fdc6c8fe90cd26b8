"""Command-line interface.

Subcommands cover the full pipeline: build a target (``dft``, ``evolve``),
decompose it (``decompose``), lower to pulses (``compile``), plan atom
rearrangements (``rearrange``, ``buffer-stats``), and run the noise analysis
(``sweep``, ``fit``).  Exit codes: 0 success, 2 usage error, 3 semantic
validation failure (e.g. a non-unitary matrix), 4 unparseable input.
All stochastic commands require ``--seed`` and are bit-reproducible.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import clements, nativegates, noise, numerics, rearrange, sim, targets
from .errors import (
    ConsistencyError,
    DimensionError,
    FormatError,
    InsufficientDataError,
    ModemeshError,
    SymmetryError,
    UnitarityError,
    ValidationError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_PARSE = 4


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonneg_float(text: str) -> float:
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modemesh",
        description="Compile, simulate, and noise-profile lattice mode unitaries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dft", help="write a discrete Fourier transform matrix")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--shifted", action="store_true", help="center zero momentum")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dft)

    p = sub.add_parser("decompose", help="factor a unitary into a rotation circuit")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="multiply a circuit back into a matrix")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("compile", help="lower a circuit to a native pulse schedule")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("evolve", help="write exp(-i H tau) for a Hamiltonian")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="in_path", help="Hamiltonian JSON file")
    source.add_argument("--chain-n", type=_positive_int, help="build an open chain instead")
    p.add_argument("--t-nn", type=float, default=1.0)
    p.add_argument("--t-nnn", type=float, default=0.0)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("rearrange", help="plan a 2D rearrangement in three stages")
    p.add_argument("--in", dest="in_path", required=True, help="targets JSON file")
    p.add_argument("--l", type=_positive_int, help="grid size (checked against the file)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rearrange)

    p = sub.add_parser("buffer-stats", help="sample the buffer-column requirement")
    p.add_argument("--l", type=_positive_int, required=True)
    p.add_argument("--samples", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_buffer_stats)

    p = sub.add_parser("sweep", help="Monte-Carlo infidelity over a noise grid")
    p.add_argument(
        "--target",
        action="append",
        required=True,
        help="dft:N | perm:N | file:schedule.json (repeatable)",
    )
    p.add_argument("--sigma", type=_nonneg_float, action="append", required=True)
    p.add_argument("--epsilon", type=_nonneg_float, action="append")
    p.add_argument("--states", type=_positive_int, default=30)
    p.add_argument("--noise-instances", type=_positive_int, default=30)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="power-law fit of a sweep CSV")
    p.add_argument("--in", dest="in_path", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    return parser


def cmd_dft(args) -> int:
    m = targets.dft_matrix(args.n, shifted=args.shifted)
    numerics.save_json(numerics.matrix_to_json(m), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    m = numerics.matrix_from_json(numerics.load_json(args.in_path))
    circuit = clements.decompose(m)
    clements.save_circuit(circuit, args.out)
    print(f"gates={len(circuit.gates)} depth={circuit.depth}")
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    circuit = clements.load_circuit(args.in_path)
    m = clements.reconstruct(circuit)
    numerics.save_json(numerics.matrix_to_json(m), args.out)
    return EXIT_OK


def cmd_compile(args) -> int:
    circuit = clements.load_circuit(args.in_path)
    schedule = nativegates.absorb_phases(circuit)
    nativegates.save_schedule(schedule, args.out)
    composed = np.exp(1j * schedule.global_phase) * sim.schedule_to_unitary(schedule)
    distance = numerics.frobenius_distance(composed, clements.reconstruct(circuit))
    print(
        f"ops={len(schedule.ops)} global_phase={schedule.global_phase:.12g} "
        f"distance={distance:.3e}"
    )
    return EXIT_OK


def cmd_evolve(args) -> int:
    if args.in_path is not None:
        h = targets.load_hamiltonian(args.in_path)
    else:
        h = targets.chain_hamiltonian(args.chain_n, t_nn=args.t_nn, t_nnn=args.t_nnn)
    u = targets.evolution_unitary(h, args.tau)
    numerics.save_json(numerics.matrix_to_json(u), args.out)
    return EXIT_OK


def cmd_rearrange(args) -> int:
    mapping, l = rearrange.targets_from_json(numerics.load_json(args.in_path))
    if args.l is not None and args.l != l:
        raise ValidationError(f"--l {args.l} does not match targets file L={l}")
    plan = rearrange.hvh_plan(mapping, l)
    rearrange.save_plan(plan, args.out)
    networks = rearrange.plan_to_networks(plan)
    print(f"l_buffer={plan.l_buffer} depth={networks.total_depth}")
    return EXIT_OK


def cmd_buffer_stats(args) -> int:
    stats = rearrange.buffer_stats(args.l, args.samples, numerics.Rng(args.seed))
    with open(args.out, "w") as fh:
        fh.write(rearrange.buffer_stats_to_csv(stats))
    print(f"mean={stats.mean!r} std={stats.std!r}")
    return EXIT_OK


def _build_target(spec: str, seed: int) -> tuple[str, nativegates.PulseSchedule]:
    kind, _, arg = spec.partition(":")
    if kind == "dft" and arg:
        n = _parse_target_size(arg)
        circuit = clements.decompose(targets.dft_matrix(n))
        return spec, nativegates.absorb_phases(circuit)
    if kind == "perm" and arg:
        n = _parse_target_size(arg)
        gen = numerics.Rng(seed, stream_index=2**32).generator()
        perm = rearrange.Permutation(tuple(int(x) for x in gen.permutation(n)))
        network = rearrange.swap_network_1d(perm)
        return spec, nativegates.absorb_phases(rearrange.network_to_circuit(network))
    if kind == "file" and arg:
        return spec, nativegates.load_schedule(arg)
    raise FormatError(f"bad --target spec {spec!r}; expected dft:N, perm:N, or file:PATH")


def _parse_target_size(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise FormatError(f"bad target size {text!r}") from exc
    if n < 1:
        raise FormatError(f"target size must be >= 1, got {n}")
    return n


def cmd_sweep(args) -> int:
    target_list = [_build_target(spec, args.seed) for spec in args.target]
    epsilons = args.epsilon if args.epsilon else [0.0]
    result = noise.sweep(
        target_list,
        sigmas=args.sigma,
        epsilons=epsilons,
        seed=args.seed,
        n_states=args.states,
        n_noise=args.noise_instances,
    )
    noise.save_sweep(result, args.out)
    print(f"rows={len(result.rows)}")
    return EXIT_OK


def cmd_fit(args) -> int:
    result = noise.load_sweep(args.in_path)
    raw = noise.fit_power_law(result, per_mode=False)
    per_mode = noise.fit_power_law(result, per_mode=True)
    numerics.save_json(
        {"raw": noise.fit_to_json(raw), "per_mode": noise.fit_to_json(per_mode)},
        args.out,
    )
    print(
        f"raw: C={raw.c:.6g} k={raw.k:.6g} b={raw.b:.6g} | "
        f"per_mode: C={per_mode.c:.6g} k={per_mode.k:.6g} b={per_mode.b:.6g}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (
        DimensionError,
        UnitarityError,
        SymmetryError,
        ValidationError,
        InsufficientDataError,
        ConsistencyError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ModemeshError as exc:  # pragma: no cover - safety net
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry() -> None:
    raise SystemExit(main())
