"""Atom rearrangement as swap networks: 1D routing and 2D three-stage plans.

1D: a permutation of lattice sites is realized by an odd-even transposition
network.  Site ``i`` is labeled with its target position and the labels are
sorted by compare-exchange layers of alternating parity (even pairs first);
wherever a compare-exchange fires, the physical network holds a SWAP gate
(``theta = 3*pi/2``, ``phi = pi``), elsewhere an identity (``theta = phi =
0``).  Sorting needs at most ``width`` layers, so the network depth is
bounded by the register size.

2D: a bijection on an ``L x L`` grid is realized in three stages -
horizontal, vertical, horizontal - where every stage is a bank of
independent 1D permutations (per row, per column, per row).  Rows are
extended by ``l_buffer`` spare columns; a greedy pass assigns every atom an
intermediate column ``c_I`` such that (a) no two atoms of one source row
share a ``c_I`` and (b) no two atoms in one intermediate column share a
target row.  When the greedy pass gets stuck it restarts with one more
buffer column; ``l_buffer = L - 1`` always suffices, because an atom can be
blocked by at most ``L - 1`` same-row predecessors plus ``L - 1``
same-target-row predecessors while ``2L - 1`` columns are available.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .clements import GivensCircuit, GivensGate
from .errors import ConsistencyError, FormatError, ValidationError
from .numerics import Rng, as_generator, load_json, save_json

SWAP_THETA = 3.0 * math.pi / 2.0
SWAP_PHI = math.pi


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``range(len(targets))``: item at ``i`` goes to ``targets[i]``."""

    targets: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        n = len(self.targets)
        if sorted(self.targets) != list(range(n)):
            raise ValidationError(f"not a bijection on range({n}): {self.targets}")

    def __len__(self) -> int:
        return len(self.targets)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    def matrix(self) -> np.ndarray:
        """Permutation matrix ``P`` with ``P @ e_i = e_targets[i]``."""
        n = len(self.targets)
        m = np.zeros((n, n), dtype=complex)
        for i, t in enumerate(self.targets):
            m[t, i] = 1.0
        return m


@dataclass(frozen=True)
class SwapLayer:
    parity: str  # "even" | "odd"
    swaps: tuple[bool, ...]  # one flag per adjacent pair of this parity


@dataclass
class SwapNetwork:
    width: int
    layers: list[SwapLayer] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def swap_count(self) -> int:
        return sum(sum(layer.swaps) for layer in self.layers)


def _layer_pairs(width: int, parity: str) -> list[tuple[int, int]]:
    start = 0 if parity == "even" else 1
    return [(i, i + 1) for i in range(start, width - 1, 2)]


def swap_network_1d(perm: Permutation) -> SwapNetwork:
    """Odd-even transposition network realizing ``perm``.

    Layer parities alternate starting even; trailing all-identity layers are
    trimmed, so the identity permutation yields an empty network and the
    depth never exceeds the register width.
    """
    width = len(perm)
    keys = list(perm.targets)
    layers: list[SwapLayer] = []
    for round_index in range(width):
        parity = "even" if round_index % 2 == 0 else "odd"
        flags = []
        for lo, hi in _layer_pairs(width, parity):
            if keys[lo] > keys[hi]:
                keys[lo], keys[hi] = keys[hi], keys[lo]
                flags.append(True)
            else:
                flags.append(False)
        layers.append(SwapLayer(parity, tuple(flags)))
    while layers and not any(layers[-1].swaps):
        layers.pop()
    network = SwapNetwork(width=width, layers=layers)
    realized = realized_permutation(network)
    if realized.targets != perm.targets:  # pragma: no cover - sorting guarantee
        raise ConsistencyError(
            f"swap network realizes {realized.targets}, wanted {perm.targets}"
        )
    return network


def apply_network(network: SwapNetwork, items: Sequence) -> list:
    """Push a list of per-site items through the network's swap layers."""
    if len(items) != network.width:
        raise ValidationError(
            f"item count {len(items)} does not match network width {network.width}"
        )
    cells = list(items)
    for layer in network.layers:
        for (lo, hi), flag in zip(_layer_pairs(network.width, layer.parity), layer.swaps):
            if flag:
                cells[lo], cells[hi] = cells[hi], cells[lo]
    return cells


def realized_permutation(network: SwapNetwork) -> Permutation:
    """The site-to-site map actually produced by the network."""
    final = apply_network(network, list(range(network.width)))
    targets = [0] * network.width
    for position, item in enumerate(final):
        targets[item] = position
    return Permutation(tuple(targets))


def network_to_circuit(network: SwapNetwork) -> GivensCircuit:
    """Emit one rotation gate per pair per layer (identity gates included).

    Identity slots carry exactly zero angles, which keeps them error-free
    under multiplicative phase noise after compilation.
    """
    gates = []
    for layer_index, layer in enumerate(network.layers):
        for (lo, _hi), flag in zip(_layer_pairs(network.width, layer.parity), layer.swaps):
            theta, phi = (SWAP_THETA, SWAP_PHI) if flag else (0.0, 0.0)
            gates.append(GivensGate(n=lo, theta=theta, phi=phi, layer=layer_index))
    return GivensCircuit(
        dim=network.width,
        gates=gates,
        diagonal_phases=np.zeros(network.width),
        global_phase=0.0,
    )


# ---------------------------------------------------------------------------
# 2D three-stage planning
# ---------------------------------------------------------------------------

Cell = tuple[int, int]


@dataclass
class HvhPlan:
    """Three stage banks of 1D permutations realizing a 2D bijection.

    ``stage1[r]`` permutes the ``l_ext`` columns of row ``r`` (sources to
    intermediate columns), ``stage2[c]`` permutes the ``l`` rows of column
    ``c`` (source rows to target rows), ``stage3[r]`` permutes row ``r``
    again (intermediate columns to target columns).
    """

    l: int
    l_buffer: int
    stage1: list[Permutation]
    stage2: list[Permutation]
    stage3: list[Permutation]

    @property
    def l_ext(self) -> int:
        return self.l + self.l_buffer


def _normalize_targets(targets: Mapping[Cell, Cell], l: int) -> dict[Cell, Cell]:
    if l < 1:
        raise ValidationError(f"grid size must be >= 1, got {l}")
    seen_targets: set[Cell] = set()
    normalized: dict[Cell, Cell] = {}
    for source, target in targets.items():
        sr, sc = int(source[0]), int(source[1])
        tr, tc = int(target[0]), int(target[1])
        if not (0 <= sr < l and 0 <= sc < l):
            raise ValidationError(f"source cell {source} outside {l}x{l} grid")
        if not (0 <= tr < l and 0 <= tc < l):
            raise ValidationError(f"target cell {target} outside {l}x{l} grid")
        if (tr, tc) in seen_targets:
            raise ValidationError(f"target cell {(tr, tc)} assigned twice")
        seen_targets.add((tr, tc))
        normalized[(sr, sc)] = (tr, tc)
    return normalized


def _greedy_columns(targets: dict[Cell, Cell], l: int) -> tuple[int, dict[Cell, int]]:
    """Assign intermediate columns; returns ``(l_buffer, column_of_source)``.

    Atoms are visited in row-major source order and take the smallest column
    that violates neither the per-row-distinct nor the per-column-distinct-
    target-row constraint.  On failure the whole pass restarts with one more
    buffer column.
    """
    atoms = sorted(targets.items())
    for l_buffer in range(l):
        l_ext = l + l_buffer
        row_used = [0] * l  # bitmask of taken intermediate columns per source row
        column_rows = [0] * l_ext  # bitmask of target rows present per column
        assignment: dict[Cell, int] = {}
        stuck = False
        for (sr, sc), (tr, _tc) in atoms:
            row_bits = row_used[sr]
            chosen = -1
            for c in range(l_ext):
                if not (row_bits >> c) & 1 and not (column_rows[c] >> tr) & 1:
                    chosen = c
                    break
            if chosen < 0:
                stuck = True
                break
            row_used[sr] |= 1 << chosen
            column_rows[chosen] |= 1 << tr
            assignment[(sr, sc)] = chosen
        if not stuck:
            return l_buffer, assignment
    raise ConsistencyError(  # pragma: no cover - pigeonhole guarantees success
        f"greedy column assignment failed even with l_buffer={l - 1}"
    )


def _pad_permutation(mapping: dict[int, int], size: int) -> Permutation:
    """Complete a partial injection on ``range(size)`` to a full permutation.

    Unmapped sources are paired with unused targets in ascending order (the
    'empty modes' of a stage move predictably).
    """
    targets = [-1] * size
    used = set(mapping.values())
    for src, dst in mapping.items():
        targets[src] = dst
    free = iter(sorted(set(range(size)) - used))
    for i in range(size):
        if targets[i] < 0:
            targets[i] = next(free)
    return Permutation(tuple(targets))


def hvh_plan(targets: Mapping[Cell, Cell], l: int) -> HvhPlan:
    """Plan a 2D rearrangement as horizontal/vertical/horizontal stages.

    ``targets`` maps source cells ``(row, col)`` to target cells; a full
    bijection on the grid is the normal case, and injective partial mappings
    (fewer atoms than cells) are accepted as well.  The returned plan always
    satisfies ``l_buffer <= l - 1``.
    """
    mapping = _normalize_targets(targets, l)
    l_buffer, columns = _greedy_columns(mapping, l)
    l_ext = l + l_buffer

    stage1 = []
    stage3 = []
    for r in range(l):
        horizontal_in = {
            sc: columns[(sr, sc)] for (sr, sc) in mapping if sr == r
        }
        stage1.append(_pad_permutation(horizontal_in, l_ext))
        horizontal_out = {
            columns[(sr, sc)]: tc
            for (sr, sc), (tr, tc) in mapping.items()
            if tr == r
        }
        stage3.append(_pad_permutation(horizontal_out, l_ext))
    stage2 = []
    for c in range(l_ext):
        vertical = {
            sr: tr for (sr, sc), (tr, _tc) in mapping.items() if columns[(sr, sc)] == c
        }
        stage2.append(_pad_permutation(vertical, l))
    plan = HvhPlan(l=l, l_buffer=l_buffer, stage1=stage1, stage2=stage2, stage3=stage3)
    validate_plan(plan, mapping)
    return plan


def validate_plan(plan: HvhPlan, targets: Mapping[Cell, Cell]) -> None:
    """Independent cell-by-cell check of a plan against its target mapping.

    Simulates the three stages on an occupancy grid and raises
    :class:`ValidationError` on any double-occupied cell, any atom leaving
    the extended grid, any atom ending away from its target, or a buffer
    overrun (``l_buffer > l - 1``).
    """
    l, l_ext = plan.l, plan.l_ext
    if plan.l_buffer > l - 1:
        raise ValidationError(f"l_buffer {plan.l_buffer} exceeds bound {l - 1}")
    if len(plan.stage1) != l or len(plan.stage3) != l or len(plan.stage2) != l_ext:
        raise ValidationError("stage bank sizes do not match grid dimensions")

    positions: dict[Cell, Cell] = {source: source for source in targets}

    def move(stage: int, transform) -> None:
        occupied: set[Cell] = set()
        for source, cell in positions.items():
            new = transform(cell)
            r, c = new
            if not (0 <= r < l and 0 <= c < l_ext):
                raise ValidationError(f"stage {stage}: atom {source} left the grid at {new}")
            if new in occupied:
                raise ValidationError(f"stage {stage}: collision at cell {new}")
            occupied.add(new)
            positions[source] = new

    move(1, lambda rc: (rc[0], plan.stage1[rc[0]].targets[rc[1]]))
    move(2, lambda rc: (plan.stage2[rc[1]].targets[rc[0]], rc[1]))
    move(3, lambda rc: (rc[0], plan.stage3[rc[0]].targets[rc[1]]))

    for source, target in targets.items():
        if positions[source] != tuple(target):
            raise ValidationError(
                f"atom from {source} ended at {positions[source]}, wanted {tuple(target)}"
            )


@dataclass
class PlanNetworks:
    """Swap networks for every 1D permutation of a plan, stage by stage."""

    stage1: list[SwapNetwork]
    stage2: list[SwapNetwork]
    stage3: list[SwapNetwork]

    @property
    def total_depth(self) -> int:
        """Layers on the critical path: stages run sequentially, rows/columns
        within a stage run in parallel."""
        return sum(
            max((net.depth for net in bank), default=0)
            for bank in (self.stage1, self.stage2, self.stage3)
        )

    def gate_count(self) -> int:
        return sum(
            sum(len(_layer_pairs(net.width, layer.parity)) for layer in net.layers)
            for bank in (self.stage1, self.stage2, self.stage3)
            for net in bank
        )


def plan_to_networks(plan: HvhPlan) -> PlanNetworks:
    """Lower every stage permutation to its odd-even transposition network.

    The critical-path depth is at most ``l_ext + l + l_ext <= 5*l - 2``.
    """
    return PlanNetworks(
        stage1=[swap_network_1d(p) for p in plan.stage1],
        stage2=[swap_network_1d(p) for p in plan.stage2],
        stage3=[swap_network_1d(p) for p in plan.stage3],
    )


# ---------------------------------------------------------------------------
# Buffer statistics
# ---------------------------------------------------------------------------

@dataclass
class BufferStats:
    l: int
    samples: int
    mean: float
    std: float
    histogram: dict[int, int]


def _random_bijection(l: int, gen) -> dict[Cell, Cell]:
    perm = gen.permutation(l * l)
    return {
        (i // l, i % l): (int(perm[i]) // l, int(perm[i]) % l) for i in range(l * l)
    }


def _all_bijections(l: int) -> Iterable[dict[Cell, Cell]]:
    cells = [(i // l, i % l) for i in range(l * l)]
    for image in itertools.permutations(range(l * l)):
        yield {cells[i]: cells[image[i]] for i in range(l * l)}


def buffer_stats(l: int, samples: int, rng, *, exhaustive: bool = False) -> BufferStats:
    """Distribution of the greedy buffer requirement over random bijections.

    With ``exhaustive=True`` all ``(l*l)!`` bijections are enumerated instead
    of sampled (``samples`` is ignored); that is only tractable for ``l <= 2``
    and rejected otherwise.
    """
    values: list[int] = []
    if exhaustive:
        if l > 2:
            raise ValidationError(
                f"exhaustive enumeration of ({l * l})! bijections is not tractable"
            )
        for mapping in _all_bijections(l):
            l_buffer, _ = _greedy_columns(mapping, l)
            values.append(l_buffer)
    else:
        if samples < 1:
            raise ValidationError(f"need at least one sample, got {samples}")
        base = rng if isinstance(rng, Rng) else None
        gen = None if base is not None else as_generator(rng)
        for index in range(samples):
            sample_gen = base.stream(base.stream_index + index).generator() if base else gen
            mapping = _random_bijection(l, sample_gen)
            l_buffer, _ = _greedy_columns(mapping, l)
            values.append(l_buffer)
    arr = np.array(values)
    histogram = {int(v): int((arr == v).sum()) for v in sorted(set(values))}
    return BufferStats(
        l=l,
        samples=len(values),
        mean=float(arr.mean()),
        std=float(arr.std()),
        histogram=histogram,
    )


# ---------------------------------------------------------------------------
# Wire formats
# ---------------------------------------------------------------------------

def plan_to_json(plan: HvhPlan) -> dict[str, Any]:
    return {
        "L": plan.l,
        "L_buffer": plan.l_buffer,
        "stage1": [list(p.targets) for p in plan.stage1],
        "stage2": [list(p.targets) for p in plan.stage2],
        "stage3": [list(p.targets) for p in plan.stage3],
    }


def plan_from_json(obj) -> HvhPlan:
    try:
        return HvhPlan(
            l=int(obj["L"]),
            l_buffer=int(obj["L_buffer"]),
            stage1=[Permutation(tuple(p)) for p in obj["stage1"]],
            stage2=[Permutation(tuple(p)) for p in obj["stage2"]],
            stage3=[Permutation(tuple(p)) for p in obj["stage3"]],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed plan object: {exc}") from exc


def save_plan(plan: HvhPlan, path) -> None:
    save_json(plan_to_json(plan), path)


def load_plan(path) -> HvhPlan:
    return plan_from_json(load_json(path))


def targets_from_json(obj) -> tuple[dict[Cell, Cell], int]:
    """Decode a target-mapping file: ``{"L": l, "map": [[r, c], ...]}`` where
    ``map`` lists the target cell of every source cell in row-major order."""
    try:
        l = int(obj["L"])
        raw = obj["map"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed targets object: {exc}") from exc
    if len(raw) != l * l:
        raise FormatError(f"targets map has {len(raw)} entries, expected {l * l}")
    mapping: dict[Cell, Cell] = {}
    for i, pair in enumerate(raw):
        try:
            r, c = int(pair[0]), int(pair[1])
        except (TypeError, ValueError, IndexError) as exc:
            raise FormatError(f"bad target cell at index {i}: {pair!r}") from exc
        mapping[(i // l, i % l)] = (r, c)
    return mapping, l


def targets_to_json(targets: Mapping[Cell, Cell], l: int) -> dict[str, Any]:
    cells = [(i // l, i % l) for i in range(l * l)]
    if set(targets) != set(cells):
        raise ValidationError("targets file format requires a full bijection")
    return {"L": l, "map": [list(targets[cell]) for cell in cells]}


def buffer_stats_to_csv(stats: BufferStats) -> str:
    lines = ["L,samples,mean,std"]
    lines.append(f"{stats.l},{stats.samples},{stats.mean!r},{stats.std!r}")
    lines.append("L,l_buffer,count")
    for value in sorted(stats.histogram):
        lines.append(f"{stats.l},{value},{stats.histogram[value]}")
    return "\n".join(lines) + "\n"
