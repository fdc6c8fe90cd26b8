"""Compiler, simulator, and noise-analysis toolkit for lattice mode unitaries."""

from .clements import (
    GivensCircuit,
    GivensGate,
    decompose,
    reconstruct,
    schedule_layers,
    t_matrix,
)
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
from .nativegates import (
    Dimerize,
    GlobalX,
    LocalZ,
    NativeGateParams,
    PulseSchedule,
    absorb_phases,
    commute_phase,
    x_matrix,
    z_matrix,
    zxzx_params,
    zxzx_product,
)
from .noise import (
    NoiseModel,
    PowerLawFit,
    SweepResult,
    SweepRow,
    fit_power_law,
    monte_carlo_infidelity,
    perturb_phases,
    sweep,
)
from .numerics import (
    Rng,
    frobenius_distance,
    haar_unitary,
    hermitian_eig,
    is_unitary,
    random_state,
)
from .rearrange import (
    BufferStats,
    HvhPlan,
    Permutation,
    SwapNetwork,
    buffer_stats,
    hvh_plan,
    network_to_circuit,
    plan_to_networks,
    swap_network_1d,
    validate_plan,
)
from .sim import ExecutionOptions, apply_schedule, fidelity, schedule_to_unitary
from .targets import (
    Hamiltonian,
    chain_hamiltonian,
    dft_matrix,
    evolution_unitary,
    load_hamiltonian,
)

__version__ = "0.1.0"
