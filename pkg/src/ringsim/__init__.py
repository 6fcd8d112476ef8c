"""Simulator for multi-path active ring circuits built on a mesh of delay lines."""

__version__ = "0.1.0"

from .circuit import (
    KING,
    ROOK,
    CircuitError,
    ElectricPart,
    FrequencyChannel,
    Mesh,
    MeshNode,
    Path,
    PhaseAngle,
    PortConfig,
    RingCircuit,
    TwoPathChain,
    build_mesh,
    default_ports,
    two_path_chain,
)
from .combinatorics import corner_path_count, functional_throughput, instruction_count, total_path_count
from .compiler import (
    build_factorization_device,
    build_mesh_problem,
    assign_channels,
    factorize,
    solve_shortest,
)
from .dispersion import BVMSW, MSSW, OutOfBandError, SpinWaveMedium, frequency_at, wavenumber_for
from .engine import (
    SensorGrid,
    SweepReport,
    enumerate_paths,
    find_resonant_paths,
    sensor_readout,
    simulate_rounds,
    sweep_gain,
    sweep_phase,
)
from .files import CircuitFileError, load_circuit, load_fixture, save_circuit
