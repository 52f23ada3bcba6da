"""Coalition structure generation for induced subgraph games.

A divisive min-cut solver (gcs-q) with pluggable QUBO backends, exact and
greedy baselines, seeded benchmark instance generation, and a harness for
approximation-error and runtime-scaling studies.
"""

from .baselines import ExactResult, solve_brute_force, solve_clink, solve_dp
from .divisive import (
    GcsqConfig,
    GcsqTrace,
    SplitOutcome,
    TraceStep,
    anytime_best,
    optimal_split,
    run_gcsq,
)
from .errors import (
    CapacityError,
    DegenerateFitError,
    DimensionError,
    InstanceFormatError,
    IntegrityError,
    PartitionError,
    SolverAborted,
    SolveTimeoutError,
    TransportError,
)
from .game import (
    Coalition,
    CoalitionStructure,
    Graph,
    StructureReport,
    coalition_from_members,
    coalition_members,
    coalition_size,
    coalition_value,
    cut_value,
    grand_coalition,
    structure_from_masks,
    structure_value,
    validate_structure,
)
from .harness import (
    RunRecord,
    ScalingReport,
    approximation_error,
    build_report,
    compare_instances,
    linear_fit,
    read_records_csv,
    scaling_run,
    write_records_csv,
)
from .instances import (
    DistributionSpec,
    InstanceFile,
    generate_instance,
    load_instance,
    load_instance_file,
    sample_weights,
    save_instance,
)
from .qubo import (
    IsingProblem,
    QuboProblem,
    build_split_qubo,
    decode_split,
    ising_energy,
    qubo_energy,
    qubo_to_ising,
)
from .remote import RemoteEndpoint, solve_remote
from .solvers import (
    AnnealSchedule,
    SolveResult,
    TimingRecord,
    get_backend,
    record_runtime,
    record_runtimes,
    solve_exhaustive,
    solve_simulated_annealing,
)

__version__ = "0.1.0"
