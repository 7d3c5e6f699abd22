"""Interoperability simulator and measurement library for standards research."""

from .config import ConfigError, ScenarioConfig, StrategyParams, config_from_dict, load_config
from .conformance import (
    Adaptor,
    CostLedger,
    CostParams,
    GroundingState,
    grounding_dialogue,
    mediated_translate,
    sdo_revise,
    select_strategy,
    universal_sync,
)
from .engine import (
    RegimePreset,
    RunResult,
    regime_experiment,
    run_scenario,
    sweep_shared_fraction,
    time_to_divergence,
)
from .fitness import (
    FitnessDecomposition,
    PerformanceCurve,
    expected_utility,
    fidelity,
    fitness_decomposition,
    performance_curve,
    potential_fitness,
    realized_fitness,
)
from .model import (
    CommonModel,
    Implementation,
    InteropOutcome,
    MappingTable,
    Standard,
    Task,
    TaskPopulation,
    VariationParams,
    common_core,
    derive_implementation,
    evaluate_interop,
    interoperability_gap,
    make_standard,
    practice_gap,
)
from .sdt import (
    DegeneratePopulationError,
    LabeledSample,
    auc_pair_count,
    confusion_at_cutoff,
    label_suitability,
    optimal_cutoff,
    roc_curve,
    technomarker_core_coverage,
)
from .variation import (
    DriftParams,
    ResidualBucket,
    divergence,
    record_residual,
    spawn_from_residual,
    step_impl_drift,
    step_task_drift,
)

__version__ = "0.1.0"
