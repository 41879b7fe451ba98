"""Bell-test workbench for a non-maximally entangled photon experiment."""

from .errors import BellTestError, ConsistencyError, DegeneratePredictionError, ParseError, ValidationError
from .lhv import (
    ConstantModel,
    LhvModel,
    MalusModel,
    TableModel,
    VertexStrategy,
    bundled_model,
    enumerate_vertices,
    lhv_expected_counts,
    pointwise_j,
    verify_nonnegativity,
    vertex_j,
)
from .metrics import AnomalyReport, JResult, anomaly_report, j_value, poisson_sigma, significance
from .predictor import (
    CountsTable,
    ExperimentParams,
    SettingAngles,
    expected_coincidences,
    expected_singles,
    predict_table,
)
from .quantum import (
    EntangledPairState,
    FourOutcomeDistribution,
    coincidence_probability,
    joint_outcome_distribution,
    singles_probability_alice,
    singles_probability_bob,
)
from .simulator import (
    SimulatedCounts,
    SimulationConfig,
    SimulationSpec,
    simulate_lhv,
    simulate_quantum,
    sweep_seeds,
)

__version__ = "0.1.0"
