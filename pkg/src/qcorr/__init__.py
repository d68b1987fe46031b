"""Classical and quantum correlations of finite-dimensional bipartite states."""

from .qmat import (
    BipartiteState,
    InvalidStateError,
    bell_state,
    partial_trace,
    purify,
    random_mixed,
    random_pure,
    random_separable,
    random_unitary,
    tensor_product,
    validate_density,
)
from .entropy import holevo_quantity, mutual_information, shannon_entropy, von_neumann_entropy
from .channel import (
    KrausChannel,
    choi_matrix,
    complementary_apply,
    erase_channel,
    exchange_entropy,
    extend_identity,
    kraus_apply,
    random_channel,
    stinespring_isometry,
)
from .measurement import (
    VonNeumannMeasurement,
    apply_nonselective,
    conditional_ensemble,
    measured_mutual_information,
    measurement_from_unitary,
)
from .correlations import (
    CorrelationReport,
    OptimizerConfig,
    classical_correlation,
    correlation_report,
    quantum_discord,
)

__all__ = [
    "BipartiteState",
    "InvalidStateError",
    "bell_state",
    "partial_trace",
    "purify",
    "random_mixed",
    "random_pure",
    "random_separable",
    "random_unitary",
    "tensor_product",
    "validate_density",
    "KrausChannel",
    "choi_matrix",
    "complementary_apply",
    "erase_channel",
    "exchange_entropy",
    "extend_identity",
    "kraus_apply",
    "random_channel",
    "stinespring_isometry",
    "VonNeumannMeasurement",
    "apply_nonselective",
    "conditional_ensemble",
    "measured_mutual_information",
    "measurement_from_unitary",
    "CorrelationReport",
    "OptimizerConfig",
    "classical_correlation",
    "correlation_report",
    "quantum_discord",
    "holevo_quantity",
    "mutual_information",
    "shannon_entropy",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
