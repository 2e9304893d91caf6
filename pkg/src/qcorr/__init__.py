"""Correlation measures for bipartite quantum states.

Subsystem A is always the slow (left, row-major) tensor factor. Entropies
are in bits. Optimization-based quantities take an OptimizerConfig whose
seed fixes every restart, so repeated calls are bit-identical.
"""
from .correlations import (
    ConditionalEnsemble,
    classical_correlation,
    discord_mi,
    discord_oz,
    entropy,
    measure_and_condition,
    mutual_information,
    relative_entropy,
)
from .errors import (
    BadRank,
    BadTrace,
    DimensionMismatch,
    InfiniteRelativeEntropy,
    MessageOverflow,
    NotHermitian,
    NotPositive,
    NotProductInput,
    NOutOfRange,
    QcorrError,
    SingularReference,
    UnrealizableClass,
    VanishingClassWarning,
    VerificationFailed,
)
from .kclassical import (
    KClassicalVerdict,
    commutant_blocks,
    is_k_classical,
    k_discord,
    mi_drop,
    rel_entropy_to_classical,
    thermal_k_discord,
)
from .locc import (
    LoccProtocol,
    ProtocolStep,
    RestrictedGate,
    StateSet,
    fully_local_search,
    implements,
    implements_report,
    nmr_scenario,
    reversibility_check,
    simulate,
    theorem2_probe,
)
from .measurements import (
    Instrument,
    MeasurementClass,
    apply_instrument,
    count_independent,
    instrument_from_povm,
    make_instrument,
    membership,
    optimize_over_class,
    projective_instrument,
    sample_instrument,
    weak_binary_instrument,
)
from .optimize import OptimizerConfig
from .petz import (
    PetzReport,
    Theorem1Record,
    petz_recovery,
    theorem1_check,
    verify_lemma1,
)
from .qstate import (
    DensityMatrix,
    QuantumChannel,
    apply_channel,
    bell_pair,
    dephasing_channel,
    identity_channel,
    is_npt,
    make_channel,
    make_density,
    maximally_mixed,
    noisy_family,
    partial_trace,
    pure_density,
    random_classical_density,
    random_density,
    random_local_channel,
    random_unitary,
    swap_subsystems,
    tensor,
    unitary_channel,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
