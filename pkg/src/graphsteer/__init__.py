"""EPR steering in Gaussian weighted graph states."""

from .errors import DomainError, GraphSteerError, NumericalDegeneracyError, ValidationError
from .policy import DEFAULT_POLICY, NumericPolicy
from .states import (
    DEFAULT_R,
    FamilyKind,
    GraphWeights,
    Orientation,
    SqueezedInput,
    StateFamily,
    build_gaussian_state,
    build_state,
    closed_form_cov,
    closed_form_fourmode_cov,
    closed_form_tripartite_cov,
    fourmode_network_unitary,
    nullifier_prefactors,
    nullifier_variances,
    transmittance_from_weight,
    tripartite_network_unitary,
    weight_factor,
    weights_from_transmittance,
)
from .steering import (
    Directionality,
    EntanglementValue,
    MonogamyResidual,
    OneWayWindow,
    SteeringValue,
    ZeroCrossing,
    classify_directionality,
    find_all_zero_crossings,
    find_zero_crossing,
    gaussian_steering,
    group_steering,
    log_negativity,
    monogamy_residuals,
    one_way_windows,
    pairwise_steering_table,
)
from .symplectic import (
    Bipartition,
    apply_symplectic,
    partial_transpose,
    schur_complement,
    symplectic_eigenvalues,
    symplectic_form,
    unitary_to_symplectic,
)

__version__ = "0.1.0"
