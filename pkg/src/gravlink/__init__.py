"""Quantum-metrology precision bounds for gravitationally redshifted optical links."""

__version__ = "0.1.0"

from .spacetime import (
    EARTH_MASS,
    EARTH_RADIUS,
    GRAVITATIONAL_CONSTANT,
    SPEED_OF_LIGHT,
    ObserverPair,
    SchwarzschildGeometry,
    delta_approx,
    delta_exact,
    metric_function,
    proper_time_factor,
    redshift_ratio,
)
from .wavepacket import (
    PACKET_PRESETS,
    ChannelParams,
    GaussianWavepacket,
    channel_params,
    overlap_exact,
    overlap_from_delta,
    overlap_perturbative,
    propagate,
    small_parameter_x,
)
from .gaussian import (
    BogoliubovCoefficients,
    GaussianState,
    apply_symplectic,
    beam_splitter,
    bogoliubov_to_symplectic,
    coherent,
    direct_sum,
    is_symplectic,
    partial_trace,
    rotation,
    squeezed,
    squeezer,
    symplectic_eigenvalues,
    symplectic_form,
    tensor,
    thermal,
    two_channel_beam_splitter,
    two_mode_squeezed,
    vacuum,
)
from .fidelity import (
    fidelity,
    fidelity_single_mode,
    fidelity_two_mode_zero_mean,
    log_fidelity,
)
from .metrology import (
    FisherMatrix,
    PrecisionBound,
    QfiEstimate,
    SchemeSpec,
    bound_L,
    bound_rs,
    compare_schemes,
    figure_of_merit,
    fisher_matrix_rs_L,
    general_mixed_fidelity_coefficient,
    qfi_closed_form_appendix,
    qfi_from_fidelity,
    reduced_state,
    scheme_relative_bound_x,
    theta_uncertainty_bound,
)
from .estimator import (
    TrialConfig,
    TrialResult,
    crb_validation_report,
    measurement_fisher_information,
    mle_theta,
    sample_measurements,
)
from .scenario import Scenario, default_scenario, load_scenario

__all__ = [name for name in dir() if not name.startswith("_")]
