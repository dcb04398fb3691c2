"""Kolakoski-(2m, 2n) sequences as constant-length substitutions and limit-periodic model sets."""

from .constant_length import (
    CoincidenceCertificate,
    CoincidenceMatrix,
    DerivedSubstitution,
    HeightResult,
    SpectralVerdict,
    SpectrumReport,
    block_substitution,
    coincidence_matrix,
    constant_length_substitution,
    full_coincidence,
    height,
    minimal_coincidence,
    numbered_substitution,
    pairwise_coincidence,
    position_gcd,
    spectral_verdict,
    spectrum_report,
    theta,
    theta_tilde,
)
from .diffraction import (
    AutocorrelationEstimate,
    BraggPeak,
    ScatteringAssignment,
    SupportDescriptor,
    autocorrelation,
    block_weights,
    bragg_amplitude,
    bragg_support,
    diffraction_spectrum,
    effective_support_gcd,
    exponential_sum,
    fourier_coset,
)
from .errors import (
    ConfigurationError,
    InternalConsistencyError,
    KolakoskiError,
    ParameterError,
    ValidationError,
)
from .kernels import BACKEND
from .ladic import (
    ColorMap,
    EmbeddingSpec,
    LAdicAddress,
    cell_letter,
    embed,
    hensel_digits,
    metric_abs,
    render,
    valuation,
)
from .model_set import (
    CosetDecomposition,
    CutProjectDescriptor,
    IfsSystem,
    LatticeCoset,
    coset_decomposition,
    cut_project_descriptor,
    ifs_system,
    letter_frequencies,
    verify_cosets_against_prefix,
)
from .substitution import (
    KolParams,
    Substitution,
    apply,
    fixed_point_prefix,
    is_constant_length,
    is_primitive,
    kolakoski_bi_prefix,
    kolakoski_prefix,
    parity_substitution,
    run_length_encode,
    substitution_matrix,
    verify_self_encoding,
)

__all__ = [
    "AutocorrelationEstimate",
    "BACKEND",
    "BraggPeak",
    "CoincidenceCertificate",
    "CoincidenceMatrix",
    "ColorMap",
    "ConfigurationError",
    "CosetDecomposition",
    "CutProjectDescriptor",
    "DerivedSubstitution",
    "EmbeddingSpec",
    "HeightResult",
    "IfsSystem",
    "InternalConsistencyError",
    "KolParams",
    "KolakoskiError",
    "LAdicAddress",
    "LatticeCoset",
    "ParameterError",
    "ScatteringAssignment",
    "SpectralVerdict",
    "SpectrumReport",
    "Substitution",
    "SupportDescriptor",
    "ValidationError",
    "apply",
    "autocorrelation",
    "block_substitution",
    "block_weights",
    "bragg_amplitude",
    "bragg_support",
    "cell_letter",
    "coincidence_matrix",
    "constant_length_substitution",
    "coset_decomposition",
    "cut_project_descriptor",
    "diffraction_spectrum",
    "effective_support_gcd",
    "embed",
    "exponential_sum",
    "fixed_point_prefix",
    "fourier_coset",
    "full_coincidence",
    "height",
    "hensel_digits",
    "ifs_system",
    "is_constant_length",
    "is_primitive",
    "kolakoski_bi_prefix",
    "kolakoski_prefix",
    "letter_frequencies",
    "metric_abs",
    "minimal_coincidence",
    "numbered_substitution",
    "pairwise_coincidence",
    "parity_substitution",
    "position_gcd",
    "render",
    "run_length_encode",
    "spectral_verdict",
    "spectrum_report",
    "substitution_matrix",
    "theta",
    "theta_tilde",
    "valuation",
    "verify_cosets_against_prefix",
    "verify_self_encoding",
]
