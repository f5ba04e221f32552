"""Linear canonical transforms, generalized monogenic signals and edge maps."""

__version__ = "0.1.0"

from .analytic1d import GasSignal, HalfPlanePoint, gas, gas_extend, gas_spectral, pht, poisson_extend_1d
from .clifford import (
    CliffordNum,
    Paravector,
    PolarForm,
    complex_arctan,
    complex_log,
    complex_sqrt,
    geometric_product,
    grade_parts,
    polar_decompose,
)
from .edge import EdgeMap, GroundTruth, dirac_apply, lca_map, mdcpc_map, pratt_fom, synth_image
from .features import FeatureMaps, compute_features, cr_residuals
from .grid import Field2D, SampledSignal1D
from .lct import ChirpSamplingWarning, LctParams, lct_2d, lct_forward_1d, lct_inverse_1d, lct_quadrature_oracle
from .monogenic import (
    MonogenicField,
    ddx0,
    monogenic_extend,
    monogenic_signal,
    monogenicity_residual,
    riesz_spatial_oracle,
    riesz_spectral,
)

__all__ = [
    "GasSignal",
    "HalfPlanePoint",
    "gas",
    "gas_extend",
    "gas_spectral",
    "pht",
    "poisson_extend_1d",
    "CliffordNum",
    "Paravector",
    "PolarForm",
    "complex_arctan",
    "complex_log",
    "complex_sqrt",
    "geometric_product",
    "grade_parts",
    "polar_decompose",
    "EdgeMap",
    "GroundTruth",
    "dirac_apply",
    "lca_map",
    "mdcpc_map",
    "pratt_fom",
    "synth_image",
    "FeatureMaps",
    "compute_features",
    "cr_residuals",
    "Field2D",
    "SampledSignal1D",
    "ChirpSamplingWarning",
    "LctParams",
    "lct_2d",
    "lct_forward_1d",
    "lct_inverse_1d",
    "lct_quadrature_oracle",
    "MonogenicField",
    "ddx0",
    "monogenic_extend",
    "monogenic_signal",
    "monogenicity_residual",
    "riesz_spatial_oracle",
    "riesz_spectral",
]
