"""Exact entanglement spectrum and single-copy entanglement of the spin-S AKLT chain."""

from .errors import ParameterError, ResourceError
from .majorization import (
    ConversionVerdict,
    SchmidtSpectrum,
    e1_bits,
    e1_integer_bits,
    expand,
    majorizes,
    max_distillable_dim,
    nielsen_max_entangled_check,
    uniform,
)
from .spectrum_core import (
    BoundarySpectrum,
    EntanglementReport,
    MultipletLevel,
    asymptotic_e1,
    boundary_polynomial,
    entanglement_report,
    largest_eigenvalue,
    legendre_coefficient,
    multiplet_X,
    single_copy_entanglement,
    spectrum,
    transfer_eigenvalue,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "BoundarySpectrum", "ConversionVerdict", "EntanglementReport", "MultipletLevel",
    "ParameterError", "ResourceError", "SchmidtSpectrum", "asymptotic_e1",
    "boundary_polynomial", "e1_bits", "e1_integer_bits", "entanglement_report", "expand",
    "largest_eigenvalue", "legendre_coefficient", "majorizes", "max_distillable_dim",
    "multiplet_X", "nielsen_max_entangled_check", "single_copy_entanglement", "spectrum",
    "transfer_eigenvalue", "uniform", "von_neumann_entropy",
]
