"""
abstab - Basis-independent stabilizerness of qudit states
=========================================================
Decides from a spectrum alone whether every unitary conjugate of a state
is a stabilizer mixture (ASTAB) or has a nonnegative discrete Wigner
function (AWP), and builds the spectral polytopes and radii behind those
tests.
"""
__version__ = "0.3.0"

from .classifier import (ClassificationReport, astab_test, awp_test, build_astab_spectral_polytope,
                         build_awp_spectral_polytope, classify, radii_report, wp_test)
from .evidence import conjecture_harness, sample_lambda_vertices
from .operators import HermitianOperator
from .polytope import RationalPolytope, double_description, intersect_halfspace, permutation_closure
from .spectra import Spectrum, eigen_spectrum, kyfan_min_pairing

__all__ = [
    "ClassificationReport",
    "HermitianOperator",
    "RationalPolytope",
    "Spectrum",
    "astab_test",
    "awp_test",
    "build_astab_spectral_polytope",
    "build_awp_spectral_polytope",
    "classify",
    "conjecture_harness",
    "double_description",
    "eigen_spectrum",
    "intersect_halfspace",
    "kyfan_min_pairing",
    "permutation_closure",
    "radii_report",
    "sample_lambda_vertices",
    "wp_test",
]
