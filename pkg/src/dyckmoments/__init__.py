"""Weight polynomials of lattice paths, moment inversion trees and random Jacobi matrices."""

from .lattice import (
    CapExceededError,
    LatticePath,
    catalan,
    closed_form,
    comp_pairs,
    compositions,
    enumerate_paths,
    path_weight,
    rho1,
    rho2,
    weight_polynomial,
)
from .moments import MomentExpr, alpha, alpha_k, check_recurrences, expectation_bridge, omega
from .poly import Family, Poly, SymbolId, evaluate_numeric, expectation_substitute
from .report import Report
from .series import LaurentSeries, power_coefficient, reciprocal_z_minus, series_from, verify_relation
from .spectra import DistributionSpec, JacobiSample, exact_expected, mc_estimate, tau_consistency
from .trees import LeveledTree, enumerate_trees, extend, invert_oracle, phi, reconstruct, tree_weight

__version__ = "0.1.0"
