"""Exact computations for A-graded binomial D-modules.

Given the matrix ``A``, a binomial ideal and its primary decomposition, the
package decides holonomicity and regularity, stratifies the parameter
space, finds slopes along coordinate subspaces, computes holonomic ranks and
irregularity dimensions, and builds truncated Gevrey series solutions.
Arithmetic is exact throughout (``int`` and ``fractions.Fraction``).
"""

__version__ = "0.1.0"

from .errors import (AssumptionViolated, BindmodError, CapExceeded, NotArtinian, NotHolonomic,
                     ParseError, PochhammerPole, ResourceLimit, SpecializationUnstable,
                     TruncationTooSmall, UnsupportedRank, ValidationError)
from .model import (GENERIC, Binomial, MatrixA, PartialCharacter, PrimaryComponent, Problem,
                    is_standard_homogeneous_prime, load_problem, parse_problem, prime_of)
from .stratify import (AffineArrangement, AffineTranslate, andean_arrangement, classify, is_holonomic,
                       is_regular, nonregular_arrangement, qdeg_component, relevant_components,
                       stratify_parameters)
from .umbrella import WeightL, compute_umbrella, critical_slopes, slopes_of_module
from .irregularity import dim_irr_stalk, holonomic_rank_generic, multiplicity, normalized_volume
from .gevrey import exponent_candidates, gevrey_basis, monomial_socle, phi_series, verify_solution

__all__ = [name for name in dir() if not name.startswith("_")]
