"""Gibbs measures of double-well potentials on the binary full shift.

Transfer-operator eigendata in closed form, zero-temperature asymptotics,
Peierls barriers and calibrated sub-actions, finite-range oracles, and the
alternating nonselection construction.
"""

__version__ = "0.1.0"

from .errors import BracketTooWide, DWTError, NumericFailure, ValidationError
from .potential import (GeneralDoubleWell, PlateauSeq, ReducedPotential, derived_constants,
                        load_potential, reduce, validate_general, variation)
from .spectrum import (eigenfunction_table, eigenmeasure_cylinder, gibbs_cylinder, solve_lambda,
                       subaction_table)
from .asymptotics import equivalents, limit_subaction, log_scale_predictions, profile
from .peierls import barrier, corollary_identities, lax_oleinik_step, solve_calibrated

__all__ = [
    "BracketTooWide", "DWTError", "NumericFailure", "ValidationError",
    "GeneralDoubleWell", "PlateauSeq", "ReducedPotential", "derived_constants",
    "load_potential", "reduce", "validate_general", "variation",
    "eigenfunction_table", "eigenmeasure_cylinder", "gibbs_cylinder", "solve_lambda",
    "subaction_table", "equivalents", "limit_subaction", "log_scale_predictions", "profile",
    "barrier", "corollary_identities", "lax_oleinik_step", "solve_calibrated",
]
