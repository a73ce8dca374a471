"""Exact calculus of generalized plane curve singularity schemes.

The package computes invariants of singularity schemes, the residual,
extension and specialization operations, replayable h1-vanishing
certificates, an independent linear-algebra cohomology oracle, and the
degree bounds that follow from the vanishing criteria.
"""

from .bounds import BoundReport, bound_report, check_lemma411, check_prop58, check_theorem1, check_theorem2, sigma
from .certifier import Certificate, VanishingConstants, certify_gs, certify_gs1, replay
from .errors import (
    GLSError,
    InputError,
    PaperInvariantViolation,
    Refusal,
    ReplayMismatch,
)
from .oracle import conditions_of, h0_h1
from .puiseux import BranchGerm, FractionalSeries
from .scheme import GSScheme, build_scheme, degree_via_contacts, extend, intersect_line, reduce, specialize

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BranchGerm",
    "Certificate",
    "FractionalSeries",
    "GLSError",
    "GSScheme",
    "InputError",
    "PaperInvariantViolation",
    "Refusal",
    "ReplayMismatch",
    "VanishingConstants",
    "bound_report",
    "build_scheme",
    "certify_gs",
    "certify_gs1",
    "check_lemma411",
    "check_prop58",
    "check_theorem1",
    "check_theorem2",
    "conditions_of",
    "degree_via_contacts",
    "extend",
    "h0_h1",
    "intersect_line",
    "reduce",
    "replay",
    "sigma",
    "specialize",
]
