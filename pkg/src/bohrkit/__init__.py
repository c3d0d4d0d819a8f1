"""Numerical toolkit for Bohr-type inequalities of bounded analytic functions.

The subpackages cover truncated power series of Schur-class functions
(:mod:`bohrkit.series`), the Bohr functionals with truncation error
(:mod:`bohrkit.functionals`), the radii (:mod:`bohrkit.radii`), the polydisk
(:mod:`bohrkit.multidim`) and certificates of sharpness and validity
(:mod:`bohrkit.sharpness`).
"""

from ._validation import (
    ArgumentError,
    BohrError,
    DomainError,
    NoRootError,
    PreconditionError,
)
from .functionals import FunctionalReport, evaluate
from .multidim import MultiSeries, dr_check, kn0_bounds, kn_bounds, two_variable_extremal
from .radii import (
    RadiusResult,
    radius_r_a1,
    radius_r_a2,
    radius_r_ap,
    radius_r_p,
    radius_R_Np,
    radius_R_p,
)
from .series import (
    CoefficientSeries,
    blaschke_series,
    moebius_series,
    schur_series,
    shifted_moebius_series,
)
from .sharpness import CampaignReport, WitnessReport, falsify_campaign, find_witness

__version__ = "0.1.0"

__all__ = [
    "ArgumentError",
    "BohrError",
    "CampaignReport",
    "CoefficientSeries",
    "DomainError",
    "FunctionalReport",
    "MultiSeries",
    "NoRootError",
    "PreconditionError",
    "RadiusResult",
    "WitnessReport",
    "blaschke_series",
    "dr_check",
    "evaluate",
    "falsify_campaign",
    "find_witness",
    "kn0_bounds",
    "kn_bounds",
    "moebius_series",
    "radius_R_Np",
    "radius_R_p",
    "radius_r_a1",
    "radius_r_a2",
    "radius_r_ap",
    "radius_r_p",
    "schur_series",
    "shifted_moebius_series",
    "two_variable_extremal",
]
