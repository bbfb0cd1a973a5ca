"""Iwasawa projections, explicit weight formulas and Monte-Carlo convergence
scans for integrals over maximal unipotent subgroups."""

from .closed_forms import GroupSpec, RankOneParams
from .inequalities import BoundReport
from .integrators import IntegrandSpec, ScanReport, ScanThresholds, mc_estimate, radial_scan
from .iwasawa import IwasawaFactors, WeightCombo, group_norm, iwasawa

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "GroupSpec",
    "IntegrandSpec",
    "IwasawaFactors",
    "RankOneParams",
    "ScanReport",
    "ScanThresholds",
    "WeightCombo",
    "group_norm",
    "iwasawa",
    "mc_estimate",
    "radial_scan",
]
