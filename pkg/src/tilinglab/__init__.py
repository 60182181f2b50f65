"""Exact q-weighted lozenge tiling generating functions on the triangular
lattice: regions, a transfer-matrix engine, closed forms and checks."""

from .engine import CapExceeded, count_tilings, tgf, tgf_dfs, tgf_dp, tgf_points
from .lattice import Region
from .qlaurent import QPoly, QRat
from .regions import FamilySpec, FernSpec, HSpec

__all__ = [
    "CapExceeded",
    "FamilySpec",
    "FernSpec",
    "HSpec",
    "QPoly",
    "QRat",
    "Region",
    "count_tilings",
    "tgf",
    "tgf_dfs",
    "tgf_dp",
    "tgf_points",
]
__version__ = "0.1.0"
