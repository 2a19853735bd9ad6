"""Connectivity of dense wireless networks confined in convex right prisms.

Analytic boundary-component expansion, Monte Carlo simulation, and a
quadrature oracle that cross-validates the two.
"""

from . import analytic, channel, geometry, quadrature, simulator
from .channel import ConnectivityModel, hard_disk, mimo_mrc_2x2, model_from_spec, rayleigh
from .geometry import (
    Domain,
    FeatureSet,
    Polygon2D,
    build_half_cylinder,
    build_house,
    build_right_prism,
    domain_from_spec,
)
from .simulator import BACKEND, SimConfig, SimResult, estimate, sweep

__version__ = "0.1.0"

__all__ = [
    "analytic",
    "channel",
    "geometry",
    "quadrature",
    "simulator",
    "ConnectivityModel",
    "Domain",
    "FeatureSet",
    "Polygon2D",
    "SimConfig",
    "SimResult",
    "BACKEND",
    "build_house",
    "build_half_cylinder",
    "build_right_prism",
    "domain_from_spec",
    "model_from_spec",
    "mimo_mrc_2x2",
    "rayleigh",
    "hard_disk",
    "estimate",
    "sweep",
]
