"""coheq: synthesis and verification of completely passive coherent equalizers
for linear quantum channels, via a two-disk H-infinity reduction solved with
Riccati equations and LMI feasibility, plus an SDP performance lower bound."""

from .lti import FrequencyGrid, StabilityMargin, StateSpaceModel

__all__ = ["StateSpaceModel", "FrequencyGrid", "StabilityMargin"]
__version__ = "0.1.0"
