"""Non-Markovianity measures and divisibility classification."""

from .blp import (BackflowResult, SearchSettings, blp_local_representation,
                  blp_measure, certified_monotone, direction_grid, evolved_norms,
                  helstrom_measure)
from .divisibility import (DivisibilityClass, DivisibilityResult, VolumeResult,
                           classify_divisibility, volume_monotone)
from .report import MeasureReport, compute_report
from .rhp import RHPResult, dephasing_rate_rhp, rhp_measure
from .trajectory import (DistinguishabilityTrajectory, IncreaseInterval, backflow,
                         increase_intervals)

__all__ = [
    "BackflowResult", "SearchSettings", "blp_local_representation", "blp_measure",
    "certified_monotone", "direction_grid", "evolved_norms", "helstrom_measure",
    "DivisibilityClass", "DivisibilityResult", "VolumeResult",
    "classify_divisibility", "volume_monotone",
    "MeasureReport", "compute_report",
    "RHPResult", "dephasing_rate_rhp", "rhp_measure",
    "DistinguishabilityTrajectory", "IncreaseInterval", "backflow",
    "increase_intervals",
]
