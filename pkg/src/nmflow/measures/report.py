"""Assembled per-scenario measure report."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import ValidationError
from ..models.base import DynamicalModel
from .blp import BackflowResult, SearchSettings, blp_measure, helstrom_measure
from .divisibility import (DivisibilityResult, VolumeResult, classify_divisibility,
                           volume_monotone)
from .rhp import RHPResult, rhp_measure


@dataclass(frozen=True)
class MeasureReport:
    blp: Optional[BackflowResult] = None
    helstrom: Optional[BackflowResult] = None
    rhp: Optional[RHPResult] = None
    divisibility: Optional[DivisibilityResult] = None
    volume: Optional[VolumeResult] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.blp is not None and self.blp.value < 0:
            raise ValidationError("blp must be nonnegative")
        if self.helstrom is not None and self.helstrom.value < 0:
            raise ValidationError("helstrom must be nonnegative")
        if (self.blp is not None and self.helstrom is not None
                and self.blp.value > self.helstrom.value + 1e-9):
            raise ValidationError(
                f"blp {self.blp.value} exceeds helstrom {self.helstrom.value}: "
                "the biased domain contains the unbiased pairs")


def compute_report(model: DynamicalModel, times,
                   settings: SearchSettings = SearchSettings(),
                   tols: Tolerances = DEFAULT,
                   with_blp: bool = True, with_helstrom: bool = True,
                   with_rhp: bool = True, with_divisibility: bool = True,
                   with_volume: bool = True) -> MeasureReport:
    """Run the toggled measures on one model over one window."""
    times = np.asarray(times, dtype=float)
    blp = blp_measure(model, times, settings, tols) if with_blp else None
    helstrom = None
    if with_helstrom:
        helstrom = helstrom_measure(model, times, settings, tols, seed=blp)
    rhp = rhp_measure(model, times, tols=tols) if with_rhp else None
    divis = classify_divisibility(model, times, tols) if with_divisibility else None
    volume = volume_monotone(model, times, tols) if with_volume else None
    diagnostics = {
        "n_times": len(times),
        "t_max": float(times[-1]),
        "search_grid": f"{settings.n_azimuthal}x{settings.n_polar}",
    }
    if blp is not None:
        diagnostics["blp_candidates"] = blp.n_candidates
        diagnostics["blp_refinement_error"] = blp.refinement_error
        diagnostics["blp_certified_zero"] = blp.certified_zero
    return MeasureReport(blp=blp, helstrom=helstrom, rhp=rhp,
                         divisibility=divis, volume=volume,
                         diagnostics=diagnostics)
