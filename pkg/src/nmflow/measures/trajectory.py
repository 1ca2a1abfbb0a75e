"""Distinguishability trajectories and the backflow integral.

The total backflow sums, over every maximal interval on which the
sampled distinguishability rises, the endpoint gain D(t_f) - D(t_i);
this is exactly the trapezoid-rule integral of the positive part of the
derivative for the piecewise-linear interpolant.  Rising runs whose gain
stays inside the hysteresis band do not count (grid-level noise must
not register as backflow).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import ValidationError


@dataclass(frozen=True)
class IncreaseInterval:
    t_start: float
    t_end: float
    gain: float


def increase_intervals(times, values, band: float = DEFAULT.hysteresis) -> list[IncreaseInterval]:
    """Maximal rising runs of a sampled trajectory with gain above band."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    rising = np.diff(values) > 0
    if not rising.any():
        return []
    edges = np.diff(rising.astype(int))
    starts = list(np.flatnonzero(edges == 1) + 1)
    ends = list(np.flatnonzero(edges == -1) + 1)
    if rising[0]:
        starts.insert(0, 0)
    if rising[-1]:
        ends.append(len(values) - 1)
    out = []
    for i, j in zip(starts, ends):
        gain = values[j] - values[i]
        if gain > band:
            out.append(IncreaseInterval(float(times[i]), float(times[j]), float(gain)))
    return out


def backflow(times, values, band: float = DEFAULT.hysteresis) -> float:
    """Total distinguishability gain over all rising intervals."""
    return float(sum(iv.gain for iv in increase_intervals(times, values, band)))


@dataclass(frozen=True)
class DistinguishabilityTrajectory:
    """Sampled D(t) (or Helstrom norm) with derivative estimates.

    check_range is switched off only for diagnostics of deliberately
    non-CP map families, whose pseudo-distinguishability may exceed 1.
    """

    times: np.ndarray
    values: np.ndarray
    pair_label: str = ""
    normalization: float = 1.0
    check_range: bool = True
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape or times.ndim != 1:
            raise ValidationError("times and values must be matching 1-d arrays")
        if np.any(np.diff(times) <= 0):
            raise ValidationError("time grid must be strictly increasing")
        if self.check_range:
            if np.min(values) < -1e-9 or np.max(values) > 1.0 + 1e-9:
                raise ValidationError(
                    f"distinguishability outside [0, 1]: range "
                    f"[{values.min():.3e}, {values.max():.3e}]")
        times.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def sigma(self) -> np.ndarray:
        """Central-difference derivative estimate on the grid."""
        return np.gradient(self.values, self.times) / self.normalization

    def intervals(self) -> list[IncreaseInterval]:
        return increase_intervals(self.times, self.values, self.tols.hysteresis)

    def backflow(self) -> float:
        return backflow(self.times, self.values, self.tols.hysteresis) / self.normalization
