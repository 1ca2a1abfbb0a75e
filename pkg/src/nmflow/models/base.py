"""Common interface of the solvable open-system models.

A dynamical model exposes its one-parameter map family cheaply at any
time; measures consume the superoperator trajectory.  Models that admit
a time-local generator expose it for the rate-based classifiers.
"""

from __future__ import annotations

import abc
from typing import Optional, Sequence

import numpy as np

from ..config import DEFAULT, Tolerances
from ..core.generators import TimeLocalGenerator
from ..core.maps import QuantumMap, superop_to_choi


class DynamicalModel(abc.ABC):
    """One-parameter family of dynamical maps, Phi_0 = identity."""

    dim: int = 2
    tols: Tolerances = DEFAULT

    @abc.abstractmethod
    def superop_at(self, t: float) -> np.ndarray:
        """Superoperator of Phi_t (column-stacking convention)."""

    def superops(self, times: Sequence[float]) -> np.ndarray:
        """Stacked superoperators over a grid; subclasses vectorize."""
        return np.stack([self.superop_at(float(t)) for t in times])

    def map_at(self, t: float) -> QuantumMap:
        return QuantumMap.from_choi(superop_to_choi(self.superop_at(float(t))),
                                    tols=self.tols)

    def generator(self) -> Optional[TimeLocalGenerator]:
        """Time-local generator when the model knows one."""
        return None

    def decoherence_function(self):
        """The model's G(t), when it has one."""
        return None

    def rate_samples(self, times: Sequence[float]) -> Optional[np.ndarray]:
        """Channel rates gamma_i(t) on a grid, shape (n_channels, n_times).

        None when the model has no known generator.  May raise
        ZeroCrossingError where the map family turns singular.
        """
        gen = self.generator()
        if gen is None or not gen.channels:
            return None
        return np.array([[c.rate(float(t)) for t in times] for c in gen.channels])

    def channel_operators(self) -> Optional[list[np.ndarray]]:
        gen = self.generator()
        if gen is None or not gen.channels:
            return None
        return [c.operator for c in gen.channels]

    @property
    def time_scale(self) -> float:
        """Characteristic time used for step sizes and epsilon defaults."""
        return 1.0
