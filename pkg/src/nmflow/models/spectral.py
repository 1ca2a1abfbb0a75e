"""Environment spectral densities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import ValidationError


@dataclass(frozen=True)
class SpectralDensity:
    """J(omega) >= 0 on [0, inf).

    Three families:

    * ``ohmic_family``: J = alpha * omega^s * cutoff^(1-s) * exp(-omega/cutoff)
      (dimensionless coupling alpha, exponent s, cutoff frequency),
    * ``lorentzian``: J = gamma0 lambda^2 / (2 pi [(omega0 + detuning - omega)^2
      + lambda^2]),
    * ``tabulated``: linear interpolation of a sampled (omega, J) table.
    """

    kind: str
    alpha: Optional[float] = None
    exponent: Optional[float] = None
    cutoff: Optional[float] = None
    gamma0: Optional[float] = None
    width: Optional[float] = None
    detuning: float = 0.0
    omega0: float = 0.0
    table: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == "ohmic_family":
            if self.alpha is None or self.exponent is None or self.cutoff is None:
                raise ValidationError("ohmic_family needs alpha, exponent and cutoff")
            if self.cutoff <= 0:
                raise ValidationError("cutoff must be positive")
            if self.alpha < 0:
                raise ValidationError("coupling must be nonnegative")
        elif self.kind == "lorentzian":
            if self.gamma0 is None or self.width is None:
                raise ValidationError("lorentzian needs gamma0 and width")
            if self.width <= 0 or self.gamma0 <= 0:
                raise ValidationError("width and gamma0 must be positive")
        elif self.kind == "tabulated":
            table = np.asarray(self.table, dtype=float)
            if table.ndim != 2 or table.shape[1] != 2:
                raise ValidationError("table must be a two-column (omega, J) array")
            if np.any(np.diff(table[:, 0]) <= 0):
                raise ValidationError("tabulated frequencies must increase")
            if np.any(table[:, 1] < 0):
                raise ValidationError("J(omega) must be nonnegative")
            object.__setattr__(self, "table", table)
        else:
            raise ValidationError(f"unknown spectral density kind {self.kind!r}")

    @classmethod
    def ohmic(cls, alpha: float, exponent: float = 1.0, cutoff: float = 1.0) -> "SpectralDensity":
        return cls("ohmic_family", alpha=alpha, exponent=exponent, cutoff=cutoff)

    @classmethod
    def lorentzian_density(cls, gamma0: float, width: float, detuning: float = 0.0,
                           omega0: float = 0.0) -> "SpectralDensity":
        return cls("lorentzian", gamma0=gamma0, width=width, detuning=detuning,
                   omega0=omega0)

    @classmethod
    def from_table(cls, omega, values) -> "SpectralDensity":
        return cls("tabulated", table=np.column_stack([omega, values]))

    @classmethod
    def from_text(cls, path) -> "SpectralDensity":
        """Two-column numeric text (omega, J); '#' starts a comment line."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise ValidationError("spectral density file must have two columns")
        return cls("tabulated", table=data)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.kind == "ohmic_family":
            out = np.where(
                omega > 0,
                self.alpha * np.power(np.maximum(omega, 1e-300), self.exponent)
                * self.cutoff ** (1.0 - self.exponent) * np.exp(-omega / self.cutoff),
                0.0)
            return out
        if self.kind == "lorentzian":
            center = self.omega0 + self.detuning
            return (self.gamma0 * self.width ** 2
                    / (2.0 * np.pi * ((center - omega) ** 2 + self.width ** 2)))
        return np.interp(omega, self.table[:, 0], self.table[:, 1],
                         left=0.0, right=0.0)

    def support_upper(self) -> float:
        """Frequency beyond which the density is negligible for quadrature."""
        if self.kind == "ohmic_family":
            return self.cutoff * (50.0 + 5.0 * max(self.exponent, 0.0))
        if self.kind == "lorentzian":
            return self.omega0 + self.detuning + 2.0e4 * self.width
        return float(self.table[-1, 0])

    def zero_frequency_limit(self) -> float:
        """lim_{omega -> 0+} J(omega) (for divergence diagnostics)."""
        if self.kind == "ohmic_family":
            return 0.0 if self.exponent > 0 else np.inf
        return float(self(1e-12))
