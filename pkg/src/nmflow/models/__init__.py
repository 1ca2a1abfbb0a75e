"""Solvable open-system model library."""

from .base import DynamicalModel
from .dephasing import (DecoherenceFunction, PureDephasingModel, dephasing_G_thermal,
                        dephasing_rate, thermal_decoherence_exponent)
from .lossy_cavity import (LossyCavityModel, lossy_cavity_G, lossy_cavity_map,
                           lossy_cavity_rates, volterra_G)
from .photonic import (FabryPerotParams, FrequencySpectrum, NonlocalDephasingModel,
                       PlateSchedule, SpectrumDephasingModel, fabry_perot_spectrum,
                       nonlocal_dephasing_trajectory, spectrum_dephasing_G)
from .random_unitary import RandomUnitaryModel
from .spectral import SpectralDensity
from .spin_chains import (IsingProbeModel, SpinChainSpec, chain_ground_state,
                          ising_hamiltonian, ising_probe_G, xx_chain_distance,
                          xx_chain_sigma)

__all__ = [
    "DynamicalModel",
    "DecoherenceFunction", "PureDephasingModel", "dephasing_G_thermal",
    "dephasing_rate", "thermal_decoherence_exponent",
    "LossyCavityModel", "lossy_cavity_G", "lossy_cavity_map", "lossy_cavity_rates",
    "volterra_G",
    "FabryPerotParams", "FrequencySpectrum", "NonlocalDephasingModel", "PlateSchedule",
    "SpectrumDephasingModel", "fabry_perot_spectrum",
    "nonlocal_dephasing_trajectory", "spectrum_dephasing_G",
    "RandomUnitaryModel",
    "SpectralDensity",
    "IsingProbeModel", "SpinChainSpec", "chain_ground_state", "ising_hamiltonian",
    "ising_probe_G", "xx_chain_distance", "xx_chain_sigma",
]
