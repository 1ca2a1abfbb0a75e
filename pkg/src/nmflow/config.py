"""Centralized numerical tolerances.

Every validation threshold used across the package lives in one frozen
record so that runs are reproducible and tolerances are auditable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # state / operator validation
    hermiticity: float = 1e-12        # max entrywise |A - A^dag|
    trace: float = 1e-12              # |tr(rho) - 1|
    state_psd: float = 1e-10          # min eigenvalue of a density matrix
    # map validation
    kraus_completeness: float = 1e-10  # |sum K^dag K - I| for trace-preserving maps
    representation_match: float = 1e-10  # Kraus-derived Choi vs stored Choi
    cp: float = 1e-10                 # min eigenvalue of the Choi state
    map_positivity: float = 1e-10     # min output eigenvalue in positivity sampling
    composition: float = 1e-8         # divisibility identity Phi_{t,0} = Phi_{t,s} Phi_{s,0}
    condition_cap: float = 1e12       # above this, a map counts as numerically singular
    gram_independence: float = 1e-10  # Gram-matrix singularity cutoff for Lindblad operators
    # model evaluation
    zero_coherence: float = 1e-12     # |G| below this -> map treated as non-invertible
    quadrature_rtol: float = 1e-8     # relative tolerance of spectral-density quadrature
    rate_quadrature: float = 1e-10    # absolute tolerance of rate integrals Gamma_i(t)
    unitarity_drift: float = 1e-9     # norm drift bound for spin-chain propagation
    # measures
    hysteresis: float = 1e-10         # rising-run gain below this does not count as backflow
    rate_sign: float = 1e-9           # band around zero when classifying rate signs
    # correlations
    witness: float = 1e-8             # trace-distance excursion that flags initial correlations
    degeneracy_gap: float = 1e-10     # eigenvalue gap below this -> degenerate basis
    # semantics left open by the source material: when two states count as
    # having orthogonal supports (D = 1).  Configuration, not doctrine.
    support_overlap: float = 1e-12

    def with_(self, **kwargs) -> "Tolerances":
        """Return a copy with the given fields replaced."""
        return replace(self, **kwargs)


DEFAULT = Tolerances()
