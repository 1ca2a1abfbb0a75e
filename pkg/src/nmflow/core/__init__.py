"""State and channel primitives."""

from .generators import Channel, TimeLocalGenerator
from .maps import (QuantumMap, apply_map, choi_to_kraus, choi_to_superop, compose,
                   hermitian_basis, intermediate_map, kraus_to_choi, kraus_to_superop,
                   superop_to_choi, superop_to_transfer, transfer_to_superop, unvec, vec)
from .positivity import (CompletePositivityCheck, PositivityCheck, bloch_to_pure,
                         fibonacci_bloch_grid, is_completely_positive, is_positive_map)
from .sampling import (random_cptp_map, random_density_matrix, random_pure_state,
                       random_unitary)
from .states import (IDENTITY_2, PAULIS, SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Y,
                     SIGMA_Z, DensityMatrix, HelstromMatrix, antipodal_pair,
                     helstrom_norm, hermitian_trace_norms, kron_all,
                     pair_population_coherence_differences, partial_trace,
                     states_orthogonal, trace_distance, trace_norm)

__all__ = [
    "Channel", "TimeLocalGenerator",
    "QuantumMap", "apply_map", "choi_to_kraus", "choi_to_superop", "compose",
    "hermitian_basis", "intermediate_map", "kraus_to_choi", "kraus_to_superop",
    "superop_to_choi", "superop_to_transfer", "transfer_to_superop", "unvec", "vec",
    "CompletePositivityCheck", "PositivityCheck", "bloch_to_pure",
    "fibonacci_bloch_grid", "is_completely_positive", "is_positive_map",
    "random_cptp_map", "random_density_matrix", "random_pure_state", "random_unitary",
    "IDENTITY_2", "PAULIS", "SIGMA_MINUS", "SIGMA_PLUS", "SIGMA_X", "SIGMA_Y", "SIGMA_Z",
    "DensityMatrix", "HelstromMatrix", "antipodal_pair", "helstrom_norm",
    "hermitian_trace_norms", "kron_all", "pair_population_coherence_differences",
    "partial_trace", "states_orthogonal", "trace_distance", "trace_norm",
]
