"""Closed-form total, quantum, classical and residual pairwise correlations
of balanced n-qubit coherent-state superpositions, with a numerical oracle."""

from .correlations import Branch, CorrelationReport, report
from .fano_bloch import FanoMatrix, hs_distance_sq, purity, validate_density
from .states import PartitionSpec, Scheme, mixed_pair_fano, pure_partition_fano

__all__ = [
    "Branch",
    "CorrelationReport",
    "FanoMatrix",
    "PartitionSpec",
    "Scheme",
    "hs_distance_sq",
    "mixed_pair_fano",
    "pure_partition_fano",
    "purity",
    "report",
    "validate_density",
]

__version__ = "0.1.0"
