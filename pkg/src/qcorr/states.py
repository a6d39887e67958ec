"""Balanced superpositions of two n-qubit coherent states and their bipartitions.

The family is |w, n> ~ |w,+>^n + |w,->^n with |w,+-> = sqrt(w)|0> +- sqrt(1-w)|1>.
Everything is parameterized by the overlap s = <w,-|w,+> = 2w - 1 in [0, 1].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .fano_bloch import FanoMatrix


class Scheme(str, enum.Enum):
    PURE = "pure"  # k | n-k split of the pure n-qubit state
    MIXED = "mixed"  # two qubits left after tracing out n-2


@dataclass(frozen=True)
class Overlap:
    s: float
    reflected: bool = False  # input omega was below 1/2 and mapped to 1 - omega

    @property
    def omega(self) -> float:
        return omega_from_overlap(self.s)


@dataclass(frozen=True)
class PartitionSpec:
    scheme: Scheme
    n: int
    k: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        check_partition(self.scheme, self.n, self.k)

    @classmethod
    def pure(cls, n: int, k: int) -> "PartitionSpec":
        return cls(Scheme.PURE, n, k)

    @classmethod
    def mixed(cls, n: int) -> "PartitionSpec":
        return cls(Scheme.MIXED, n)


class SchmidtPair(NamedTuple):
    lambda_plus: float
    lambda_minus: float


class MixedSpectrum(NamedTuple):
    p_plus: float
    p_minus: float


def check_overlap(s) -> float:
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"overlap s must lie in [0, 1], got {s!r}")
    return s


def check_partition(scheme, n, k=None) -> None:
    scheme = Scheme(scheme)
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"n must be an integer, got {n!r}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if scheme is Scheme.PURE:
        if k is None:
            raise ValueError("k is required for the pure scheme")
        if isinstance(k, bool) or int(k) != k or not 1 <= k <= n - 1:
            raise ValueError(f"k must satisfy 1 <= k <= n-1 = {n - 1}, got {k!r}")
    elif k is not None:
        raise ValueError("k must be absent for the mixed scheme")


def overlap_from_omega(omega) -> Overlap:
    omega = float(omega)
    if not 0.0 <= omega <= 1.0:
        raise ValueError(f"omega must lie in [0, 1], got {omega!r}")
    if omega < 0.5:
        return Overlap(2.0 * (1.0 - omega) - 1.0, reflected=True)
    return Overlap(2.0 * omega - 1.0)


def omega_from_overlap(s) -> float:
    return (1.0 + check_overlap(s)) / 2.0


def schmidt_coefficients(n: int, k: int, s: float) -> SchmidtPair:
    check_partition(Scheme.PURE, n, k)
    s = check_overlap(s)
    gap = (s**k + s ** (n - k)) / (1.0 + s**n)
    return SchmidtPair(0.5 * (1.0 + gap), 0.5 * (1.0 - gap))


def pure_partition_fano(n: int, k: int, s: float) -> FanoMatrix:
    """Coefficients of the k|(n-k) pure state in its Schmidt (logical-qubit) basis."""
    check_partition(Scheme.PURE, n, k)
    s = check_overlap(s)
    norm = 1.0 + s**n
    local = (s**k + s ** (n - k)) / norm
    coherence = math.sqrt((1.0 - s ** (2 * k)) * (1.0 - s ** (2 * (n - k)))) / norm
    return FanoMatrix.from_entries(
        {
            (3, 0): local,
            (0, 3): local,
            (1, 1): coherence,
            (2, 2): -coherence,
            (3, 3): 1.0,
        }
    )


def mixed_pair_fano(n: int, s: float) -> FanoMatrix:
    """Coefficients of the two-qubit reduction, in the physical product basis."""
    check_partition(Scheme.MIXED, n)
    s = check_overlap(s)
    scale = 2.0 / (2.0 + 2.0 * s**n)  # 2 N^2
    local = scale * (s + s ** (n - 1))
    return FanoMatrix.from_entries(
        {
            (1, 1): scale * (1.0 - s * s),
            (2, 2): -scale * (1.0 - s * s) * s ** (n - 2),
            (3, 3): scale * (s * s + s ** (n - 2)),
            (3, 0): local,
            (0, 3): local,
        }
    )


def mixed_pair_spectrum(n: int, s: float) -> MixedSpectrum:
    check_partition(Scheme.MIXED, n)
    s = check_overlap(s)
    tail = s ** (n - 2)
    denom = 2.0 * (1.0 + s**n)
    return MixedSpectrum(
        (1.0 + tail) * (1.0 + s * s) / denom,
        (1.0 - tail) * (1.0 - s * s) / denom,
    )


def partition_fano(spec: PartitionSpec, s: float) -> FanoMatrix:
    if spec.scheme is Scheme.PURE:
        return pure_partition_fano(spec.n, spec.k, s)
    return mixed_pair_fano(spec.n, s)
