"""Two-qubit operators in the Pauli tensor (Fano-Bloch) basis.

A state is stored as its real 4x4 coefficient table ``r`` with

    rho = 1/4 * sum_{a,b} r[a, b] * sigma_a (x) sigma_b,   r[a, b] = Tr(rho sigma_a (x) sigma_b)

where sigma_0 is the identity and sigma_1..3 are the standard Pauli matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# PAULI_PAIRS[a, b] = sigma_a (x) sigma_b
PAULI_PAIRS = np.einsum("aij,bkl->abikjl", SIGMA, SIGMA).reshape(4, 4, 4, 4)

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
NEGATIVITY_TOL = -1e-12


@dataclass(frozen=True)
class FanoMatrix:
    """Real Pauli-tensor coefficients of a unit-trace two-qubit operator."""

    r: np.ndarray

    def __post_init__(self):
        r = np.array(self.r, dtype=float, copy=True)
        if r.shape != (4, 4):
            raise ValueError(f"coefficient table must be 4x4, got {r.shape}")
        if abs(r[0, 0] - 1.0) > TRACE_TOL:
            raise ValueError(f"r[0][0] must be 1 (unit trace), got {r[0, 0]!r}")
        r.setflags(write=False)
        object.__setattr__(self, "r", r)

    @classmethod
    def from_entries(cls, entries: Mapping[tuple[int, int], float]) -> "FanoMatrix":
        """Build from the non-identity coefficients; ``r[0][0]`` is set to 1."""
        r = np.zeros((4, 4))
        r[0, 0] = 1.0
        for (a, b), value in entries.items():
            if not (0 <= a < 4 and 0 <= b < 4):
                raise ValueError(f"Pauli index out of range: {(a, b)}")
            r[a, b] = value
        return cls(r)

    def __getitem__(self, idx):
        return self.r[idx]

    def __eq__(self, other):
        if not isinstance(other, FanoMatrix):
            return NotImplemented
        return bool(np.array_equal(self.r, other.r))

    def __hash__(self):
        return hash(self.r.tobytes())

    def local_bloch(self) -> tuple[np.ndarray, np.ndarray]:
        """Bloch vectors of the two reduced single-qubit states."""
        return self.r[1:, 0].copy(), self.r[0, 1:].copy()

    def correlation_block(self) -> np.ndarray:
        return self.r[1:, 1:].copy()

    def matrix(self) -> np.ndarray:
        return fano_to_density(self)


def product_state(a, b) -> FanoMatrix:
    """Coefficients of (I + a.sigma)/2 (x) (I + b.sigma)/2."""
    left = np.concatenate(([1.0], np.asarray(a, dtype=float)))
    right = np.concatenate(([1.0], np.asarray(b, dtype=float)))
    return FanoMatrix(np.outer(left, right))


def fano_to_density(f: FanoMatrix) -> np.ndarray:
    return 0.25 * np.einsum("ab,abij->ij", f.r, PAULI_PAIRS)


def density_to_fano(d) -> FanoMatrix:
    d = np.asarray(d, dtype=complex)
    if d.shape != (4, 4):
        raise ValueError(f"density matrix must be 4x4, got {d.shape}")
    asym = np.max(np.abs(d - d.conj().T))
    if asym > 1e-9:
        raise ValueError(f"matrix is not Hermitian (max |d - d^H| = {asym:.3e})")
    # Tr(d P) for Hermitian d and P is real; drop the rounding residue.
    r = np.einsum("ij,abji->ab", d, PAULI_PAIRS).real
    return FanoMatrix(r)


def hs_distance_sq(a: FanoMatrix, b: FanoMatrix) -> float:
    """Squared Hilbert-Schmidt distance Tr((A - B)^2)."""
    diff = a.r - b.r
    return 0.25 * float(np.sum(diff * diff))


def purity(f: FanoMatrix) -> float:
    return 0.25 * float(np.sum(f.r * f.r))


def linear_entropy(f: FanoMatrix) -> float:
    return 1.0 - purity(f)


def linear_relative_entropy(a: FanoMatrix, b: FanoMatrix) -> float:
    """Tr(A (A - B)), not symmetric in its arguments."""
    return 0.25 * float(np.sum(a.r * (a.r - b.r)))


def s_minus(a: FanoMatrix, b: FanoMatrix) -> float:
    """Antisymmetric part: purity(a) - purity(b)."""
    return purity(a) - purity(b)


def s_plus(a: FanoMatrix, b: FanoMatrix) -> float:
    """Symmetric part of the linear relative entropy; equals hs_distance_sq."""
    return linear_relative_entropy(a, b) + linear_relative_entropy(b, a)


@dataclass(frozen=True)
class Violation:
    invariant: str  # "shape", "hermiticity", "trace" or "negativity"
    amount: float

    def __str__(self):
        return f"{self.invariant} violated by {self.amount:.3e}"


@dataclass(frozen=True)
class Validity:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def validate_density(d) -> Validity:
    """Check Hermiticity, unit trace and positivity; never raises."""
    d = np.asarray(d, dtype=complex)
    if d.shape != (4, 4):
        return Validity((Violation("shape", float("nan")),))

    found = []
    asym = float(np.max(np.abs(d - d.conj().T)))
    if asym > HERMITICITY_TOL:
        found.append(Violation("hermiticity", asym))
    trace_err = abs(np.trace(d) - 1.0)
    if trace_err > TRACE_TOL:
        found.append(Violation("trace", float(trace_err)))
    # Eigenvalues of the Hermitian part, so a tiny asymmetry does not mask positivity.
    lowest = float(np.linalg.eigvalsh(0.5 * (d + d.conj().T))[0])
    if lowest < NEGATIVITY_TOL:
        found.append(Violation("negativity", -lowest))
    return Validity(tuple(found))
