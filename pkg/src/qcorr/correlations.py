"""Closed-form pairwise correlations measured by the linear relative entropy.

For a two-qubit state rho with closest product state pi, closest
quantum-classical state chi and chi's own closest product state pi_chi:

    T2 = P(rho) - P(pi)         D2 = P(rho) - P(chi)
    C2 = P(chi) - P(pi_chi)     L2 = P(pi) - P(pi_chi)

with P the purity, so T2 - D2 - C2 + L2 = 0. C2 and L2 are signed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numpy as np

from . import states
from .fano_bloch import FanoMatrix
from .states import PartitionSpec, Scheme, check_overlap, check_partition

BRANCH_EPS = 1e-12
CUBIC_RESIDUAL_TOL = 1e-10
_TINY = 1e-300

# Entries allowed to be nonzero for exchange- and parity-symmetric tables.
_SYMMETRIC_PATTERN = {(0, 0), (3, 0), (0, 3), (1, 1), (2, 2), (3, 3)}


class Branch(str, enum.Enum):
    MINUS = "minus"  # lambda1 <= lambda3: chi diagonal in the sigma_3 product basis
    PLUS = "plus"  # lambda1 >= lambda3: measurement along sigma_1 on the first qubit
    TIE = "tie"


class KSpectrum(NamedTuple):
    lambda1: float
    lambda2: float
    lambda3: float
    lambda_max: float


class ClosestStateParam(NamedTuple):
    value: float
    delta: Optional[float] = None  # Cardano discriminant, mixed scheme only


class BranchValues(NamedTuple):
    d2: float
    c2: float
    l2: float


@dataclass(frozen=True)
class CorrelationReport:
    scheme: Scheme
    n: int
    k: Optional[int]
    s: float
    t2: float
    d2: float
    c2: float
    l2: float
    branch: Branch
    closest_param: ClosestStateParam
    residual: float
    # both branch evaluations, mixed scheme only; canonical values above
    minus_values: Optional[BranchValues] = None
    plus_values: Optional[BranchValues] = None

    @property
    def omega(self) -> float:
        return states.omega_from_overlap(self.s)

    def as_dict(self) -> dict:
        out = asdict(self)
        out["scheme"] = self.scheme.value
        out["branch"] = self.branch.value
        out["closest_param"] = self.closest_param.value
        out["delta"] = self.closest_param.delta
        out["omega"] = self.omega
        for key in ("minus_values", "plus_values"):
            values = getattr(self, key)
            out[key] = None if values is None else values._asdict()
        return out


def cube_root(x: float) -> float:
    if abs(x) < _TINY:
        return 0.0
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _symmetric_product(t: float) -> FanoMatrix:
    return FanoMatrix.from_entries({(3, 0): t, (0, 3): t, (3, 3): t * t})


# ---------------------------------------------------------------- pure scheme


def closest_product_pure(f: FanoMatrix) -> tuple[ClosestStateParam, FanoMatrix]:
    a3 = cube_root(float(f.r[3, 0]))
    return ClosestStateParam(a3), _symmetric_product(a3)


def total_pure(n: int, k: int, s: float) -> float:
    r = states.pure_partition_fano(n, k, s).r
    a3 = cube_root(r[3, 0])
    return 0.25 * (
        2.0 * (r[0, 3] ** 2 - a3**2) + r[1, 1] ** 2 + r[2, 2] ** 2 + (r[3, 3] ** 2 - a3**4)
    )


def k_spectrum(f: FanoMatrix) -> KSpectrum:
    """Eigenvalues of K = x x^T + R R^T for an exchange/parity symmetric table.

    x is the Bloch vector of the first qubit and R the 3x3 correlation block.
    For these tables K is diagonal; anything else needs ``oracle.sym3_eigenvalues``.
    """
    r = f.r
    stray = [(a, b) for a in range(4) for b in range(4)
             if (a, b) not in _SYMMETRIC_PATTERN and abs(r[a, b]) > 1e-12]
    if stray:
        raise ValueError(f"coefficients outside the symmetric pattern are nonzero: {stray}")
    l1 = r[1, 1] ** 2
    l2 = r[2, 2] ** 2
    l3 = r[3, 0] ** 2 + r[3, 3] ** 2
    lmax = l3 if l3 >= max(l1, l2) else max(l1, l2)
    return KSpectrum(l1, l2, l3, lmax)


def discord_from_spectrum(k: KSpectrum) -> float:
    return 0.25 * (k.lambda1 + k.lambda2 + k.lambda3 - k.lambda_max)


def discord_pure(n: int, k: int, s: float) -> float:
    lp, lm = states.schmidt_coefficients(n, k, s)
    return 2.0 * lp * lm


def closest_classical_pure(n: int, k: int, s: float) -> FanoMatrix:
    r = states.pure_partition_fano(n, k, s).r
    return FanoMatrix.from_entries({(3, 0): r[3, 0], (0, 3): r[0, 3], (3, 3): r[3, 3]})


def classical_pure(n: int, k: int, s: float) -> float:
    r = states.pure_partition_fano(n, k, s).r
    a3 = cube_root(r[3, 0])
    return 0.25 * (2.0 * (r[0, 3] ** 2 - a3**2) + (r[3, 3] ** 2 - a3**4))


def l2_pure(n: int, k: int, s: float) -> float:
    check_partition(Scheme.PURE, n, k)
    check_overlap(s)
    return 0.0


def pure_branch(f: FanoMatrix) -> Branch:
    # lambda3 - lambda1 = 2 (lambda+ - lambda-)^2 >= 0; equal only at s = 0
    k = k_spectrum(f)
    gap = k.lambda3 - k.lambda1
    return Branch.TIE if abs(gap) <= BRANCH_EPS else Branch.MINUS


# --------------------------------------------------------------- mixed scheme


def _cubic(c: float, r30: float, r33: float) -> float:
    return c**3 + c * (1.0 - r33) - r30


def bisect_c3(r30: float, r33: float, tol: float = 1e-15) -> float:
    """Root of c^3 + c(1 - r33) - r30 by safeguarded bisection."""
    lo, hi = (0.0, 1.0) if r30 >= 0 else (-1.0, 0.0)
    f_lo = _cubic(lo, r30, r33)
    if f_lo == 0.0:
        return lo
    if _cubic(hi, r30, r33) == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = _cubic(mid, r30, r33)
        if f_mid == 0.0 or hi - lo < tol:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cardano_c3(r30: float, r33: float) -> ClosestStateParam:
    """Unique real root of c^3 + c (1 - r33) - r30 = 0 for r33 <= 1."""
    if r33 > 1.0 + 1e-12 or r33 < -1e-12:
        raise ValueError(f"r33 must lie in [0, 1], got {r33!r}")
    r30, r33 = float(r30), float(r33)
    delta = r30 * r30 + (4.0 / 27.0) * (1.0 - r33) ** 3
    if delta < -1e-15:
        raise ValueError(f"negative discriminant {delta!r}")
    delta = max(delta, 0.0)
    root = math.sqrt(delta)
    # the root is odd in r30, so solve for |r30|; u v = (1 - r33) / 3 gives v
    # without the cancellation in sqrt(delta) - |r30|
    u = cube_root((root + abs(r30)) / 2.0)
    v = (1.0 - r33) / (3.0 * u) if u > 0.0 else 0.0
    # c = u - v = (u^3 - v^3) / (u^2 + uv + v^2) = |r30| / (...), stable at small r30
    denom = u * u + u * v + v * v
    c3 = math.copysign(abs(r30) / denom, r30) if denom > 0.0 else 0.0
    if abs(_cubic(c3, r30, r33)) > CUBIC_RESIDUAL_TOL:
        c3 = bisect_c3(r30, r33)
    return ClosestStateParam(c3, delta)


def closest_product_mixed(n: int, s: float) -> tuple[ClosestStateParam, FanoMatrix]:
    r = states.mixed_pair_fano(n, s).r
    param = cardano_c3(r[3, 0], r[3, 3])
    return param, _symmetric_product(param.value)


def total_mixed(n: int, s: float) -> float:
    r = states.mixed_pair_fano(n, s).r
    c3 = cardano_c3(r[3, 0], r[3, 3]).value
    return 0.25 * (
        2.0 * (r[0, 3] ** 2 - c3**2) + r[1, 1] ** 2 + r[2, 2] ** 2 + (r[3, 3] ** 2 - c3**4)
    )


def branch_indicator(n: int, s: float) -> float:
    """Nonnegative exactly when lambda1 <= lambda3 for the traced pair."""
    check_partition(Scheme.MIXED, n)
    s = check_overlap(s)
    return (s * s + 1.0) * (1.0 + s ** (n - 2)) - 2.0 * (1.0 - s * s)


def branch_select(n: int, s: float) -> Branch:
    value = branch_indicator(n, s)
    if value > BRANCH_EPS:
        return Branch.MINUS
    if value < -BRANCH_EPS:
        return Branch.PLUS
    return Branch.TIE


def _discord_branches(r: np.ndarray) -> tuple[float, float]:
    l1, l2, l3 = r[1, 1] ** 2, r[2, 2] ** 2, r[3, 0] ** 2 + r[3, 3] ** 2
    return 0.25 * (l1 + l2), 0.25 * (l2 + l3)


def discord_mixed(n: int, s: float) -> tuple[float, Branch]:
    f = states.mixed_pair_fano(n, s)
    branch = branch_select(n, s)
    # min(l1 + l2, l2 + l3) equals the sum minus the largest eigenvalue
    return discord_from_spectrum(k_spectrum(f)), branch


def _chi_minus(r: np.ndarray) -> FanoMatrix:
    return FanoMatrix.from_entries({(3, 0): r[3, 0], (0, 3): r[0, 3], (3, 3): r[3, 3]})


def _chi_plus(r: np.ndarray) -> FanoMatrix:
    return FanoMatrix.from_entries({(0, 3): r[0, 3], (1, 1): r[1, 1]})


def closest_classical_mixed(n: int, s: float) -> tuple[FanoMatrix, Branch]:
    r = states.mixed_pair_fano(n, s).r
    branch = branch_select(n, s)
    chi = _chi_plus(r) if branch is Branch.PLUS else _chi_minus(r)
    return chi, branch


def closest_classical_product_mixed(n: int, s: float) -> tuple[FanoMatrix, Branch]:
    r = states.mixed_pair_fano(n, s).r
    branch = branch_select(n, s)
    if branch is Branch.PLUS:
        return FanoMatrix.from_entries({(0, 3): r[0, 3]}), branch
    c3 = cardano_c3(r[3, 0], r[3, 3]).value
    return _symmetric_product(c3), branch


def _classical_branches(r: np.ndarray, c3: float) -> tuple[float, float]:
    minus = 0.25 * (2.0 * (r[0, 3] ** 2 - c3**2) + (r[3, 3] ** 2 - c3**4))
    plus = 0.25 * r[1, 1] ** 2
    return minus, plus


def classical_mixed(n: int, s: float) -> tuple[float, Branch]:
    r = states.mixed_pair_fano(n, s).r
    c3 = cardano_c3(r[3, 0], r[3, 3]).value
    branch = branch_select(n, s)
    minus, plus = _classical_branches(r, c3)
    return (plus if branch is Branch.PLUS else minus), branch


def _l2_plus(r: np.ndarray, c3: float) -> float:
    return 0.25 * (2.0 * c3**2 + c3**4 - r[0, 3] ** 2)


def l2_mixed(n: int, s: float) -> tuple[float, Branch]:
    r = states.mixed_pair_fano(n, s).r
    branch = branch_select(n, s)
    if branch is Branch.PLUS:
        c3 = cardano_c3(r[3, 0], r[3, 3]).value
        return _l2_plus(r, c3), branch
    return 0.0, branch


def branch_values(n: int, s: float) -> tuple[BranchValues, BranchValues]:
    """(minus, plus) evaluations regardless of which branch is selected."""
    r = states.mixed_pair_fano(n, s).r
    c3 = cardano_c3(r[3, 0], r[3, 3]).value
    d_minus, d_plus = _discord_branches(r)
    c_minus, c_plus = _classical_branches(r, c3)
    return BranchValues(d_minus, c_minus, 0.0), BranchValues(d_plus, c_plus, _l2_plus(r, c3))


# -------------------------------------------------------------------- reports


def report(spec: PartitionSpec, s: float) -> CorrelationReport:
    s = check_overlap(s)
    if spec.scheme is Scheme.PURE:
        n, k = spec.n, spec.k
        f = states.pure_partition_fano(n, k, s)
        param, _ = closest_product_pure(f)
        t2 = float(total_pure(n, k, s))
        d2 = float(discord_pure(n, k, s))
        c2 = float(classical_pure(n, k, s))
        l2 = float(l2_pure(n, k, s))
        return CorrelationReport(
            Scheme.PURE, n, k, s, t2, d2, c2, l2,
            branch=pure_branch(f), closest_param=param, residual=t2 - d2 - c2 + l2,
        )

    n = spec.n
    param, _ = closest_product_mixed(n, s)
    t2 = float(total_mixed(n, s))
    d2, branch = discord_mixed(n, s)
    c2, _ = classical_mixed(n, s)
    l2, _ = l2_mixed(n, s)
    d2, c2, l2 = float(d2), float(c2), float(l2)
    minus, plus = (BranchValues(*map(float, v)) for v in branch_values(n, s))
    return CorrelationReport(
        Scheme.MIXED, n, None, s, t2, d2, c2, l2,
        branch=branch, closest_param=param, residual=t2 - d2 - c2 + l2,
        minus_values=minus, plus_values=plus,
    )


def closest_states(spec: PartitionSpec, s: float) -> dict[str, FanoMatrix]:
    """The closest product, quantum-classical and classical-product states."""
    if spec.scheme is Scheme.PURE:
        f = states.pure_partition_fano(spec.n, spec.k, s)
        _, pi = closest_product_pure(f)
        chi = closest_classical_pure(spec.n, spec.k, s)
        # pi_chi coincides with pi for the pure scheme
        return {"rho": f, "pi": pi, "chi": chi, "pi_chi": pi}

    f = states.mixed_pair_fano(spec.n, s)
    _, pi = closest_product_mixed(spec.n, s)
    chi, _ = closest_classical_mixed(spec.n, s)
    pi_chi, _ = closest_classical_product_mixed(spec.n, s)
    return {"rho": f, "pi": pi, "chi": chi, "pi_chi": pi_chi}
