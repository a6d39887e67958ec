"""Numerical cross-checks that share no formulas with the closed forms.

* states rebuilt from explicit n-qubit state vectors (partial trace / SVD),
* nearest product and nearest quantum-classical states by multi-start
  Nelder-Mead over the full state families,
* a Jacobi-rotation symmetric 3x3 eigensolver,
* finite-difference stationarity of the product-state distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import _simplex
from .fano_bloch import FanoMatrix, density_to_fano, product_state

DEFAULT_STARTS = 32
DEFAULT_SEED = 42
DEFAULT_TOL = 1e-10
MAX_ITER = 10000
_MAX_RESTARTS = 4


@dataclass(frozen=True)
class ProductParam:
    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class QuantumClassicalParam:
    """sum_i p_i |u_i><u_i| (x) (I + b_i.sigma)/2, u_+- = +-u on the Bloch sphere."""

    u: np.ndarray
    p: np.ndarray  # (p_plus, p_minus)
    bloch: np.ndarray  # 2x3, conditional states of the second qubit


@dataclass(frozen=True)
class ClassicalParam:
    """sum_ij p_ij |u_i><u_i| (x) |v_j><v_j|, classical on both sides."""

    u: np.ndarray
    v: np.ndarray
    p: np.ndarray  # p[i, j], i, j in (+, -)


@dataclass(frozen=True)
class OracleResult:
    min_distance_sq: float
    argmin: Union[ProductParam, QuantumClassicalParam, ClassicalParam]
    starts: int
    converged_fraction: float

    def state(self) -> FanoMatrix:
        return param_state(self.argmin)


# ------------------------------------------------------------ state vectors


def coherent_qubit(omega: float, sign: int) -> np.ndarray:
    return np.array([math.sqrt(omega), sign * math.sqrt(1.0 - omega)])


def balanced_state_vector(n: int, s: float) -> np.ndarray:
    """Normalized |w,+>^n + |w,->^n as a 2^n vector (qubit 1 most significant)."""
    omega = (1.0 + s) / 2.0
    plus, minus = coherent_qubit(omega, 1), coherent_qubit(omega, -1)
    branch_p, branch_m = np.ones(1), np.ones(1)
    for _ in range(n):
        branch_p = np.kron(branch_p, plus)
        branch_m = np.kron(branch_m, minus)
    psi = branch_p + branch_m
    return psi / np.linalg.norm(psi)


def reduced_pair_numeric(n: int, s: float) -> FanoMatrix:
    """Two-qubit reduction obtained by explicit partial trace."""
    psi = balanced_state_vector(n, s).reshape(4, -1)
    return density_to_fano(psi @ psi.conj().T)


def pure_partition_numeric(n: int, k: int, s: float) -> FanoMatrix:
    """k|(n-k) state written in its Schmidt basis, Schmidt weights from an SVD.

    The Schmidt vectors are phased so that the state reads
    sqrt(l+)|00> + sqrt(l-)|11> with l+ >= l-.
    """
    psi = balanced_state_vector(n, s).reshape(2**k, 2 ** (n - k))
    weights = np.linalg.svd(psi, compute_uv=False) ** 2
    lp, lm = weights[0], (weights[1] if len(weights) > 1 else 0.0)
    vec = np.array([math.sqrt(lp), 0.0, 0.0, math.sqrt(lm)])
    return density_to_fano(np.outer(vec, vec))


# -------------------------------------------------------------- eigenvalues


def sym3_eigenvalues(k) -> tuple[float, float, float]:
    """Eigenvalues of a real symmetric 3x3 matrix, descending.

    Cyclic Jacobi rotations; unlike the trigonometric cubic formula this
    stays accurate when eigenvalues are nearly degenerate.
    """
    a = np.array(k, dtype=float)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got {a.shape}")
    if np.max(np.abs(a - a.T)) > 1e-12:
        raise ValueError("matrix is not symmetric")
    a = 0.5 * (a + a.T)
    scale = float(np.max(np.abs(a))) or 1.0
    for _ in range(50):
        off = math.sqrt(a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2)
        if off <= 1e-17 * scale:
            break
        for p, q in ((0, 1), (0, 2), (1, 2)):
            if a[p, q] == 0.0:
                continue
            theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            rot = np.eye(3)
            rot[p, p] = rot[q, q] = c
            rot[p, q], rot[q, p] = c * t, -c * t
            a = rot.T @ a @ rot
            a[p, q] = a[q, p] = 0.0
    return tuple(sorted((float(a[0, 0]), float(a[1, 1]), float(a[2, 2])), reverse=True))


def k_matrix(f: FanoMatrix) -> np.ndarray:
    x = f.r[1:, 0]
    t = f.r[1:, 1:]
    return np.outer(x, x) + t @ t.T


def geometric_discord_numeric(f: FanoMatrix) -> float:
    """Measurement-on-the-first-qubit geometric discord from the K spectrum."""
    eig = sym3_eigenvalues(k_matrix(f))
    return 0.25 * (sum(eig) - eig[0])


# ------------------------------------------------------- parameterizations


def _to_ball(v: np.ndarray) -> np.ndarray:
    norm = float(np.linalg.norm(v))
    if norm <= 1e-12:
        return 0.5 * math.pi * v
    return v * (math.sin(0.5 * math.pi * norm) / norm)


def _unit(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _weights(angles) -> np.ndarray:
    """Squared components of the unit vector with these hyperspherical angles."""
    out, carry = [], 1.0
    for a in angles:
        out.append(carry * math.cos(a))
        carry *= math.sin(a)
    out.append(carry)
    return np.square(out)


def _decode_product(x: np.ndarray) -> ProductParam:
    return ProductParam(_to_ball(x[:3]), _to_ball(x[3:6]))


def _decode_quantum_classical(x: np.ndarray) -> QuantumClassicalParam:
    return QuantumClassicalParam(
        _unit(x[0], x[1]),
        _weights(x[2:3]),
        np.array([_to_ball(x[3:6]), _to_ball(x[6:9])]),
    )


def _decode_classical(x: np.ndarray) -> ClassicalParam:
    return ClassicalParam(_unit(x[0], x[1]), _unit(x[2], x[3]), _weights(x[4:7]).reshape(2, 2))


def param_table(param) -> np.ndarray:
    """Raw 4x4 coefficient table of a parameterized state."""
    if isinstance(param, ProductParam):
        return np.outer(np.concatenate(([1.0], param.a)), np.concatenate(([1.0], param.b)))
    r = np.zeros((4, 4))
    r[0, 0] = 1.0
    if isinstance(param, QuantumClassicalParam):
        (pp, pm), (bp, bm) = param.p, param.bloch
        r[1:, 0] = (pp - pm) * param.u
        r[0, 1:] = pp * bp + pm * bm
        r[1:, 1:] = np.outer(param.u, pp * bp - pm * bm)
        return r
    if isinstance(param, ClassicalParam):
        p = param.p
        r[1:, 0] = (p[0].sum() - p[1].sum()) * param.u
        r[0, 1:] = (p[:, 0].sum() - p[:, 1].sum()) * param.v
        r[1:, 1:] = (p[0, 0] - p[0, 1] - p[1, 0] + p[1, 1]) * np.outer(param.u, param.v)
        return r
    raise TypeError(f"unknown parameter type {type(param).__name__}")


def param_state(param) -> FanoMatrix:
    return FanoMatrix(param_table(param))


_FAMILIES = {
    # name: (kernel family code, decoder, sampler of one starting point)
    "product": (_simplex.PRODUCT, _decode_product, lambda rng: rng.uniform(-1.0, 1.0, 6)),
    "one_sided": (
        _simplex.ONE_SIDED,
        _decode_quantum_classical,
        lambda rng: np.concatenate(
            (rng.uniform(0.0, math.pi, 1), rng.uniform(0.0, 2 * math.pi, 1),
             rng.uniform(0.0, 0.5 * math.pi, 1), rng.uniform(-1.0, 1.0, 6))
        ),
    ),
    "two_sided": (
        _simplex.TWO_SIDED,
        _decode_classical,
        lambda rng: np.concatenate(
            (rng.uniform(0.0, math.pi, 1), rng.uniform(0.0, 2 * math.pi, 1),
             rng.uniform(0.0, math.pi, 1), rng.uniform(0.0, 2 * math.pi, 1),
             rng.uniform(0.0, 0.5 * math.pi, 3))
        ),
    ),
}


# ------------------------------------------------------------- minimizers


def _local_descent(family: int, target: np.ndarray, x0: np.ndarray, tol: float):
    """Nelder-Mead, restarted from its own best point while it fails to converge."""
    x = np.asarray(x0, dtype=float)
    for _ in range(_MAX_RESTARTS):
        x, val, _, converged = _simplex.nelder_mead(family, target, x, tol, tol, MAX_ITER)
        if converged:
            break
    return x, float(val), bool(converged)


def _multistart(f: FanoMatrix, family: str, starts: int, tol: float, seed: int) -> OracleResult:
    code, decode, sample = _FAMILIES[family]
    target = np.ascontiguousarray(f.r, dtype=float)
    # one independent stream per start, so the result does not depend on run order
    streams = [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(starts)]
    best_x, best_val, n_conv = None, math.inf, 0
    for rng in streams:
        x, val, ok = _local_descent(code, target, sample(rng), tol)
        n_conv += ok
        if val < best_val:
            best_x, best_val = x, val
    return OracleResult(best_val, decode(best_x), starts, n_conv / starts)


def nearest_product_numeric(
    f: FanoMatrix, starts: int = DEFAULT_STARTS, tol: float = DEFAULT_TOL, seed: int = DEFAULT_SEED
) -> OracleResult:
    if starts < 8:
        raise ValueError(f"need at least 8 starts, got {starts}")
    return _multistart(f, "product", starts, tol, seed)


def nearest_classical_numeric(
    f: FanoMatrix,
    starts: int = DEFAULT_STARTS,
    tol: float = DEFAULT_TOL,
    seed: int = DEFAULT_SEED,
    family: str = "one_sided",
) -> OracleResult:
    """Minimal squared HS distance to quantum-classical states.

    ``family="one_sided"`` measures the first qubit only (the geometric
    discord family); ``"two_sided"`` restricts to states diagonal in a
    product basis, which can only give an upper bound.
    """
    if starts < 16:
        raise ValueError(f"need at least 16 starts, got {starts}")
    if family not in ("one_sided", "two_sided"):
        raise ValueError(f"unknown classical family {family!r}")
    return _multistart(f, family, starts, tol, seed)


def product_distance(f: FanoMatrix, t: float) -> float:
    """Squared HS distance from f to the symmetric product with both Bloch vectors t z."""
    diff = f.r - product_state((0.0, 0.0, t), (0.0, 0.0, t)).r
    return 0.25 * float(np.sum(diff * diff))


def stationarity_check(f: FanoMatrix, t0: float, step: float = 1e-5) -> float:
    if not 0.0 <= t0 <= 1.0:
        raise ValueError(f"t0 must lie in [0, 1], got {t0!r}")
    slope = (product_distance(f, t0 + step) - product_distance(f, t0 - step)) / (2.0 * step)
    return abs(slope)
