"""Verification suite: closed forms against invariants and the numerical oracle."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from . import correlations as corr
from . import oracle, states
from .fano_bloch import FanoMatrix, hs_distance_sq, purity
from .states import PartitionSpec, Scheme

TIE_POINT = math.sqrt(2.0) - 1.0
JUMP_AT_TIE = 0.171
JUMP_TOL = 0.01


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    worst: float
    tolerance: float
    first_failure: Optional[str] = None
    seconds: float = 0.0


def overlap_grid(steps: int = 101) -> np.ndarray:
    """Inclusive grid on [0, 1]; steps=101 gives 0, 0.01, ..., 1."""
    return np.array([i / (steps - 1) for i in range(steps)])


def interior_grid(density: int) -> np.ndarray:
    """``density`` evenly spaced interior points; 9 gives 0.1, ..., 0.9."""
    return np.array([i / (density + 1) for i in range(1, density + 1)])


def all_partitions(n_values: Iterable[int], mirror: bool = True) -> Iterator[PartitionSpec]:
    """Mixed scheme for each n plus every pure split (only k <= n/2 if not mirror)."""
    for n in n_values:
        yield PartitionSpec.mixed(n)
        top = n - 1 if mirror else n // 2
        for k in range(1, top + 1):
            yield PartitionSpec.pure(n, k)


def _label(spec: PartitionSpec, s: float) -> str:
    k = f" k={spec.k}" if spec.k is not None else ""
    return f"{spec.scheme.value} n={spec.n}{k} s={s:.17g}"


class _Tally:
    def __init__(self, name: str, tolerance: float):
        self.name, self.tolerance = name, tolerance
        self.cases, self.worst, self.first = 0, 0.0, None
        self.started = time.perf_counter()

    def add(self, error: float, where: str, ok: Optional[bool] = None) -> None:
        error = float(error)
        self.cases += 1
        self.worst = max(self.worst, error) if not math.isnan(error) else math.nan
        passed = (error <= self.tolerance) if ok is None else ok
        if not passed and self.first is None:
            self.first = f"{where}: error {error:.3e} > {self.tolerance:.3e}"

    def result(self) -> CheckResult:
        return CheckResult(
            self.name, self.first is None and self.cases > 0, self.cases, self.worst,
            self.tolerance, self.first, time.perf_counter() - self.started,
        )


def check_additivity(scale: float = 1.0, n_max: int = 10) -> CheckResult:
    tally = _Tally("additivity", 1e-12 * scale)
    for spec in all_partitions(range(2, n_max + 1)):
        for s in overlap_grid():
            rep = corr.report(spec, s)
            tally.add(abs(rep.residual), _label(spec, s))
    return tally.result()


def check_oracle(
    density: int = 9, seed: int = oracle.DEFAULT_SEED, starts: int = oracle.DEFAULT_STARTS,
    scale: float = 1.0, n_max: int = 6,
) -> list[CheckResult]:
    state = _Tally("oracle-equivalence/state", 1e-12 * scale)
    kspec = _Tally("oracle-equivalence/k-spectrum", 1e-10 * scale)
    station = _Tally("oracle-equivalence/stationarity", 1e-8 * scale)
    product = _Tally("oracle-equivalence/product", 1e-6 * scale)
    classical = _Tally("oracle-equivalence/classical", 1e-5 * scale)
    for spec in all_partitions(range(2, n_max + 1), mirror=False):
        for s in interior_grid(density):
            where = _label(spec, s)
            if spec.scheme is Scheme.PURE:
                f = states.pure_partition_fano(spec.n, spec.k, s)
                brute = oracle.pure_partition_numeric(spec.n, spec.k, s)
            else:
                f = states.mixed_pair_fano(spec.n, s)
                brute = oracle.reduced_pair_numeric(spec.n, s)
            state.add(float(np.max(np.abs(f.r - brute.r))), where)

            closed = corr.k_spectrum(f)
            numeric = oracle.sym3_eigenvalues(oracle.k_matrix(brute))
            expected = sorted((closed.lambda1, closed.lambda2, closed.lambda3), reverse=True)
            kspec.add(float(np.max(np.abs(np.subtract(numeric, expected)))), where)

            rep = corr.report(spec, s)
            pi = corr.closest_states(spec, s)["pi"]
            station.add(oracle.stationarity_check(brute, rep.closest_param.value), where)

            found = oracle.nearest_product_numeric(brute, starts=starts, seed=seed)
            product.add(abs(hs_distance_sq(brute, pi) - found.min_distance_sq), where)
            found = oracle.nearest_classical_numeric(brute, starts=max(starts, 16), seed=seed)
            classical.add(abs(rep.d2 - found.min_distance_sq), where)
    return [t.result() for t in (state, kspec, station, product, classical)]


def _tr_product(a: FanoMatrix, b: FanoMatrix) -> float:
    return 0.25 * float(np.sum(a.r * b.r))


def check_fixed_points(scale: float = 1.0, n_max: int = 10) -> CheckResult:
    tally = _Tally("chi-fixed-point", 1e-12 * scale)
    for spec in all_partitions(range(2, n_max + 1)):
        for s in overlap_grid():
            found = corr.closest_states(spec, s)
            rho, chi = found["rho"], found["chi"]
            tally.add(abs(_tr_product(rho, chi) - purity(chi)), _label(spec, s))
    return tally.result()


def check_validity(scale: float = 1.0, n_max: int = 10) -> CheckResult:
    tally = _Tally("density-validation", 1e-12 * scale)
    for spec in all_partitions(range(2, n_max + 1)):
        for s in overlap_grid():
            for role, f in corr.closest_states(spec, s).items():
                d = f.matrix()
                herm = float(np.max(np.abs(d - d.conj().T)))
                tr = abs(float(np.trace(d).real) - 1.0)
                neg = max(0.0, -float(np.linalg.eigvalsh(d)[0]))
                tally.add(max(herm, tr, neg), f"{_label(spec, s)} {role}")
    return tally.result()


def check_n2_agreement(scale: float = 1.0) -> CheckResult:
    tally = _Tally("n2-agreement", 1e-12 * scale)
    for s in overlap_grid():
        a = corr.report(PartitionSpec.pure(2, 1), s)
        b = corr.report(PartitionSpec.mixed(2), s)
        err = max(abs(getattr(a, q) - getattr(b, q)) for q in ("t2", "d2", "c2", "l2"))
        err = max(err, abs(a.closest_param.value - b.closest_param.value))
        tally.add(err, f"s={s:.17g}")
        closed = 0.5 * ((1 - s * s) / (1 + s * s)) ** 2
        tally.add(abs(a.d2 - closed), f"pure D2 s={s:.17g}")
    return tally.result()


def check_branch_point(scale: float = 1.0) -> list[CheckResult]:
    point = _Tally("n3-branch-point", 1e-9 * scale)
    f = states.mixed_pair_fano(3, TIE_POINT)
    k = corr.k_spectrum(f)
    point.add(abs(k.lambda1 - k.lambda3), "lambda1 = lambda3 at s*")
    minus, plus = corr.branch_values(3, TIE_POINT)
    point.add(abs(minus.d2 - plus.d2), "D2 continuity at s*")
    flips = branch_flips(3, overlap_grid(1001))
    point.add(float(abs(flips - 1)), f"{flips} branch flips on [0, 1]", ok=flips == 1)

    jump = _Tally("n3-classical-jump", JUMP_TOL * scale)
    step = plus.c2 - minus.c2
    jump.add(abs(step - JUMP_AT_TIE), f"C2 jump {step:.6f} at s*")
    return [point.result(), jump.result()]


def branch_flips(n: int, grid: Iterable[float]) -> int:
    """Number of plus/minus changes along the grid; ties are skipped."""
    tags = [corr.branch_select(n, s) for s in grid]
    tags = [t for t in tags if t is not corr.Branch.TIE]
    return sum(1 for a, b in zip(tags, tags[1:]) if a is not b)


def check_limits(scale: float = 1.0, n_max: int = 10) -> CheckResult:
    tally = _Tally("limits", 1e-12 * scale)
    for spec in all_partitions(range(2, n_max + 1)):
        rep = corr.report(spec, 1.0)
        tally.add(max(abs(rep.t2), abs(rep.d2), abs(rep.c2), abs(rep.l2)), _label(spec, 1.0))
    for n in range(3, n_max + 1):
        rep = corr.report(PartitionSpec.mixed(n), 0.0)
        expected = (0.25, 0.0, 0.25, 0.0)
        err = max(abs(v - e) for v, e in zip((rep.t2, rep.d2, rep.c2, rep.l2), expected))
        tally.add(err, _label(PartitionSpec.mixed(n), 0.0))
    return tally.result()


def check_pure_identities(scale: float = 1.0, n_max: int = 10) -> list[CheckResult]:
    identities = _Tally("pure-identities", 1e-12 * scale)
    # Schmidt-weight form against the K-spectrum form; equal up to rounding only
    forms = _Tally("pure-discord-forms", 1e-15 * scale)
    for spec in all_partitions(range(2, n_max + 1)):
        if spec.scheme is not Scheme.PURE:
            continue
        n, k = spec.n, spec.k
        for s in overlap_grid():
            f = states.pure_partition_fano(n, k, s)
            identities.add(max(abs(corr.l2_pure(n, k, s)), abs(purity(f) - 1.0)), _label(spec, s))
            spectral = corr.discord_from_spectrum(corr.k_spectrum(f))
            forms.add(abs(corr.discord_pure(n, k, s) - spectral), _label(spec, s))
    return [identities.result(), forms.result()]


def run_all(
    density: int = 9, seed: int = oracle.DEFAULT_SEED, tolerance_scale: float = 1.0,
    starts: int = oracle.DEFAULT_STARTS,
) -> list[CheckResult]:
    results = [check_additivity(tolerance_scale)]
    results += check_oracle(density, seed, starts, tolerance_scale)
    results += [
        check_fixed_points(tolerance_scale),
        check_validity(tolerance_scale),
        check_n2_agreement(tolerance_scale),
        check_limits(tolerance_scale),
    ]
    results += check_branch_point(tolerance_scale)
    results += check_pure_identities(tolerance_scale)
    return results
