import numpy as np
import pytest

from qcorr import correlations as corr
from qcorr import oracle
from qcorr.fano_bloch import FanoMatrix, hs_distance_sq, product_state
from qcorr.states import PartitionSpec, mixed_pair_fano, pure_partition_fano

BELL = pure_partition_fano(2, 1, 0)
C3_TWO_THIRDS = 0.7474152503958119  # frozen independent root of c^3 + c/3 = 2/3
DIST_3_HALF = 0.1450670600680023


def test_state_vector_is_normalized_and_symmetric():
    psi = oracle.balanced_state_vector(4, 0.3)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    assert np.allclose(psi.reshape(2, 2, 2, 2), psi.reshape(2, 2, 2, 2).transpose(1, 0, 3, 2))


def test_nearest_product_examples():
    found = oracle.nearest_product_numeric(BELL)
    assert found.min_distance_sq == pytest.approx(0.75, abs=1e-6)
    assert np.allclose(found.argmin.a, 0, atol=1e-3) and np.allclose(found.argmin.b, 0, atol=1e-3)
    assert found.converged_fraction == 1.0 and found.starts == 32

    prod = product_state((0.1, -0.2, 0.3), (0.0, 0.5, -0.5))
    assert oracle.nearest_product_numeric(prod).min_distance_sq <= 1e-10

    found = oracle.nearest_product_numeric(mixed_pair_fano(3, 0.5))
    assert found.min_distance_sq == pytest.approx(DIST_3_HALF, abs=1e-9)
    for vec in (found.argmin.a, found.argmin.b):
        assert np.allclose(vec, (0, 0, C3_TWO_THIRDS), atol=1e-4)
    assert hs_distance_sq(mixed_pair_fano(3, 0.5), found.state()) == pytest.approx(
        found.min_distance_sq, abs=1e-12)


def test_nearest_classical_examples():
    assert oracle.nearest_classical_numeric(BELL).min_distance_sq == pytest.approx(0.5, abs=1e-5)
    found = oracle.nearest_classical_numeric(mixed_pair_fano(3, 0.5))
    assert found.min_distance_sq == pytest.approx(0.1388888888888889, abs=1e-5)
    chi, _ = corr.closest_classical_mixed(3, 0.3)
    assert oracle.nearest_classical_numeric(chi).min_distance_sq <= 1e-10
    chi, _ = corr.closest_classical_mixed(3, 0.7)
    assert oracle.nearest_classical_numeric(chi).min_distance_sq <= 1e-10


def test_two_sided_family_is_only_an_upper_bound():
    f = mixed_pair_fano(3, 0.3)
    one = oracle.nearest_classical_numeric(f).min_distance_sq
    two = oracle.nearest_classical_numeric(f, family="two_sided").min_distance_sq
    assert one == pytest.approx(corr.report(PartitionSpec.mixed(3), 0.3).d2, abs=1e-9)
    assert two > one + 1e-2


def test_results_are_reproducible_for_a_seed():
    f = mixed_pair_fano(4, 0.4)
    a = oracle.nearest_classical_numeric(f, seed=7)
    b = oracle.nearest_classical_numeric(f, seed=7)
    assert a.min_distance_sq == b.min_distance_sq


def test_argument_checks():
    with pytest.raises(ValueError, match="starts"):
        oracle.nearest_product_numeric(BELL, starts=4)
    with pytest.raises(ValueError, match="starts"):
        oracle.nearest_classical_numeric(BELL, starts=8)
    with pytest.raises(ValueError, match="family"):
        oracle.nearest_classical_numeric(BELL, family="bogus")
    with pytest.raises(ValueError, match="t0"):
        oracle.stationarity_check(BELL, 1.5)


def test_sym3_eigenvalues():
    assert oracle.sym3_eigenvalues(np.eye(3)) == (1.0, 1.0, 1.0)
    values = oracle.sym3_eigenvalues(np.diag([0.444444, 0.111111, 0.888889]))
    assert values == pytest.approx((0.888889, 0.444444, 0.111111), abs=1e-15)
    with pytest.raises(ValueError, match="symmetric"):
        oracle.sym3_eigenvalues(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))
    k = oracle.k_matrix(oracle.reduced_pair_numeric(3, 0.5))
    assert oracle.sym3_eigenvalues(k) == pytest.approx((8 / 9, 4 / 9, 1 / 9), abs=1e-10)
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = rng.normal(size=(3, 3))
        m = m + m.T
        assert np.allclose(oracle.sym3_eigenvalues(m), np.linalg.eigvalsh(m)[::-1], atol=1e-13)


def test_sym3_eigenvalues_near_degenerate():
    # the trigonometric formula loses ~1e-8 here; rotations must not
    m = np.diag([1.0, 1.0 + 1e-9, 0.2])
    assert oracle.sym3_eigenvalues(m) == pytest.approx((1.0 + 1e-9, 1.0, 0.2), abs=1e-15)


def test_geometric_discord_numeric_matches_closed_form():
    for n in (2, 3, 6):
        for s in (0.1, 0.4, 0.9):
            f = oracle.reduced_pair_numeric(n, s)
            assert oracle.geometric_discord_numeric(f) == pytest.approx(
                corr.discord_mixed(n, s)[0], abs=1e-12)


def test_stationarity_examples():
    f = mixed_pair_fano(3, 0.5)
    assert oracle.stationarity_check(f, corr.closest_product_mixed(3, 0.5)[0].value) <= 1e-8
    g = pure_partition_fano(2, 1, 0.5)
    assert oracle.stationarity_check(g, corr.closest_product_pure(g)[0].value) <= 1e-8
    assert oracle.stationarity_check(f, 0.5) >= 1e-3


def test_param_state_round_trip():
    found = oracle.nearest_classical_numeric(mixed_pair_fano(5, 0.6))
    chi = found.state()
    assert isinstance(chi, FanoMatrix)
    assert chi.matrix().trace().real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(chi.matrix()).min() >= -1e-12
    with pytest.raises(TypeError):
        oracle.param_table(object())
