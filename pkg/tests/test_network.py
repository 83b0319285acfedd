import math

import numpy as np
import pytest

from oscibath import network
from oscibath.errors import DomainError
from oscibath.oracles.eigen import dense_eigensolve


def brute(n, c):
    return np.sort(dense_eigensolve(network.build_characteristic_matrix(network.OscillatorNetwork(n=n, coupling=c))).real)


def test_matrix_layout():
    m = network.build_characteristic_matrix(network.OscillatorNetwork(n=4, coupling=2.0))
    expected = np.array([
        [8.0, 2, 2, 2],
        [-2, -2, 0, 0],
        [-2, 0, -2, 0],
        [-2, 0, 0, -2],
    ])
    np.testing.assert_array_equal(m, expected)


@pytest.mark.parametrize("n", range(2, 11))
def test_table_rows_against_closed_form(n):
    lp, lm = network.table_row(n)
    spec = network.mode_spectrum(network.OscillatorNetwork(n=n, coupling=1.0))
    assert lp == pytest.approx(spec.lambda_plus, abs=1e-14)
    assert lm == pytest.approx(spec.lambda_minus, abs=1e-14)


def test_n4_example():
    spec = network.mode_spectrum(network.OscillatorNetwork(n=4, coupling=1.0))
    assert spec.lambda_plus == pytest.approx(1.5 + math.sqrt(13) / 2, abs=1e-14)
    assert spec.lambda_minus == pytest.approx(1.5 - math.sqrt(13) / 2, abs=1e-14)
    assert spec.degenerate_value == -1.0
    assert spec.degenerate_multiplicity == 2


def test_n7_has_minus_root():
    lp, lm = network.table_row(7)
    assert lp == pytest.approx(3 + math.sqrt(10))
    assert lm == pytest.approx(3 - math.sqrt(10))
    assert np.max(np.abs(brute(7, 1.0)[[0, -1]] - [-1.0, lp])) < 1e-12


@pytest.mark.parametrize("c", [0.5, 1.0, 3.0, -2.0])
def test_general_n_sweep(c):
    for n in range(2, 65):
        rep = network.closed_form_matches_bruteforce(network.OscillatorNetwork(n=n, coupling=c), tol=1e-9)
        assert rep.passed, (n, c, rep.abs_error)


@pytest.mark.parametrize("n", [2, 3, 5, 17, 40])
def test_trace_product_and_residuals(n):
    c = 1.3
    net = network.OscillatorNetwork(n=n, coupling=c)
    m = network.build_characteristic_matrix(net)
    spec = network.mode_spectrum(net)
    lam = spec.eigenvalues
    assert lam.sum() == pytest.approx(np.trace(m), rel=1e-12)
    assert np.prod(lam) == pytest.approx(np.linalg.det(m), rel=1e-9)
    for vec, value in zip(spec.eigenvectors.T, lam):
        assert np.linalg.norm(m @ vec - value * vec) < 1e-12 * np.linalg.norm(vec) * max(1.0, abs(value))


def test_degenerate_vectors_span_bath_differences():
    spec = network.mode_spectrum(network.OscillatorNetwork(n=6, coupling=1.0))
    block = spec.eigenvectors[:, : spec.degenerate_multiplicity]
    assert np.linalg.matrix_rank(block) == 4
    np.testing.assert_array_equal(block[0], 0.0)
    np.testing.assert_allclose(block.sum(axis=0), 0.0, atol=1e-15)


def test_linear_scaling():
    base = network.mode_spectrum(network.OscillatorNetwork(n=10, coupling=1.0))
    scaled = network.mode_spectrum(network.OscillatorNetwork(n=10, coupling=2.0))
    assert scaled.lambda_plus == pytest.approx(9 + math.sqrt(85), abs=1e-12)
    assert scaled.lambda_minus == pytest.approx(9 - math.sqrt(85), abs=1e-12)
    np.testing.assert_allclose(scaled.eigenvalues, 2 * base.eigenvalues, rtol=0, atol=0)


def test_zero_coupling_flagged():
    spec = network.mode_spectrum(network.OscillatorNetwork(n=2, coupling=0.0))
    assert spec.all_degenerate
    np.testing.assert_array_equal(spec.eigenvalues, 0.0)
    np.testing.assert_array_equal(spec.eigenvectors, np.eye(2))
    assert network.closed_form_matches_bruteforce(network.OscillatorNetwork(n=5, coupling=0.0)).passed


def test_to_dict_keys():
    d = network.mode_spectrum(network.OscillatorNetwork(n=3, coupling=1.0)).to_dict()
    assert set(d) == {"n", "coupling", "degenerate", "nondegenerate", "all_degenerate", "eigenvectors"}
    assert len(d["eigenvectors"]) == 3


@pytest.mark.parametrize("kwargs", [dict(n=1), dict(n=0), dict(n=2, mass=0.0), dict(n=2, hbar=-1.0), dict(n=2, omega=-1.0)])
def test_invalid_network(kwargs):
    with pytest.raises(DomainError):
        network.OscillatorNetwork(**kwargs)


def test_non_convergence_is_reported(monkeypatch):
    from oscibath.errors import ConvergenceError

    def boom(_):
        raise ConvergenceError("forced")

    monkeypatch.setattr(network, "dense_eigensolve", boom)
    rep = network.closed_form_matches_bruteforce(network.OscillatorNetwork(n=4))
    assert not rep.passed
    assert rep.failure_kind == "non_convergence"
