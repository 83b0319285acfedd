import math

import numpy as np
import pytest

from oscibath import kernels, white_noise as wn
from oscibath.errors import CausticError, DomainError, SingularOperatorError
from oscibath.verify import fit_order


def grid(t=1.0, steps=400):
    return wn.WhiteNoiseGrid(t, steps)


def test_grid_basics():
    g = grid(2.0, 4)
    np.testing.assert_allclose(g.nodes, [0.25, 0.75, 1.25, 1.75])
    assert g.inner(g.unit_vector(), g.unit_vector()) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        wn.WhiteNoiseGrid(1.0, 1)
    with pytest.raises(DomainError):
        wn.WhiteNoiseGrid(0.0, 10)


def test_spp_matrix_symmetric_and_scaled():
    s = wn.spp_matrix(grid(1.0, 50), 1.3, hbar=0.7)
    np.testing.assert_array_equal(s.entries, s.entries.T)
    tau = grid(1.0, 50).nodes
    assert s.entries[3, 10] == pytest.approx(0.7 * 1.3 ** 2 * (1.0 - tau[10]) * 0.02)


def test_zero_frequency_is_identity():
    assert wn.fredholm_det(grid(), 0.0) == 1.0
    assert wn.inverse_quadratic_form(grid(), 0.0) == pytest.approx(1.0, rel=1e-14)


def test_det_at_unit_phase():
    assert wn.fredholm_det(grid(1.0, 2000), 1.0) == pytest.approx(math.cos(1.0), rel=1e-3)


def test_hbar_cancels():
    assert wn.fredholm_det(grid(), 1.0, hbar=0.3) == pytest.approx(wn.fredholm_det(grid(), 1.0), rel=1e-12)


@pytest.mark.parametrize("wt", [0.3, 0.7, 1.0, 1.3])
def test_convergence_order(wt):
    ladder = [100, 200, 400, 800]
    det_err = [abs(wn.fredholm_det(grid(1.0, s), wt) - math.cos(wt)) for s in ladder]
    q_err = [abs(wn.inverse_quadratic_form(grid(1.0, s), wt) - math.tan(wt) / wt) for s in ladder]
    assert fit_order(ladder, det_err) >= 1
    assert fit_order(ladder, q_err) >= 1


def test_inverse_form_value():
    assert wn.inverse_quadratic_form(grid(1.0, 2000), 1.0) == pytest.approx(math.tan(1.0), rel=2e-3)


def test_direct_form_discriminator():
    assert wn.direct_quadratic_form(grid(1.0, 2000), 0.5) == pytest.approx(1 - 0.25 / 3, abs=1e-6)
    assert abs(wn.direct_quadratic_form(grid(1.0, 2000), 1.0) - math.tan(1.0)) > 0.5


def test_det_invariant_under_node_permutation():
    g = grid(1.0, 60)
    op = wn.spp_matrix(g, 1.1).operator()
    perm = np.random.default_rng(0).permutation(60)
    assert np.linalg.det(op[np.ix_(perm, perm)]) == pytest.approx(wn.fredholm_det(g, 1.1), rel=1e-10)


def test_singular_operator_raises():
    with pytest.raises(SingularOperatorError):
        wn.inverse_quadratic_form(grid(1.0, 200), math.pi / 2)


@pytest.mark.parametrize("x", [0.0, 1.0])
def test_assembly_matches_closed_form(x):
    value = wn.assemble_sho_kernel_wn(grid(1.0, 2000), 1.0, 1.0, 1.0, x)
    target = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 1.0), x)
    assert abs(value - target) / abs(target) < 1e-2


def test_assembly_past_quarter_period_keeps_branch():
    value = wn.assemble_sho_kernel_wn(grid(4.0, 2000), 1.0, 1.0, 1.0, 0.0)
    std = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 4.0), 0.0)
    lit = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 4.0, form="paper_literal"), 0.0)
    assert abs(value - std) / abs(std) < 1e-2
    assert abs(value) / abs(lit) == pytest.approx(2.0, rel=1e-2)


def test_assembly_vectorized():
    x = np.linspace(-1, 1, 5)
    out = wn.assemble_sho_kernel_wn(grid(), 1.0, 1.0, 1.0, x)
    assert out.shape == (5,)
    assert out[1] == pytest.approx(wn.assemble_sho_kernel_wn(grid(), 1.0, 1.0, 1.0, x[1]))


def test_assembly_at_caustic():
    with pytest.raises(CausticError) as info:
        wn.assemble_sho_kernel_wn(grid(math.pi, 400), 1.0, 1.0)
    assert info.value.critical_time == pytest.approx(math.pi)


# Monte Carlo ------------------------------------------------------------------


def xi(tau):
    return np.sin(np.pi * tau)


def test_mc_deterministic_at_fixed_seed():
    a = wn.characteristic_functional_mc(grid(1.0, 64), xi, 20_000, seed=5)
    b = wn.characteristic_functional_mc(grid(1.0, 64), xi, 20_000, seed=5)
    assert a == b
    c = wn.characteristic_functional_mc(grid(1.0, 64), xi, 20_000, seed=6)
    assert c.value != a.value


def test_mc_estimate_within_three_sigma():
    est = wn.characteristic_functional_mc(grid(1.0, 64), xi, 100_000, seed=42)
    assert est.within(math.exp(-0.25))
    assert est.stderr < 0.005


def test_mc_zero_test_function_is_exact():
    est = wn.characteristic_functional_mc(grid(1.0, 16), np.zeros(16), 1000, seed=0)
    assert est.value == 1.0
    assert est.stderr == 0.0


def test_mc_rejects_small_samples_and_bad_xi():
    with pytest.raises(DomainError):
        wn.characteristic_functional_mc(grid(), xi, 999, seed=0)
    with pytest.raises(DomainError):
        wn.characteristic_functional_mc(grid(1.0, 4), [0, np.inf, 0, 0], 1000, seed=0)
