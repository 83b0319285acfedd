import math

import numpy as np
import pytest

from oscibath import kernels
from oscibath.crosscheck import bilinear_coefficients, kernel_propagate_1d
from oscibath.errors import BoundaryError, CausticError, DomainError
from oscibath.oracles import evolution as ev
from oscibath.oracles import gaussian
from oscibath.quadratic import QuadraticKernel
from oscibath.verify import fit_order


def test_compose_free_kernels():
    def free(t):
        k = 1 / (2 * t)
        return QuadraticKernel(np.sqrt(complex(1 / (2 * math.pi * t)) / 1j), k, -2 * k, k, t)

    chk = gaussian.compose_kernels(free(0.3), free(0.5), free(0.8), 0.7, -0.2)
    assert chk.rel_error < 1e-13


def test_compose_degenerate_raises():
    k = QuadraticKernel(1.0, 1.0, 1.0, -1.0)
    with pytest.raises(CausticError):
        gaussian.compose(k, QuadraticKernel(1.0, 1.0, 1.0, 1.0))


def test_literal_prefactor_breaks_composition():
    q = lambda t: kernels.quadratic_form(kernels.KernelSpec(1.0, 1.0, t, form="paper_literal"))
    assert gaussian.compose_kernels(q(0.5), q(0.5), q(1.0), 1.0, 0.0).rel_error > 0.1


def test_time_sliced_accuracy_and_order():
    target = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 1.0), 1.0)
    assert abs(gaussian.time_sliced_propagator(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 10_000) - target) / abs(target) < 1e-4
    ladder = [50, 100, 200, 400]
    errs = [abs(gaussian.time_sliced_propagator(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, s) - target) for s in ladder]
    assert fit_order(ladder, errs) == pytest.approx(2.0, abs=0.3)


def test_time_sliced_free_is_exact():
    value = gaussian.time_sliced_propagator(1.5, 0.0, 0.8, 0.9, 0.4, -0.3, 17)
    assert value == pytest.approx(kernels.free_kernel(1.5, 0.8, 0.9, 0.4, -0.3), rel=1e-12)


def test_time_sliced_rejects_few_slices():
    with pytest.raises(DomainError):
        gaussian.time_sliced_propagator(1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 5)


def test_nd_propagator_diagonal_is_product():
    hess = np.diag([1.0, 4.0])
    x = np.array([0.3, -0.4])
    value = gaussian.quadratic_propagator_nd(1.0, hess, 1.0, 0.6, x)
    k1 = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 0.6), 0.3)
    k2 = kernels.sho_kernel(kernels.KernelSpec(1.0, 2.0, 0.6), -0.4)
    assert value == pytest.approx(k1 * k2, rel=1e-13)


def test_nd_propagator_rejects_asymmetric():
    with pytest.raises(DomainError):
        gaussian.quadratic_propagator_nd(1.0, [[1.0, 0.2], [0.0, 1.0]], 1.0, 1.0, [0.0, 0.0])


def test_star_hessian_layout():
    h = gaussian.star_hessian(4, 2.0, 1.0, 0.5)
    assert h[0, 0] == 2.0 and h[0, 3] == 0.5 and h[3, 0] == 0.5 and h[1, 2] == 0.0


# Crank-Nicolson ----------------------------------------------------------------


def test_norm_preserved():
    g = ev.EvolutionGrid(points=512)
    field = ev.evolve_wavepacket(ev.Oscillator1D(), ev.GaussianPacket((1.0,), (0.3,), 0.8), g, 1.0)
    assert field.norm_drift < 1e-10


def test_free_packet_against_kernel():
    g = ev.EvolutionGrid()
    packet = ev.GaussianPacket((0.0,), (1.0,), 1.0)
    field = ev.evolve_wavepacket(ev.Oscillator1D(omega=0.0), packet, g, 1.0)
    ref = kernel_propagate_1d(lambda x, y: kernels.free_kernel(1.0, 1.0, 1.0, x, y), packet.sample(g), g.axis)
    assert ev.l2_distance(field.psi, ref, g.spacing) < 1e-5


def test_time_step_order():
    packet = ev.GaussianPacket((1.0,), (0.0,), 1.0)
    ref = None
    errs = []
    dts = [0.02, 0.01, 0.005]
    for dt in [0.0025] + dts:
        g = ev.EvolutionGrid(points=256, dt=dt)
        psi = ev.evolve_wavepacket(ev.Oscillator1D(), packet, g, 0.5).psi
        if ref is None:
            ref = psi
        else:
            errs.append(ev.l2_distance(psi, ref, g.spacing))
    # Richardson-style: error against the finest run scales like dt**2
    order = fit_order([1 / d for d in dts], errs)
    assert order == pytest.approx(2.0, abs=0.3)


def test_full_period_returns_minus_initial_state():
    g = ev.EvolutionGrid(points=256, dt=2e-3)
    packet = ev.GaussianPacket((1.5,), (0.0,), 0.9)
    psi0 = packet.sample(g)
    field = ev.evolve_wavepacket(ev.Oscillator1D(), packet, g, 2 * math.pi)
    # one period multiplies the state by exp(-i omega T / 2) = -1
    assert ev.l2_distance(field.psi, -psi0, g.spacing) < 1e-3


def test_boundary_error_on_small_box():
    g = ev.EvolutionGrid(extent=4.0, points=128)
    with pytest.raises(BoundaryError):
        ev.evolve_wavepacket(ev.Oscillator1D(omega=0.0), ev.GaussianPacket((2.0,), (3.0,), 0.5), g, 1.0)


def test_grid_validation():
    with pytest.raises(DomainError):
        ev.EvolutionGrid(points=32)
    with pytest.raises(DomainError):
        ev.EvolutionGrid(laplacian="spectral")
    with pytest.raises(DomainError):
        ev.evolve_wavepacket(ev.Oscillator1D(), ev.GaussianPacket((0.0, 0.0), (0.0, 0.0)), ev.EvolutionGrid(), 1.0)


def test_wavefield_rows():
    g = ev.EvolutionGrid(points=64)
    field = ev.evolve_wavepacket(ev.Oscillator1D(), ev.GaussianPacket(), g, 0.01)
    assert field.rows().shape == (64, 3)


def test_bilinear_coefficients_recover_pair_coupling():
    spec = kernels.PairSpec(n=4, mass=1.0, omega=1.0, coupling=0.0, time=0.7)
    b = bilinear_coefficients(lambda a, c, a0, c0: kernels.pair_kernel(spec, a, c, a0, c0))
    # decoupled oscillators: B = -diag(m_k) / (hbar sin t)
    np.testing.assert_allclose(b, -np.diag([1.0, 3.0]) / math.sin(0.7), rtol=1e-5, atol=1e-6)
