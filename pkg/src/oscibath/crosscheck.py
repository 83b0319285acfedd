"""Propagate sampled wavefunctions with a closed-form kernel by quadrature.

Used to compare kernels against the Crank-Nicolson oracle: the kernel-evolved
state ``int K(x, x') psi0(x') dx'`` is formed on the evolution grid and the
two fields are compared in L2.
"""

import numpy as np

__all__ = ["kernel_propagate_1d", "bilinear_coefficients", "kernel_propagate_2d"]


def kernel_propagate_1d(kernel, psi0, axis):
    """Trapezoid quadrature of ``kernel(x, x') psi0(x')`` on ``axis``.

    ``kernel`` must broadcast over array arguments.
    """
    h = axis[1] - axis[0]
    return kernel(axis[:, None], axis[None, :]) @ psi0 * h


def bilinear_coefficients(kernel, delta=1e-3):
    """Real matrix ``B`` with ``K(x, x') = K(x, 0) K(0, x') / K(0, 0) exp(i x.B.x')``.

    Any two-point Gaussian kernel factors this way; ``B`` is read off by
    polarization with probe displacements of size ``delta``.
    """
    k00 = kernel(0.0, 0.0, 0.0, 0.0)
    unit = np.eye(2) * delta
    b = np.empty((2, 2))
    for j in range(2):
        kx = kernel(unit[j, 0], unit[j, 1], 0.0, 0.0)
        for k in range(2):
            kx0 = kernel(0.0, 0.0, unit[k, 0], unit[k, 1])
            both = kernel(unit[j, 0], unit[j, 1], unit[k, 0], unit[k, 1])
            b[j, k] = np.angle(both * k00 / (kx * kx0)) / delta ** 2
    return b


def kernel_propagate_2d(kernel, psi0, out_axis, quad_axis):
    """Propagate a 2D state with a Gaussian two-point kernel.

    Parameters
    ----------
    kernel : callable
        ``kernel(x1, x2, x1_0, x2_0)``, broadcasting over arrays.
    psi0 : callable
        Initial state ``psi0(x1, x2)``, evaluated on the quadrature grid.
    out_axis, quad_axis : numpy.ndarray
        Uniform axes for the output points and for the integration variable.
        ``quad_axis`` must be fine enough to resolve the kernel's chirp at
        the farthest output point.
    """
    h = quad_axis[1] - quad_axis[0]
    b = bilinear_coefficients(kernel)
    k00 = kernel(0.0, 0.0, 0.0, 0.0)
    q1, q2 = np.meshgrid(quad_axis, quad_axis, indexing="ij")
    source = kernel(0.0, 0.0, q1, q2) / k00 * psi0(q1, q2) * h * h
    o1, o2 = np.meshgrid(out_axis, out_axis, indexing="ij")
    o1, o2 = o1.ravel(), o2.ravel()
    # exp(i x.B.x') = exp(i u x1') exp(i v x2')
    u = o1 * b[0, 0] + o2 * b[1, 0]
    v = o1 * b[0, 1] + o2 * b[1, 1]
    left = np.exp(1j * np.multiply.outer(u, quad_axis))
    right = np.exp(1j * np.multiply.outer(v, quad_axis))
    summed = np.einsum("kj,kj->k", left @ source, right)
    out = kernel(o1, o2, 0.0, 0.0) * summed
    return out.reshape(out_axis.size, out_axis.size)
