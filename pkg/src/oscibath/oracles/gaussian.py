"""Exact Gaussian algebra used as references for the closed forms.

Nothing here imports :mod:`oscibath.kernels` or :mod:`oscibath.white_noise`;
agreement with those modules is therefore evidence rather than an identity.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import CausticError, DomainError
from ..quadratic import QuadraticKernel

__all__ = [
    "compose",
    "CompositionCheck",
    "compose_kernels",
    "time_sliced_propagator",
    "quadratic_propagator_nd",
    "star_hessian",
]

DEGENERATE_TOL = 1e-14


def compose(later, earlier):
    """Integrate out the intermediate point of ``later(x, y) * earlier(y, x0)``.

    Both factors are ``A exp(i (a x**2 + b x y + c y**2))``; the y-integral is
    a Fresnel integral done in closed form, with the principal branch of
    ``sqrt(pi / P)``, ``P = -i (later.c + earlier.a)``.
    """
    p = later.c + earlier.a
    if abs(p) < DEGENERATE_TOL:
        raise CausticError("intermediate Gaussian is degenerate (zero quadratic coefficient)")
    gauss = np.sqrt(complex(math.pi / (-1j * p)))
    return QuadraticKernel(
        prefactor=later.prefactor * earlier.prefactor * gauss,
        a=later.a - later.b ** 2 / (4 * p),
        b=-later.b * earlier.b / (2 * p),
        c=earlier.c - earlier.b ** 2 / (4 * p),
        time=later.time + earlier.time,
    )


@dataclass(frozen=True)
class CompositionCheck:
    composed: complex
    direct: complex
    rel_error: float


def compose_kernels(later, earlier, total, x, x0):
    """Compare ``int later(x, y) earlier(y, x0) dy`` with ``total(x, x0)``.

    All three arguments are :class:`~oscibath.quadratic.QuadraticKernel`
    instances; ``total`` should describe the same propagator at the summed time.
    """
    composed = compose(later, earlier)(x, x0)
    direct = total(x, x0)
    return CompositionCheck(composed, direct, abs(composed - direct) / abs(direct))


def _slice(mass, omega, hbar, eps):
    # short-time kernel with the trapezoidal potential -eps (V(x) + V(y)) / 2
    kin = mass / (2 * hbar * eps)
    pot = eps * mass * omega ** 2 / (4 * hbar)
    pref = np.sqrt(complex(mass / (2 * math.pi * hbar * eps)) / 1j)
    return QuadraticKernel(pref, kin - pot, -2 * kin, kin - pot, time=eps)


def time_sliced_propagator(mass, omega, hbar, t, x, x0, slices):
    """Time-sliced oscillator path integral with ``slices`` short-time factors.

    The intermediate integrals are carried exactly on the quadratic-form
    coefficients, so the only error is the O(eps**2) action discretization.
    """
    if slices < 10:
        raise DomainError(f"need at least 10 slices, got {slices}")
    if not t > 0 or not mass > 0 or not hbar > 0:
        raise DomainError("mass, hbar and t must be positive")
    step = _slice(mass, omega, hbar, t / slices)
    acc = step
    for _ in range(slices - 1):
        acc = compose(step, acc)
    return acc(x, x0)


def star_hessian(n, mass, omega, coupling):
    """Potential Hessian of ``sum m w**2 x_j**2 / 2 + C x_1 sum_{j>1} x_j``."""
    h = mass * omega ** 2 * np.eye(n)
    h[0, 1:] = coupling
    h[1:, 0] = coupling
    return h


def quadratic_propagator_nd(mass, hessian, hbar, t, x, x0=None):
    """Exact propagator of ``p**2/2m + x.H.x/2`` for symmetric ``H``.

    Diagonalizes ``H`` with an orthogonal matrix and multiplies one
    oscillator kernel per mode, written out here independently of the kernels
    module. Modes with negative stiffness use the hyperbolic form.
    """
    hess = np.asarray(hessian, dtype=float)
    if not np.allclose(hess, hess.T, rtol=0, atol=1e-14 * max(1.0, np.abs(hess).max())):
        raise DomainError("Hessian must be symmetric")
    x = np.asarray(x, dtype=float)
    x0 = np.zeros_like(x) if x0 is None else np.asarray(x0, dtype=float)
    stiff, vecs = np.linalg.eigh(hess)
    z, z0 = vecs.T @ x, vecs.T @ x0
    value = 1.0 + 0.0j
    for k, zi, zi0 in zip(stiff, z, z0):
        w2 = k / mass
        if w2 > 0:
            w = math.sqrt(w2)
            s, c = math.sin(w * t) / w, math.cos(w * t)
        elif w2 < 0:
            kap = math.sqrt(-w2)
            s, c = math.sinh(kap * t) / kap, math.cosh(kap * t)
        else:
            s, c = t, 1.0
        if abs(s) < DEGENERATE_TOL:
            raise CausticError("mode at a caustic")
        pref = np.sqrt(complex(mass / (2 * math.pi * hbar * s)) / 1j)
        value *= pref * np.exp(1j * mass * ((zi ** 2 + zi0 ** 2) * c - 2 * zi * zi0) / (2 * hbar * s))
    return complex(value)
