"""Discretized white-noise evaluation of the oscillator path integral.

Paths are parametrized by white noise on ``[0, t]``. For a quadratic
potential started at the origin the second variation of the potential action
is the kernel

    S''(tau1, tau2) = hbar * Omega**2 * (t - max(tau1, tau2)),

and the propagator reduces to a Fredholm determinant and one quadratic form
of the operator ``I - S''/hbar``:

    K(x, 0; t) = (1/2pi) det(I - S''/hbar)**(-1/2)
                 * sqrt(2 pi m / (i hbar t q)) * exp(i m x**2 / (2 hbar t q)),
    q = <e, (I - S''/hbar)**(-1) e>,   e = t**(-1/2) on [0, t].

The operator inverse in ``q`` matters: the direct form ``<e, (I - S''/hbar) e>``
equals ``1 - (Omega t)**2 / 3`` and does not give the oscillator kernel.

Everything is discretized with the midpoint rule on a uniform grid; matrix
entries and inner products both carry the weight ``dtau``. The Taylor
expansion of the potential action stops at second order without remainder
because the potential is quadratic.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import CausticError, DomainError, SingularOperatorError

__all__ = [
    "WhiteNoiseGrid",
    "SppMatrix",
    "spp_matrix",
    "fredholm_det",
    "inverse_quadratic_form",
    "direct_quadratic_form",
    "assemble_sho_kernel_wn",
    "MonteCarloEstimate",
    "characteristic_functional_mc",
]

SINGULAR_TOL = 1e-10
MC_MIN_SAMPLES = 1000
MC_CHUNK = 8192


@dataclass(frozen=True)
class WhiteNoiseGrid:
    """Uniform midpoint discretization of ``[0, time]``."""

    time: float
    steps: int

    def __post_init__(self):
        if not self.time > 0:
            raise DomainError(f"time must be positive, got {self.time}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps}")

    @property
    def dtau(self):
        return self.time / self.steps

    @property
    def nodes(self):
        return (np.arange(self.steps) + 0.5) * self.dtau

    def unit_vector(self):
        """``e = t**(-1/2)`` on every node, so that ``<e, e> = 1``."""
        return np.full(self.steps, self.time ** -0.5)

    def inner(self, f, g):
        """``<f, g> = sum f_i g_i dtau``."""
        return float(np.dot(f, g) * self.dtau)


@dataclass(frozen=True)
class SppMatrix:
    """Weighted kernel matrix ``S''(tau_i, tau_j) * dtau``."""

    entries: np.ndarray = field(repr=False)
    omega: float
    hbar: float

    def operator(self):
        """The matrix of ``I - S''/hbar`` acting on grid functions."""
        return np.eye(self.entries.shape[0]) - self.entries / self.hbar


def spp_matrix(grid, omega, hbar=1.0):
    """Discretize ``S'' = hbar Omega**2 (t - max(tau1, tau2))`` on ``grid``."""
    if not hbar > 0:
        raise DomainError(f"hbar must be positive, got {hbar}")
    tau = grid.nodes
    later = np.maximum.outer(tau, tau)
    entries = hbar * omega ** 2 * (grid.time - later) * grid.dtau
    return SppMatrix(entries, float(omega), float(hbar))


def _factor(grid, omega, hbar):
    op = spp_matrix(grid, omega, hbar).operator()
    lu, piv = linalg.lu_factor(op, check_finite=False)
    diag = np.diag(lu)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    det = float(np.prod(diag)) * (-1.0) ** swaps
    return lu, piv, det


def fredholm_det(grid, omega, hbar=1.0):
    """``det(I - S''/hbar)`` by LU factorization; tends to ``cos(Omega t)``."""
    return _factor(grid, omega, hbar)[2]


def inverse_quadratic_form(grid, omega, hbar=1.0):
    """``<e, (I - S''/hbar)**(-1) e>``; tends to ``tan(Omega t) / (Omega t)``.

    Raises SingularOperatorError when the discretized operator is singular to
    working precision, which happens at ``Omega t = pi/2 + k pi``.
    """
    lu, piv, det = _factor(grid, omega, hbar)
    wt = omega * grid.time
    if abs(det) < SINGULAR_TOL or abs(math.cos(wt)) < SINGULAR_TOL:
        raise SingularOperatorError(
            f"I - S''/hbar is singular at Omega t = {wt:.15g} (det = {det:.3g}); "
            "poles sit at Omega t = pi/2 + k pi"
        )
    e = grid.unit_vector()
    f = linalg.lu_solve((lu, piv), e, check_finite=False)
    return grid.inner(e, f)


def direct_quadratic_form(grid, omega, hbar=1.0):
    """``<e, (I - S''/hbar) e>`` without the inverse; tends to ``1 - (Omega t)**2 / 3``."""
    e = grid.unit_vector()
    return grid.inner(e, spp_matrix(grid, omega, hbar).operator() @ e)


def assemble_sho_kernel_wn(grid, mass, omega, hbar=1.0, x=0.0):
    """Oscillator propagator from the origin to ``x`` through the white-noise route.

    The Donsker-delta integral over the Fourier variable is done in closed
    form, leaving the determinant and the inverse quadratic form as the only
    numerical inputs.

    The two square roots are taken jointly as
    ``sqrt(m / (2 pi i hbar t q det))``: ``t q det`` tends to
    ``sin(Omega t) / Omega`` and stays finite where ``det`` and ``q`` pass
    through a zero and a pole at ``Omega t = pi/2``, so the joint root keeps
    the branch continuous up to the caustic at ``Omega t = pi``.
    """
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    t = grid.time
    wt = omega * t
    if wt > math.pi / 2 and abs(math.sin(wt)) < 1e-12:
        k = round(wt / math.pi)
        raise CausticError(
            f"caustic at Omega t = {wt:.15g}; kernel diverges at t = k*pi/Omega = {k * math.pi / omega:.15g}",
            critical_time=k * math.pi / omega,
        )
    det = fredholm_det(grid, omega, hbar)
    q = inverse_quadratic_form(grid, omega, hbar)
    if abs(q * det) < 1e-12:
        raise CausticError(f"caustic: t q det vanished at Omega t = {omega * t:.15g}")
    pref = np.sqrt(complex(mass / (2 * math.pi * hbar * t * q * det)) / 1j)
    x = np.asarray(x, dtype=float)
    out = pref * np.exp(1j * mass * x ** 2 / (2 * hbar * t * q))
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: complex
    stderr: float
    samples: int

    def within(self, target, n_sigma=3.0):
        return abs(self.value - target) <= n_sigma * self.stderr


def characteristic_functional_mc(grid, xi, samples, seed, chunk=MC_CHUNK):
    """Monte Carlo estimate of ``E[exp(i <w, xi>)]`` over discretized white noise.

    Each node carries an independent normal variate of variance ``1/dtau``.
    The target is ``exp(-1/2 int xi**2)``. Samples are drawn in fixed-size
    chunks, each from its own child of ``SeedSequence(seed)``, so the result
    depends only on ``(seed, samples, chunk)``.

    Parameters
    ----------
    grid : WhiteNoiseGrid
    xi : callable or array_like
        Test function, either evaluated at ``grid.nodes`` or given there.
    samples : int
        Number of white-noise draws, at least 1000.
    seed : int
    """
    if samples < MC_MIN_SAMPLES:
        raise DomainError(f"samples={samples} is statistically meaningless; need >= {MC_MIN_SAMPLES}")
    values = xi(grid.nodes) if callable(xi) else xi
    values = np.broadcast_to(np.asarray(values, dtype=float), (grid.steps,))
    if not np.all(np.isfinite(values)):
        raise DomainError("xi must be finite on the grid")

    n_chunks = -(-samples // chunk)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    weights = values * grid.dtau
    sigma = 1.0 / math.sqrt(grid.dtau)
    s_re = s_im = s_re2 = s_im2 = 0.0
    remaining = samples
    for child in children:
        size = min(chunk, remaining)
        remaining -= size
        noise = np.random.default_rng(child).standard_normal((size, grid.steps))
        pairing = (noise @ weights) * sigma
        re, im = np.cos(pairing), np.sin(pairing)
        s_re += re.sum()
        s_im += im.sum()
        s_re2 += (re * re).sum()
        s_im2 += (im * im).sum()
    mean_re, mean_im = s_re / samples, s_im / samples
    var = max(s_re2 / samples - mean_re ** 2, 0.0) + max(s_im2 / samples - mean_im ** 2, 0.0)
    stderr = math.sqrt(var * samples / (samples - 1) / samples)
    return MonteCarloEstimate(complex(mean_re, mean_im), stderr, samples)
