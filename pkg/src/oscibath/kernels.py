"""Closed-form Gaussian propagators for the decoupled normal modes.

Every kernel here is built from the single-mode two-point kernel

    K(x, x0; t) = sqrt(m / (2 pi i hbar s)) * exp(i m ((x**2 + x0**2) c - 2 x x0) / (2 hbar s))

with ``s = sin(Omega t) / Omega`` and ``c = cos(Omega t)``. Writing it through
``s`` makes the free particle (``Omega = 0``, ``s = t``) and inverted modes
(``Omega**2 < 0``, ``s = sinh(kappa t) / kappa``) the same code path.

Two prefactor conventions are offered. ``"standard"`` is the Feynman kernel
above. ``"paper_literal"`` carries an extra ``t`` under the square root,
``sqrt(m Omega / (2 pi i hbar t sin(Omega t)))``, and is only defined for a
start point at the origin.

Complex square roots use the principal branch, which gives the phase
``-pi/4`` per mode before the first caustic. No Maslov phase is added after a
caustic is crossed.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CausticError, DomainError, InvertedModeError
from .network import OscillatorNetwork
from .quadratic import QuadraticKernel

__all__ = [
    "FORMS",
    "KernelSpec",
    "PairSpec",
    "sho_kernel",
    "free_kernel",
    "quadratic_form",
    "degenerate_pair_kernel",
    "pair_frequencies",
    "pair_kernel",
    "full_propagator",
    "amplitude_summary",
]

FORMS = ("standard", "paper_literal")
CAUSTIC_TOL = 1e-12


def _check_form(form):
    if form not in FORMS:
        raise DomainError(f"unknown kernel form {form!r}; expected one of {FORMS}")


def _mode_trig(omega_sq, t):
    """Return ``(s, c)`` = ``(sin(W t)/W, cos(W t))`` for ``W = sqrt(omega_sq)``.

    Raises CausticError when ``sin(W t)`` vanishes away from the free limit.
    """
    if omega_sq > 0:
        w = math.sqrt(omega_sq)
        wt = w * t
        sin_wt = math.sin(wt)
        if abs(sin_wt) < CAUSTIC_TOL and wt > 0.5 * math.pi:
            k = max(1, round(wt / math.pi))
            raise CausticError(
                f"caustic: sin(Omega t) = {sin_wt:.3g} at Omega t = {wt:.15g}; "
                f"kernel diverges at t = k*pi/Omega = {k * math.pi / w:.15g}",
                critical_time=k * math.pi / w,
            )
        return t * float(np.sinc(wt / math.pi)), math.cos(wt)
    if omega_sq == 0:
        return t, 1.0
    kappa = math.sqrt(-omega_sq)
    kt = kappa * t
    return math.sinh(kt) / kappa, math.cosh(kt)


def _prefactor(mass, hbar, s):
    return np.sqrt(complex(mass / (2 * math.pi * hbar * s)) / 1j)


def _mode_quadratic(mass, omega_sq, hbar, t):
    s, c = _mode_trig(omega_sq, t)
    k = mass / (2 * hbar * s)
    return QuadraticKernel(_prefactor(mass, hbar, s), k * c, -2 * k, k * c, time=t)


@dataclass(frozen=True)
class KernelSpec:
    """Parameters of a single-mode propagator."""

    mass: float
    frequency: float
    time: float
    hbar: float = 1.0
    form: str = "standard"

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not self.frequency >= 0:
            raise DomainError(f"frequency must be non-negative, got {self.frequency}")
        if not self.time > 0:
            raise DomainError(f"time must be positive, got {self.time}")
        _check_form(self.form)


def quadratic_form(spec):
    """Quadratic-form coefficients of the two-point kernel for ``spec``.

    For ``form="paper_literal"`` the literal prefactor is paired with the
    standard exponent; this extension off ``x0 = 0`` exists so composition
    checks can be run on the literal prefactor.
    """
    q = _mode_quadratic(spec.mass, spec.frequency ** 2, spec.hbar, spec.time)
    if spec.form == "paper_literal":
        q = QuadraticKernel(q.prefactor / math.sqrt(spec.time), q.a, q.b, q.c, q.time)
    return q


def sho_kernel(spec, x, x0=0.0):
    """Harmonic oscillator propagator ``K(x, x0; t)`` at the points given."""
    if spec.form == "paper_literal" and np.any(np.asarray(x0) != 0):
        raise DomainError("paper_literal kernel is only defined for x0 = 0")
    return quadratic_form(spec)(x, x0)


def free_kernel(mass, hbar, time, x, x0=0.0):
    """Free-particle propagator ``sqrt(m/(2 pi i hbar t)) exp(i m (x-x0)**2 / (2 hbar t))``."""
    if not time > 0:
        raise DomainError(f"time must be positive, got {time}")
    x = np.asarray(x, dtype=float)
    pref = np.sqrt(complex(mass / (2 * math.pi * hbar * time)) / 1j)
    out = pref * np.exp(1j * mass * (x - x0) ** 2 / (2 * hbar * time))
    return complex(out) if out.ndim == 0 else out


def degenerate_pair_kernel(spec, xa, xb):
    """Product of two independent single-mode kernels started at the origin."""
    return sho_kernel(spec, xa, 0.0) * sho_kernel(spec, xb, 0.0)


@dataclass(frozen=True)
class PairSpec:
    """System oscillator coupled to the in-phase motion of an ``n - 1`` bath.

    The reduced problem has masses ``m1 = mass`` and ``m2 = (n - 1) mass`` and
    bilinear coupling ``(n - 1) * coupling * x1 * x2``. ``rotation_branch``
    picks the decoupling angle ``phi = (2 k + 1) pi / 4``. Set
    ``allow_inverted`` to evaluate modes with negative squared frequency as
    hyperbolic kernels instead of raising.
    """

    n: int
    mass: float
    omega: float
    coupling: float
    time: float
    hbar: float = 1.0
    rotation_branch: int = 0
    form: str = "standard"
    allow_inverted: bool = False

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 4:
            raise DomainError(f"pair reduction requires n >= 4, got {self.n}")
        if not self.mass > 0 or not self.hbar > 0:
            raise DomainError("mass and hbar must be positive")
        if not self.time > 0:
            raise DomainError(f"time must be positive, got {self.time}")
        if int(self.rotation_branch) != self.rotation_branch or self.rotation_branch < 0:
            raise DomainError("rotation_branch must be a non-negative integer")
        _check_form(self.form)

    @property
    def m1(self):
        return self.mass

    @property
    def m2(self):
        return (self.n - 1) * self.mass

    @property
    def pair_coupling(self):
        return (self.n - 1) * self.coupling

    @property
    def phi(self):
        return (2 * self.rotation_branch + 1) * math.pi / 4

    @property
    def jacobian(self):
        return math.sqrt(self.m1 * self.m2) / self.mass

    @property
    def critical_coupling(self):
        """Coupling magnitude at which the softer pair mode stops oscillating."""
        return self.mass * self.omega ** 2 / math.sqrt(self.n - 1)

    def rotate(self, x1, x2):
        """Map ``(x1, x2)`` to the decoupled coordinates ``(y1, y2)``."""
        r1 = math.sqrt(self.m1 / self.mass)
        r2 = math.sqrt(self.m2 / self.mass)
        cphi, sphi = math.cos(self.phi), math.sin(self.phi)
        return r1 * cphi * x1 - r2 * sphi * x2, r1 * sphi * x1 + r2 * cphi * x2


def pair_frequencies(spec):
    """Squared frequencies ``(Omega1**2, Omega2**2)`` of the coupled pair.

    ``Omega1**2 = omega**2 - sqrt(n-1) C / m`` is the softer mode for ``C > 0``.
    """
    shift = spec.pair_coupling / math.sqrt(spec.m1 * spec.m2)
    return spec.omega ** 2 - shift, spec.omega ** 2 + shift


def _pair_mode_frequencies(spec):
    # squared frequencies attached to y1, y2 for the chosen rotation branch
    shift = spec.pair_coupling / math.sqrt(spec.m1 * spec.m2) * math.sin(2 * spec.phi)
    return spec.omega ** 2 - shift, spec.omega ** 2 + shift


def _check_pair_modes(spec):
    w1, w2 = pair_frequencies(spec)
    if (w1 <= 0 or w2 <= 0) and not spec.allow_inverted:
        c_star = math.copysign(spec.critical_coupling, spec.coupling)
        raise InvertedModeError(
            f"inverted pair mode: Omega1^2 = {w1:.6g}, Omega2^2 = {w2:.6g}; "
            f"critical coupling C* = m omega^2 / sqrt(n-1) = {c_star:.15g}",
            critical_coupling=c_star,
        )


def pair_kernel(spec, x1, x2, x1_0=0.0, x2_0=0.0):
    """Propagator of the reduced system/bath pair in the original coordinates.

    Evaluates ``J * K_{Omega1}(y1, y1_0) * K_{Omega2}(y2, y2_0)`` with
    ``J = sqrt(m1 m2) / m``. The start point may be non-zero only for the
    standard form.
    """
    _check_pair_modes(spec)
    if spec.form == "paper_literal" and (x1_0 != 0 or x2_0 != 0):
        raise DomainError("paper_literal kernel is only defined for a start at the origin")
    y1, y2 = spec.rotate(x1, x2)
    y1_0, y2_0 = spec.rotate(x1_0, x2_0)
    w1, w2 = _pair_mode_frequencies(spec)
    k1 = _mode_quadratic(spec.mass, w1, spec.hbar, spec.time)
    k2 = _mode_quadratic(spec.mass, w2, spec.hbar, spec.time)
    value = spec.jacobian * k1(y1, y1_0) * k2(y2, y2_0)
    if spec.form == "paper_literal":
        value = value / spec.time
    return value


def _literal_full(net, coords, t, omega_sq_pair):
    n, m, hbar, w = net.n, net.mass, net.hbar, net.omega
    x = coords
    root = math.sqrt(n - 1)
    s_w, c_w = _mode_trig(w ** 2, t)
    s1, c1 = _mode_trig(omega_sq_pair[0], t)
    s2, c2 = _mode_trig(omega_sq_pair[1], t)
    pref = (m / (2j * math.pi * hbar * t)) ** (n - 1) * (1 / s_w) ** (n - 2)
    pref = pref * np.sqrt(complex((n - 1) / (s1 * s2)))
    minus = 0.5 * x[0] ** 2 - root * x[0] * x[1] + 0.5 * (n - 1) * x[1] ** 2
    plus = 0.5 * x[0] ** 2 + root * x[0] * x[1] + 0.5 * (n - 1) * x[1] ** 2
    degenerate = (n - 2) * x[1] ** 2 + np.sum(x[2:] ** 2)
    phase = (m / (2 * hbar)) * (minus * c1 / s1 + plus * c2 / s2 + degenerate * c_w / s_w)
    return complex(pref * np.exp(1j * phase))


def full_propagator(net, coords, time, form="standard", allow_inverted=False):
    """Propagator of all ``n`` coordinates from the origin to ``coords``.

    ``"paper_literal"`` evaluates the literal general-N product formula: the coupled pair
    in ``(x1, x2)`` with ``m2 = (n-1) m`` times ``n - 2`` degenerate two-mode
    factors, which contribute ``(n-2) x2**2 + sum_{j>=3} xj**2`` to the
    ``cot(omega t)`` exponent and ``(omega / sin(omega t))**(n-2)`` to the
    prefactor.

    ``"standard"`` is the dimensionally consistent propagator of the same
    Hamiltonian. The coupled pair is evaluated at the bath centre of mass
    ``X = mean(x2..xn)`` and the ``n - 2`` degenerate modes at frequency
    ``omega`` act on the bath coordinates relative to ``X``.
    """
    _check_form(form)
    if not isinstance(net, OscillatorNetwork):
        raise DomainError("net must be an OscillatorNetwork")
    if net.n < 4:
        raise DomainError(f"general form stated for N >= 4 (got n={net.n})")
    x = np.asarray(coords, dtype=float)
    if x.shape != (net.n,):
        raise DomainError(f"expected {net.n} coordinates, got shape {x.shape}")
    if not time > 0:
        raise DomainError(f"time must be positive, got {time}")
    pair = PairSpec(
        n=net.n, mass=net.mass, omega=net.omega, coupling=net.coupling,
        time=time, hbar=net.hbar, form=form, allow_inverted=allow_inverted,
    )
    _check_pair_modes(pair)
    if form == "paper_literal":
        return _literal_full(net, x, time, pair_frequencies(pair))

    centre = float(np.mean(x[1:]))
    relative_sq = float(np.sum(x[1:] ** 2) - (net.n - 1) * centre ** 2)
    relative_sq = max(relative_sq, 0.0)
    # density in the bath coordinates picks up 1/sqrt(n-1) from X -> centre-of-mass mode
    value = pair_kernel(pair, x[0], centre) / math.sqrt(net.n - 1)
    s, c = _mode_trig(net.omega ** 2, time)
    mode_pref = _prefactor(net.mass, net.hbar, s)
    value *= mode_pref ** (net.n - 2)
    value *= np.exp(1j * net.mass * c * relative_sq / (2 * net.hbar * s))
    return complex(value)


def amplitude_summary(z):
    """``{"re", "im", "magnitude", "phase"}`` view of a complex amplitude."""
    z = complex(z)
    return {"re": z.real, "im": z.imag, "magnitude": abs(z), "phase": math.atan2(z.imag, z.real)}
