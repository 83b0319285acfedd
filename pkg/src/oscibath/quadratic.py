"""Two-point Gaussian kernels stored as quadratic-form coefficients."""

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadraticKernel"]


@dataclass(frozen=True)
class QuadraticKernel:
    """``K(x, x0) = prefactor * exp(i * (a x**2 + b x x0 + c x0**2))``.

    ``time`` is carried along so compositions can be checked against a
    kernel evaluated at the summed time.
    """

    prefactor: complex
    a: complex
    b: complex
    c: complex
    time: float = float("nan")

    def __call__(self, x, x0=0.0):
        x = np.asarray(x, dtype=float)
        x0 = np.asarray(x0, dtype=float)
        # grouped so that a == c gives a phase exactly symmetric in (x, x0)
        phase = (self.a * (x * x) + self.c * (x0 * x0)) + self.b * (x * x0)
        out = self.prefactor * np.exp(1j * phase)
        return complex(out) if out.ndim == 0 else out
