"""Normal modes, closed-form propagators and path-integral checks for an
oscillator star-coupled to a bath of identical oscillators."""

from ._schemas import load_schema
from .errors import (
    BoundaryError,
    CausticError,
    ConvergenceError,
    DomainError,
    InvertedModeError,
    OscibathError,
    SingularOperatorError,
    StabilityError,
)
from .kernels import (
    KernelSpec,
    PairSpec,
    amplitude_summary,
    free_kernel,
    full_propagator,
    pair_frequencies,
    pair_kernel,
    sho_kernel,
)
from .network import ModeSpectrum, OscillatorNetwork, closed_form_matches_bruteforce, mode_spectrum
from .report import VerificationReport
from .white_noise import (
    WhiteNoiseGrid,
    assemble_sho_kernel_wn,
    characteristic_functional_mc,
    fredholm_det,
    inverse_quadratic_form,
)

__version__ = "0.1.0"
