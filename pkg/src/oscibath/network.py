"""Star-coupled oscillator network and its normal-mode spectrum.

One central oscillator (coordinate 0) couples with spring constant ``C`` to
``n - 1`` bath oscillators; ``n`` counts every coordinate. The characteristic
matrix is the non-symmetric pattern

    [[ nC,  C,  C, ...],
     [ -C, -C,  0, ...],
     [ -C,  0, -C, ...],
     ...               ]

whose spectrum is ``-C`` with multiplicity ``n - 2`` plus the pair

    lambda_pm = C * ((n - 1) +- sqrt((n - 1)**2 + 4)) / 2.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError
from .oracles.eigen import dense_eigensolve
from .report import VerificationReport

__all__ = [
    "OscillatorNetwork",
    "ModeSpectrum",
    "TABLE_I",
    "table_row",
    "build_characteristic_matrix",
    "mode_spectrum",
    "closed_form_matches_bruteforce",
]

# Nondegenerate eigenvalues in units of C, stored as (centre, radicand, divisor)
# meaning centre +- sqrt(radicand) / divisor, exactly as tabulated for N = 2..10.
TABLE_I = {
    2: (0.5, 5, 2),
    3: (1.0, 2, 1),
    4: (1.5, 13, 2),
    5: (2.0, 5, 1),
    6: (2.5, 29, 2),
    7: (3.0, 10, 1),
    8: (3.5, 53, 2),
    9: (4.0, 17, 1),
    10: (4.5, 85, 2),
}


def table_row(n, coupling=1.0):
    """Tabulated ``(lambda_plus, lambda_minus)`` for ``2 <= n <= 10``."""
    centre, radicand, divisor = TABLE_I[n]
    root = np.sqrt(radicand) / divisor
    return coupling * (centre + root), coupling * (centre - root)


@dataclass(frozen=True)
class OscillatorNetwork:
    """Physical parameters of the system plus its star-coupled bath.

    ``n`` is the total number of coordinates (system + bath); all oscillators
    share ``mass`` and natural frequency ``omega``.
    """

    n: int
    mass: float = 1.0
    omega: float = 1.0
    coupling: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"matrix undefined below N=2 (got n={self.n})")
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not self.omega >= 0:
            raise DomainError(f"omega must be non-negative, got {self.omega}")
        if not np.isfinite(self.coupling):
            raise DomainError("coupling must be finite")


@dataclass(frozen=True)
class ModeSpectrum:
    """Closed-form normal-mode spectrum of a star network.

    ``eigenvectors`` are the columns of the amplitude matrix: the ``n - 2``
    degenerate vectors first, then the vectors for ``lambda_plus`` and
    ``lambda_minus``. With zero coupling every vector is degenerate and the
    standard basis is returned instead.
    """

    n: int
    coupling: float
    degenerate_value: float
    degenerate_multiplicity: int
    lambda_plus: float
    lambda_minus: float
    eigenvectors: np.ndarray = field(repr=False)
    all_degenerate: bool = False

    @property
    def eigenvalues(self):
        """All ``n`` eigenvalues, ordered like the eigenvector columns."""
        return np.array(
            [self.degenerate_value] * self.degenerate_multiplicity
            + [self.lambda_plus, self.lambda_minus]
        )

    def to_dict(self):
        return {
            "n": self.n,
            "coupling": self.coupling,
            "degenerate": {
                "value": self.degenerate_value,
                "multiplicity": self.degenerate_multiplicity,
            },
            "nondegenerate": [self.lambda_plus, self.lambda_minus],
            "all_degenerate": self.all_degenerate,
            "eigenvectors": self.eigenvectors.T.tolist(),
        }


def _as_network(net_or_n, coupling=None):
    if isinstance(net_or_n, OscillatorNetwork):
        return net_or_n
    return OscillatorNetwork(n=net_or_n, coupling=1.0 if coupling is None else coupling)


def build_characteristic_matrix(net):
    """The lambda-free part ``M`` of the characteristic equation ``det(M - lambda I) = 0``."""
    net = _as_network(net)
    n, c = net.n, float(net.coupling)
    m = np.zeros((n, n))
    m[0, 0] = n * c
    m[0, 1:] = c
    m[1:, 0] = -c
    idx = np.arange(1, n)
    m[idx, idx] = -c
    # keep exact zeros free of a negative sign when c == 0
    return m + 0.0


def mode_spectrum(net):
    """Closed-form spectrum and eigenvectors of the characteristic matrix."""
    net = _as_network(net)
    n, c = net.n, float(net.coupling)
    if c == 0.0:
        return ModeSpectrum(
            n=n,
            coupling=c,
            degenerate_value=0.0,
            degenerate_multiplicity=n - 2,
            lambda_plus=0.0,
            lambda_minus=0.0,
            eigenvectors=np.eye(n),
            all_degenerate=True,
        )
    disc = np.sqrt((n - 1) ** 2 + 4.0)
    lam_plus = c * ((n - 1) + disc) / 2
    lam_minus = c * ((n - 1) - disc) / 2

    vectors = np.zeros((n, n))
    # degenerate block: bath pairs (1, k), k = 2..n-1, amplitudes -1 and +1
    for col, k in enumerate(range(2, n)):
        vectors[1, col] = -1.0
        vectors[k, col] = 1.0
    for col, lam in ((n - 2, lam_plus), (n - 1, lam_minus)):
        vectors[0, col] = -(n - 1) * c / (n * c - lam)
        vectors[1:, col] = 1.0

    return ModeSpectrum(
        n=n,
        coupling=c,
        degenerate_value=-c,
        degenerate_multiplicity=n - 2,
        lambda_plus=lam_plus,
        lambda_minus=lam_minus,
        eigenvectors=vectors,
    )


def closed_form_matches_bruteforce(net, tol=1e-10):
    """Compare the closed-form spectrum with a dense eigensolve of ``M``.

    Passes when the sorted eigenvalue lists differ by at most ``tol * |C|``
    entrywise (exact agreement when ``C == 0``). Eigensolver breakdown is reported with
    ``failure_kind="non_convergence"`` instead of raising.
    """
    net = _as_network(net)
    if not tol > 0:
        raise DomainError("tol must be positive")
    name = f"spectrum_n{net.n}_C{net.coupling:g}"
    closed = np.sort(mode_spectrum(net).eigenvalues)
    try:
        brute = dense_eigensolve(build_characteristic_matrix(net))
    except ConvergenceError as exc:
        return VerificationReport(
            name, float("nan"), float("nan"), float("inf"), float("inf"), False,
            detail=str(exc), failure_kind="non_convergence",
        )
    imag = float(np.max(np.abs(brute.imag)))
    brute = np.sort(brute.real)
    err = float(np.max(np.abs(closed - brute)))
    scale = abs(net.coupling)
    worst = int(np.argmax(np.abs(closed - brute)))
    passed = err <= tol * scale and imag <= tol * scale
    return VerificationReport(
        name,
        float(closed[worst]),
        float(brute[worst]),
        err,
        err / max(abs(closed[worst]), 1e-300) if err else 0.0,
        bool(passed),
        detail=f"max |Im| of brute-force eigenvalues {imag:.3g}",
    )
