"""Independent references: dense eigensolver, exact Gaussian algebra and
Crank-Nicolson wavepacket evolution."""

from .eigen import dense_eigensolve
from .evolution import EvolutionGrid, GaussianPacket, evolve_wavepacket
from .gaussian import compose_kernels, quadratic_propagator_nd, time_sliced_propagator
