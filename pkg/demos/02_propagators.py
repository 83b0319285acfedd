"""
Closed-form propagators: single mode, coupled pair, and the full N-body kernel.
"""
import numpy as np

from oscibath import KernelSpec, OscillatorNetwork, PairSpec, full_propagator, pair_frequencies, pair_kernel, sho_kernel
from oscibath.errors import CausticError, InvertedModeError
from oscibath.kernels import amplitude_summary

spec = KernelSpec(mass=1.0, frequency=1.0, time=1.0)
print(amplitude_summary(sho_kernel(spec, 1.0)))

# the literal prefactor differs from the standard one by 1/sqrt(t)
lit = sho_kernel(KernelSpec(1.0, 1.0, 4.0, form="paper_literal"), 0.0)
std = sho_kernel(KernelSpec(1.0, 1.0, 4.0), 0.0)
print(abs(std) / abs(lit))  # = 2

try:
    sho_kernel(KernelSpec(1.0, 1.0, np.pi), 0.0)
except CausticError as exc:
    print("caustic:", exc.critical_time)

pair = PairSpec(n=4, mass=1.0, omega=1.0, coupling=0.3, time=0.7)
print(np.sqrt(pair_frequencies(pair)))
print(pair_kernel(pair, 0.2, -0.1))

try:
    pair_kernel(PairSpec(n=4, mass=1.0, omega=1.0, coupling=1.0, time=0.7), 0.0, 0.0)
except InvertedModeError as exc:
    print("inverted; C* =", exc.critical_coupling)

net = OscillatorNetwork(n=5, coupling=0.2)
x = np.array([0.3, -0.1, 0.4, 0.0, 0.2])
print(full_propagator(net, x, 0.8))
print(full_propagator(net, x, 0.8, form="paper_literal"))
