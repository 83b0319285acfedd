"""
Independent references: time slicing, exact composition, and a
Crank-Nicolson wavepacket compared with kernel propagation.
"""
import numpy as np

from oscibath import KernelSpec, sho_kernel
from oscibath.crosscheck import kernel_propagate_1d
from oscibath.kernels import quadratic_form
from oscibath.oracles import evolution as ev
from oscibath.oracles.gaussian import compose_kernels, time_sliced_propagator

target = sho_kernel(KernelSpec(1.0, 1.0, 1.0), 1.0)
for slices in (50, 200, 800, 10_000):
    approx = time_sliced_propagator(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, slices)
    print(slices, abs(approx - target) / abs(target))

q = lambda t, form="standard": quadratic_form(KernelSpec(1.0, 1.0, t, form=form))
print(compose_kernels(q(0.4), q(0.6), q(1.0), 0.7, -0.2).rel_error)
print(compose_kernels(q(0.5, "paper_literal"), q(0.5, "paper_literal"), q(1.0, "paper_literal"), 1.0, 0.0).rel_error)

grid = ev.EvolutionGrid()
packet = ev.GaussianPacket((1.0,), (0.5,), 1.0)
field = ev.evolve_wavepacket(ev.Oscillator1D(), packet, grid, 0.5)
spec = KernelSpec(1.0, 1.0, 0.5)
ref = kernel_propagate_1d(lambda x, y: sho_kernel(spec, x, y), packet.sample(grid), grid.axis)
print("L2", ev.l2_distance(field.psi, ref, grid.spacing), "norm drift", field.norm_drift)
np.savetxt("/tmp/wavefield.csv", field.rows(), delimiter=",", header="x,re,im", fmt="%.17g")
