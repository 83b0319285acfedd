"""
White-noise route to the oscillator kernel: a Fredholm determinant and one
inverse quadratic form, both on a midpoint grid.
"""
import math

import numpy as np

from oscibath import KernelSpec, WhiteNoiseGrid, assemble_sho_kernel_wn, fredholm_det, inverse_quadratic_form, sho_kernel
from oscibath.white_noise import characteristic_functional_mc, direct_quadratic_form

for steps in (250, 500, 1000, 2000):
    g = WhiteNoiseGrid(1.0, steps)
    det = fredholm_det(g, 1.0)
    q = inverse_quadratic_form(g, 1.0)
    print(f"{steps:5d}  det-cos1 = {det - math.cos(1):.3e}  q-tan1 = {q - math.tan(1):.3e}")

# without the inverse the form is 1 - (wt)^2/3, not tan(wt)/wt
print(direct_quadratic_form(WhiteNoiseGrid(1.0, 2000), 1.0))

for t in (1.0, 4.0):
    wn = assemble_sho_kernel_wn(WhiteNoiseGrid(t, 2000), 1.0, 1.0, 1.0, 0.5)
    print(t, wn, sho_kernel(KernelSpec(1.0, 1.0, t), 0.5))

est = characteristic_functional_mc(WhiteNoiseGrid(1.0, 64), lambda tau: np.sin(math.pi * tau), 100_000, seed=42)
print(est.value, "+-", est.stderr, "target", math.exp(-0.25))
