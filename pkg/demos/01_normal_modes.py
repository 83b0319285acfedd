"""
Normal modes of an oscillator star-coupled to a bath.

Two nondegenerate eigenvalues and an (N-2)-fold block at -C; the closed
form is checked against a dense QR eigensolve.
"""
import numpy as np

from oscibath import OscillatorNetwork, closed_form_matches_bruteforce, mode_spectrum
from oscibath.network import table_row

for n in range(2, 11):
    lp, lm = table_row(n)
    print(f"N={n:2d}  lambda+ = {lp:9.6f}  lambda- = {lm:9.6f}")

spec = mode_spectrum(OscillatorNetwork(n=6, coupling=0.8))
print(spec.eigenvalues)
print(np.round(spec.eigenvectors, 3))  # columns: degenerate (0, -1, .., 1, ..) vectors, then the two nondegenerate ones

# closed form vs brute force for a large bath
report = closed_form_matches_bruteforce(OscillatorNetwork(n=64, coupling=3.0))
print(report.check_name, report.abs_error, report.passed)
