"""Verification suites: every closed form against an independent reference.

Each suite returns a list of :class:`~oscibath.report.VerificationReport` in
a fixed order. Tolerances default to ``DEFAULT_TOLERANCES`` and can be
overridden per key.
"""

import math

import numpy as np

from . import kernels, network, white_noise
from .crosscheck import kernel_propagate_1d, kernel_propagate_2d
from .errors import DomainError
from .oracles import evolution, gaussian
from .oracles.eigen import dense_eigensolve
from .report import VerificationReport, compare, timed

__all__ = ["DEFAULT_TOLERANCES", "SUITES", "run_suite", "fit_order"]

DEFAULT_TOLERANCES = {
    "table1": 1e-10,
    "general_n": 1e-9,
    "residual": 1e-10,
    "trace": 1e-12,
    "fredholm_det": 1e-3,
    "inverse_qform": 2e-3,
    "direct_qform": 1e-3,
    "wn_kernel": 1e-2,
    "time_sliced": 1e-4,
    "order": 0.3,
    "semigroup": 1e-10,
    "literal_semigroup_gap": 0.1,
    "decoupling": 1e-12,
    "full_vs_nd": 1e-10,
    "pde_1d_free": 1e-4,
    "pde_1d": 1e-3,
    "pde_2d": 5e-3,
    "mc_sigma": 3.0,
}


def fit_order(resolutions, errors):
    """Slope of ``log(error)`` against ``log(1/resolution)``; positive for convergence."""
    slope = np.polyfit(np.log(np.asarray(resolutions, float)), np.log(np.asarray(errors, float)), 1)[0]
    return -float(slope)


def _timed_report(fn):
    with timed() as ms:
        rep = fn()
    rep.runtime_ms = ms[0]
    return rep


def _bool_report(name, passed, value, target, detail=""):
    err = abs(value - target)
    return VerificationReport(name, target, value, err, err / abs(target) if target else err, bool(passed), detail=detail)


# spectrum ------------------------------------------------------------------


def spectrum_suite(tol, **_):
    out = []
    for n in range(2, 11):
        def row(n=n):
            net = network.OscillatorNetwork(n=n, coupling=1.0)
            brute = np.sort(dense_eigensolve(network.build_characteristic_matrix(net)).real)
            lp, lm = network.table_row(n)
            tabulated = np.sort(np.r_[[-1.0] * (n - 2), lp, lm])
            err = float(np.max(np.abs(brute - tabulated)))
            spec = network.mode_spectrum(net)
            exact_block = spec.degenerate_value == -1.0 and spec.degenerate_multiplicity == n - 2
            return VerificationReport(
                f"table1_N{n}", lp, float(brute[-1]), err, err / abs(lp), err <= tol["table1"] and exact_block,
                detail=f"lambda+- = {lp:.10f}, {lm:.10f}",
            )
        out.append(_timed_report(row))

    def general():
        worst = 0.0
        for c in (0.5, 1.0, 3.0):
            for n in range(2, 65):
                rep = network.closed_form_matches_bruteforce(network.OscillatorNetwork(n=n, coupling=c), tol["general_n"])
                worst = max(worst, rep.abs_error / abs(c))
        return VerificationReport("general_n_closed_form", 0.0, worst, worst, worst, worst <= tol["general_n"],
                                  detail="max over N=2..64, C in {0.5,1,3} of |closed - brute| / |C|")
    out.append(_timed_report(general))

    def scaling():
        base = network.mode_spectrum(network.OscillatorNetwork(n=10, coupling=1.0)).eigenvalues
        scaled = network.mode_spectrum(network.OscillatorNetwork(n=10, coupling=2.0)).eigenvalues
        err = float(np.max(np.abs(scaled - 2 * base)))
        return VerificationReport("linear_scaling_C", 0.0, err, err, err, err == 0.0)
    out.append(_timed_report(scaling))

    def residuals():
        worst = 0.0
        for n in (2, 3, 4, 10, 64):
            for c in (-2.0, 0.5, 1.0, 3.0):
                net = network.OscillatorNetwork(n=n, coupling=c)
                m = network.build_characteristic_matrix(net)
                spec = network.mode_spectrum(net)
                for vec, lam in zip(spec.eigenvectors.T, spec.eigenvalues):
                    worst = max(worst, np.linalg.norm(m @ vec - lam * vec) / np.linalg.norm(vec))
        return VerificationReport("eigenvector_residual", 0.0, worst, worst, worst, worst <= tol["residual"])
    out.append(_timed_report(residuals))

    def trace():
        worst = 0.0
        for n in range(2, 65):
            for c in (-2.0, 0.5, 1.0, 3.0):
                total = network.mode_spectrum(network.OscillatorNetwork(n=n, coupling=c)).eigenvalues.sum()
                worst = max(worst, abs(total - c) / (n * abs(c)))
        return VerificationReport("trace_identity", 0.0, worst, worst, worst, worst <= tol["trace"],
                                  detail="|sum(lambda) - C| / (n |C|)")
    out.append(_timed_report(trace))
    return out


# white noise ---------------------------------------------------------------


def wn_suite(tol, steps=2000, seed=0, hbar=1.0, **_):
    out = []
    wt = 1.0

    def det():
        g = white_noise.WhiteNoiseGrid(1.0, steps)
        return compare("fredholm_det_wt1", math.cos(wt), white_noise.fredholm_det(g, wt, hbar), tol["fredholm_det"])
    out.append(_timed_report(det))

    def monotone():
        ladder = [250, 500, 1000, 2000]
        errs = [abs(white_noise.fredholm_det(white_noise.WhiteNoiseGrid(1.0, s), wt, hbar) - math.cos(wt)) for s in ladder]
        order = fit_order(ladder, errs)
        ok = all(b < a for a, b in zip(errs, errs[1:])) and order >= 1
        return _bool_report("fredholm_det_convergence", ok, order, 2.0, detail=f"errors {errs}; fitted order {order:.3f}")
    out.append(_timed_report(monotone))

    def qform():
        g = white_noise.WhiteNoiseGrid(1.0, steps)
        return compare("inverse_qform_wt1", math.tan(wt) / wt, white_noise.inverse_quadratic_form(g, wt, hbar),
                       tol["inverse_qform"])
    out.append(_timed_report(qform))

    def direct():
        g = white_noise.WhiteNoiseGrid(1.0, steps)
        value = white_noise.direct_quadratic_form(g, wt, hbar)
        rep = compare("direct_qform_discriminator", 1 - wt ** 2 / 3, value, tol["direct_qform"], absolute=True)
        rep.detail = f"tan(wt)/wt = {math.tan(wt) / wt:.6f} differs from the direct form"
        return rep
    out.append(_timed_report(direct))

    for x in (0.0, 1.0):
        def assemble(x=x):
            g = white_noise.WhiteNoiseGrid(1.0, steps)
            value = white_noise.assemble_sho_kernel_wn(g, 1.0, 1.0, hbar, x)
            target = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 1.0, hbar), x)
            return compare(f"wn_kernel_t1_x{x:g}", target, value, tol["wn_kernel"])
        out.append(_timed_report(assemble))

    def literal_discriminator():
        g = white_noise.WhiteNoiseGrid(4.0, steps)
        value = white_noise.assemble_sho_kernel_wn(g, 1.0, 1.0, hbar, 0.0)
        std = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 4.0, hbar), 0.0)
        lit = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 4.0, hbar, "paper_literal"), 0.0)
        ratio = abs(value) / abs(lit)
        ok = abs(value - std) / abs(std) <= tol["wn_kernel"] and abs(ratio - 2.0) <= 2.0 * tol["wn_kernel"]
        return _bool_report("wn_kernel_t4_standard_not_literal", ok, ratio, 2.0,
                            detail=f"|K_wn| / |K_literal| = {ratio:.6f}; |K_wn - K_std| / |K_std| = {abs(value - std) / abs(std):.3g}")
    out.append(_timed_report(literal_discriminator))

    def mc():
        g = white_noise.WhiteNoiseGrid(1.0, 64)
        est = white_noise.characteristic_functional_mc(g, lambda t: np.sin(np.pi * t), 100_000, seed)
        target = math.exp(-0.25)
        rep = compare("characteristic_functional_mc", complex(target), est.value, math.inf)
        rep.passed = est.within(target, tol["mc_sigma"])
        rep.detail = f"stderr {est.stderr:.3g}; seed {seed}"
        return rep
    out.append(_timed_report(mc))
    return out


# kernels -------------------------------------------------------------------


def kernels_suite(tol, seed=0, hbar=1.0, **_):
    out = []
    rng = np.random.default_rng(seed)

    def sliced():
        target = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 1.0, hbar), 1.0)
        value = gaussian.time_sliced_propagator(1.0, 1.0, hbar, 1.0, 1.0, 0.0, 10_000)
        return compare("time_sliced_1e4", target, value, tol["time_sliced"])
    out.append(_timed_report(sliced))

    def sliced_order():
        target = kernels.sho_kernel(kernels.KernelSpec(1.0, 1.0, 1.0, hbar), 1.0)
        ladder = [50, 100, 200, 400, 800]
        errs = [abs(gaussian.time_sliced_propagator(1.0, 1.0, hbar, 1.0, 1.0, 0.0, s) - target) for s in ladder]
        order = fit_order(ladder, errs)
        return _bool_report("time_sliced_order", abs(order - 2) <= tol["order"], order, 2.0)
    out.append(_timed_report(sliced_order))

    def semigroup():
        worst = 0.0
        for _ in range(20):
            m = rng.uniform(0.5, 2.0)
            w = rng.uniform(0.1, 2.0)
            total = rng.uniform(0.1, 0.95) * math.pi / w
            t1 = total * rng.uniform(0.2, 0.8)
            x, x0 = rng.uniform(-2, 2, size=2)
            q = lambda t: kernels.quadratic_form(kernels.KernelSpec(m, w, t, hbar))
            chk = gaussian.compose_kernels(q(total - t1), q(t1), q(total), x, x0)
            worst = max(worst, chk.rel_error)
        return VerificationReport("semigroup_standard", 0.0, worst, worst, worst, worst <= tol["semigroup"])
    out.append(_timed_report(semigroup))

    def literal_semigroup():
        q = lambda t: kernels.quadratic_form(kernels.KernelSpec(1.0, 1.0, t, hbar, "paper_literal"))
        chk = gaussian.compose_kernels(q(0.5), q(0.5), q(1.0), 1.0, 0.0)
        return _bool_report("semigroup_literal_violated", chk.rel_error > tol["literal_semigroup_gap"], chk.rel_error, 1.0,
                            detail="paper_literal prefactor breaks composition")
    out.append(_timed_report(literal_semigroup))

    def decoupling():
        worst = 0.0
        for n in (4, 5, 8):
            net = network.OscillatorNetwork(n=n, mass=1.0, omega=1.0, coupling=0.0, hbar=hbar)
            spec = kernels.KernelSpec(1.0, 1.0, 0.9, hbar)
            for _ in range(5):
                x = rng.uniform(-2, 2, size=n)
                full = kernels.full_propagator(net, x, 0.9)
                prod = np.prod([kernels.sho_kernel(spec, xi) for xi in x])
                worst = max(worst, abs(full - prod) / abs(prod))
        return VerificationReport("decoupling_limit", 0.0, worst, worst, worst, worst <= tol["decoupling"])
    out.append(_timed_report(decoupling))

    def full_vs_nd():
        worst = 0.0
        for n in (4, 6):
            net = network.OscillatorNetwork(n=n, mass=1.2, omega=1.1, coupling=0.3, hbar=hbar)
            hess = gaussian.star_hessian(n, net.mass, net.omega, net.coupling)
            for _ in range(3):
                x = rng.uniform(-1.5, 1.5, size=n)
                a = kernels.full_propagator(net, x, 0.6)
                b = gaussian.quadratic_propagator_nd(net.mass, hess, hbar, 0.6, x)
                worst = max(worst, abs(a - b) / abs(b))
        return VerificationReport("full_standard_vs_nd_exact", 0.0, worst, worst, worst, worst <= tol["full_vs_nd"])
    out.append(_timed_report(full_vs_nd))
    return out


# pde -----------------------------------------------------------------------


def pde_suite(tol, hbar=1.0, **_):
    out = []
    grid = evolution.EvolutionGrid()

    def free():
        packet = evolution.GaussianPacket((0.0,), (1.0,), 1.0)
        field = evolution.evolve_wavepacket(evolution.Oscillator1D(1.0, 0.0, hbar), packet, grid, 1.0)
        ref = kernel_propagate_1d(lambda x, x0: kernels.free_kernel(1.0, hbar, 1.0, x, x0), packet.sample(grid), grid.axis)
        err = evolution.l2_distance(field.psi, ref, grid.spacing)
        return VerificationReport("pde_1d_free", 0.0, err, err, err, err <= tol["pde_1d_free"])
    out.append(_timed_report(free))

    def sho():
        packet = evolution.GaussianPacket((1.0,), (0.5,), 1.0)
        field = evolution.evolve_wavepacket(evolution.Oscillator1D(1.0, 1.0, hbar), packet, grid, 0.5)
        spec = kernels.KernelSpec(1.0, 1.0, 0.5, hbar)
        ref = kernel_propagate_1d(lambda x, x0: kernels.sho_kernel(spec, x, x0), packet.sample(grid), grid.axis)
        err = evolution.l2_distance(field.psi, ref, grid.spacing)
        return VerificationReport("pde_1d_sho_wt0.5", 0.0, err, err, err, err <= tol["pde_1d"])
    out.append(_timed_report(sho))

    def pair():
        c, t = 0.3, 0.7
        grid2 = evolution.EvolutionGrid(points=128)
        spec = kernels.PairSpec(n=4, mass=1.0, omega=1.0, coupling=c, time=t, hbar=hbar)
        ham = evolution.CoupledPair2D(spec.m1, spec.m2, 1.0, spec.pair_coupling, hbar)
        packet = evolution.GaussianPacket((0.5, -0.2), (0.0, 0.0), 1.0)
        field = evolution.evolve_wavepacket(ham, packet, grid2, t)
        ref = kernel_propagate_2d(
            lambda a, b, a0, b0: kernels.pair_kernel(spec, a, b, a0, b0),
            packet.amplitude, grid2.axis, np.linspace(-9, 9, 721),
        )
        err = evolution.l2_distance(field.psi, ref, grid2.spacing, 2)
        return VerificationReport("pde_2d_pair_N4_C0.3", 0.0, err, err, err, err <= tol["pde_2d"])
    out.append(_timed_report(pair))
    return out


SUITES = {
    "spectrum": spectrum_suite,
    "wn": wn_suite,
    "kernels": kernels_suite,
    "pde": pde_suite,
}


def run_suite(name, tolerances=None, **options):
    """Run one suite (or ``"all"``) and return its reports in declared order."""
    tol = dict(DEFAULT_TOLERANCES)
    for key, value in (tolerances or {}).items():
        if key not in tol:
            raise DomainError(f"unknown tolerance key {key!r}")
        tol[key] = float(value)
    names = list(SUITES) if name == "all" else [name]
    reports = []
    for suite in names:
        if suite not in SUITES:
            raise DomainError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
        reports.extend(SUITES[suite](tol, **options))
    return reports
