import math

import numpy as np
import pytest
from scipy.integrate import quad

from fatou_lab.errors import ParameterError, SingularityError
from fatou_lab.grid import fft_convolve, from_callable, make_grid
from fatou_lab.kernels import (KernelSpec, bessel_kernel, bessel_l1_norm,
                               kernel_symbol, poisson_kernel, riesz_constant,
                               riesz_kernel, sampled_kernel)

PAIRS = [(1, 0.25), (1, 0.5), (1, 1.0), (1, 1.5),
         (2, 0.25), (2, 0.5), (2, 1.0), (2, 1.5)]


def test_poisson_kernel_values():
    assert poisson_kernel(1, 1.0, 0.0) == pytest.approx(1 / math.pi)
    assert poisson_kernel(1, 1.0, 1.0) == pytest.approx(1 / (2 * math.pi))
    assert poisson_kernel(2, 0.5, (0.0, 0.0)) == pytest.approx(0.6366198, abs=1e-6)
    with pytest.raises(ParameterError):
        poisson_kernel(1, 0.0, 0.5)


def test_poisson_unit_mass_numeric():
    # oracle fixing c_n: fine-grid quadrature of the kernel mass
    for n in (1, 2):
        if n == 1:
            total, _ = quad(lambda x: poisson_kernel(1, 0.3, x), -np.inf,
                            np.inf, limit=300)
        else:
            total, _ = quad(lambda r: 2 * math.pi * r
                            * poisson_kernel(2, 0.3, (r, 0.0)), 0, np.inf,
                            limit=300)
        assert total == pytest.approx(1.0, abs=1e-4)


def test_bessel_closed_form_n1_alpha2():
    for x in (0.1, 0.7, 2.5):
        expect = 0.5 * math.exp(-x)
        assert bessel_kernel(1, 2.0, x, "series") == pytest.approx(expect, rel=1e-12)
        assert bessel_kernel(1, 2.0, x, "quadrature") == pytest.approx(expect, rel=1e-6)


def test_bessel_riesz_ratio_near_origin():
    for n, a in PAIRS:
        if a >= n:
            continue
        x = (1e-3, 0.0) if n == 2 else 1e-3
        ratio = bessel_kernel(n, a, x, "series") / riesz_kernel(n, a, x)
        assert 0.9 <= ratio <= 1.0


def test_bessel_decay_bound():
    # |G_a(x)| <= C |x|^{-(n-a)} e^{-|x|/2} with a fixed C across the tail
    for n, a in ((2, 1.0), (1, 0.5)):
        xs = np.linspace(4.0, 12.0, 9)
        vals = [bessel_kernel(n, a, (x, 0.0) if n == 2 else x, "series")
                for x in xs]
        bounds = xs ** (-(n - a)) * np.exp(-xs / 2.0)
        assert np.all(np.asarray(vals) <= 2.0 * bounds)


def test_bessel_singularity_and_routes():
    with pytest.raises(SingularityError):
        bessel_kernel(1, 0.5, 0.0)
    with pytest.raises(SingularityError):
        bessel_kernel(2, 2.0, (0.0, 0.0))
    # alpha > n is finite at the origin, equal on both routes
    v1 = bessel_kernel(1, 1.5, 0.0, "quadrature")
    v2 = bessel_kernel(1, 1.5, 0.0, "series")
    assert v1 == pytest.approx(v2, rel=1e-9)
    with pytest.raises(ParameterError):
        bessel_kernel(1, 1.0, 0.5, "mystery")


def test_route_agreement():
    for n, a in PAIRS:
        for r in (1e-3, 0.1, 1.0, 3.0):
            x = (r, 0.0) if n == 2 else r
            q = bessel_kernel(n, a, x, "quadrature")
            s = bessel_kernel(n, a, x, "series")
            assert q == pytest.approx(s, rel=1e-6)


def test_bessel_unit_mass():
    for n, a in PAIRS:
        assert bessel_l1_norm(n, a) == pytest.approx(1.0, abs=1e-4)


def test_riesz_homogeneity():
    for n, a in ((1, 0.5), (2, 1.0), (2, 0.3)):
        x = (0.2, 0.1) if n == 2 else 0.37
        v1 = riesz_kernel(n, a, x)
        x2 = tuple(2 * v for v in x) if n == 2 else 2 * x
        assert riesz_kernel(n, a, x2) == pytest.approx(2.0 ** (-(n - a)) * v1)
    assert riesz_kernel(1, 0.5, 4.0) / riesz_kernel(1, 0.5, 1.0) == pytest.approx(0.5)


def test_riesz_constant_against_quadrature():
    # oracle: the t-integral with the bessel normalization but no e^{-t} cutoff
    for n, a in ((1, 0.5), (2, 1.0)):
        c_alpha = 1.0 / ((4 * math.pi) ** (a / 2) * math.gamma(a / 2))
        for r in (0.5, 1.0):
            val, _ = quad(lambda t, rr=r: math.exp(-math.pi * rr * rr / t)
                          * t ** ((a - n) / 2 - 1), 0, np.inf, limit=300)
            assert c_alpha * val == pytest.approx(
                riesz_kernel(n, a, (r, 0.0) if n == 2 else r), rel=1e-8)


def test_riesz_errors():
    with pytest.raises(SingularityError):
        riesz_kernel(1, 0.5, 0.0)
    with pytest.raises(ParameterError):
        riesz_kernel(1, 1.5, 0.5)


def test_kernel_symbol_values():
    assert kernel_symbol(KernelSpec("bessel", 1, order=2.0), 0.0) == 1.0
    assert kernel_symbol(KernelSpec("poisson", 1, scale=1.0), 1.0) == \
        pytest.approx(math.exp(-2 * math.pi), rel=1e-12)
    assert kernel_symbol(KernelSpec("riesz", 2, order=1.0),
                         (1.0 / (2 * math.pi), 0.0)) == pytest.approx(1.0)
    with pytest.raises(SingularityError):
        kernel_symbol(KernelSpec("riesz", 1, order=0.5), 0.0)


def test_pointwise_domination():
    rng = np.random.Generator(np.random.Philox(key=7))
    for n, a in PAIRS:
        if a >= n:
            continue
        for r in np.exp(rng.uniform(math.log(1e-3), math.log(8.0), size=125)):
            x = (r, 0.0) if n == 2 else r
            g = bessel_kernel(n, a, x, "series")
            assert 0 < g <= riesz_kernel(n, a, x)


def test_symbol_spatial_consistency():
    g = make_grid(1, 12, 4.0)
    for a in (0.5, 1.0, 1.5):
        samp = sampled_kernel(KernelSpec("bessel", 1, order=a), g,
                              normalize=False)
        disc = np.fft.rfft(samp.samples) * g.h
        for k in range(0, 9):
            expect = kernel_symbol(KernelSpec("bessel", 1, order=a),
                                   k / g.extent)
            assert disc[k].real == pytest.approx(expect, abs=1e-4)


def test_symbol_spatial_consistency_2d():
    # the spatial-quadrature route converges at O(h^alpha) in dim 2: the
    # strict low-frequency tolerance holds for alpha = 1.5 at this size,
    # and the error must shrink with refinement for the singular orders
    g7 = make_grid(2, 7, 4.0)
    samp = sampled_kernel(KernelSpec("bessel", 2, order=1.5), g7,
                          normalize=False)
    disc = np.fft.fft2(samp.as_array()) * g7.h ** 2
    for k0 in range(4):
        for k1 in range(4):
            expect = kernel_symbol(KernelSpec("bessel", 2, order=1.5),
                                   (k0 / 4.0, k1 / 4.0))
            assert disc[k0, k1].real == pytest.approx(expect, abs=1e-4)
    worsts = []
    for lev in (6, 7):
        g = make_grid(2, lev, 4.0)
        samp = sampled_kernel(KernelSpec("bessel", 2, order=0.5), g,
                              normalize=False)
        disc = np.fft.fft2(samp.as_array()) * g.h ** 2
        worsts.append(max(
            abs(disc[k0, k1].real
                - kernel_symbol(KernelSpec("bessel", 2, order=0.5),
                                (k0 / 4.0, k1 / 4.0)))
            for k0 in range(4) for k1 in range(4)))
    assert worsts[1] < worsts[0]
    assert worsts[1] < 6e-4


def test_poisson_semigroup_on_eigenfunction():
    g = make_grid(1, 10, 1.0)
    f = from_callable(g, lambda x: np.cos(2 * np.pi * x))
    for t in (0.01, 0.1, 0.5):
        pk = sampled_kernel(KernelSpec("poisson", 1, scale=t), g)
        out = fft_convolve(f, pk)
        expect = math.exp(-2 * math.pi * t) * f.samples
        assert np.abs(out.samples - expect).max() <= 1e-6


def test_kernel_spec_validation():
    with pytest.raises(ParameterError):
        KernelSpec("heat", 1)
    with pytest.raises(ParameterError):
        KernelSpec("bessel", 1, order=0.0)
    with pytest.raises(ParameterError):
        KernelSpec("riesz", 1, order=1.0)
    with pytest.raises(ParameterError):
        KernelSpec("poisson", 2, scale=0.0)
