import numpy as np
import pytest

from fatou_lab import _kernels


def _brute_extreme(v, k, fn):
    n = v.size
    return np.array([fn(v[(i + d) % n] for d in range(-k, k + 1))
                     for i in range(n)])


@pytest.fixture(scope="module")
def backends():
    return _kernels.backends()


def test_backend_reported():
    assert _kernels.BACKEND in ("compiled", "numpy")


def test_circ_extremes_match_brute_force(backends, rng):
    v = rng.normal(size=173)
    for k in (0, 1, 5, 40, 90):
        expect_max = _brute_extreme(v, k, max) if 2 * k + 1 < 173 else \
            np.full(173, v.max())
        expect_min = _brute_extreme(v, k, min) if 2 * k + 1 < 173 else \
            np.full(173, v.min())
        for name, mod in backends.items():
            np.testing.assert_array_equal(mod.circ_max_1d(v, k), expect_max)
            np.testing.assert_array_equal(mod.circ_min_1d(v, k), expect_min)


def test_circ_sum_matches_brute_force(backends, rng):
    v = rng.normal(size=97)
    for k in (0, 3, 11, 48, 60):
        if 2 * k + 1 >= 97:
            expect = np.full(97, v.sum())
        else:
            expect = np.array([sum(v[(i + d) % 97] for d in range(-k, k + 1))
                               for i in range(97)])
        for name, mod in backends.items():
            np.testing.assert_allclose(mod.circ_sum_1d(v, k), expect,
                                       atol=1e-10)


def test_slobodeckij_agreement(backends, rng):
    v = rng.normal(size=64)
    v2 = rng.normal(size=(8, 8))
    mask = (rng.uniform(size=64) > 0.3).astype(float)
    results = {}
    for name, mod in backends.items():
        results[name] = (
            mod.slobodeckij_1d(v, 1 / 64, 1.0, 0.4, 2.0),
            mod.slobodeckij_1d(v, 1 / 64, 1.0, 0.4, 1.7, mask),
            mod.slobodeckij_2d(v2, 1 / 8, 1.0, 0.6, 2.0),
        )
    vals = list(results.values())
    for got in vals[1:]:
        for a, b in zip(vals[0], got):
            assert a == pytest.approx(b, rel=1e-12)


def test_slobodeckij_brute_force_oracle(backends, rng):
    v = rng.normal(size=24)
    h, sigma, p = 1 / 24, 0.5, 2.0
    total = 0.0
    for i in range(24):
        for j in range(24):
            if i == j:
                continue
            d = abs(i - j)
            dist = h * min(d, 24 - d)
            total += abs(v[i] - v[j]) ** p / dist ** (1 + sigma * p)
    total *= h * h
    for name, mod in backends.items():
        assert mod.slobodeckij_1d(v, h, 1.0, sigma, p) == pytest.approx(
            total, rel=1e-10)


def test_bench_runs_and_reports(capsys):
    from fatou_lab import bench

    rows = bench.run(sizes=(256,))
    assert len(rows) == 4
    out = capsys.readouterr().out
    assert "backend in use" in out


def test_min_dist_agreement(backends, rng):
    phi = rng.normal(size=128) * 0.2
    qt = rng.uniform(0.5, 1.5, size=300)
    qx = rng.uniform(0.0, 1.0, size=300)
    results = [mod.min_dist_graph_1d(qt, qx, phi, 1 / 128, 1.0)
               for mod in backends.values()]
    for got in results[1:]:
        np.testing.assert_allclose(results[0], got, atol=1e-12)
    # brute force on a few queries
    xs = np.arange(128) / 128
    for i in range(10):
        dx = np.abs(qx[i] - xs)
        dx = np.minimum(dx, 1.0 - dx)
        expect = np.sqrt(np.min(dx ** 2 + (qt[i] - phi) ** 2))
        assert results[0][i] == pytest.approx(expect, rel=1e-12)
