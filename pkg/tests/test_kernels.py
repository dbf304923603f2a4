import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad
from scipy.signal import fftconvolve

from fellerfeynman import TransitionKernel, cauchy_density, gaussian_density, sample_increment, stable_density
from fellerfeynman.kernels import (
    StableTable,
    sample_standard_stable,
    stable_table,
    stable_tail_mass,
)
from fellerfeynman.symbols import SymbolError

ALPHAS = [0.5, 1.0, 1.5, 2.0]
TIMES = [0.1, 1.0, 4.0]


class TestGaussianDensity:
    def test_peak_value(self):
        assert gaussian_density(1.0, 0.0) == pytest.approx(0.3989422804014327, abs=1e-9)

    def test_tails_vanish(self):
        assert gaussian_density(1.0, 50.0) == 0.0
        assert gaussian_density(1.0, -50.0) == 0.0

    def test_symmetry(self):
        assert gaussian_density(0.5, 1.0) == gaussian_density(0.5, -1.0)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            gaussian_density(0.0, 1.0)
        with pytest.raises(ValueError):
            gaussian_density(-1.0, 1.0)


class TestCauchyDensity:
    def test_peak_is_one_over_pi(self):
        assert cauchy_density(1.0, 0.0) == pytest.approx(1.0 / np.pi, abs=1e-12)

    @pytest.mark.parametrize("t", TIMES)
    def test_normalization_on_wide_window(self, t):
        val, _ = quad(lambda x: cauchy_density(t, x), -1e4 * t, 1e4 * t, limit=200)
        assert val == pytest.approx(1.0, abs=1e-4)

    def test_self_convolution_is_exact_semigroup(self):
        x = np.arange(-100.0, 100.0 + 1e-9, 0.01)
        h = 0.01
        p1 = cauchy_density(1.0, x)
        conv = fftconvolve(p1, p1, mode="same") * h
        inner = np.abs(x) <= 50
        assert np.max(np.abs(conv - cauchy_density(2.0, x))[inner]) < 1e-6

    @pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 5.0])
    def test_characteristic_function_is_exponential(self, p):
        # (2 pi)^{1/2} * forward Fourier of p_t == e^{-t|p|}
        t = 1.0
        core, _ = quad(lambda x: cauchy_density(t, x) * 2.0, 0.0, 2000.0, weight="cos", wvar=p, limit=4000)
        # integration-by-parts bound on the oscillatory tail beyond 2000
        tail_bound = cauchy_density(t, 2000.0) * 2.0 / p
        assert abs(core - np.exp(-t * p)) < 1e-6 + tail_bound

    def test_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            cauchy_density(0.0, 1.0)


class TestStableDensity:
    def test_alpha2_reduces_to_gaussian(self):
        x = np.linspace(0.0, 10.0, 301)
        # cf e^{-t p^2} is a Gaussian with variance 2t
        assert np.max(np.abs(stable_density(2.0, 1.0, x) - gaussian_density(2.0, x))) < 1e-6

    def test_alpha1_reduces_to_cauchy(self):
        assert stable_density(1.0, 1.0, 0.5) == pytest.approx(cauchy_density(1.0, 0.5), abs=1e-6)
        x = np.linspace(0.0, 10.0, 301)
        assert np.max(np.abs(stable_density(1.0, 1.0, x) - cauchy_density(1.0, x))) < 1e-6

    def test_alpha_half_normalization(self):
        assert stable_table(0.5).total_mass() == pytest.approx(1.0, abs=1e-3)

    @pytest.mark.parametrize("alpha", ALPHAS)
    @pytest.mark.parametrize("t", TIMES)
    def test_normalization_positivity_symmetry(self, alpha, t):
        tab = stable_table(alpha)
        scale = t ** (1.0 / alpha)
        x = np.linspace(0.0, tab.x_tab * scale, 200001)
        dens = stable_density(alpha, t, x)
        assert np.all(dens >= 0)
        np.testing.assert_allclose(stable_density(alpha, t, -x), dens, rtol=0, atol=1e-15)
        mass = 2.0 * np.trapezoid(dens, x) + 2.0 * stable_tail_mass(alpha, tab.x_tab)
        tol = 1e-3 if alpha == 0.5 else 1e-4
        assert mass == pytest.approx(1.0, abs=tol)

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_monotone_decreasing_in_abs_x(self, alpha):
        x = np.linspace(0.0, 30.0, 3001)
        dens = stable_density(alpha, 1.0, x)
        assert np.all(np.diff(dens) <= 1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    @pytest.mark.parametrize("t", TIMES)
    def test_chapman_kolmogorov_self_convolution(self, alpha, t):
        scale = t ** (1.0 / alpha)
        h = 0.01 * scale
        x = np.arange(-30000, 30001) * h
        pt = stable_density(alpha, t, x)
        conv = fftconvolve(pt, pt, mode="same") * h
        inner = np.abs(x) <= 5.0 * scale
        tol = 1e-3 if alpha == 0.5 else 1e-5
        assert np.max(np.abs(conv - stable_density(alpha, 2.0 * t, x))[inner]) < tol

    @pytest.mark.parametrize("alpha", ALPHAS)
    def test_fourier_consistency(self, alpha):
        """Forward transform of the tabulated density recovers e^{-|p|^alpha}."""
        tab = stable_table(alpha)
        x = tab.x_nodes
        core_profile = np.concatenate([tab.table[tab.n // 2 :], tab.table[:1]])
        # p = 0: total mass (table trapezoid + analytic tail)
        assert abs(tab.total_mass() - 1.0) < 1e-5
        for p in [0.5, 1.0, 2.0, 5.0, 10.0]:
            core = 2.0 * np.trapezoid(np.cos(p * x) * core_profile, x)
            tail, _ = quad(
                lambda y: 2.0 * float(np.atleast_1d(stable_density(alpha, 1.0, y))[0]),
                tab.x_tab,
                5e4,
                weight="cos",
                wvar=p,
                limit=4000,
            )
            residual_bound = 2.0 * float(np.atleast_1d(stable_density(alpha, 1.0, 5e4))[0]) / p
            err = abs(core + tail - np.exp(-(p**alpha)))
            assert err < 1e-5 + residual_bound

    def test_rejects_bad_parameters(self):
        with pytest.raises(SymbolError):
            stable_density(2.5, 1.0, 0.0)
        with pytest.raises(ValueError):
            stable_density(1.5, 0.0, 0.0)
        with pytest.raises(ValueError):
            stable_density(1.5, -1.0, 0.0)


class TestStableTableCache:
    def test_cache_roundtrip(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FELLER_CACHE_DIR", str(tmp_path))
        first = StableTable(0.75, n=4096)
        files = list(tmp_path.glob("stable_alpha*.bin"))
        assert len(files) == 1
        second = StableTable(0.75, n=4096)
        np.testing.assert_array_equal(first.table, second.table)

    def test_corrupt_cache_is_rebuilt(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FELLER_CACHE_DIR", str(tmp_path))
        first = StableTable(0.75, n=4096)
        path = list(tmp_path.glob("stable_alpha*.bin"))[0]
        path.write_bytes(b"junk")
        rebuilt = StableTable(0.75, n=4096)
        np.testing.assert_array_equal(first.table, rebuilt.table)


class TestSampling:
    def test_gaussian_moments(self):
        rng = np.random.default_rng(11)
        s = TransitionKernel("gaussian").sample(1.0, 1_000_000, rng)
        assert abs(s.mean()) < 0.004
        assert abs(s.var() - 1.0) < 0.01

    def test_cauchy_median_and_cdf(self):
        rng = np.random.default_rng(12)
        s = TransitionKernel("cauchy").sample(1.0, 1_000_000, rng)
        assert abs(np.median(s)) < 0.005
        assert abs(np.mean(s <= 1.0) - 0.75) < 0.005

    def test_scaling_law_alpha2(self):
        rng = np.random.default_rng(13)
        kern = TransitionKernel("stable", alpha=2.0)
        a = kern.sample(4.0, 100_000, rng)
        b = 2.0 * kern.sample(1.0, 100_000, rng)
        assert stats.ks_2samp(a, b).pvalue > 0.01

    def test_cms_alpha1_is_cauchy(self):
        rng = np.random.default_rng(14)
        s = sample_standard_stable(1.0, 100_000, rng)
        assert stats.kstest(s, stats.cauchy.cdf).pvalue > 0.01

    def test_cms_alpha2_is_gaussian(self):
        rng = np.random.default_rng(15)
        s = sample_standard_stable(2.0, 100_000, rng)
        assert stats.kstest(s, lambda x: stats.norm.cdf(x, scale=np.sqrt(2.0))).pvalue > 0.01

    def test_cms_generic_alpha_matches_tabulated_density(self):
        rng = np.random.default_rng(16)
        alpha = 1.5
        s = sample_standard_stable(alpha, 100_000, rng)
        from scipy.integrate import cumulative_trapezoid

        xg = np.linspace(-200.0, 200.0, 1 << 17)
        cdf_vals = cumulative_trapezoid(stable_density(alpha, 1.0, xg), xg, initial=0.0)
        cdf_vals += stable_tail_mass(alpha, 200.0)
        assert stats.kstest(s, lambda x: np.interp(x, xg, np.clip(cdf_vals, 0, 1))).pvalue > 0.01

    def test_sample_increment_scalar(self):
        rng = np.random.default_rng(17)
        v = sample_increment("gaussian", 1.0, 2.0, rng)
        assert isinstance(v, float) and np.isfinite(v)

    def test_sample_rejects_nonpositive_t(self):
        with pytest.raises(ValueError):
            TransitionKernel("gaussian").sample(0.0, 10, np.random.default_rng(0))

    def test_unknown_family_rejected(self):
        with pytest.raises(SymbolError):
            TransitionKernel("levy-flight")
