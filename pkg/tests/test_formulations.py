import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from psocoeff.analysis import converges
from psocoeff.formulations import (
    ClassicalParams,
    ConstrictedParams,
    ConversionError,
    GeneralParams,
    classical_to_general,
    constricted_to_general,
    convert,
    formulation_from_dict,
    formulation_to_dict,
    general_to_classical,
    sample_classical,
    sample_general,
)


def constriction_oracle(aw, kappa, digits=50):
    with mpmath.workdps(digits):
        aw, kappa = mpmath.mpf(aw), mpmath.mpf(kappa)
        if aw >= 4:
            w = 2 * kappa / (aw - 2 + mpmath.sqrt(aw**2 - 4 * aw))
        else:
            w = kappa
        return float(w), float(w * aw)


class TestClassicalSampling:
    def test_degenerate(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            s = sample_classical(ClassicalParams(0.7, 0.0, 0.0), rng)
            assert s.phi_i == s.phi_s == s.phi == 0.0

    def test_mean_and_bound(self):
        s = sample_classical(ClassicalParams(0.7, 2.0, 2.0), np.random.default_rng(1), size=100_000)
        assert 1.96 <= s.phi.mean() <= 2.04
        assert s.phi.min() >= 0 and s.phi.max() <= 4.0

    @given(st.floats(0, 5), st.floats(0, 5), st.integers(0, 2**32))
    def test_bound_any_params(self, iw, sw, seed):
        s = sample_classical(ClassicalParams(0.5, iw, sw), np.random.default_rng(seed), size=200)
        assert np.all(s.phi >= 0) and np.all(s.phi <= iw + sw)

    def test_scalar_draw_is_float(self):
        s = sample_classical(ClassicalParams(0.7, 1.0, 1.0), np.random.default_rng(3))
        assert isinstance(s.phi_i, float) and isinstance(s.phi_s, float)

    def test_rejects_negative_weights(self):
        with pytest.raises(ValueError):
            ClassicalParams(0.7, -1.0, 1.0)


class TestGeneralSampling:
    def test_zero_width_range(self):
        rng = np.random.default_rng(0)
        p = GeneralParams(0.7, 1.7, 1.7, ip=0.5)
        s = sample_general(p, rng, size=1000)
        assert np.all(s.phi == 1.7)
        assert np.all(s.phi_i == 0.5 * 1.7) and np.all(s.phi_s == 0.5 * 1.7)

    def test_zero_width_uneven_split(self):
        s = sample_general(GeneralParams(0.7, 2.0, 2.0, ip=0.3), np.random.default_rng(0), size=10)
        assert np.all(s.phi_i == 0.3 * 2.0)
        np.testing.assert_allclose(s.phi, 2.0, rtol=0, atol=4e-16)

    def test_all_social(self):
        s = sample_general(GeneralParams(0.7, 0.5, 3.0, ip=0.0), np.random.default_rng(0), size=1000)
        assert np.all(s.phi_i == 0.0)
        assert np.all(s.phi_s >= 0.5) and np.all(s.phi_s <= 3.0)

    def test_mean_and_range(self):
        s = sample_general(GeneralParams(0.7, 1.0, 3.0, ip=0.5), np.random.default_rng(11), size=100_000)
        assert s.phi.min() >= 1.0 and s.phi.max() <= 3.0
        assert 1.98 <= s.phi.mean() <= 2.02

    @given(
        st.floats(0, 3),
        st.floats(0, 3),
        st.floats(0, 0.999),
        st.integers(0, 2**32),
    )
    def test_range_containment(self, lo, width, ip, seed):
        p = GeneralParams(0.7, lo, lo + width, ip=ip)
        s = sample_general(p, np.random.default_rng(seed), size=500)
        # exact for ip = 0.5; otherwise the sum ip*a + (1-ip)*b may round by an ulp
        slack = 0.0 if ip == 0.5 else 4 * np.spacing(p.phi_max)
        assert np.all(s.phi >= p.phi_min - slack) and np.all(s.phi <= p.phi_max + slack)

    def test_determinism(self):
        p = GeneralParams(0.7, 0.0, 3.4)
        a = sample_general(p, np.random.default_rng(42), size=(30, 10))
        b = sample_general(p, np.random.default_rng(42), size=(30, 10))
        np.testing.assert_array_equal(a.phi_i, b.phi_i)
        np.testing.assert_array_equal(a.phi_s, b.phi_s)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"w": 0.7, "phi_min": -0.1, "phi_max": 1.0},
            {"w": 0.7, "phi_min": 2.0, "phi_max": 1.0},
            {"w": 0.7, "phi_min": 0.0, "phi_max": 1.0, "ip": 1.0},
            {"w": 0.7, "phi_min": 0.0, "phi_max": 1.0, "ip": -0.1},
            {"w": float("nan"), "phi_min": 0.0, "phi_max": 1.0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GeneralParams(**kwargs)

    def test_derived_quantities(self):
        p = GeneralParams(0.7, 1.0, 3.0, ip=0.25)
        assert p.sp == 0.75
        assert p.phi_mean == 2.0


class TestConversions:
    def test_general_to_classical(self):
        c = general_to_classical(GeneralParams(0.7, 0.0, 4.0, ip=0.5))
        assert c == ClassicalParams(w=0.7, iw=2.0, sw=2.0)

    def test_uneven_split(self):
        c = general_to_classical(GeneralParams(0.7, 0.0, 4.0, ip=0.25))
        assert (c.iw, c.sw) == (1.0, 3.0)

    def test_infeasible(self):
        with pytest.raises(ConversionError):
            general_to_classical(GeneralParams(0.7, 0.5, 4.0))

    def test_classical_round_trip(self):
        c = ClassicalParams(0.72, 1.5, 1.9)
        back = general_to_classical(classical_to_general(c))
        assert back.w == c.w
        assert back.iw == pytest.approx(c.iw, rel=1e-15)
        assert back.sw == pytest.approx(c.sw, rel=1e-15)

    def test_classical_pure_individual_has_no_general_form(self):
        with pytest.raises(ConversionError):
            classical_to_general(ClassicalParams(0.7, 2.0, 0.0))

    def test_constricted_reference_point(self):
        g = constricted_to_general(ConstrictedParams(aw=4.1, kappa=1.0))
        w_ref, phi_ref = constriction_oracle(4.1, 1.0)
        assert g.w == pytest.approx(w_ref, abs=1e-12)
        assert g.phi_max == pytest.approx(phi_ref, abs=1e-12)
        assert round(g.w, 5) == 0.72984 and round(g.phi_max, 5) == 2.99236
        assert (g.phi_min, g.ip, g.sp) == (0.0, 0.5, 0.5)

    def test_constricted_below_four(self):
        g = constricted_to_general(ConstrictedParams(aw=3.0, kappa=0.9))
        assert g.w == 0.9
        assert g.phi_max == pytest.approx(2.7, abs=1e-15)

    def test_constricted_at_four(self):
        g = constricted_to_general(ConstrictedParams(aw=4.0, kappa=1.0))
        assert (g.w, g.phi_max) == (1.0, 4.0)

    def test_constricted_ip_override(self):
        assert constricted_to_general(ConstrictedParams(4.1, 1.0, ip=0.3)).ip == 0.3

    @given(st.floats(4.0, 50.0, exclude_min=True), st.floats(1e-6, 1.0, exclude_max=True))
    def test_constriction_is_convergent(self, aw, kappa):
        # kappa near 0 underflows to the stationary point (0, 0)
        g = constricted_to_general(ConstrictedParams(aw, kappa))
        assert converges((g.phi_max, g.w))

    @given(st.floats(0.1, 50.0), st.floats(0.01, 1.0))
    def test_constriction_matches_oracle(self, aw, kappa):
        g = constricted_to_general(ConstrictedParams(aw, kappa))
        w_ref, phi_ref = constriction_oracle(aw, kappa)
        assert g.w == pytest.approx(w_ref, rel=1e-12)
        assert g.phi_max == pytest.approx(phi_ref, rel=1e-12)

    def test_convert_dispatch(self):
        k = ConstrictedParams(4.1, 1.0)
        c = convert(k, "classical")
        assert c.iw == pytest.approx(0.5 * 2.99236, abs=1e-5)
        assert convert(c, "classical") is c
        with pytest.raises(ConversionError):
            convert(c, "constricted")
        with pytest.raises(ValueError):
            convert(c, "nonsense")


def test_general_and_classical_sample_the_same_distribution():
    g = GeneralParams(0.7, 0.0, 3.4, ip=0.5)
    c = general_to_classical(g)
    n = 100_000
    a = sample_general(g, np.random.default_rng(101), size=n).phi
    b = sample_classical(c, np.random.default_rng(202), size=n).phi
    res = stats.ks_2samp(a, b)
    critical = stats.kstwo.ppf(0.99, n // 2)  # equal sizes: effective n = n*n/(2n)
    assert res.statistic < critical
    assert res.pvalue > 0.01


class TestConfigParsing:
    def test_round_trip(self):
        for params in (ClassicalParams(0.7, 1.5, 1.5), GeneralParams(0.75, 0.0, 3.4), ConstrictedParams(4.1, 1.0)):
            parsed, seed = formulation_from_dict(formulation_to_dict(params) | {"seed": 9})
            assert parsed == params and seed == 9

    def test_unknown_field_rejected(self):
        with pytest.raises(ValueError, match="unknown"):
            formulation_from_dict({"formulation": "classical", "w": 0.7, "iw": 1, "sw": 1, "c1": 2})

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            formulation_from_dict({"formulation": "chaotic", "w": 0.7})

    def test_missing_field(self):
        with pytest.raises(ValueError, match="incomplete"):
            formulation_from_dict({"formulation": "general", "w": 0.7})

    def test_bad_seed(self):
        with pytest.raises(ValueError):
            formulation_from_dict({"formulation": "constricted", "aw": 4.1, "kappa": 1.0, "seed": -1})

    def test_sp_must_match(self):
        ok, _ = formulation_from_dict({"formulation": "general", "w": 0.7, "phi_min": 0, "phi_max": 3, "ip": 0.25, "sp": 0.75})
        assert ok.sp == 0.75
        with pytest.raises(ValueError):
            formulation_from_dict({"formulation": "general", "w": 0.7, "phi_min": 0, "phi_max": 3, "ip": 0.25, "sp": 0.5})
