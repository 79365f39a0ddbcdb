"""Bootstrap Kolmogorov-Smirnov screening of classical models."""
import numpy as np
import pytest

from vinepd import KsModel, bootstrap_ks, ks_screen


class TestValidation:
    def test_short_data(self):
        with pytest.raises(ValueError):
            bootstrap_ks(np.arange(10.0), KsModel.NORMAL)

    def test_min_replicates(self):
        x = np.random.default_rng(0).normal(size=50)
        with pytest.raises(ValueError):
            bootstrap_ks(x, KsModel.NORMAL, n_boot=50)

    def test_positive_support_models_reject_nonpositive(self):
        x = np.random.default_rng(1).normal(size=50)  # has negatives
        for model in (KsModel.LOG_NORMAL, KsModel.GAMMA, KsModel.WEIBULL,
                      KsModel.EXPONENTIAL, KsModel.TRUNC_NORMAL_AT_0):
            with pytest.raises(ValueError):
                bootstrap_ks(x, model, n_boot=100)

    def test_model_accepts_string(self):
        x = np.abs(np.random.default_rng(2).normal(size=60)) + 0.1
        rec = bootstrap_ks(x, "Normal", n_boot=100, seed=2)
        assert rec.name == "Normal"


class TestBehavior:
    def test_well_specified_model_retained(self):
        rng = np.random.default_rng(3)
        x = rng.lognormal(0.0, 0.5, 120)
        rec = bootstrap_ks(x, KsModel.LOG_NORMAL, n_boot=200, seed=3)
        assert rec.avg_p_value > 0.2
        assert rec.pct_non_rejected > 0.8

    def test_bimodal_data_rejects_normal(self):
        rng = np.random.default_rng(4)
        z = rng.uniform(size=150) < 0.5
        x = np.where(z, rng.normal(-3, 1, 150), rng.normal(3, 1, 150))
        rec = bootstrap_ks(x, KsModel.NORMAL, n_boot=200, seed=4)
        assert rec.pct_non_rejected < 0.05

    def test_exponential_data_rejects_normal(self):
        rng = np.random.default_rng(5)
        x = rng.exponential(2.0, 150)
        rec = bootstrap_ks(x, KsModel.NORMAL, n_boot=200, seed=5)
        assert rec.avg_p_value < 0.2

    def test_deterministic_given_seed(self):
        x = np.random.default_rng(6).normal(size=60)
        a = bootstrap_ks(x, KsModel.NORMAL, n_boot=100, seed=7)
        b = bootstrap_ks(x, KsModel.NORMAL, n_boot=100, seed=7)
        assert a == b

    def test_screen_covers_all_models(self):
        rng = np.random.default_rng(8)
        x = np.abs(rng.normal(5.0, 1.0, 80))
        report = ks_screen(x, n_boot=100, seed=8)
        assert [r.name for r in report.records] == \
            [m.value for m in KsModel]
        for r in report.records:
            assert 0.0 <= r.avg_p_value <= 1.0
            assert 0.0 <= r.pct_non_rejected <= 1.0
