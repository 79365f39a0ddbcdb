"""Pipeline orchestration: configuration, artifacts, determinism."""
import io
import os

import numpy as np
import pytest

from vinepd import (
    PipelineError, RunConfig, emit_report, ingest_panel, run_pipeline,
)
from vinepd.pipeline import ARTIFACTS


def synthetic_panel(n=120, seed=42):
    """Solvent firm: asset mixtures dominate liability mixtures."""
    rng = np.random.default_rng(seed)

    def mix(eta1, m1, m2, s):
        z = rng.uniform(size=n) < eta1
        return np.where(z, rng.normal(m1, s, n), rng.normal(m2, s, n))

    cols = [mix(0.6, 90, 110, 5), mix(0.5, 180, 220, 10),
            mix(0.6, 30, 40, 3), mix(0.5, 60, 80, 5)]
    lines = ["date,a_c,a_l,b_c,b_l"]
    y, m = 1990, 1
    for i in range(n):
        lines.append(f"{y:04d}-{m:02d}," +
                     ",".join(repr(float(c[i])) for c in cols))
        m += 1
        if m > 12:
            m, y = 1, y + 1
    return ingest_panel(io.StringIO("\n".join(lines) + "\n"))


FAST = dict(iterations=400, burnin=100, n_sims=1000)


class TestRunConfig:
    def test_defaults(self):
        c = RunConfig()
        assert (c.iterations, c.burnin, c.n_sims, c.indep_level) \
            == (4000, 1000, 10000, 0.05)
        assert c.discount_factor == pytest.approx(1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            RunConfig(iterations=100, burnin=100)
        with pytest.raises(ValueError):
            RunConfig(n_sims=500)
        with pytest.raises(ValueError):
            RunConfig(indep_level=0.0)

    def test_discount_factor(self):
        c = RunConfig(discount_rate=0.05, horizon=2.0)
        assert c.discount_factor == pytest.approx(np.exp(-0.1))

    def test_from_file(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("# comment\nseed=7\nn_sims=2000\nindep_level=0.10\n")
        c = RunConfig.from_file(path)
        assert (c.seed, c.n_sims, c.indep_level) == (7, 2000, 0.10)
        assert c.iterations == 4000  # untouched default

    def test_from_file_unknown_key(self, tmp_path):
        path = tmp_path / "cfg.txt"
        path.write_text("bogus=1\n")
        with pytest.raises(ValueError, match="unknown key"):
            RunConfig.from_file(path)

    def test_to_text_round_trip(self, tmp_path):
        c = RunConfig(seed=3, n_sims=5000, discount_rate=0.02)
        path = tmp_path / "cfg.txt"
        path.write_text(c.to_text())
        assert RunConfig.from_file(path) == c


class TestRunPipeline:
    def test_solvent_firm_low_pd(self, tmp_path):
        config = RunConfig(seed=1, out_dir=str(tmp_path), **FAST)
        result = run_pipeline(synthetic_panel(), config)
        assert result.report.pd < 0.01
        for name in ARTIFACTS:
            assert (tmp_path / name).exists()

    def test_deterministic_artifacts(self, tmp_path):
        panel = synthetic_panel()
        outs = []
        for sub in ("a", "b"):
            d = tmp_path / sub
            run_pipeline(panel, RunConfig(seed=5, out_dir=str(d), **FAST))
            outs.append({name: (d / name).read_bytes() for name in ARTIFACTS})
        assert outs[0] == outs[1]

    def test_short_panel_halts_at_marginals(self, tmp_path):
        panel = synthetic_panel(n=12)
        config = RunConfig(seed=1, out_dir=str(tmp_path), **FAST)
        with pytest.raises(PipelineError, match="fit-marginals") as exc:
            run_pipeline(panel, config)
        assert "20" in str(exc.value)

    def test_manifest_records_config(self, tmp_path):
        config = RunConfig(seed=9, out_dir=str(tmp_path), **FAST)
        run_pipeline(synthetic_panel(), config)
        manifest = (tmp_path / "manifest.txt").read_text()
        assert "seed=9" in manifest
        assert "n_sims=1000" in manifest
        assert "library_version=" in manifest


class TestEmitReport:
    def test_structural_completeness(self, tmp_path):
        config = RunConfig(seed=2, out_dir=str(tmp_path), **FAST)
        run_pipeline(synthetic_panel(), config)
        text = emit_report(str(tmp_path))
        for role in ("A_C", "A_L", "B_C", "B_L"):
            assert f"marginal {role}" in text
        assert sum(1 for l in text.splitlines()
                   if l.startswith("edge ")) == 6
        assert "pd " in text or "pd" in text
        assert "95% CI" in text

    def test_missing_artifacts_error(self, tmp_path):
        with pytest.raises(PipelineError, match="missing artifacts"):
            emit_report(str(tmp_path))

    def test_partially_missing_names_files(self, tmp_path):
        config = RunConfig(seed=3, out_dir=str(tmp_path), **FAST)
        run_pipeline(synthetic_panel(), config)
        os.unlink(tmp_path / "vine.spec")
        with pytest.raises(PipelineError, match="vine.spec"):
            emit_report(str(tmp_path))
