import numpy as np
import pytest

from tsnmf import SpecFileError
from tsnmf.specfiles import build_ground_truth, parse_component_specs, parse_synthetic_spec

COMPONENT_FILE = """\
# stock curves with explicit parameters
mean
cooling tau_c=50 amp=30
bathpulse tau_c=60 tau_h=12 amp=25   # pulse
heating tau_h=15 amp=30
heatkernel r=1.5 amp=10
"""

SYNTH_FILE = """\
n=40
m=16
dt=2.0
seed=3
noise=0.05
bathpulse tau_c=20 tau_h=4 amp=1 weights=constant:30
cooling tau_c=12 amp=1 weights=drift:8,-0.05
heating tau_h=6 amp=1 weights=periodic:2,4,10
"""


class TestComponentSpecs:
    def test_parses_all_kinds(self):
        specs = parse_component_specs(COMPONENT_FILE)
        assert [s.kind for s in specs] == [
            "mean",
            "cooling",
            "bathpulse",
            "heating",
            "heatkernel",
        ]
        assert specs[1].tau_c == 50.0
        assert specs[2].tau_h == 12.0
        assert specs[4].r == 1.5

    def test_defaults_left_unset(self):
        specs = parse_component_specs("cooling\n")
        assert specs[0].tau_c is None
        assert specs[0].amp is None

    def test_unknown_kind_reports_line(self):
        with pytest.raises(SpecFileError, match="line 2"):
            parse_component_specs("mean\nsigmoid tau=3\n")

    def test_bad_parameter_for_kind(self):
        with pytest.raises(SpecFileError, match="tau_h"):
            parse_component_specs("cooling tau_h=4\n")

    def test_mean_takes_no_parameters(self):
        with pytest.raises(SpecFileError):
            parse_component_specs("mean amp=3\n")

    def test_non_numeric_value(self):
        with pytest.raises(SpecFileError, match="line 1"):
            parse_component_specs("cooling tau_c=fast\n")

    def test_weights_clause_rejected(self):
        with pytest.raises(SpecFileError, match="synthetic"):
            parse_component_specs("cooling tau_c=5 weights=constant:1\n")

    def test_empty_file(self):
        with pytest.raises(SpecFileError, match="no components"):
            parse_component_specs("# nothing here\n")


class TestSyntheticSpecs:
    def test_full_parse(self):
        parsed = parse_synthetic_spec(SYNTH_FILE)
        assert (parsed.n, parsed.m, parsed.dt, parsed.seed) == (40, 16, 2.0, 3)
        assert parsed.noise_abs == 0.05
        assert parsed.noise_rel is None
        assert len(parsed.components) == 3
        assert parsed.components[0].weights.kind == "constant"
        assert parsed.components[1].weights.slope == -0.05
        assert parsed.components[2].weights.period == 10.0

    def test_missing_directive(self):
        with pytest.raises(SpecFileError, match="'m'"):
            parse_synthetic_spec("n=5\ndt=1.0\ncooling weights=constant:1\n")

    def test_duplicate_directive_reports_both_lines(self):
        text = "n=5\nm=4\ndt=1.0\nn=6\ncooling weights=constant:1\n"
        with pytest.raises(SpecFileError, match="line 4"):
            parse_synthetic_spec(text)

    def test_unknown_directive(self):
        with pytest.raises(SpecFileError, match="rows"):
            parse_synthetic_spec("rows=5\n")

    def test_component_without_weights(self):
        with pytest.raises(SpecFileError, match="weights="):
            parse_synthetic_spec("n=5\nm=4\ndt=1.0\ncooling tau_c=3\n")

    def test_weight_argument_count(self):
        with pytest.raises(SpecFileError, match="periodic"):
            parse_synthetic_spec("n=5\nm=4\ndt=1.0\ncooling weights=periodic:1,2\n")

    def test_unknown_weight_model(self):
        with pytest.raises(SpecFileError, match="sawtooth"):
            parse_synthetic_spec("n=5\nm=4\ndt=1.0\ncooling weights=sawtooth:1\n")

    def test_noise_and_noise_rel_conflict(self):
        text = "n=5\nm=4\ndt=1.0\nnoise=0.1\nnoise_rel=0.01\ncooling weights=constant:1\n"
        with pytest.raises(SpecFileError, match="not both"):
            parse_synthetic_spec(text)


class TestBuildGroundTruth:
    def test_absolute_noise(self):
        spec, truth = build_ground_truth(parse_synthetic_spec(SYNTH_FILE))
        assert spec.noise_sigma == 0.05
        assert truth.t_noisy.shape == (40, 16)

    def test_relative_noise_resolves_against_clean_range(self):
        text = SYNTH_FILE.replace("noise=0.05", "noise_rel=0.01")
        spec, truth = build_ground_truth(parse_synthetic_spec(text))
        clean_range = float(truth.t_clean.max() - truth.t_clean.min())
        assert spec.noise_sigma == pytest.approx(0.01 * clean_range)

    def test_relative_noise_keeps_clean_data(self):
        base_text = SYNTH_FILE.replace("noise=0.05", "noise=0.0")
        rel_text = SYNTH_FILE.replace("noise=0.05", "noise_rel=0.01")
        _, base = build_ground_truth(parse_synthetic_spec(base_text))
        _, rel = build_ground_truth(parse_synthetic_spec(rel_text))
        assert np.array_equal(base.t_clean, rel.t_clean)
        assert not np.array_equal(rel.t_noisy, rel.t_clean)
