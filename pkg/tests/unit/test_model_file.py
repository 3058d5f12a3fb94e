"""Tests for key=value model files and scenario assembly."""

import numpy as np
import pytest

from app.core.exceptions import ConfigError
from app.polarization.algebra import KET_X, KET_Z
from app.waveplate.model_file import build_scenario, load_model_file, parse_state
from app.waveplate.presets import REFERENCE_MODEL, crystal_model


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "crystal.env"
    path.write_text("# measured plate\nslope_te=1.5\nslope_tm=0.5\nintercept_tm=0.1\npsi_in=x\npsi_f=0.6,0.8j\n")
    return path


class TestParseState:
    @pytest.mark.parametrize("name,expected", [("z", KET_Z), ("1", KET_Z), ("X", KET_X), ("2", KET_X)])
    def test_named(self, name, expected):
        assert np.array_equal(parse_state(name), expected)

    def test_circular(self):
        r = parse_state("r")
        assert np.linalg.norm(r) == pytest.approx(1.0)
        assert r[1] == pytest.approx(1j * r[0])

    def test_pair_is_normalized(self):
        vec = parse_state("1,1j")
        assert np.allclose(vec, np.array([1, 1j]) / np.sqrt(2))

    @pytest.mark.parametrize("text", ["0,0", "1,2,3", "q", "a,b"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_state(text)


class TestLoadModelFile:
    def test_values(self, model_file):
        values = load_model_file(model_file)
        assert values["slope_te"] == 1.5
        assert values["intercept_tm"] == 0.1
        assert np.allclose(values["psi_f"], [0.6, 0.8j])

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_model_file(tmp_path / "absent.env")

    def test_unknown_key(self, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("slope_te=1.0\nthickness=3\n")
        with pytest.raises(ConfigError, match="thickness"):
            load_model_file(path)

    def test_bad_number(self, tmp_path):
        path = tmp_path / "bad.env"
        path.write_text("slope_te=fast\n")
        with pytest.raises(ConfigError):
            load_model_file(path)


class TestBuildScenario:
    def test_default_is_reference(self):
        scenario = build_scenario()
        assert scenario.model == REFERENCE_MODEL
        assert scenario.is_default()

    def test_paper_preset_and_alias(self):
        assert build_scenario("paper").model == crystal_model()
        assert build_scenario("crystal").model == crystal_model()

    def test_unknown_preset(self):
        with pytest.raises(ConfigError):
            build_scenario("quartz")

    def test_file_overrides_preset(self, model_file):
        scenario = build_scenario("reference", model_file)
        assert scenario.model.slope_te == 1.5
        assert scenario.model.intercept_te == 0.0
        assert np.array_equal(scenario.psi_in, KET_X)
        assert not scenario.is_default()

    def test_explicit_values_override_file(self, model_file):
        scenario = build_scenario("reference", model_file, {"slope_te": 2.0, "psi_in": "z", "slope_tm": None})
        assert scenario.model.slope_te == 2.0
        assert scenario.model.slope_tm == 0.5
        assert np.array_equal(scenario.psi_in, KET_Z)

    def test_unnormalized_array_rejected(self):
        with pytest.raises(ConfigError):
            build_scenario(overrides={"psi_in": np.array([1.0, 1.0])})
