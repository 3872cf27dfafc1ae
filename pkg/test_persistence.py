"""
Artifact format tests: configurations, Gaudin tables, model and study files
Run: pytest test_persistence.py
"""
import os

import numpy as np
import pytest

from spacing_lab.errors import ParseError
from spacing_lab.models import (
    Configuration,
    Interaction,
    IntervalMode,
    IntervalSpec,
    InvariantModel,
    McmcParams,
    Potential,
    RepulsiveModel,
    SamplerKind,
    StudyConfig,
)
from spacing_lab.services import GaudinService, PersistenceService, SamplingService


def _write(path, text):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)
    return str(path)


# ============================================
# CONFIGURATIONS
# ============================================

def test_configuration_roundtrip(tmp_path):
    x = SamplingService.sample_gue(30, seed=77)
    path = str(tmp_path / PersistenceService.configuration_name(x, 3))
    PersistenceService.save_configuration(x, path)
    assert os.path.basename(path) == "gue-n30-r0003.csv"
    assert PersistenceService.load_configuration(path) == x


def test_configuration_roundtrip_keeps_acceptance(tmp_path):
    x = Configuration(np.array([0.1, 0.25, 1.0 / 3.0]), model_tag="quartic", seed=2 ** 63 + 5,
                      sampler=SamplerKind.MCMC, acceptance_rate=0.231)
    path = str(tmp_path / "x.csv")
    PersistenceService.save_configuration(x, path)
    loaded = PersistenceService.load_configuration(path)
    assert loaded == x
    assert loaded.acceptance_rate == 0.231
    assert loaded.seed == 2 ** 63 + 5


@pytest.mark.parametrize("header", [
    "configuration v1 model_tag=gue seed=1 sampler=tridiagonal n=2",
    "# configuration v2 model_tag=gue seed=1 sampler=tridiagonal n=2",
    "# gaudin-table v1 model_tag=gue seed=1 sampler=tridiagonal n=2",
    "# configuration v1 model_tag=gue seed=1 sampler=magic n=2",
    "# configuration v1 model_tag=gue seed=1 sampler=tridiagonal n=3",
    "# configuration v1 model_tag=gue sampler=tridiagonal n=2",
])
def test_corrupted_configuration_header(tmp_path, header):
    path = _write(tmp_path / "bad.csv", header + "\n0.1\n0.2\n")
    with pytest.raises(ParseError):
        PersistenceService.load_configuration(path)


def test_configuration_bad_value_reports_line(tmp_path):
    path = _write(tmp_path / "bad.csv",
                  "# configuration v1 model_tag=gue seed=1 sampler=tridiagonal n=2\n0.1\nabc\n")
    with pytest.raises(ParseError) as excinfo:
        PersistenceService.load_configuration(path)
    assert excinfo.value.line == 3


def test_load_configurations_in_name_order(tmp_path):
    for replica in (2, 0, 1):
        x = SamplingService.sample_gue(5, seed=replica)
        PersistenceService.save_configuration(x, str(tmp_path / PersistenceService.configuration_name(x, replica)))
    names = [name for name, _ in PersistenceService.load_configurations(str(tmp_path))]
    assert names == ["gue-n5-r0000.csv", "gue-n5-r0001.csv", "gue-n5-r0002.csv"]


# ============================================
# GAUDIN TABLES
# ============================================

def test_gaudin_table_roundtrip(tmp_path):
    table = GaudinService.build_gaudin_table(1.0, 0.01, 30)
    path = str(tmp_path / "table.csv")
    PersistenceService.save_gaudin_table(table, path)
    with open(path, encoding="utf-8") as handle:
        assert handle.readline().startswith("# gaudin-table v1 smax=1.0 step=0.01 m=30")
    loaded = PersistenceService.load_gaudin_table(path)
    assert np.array_equal(loaded.g_values, table.g_values)
    assert np.array_equal(loaded.e_values, table.e_values)
    assert loaded.order == 30


def test_gaudin_cache_skips_rebuild(tmp_path, monkeypatch):
    first = GaudinService.load_or_build_table(1.0, 0.01, 30, cache_dir=str(tmp_path))
    assert os.listdir(str(tmp_path)) == [PersistenceService.gaudin_cache_name(1.0, 0.01, 30)]

    def fail(*args, **kwargs):
        raise AssertionError("table rebuilt despite cache")

    monkeypatch.setattr(GaudinService, "build_gaudin_table", staticmethod(fail))
    second = GaudinService.load_or_build_table(1.0, 0.01, 30, cache_dir=str(tmp_path))
    assert np.array_equal(first.g_values, second.g_values)


def test_gaudin_table_column_errors(tmp_path):
    path = _write(tmp_path / "t.csv", "# gaudin-table v1 smax=0.1 step=0.05 m=10\ns,E,G\n0.0,1.0,0.0\n0.05,0.9\n")
    with pytest.raises(ParseError) as excinfo:
        PersistenceService.load_gaudin_table(path)
    assert excinfo.value.line == 4


# ============================================
# MODEL FILES
# ============================================

def test_load_shipped_models(data_dir):
    gue = PersistenceService.load_model(os.path.join(data_dir, "gue.model"))
    assert isinstance(gue, InvariantModel) and gue.is_gaussian and gue.tag == "gue"
    quartic = PersistenceService.load_model(os.path.join(data_dir, "quartic.model"))
    assert quartic.v.coefficients == (0.0, 0.0, 0.0, 0.0, 0.25)
    repulsive = PersistenceService.load_model(os.path.join(data_dir, "repulsive.model"))
    assert isinstance(repulsive, RepulsiveModel)
    assert repulsive.h == Interaction(-0.1, 1.0)


def test_model_roundtrip(tmp_path):
    models = [
        InvariantModel(Potential((0, 0.5, 1), lower=-3.0, upper=4.0), f=Potential((0, 1), lower=-3.0, upper=4.0),
                       tag="tilted"),
        RepulsiveModel(Potential((0, 0, 1)), Interaction(0.2, 0.5), tag="bumpy"),
    ]
    for model in models:
        path = str(tmp_path / f"{model.tag}.model")
        PersistenceService.save_model(model, path)
        assert PersistenceService.load_model(path) == model


def test_model_tag_is_slugified(tmp_path):
    path = _write(tmp_path / "x.model", "name = Quartic Field #2\nV.coeffs = 0,0,0,0,1\n")
    assert PersistenceService.load_model(path).tag == "quartic-field"
    unnamed = _write(tmp_path / "My Model.model", "V.coeffs = 0,0,1\n")
    assert PersistenceService.load_model(unnamed).tag == "my-model"


@pytest.mark.parametrize("text, line", [
    ("V.coeffs = 0,0,1\ncolour = red\n", 2),
    ("V.coeffs = 0,0,1\nV.coeffs = 0,0,2\n", 2),
    ("name = x\nV.coeffs = 0,zero,1\n", 2),
    ("V.coeffs = 0,0,1\nJ = 1\n", 2),
    ("model = repulsive\nQ.coeffs = 0,0,1\nh.gamma = 0.1\nh.width = 1\nh.form = box\n", 5),
])
def test_model_errors_carry_line_numbers(tmp_path, text, line):
    path = _write(tmp_path / "bad.model", text)
    with pytest.raises(ParseError) as excinfo:
        PersistenceService.load_model(path)
    assert excinfo.value.line == line


def test_model_without_field(tmp_path):
    with pytest.raises(ParseError):
        PersistenceService.load_model(_write(tmp_path / "empty.model", "name = nothing\n"))


# ============================================
# STUDY FILES
# ============================================

def test_load_shipped_study(data_dir):
    config = PersistenceService.load_study(os.path.join(data_dir, "gue-central.study"))
    assert config.sizes == (100, 200, 400)
    assert config.window_lengths == (25.0, 50.0)
    assert config.intervals[0].mode is IntervalMode.QUANTILE_WINDOW
    assert config.sampler is SamplerKind.TRIDIAGONAL
    assert config.model.tag == "gue"
    assert config.base_seed == 2024


def test_study_repeated_keys_and_defaults(tmp_path, data_dir):
    model_path = os.path.join(data_dir, "quartic.model")
    path = _write(tmp_path / "s.study",
                  f"model = {model_path}\nn = 20\nn = 40\ninterval = full\ninterval = q:0.1,0.9\n"
                  f"mcmc.burn_in = 30\ngaudin.step = 0.01\n")
    config = PersistenceService.load_study(path)
    assert config.sizes == (20, 40)
    assert [spec.label for spec in config.intervals] == ["full", "q:0.1,0.9"]
    assert config.sampler is None
    assert config.mcmc == McmcParams(burn_in=30)
    assert config.gaudin.step == 0.01
    assert config.replicas == 100


@pytest.mark.parametrize("text", [
    "model = {model}\nn = 20\n",
    "model = {model}\nn = 20\ninterval = q:2,3\n",
    "model = {model}\nn = 20\ninterval = full\nsampler = gibbs\n",
    "n = 20\ninterval = full\n",
    "model = {model}\nn = 20\ninterval = full\nreplicas = 0\n",
])
def test_study_errors(tmp_path, data_dir, text):
    path = _write(tmp_path / "bad.study", text.format(model=os.path.join(data_dir, "gue.model")))
    with pytest.raises(ParseError):
        PersistenceService.load_study(path)


def test_study_roundtrip(tmp_path, data_dir):
    original = PersistenceService.load_study(os.path.join(data_dir, "gue-central.study"))
    path = str(tmp_path / "copy.study")
    PersistenceService.save_study(original, path)
    restored = PersistenceService.load_study(path)
    assert restored.as_dict() == original.as_dict()
    assert restored.gaudin == original.gaudin
    assert restored.mcmc == original.mcmc
    assert restored.model.v.coefficients == original.model.v.coefficients


def test_study_roundtrip_writes_model_when_unsaved(tmp_path):
    model = RepulsiveModel(Potential((0.0, 0.0, 1.0)), Interaction(-0.1, 1.0), tag="rep")
    config = StudyConfig(model=model, sizes=(30,), intervals=(IntervalSpec.quantile(0.2, 0.8),),
                         replicas=4, base_seed=9, mcmc=McmcParams(burn_in=10, thinning=2, initial_step=0.05))
    path = str(tmp_path / "rep.study")
    PersistenceService.save_study(config, path)
    assert os.path.exists(tmp_path / "rep.model")
    restored = PersistenceService.load_study(path)
    assert restored.as_dict() == config.as_dict()
    assert restored.mcmc == config.mcmc
    assert restored.model.h.gamma == -0.1
