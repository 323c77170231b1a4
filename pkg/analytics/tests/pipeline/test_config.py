import json

import pytest

from analytics.exceptions import ConfigError
from analytics.pipeline import RunConfig, load_run_config


def test_defaults_come_from_settings(settings, tmp_path):
    settings.AAG_R_MAX = 5
    settings.AAG_WIDTH = 2
    settings.AAG_HIGH_VALUE_THRESHOLD = 500.0
    config = load_run_config(data_dir=str(tmp_path))
    assert (config.coordinator, config.seed, config.r_max, config.width) == ('mock', 777, 5, 2)
    assert config.high_value_threshold == 500.0
    assert config.knowledge_path == settings.AAG_KNOWLEDGE_PATH
    assert config.distill_budget == {}
    assert config.inject_faults == {}


def test_file_values_and_overrides(tmp_path):
    path = tmp_path / 'run.json'
    path.write_text(json.dumps({
        'data_dir': str(tmp_path),
        'width': 3,
        'r_max': 0,
        'distill_budget': {'max_items': 5},
        'inject_faults': {'cycle_detection': 'ParameterOutOfRange:max_len'},
    }))
    config = load_run_config(str(path), width=None, seed=1)
    assert (config.width, config.r_max, config.seed) == (3, 0, 1)
    assert config.distill_budget == {'max_items': 5}
    assert config.to_data()['inject_faults'] == {'cycle_detection': 'ParameterOutOfRange:max_len'}


@pytest.mark.parametrize('data', [
    {},
    {'data_dir': '/nonexistent/dir'},
    {'width': 0},
    {'coordinator': 'oracle'},
    {'context_budget': 10},
    {'run_id': '../escape'},
    {'distill_budget': {'max_chars': 0}},
])
def test_invalid_config(tmp_path, data):
    values = dict({'data_dir': str(tmp_path)}, **data) if data else {}
    with pytest.raises(ConfigError):
        RunConfig.from_data(values)


@pytest.mark.parametrize('content', ['{not json', '[1, 2]'])
def test_invalid_config_file(tmp_path, content):
    path = tmp_path / 'run.json'
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_run_config(str(path), data_dir=str(tmp_path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError) as excinfo:
        load_run_config(str(tmp_path / 'missing.json'))
    assert 'does not exist' in excinfo.value.message
