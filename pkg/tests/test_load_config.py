import functools

import dotenv
import pytest

from lib import load_config
from lib.load_config import load_env, parse_lengths


def test_defaults(isolated_env):
    cfg = load_env()
    assert cfg['TOL'] == 1e-9
    assert cfg['FUSION_TOL'] == 1e-6
    assert cfg['SVD_THRESHOLD'] == 1e-8
    assert cfg['DENSE_CAP'] == 2 ** 24
    assert cfg['LENGTHS'] == [1, 2, 3]
    assert cfg['MAX_ORDER'] == 8
    assert cfg['WORKERS'] == 1
    assert cfg['JSON_OUTPUT'] is False
    assert cfg['LOG_LEVEL'] == 'INFO'


def test_environment_overrides(isolated_env, monkeypatch):
    monkeypatch.setenv('WHARF_TOL', '1e-7')
    monkeypatch.setenv('WHARF_LENGTHS', '2, 4')
    monkeypatch.setenv('WHARF_JSON', 'TRUE')
    monkeypatch.setenv('WHARF_LOG_LEVEL', 'debug')
    cfg = load_env()
    assert cfg['TOL'] == 1e-7
    assert cfg['LENGTHS'] == [2, 4]
    assert cfg['JSON_OUTPUT'] is True
    assert cfg['LOG_LEVEL'] == 'DEBUG'


def test_dotenv_file_is_read(isolated_env, monkeypatch):
    env_file = isolated_env / '.env'
    env_file.write_text('WHARF_MAX_ORDER=5\n', encoding='utf-8')
    # teardown usuwa zmienną ustawioną przez load_dotenv
    monkeypatch.setenv('WHARF_MAX_ORDER', '8')
    monkeypatch.delenv('WHARF_MAX_ORDER')
    monkeypatch.setattr(load_config, 'load_dotenv', functools.partial(dotenv.load_dotenv, env_file))
    assert load_env()['MAX_ORDER'] == 5


@pytest.mark.parametrize('key, value', [
    ('WHARF_TOL', 'abc'),
    ('WHARF_TOL', '-1'),
    ('WHARF_FUSION_TOL', '0'),
    ('WHARF_DENSE_CAP', '0'),
    ('WHARF_WORKERS', '1.5'),
    ('WHARF_LENGTHS', '1,0'),
])
def test_invalid_values(isolated_env, monkeypatch, key, value):
    monkeypatch.setenv(key, value)
    with pytest.raises(ValueError, match=key.split('_', 1)[1]):
        load_env()


def test_parse_lengths():
    assert parse_lengths('3,1,2') == [3, 1, 2]
    with pytest.raises(ValueError):
        parse_lengths('')
