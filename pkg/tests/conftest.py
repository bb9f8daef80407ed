import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from lib import cat_compiler, fib_data, formats, rfp_lab  # noqa: E402

DATA_DIR = ROOT / 'data'


@pytest.fixture(scope='session')
def data_dir():
    return DATA_DIR


@pytest.fixture(scope='session')
def fib_alg():
    return fib_data.build_fib_wha()


@pytest.fixture(scope='session')
def fib_phi(fib_alg):
    return fib_data.build_phi(fib_alg)


@pytest.fixture(scope='session')
def fib_psi(fib_alg):
    return fib_data.build_psi(fib_alg)


@pytest.fixture(scope='session')
def fib_context():
    return rfp_lab.fib_context()


@pytest.fixture(scope='session')
def fib_fsymbols():
    ring = formats.read_fusion(DATA_DIR / 'fib_fusion.json')
    return formats.read_fsymbols(DATA_DIR / 'fib_fsymbols.json', ring)


@pytest.fixture(scope='session')
def z2_fsymbols():
    ring = formats.read_fusion(DATA_DIR / 'z2_fusion.json')
    return {
        'trivial': formats.read_fsymbols(DATA_DIR / 'z2_fsymbols_trivial.json', ring),
        'cocycle': formats.read_fsymbols(DATA_DIR / 'z2_fsymbols_cocycle.json', ring),
    }


@pytest.fixture(scope='session')
def fib_compiled(fib_fsymbols):
    return cat_compiler.compile(fib_fsymbols)


@pytest.fixture
def isolated_env(tmp_path, monkeypatch):
    """Katalog roboczy bez .env i log w katalogu tymczasowym."""
    monkeypatch.chdir(tmp_path)
    for key in list(os.environ):
        if key.startswith('WHARF_'):
            monkeypatch.delenv(key)
    monkeypatch.setenv('WHARF_LOG_FILE', str(tmp_path / 'logs' / 'wharf.log'))
    return tmp_path
