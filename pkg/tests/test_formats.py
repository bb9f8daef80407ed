import json

import numpy as np
import pytest

from lib import formats
from lib.errors import FormatError


def test_algebra_file_preserves_tables(tmp_path, fib_alg):
    path = tmp_path / 'fib.json'
    formats.write_algebra(fib_alg, path, {'note': 'fib'})
    data = json.loads(path.read_text(encoding='utf-8'))
    assert data['note'] == 'fib'
    assert data['dim'] == 13
    assert data['mult'] == sorted(data['mult'])

    loaded = formats.read_algebra(path)
    assert loaded['basis'] == fib_alg['basis']
    for key in ('mult', 'comult', 'unit', 'counit', 'antipode', 'star'):
        np.testing.assert_allclose(loaded[key], fib_alg[key], atol=1e-15)


def test_algebra_file_is_deterministic(tmp_path, fib_alg):
    formats.write_algebra(fib_alg, tmp_path / 'a.json')
    formats.write_algebra(fib_alg, tmp_path / 'b.json')
    assert (tmp_path / 'a.json').read_bytes() == (tmp_path / 'b.json').read_bytes()


def test_invalid_json_has_diagnostics(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{"dim": 2,\n  "basis": [}', encoding='utf-8')
    with pytest.raises(FormatError) as info:
        formats.read_algebra(path)
    assert 'wiersz 2' in info.value.diagnostics


@pytest.mark.parametrize('content', [
    {'dim': 1, 'basis': ['x']},
    {'dim': 2, 'basis': ['x'], 'mult': [], 'comult': [], 'unit': [], 'counit': [], 'antipode': [], 'star': []},
    {'dim': 1, 'basis': ['x'], 'mult': [[0, 0, 3, 1.0, 0.0]], 'comult': [], 'unit': [], 'counit': [], 'antipode': [], 'star': []},
    {'dim': 1, 'basis': ['x'], 'mult': [[0, 0, 0, 'a', 0.0]], 'comult': [], 'unit': [], 'counit': [], 'antipode': [], 'star': []},
])
def test_malformed_algebra(tmp_path, content):
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps(content), encoding='utf-8')
    with pytest.raises(FormatError):
        formats.read_algebra(path)


def test_fusion_file(tmp_path, data_dir):
    ring = formats.read_fusion(data_dir / 'ising_fusion.json')
    assert ring['labels'] == ['I', 'sigma', 'psi']
    formats.write_fusion(ring, tmp_path / 'ising.json')
    again = formats.read_fusion(tmp_path / 'ising.json')
    np.testing.assert_array_equal(again['N'], ring['N'])


def test_fusion_unknown_label(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text(json.dumps({'labels': ['I'], 'unit': 'I', 'dual': {'I': 'I'}, 'N': [['I', 'x', 'I', 1]]}), encoding='utf-8')
    with pytest.raises(FormatError):
        formats.read_fusion(path)


def test_fsymbols_file(z2_fsymbols, fib_fsymbols):
    assert z2_fsymbols['cocycle']['f'][('1', '1', '1', '1', '0', '0')] == -1
    assert z2_fsymbols['cocycle']['kappa']['1'] == -1
    assert z2_fsymbols['trivial']['kappa'] == {'0': 1.0, '1': 1.0}
    assert fib_fsymbols['f'][('tau', 'tau', 'tau', 'tau', 'tau', 'tau')].real == pytest.approx(-0.6180339887498949)


def test_fsymbols_wrong_arity(tmp_path, data_dir):
    ring = formats.read_fusion(data_dir / 'z2_fusion.json')
    path = tmp_path / 'f.json'
    path.write_text(json.dumps({'entries': [['1', '1', '1', '1', '0', -1, 0]]}), encoding='utf-8')
    with pytest.raises(FormatError):
        formats.read_fsymbols(path, ring)


def test_sequence_file(tmp_path):
    path = tmp_path / 'seq.txt'
    path.write_text('# F(L)\n1.0 0.5\n\n2.0  # bez części urojonej\n', encoding='utf-8')
    assert formats.read_sequence(path) == [1 + 0.5j, 2 + 0j]
    formats.write_sequence([1 + 0.5j, -3.0], tmp_path / 'out.txt')
    assert formats.read_sequence(tmp_path / 'out.txt') == [1 + 0.5j, -3 + 0j]


@pytest.mark.parametrize('line', ['abc', '1 2 3'])
def test_bad_sequence_line(tmp_path, line):
    path = tmp_path / 'seq.txt'
    path.write_text(line + '\n', encoding='utf-8')
    with pytest.raises(FormatError):
        formats.read_sequence(path)


def test_ctf_dump(tmp_path):
    array = np.arange(12, dtype=float).reshape(3, 4) + 1j
    path = tmp_path / 'rho.ctf'
    formats.write_ctf(array, path)
    raw = path.read_bytes()
    assert raw.startswith(formats.CTF_MAGIC)
    assert len(raw) == len(formats.CTF_MAGIC) + 4 + 8 + 16 * 12
    np.testing.assert_array_equal(formats.read_ctf(path), array)


def test_ctf_rejects_garbage(tmp_path):
    path = tmp_path / 'bad.ctf'
    path.write_bytes(b'not a tensor at all')
    with pytest.raises(FormatError):
        formats.read_ctf(path)
    formats.write_ctf(np.eye(2), path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(FormatError):
        formats.read_ctf(path)
