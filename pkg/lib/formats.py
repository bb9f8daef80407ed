"""Formaty plików: wha.json, fusion.json, fsymbols.json, ciągi wartości i zrzuty .ctf.

Wszystkie indeksy w plikach JSON są liczone od zera, listy rzadkie posortowane
leksykograficznie, liczby zespolone zapisane jako para ``re, im``. Zapis JSON
używa ``sort_keys`` i stałego wcięcia, więc identyczne dane dają identyczne pliki.
"""

import json
import logging
import struct
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from lib import fusion_ring
from lib.cat_compiler import make_fsymbols
from lib.errors import FormatError
from lib.wha_core import Algebra, make_algebra

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CTF_MAGIC = b'WHARF-CTF-v1\0\0\0\0'
SPARSE_ZERO = 1e-15


def _load_json(path: PathLike) -> Any:
    """Wczytuje JSON; ``FormatError`` niesie diagnostykę parsera (wiersz, kolumna)."""
    text = Path(path).read_text(encoding='utf-8')
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        raise FormatError(
            f'Plik {path} nie jest poprawnym JSON-em',
            f'wiersz {error.lineno}, kolumna {error.colno}: {error.msg}',
        ) from error


def dump_json(data: Any, path: PathLike) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + '\n', encoding='utf-8')


def _require(data: Dict[str, Any], keys: Sequence[str], path: PathLike) -> None:
    if not isinstance(data, dict):
        raise FormatError(f'Plik {path} powinien zawierać obiekt JSON')
    missing = [key for key in keys if key not in data]
    if missing:
        raise FormatError(f'Plik {path} nie zawiera pól: ' + ', '.join(missing))


def _sparse(array: np.ndarray) -> List[List[Any]]:
    rows = []
    for index in zip(*np.nonzero(np.abs(array) > SPARSE_ZERO)):
        value = complex(array[index])
        rows.append([int(i) for i in index] + [value.real, value.imag])
    return sorted(rows)


def _dense(rows: Any, shape: Sequence[int], name: str, path: PathLike) -> np.ndarray:
    array = np.zeros(tuple(shape), dtype=complex)
    rank = len(shape)
    for position, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != rank + 2:
            raise FormatError(f'Pole {name} w {path}: wpis #{position} ma złą długość', repr(row))
        try:
            index = tuple(int(i) for i in row[:rank])
            value = complex(float(row[rank]), float(row[rank + 1]))
        except (TypeError, ValueError) as error:
            raise FormatError(f'Pole {name} w {path}: wpis #{position} nie jest liczbą', repr(row)) from error
        if any(i < 0 or i >= bound for i, bound in zip(index, shape)):
            raise FormatError(f'Pole {name} w {path}: indeks poza zakresem', repr(row))
        array[index] = value
    return array


def algebra_to_json(alg: Algebra) -> Dict[str, Any]:
    return {
        'dim': alg['dim'],
        'basis': list(alg['basis']),
        'mult': _sparse(alg['mult']),
        'comult': _sparse(alg['comult']),
        'unit': _sparse(alg['unit']),
        'counit': _sparse(alg['counit']),
        'antipode': _sparse(alg['antipode']),
        'star': _sparse(alg['star']),
    }


def write_algebra(alg: Algebra, path: PathLike, extra: Optional[Dict[str, Any]] = None) -> None:
    """Zapisuje wha.json; ``extra`` (np. osadzony raport) trafia pod własne klucze."""
    data = algebra_to_json(alg)
    data.update(extra or {})
    dump_json(data, path)
    logger.info('Zapisano algebrę wymiaru %d do %s', alg['dim'], path)


def read_algebra(path: PathLike) -> Algebra:
    """Wczytuje wha.json.

    Raises:
        FormatError: Gdy plik nie jest poprawnym JSON-em lub ma złą strukturę.
    """
    data = _load_json(path)
    _require(data, ['dim', 'basis', 'mult', 'comult', 'unit', 'counit', 'antipode', 'star'], path)
    dim = data['dim']
    if not isinstance(dim, int) or dim < 1 or len(data['basis']) != dim:
        raise FormatError(f'Plik {path}: pole dim nie zgadza się z bazą')
    return make_algebra(
        [str(label) for label in data['basis']],
        _dense(data['mult'], (dim, dim, dim), 'mult', path),
        _dense(data['comult'], (dim, dim, dim), 'comult', path),
        _dense(data['unit'], (dim,), 'unit', path),
        _dense(data['counit'], (dim,), 'counit', path),
        _dense(data['antipode'], (dim, dim), 'antipode', path),
        _dense(data['star'], (dim, dim), 'star', path),
    )


def ring_to_json(ring: Dict[str, Any]) -> Dict[str, Any]:
    data = {
        'labels': list(ring['labels']),
        'unit': ring['unit'],
        'dual': dict(ring['dual']),
        'N': [list(triple) + [fusion_ring.fusion_coefficient(ring, *triple)] for triple in fusion_ring.admissible_triples(ring)],
    }
    if ring.get('dims'):
        data['dims'] = dict(ring['dims'])
    return data


def write_fusion(ring: Dict[str, Any], path: PathLike) -> None:
    dump_json(ring_to_json(ring), path)


def read_fusion(path: PathLike) -> Dict[str, Any]:
    """Wczytuje fusion.json.

    Raises:
        FormatError: Gdy brakuje pól lub wpisy N są niepoprawne.
    """
    data = _load_json(path)
    _require(data, ['labels', 'unit', 'dual', 'N'], path)
    entries = []
    for position, row in enumerate(data['N']):
        if not isinstance(row, list) or len(row) != 4:
            raise FormatError(f'Wpis N #{position} w {path} powinien mieć postać [a, b, c, n]', repr(row))
        entries.append((str(row[0]), str(row[1]), str(row[2]), int(row[3])))
    try:
        return fusion_ring.make_ring(data['labels'], str(data['unit']), data['dual'], entries, data.get('dims'))
    except ValueError as error:
        raise FormatError(f'Plik {path}: {error}') from error


def read_fsymbols(path: PathLike, ring: Dict[str, Any]) -> Dict[str, Any]:
    """Wczytuje fsymbols.json dla pierścienia ``ring``.

    Raises:
        FormatError: Gdy wpis nie ma postaci ``[a, b, c, d, e, f, re, im]``.
    """
    data = _load_json(path)
    _require(data, ['entries'], path)
    entries = {}
    for position, row in enumerate(data['entries']):
        if not isinstance(row, list) or len(row) != 8:
            raise FormatError(f'Wpis F #{position} w {path} powinien mieć 8 pól', repr(row))
        key = tuple(str(label) for label in row[:6])
        entries[key] = complex(float(row[6]), float(row[7]))
    kappa = data.get('kappa')
    if kappa is not None:
        kappa = {str(label): complex(value) if not isinstance(value, list) else complex(value[0], value[1])
                 for label, value in kappa.items()}
    return make_fsymbols(ring, entries, kappa)


def read_sequence(path: PathLike) -> List[complex]:
    """Ciąg wartości: jedna liczba na wiersz, ``re im`` lub samo ``re``; ``#`` zaczyna komentarz.

    Raises:
        FormatError: Gdy wiersz nie zawiera jednej lub dwóch liczb.
    """
    values = []
    for number, line in enumerate(Path(path).read_text(encoding='utf-8').splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        parts = content.split()
        try:
            numbers = [float(part) for part in parts]
        except ValueError as error:
            raise FormatError(f'Wiersz {number} w {path} nie jest liczbą', line) from error
        if len(numbers) not in (1, 2):
            raise FormatError(f'Wiersz {number} w {path} powinien zawierać "re im"', line)
        values.append(complex(numbers[0], numbers[1] if len(numbers) == 2 else 0.0))
    return values


def write_sequence(values: Sequence[complex], path: PathLike) -> None:
    lines = [f'{complex(value).real!r} {complex(value).imag!r}' for value in values]
    Path(path).write_text('\n'.join(lines) + '\n', encoding='utf-8')


def write_ctf(array: Any, path: PathLike) -> None:
    """Zrzut gęstego tensora: magia, u32 rząd, u32 wymiary, pary f64 (re, im) little-endian."""
    data = np.ascontiguousarray(np.asarray(array, dtype=complex))
    header = CTF_MAGIC + struct.pack('<I', data.ndim) + struct.pack(f'<{data.ndim}I', *data.shape)
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(header + data.astype('<c16').tobytes(order='C'))
    logger.info('Zapisano tensor %s do %s', data.shape, path)


def read_ctf(path: PathLike) -> np.ndarray:
    """Odczyt pliku .ctf.

    Raises:
        FormatError: Gdy magia lub długość danych się nie zgadza.
    """
    raw = Path(path).read_bytes()
    if not raw.startswith(CTF_MAGIC):
        raise FormatError(f'Plik {path} nie jest zrzutem CTF', repr(raw[:16]))
    offset = len(CTF_MAGIC)
    if len(raw) < offset + 4:
        raise FormatError(f'Plik {path} jest ucięty')
    (rank,) = struct.unpack_from('<I', raw, offset)
    offset += 4
    if len(raw) < offset + 4 * rank:
        raise FormatError(f'Plik {path} jest ucięty')
    shape = struct.unpack_from(f'<{rank}I', raw, offset)
    offset += 4 * rank
    count = int(np.prod(shape, dtype=np.int64))
    if len(raw) - offset != 16 * count:
        raise FormatError(f'Plik {path}: oczekiwano {count} liczb zespolonych', f'bajtów danych: {len(raw) - offset}')
    return np.frombuffer(raw, dtype='<c16', count=count, offset=offset).reshape(shape).astype(complex)
