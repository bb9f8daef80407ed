"""Dane pierścienia fuzji: etykiety, jedynka, dualność, tensor N_ab^c, wymiary.

Pierścień to słownik::

    {'labels': [...], 'unit': 'I', 'dual': {a: ā}, 'N': ndarray (r, r, r), 'dims': {a: d_a} | None}

gdzie ``N[a, b, c] = N_ab^c`` (indeksy według kolejności ``labels``).
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from lib.errors import InputError

logger = logging.getLogger(__name__)

Ring = Dict[str, Any]


def make_ring(
    labels: Sequence[str],
    unit: str,
    dual: Dict[str, str],
    entries: Sequence[Tuple[str, str, str, int]],
    dims: Optional[Dict[str, float]] = None,
) -> Ring:
    """Buduje pierścień fuzji z listy niezerowych współczynników ``(a, b, c, n)``.

    Raises:
        InputError: Gdy etykieta jest nieznana albo współczynnik ujemny.
    """
    labels = [str(label) for label in labels]
    index = {label: position for position, label in enumerate(labels)}
    if unit not in index:
        raise InputError(f'Jedynka {unit!r} nie należy do etykiet {labels}')
    size = len(labels)
    tensor = np.zeros((size, size, size), dtype=int)
    for a, b, c, n in entries:
        if a not in index or b not in index or c not in index:
            raise InputError(f'Nieznana etykieta we wpisie ({a}, {b}, {c})')
        if int(n) < 0:
            raise InputError(f'Ujemna krotność N_{a}{b}^{c} = {n}')
        tensor[index[a], index[b], index[c]] = int(n)
    missing = [label for label in labels if label not in dual]
    if missing:
        raise InputError('Brak etykiet dualnych dla: ' + ', '.join(missing))
    return {
        'labels': labels,
        'unit': unit,
        'dual': {str(key): str(value) for key, value in dual.items()},
        'N': tensor,
        'dims': None if dims is None else {str(key): float(value) for key, value in dims.items()},
    }


def label_index(ring: Ring, label: str) -> int:
    return ring['labels'].index(label)


def fusion_matrix(ring: Ring, label: str) -> np.ndarray:
    """Macierz reprezentacji regularnej ``(N_a)_{cb} = N_ab^c``."""
    return ring['N'][label_index(ring, label)].T.astype(float)


def fusion_coefficient(ring: Ring, a: str, b: str, c: str) -> int:
    return int(ring['N'][label_index(ring, a), label_index(ring, b), label_index(ring, c)])


def is_multiplicity_free(ring: Ring) -> bool:
    return bool(np.all(ring['N'] <= 1))


def total_dimension_squared(ring: Ring, dims: Dict[str, float]) -> float:
    """D² = Σ_a d_a²."""
    return float(sum(dims[label] ** 2 for label in ring['labels']))


def check_ring(ring: Ring, dims: Optional[Dict[str, float]] = None) -> Dict[str, float]:
    """Residua aksjomatów pierścienia.

    Zwraca słownik z kluczami ``unit`` (N_Ia^b = N_aI^b = δ_ab), ``dual``
    (N_ab^I = δ_{b,ā}), ``associativity`` oraz ``dims`` (d_a d_b = Σ_c N_ab^c d_c,
    tylko gdy wymiary są znane).
    """
    tensor = ring['N']
    size = len(ring['labels'])
    unit = label_index(ring, ring['unit'])
    identity = np.eye(size)
    residuals = {
        'unit': float(max(np.abs(tensor[unit] - identity).max(), np.abs(tensor[:, unit, :] - identity).max())),
    }

    expected_dual = np.zeros((size, size))
    for label in ring['labels']:
        expected_dual[label_index(ring, label), label_index(ring, ring['dual'][label])] = 1
    residuals['dual'] = float(np.abs(tensor[:, :, unit] - expected_dual).max())

    # (ab)c = a(bc) w bazie etykiet
    left = np.einsum('abx,xcd->abcd', tensor, tensor)
    right = np.einsum('bcx,axd->abcd', tensor, tensor)
    residuals['associativity'] = float(np.abs(left - right).max())

    dims = dims if dims is not None else ring.get('dims')
    if dims:
        vector = np.array([dims[label] for label in ring['labels']])
        products = np.outer(vector, vector)
        sums = np.einsum('abc,c->ab', tensor, vector)
        residuals['dims'] = float(np.abs(products - sums).max())
    return residuals


def admissible_triples(ring: Ring) -> List[Tuple[str, str, str]]:
    """Wszystkie ``(a, b, c)`` z N_ab^c > 0 w porządku leksykograficznym indeksów."""
    labels = ring['labels']
    return [
        (labels[a], labels[b], labels[c])
        for a, b, c in zip(*np.nonzero(ring['N']))
    ]


def relabel(ring: Ring, permutation: Sequence[int]) -> Ring:
    """Pierścień z etykietami w kolejności ``[labels[p] for p in permutation]``."""
    order = list(permutation)
    labels = [ring['labels'][p] for p in order]
    tensor = ring['N'][np.ix_(order, order, order)]
    return {
        'labels': labels,
        'unit': ring['unit'],
        'dual': dict(ring['dual']),
        'N': tensor,
        'dims': None if ring.get('dims') is None else dict(ring['dims']),
    }


def rename_labels(ring: Ring, mapping: Dict[str, str]) -> Ring:
    """Zmienia nazwy etykiet pierścienia według ``mapping`` (brakujące bez zmian)."""
    def name(label: str) -> str:
        return mapping.get(label, label)

    return {
        'labels': [name(label) for label in ring['labels']],
        'unit': name(ring['unit']),
        'dual': {name(key): name(value) for key, value in ring['dual'].items()},
        'N': ring['N'].copy(),
        'dims': None if ring.get('dims') is None else {name(key): value for key, value in ring['dims'].items()},
    }


def canonical_names(ring: Ring) -> Dict[str, str]:
    """Nazwy kanoniczne: jedynka ``I``, pozostałe ``a1``, ``a2``... w kolejności etykiet."""
    mapping = {ring['unit']: 'I'}
    counter = 1
    for label in ring['labels']:
        if label == ring['unit']:
            continue
        mapping[label] = f'a{counter}'
        counter += 1
    return mapping


def perron_dimensions(ring: Ring) -> Dict[str, float]:
    """Największa (rzeczywista) wartość własna każdej macierzy fuzji ``N_a``."""
    dims = {}
    for label in ring['labels']:
        values = np.linalg.eigvals(fusion_matrix(ring, label))
        dims[label] = float(np.max(values.real))
    return dims
