"""Gęste podłoże numeryczne: iloczyny tensorowe, ślady częściowe, widma, residua.

Macierze to ``numpy.ndarray`` typu ``complex128``. Funkcje są czyste i nie
modyfikują argumentów.
"""

import logging
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg

from lib.errors import NumericalError, ShapeError, SizeError

logger = logging.getLogger(__name__)

DEFAULT_DENSE_CAP = 2 ** 24
DEFAULT_TOL = 1e-9
MAX_EIG_DIM = 4096


def as_matrix(data: Any) -> np.ndarray:
    """Zamienia dane na macierz zespoloną i sprawdza jej poprawność.

    Raises:
        ShapeError: Gdy dane nie są dwuwymiarowe lub zawierają NaN/Inf.
    """
    matrix = np.asarray(data, dtype=complex)
    if matrix.ndim != 2:
        raise ShapeError(f'Oczekiwano macierzy, otrzymano tablicę o wymiarze {matrix.ndim}')
    if not np.all(np.isfinite(matrix)):
        raise ShapeError('Macierz zawiera wartości nieskończone lub NaN')
    return matrix


def check_size(entries: int, cap: Optional[int] = None, what: str = 'macierz') -> None:
    """Rzuca ``SizeError``, gdy liczba elementów przekracza limit."""
    limit = DEFAULT_DENSE_CAP if cap is None else cap
    if entries > limit:
        raise SizeError(f'{what}: {entries} elementów przekracza limit {limit}')


def kron(a: Any, b: Any, cap: Optional[int] = None) -> np.ndarray:
    """Iloczyn Kroneckera z kontrolą rozmiaru wyniku.

    Element ``(i1 i2, j1 j2)`` wyniku jest równy ``a[i1, j1] * b[i2, j2]``.

    Raises:
        SizeError: Gdy wynik przekroczyłby limit elementów.
    """
    left = as_matrix(a)
    right = as_matrix(b)
    check_size(left.size * right.size, cap, 'iloczyn Kroneckera')
    return np.kron(left, right)


def kron_all(factors: Sequence[Any], cap: Optional[int] = None) -> np.ndarray:
    """Iloczyn Kroneckera listy macierzy (od lewej)."""
    return reduce(lambda acc, item: kron(acc, item, cap), factors[1:], as_matrix(factors[0]))


def kron_power(matrix: Any, times: int, cap: Optional[int] = None) -> np.ndarray:
    """``matrix`` w ``times``-krotnej potędze tensorowej."""
    return kron_all([matrix] * times, cap)


def is_hermitian(matrix: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    scale = max(1.0, float(np.linalg.norm(matrix)))
    return float(np.linalg.norm(matrix - matrix.conj().T)) <= tol * scale


def eig_spectrum(m: Any, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Pełne widmo macierzy kwadratowej wraz z residuum.

    Dla macierzy hermitowskich używany jest ``eigh``, a residuum to
    ``max |Av - λv|``. Dla pozostałych wartości własne są odczytywane z
    przekątnej zespolonej postaci Schura, a residuum to ``‖AZ - ZT‖_F``.

    Args:
        m: Macierz kwadratowa o wymiarze co najwyżej 4096.
        tol: Tolerancja względna (względem normy Frobeniusa macierzy).

    Returns:
        dict: ``{'eigenvalues': ndarray, 'residual': float}``.

    Raises:
        ShapeError: Gdy macierz nie jest kwadratowa.
        SizeError: Gdy wymiar przekracza 4096.
        NumericalError: Gdy procedura nie zbiegła lub residuum przekracza tolerancję.
    """
    matrix = as_matrix(m)
    rows, cols = matrix.shape
    if rows != cols:
        raise ShapeError(f'Widmo wymaga macierzy kwadratowej, otrzymano {rows}x{cols}')
    if rows > MAX_EIG_DIM:
        raise SizeError(f'Wymiar {rows} przekracza limit {MAX_EIG_DIM} dla rozkładu własnego')
    scale = max(1.0, float(np.linalg.norm(matrix)))

    try:
        if is_hermitian(matrix, tol):
            values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
            residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * values, axis=0))) if rows else 0.0
            eigenvalues = values.astype(complex)
        else:
            upper, unitary = scipy.linalg.schur(matrix, output='complex')
            residual = float(np.linalg.norm(matrix @ unitary - unitary @ upper))
            eigenvalues = np.diag(upper).copy()
    except (np.linalg.LinAlgError, ValueError) as error:
        raise NumericalError('Rozkład własny nie zbiegł', float('inf')) from error

    if residual > tol * scale:
        raise NumericalError('Residuum rozkładu własnego przekracza tolerancję', residual)
    return {'eigenvalues': eigenvalues, 'residual': residual}


def partial_trace(m: Any, site_dims: Sequence[int], site: int) -> np.ndarray:
    """Ślad częściowy po jednym węźle (indeks od zera).

    Raises:
        ShapeError: Gdy wymiar macierzy nie zgadza się z iloczynem ``site_dims``
            albo indeks węzła jest spoza zakresu.
    """
    matrix = as_matrix(m)
    dims = [int(dim) for dim in site_dims]
    total = int(np.prod(dims)) if dims else 1
    if matrix.shape != (total, total):
        raise ShapeError(f'Macierz {matrix.shape} nie pasuje do wymiarów węzłów {dims}')
    if not 0 <= site < len(dims):
        raise ShapeError(f'Węzeł {site} spoza zakresu 0..{len(dims) - 1}')

    count = len(dims)
    tensor = matrix.reshape(dims + dims)
    reduced = np.trace(tensor, axis1=site, axis2=site + count)
    rest = total // dims[site]
    return reduced.reshape(rest, rest)


def frob_residual(a: Any, b: Any) -> float:
    """Norma Frobeniusa różnicy ``a - b``.

    Raises:
        ShapeError: Gdy kształty się różnią.
    """
    left = np.asarray(a, dtype=complex)
    right = np.asarray(b, dtype=complex)
    if left.shape != right.shape:
        raise ShapeError(f'Różne kształty: {left.shape} i {right.shape}')
    return float(np.linalg.norm(left - right))


def relative_residual(a: Any, b: Any) -> float:
    """Residuum Frobeniusa odniesione do skali ``max(1, ‖b‖)``."""
    return frob_residual(a, b) / max(1.0, float(np.linalg.norm(np.asarray(b))))


def null_space(system: np.ndarray, threshold: float = 1e-8) -> np.ndarray:
    """Baza ortonormalna jądra; kolumny wyniku rozpinają rozwiązania ``system @ v = 0``.

    Próg jest względny wobec największej wartości osobliwej.
    """
    if system.size == 0:
        return np.eye(system.shape[1], dtype=complex)
    return scipy.linalg.null_space(system, rcond=threshold)


def numerical_rank(matrix: np.ndarray, threshold: float = 1e-8) -> int:
    """Rząd macierzy przy progu względnym na wartościach osobliwych."""
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0:
        return 0
    return int(np.sum(singular > threshold * max(1.0, singular[0])))


def column_space(matrix: np.ndarray, threshold: float = 1e-8) -> np.ndarray:
    """Baza ortonormalna obrazu macierzy."""
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0), dtype=complex)
    return scipy.linalg.orth(matrix, rcond=threshold)


def hermitian_sqrt(matrix: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Pierwiastek (lub odwrotny pierwiastek) dodatnio określonej macierzy hermitowskiej.

    Raises:
        NumericalError: Gdy macierz ma niedodatnią (bliską zeru) wartość własną.
    """
    values, vectors = np.linalg.eigh((matrix + matrix.conj().T) / 2)
    if values.size and values.min() <= 1e-12 * max(1.0, values.max()):
        raise NumericalError('Macierz nie jest dodatnio określona', float(values.min()))
    power = -0.5 if inverse else 0.5
    return (vectors * values ** power) @ vectors.conj().T


def group_eigenvalues(values: np.ndarray, tol: float) -> List[List[int]]:
    """Grupuje indeksy wartości (zespolonych) leżących bliżej niż ``tol``.

    Wartości porządkowane są po części rzeczywistej, potem urojonej; grupy
    powstają łańcuchowo, więc wynik jest deterministyczny.
    """
    order = sorted(range(len(values)), key=lambda i: (round(values[i].real, 9), round(values[i].imag, 9)))
    groups: List[List[int]] = []
    for index in order:
        for group in groups:
            if abs(values[group[0]] - values[index]) <= tol:
                group.append(index)
                break
        else:
            groups.append([index])
    return groups
