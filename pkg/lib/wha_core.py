"""Tablice skończenie wymiarowych C*-słabych algebr Hopfa i ich reprezentacje.

Tablica algebry to słownik z gęstymi tablicami ``numpy``::

    {
        'dim': n,
        'basis': [etykiety],
        'mult': (n, n, n)      # mult[x, y, z]: b_x b_y = Σ_z mult[x, y, z] b_z
        'comult': (n, n, n)    # comult[z, x, y]: Δ(b_z) = Σ comult[z, x, y] b_x ⊗ b_y
        'unit': (n,), 'counit': (n,),
        'antipode': (n, n)     # kolumna x to współczynniki S(b_x)
        'star': (n, n)         # v* = star @ conj(v)
    }

Stałe struktury trzymane są gęsto, a nie jako rzadkie mapy (x, y) → współczynniki.
Dla algebry Fibonacciego (n = 13) to 2197 wpisów na tablicę i ``np.einsum`` działa
na niej bezpośrednio; rzadka postać istnieje tylko w plikach wha.json (``lib/formats.py``).

Reprezentacja to słownik ``{'algebra', 'dim', 'mats' (n, d, d), 'flags',
'residuals', 'blocks', 'label'}``; ``blocks`` opisuje bloki nieprzywiedlne
(etykieta, zakres indeksów) gdy są znane.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg

from lib import fusion_ring
from lib.errors import DecompositionError, InputError, NumericalError, ShapeError
from lib.numerics import (
    DEFAULT_DENSE_CAP,
    DEFAULT_TOL,
    check_size,
    column_space,
    hermitian_sqrt,
    null_space,
    numerical_rank,
)

logger = logging.getLogger(__name__)

Algebra = Dict[str, Any]
Representation = Dict[str, Any]

EINSUM = {'optimize': True}


def make_algebra(
    basis: Sequence[str],
    mult: Any,
    comult: Any,
    unit: Any,
    counit: Any,
    antipode: Any,
    star: Any,
) -> Algebra:
    """Składa tablicę algebry i sprawdza zgodność kształtów.

    Raises:
        ShapeError: Gdy któraś tablica ma kształt niezgodny z liczbą elementów bazy.
    """
    dim = len(basis)
    arrays = {
        'mult': (np.asarray(mult, dtype=complex), (dim, dim, dim)),
        'comult': (np.asarray(comult, dtype=complex), (dim, dim, dim)),
        'unit': (np.asarray(unit, dtype=complex), (dim,)),
        'counit': (np.asarray(counit, dtype=complex), (dim,)),
        'antipode': (np.asarray(antipode, dtype=complex), (dim, dim)),
        'star': (np.asarray(star, dtype=complex), (dim, dim)),
    }
    for name, (array, shape) in arrays.items():
        if array.shape != shape:
            raise ShapeError(f'{name}: kształt {array.shape}, oczekiwano {shape}')
        if not np.all(np.isfinite(array)):
            raise ShapeError(f'{name}: wartości nieskończone lub NaN')
    algebra = {'dim': dim, 'basis': [str(label) for label in basis]}
    algebra.update({name: array for name, (array, _) in arrays.items()})
    return algebra


def basis_vector(alg: Algebra, label: str) -> np.ndarray:
    vector = np.zeros(alg['dim'], dtype=complex)
    vector[alg['basis'].index(label)] = 1
    return vector


def _vector(alg: Algebra, x: Any) -> np.ndarray:
    vector = np.asarray(x, dtype=complex)
    if vector.shape != (alg['dim'],):
        raise ShapeError(f'Wektor o kształcie {vector.shape} nie pasuje do algebry wymiaru {alg["dim"]}')
    return vector


def multiply(alg: Algebra, x: Any, y: Any) -> np.ndarray:
    """Iloczyn ``x·y`` dwóch wektorów współczynników."""
    return np.einsum('x,y,xyz->z', _vector(alg, x), _vector(alg, y), alg['mult'], **EINSUM)


def comultiply(alg: Algebra, x: Any, n: int = 2, cap: Optional[int] = None) -> np.ndarray:
    """Δ^(n-1)(x) jako tensor rzędu ``n`` w bazie n-krotnej.

    Raises:
        ValueError: Gdy ``n < 2``.
        SizeError: Gdy wynik przekroczyłby limit elementów.
    """
    if n < 2:
        raise ValueError('Rząd komnożenia musi wynosić co najmniej 2')
    dim = alg['dim']
    check_size(dim ** n, DEFAULT_DENSE_CAP if cap is None else cap, 'komnożenie')
    result = np.einsum('z,zxy->xy', _vector(alg, x), alg['comult'])
    for _ in range(n - 2):
        # rozwija pierwszy czynnik; koasocjatywność czyni nawiasowanie nieistotnym
        result = np.einsum('a...,apq->pq...', result, alg['comult'], **EINSUM)
    return result


def apply_antipode(alg: Algebra, x: Any) -> np.ndarray:
    return alg['antipode'] @ _vector(alg, x)


def apply_star(alg: Algebra, x: Any) -> np.ndarray:
    return alg['star'] @ np.conj(_vector(alg, x))


def unit_coproduct(alg: Algebra) -> np.ndarray:
    """Δ(1) jako macierz ``D1[a, b]``."""
    return np.einsum('z,zab->ab', alg['unit'], alg['comult'])


def counit_pairing(alg: Algebra) -> np.ndarray:
    """``Eps[x, y] = ε(b_x b_y)``."""
    return np.einsum('xyz,z->xy', alg['mult'], alg['counit'])


def counital_maps(alg: Algebra) -> Dict[str, np.ndarray]:
    """Macierze odwzorowań kojednostkowych ε_t(x) = Σ ε(1_(1) x) 1_(2) oraz ε_s(x) = Σ 1_(1) ε(x 1_(2)).

    Kolumna ``x`` zawiera współczynniki obrazu ``b_x``.
    """
    d1 = unit_coproduct(alg)
    eps = counit_pairing(alg)
    return {
        'target': np.einsum('az,ax->zx', d1, eps),
        'source': np.einsum('zb,xb->zx', d1, eps),
    }


def _check(name: str, anchor: str, residual: float, tol: float) -> Dict[str, Any]:
    return {
        'name': name,
        'anchor': anchor,
        'residual': float(residual),
        'tolerance': float(tol),
        'pass': bool(residual <= tol),
    }


def _max_abs(difference: np.ndarray) -> float:
    return float(np.max(np.abs(difference))) if difference.size else 0.0


def verify_axioms(alg: Algebra, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Sprawdza pełny zestaw aksjomatów C*-słabej algebry Hopfa.

    Residuum każdego aksjomatu to maksymalny moduł różnicy współczynników obu
    stron równości po wszystkich elementach bazy. Raport powstaje zawsze,
    także dla tablic niespełniających aksjomatów.

    Args:
        alg: Tablica algebry.
        tol: Próg residuum dla każdego aksjomatu.

    Returns:
        dict: ``{'checks': [...], 'overall': bool, 'failed': [nazwy]}``.
    """
    mult = alg['mult']
    comult = alg['comult']
    unit = alg['unit']
    counit = alg['counit']
    antipode = alg['antipode']
    star = alg['star']
    identity = np.eye(alg['dim'])
    checks: List[Dict[str, Any]] = []

    left = np.einsum('xyt,twz->xywz', mult, mult, **EINSUM)
    right = np.einsum('ywt,xtz->xywz', mult, mult, **EINSUM)
    checks.append(_check('associativity', 'mnożenie: łączność', _max_abs(left - right), tol))

    unit_residual = max(
        _max_abs(np.einsum('x,xyz->yz', unit, mult) - identity),
        _max_abs(np.einsum('y,xyz->xz', unit, mult) - identity),
    )
    checks.append(_check('unit', 'mnożenie: jedynka', unit_residual, tol))

    left = np.einsum('ztc,tab->zabc', comult, comult, **EINSUM)
    right = np.einsum('zat,tbc->zabc', comult, comult, **EINSUM)
    checks.append(_check('coassociativity', 'komnożenie: koasocjatywność', _max_abs(left - right), tol))

    counit_residual = max(
        _max_abs(np.einsum('a,zab->zb', counit, comult) - identity),
        _max_abs(np.einsum('b,zab->za', counit, comult) - identity),
    )
    checks.append(_check('counit', 'komnożenie: kojednostka', counit_residual, tol))

    left = np.einsum('xyz,zab->xyab', mult, comult, **EINSUM)
    right = np.einsum('xpq,yrs,pra,qsb->xyab', comult, comult, mult, mult, **EINSUM)
    checks.append(
        _check('comult_multiplicative', 'komnożenie jest multiplikatywne: Δ(xy) = Δ(x)Δ(y)', _max_abs(left - right), tol)
    )

    d1 = unit_coproduct(alg)
    d2 = np.einsum('z,ztc,tab->abc', unit, comult, comult, **EINSUM)
    first = np.einsum('pq,rs,qrb->pbs', d1, d1, mult, **EINSUM)
    second = np.einsum('rs,pq,rqb->pbs', d1, d1, mult, **EINSUM)
    checks.append(
        _check(
            'weak_unit',
            'aksjomat jedynki: Δ²(1) = (Δ(1)⊗1)(1⊗Δ(1)) = (1⊗Δ(1))(Δ(1)⊗1)',
            max(_max_abs(d2 - first), _max_abs(d2 - second)),
            tol,
        )
    )

    eps = counit_pairing(alg)
    triple = np.einsum('xyt,tws,s->xyw', mult, mult, counit, **EINSUM)
    first = np.einsum('yab,xa,bw->xyw', comult, eps, eps, **EINSUM)
    second = np.einsum('yab,xb,aw->xyw', comult, eps, eps, **EINSUM)
    checks.append(
        _check(
            'weak_counit',
            'aksjomat kojednostki: ε(xyz) = Σ ε(x y_(1)) ε(y_(2) z) = Σ ε(x y_(2)) ε(y_(1) z)',
            max(_max_abs(triple - first), _max_abs(triple - second)),
            tol,
        )
    )

    maps = counital_maps(alg)
    left = np.einsum('xpq,rq,prz->zx', comult, antipode, mult, **EINSUM)
    checks.append(
        _check('antipode_target', 'antypoda: Σ x_(1) S(x_(2)) = ε_t(x)', _max_abs(left - maps['target']), tol)
    )
    left = np.einsum('xpq,rp,rqz->zx', comult, antipode, mult, **EINSUM)
    checks.append(
        _check('antipode_source', 'antypoda: Σ S(x_(1)) x_(2) = ε_s(x)', _max_abs(left - maps['source']), tol)
    )
    # S(x_(1)) x_(2) S(x_(3))
    partial = np.einsum('xtw,tpq,rp,rqu->xuw', comult, comult, antipode, mult, **EINSUM)
    left = np.einsum('xuw,vw,uvz->zx', partial, antipode, mult, **EINSUM)
    checks.append(
        _check('antipode_sandwich', 'antypoda: Σ S(x_(1)) x_(2) S(x_(3)) = S(x)', _max_abs(left - antipode), tol)
    )

    checks.append(
        _check('star_involution', 'gwiazdka: (x*)* = x', _max_abs(star @ np.conj(star) - identity), tol)
    )
    left = np.einsum('xyz,wz->xyw', np.conj(mult), star, **EINSUM)
    right = np.einsum('py,qx,pqw->xyw', star, star, mult, **EINSUM)
    checks.append(
        _check('star_antihomomorphism', 'gwiazdka: (xy)* = y* x*', _max_abs(left - right), tol)
    )
    left = np.einsum('zx,zab->xab', star, comult, **EINSUM)
    right = np.einsum('xpq,ap,bq->xab', np.conj(comult), star, star, **EINSUM)
    checks.append(
        _check('star_cohomomorphism', 'gwiazdka: Δ(x*) = (*⊗*)Δ(x)', _max_abs(left - right), tol)
    )

    failed = [check['name'] for check in checks if not check['pass']]
    if failed:
        logger.info('Aksjomaty niespełnione: %s', ', '.join(failed))
    return {'checks': checks, 'overall': not failed, 'failed': failed}


def dual_label(label: str) -> str:
    return label[1:] if label.startswith('~') else '~' + label


def dual(alg: Algebra) -> Algebra:
    """Algebra dualna w bazie dualnej ``δ_x``.

    Mnożenie dualne pochodzi z komnożenia i odwrotnie; jedynką jest ε,
    kojednostką ewaluacja w 1, antypodą transpozycja S, a gwiazdka działa
    jako ``f*(x) = conj(f(S(x)*))``.

    Raises:
        InputError: Gdy macierz antypody jest osobliwa.
    """
    antipode = alg['antipode']
    if numerical_rank(antipode, 1e-12) < alg['dim']:
        raise InputError('Antypoda jest osobliwa; algebra dualna nie jest określona')
    return make_algebra(
        basis=[dual_label(label) for label in alg['basis']],
        mult=alg['comult'].transpose(1, 2, 0),
        comult=alg['mult'].transpose(2, 0, 1),
        unit=alg['counit'],
        counit=alg['unit'],
        antipode=antipode.T,
        star=antipode.T @ alg['star'].conj().T,
    )


def regular_representation(alg: Algebra) -> np.ndarray:
    """Macierze lewego mnożenia ``L[x][z, y] = mult[x, y, z]``."""
    return alg['mult'].transpose(0, 2, 1).copy()


def trace_functional(alg: Algebra) -> np.ndarray:
    """Ślad reprezentacji regularnej jako wektor ``t[z] = Tr L_z``."""
    return np.einsum('zyy->z', alg['mult'])


def center_basis(alg: Algebra, threshold: float = 1e-8) -> np.ndarray:
    """Baza centrum: kolumny ``z`` spełniające ``z·b_y = b_y·z`` dla wszystkich ``y``."""
    mult = alg['mult']
    dim = alg['dim']
    system = (mult.transpose(1, 2, 0) - mult.transpose(0, 2, 1)).reshape(dim * dim, dim)
    return null_space(system, threshold)


def central_idempotents(
    alg: Algebra, seed: int = 7, threshold: float = 1e-8, attempts: int = 8
) -> List[Dict[str, Any]]:
    """Minimalne idempotenty centralne wraz z rzędem w reprezentacji regularnej.

    Idempotenty są wektorami własnymi mnożenia przez generyczny element
    centralny. Wynik jest posortowany po rzędzie, potem po współczynnikach.

    Raises:
        NumericalError: Gdy nie udało się rozdzielić wartości własnych.
    """
    center = center_basis(alg, threshold)
    regular = regular_representation(alg)
    size = center.shape[1]
    for attempt in range(attempts):
        rng = np.random.default_rng(seed + attempt)
        generic = center @ rng.normal(size=size)
        action = np.einsum('x,xzy->zy', generic, regular)
        reduced = np.linalg.lstsq(center, action @ center, rcond=None)[0]
        values, vectors = np.linalg.eig(reduced)
        gaps = [abs(values[i] - values[j]) for i in range(size) for j in range(i)]
        if gaps and min(gaps) < 1e-6:
            logger.debug('Zbyt bliskie wartości własne elementu centralnego, próba %d', attempt)
            continue

        idempotents = []
        for column in range(size):
            vector = center @ vectors[:, column]
            square = multiply(alg, vector, vector)
            scale = np.vdot(vector, square) / np.vdot(vector, vector)
            element = vector / scale
            residual = float(np.linalg.norm(multiply(alg, element, element) - element))
            if residual > 1e-6:
                raise NumericalError('Wektor własny centrum nie jest idempotentem', residual)
            rank = numerical_rank(np.einsum('x,xzy->zy', element, regular), threshold)
            idempotents.append({'element': element, 'rank': rank, 'residual': residual})

        idempotents.sort(
            key=lambda item: (item['rank'], tuple(np.round(item['element'].real, 8)), tuple(np.round(item['element'].imag, 8)))
        )
        return idempotents
    raise NumericalError('Nie udało się wyznaczyć idempotentów centralnych', float('inf'))


def make_representation(
    alg: Algebra,
    mats: Any,
    tol: float = DEFAULT_TOL,
    blocks: Optional[List[Dict[str, Any]]] = None,
    label: Optional[str] = None,
    threshold: float = 1e-8,
) -> Representation:
    """Tworzy reprezentację i wyznacza flagi ``is_star``, ``is_faithful``, ``is_unital``.

    Raises:
        ShapeError: Gdy macierze mają zły kształt.
        NumericalError: Gdy macierze nie spełniają ρ(xy) = ρ(x)ρ(y).
    """
    matrices = np.asarray(mats, dtype=complex)
    if matrices.ndim != 3 or matrices.shape[0] != alg['dim'] or matrices.shape[1] != matrices.shape[2]:
        raise ShapeError(f'Macierze reprezentacji mają kształt {matrices.shape}')
    dim = matrices.shape[1]

    products = np.einsum('xij,yjk->xyik', matrices, matrices, **EINSUM)
    expected = np.einsum('xyz,zik->xyik', alg['mult'], matrices, **EINSUM)
    homomorphism = _max_abs(products - expected)
    if homomorphism > tol:
        raise NumericalError('Macierze nie tworzą reprezentacji algebry', homomorphism)

    starred = np.einsum('ux,uij->xij', alg['star'], matrices)
    star_residual = _max_abs(starred - matrices.conj().transpose(0, 2, 1))
    unit_residual = _max_abs(np.einsum('x,xij->ij', alg['unit'], matrices) - np.eye(dim))
    faithful = numerical_rank(matrices.reshape(alg['dim'], dim * dim), threshold) == alg['dim']

    return {
        'algebra': alg,
        'dim': dim,
        'mats': matrices,
        'flags': {'is_star': star_residual <= tol, 'is_faithful': faithful, 'is_unital': unit_residual <= tol},
        'residuals': {'homomorphism': homomorphism, 'star': star_residual, 'unital': unit_residual},
        'blocks': blocks or [],
        'label': label,
    }


def evaluate(rep: Representation, coeffs: Any) -> np.ndarray:
    """ρ(Σ c_x b_x) = Σ c_x ρ(b_x)."""
    return np.einsum('x,xij->ij', _vector(rep['algebra'], coeffs), rep['mats'])


def block_irreps(rep: Representation, tol: float = DEFAULT_TOL) -> List[Representation]:
    """Podreprezentacje odpowiadające opisanym blokom, z etykietami bloków."""
    return [
        make_representation(
            rep['algebra'],
            rep['mats'][:, block['start']:block['stop'], block['start']:block['stop']],
            tol,
            label=block['label'],
        )
        for block in rep['blocks']
    ]


def block_projector(rep: Representation, label: str) -> np.ndarray:
    """Rzutnik na blok o etykiecie ``label``.

    Raises:
        InputError: Gdy reprezentacja nie ma takiego bloku.
    """
    for block in rep['blocks']:
        if block['label'] == label:
            projector = np.zeros((rep['dim'], rep['dim']), dtype=complex)
            index = np.arange(block['start'], block['stop'])
            projector[index, index] = 1
            return projector
    raise InputError(f'Reprezentacja nie ma bloku {label!r}')


def block_labels(rep: Representation) -> List[str]:
    return [block['label'] for block in rep['blocks']]


def rename_blocks(rep: Representation, mapping: Dict[str, str]) -> Representation:
    renamed = dict(rep)
    renamed['blocks'] = [dict(block, label=mapping.get(block['label'], block['label'])) for block in rep['blocks']]
    return renamed


def monoidal_product(r1: Representation, r2: Representation, cap: Optional[int] = None) -> Representation:
    """Iloczyn monoidalny (r1 ⊗ r2)∘Δ na pełnej przestrzeni iloczynu tensorowego.

    Raises:
        InputError: Gdy reprezentacje dotyczą różnych algebr.
        SizeError: Gdy wynik przekroczyłby limit elementów.
    """
    alg = r1['algebra']
    if r2['algebra'] is not alg and r2['algebra']['basis'] != alg['basis']:
        raise InputError('Iloczyn monoidalny wymaga reprezentacji tej samej algebry')
    size = r1['dim'] * r2['dim']
    check_size(alg['dim'] * size * size, DEFAULT_DENSE_CAP if cap is None else cap, 'iloczyn monoidalny')
    mats = np.einsum('xpq,pij,qkl->xikjl', alg['comult'], r1['mats'], r2['mats'], **EINSUM)
    return make_representation(alg, mats.reshape(alg['dim'], size, size))


def _intertwiners(rep: Representation, irrep: Representation, threshold: float) -> List[np.ndarray]:
    k = irrep['dim']
    d = rep['dim']
    identity_k = np.eye(k)
    identity_d = np.eye(d)
    rows = [
        np.kron(identity_k, rep['mats'][x].T) - np.kron(irrep['mats'][x], identity_d)
        for x in range(rep['algebra']['dim'])
    ]
    kernel = null_space(np.vstack(rows), threshold)
    return [kernel[:, column].reshape(k, d) for column in range(kernel.shape[1])]


def decompose(
    rep: Representation,
    irreps: Sequence[Representation],
    tol: float = DEFAULT_TOL,
    threshold: float = 1e-8,
) -> Dict[str, Any]:
    """Rozkład reprezentacji gwiazdkowej na nieprzywiedlne.

    Krotność ``m_c`` to wymiar przestrzeni rozwiązań ``W ρ(x) = σ_c(x) W``.
    Izometrie to ortonormalizowane ``W†``; residuum mierzy odtworzenie
    ``ρ(x)`` z bloków oraz ortonormalność kolumn.

    Returns:
        dict: ``{'blocks': [{'irrep', 'multiplicity', 'isometries'}], 'multiplicities', 'residual'}``.

    Raises:
        DecompositionError: Gdy lista nieprzywiedlnych nie odtwarza reprezentacji.
    """
    blocks = []
    columns = []
    block_mats = []
    for position, irrep in enumerate(irreps):
        label = irrep.get('label') or str(position)
        found = _intertwiners(rep, irrep, threshold)
        isometries: List[np.ndarray] = []
        if found:
            gram = np.array([[np.trace(wi @ wj.conj().T) / irrep['dim'] for wj in found] for wi in found])
            try:
                coefficients = hermitian_sqrt(gram, inverse=True).T
            except NumericalError as error:
                raise DecompositionError('Przestrzeń splataczy jest zdegenerowana', error.residual) from error
            for column in range(len(found)):
                combined = sum(coefficients[i, column] * found[i] for i in range(len(found)))
                isometries.append(combined.conj().T)
        for isometry in isometries:
            columns.append(isometry)
            block_mats.append(irrep['mats'])
        blocks.append({'irrep': label, 'multiplicity': len(isometries), 'isometries': isometries})

    dim = rep['dim']
    if columns:
        stacked = np.hstack(columns)
        diagonal = np.array([scipy.linalg.block_diag(*[mats[x] for mats in block_mats]) for x in range(rep['algebra']['dim'])])
        rebuilt = np.einsum('ia,xab,jb->xij', stacked, diagonal, stacked.conj(), **EINSUM)
        orthonormality = _max_abs(stacked.conj().T @ stacked - np.eye(stacked.shape[1]))
    else:
        rebuilt = np.zeros_like(rep['mats'])
        orthonormality = 0.0
    residual = float(np.max(np.linalg.norm(rep['mats'] - rebuilt, axis=(1, 2)))) + orthonormality
    if residual > tol * max(1.0, dim):
        raise DecompositionError('Lista nieprzywiedlnych nie odtwarza reprezentacji', residual)
    return {
        'blocks': blocks,
        'multiplicities': {block['irrep']: block['multiplicity'] for block in blocks},
        'residual': residual,
    }


def _block_irrep(
    alg: Algebra,
    idempotent: np.ndarray,
    regular: np.ndarray,
    whitening: np.ndarray,
    rng: np.random.Generator,
    threshold: float,
) -> Optional[np.ndarray]:
    """Macierze jednej nieprzywiedlnej bloku Wedderburna albo ``None`` przy zdegenerowanym losowaniu."""
    projector = whitening @ np.einsum('x,xzy->zy', idempotent, regular) @ np.linalg.inv(whitening)
    space = column_space(projector, threshold)
    size = int(round(np.sqrt(space.shape[1])))
    if size * size != space.shape[1]:
        raise NumericalError('Blok Wedderburna nie ma wymiaru kwadratowego', float(space.shape[1]))

    if size == 1:
        vectors = space
    else:
        sample = rng.normal(size=alg['dim']) + 1j * rng.normal(size=alg['dim'])
        hermitian = sample + apply_star(alg, sample)
        element = multiply(alg, multiply(alg, idempotent, hermitian), idempotent)
        # prawe mnożenie przez element hermitowski komutuje z lewym działaniem
        right = np.einsum('x,axz->za', element, alg['mult'])
        reduced = space.conj().T @ whitening @ right @ np.linalg.inv(whitening) @ space
        values, eigvecs = np.linalg.eigh((reduced + reduced.conj().T) / 2)
        scale = max(1.0, float(np.max(np.abs(values))))
        if values[size - 1] - values[0] > 1e-8 * scale or values[size] - values[size - 1] < 1e-6 * scale:
            return None
        vectors = space @ eigvecs[:, :size]

    mats = np.einsum('ia,xij,jb->xab', vectors.conj(), whitening @ regular @ np.linalg.inv(whitening), vectors, **EINSUM)
    invariance = _max_abs(np.einsum('xij,jb->xib', whitening @ regular @ np.linalg.inv(whitening), vectors)
                          - np.einsum('ia,xab->xib', vectors, mats))
    if invariance > 1e-8:
        return None
    return mats


def star_representation(
    alg: Algebra,
    tol: float = DEFAULT_TOL,
    seed: int = 11,
    attempts: int = 8,
    prefix: str = 'b',
    threshold: float = 1e-8,
) -> Representation:
    """Wierna reprezentacja gwiazdkowa rozłożona na bloki nieprzywiedlne.

    Konstrukcja: reprezentacja regularna w bazie ortonormalnej względem
    iloczynu ``⟨a, b⟩ = t(a* b)`` (t to ślad regularny), minimalne idempotenty
    centralne, a w każdym bloku lewy ideał minimalny wyznaczony przez
    wektory własne prawego mnożenia przez losowy element hermitowski.
    Bloki są etykietowane ``{prefix}0``, ``{prefix}1``... w kolejności
    ``central_idempotents``.

    Raises:
        NumericalError: Gdy forma śladowa nie jest dodatnio określona lub
            rozdzielenie bloku nie powiodło się.
    """
    regular = regular_representation(alg)
    trace = trace_functional(alg)
    gram = np.einsum('ui,ujz,z->ij', alg['star'], alg['mult'], trace, **EINSUM)
    gram = (gram + gram.conj().T) / 2
    whitening = hermitian_sqrt(gram)

    irreps = []
    for position, item in enumerate(central_idempotents(alg, seed, threshold, attempts)):
        for attempt in range(attempts):
            rng = np.random.default_rng(seed + 101 * position + attempt)
            mats = _block_irrep(alg, item['element'], regular, whitening, rng, threshold)
            if mats is not None:
                irreps.append(mats)
                break
        else:
            raise NumericalError(f'Nie udało się wydzielić nieprzywiedlnej bloku {position}', float('inf'))

    blocks = []
    start = 0
    for position, mats in enumerate(irreps):
        blocks.append({'label': f'{prefix}{position}', 'start': start, 'stop': start + mats.shape[1]})
        start += mats.shape[1]
    full = np.array([scipy.linalg.block_diag(*[mats[x] for mats in irreps]) for x in range(alg['dim'])])
    logger.debug('Reprezentacja gwiazdkowa: bloki %s', [block['stop'] - block['start'] for block in blocks])
    return make_representation(alg, full, tol, blocks=blocks)


def fusion_rules(irreps: Sequence[Representation], tol: float = DEFAULT_TOL, threshold: float = 1e-8) -> Dict[str, Any]:
    """Pierścień fuzji nieprzywiedlnych: ``N_ab^c`` z rozkładu Ψ_a ⊠ Ψ_b.

    Jedynką jest etykieta, dla której ``N_a`` jest macierzą jednostkową;
    dualność odczytywana jest z ``N_ab^I = 1``. Wymiary to wartości
    Frobeniusa-Perrona macierzy fuzji.

    Raises:
        DecompositionError: Gdy iloczyn nie rozkłada się na podane nieprzywiedlne.
        NumericalError: Gdy nie ma jedynki lub dualności.
    """
    labels = [irrep.get('label') or str(position) for position, irrep in enumerate(irreps)]
    size = len(labels)
    tensor = np.zeros((size, size, size), dtype=int)
    for i, left in enumerate(irreps):
        for j, right in enumerate(irreps):
            result = decompose(monoidal_product(left, right), irreps, tol, threshold)
            for k, label in enumerate(labels):
                tensor[i, j, k] = result['multiplicities'][label]

    identity = np.eye(size, dtype=int)
    units = [i for i in range(size) if np.array_equal(tensor[i], identity) and np.array_equal(tensor[:, i, :], identity)]
    if len(units) != 1:
        raise NumericalError('Nie znaleziono jednoznacznej jedynki pierścienia fuzji', float(len(units)))
    unit = units[0]
    dual_map = {}
    for i in range(size):
        partners = [j for j in range(size) if tensor[i, j, unit] == 1]
        if len(partners) != 1:
            raise NumericalError(f'Etykieta {labels[i]} nie ma jednoznacznego duala', float(len(partners)))
        dual_map[labels[i]] = labels[partners[0]]

    entries = [
        (labels[i], labels[j], labels[k], int(tensor[i, j, k]))
        for i, j, k in zip(*np.nonzero(tensor))
    ]
    ring = fusion_ring.make_ring(labels, labels[unit], dual_map, entries)
    ring['dims'] = fusion_ring.perron_dimensions(ring)
    return ring
