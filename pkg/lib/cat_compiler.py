"""Kompilacja unitarnej kategorii fuzji bez krotności do tablicy słabej algebry Hopfa.

Dane kategorii to słownik ``{'ring': pierścień, 'f': {(a, b, c, d, e, f): F}, 'kappa': {a: κ_a}}``,
gdzie ``f[(a, b, c, d, e, f)] = [F^{abc}_d]_{e, f}`` przeprowadza drzewo
``((a b)_e c)_d`` w ``(a (b c)_f)_d``. Brakujące wpisy dopuszczalnych drzew
mają wartość 1.

Kompilacja przebiega dwuetapowo: najpierw budowana jest algebra H
endomorfizmów przestrzeni drzew fuzji (baza jednostek macierzowych
``E^c_{(m,n),(m',n')}``), a następnie każdy diagram bazowy
``(a, c1, c2, d1, d2)`` jest renderowany jako funkcjonał na H i wszystkie
struktury algebry dualnej są ponownie rozwijane w bazie diagramów przez
rozwiązanie układu liniowego.
"""

import itertools
import logging
import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from lib import fusion_ring
from lib.errors import CompilationError, UnsupportedInputError
from lib.numerics import DEFAULT_TOL, numerical_rank
from lib.wha_core import Algebra, make_algebra, verify_axioms

logger = logging.getLogger(__name__)

FKey = Tuple[str, str, str, str, str, str]


def make_fsymbols(ring: Dict[str, Any], entries: Dict[FKey, complex], kappa: Optional[Dict[str, complex]] = None) -> Dict[str, Any]:
    """Składa dane symboli F; brakujące κ przyjmują wartość +1."""
    kappa = dict(kappa or {})
    for label in ring['labels']:
        kappa.setdefault(label, 1.0)
    return {'ring': ring, 'f': {tuple(key): complex(value) for key, value in entries.items()}, 'kappa': kappa}


def _n(ring: Dict[str, Any], a: str, b: str, c: str) -> int:
    return fusion_ring.fusion_coefficient(ring, a, b, c)


def dimensions(data: Dict[str, Any]) -> Dict[str, float]:
    """Wymiary kwantowe z danych pierścienia albo z wartości Frobeniusa-Perrona."""
    ring = data['ring']
    return dict(ring['dims']) if ring.get('dims') else fusion_ring.perron_dimensions(ring)


def admissible(ring: Dict[str, Any], a: str, b: str, c: str, d: str, e: str, f: str) -> bool:
    return bool(_n(ring, a, b, e) and _n(ring, e, c, d) and _n(ring, b, c, f) and _n(ring, a, f, d))


def f_value(data: Dict[str, Any], a: str, b: str, c: str, d: str, e: str, f: str) -> complex:
    """``[F^{abc}_d]_{e,f}``; zero dla niedopuszczalnych drzew."""
    if not admissible(data['ring'], a, b, c, d, e, f):
        return 0j
    return data['f'].get((a, b, c, d, e, f), 1.0 + 0j)


def f_matrix(data: Dict[str, Any], a: str, b: str, c: str, d: str) -> Tuple[np.ndarray, List[str], List[str]]:
    """Macierz ``F^{abc}_d`` z listami dopuszczalnych etykiet wierszy ``e`` i kolumn ``f``."""
    ring = data['ring']
    rows = [e for e in ring['labels'] if _n(ring, a, b, e) and _n(ring, e, c, d)]
    cols = [f for f in ring['labels'] if _n(ring, b, c, f) and _n(ring, a, f, d)]
    matrix = np.array([[f_value(data, a, b, c, d, e, f) for f in cols] for e in rows], dtype=complex)
    return matrix.reshape(len(rows), len(cols)), rows, cols


def frobenius_schur(data: Dict[str, Any]) -> Dict[str, complex]:
    """κ_a = d_a [F^{a ā a}_a]_{I,I} wyliczone z symboli F."""
    ring = data['ring']
    dims = dimensions(data)
    unit = ring['unit']
    return {
        label: complex(dims[label] * f_value(data, label, ring['dual'][label], label, label, unit, unit))
        for label in ring['labels']
    }


def zigzag_residual(data: Dict[str, Any]) -> float:
    """Residuum tożsamości zygzakowatych dla zgięć z wbudowanym κ.

    Zgięcie ``a`` w lewo i w prawo daje ``d_a F^{aāa}_a[I,I] conj(κ_a)``,
    co musi być równe 1 dla obu orientacji (dla ``a`` i ``ā``).
    """
    ring = data['ring']
    dims = dimensions(data)
    unit = ring['unit']
    residual = 0.0
    for label in ring['labels']:
        for x in (label, ring['dual'][label]):
            loop = dims[x] * f_value(data, x, ring['dual'][x], x, x, unit, unit) * np.conj(data['kappa'][x])
            residual = max(residual, abs(loop - 1.0))
    return float(residual)


def _check(name: str, anchor: str, residual: float, tol: float) -> Dict[str, Any]:
    return {'name': name, 'anchor': anchor, 'residual': float(residual), 'tolerance': float(tol), 'pass': bool(residual <= tol)}


def validate_category(data: Dict[str, Any], tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Sprawdza pięciokąt, unitarność, trójkąt, wymiary i wskaźniki Frobeniusa-Schura.

    Raport powstaje zawsze.
    """
    ring = data['ring']
    labels = ring['labels']
    unit = ring['unit']
    checks = []

    pentagon = 0.0
    for a, b, c, d, e in itertools.product(labels, repeat=5):
        for f, g, k, l in itertools.product(labels, repeat=4):
            left = f_value(data, f, c, d, e, g, l) * f_value(data, a, b, l, e, f, k)
            right = sum(
                f_value(data, a, b, c, g, f, h) * f_value(data, a, h, d, e, g, k) * f_value(data, b, c, d, k, h, l)
                for h in labels
            )
            pentagon = max(pentagon, abs(left - right))
    checks.append(_check('pentagon', 'równanie pięciokąta symboli F', pentagon, tol))

    unitarity = 0.0
    for a, b, c, d in itertools.product(labels, repeat=4):
        matrix, rows, cols = f_matrix(data, a, b, c, d)
        if not rows and not cols:
            continue
        if len(rows) != len(cols):
            unitarity = max(unitarity, 1.0)
            continue
        unitarity = max(unitarity, float(np.max(np.abs(matrix @ matrix.conj().T - np.eye(len(rows))))))
    checks.append(_check('unitarity', 'macierze F są unitarne', unitarity, tol))

    triangle = 0.0
    for a, b, c in itertools.product(labels, repeat=3):
        if _n(ring, a, b, c):
            triangle = max(
                triangle,
                abs(f_value(data, a, unit, b, c, a, b) - 1.0),
                abs(f_value(data, unit, a, b, c, a, c) - 1.0),
                abs(f_value(data, a, b, unit, c, c, b) - 1.0),
            )
    checks.append(_check('triangle', 'symbole F z nogą jedynki są identycznością', triangle, tol))

    ring_residuals = fusion_ring.check_ring(ring, dimensions(data))
    checks.append(_check('fusion_ring', 'jedynka, dualność i łączność N_ab^c', max(ring_residuals['unit'], ring_residuals['dual'], ring_residuals['associativity']), tol))
    checks.append(_check('dims', 'd_a d_b = Σ_c N_ab^c d_c', ring_residuals.get('dims', 0.0), tol))

    computed = frobenius_schur(data)
    kappa = max(abs(computed[label] - data['kappa'][label]) for label in labels)
    checks.append(_check('frobenius_schur', 'κ_a = d_a [F^{aāa}_a]_{I,I}', kappa, tol))
    checks.append(_check('zigzag', 'tożsamości zygzakowate', zigzag_residual(data), tol))

    failed = [check['name'] for check in checks if not check['pass']]
    if failed:
        logger.info('Walidacja kategorii nie powiodła się: %s', ', '.join(failed))
    return {'checks': checks, 'overall': not failed, 'failed': failed}


def _pairs(ring: Dict[str, Any], a: str) -> List[Tuple[str, str]]:
    """Pary ``(x, y)`` z N_{x a}^y = 1, leksykograficznie według kolejności etykiet."""
    return [(x, y) for x in ring['labels'] for y in ring['labels'] if _n(ring, x, a, y)]


def enumerate_basis(ring: Dict[str, Any]) -> List[Dict[str, str]]:
    """Diagramy bazowe ``(a, c1, c2, d1, d2)`` z N_{c2 a}^{c1} = N_{d2 a}^{d1} = 1.

    Raises:
        UnsupportedInputError: Gdy pierścień ma krotności większe od 1.
    """
    if not fusion_ring.is_multiplicity_free(ring):
        raise UnsupportedInputError('Obsługiwane są wyłącznie kategorie bez krotności fuzji (N_ab^c ≤ 1)')
    basis = []
    for a in ring['labels']:
        for c2, c1 in _pairs(ring, a):
            for d2, d1 in _pairs(ring, a):
                basis.append({'a': a, 'c1': c1, 'c2': c2, 'd1': d1, 'd2': d2})
    return basis


def diagram_label(elem: Dict[str, str]) -> str:
    return f"{elem['a']}|{elem['c1']},{elem['c2']}|{elem['d1']},{elem['d2']}"


def counit_closed_form(elem: Dict[str, str], dims: Dict[str, float]) -> complex:
    """δ_{c1 d1} δ_{c2 d2} sqrt(d_a d_{c2} / d_{c1})."""
    if elem['c1'] != elem['d1'] or elem['c2'] != elem['d2']:
        return 0j
    return complex(np.sqrt(dims[elem['a']] * dims[elem['c2']] / dims[elem['c1']]))


def _endomorphism_basis(ring: Dict[str, Any]) -> List[Tuple[str, Tuple[str, str], Tuple[str, str]]]:
    return [(c, row, col) for c in ring['labels'] for row in _pairs(ring, c) for col in _pairs(ring, c)]


def fiber_functor_algebra(data: Dict[str, Any]) -> Algebra:
    """Algebra H endomorfizmów przestrzeni drzew fuzji w bazie jednostek macierzowych.

    Blok ``c`` działa na przestrzeni par ``(m, n)`` z N_{m c}^n = 1.
    Komnożenie rozcina drzewo symbolem F:
    Δ(E^c_{(m,n),(m',n')}) = Σ conj(F^{mab}_n[k,c]) F^{m'ab}_{n'}[k',c] E^a_{(m,k),(m',k')} ⊗ E^b_{(k,n),(k',n')}.

    Raises:
        UnsupportedInputError: Gdy pierścień ma krotności większe od 1.
    """
    ring = data['ring']
    if not fusion_ring.is_multiplicity_free(ring):
        raise UnsupportedInputError('Obsługiwane są wyłącznie kategorie bez krotności fuzji (N_ab^c ≤ 1)')
    labels = ring['labels']
    unit_label = ring['unit']
    dims = dimensions(data)
    basis = _endomorphism_basis(ring)
    index = {element: position for position, element in enumerate(basis)}
    dim = len(basis)

    mult = np.zeros((dim, dim, dim), dtype=complex)
    comult = np.zeros((dim, dim, dim), dtype=complex)
    unit = np.zeros(dim, dtype=complex)
    counit = np.zeros(dim, dtype=complex)
    antipode = np.zeros((dim, dim), dtype=complex)
    star = np.zeros((dim, dim), dtype=complex)

    def gauge(c: str, m: str, n: str) -> complex:
        c_bar = ring['dual'][c]
        return 1.0 / (np.sqrt(dims[c_bar]) * np.conj(f_value(data, n, c_bar, c, n, m, unit_label)))

    for position, (c, row, col) in enumerate(basis):
        for other in _pairs(ring, c):
            mult[position, index[(c, col, other)], index[(c, row, other)]] = 1
        if row == col:
            unit[position] = 1
        if c == unit_label:
            counit[position] = 1
        star[index[(c, col, row)], position] = 1

        (m, n), (m2, n2) = row, col
        c_bar = ring['dual'][c]
        antipode[index[(c_bar, (n2, m2), (n, m))], position] = gauge(c, m, n) / gauge(c, m2, n2)

        for a, b in itertools.product(labels, repeat=2):
            if not _n(ring, a, b, c):
                continue
            for k, k2 in itertools.product(labels, repeat=2):
                if not (_n(ring, m, a, k) and _n(ring, k, b, n) and _n(ring, m2, a, k2) and _n(ring, k2, b, n2)):
                    continue
                value = np.conj(f_value(data, m, a, b, n, k, c)) * f_value(data, m2, a, b, n2, k2, c)
                comult[position, index[(a, (m, k), (m2, k2))], index[(b, (k, n), (k2, n2))]] += value

    names = [f'E^{c}_({m},{n}),({m2},{n2})' for c, (m, n), (m2, n2) in basis]
    return make_algebra(names, mult, comult, unit, counit, antipode, star)


def _render(data: Dict[str, Any], diagrams: List[Dict[str, str]], endo: Algebra) -> np.ndarray:
    """Macierz wartości diagramów na bazie H: kolumna ``x`` to funkcjonał diagramu ``x``."""
    ring = data['ring']
    dims = dimensions(data)
    index = {element: position for position, element in enumerate(_endomorphism_basis(ring))}
    rendered = np.zeros((endo['dim'], len(diagrams)), dtype=complex)
    for column, elem in enumerate(diagrams):
        scale = np.sqrt(dims[elem['a']]) * (dims[elem['c2']] * dims[elem['d2']] / (dims[elem['c1']] * dims[elem['d1']])) ** 0.25
        target = (elem['a'], (elem['c2'], elem['c1']), (elem['d2'], elem['d1']))
        rendered[index[target], column] = scale
    return rendered


def compile(data: Dict[str, Any], tol: float = DEFAULT_TOL, threshold: float = 1e-8) -> Algebra:  # noqa: A001
    """Tablica słabej algebry Hopfa nad bazą diagramów ``enumerate_basis``.

    Wszystkie struktury są ewaluowane na H i rozwijane z powrotem w bazie
    diagramów przez rozwiązanie układu z macierzą renderowania.

    Raises:
        CompilationError: Gdy dane kategorii nie przechodzą walidacji albo
            renderowane diagramy są liniowo zależne.
        UnsupportedInputError: Gdy pierścień ma krotności większe od 1.
    """
    diagrams = enumerate_basis(data['ring'])
    report = validate_category(data, tol)
    if not report['overall']:
        details = ', '.join(f"{check['name']}={check['residual']:.3e}" for check in report['checks'] if not check['pass'])
        raise CompilationError('Dane kategorii nie przechodzą walidacji: ' + details)

    endo = fiber_functor_algebra(data)
    rendered = _render(data, diagrams, endo)
    size = len(diagrams)
    if numerical_rank(rendered, threshold) < size:
        for column in range(size):
            if numerical_rank(rendered[:, :column + 1], threshold) <= column:
                raise CompilationError('Układ rozwinięcia jest osobliwy', diagram_label(diagrams[column]))
    inverse = np.linalg.solve(rendered, np.eye(size))

    # (f g)(h) = (f ⊗ g)(Δh)
    products = np.einsum('px,qy,hpq->hxy', rendered, rendered, endo['comult'], optimize=True)
    mult = np.einsum('zh,hxy->xyz', inverse, products, optimize=True)
    # Δ(f)(h ⊗ h') = f(h h')
    values = np.einsum('hgk,kz->zhg', endo['mult'], rendered, optimize=True)
    comult = np.einsum('xh,zhg,yg->zxy', inverse, values, inverse, optimize=True)
    unit = inverse @ endo['counit']
    counit = rendered.T @ endo['unit']
    antipode = inverse @ endo['antipode'].T @ rendered
    twisted = endo['star'] @ np.conj(endo['antipode'])
    star = inverse @ np.conj(twisted.T @ rendered)

    algebra = make_algebra([diagram_label(elem) for elem in diagrams], mult, comult, unit, counit, antipode, star)
    counit_report = check_counit(data, algebra, tol)
    if not counit_report['pass']:
        logger.warning('Kojednostka odbiega od postaci zamkniętej o %.3e', counit_report['residual'])
    logger.info('Skompilowano algebrę wymiaru %d', size)
    return algebra


def check_counit(data: Dict[str, Any], algebra: Algebra, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Porównuje kojednostkę tablicy z postacią zamkniętą na bazie diagramów."""
    dims = dimensions(data)
    closed = np.array([counit_closed_form(elem, dims) for elem in enumerate_basis(data['ring'])])
    if closed.shape != algebra['counit'].shape:
        return _check('counit_closed_form', 'ε = δδ·√(d_a d_c2 / d_c1)', math.inf, tol)
    residual = float(np.max(np.abs(algebra['counit'] - closed))) if closed.size else 0.0
    return _check('counit_closed_form', 'ε = δδ·√(d_a d_c2 / d_c1)', residual, tol)


def compile_and_verify(data: Dict[str, Any], tol: float = DEFAULT_TOL, threshold: float = 1e-8) -> Dict[str, Any]:
    """Kompiluje kategorię i dołącza raport aksjomatów wyniku oraz kontrolę kojednostki."""
    algebra = compile(data, tol, threshold)
    return {
        'algebra': algebra,
        'validation': validate_category(data, tol),
        'axioms': verify_axioms(algebra, tol),
        'counit': check_counit(data, algebra, tol),
    }
