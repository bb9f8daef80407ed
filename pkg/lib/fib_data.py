"""Algebra Fibonacciego A_Fib ≅ M2(ℂ) ⊕ M3(ℂ) wraz z reprezentacjami Φ i Ψ.

Elementy bazy ``e{p},{ij}`` uporządkowane są po bloku ``p``, a w bloku
wierszami: ``e1,11 e1,12 e1,21 e1,22 e2,11 ... e2,33``. Komnożenie dziewięciu
elementów jest przepisane wprost z opublikowanej tabeli; pozostałe cztery
wynikają z reguły Δ(x*) = (*⊗*)Δ(x).
"""

import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from lib import fusion_ring
from lib.errors import NumericalError
from lib.numerics import DEFAULT_TOL, numerical_rank
from lib.wha_core import Algebra, Representation, dual, make_algebra, make_representation, verify_axioms

logger = logging.getLogger(__name__)

ZETA = float(np.sqrt((np.sqrt(5.0) - 1.0) / 2.0))
PHI = float((1.0 + np.sqrt(5.0)) / 2.0)
BLOCK_SIZES = {1: 2, 2: 3}
BLOCK_LABELS = {1: 'I', 2: 'tau'}

# (znak, potęga ζ, lewy czynnik, prawy czynnik)
Term = Tuple[int, int, str, str]

PRINTED_COMULTIPLICATION: Dict[str, List[Term]] = {
    'e1,11': [(1, 0, 'e1,11', 'e1,11'), (1, 0, 'e2,11', 'e2,22')],
    'e1,12': [(1, 0, 'e1,12', 'e1,12'), (1, 2, 'e2,12', 'e2,21'), (1, 1, 'e2,13', 'e2,23')],
    'e1,22': [
        (1, 0, 'e1,22', 'e1,22'), (1, 4, 'e2,22', 'e1,11'), (1, 3, 'e2,23', 'e2,13'),
        (1, 3, 'e2,32', 'e2,31'), (1, 2, 'e2,33', 'e2,33'),
    ],
    'e2,11': [(1, 0, 'e1,11', 'e2,11'), (1, 0, 'e2,11', 'e1,11'), (1, 0, 'e2,11', 'e2,33')],
    'e2,12': [(1, 0, 'e1,12', 'e2,12'), (1, 0, 'e2,12', 'e1,21'), (1, 0, 'e2,13', 'e2,32')],
    'e2,13': [
        (1, 0, 'e1,12', 'e2,13'), (1, 0, 'e2,13', 'e2,22'),
        (1, 1, 'e2,12', 'e2,31'), (-1, 2, 'e2,13', 'e2,33'),
    ],
    'e2,22': [(1, 0, 'e1,22', 'e2,22'), (1, 0, 'e2,22', 'e1,11'), (1, 0, 'e2,33', 'e2,22')],
    'e2,23': [
        (1, 0, 'e1,22', 'e2,23'), (1, 0, 'e2,23', 'e2,12'),
        (1, 1, 'e2,32', 'e2,21'), (-1, 2, 'e2,33', 'e2,23'),
    ],
    'e2,33': [
        (1, 0, 'e1,22', 'e2,33'), (1, 0, 'e2,33', 'e1,22'), (1, 2, 'e2,22', 'e2,11'),
        (-1, 3, 'e2,23', 'e2,13'), (-1, 3, 'e2,32', 'e2,31'), (1, 4, 'e2,33', 'e2,33'),
    ],
}

# Wyrazy, których blokowy układ przeczy rekonstrukcji z symboli F:
# (element, wyraz wydrukowany, wyraz poprawiony)
CORRECTIONS: List[Tuple[str, Term, Term]] = [
    ('e1,22', (1, 4, 'e2,22', 'e1,11'), (1, 4, 'e2,22', 'e2,11')),
    ('e2,11', (1, 0, 'e2,11', 'e1,11'), (1, 0, 'e2,11', 'e1,22')),
    ('e2,13', (1, 0, 'e2,13', 'e2,22'), (1, 0, 'e2,13', 'e1,22')),
    ('e2,23', (1, 0, 'e2,23', 'e2,12'), (1, 0, 'e2,23', 'e1,12')),
]

R_TILDE_ENTRIES: List[Tuple[str, str, int, int]] = [
    # (górny indeks, dolny indeks, znak, potęga ζ)
    ('e1,11', 'e1,11', 1, 0), ('e2,11', 'e1,12', 1, 0), ('e1,12', 'e2,11', 1, 0),
    ('e2,22', 'e1,21', 1, 0), ('e1,21', 'e2,22', 1, 0), ('e2,21', 'e2,21', 1, 0),
    ('e2,31', 'e2,23', 1, 0), ('e2,23', 'e2,31', 1, 0),
    ('e2,32', 'e2,32', 1, -1), ('e2,13', 'e2,13', 1, -1), ('e2,12', 'e2,12', 1, -2),
    ('e1,22', 'e2,33', 1, 2), ('e2,33', 'e1,22', 1, 2), ('e2,33', 'e2,33', -1, 2),
    ('e1,22', 'e1,22', 1, 4),
]

R_ENTRIES: List[Tuple[str, str, int, int]] = [
    ('e1,11', 'e1,11', 1, 0), ('e2,11', 'e1,12', 1, 0), ('e1,12', 'e2,11', 1, 0),
    ('e2,22', 'e1,21', 1, 0), ('e1,21', 'e2,22', 1, 0), ('e1,22', 'e1,22', 1, 0),
    ('e1,22', 'e2,33', 1, 0), ('e2,33', 'e1,22', 1, 0), ('e2,21', 'e2,21', 1, 0),
    ('e2,31', 'e2,23', 1, 0), ('e2,23', 'e2,31', 1, 0),
    ('e2,13', 'e2,13', 1, 1), ('e2,32', 'e2,32', 1, 1),
    ('e2,12', 'e2,12', 1, 2), ('e2,33', 'e2,33', -1, 2),
]


def basis_labels() -> List[str]:
    return [f'e{p},{i}{j}' for p, size in BLOCK_SIZES.items() for i in range(1, size + 1) for j in range(1, size + 1)]


BASIS = basis_labels()
INDEX = {label: position for position, label in enumerate(BASIS)}


def zeta() -> float:
    """ζ = sqrt((√5 − 1)/2), czyli ζ² = 1/φ."""
    return ZETA


def _parse(label: str) -> Tuple[int, int, int]:
    return int(label[1]), int(label[3]), int(label[4])


def _label(p: int, i: int, j: int) -> str:
    return f'e{p},{i}{j}'


def _starred(label: str) -> str:
    p, i, j = _parse(label)
    return _label(p, j, i)


def _coefficient(sign: int, power: int) -> float:
    return sign * ZETA ** power


def printed_comultiplication() -> Dict[str, List[Term]]:
    """Kopia wydrukowanej tabeli komnożenia (dziewięć elementów, bez poprawek)."""
    return {label: list(terms) for label, terms in PRINTED_COMULTIPLICATION.items()}


def corrected_comultiplication() -> Dict[str, List[Term]]:
    table = printed_comultiplication()
    for element, printed, corrected in CORRECTIONS:
        table[element] = [corrected if term == printed else term for term in table[element]]
    return table


def _matrix_unit_mult() -> np.ndarray:
    dim = len(BASIS)
    mult = np.zeros((dim, dim, dim), dtype=complex)
    for left in BASIS:
        p, i, j = _parse(left)
        for k in range(1, BLOCK_SIZES[p] + 1):
            mult[INDEX[left], INDEX[_label(p, j, k)], INDEX[_label(p, i, k)]] = 1
    return mult


def _comult_tensor(table: Dict[str, List[Term]]) -> np.ndarray:
    dim = len(BASIS)
    comult = np.zeros((dim, dim, dim), dtype=complex)
    for element, terms in table.items():
        for sign, power, left, right in terms:
            comult[INDEX[element], INDEX[left], INDEX[right]] += _coefficient(sign, power)
    # pozostałe elementy z Δ(x*) = (*⊗*)Δ(x); współczynniki są rzeczywiste
    for element, terms in table.items():
        starred = _starred(element)
        if starred in table:
            continue
        for sign, power, left, right in terms:
            comult[INDEX[starred], INDEX[_starred(left)], INDEX[_starred(right)]] += _coefficient(sign, power)
    return comult


def _antipode() -> np.ndarray:
    pi = {1: 2, 2: 1, 3: 3}
    xi = {1: 1, 2: 3, 3: 2}
    dim = len(BASIS)
    antipode = np.zeros((dim, dim), dtype=complex)
    for label in BASIS:
        p, i, j = _parse(label)
        if p == 1:
            antipode[INDEX[_label(1, j, i)], INDEX[label]] = 1
        else:
            antipode[INDEX[_label(2, pi[j], pi[i])], INDEX[label]] = ZETA ** (xi[i] - xi[j])
    return antipode


def build_fib_wha(corrected: bool = True) -> Algebra:
    """Tablica A_Fib: mnożenie jednostek macierzowych, komnożenie, jedynka, kojednostka, antypoda i gwiazdka.

    Args:
        corrected: Gdy ``False``, komnożenie jest dokładną kopią wydrukowanej
            tabeli i nie spełnia aksjomatów; służy do lokalizacji błędów druku.
    """
    table = corrected_comultiplication() if corrected else printed_comultiplication()
    dim = len(BASIS)
    unit = np.zeros(dim, dtype=complex)
    counit = np.zeros(dim, dtype=complex)
    star = np.zeros((dim, dim), dtype=complex)
    for label in BASIS:
        p, i, j = _parse(label)
        if i == j:
            unit[INDEX[label]] = 1
        if p == 1:
            counit[INDEX[label]] = 1
        star[INDEX[_starred(label)], INDEX[label]] = 1
    return make_algebra(BASIS, _matrix_unit_mult(), _comult_tensor(table), unit, counit, _antipode(), star)


def localized_residuals(alg: Algebra) -> Dict[str, float]:
    """Residua koasocjatywności, kojednostki i multiplikatywności Δ przypisane elementom bazy.

    Dla elementu ``z`` bierzemy maksimum po wierszach, w których ``z`` jest
    argumentem komnożenia (dla multiplikatywności: jednym z czynników).
    """
    comult = alg['comult']
    mult = alg['mult']
    counit = alg['counit']
    identity = np.eye(alg['dim'])
    coassoc = np.abs(
        np.einsum('ztc,tab->zabc', comult, comult) - np.einsum('zat,tbc->zabc', comult, comult)
    ).reshape(alg['dim'], -1).max(axis=1)
    counit_left = np.abs(np.einsum('a,zab->zb', counit, comult) - identity).max(axis=1)
    counit_right = np.abs(np.einsum('b,zab->za', counit, comult) - identity).max(axis=1)
    multiplicative = np.abs(
        np.einsum('xyz,zab->xyab', mult, comult)
        - np.einsum('xpq,yrs,pra,qsb->xyab', comult, comult, mult, mult, optimize=True)
    ).max(axis=(2, 3))
    per_element = np.maximum.reduce([
        coassoc, counit_left, counit_right, multiplicative.max(axis=1), multiplicative.max(axis=0),
    ])
    return {label: float(per_element[INDEX[label]]) for label in BASIS}


def _format_term(term: Term) -> str:
    sign, power, left, right = term
    prefix = '-' if sign < 0 else ''
    factor = f'ζ^{power} ' if power else ''
    return f'{prefix}{factor}{left} ⊗ {right}'


def suspected_artifacts(tol: float = 1e-10) -> List[Dict[str, Any]]:
    """Linie wydrukowanej tabeli komnożenia podejrzane o błąd składu.

    Każda pozycja zawiera wyraz wydrukowany i poprawiony oraz residua
    aksjomatów zlokalizowane w tym elemencie dla tabeli dosłownej i poprawionej.
    """
    literal = localized_residuals(build_fib_wha(corrected=False))
    fixed = localized_residuals(build_fib_wha(corrected=True))
    artifacts = []
    for element, printed, corrected in CORRECTIONS:
        artifacts.append({
            'element': element,
            'printed': _format_term(printed),
            'corrected': _format_term(corrected),
            'literal_residual': literal[element],
            'corrected_residual': fixed[element],
            'localized': literal[element] > tol >= fixed[element],
        })
        logger.warning(
            'Podejrzany błąd druku w Δ(%s): %s zamiast %s (residuum %.3e -> %.3e)',
            element, _format_term(printed), _format_term(corrected), literal[element], fixed[element],
        )
    return artifacts


def _pairing_matrix(entries: List[Tuple[str, str, int, int]]) -> np.ndarray:
    matrix = np.zeros((len(BASIS), len(BASIS)), dtype=complex)
    for upper, lower, sign, power in entries:
        matrix[INDEX[upper], INDEX[lower]] = _coefficient(sign, power)
    return matrix


def pairing_tables() -> Dict[str, Any]:
    """Macierze parowania R̃ (``r_tilde[x, y] = ⟨e_x, e_y⟩``) oraz R = R̃⁻¹ z danych tabelarycznych."""
    return {'r_tilde': _pairing_matrix(R_TILDE_ENTRIES), 'r': _pairing_matrix(R_ENTRIES), 'zeta': ZETA}


def pairing_identities(alg: Optional[Algebra] = None, tol: float = 1e-10) -> Dict[str, Any]:
    """Residua sześciu tożsamości parowania ⟨·,·⟩ = R̃ na wszystkich parach bazowych."""
    alg = build_fib_wha() if alg is None else alg
    tables = pairing_tables()
    pairing = tables['r_tilde']
    mult, comult = alg['mult'], alg['comult']
    antipode, star = alg['antipode'], alg['star']
    unit, counit = alg['unit'], alg['counit']

    residuals = {
        'product_left': np.einsum('xwz,zy->xwy', mult, pairing)
        - np.einsum('yab,xa,wb->xwy', comult, pairing, pairing),
        'product_right': np.einsum('yvz,xz->xyv', mult, pairing)
        - np.einsum('xab,ay,bv->xyv', comult, pairing, pairing),
        'unit_left': unit @ pairing - counit,
        'unit_right': pairing @ unit - counit,
        'antipode': antipode.T @ pairing - pairing @ antipode,
        'star': star.T @ pairing - np.conj(pairing @ star) @ antipode,
        'inverse': pairing @ tables['r'] - np.eye(alg['dim']),
    }
    anchors = {
        'product_left': '⟨xy, f⟩ = ⟨x ⊗ y, Δf⟩',
        'product_right': '⟨x, fg⟩ = ⟨Δx, f ⊗ g⟩',
        'unit_left': '⟨1, f⟩ = ε(f)',
        'unit_right': '⟨x, 1⟩ = ε(x)',
        'antipode': '⟨S(x), f⟩ = ⟨x, S(f)⟩',
        'star': '⟨x*, f⟩ = conj⟨x, S(f)*⟩',
        'inverse': 'R̃ R = 1',
    }
    checks = [
        {'name': name, 'anchor': anchors[name], 'residual': float(np.max(np.abs(value))), 'tolerance': tol,
         'pass': bool(np.max(np.abs(value)) <= tol)}
        for name, value in residuals.items()
    ]
    return {'checks': checks, 'overall': all(check['pass'] for check in checks)}


def _block_offsets() -> Dict[int, int]:
    return {1: 0, 2: BLOCK_SIZES[1]}


def _matrix_unit_5(label: str) -> np.ndarray:
    p, i, j = _parse(label)
    offset = _block_offsets()[p]
    matrix = np.zeros((5, 5), dtype=complex)
    matrix[offset + i - 1, offset + j - 1] = 1
    return matrix


def _blocks() -> List[Dict[str, Any]]:
    offsets = _block_offsets()
    return [
        {'label': BLOCK_LABELS[p], 'start': offsets[p], 'stop': offsets[p] + size}
        for p, size in BLOCK_SIZES.items()
    ]


def build_phi(alg: Optional[Algebra] = None, tol: float = DEFAULT_TOL) -> Representation:
    """Wierna reprezentacja gwiazdkowa Φ(e_{p,ij}) = |p,i⟩⟨p,j| z blokami I (2) i tau (3)."""
    alg = build_fib_wha() if alg is None else alg
    mats = np.array([_matrix_unit_5(label) for label in BASIS])
    return make_representation(alg, mats, tol, blocks=_blocks(), label='phi')


def build_psi(alg: Optional[Algebra] = None, tol: float = DEFAULT_TOL) -> Representation:
    """Reprezentacja Ψ algebry dualnej: Ψ(ẽ_y) = Σ_x R[y, x] |p,i⟩⟨p,j| dla x = e_{p,ij}.

    Raises:
        NumericalError: Gdy macierz parowania jest osobliwa (uszkodzone dane).
    """
    alg = build_fib_wha() if alg is None else alg
    tables = pairing_tables()
    if numerical_rank(tables['r_tilde'], 1e-12) < len(BASIS):
        raise NumericalError('Macierz parowania jest osobliwa', 0.0)
    units = np.array([_matrix_unit_5(label) for label in BASIS])
    mats = np.einsum('yx,xij->yij', tables['r'], units)
    return make_representation(dual(alg), mats, tol, blocks=_blocks(), label='psi')


def fib_ring() -> Dict[str, Any]:
    """Pierścień Fibonacciego {I, tau}, tau × tau = I + tau, z wymiarami kwantowymi."""
    return fusion_ring.make_ring(
        ['I', 'tau'],
        'I',
        {'I': 'I', 'tau': 'tau'},
        [('I', 'I', 'I', 1), ('I', 'tau', 'tau', 1), ('tau', 'I', 'tau', 1), ('tau', 'tau', 'I', 1), ('tau', 'tau', 'tau', 1)],
        dims={'I': 1.0, 'tau': PHI},
    )


def verify_fib(tol: float = 1e-10) -> Dict[str, Any]:
    """Raport aksjomatów dla A_Fib i jej algebry dualnej."""
    alg = build_fib_wha()
    return {'algebra': verify_axioms(alg, tol), 'dual': verify_axioms(dual(alg), tol)}
