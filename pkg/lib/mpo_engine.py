"""Tensory MPO symetrii, gęste składanie, iloczyny Hilberta-Schmidta i kontrole fuzji.

Tensor MPO to słownik ``{'phys_dim', 'bond_dim', 't', 'bond_mats'}`` z
``t[l, r, i, j]`` (wiązanie lewe, prawe, wyjście, wejście). Operator MPO to
``{'tensor', 'boundary', 'length'}`` i reprezentuje
O^(L)(X) = Σ tr[X B_1 ... B_L] Φ(x_1) ⊗ ... ⊗ Φ(x_L).

Tensor MPS to ``{'phys_dim', 'bond_dim', 'a', 'boundary'}`` z ``a[i, l, r]``;
stan to Σ tr[X A^{i_1} ... A^{i_L}] |i_1 ... i_L⟩.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from lib import fusion_ring
from lib.errors import InputError, ShapeError
from lib.numerics import DEFAULT_DENSE_CAP, DEFAULT_TOL, check_size
from lib.wha_core import Representation, block_projector, dual_label

DEFAULT_FUSION_TOL = 1e-6

logger = logging.getLogger(__name__)

Tensor = Dict[str, Any]
Operator = Dict[str, Any]


def make_tensor(t: Any, bond_mats: Optional[np.ndarray] = None) -> Tensor:
    """Opakowuje tablicę ``(D, D, d, d)`` w słownik tensora MPO.

    Raises:
        ShapeError: Gdy tablica nie ma postaci ``(D, D, d, d)`` lub zawiera NaN/Inf.
    """
    array = np.asarray(t, dtype=complex)
    if array.ndim != 4 or array.shape[0] != array.shape[1] or array.shape[2] != array.shape[3]:
        raise ShapeError(f'Tensor MPO musi mieć kształt (D, D, d, d), otrzymano {array.shape}')
    if not np.all(np.isfinite(array)):
        raise ShapeError('Tensor MPO zawiera wartości nieskończone lub NaN')
    return {'phys_dim': array.shape[2], 'bond_dim': array.shape[0], 't': array, 'bond_mats': bond_mats}


def build_symmetry_tensor(phi: Representation, psi_a: Representation) -> Tensor:
    """T = Σ_x Ψ_a(δ_x) ⊗ Φ(x), indeksy ``t[l, r, i, j]``.

    Raises:
        InputError: Gdy baza algebry Ψ nie jest bazą dualną algebry Φ.
    """
    phi_basis = phi['algebra']['basis']
    psi_basis = psi_a['algebra']['basis']
    if len(phi_basis) != len(psi_basis) or any(dual_label(x) != y for x, y in zip(phi_basis, psi_basis)):
        raise InputError('Reprezentacje Φ i Ψ nie są sparowane przez bazę dualną')
    t = np.einsum('xlr,xij->lrij', psi_a['mats'], phi['mats'])
    return make_tensor(t, psi_a['mats'])


def identity_tensor(phys_dim: int) -> Tensor:
    """Tensor o wymiarze wiązania 1 generujący operator jednostkowy."""
    return make_tensor(np.eye(phys_dim, dtype=complex).reshape(1, 1, phys_dim, phys_dim))


def make_operator(tensor: Tensor, boundary: Any, length: int, tol: float = DEFAULT_TOL) -> Operator:
    """Operator MPO z macierzą brzegową.

    Gdy tensor zna macierze wiązania Ψ(δ_x), sprawdzana jest przemienność
    brzegu z każdą z nich.

    Raises:
        ShapeError: Gdy brzeg ma zły kształt lub ``length < 1``.
        InputError: Gdy brzeg nie komutuje z macierzami wiązania.
    """
    matrix = np.asarray(boundary, dtype=complex)
    if matrix.shape != (tensor['bond_dim'], tensor['bond_dim']):
        raise ShapeError(f'Brzeg {matrix.shape} nie pasuje do wymiaru wiązania {tensor["bond_dim"]}')
    if length < 1:
        raise ShapeError('Długość łańcucha musi być dodatnia')
    if tensor.get('bond_mats') is not None:
        commutator = np.einsum('ab,xbc->xac', matrix, tensor['bond_mats']) - np.einsum('xab,bc->xac', tensor['bond_mats'], matrix)
        residual = float(np.max(np.abs(commutator))) if commutator.size else 0.0
        if residual > tol:
            raise InputError(f'Brzeg nie komutuje z macierzami wiązania (residuum={residual:.3e})')
    return {'tensor': tensor, 'boundary': matrix, 'length': int(length)}


def with_length(op: Operator, length: int) -> Operator:
    return {'tensor': op['tensor'], 'boundary': op['boundary'], 'length': int(length)}


def assemble_dense(op: Operator, cap: Optional[int] = None) -> np.ndarray:
    """Gęsta macierz operatora O^(L)(X) wymiaru d^L.

    Raises:
        SizeError: Gdy pośrednie tablice przekroczyłyby limit elementów.
    """
    t = op['tensor']['t']
    bond, phys = t.shape[0], t.shape[2]
    length = op['length']
    check_size(bond * bond * phys ** (2 * length), DEFAULT_DENSE_CAP if cap is None else cap, 'gęsty operator MPO')
    chain = t
    for _ in range(length - 1):
        chain = np.einsum('lmIJ,mrij->lrIiJj', chain, t, optimize=True)
        size = chain.shape[2] * chain.shape[3]
        chain = chain.reshape(bond, bond, size, size)
    return np.einsum('rl,lrIJ->IJ', op['boundary'], chain)


def _check_compatible(op1: Operator, op2: Operator) -> None:
    if op1['tensor']['phys_dim'] != op2['tensor']['phys_dim'] or op1['length'] != op2['length']:
        raise ShapeError('Operatory MPO mają różny wymiar fizyczny lub długość')


def transfer_matrix(t1: Tensor, t2: Tensor) -> np.ndarray:
    """E[(l1,l2),(r1,r2)] = Σ_ij conj(t1[l1,r1,i,j]) t2[l2,r2,i,j]."""
    d1, d2 = t1['bond_dim'], t2['bond_dim']
    e = np.einsum('acij,bdij->abcd', np.conj(t1['t']), t2['t'], optimize=True)
    return e.reshape(d1 * d2, d1 * d2)


def hs_inner(op1: Operator, op2: Operator) -> complex:
    """tr[op1† op2] = tr[(conj X1 ⊗ X2) E^L], koszt liniowy w log L przez potęgowanie.

    Raises:
        ShapeError: Gdy wymiary fizyczne lub długości się różnią.
    """
    _check_compatible(op1, op2)
    transfer = transfer_matrix(op1['tensor'], op2['tensor'])
    power = np.linalg.matrix_power(transfer, op1['length'])
    boundary = np.kron(np.conj(op1['boundary']), op2['boundary'])
    return complex(np.trace(boundary @ power))


def product_tensor(t1: Tensor, t2: Tensor) -> Tensor:
    """Tensor iloczynu operatorów O1·O2: T[(l1,l2),(r1,r2),i,k] = Σ_j t1[l1,r1,i,j] t2[l2,r2,j,k].

    Raises:
        ShapeError: Gdy wymiary fizyczne się różnią.
    """
    if t1['phys_dim'] != t2['phys_dim']:
        raise ShapeError('Iloczyn tensorów MPO wymaga równych wymiarów fizycznych')
    d1, d2 = t1['bond_dim'], t2['bond_dim']
    t = np.einsum('acij,bdjk->abcdik', t1['t'], t2['t'], optimize=True)
    return make_tensor(t.reshape(d1 * d2, d1 * d2, t1['phys_dim'], t1['phys_dim']))


def product_operator(op1: Operator, op2: Operator) -> Operator:
    _check_compatible(op1, op2)
    tensor = product_tensor(op1['tensor'], op2['tensor'])
    return make_operator(tensor, np.kron(op1['boundary'], op2['boundary']), op1['length'])


def dagger_tensor(t: Tensor) -> Tensor:
    """Tensor operatora sprzężonego: conj(t[l, r, j, i])."""
    return make_tensor(np.conj(t['t'].transpose(0, 1, 3, 2)))


def dagger_operator(op: Operator) -> Operator:
    return make_operator(dagger_tensor(op['tensor']), np.conj(op['boundary']), op['length'])


def extend_with_ancilla(t: Tensor, ancilla_dim: int) -> Tensor:
    """Tensor O ⊗ 1 na przestrzeni (fizyczna ⊗ ancilla) każdego węzła."""
    bond, phys = t['bond_dim'], t['phys_dim']
    extended = np.einsum('lrij,ab->lriajb', t['t'], np.eye(ancilla_dim))
    size = phys * ancilla_dim
    return {
        'phys_dim': size,
        'bond_dim': bond,
        't': extended.reshape(bond, bond, size, size),
        'bond_mats': t.get('bond_mats'),
    }


def make_mps(a: Any, boundary: Any = None) -> Dict[str, Any]:
    """Tensor MPS ``a[i, l, r]`` z opcjonalnym brzegiem (domyślnie warunki periodyczne).

    Raises:
        ShapeError: Gdy tablica nie ma postaci ``(d, D, D)``.
    """
    array = np.asarray(a, dtype=complex)
    if array.ndim != 3 or array.shape[1] != array.shape[2]:
        raise ShapeError(f'Tensor MPS musi mieć kształt (d, D, D), otrzymano {array.shape}')
    bond = array.shape[1]
    matrix = np.eye(bond, dtype=complex) if boundary is None else np.asarray(boundary, dtype=complex)
    return {'phys_dim': array.shape[0], 'bond_dim': bond, 'a': array, 'boundary': matrix}


def mps_from_mpo(t: Tensor, boundary: Any) -> Dict[str, Any]:
    """Zwektoryzowany operator MPO jako MPS o wymiarze fizycznym d² (indeks ``(i, j)``)."""
    bond, phys = t['bond_dim'], t['phys_dim']
    a = t['t'].transpose(2, 3, 0, 1).reshape(phys * phys, bond, bond)
    return make_mps(a, boundary)


def mps_dense(mps: Dict[str, Any], length: int, cap: Optional[int] = None) -> np.ndarray:
    """Wektor stanu MPS długości ``length``."""
    a = mps['a']
    phys, bond = a.shape[0], a.shape[1]
    check_size(bond * bond * phys ** length, DEFAULT_DENSE_CAP if cap is None else cap, 'gęsty stan MPS')
    chain = a
    for _ in range(length - 1):
        chain = np.einsum('Ilm,imr->Iilr', chain, a).reshape(-1, bond, bond)
    return np.einsum('rl,Ilr->I', mps['boundary'], chain)


def mps_expectation(mps: Dict[str, Any], op: Operator) -> complex:
    """⟨ψ|O|ψ⟩ przez kontrakcję mieszanej macierzy przejścia (bra, MPO, ket)."""
    a = mps['a']
    t = op['tensor']['t']
    if a.shape[0] != op['tensor']['phys_dim']:
        raise ShapeError('Wymiar fizyczny MPS nie pasuje do operatora')
    transfer = np.einsum('iac,mnij,jbd->ambcnd', np.conj(a), t, a, optimize=True)
    size = a.shape[1] * t.shape[0] * a.shape[1]
    power = np.linalg.matrix_power(transfer.reshape(size, size), op['length'])
    boundary = np.kron(np.kron(np.conj(mps['boundary']), op['boundary']), mps['boundary'])
    return complex(np.trace(boundary @ power))


def check_mps_symmetric(mps: Dict[str, Any], op: Operator, tol: float = DEFAULT_TOL) -> Tuple[bool, Optional[complex]]:
    """Sprawdza, czy stan MPS jest wektorem własnym operatora MPO.

    Kryterium to wysycenie nierówności Cauchy'ego-Schwarza
    |⟨ψ|O|ψ⟩|² = ⟨ψ|O†O|ψ⟩⟨ψ|ψ⟩. Zwraca ``(True, λ)`` z λ = ⟨ψ|O|ψ⟩/⟨ψ|ψ⟩
    albo ``(False, None)``.

    Raises:
        InputError: Gdy stan ma zerową normę.
    """
    phys = op['tensor']['phys_dim']
    identity = make_operator(identity_tensor(phys), np.eye(1), op['length'])
    norm = mps_expectation(mps, identity).real
    if norm <= 1e-14:
        raise InputError('Stan MPS ma zerową normę')
    value = mps_expectation(mps, op)
    squared = mps_expectation(mps, product_operator(dagger_operator(op), op)).real
    gap = abs(squared * norm - abs(value) ** 2)
    if gap <= tol * max(1.0, squared * norm):
        return True, value / norm
    logger.debug('Stan nie jest własny: luka Cauchy-Schwarza %.3e', gap)
    return False, None


def symmetry_operators(phi: Representation, psi: Representation, length: int, tol: float = DEFAULT_TOL) -> Dict[str, Operator]:
    """Operatory O_a^(L) z pełnego tensora i rzutników bloków Ψ jako brzegów."""
    tensor = build_symmetry_tensor(phi, psi)
    return {
        block['label']: make_operator(tensor, block_projector(psi, block['label']), length, tol)
        for block in psi['blocks']
    }


def _combination_norm(terms: List[Tuple[complex, Operator]]) -> float:
    """‖Σ c_k O_k‖²_HS rozwinięte dwuliniowo przez hs_inner."""
    total = 0j
    for c1, op1 in terms:
        for c2, op2 in terms:
            total += np.conj(c1) * c2 * hs_inner(op1, op2)
    return float(total.real)


def check_fusion(
    a: str,
    b: str,
    ring: Dict[str, Any],
    lengths: Sequence[int],
    tol: float,
    operators: Dict[str, Operator],
) -> Dict[str, Any]:
    """Sprawdza O_a O_b = Σ_c N_ab^c O_c dla każdej długości.

    ``residual`` to względna norma HS różnicy, ‖Δ‖/‖O_aO_b‖, i to ona jest
    porównywana z ``tol``. ``squared`` to jej kwadrat, liczony bezpośrednio z
    iloczynów HS. Kwadrat jest obarczony błędem zaokrągleń rzędu ε, więc sama
    norma nie schodzi poniżej około √ε ≈ 1.5e-8; stąd ``DEFAULT_FUSION_TOL``.
    """
    entries = []
    for length in lengths:
        op_a = with_length(operators[a], length)
        op_b = with_length(operators[b], length)
        product = product_operator(op_a, op_b)
        terms: List[Tuple[complex, Operator]] = [(1.0, product)]
        for c in ring['labels']:
            n = fusion_ring.fusion_coefficient(ring, a, b, c)
            if n:
                terms.append((-float(n), with_length(operators[c], length)))
        scale = hs_inner(product, product).real
        difference = max(_combination_norm(terms), 0.0)
        squared = difference / scale if scale > 0 else difference
        residual = float(np.sqrt(squared))
        entries.append({
            'L': int(length),
            'residual': residual,
            'squared': float(squared),
            'pass': bool(residual <= tol),
        })
    return {'a': a, 'b': b, 'entries': entries, 'pass': all(entry['pass'] for entry in entries)}


def check_dagger_dual(
    a: str,
    lengths: Sequence[int],
    tol: float,
    operators: Dict[str, Operator],
    ring: Dict[str, Any],
    dense_cap: Optional[int] = None,
) -> Dict[str, Any]:
    """Sprawdza O_ā = O_a† dla każdej długości (względna norma HS różnicy, jak w ``check_fusion``).

    Dla długości mieszczących się w limicie dodawane jest porównanie gęste.
    """
    a_bar = ring['dual'][a]
    entries = []
    for length in lengths:
        op_a = with_length(operators[a], length)
        op_bar = with_length(operators[a_bar], length)
        dagger = dagger_operator(op_a)
        scale = hs_inner(op_a, op_a).real
        difference = max(_combination_norm([(1.0, op_bar), (-1.0, dagger)]), 0.0)
        squared = difference / scale if scale > 0 else difference
        residual = float(np.sqrt(squared))
        entry: Dict[str, Any] = {'L': int(length), 'residual': residual, 'squared': float(squared), 'pass': bool(residual <= tol)}
        phys = op_a['tensor']['phys_dim']
        if phys ** (2 * length) * op_a['tensor']['bond_dim'] ** 2 <= (DEFAULT_DENSE_CAP if dense_cap is None else dense_cap):
            dense = assemble_dense(op_bar, dense_cap) - assemble_dense(op_a, dense_cap).conj().T
            entry['dense_residual'] = float(np.linalg.norm(dense))
        entries.append(entry)
    return {'a': a, 'dual': a_bar, 'entries': entries, 'pass': all(entry['pass'] for entry in entries)}
