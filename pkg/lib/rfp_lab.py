"""Punkty stałe renormalizacji MPDO: Ω, idempotenty centralne, ρ_m i ich kontrole.

Kontekst (``make_context``) zbiera wszystko, czego potrzebują kontrole:
reprezentacje Φ i Ψ z blokami, pierścienie fuzji obu stron, Ω, dane
przejścia i jednowymiarowe reprezentacje pierścienia fuzji Ψ.
"""

import logging
from typing import Any, Dict, List, Optional

import numpy as np
import scipy.optimize

from lib import fusion_ring
from lib.errors import InputError, ShapeError, UnsupportedInputError
from lib.mpo_engine import (
    assemble_dense,
    build_symmetry_tensor,
    check_mps_symmetric,
    extend_with_ancilla,
    hs_inner,
    make_operator,
    make_tensor,
    mps_dense,
    mps_from_mpo,
    product_operator,
    dagger_operator,
    transfer_matrix,
)
from lib.numerics import DEFAULT_DENSE_CAP, DEFAULT_TOL, kron_power, null_space, numerical_rank, partial_trace
from lib.wha_core import (
    Algebra,
    Representation,
    block_irreps,
    block_projector,
    dual,
    evaluate,
    fusion_rules,
    rename_blocks,
    star_representation,
)

logger = logging.getLogger(__name__)

Context = Dict[str, Any]


def _check(name: str, anchor: str, residual: float, tol: float, **extra: Any) -> Dict[str, Any]:
    entry = {'name': name, 'anchor': anchor, 'residual': float(residual), 'tolerance': float(tol), 'pass': bool(residual <= tol)}
    entry.update(extra)
    return entry


def build_omega(phi: Representation, ring_of_phi_irreps: Dict[str, Any]) -> Dict[str, Any]:
    """Ω = (1/D²) Σ_α δ_α Q_α na przestrzeni fizycznej.

    Raises:
        InputError: Gdy brak wymiarów kwantowych dla któregoś bloku Φ.
    """
    dims = ring_of_phi_irreps.get('dims')
    labels = [block['label'] for block in phi['blocks']]
    if not dims or any(label not in dims for label in labels):
        raise InputError('Brak wymiarów kwantowych nieprzywiedlnych Φ')
    d_squared = sum(dims[label] ** 2 for label in labels)
    coefficients = {label: dims[label] / d_squared for label in labels}
    projectors = {label: block_projector(phi, label) for label in labels}
    matrix = sum(coefficients[label] * projectors[label] for label in labels)
    return {'matrix': matrix, 'coefficients': coefficients, 'projectors': projectors, 'd_squared': d_squared, 'phi': phi}


def sqrt_omega(omega: Dict[str, Any], tol: float = DEFAULT_TOL) -> np.ndarray:
    """√Ω blokowo ze skalarnych pierwiastków współczynników.

    Raises:
        InputError: Gdy któryś współczynnik jest ujemny poza tolerancją.
    """
    matrix = np.zeros_like(omega['matrix'])
    for label, value in omega['coefficients'].items():
        if value < -tol:
            raise InputError(f'Ujemny współczynnik Ω dla bloku {label}: {value}')
        matrix = matrix + np.sqrt(max(value, 0.0)) * omega['projectors'][label]
    return matrix


def find_1d_irreps(ring: Dict[str, Any], tol: float = DEFAULT_TOL, seed: int = 3) -> List[Dict[str, complex]]:
    """Wspólne wektory własne macierzy fuzji N_a i ich krotki wartości własnych.

    Krotka Frobeniusa-Perrona jest pierwsza, pozostałe w porządku malejących
    części rzeczywistych (po kolejnych etykietach).
    """
    labels = ring['labels']
    matrices = {label: fusion_ring.fusion_matrix(ring, label) for label in labels}
    rng = np.random.default_rng(seed)
    generic = sum(rng.normal() * matrices[label] for label in labels)
    _, vectors = np.linalg.eig(generic)

    found: List[Dict[str, complex]] = []
    for column in range(vectors.shape[1]):
        vector = vectors[:, column]
        values = {label: complex(np.vdot(vector, matrices[label] @ vector) / np.vdot(vector, vector)) for label in labels}
        residual = max(np.linalg.norm(matrices[label] @ vector - values[label] * vector) for label in labels)
        if residual > 1e-8:
            continue
        if any(max(abs(values[label] - other[label]) for label in labels) <= max(tol, 1e-8) for other in found):
            continue
        found.append(values)

    fp = fusion_ring.perron_dimensions(ring)

    def is_fp(values: Dict[str, complex]) -> bool:
        return max(abs(values[label] - fp[label]) for label in labels) <= 1e-8

    found.sort(key=lambda values: (not is_fp(values), tuple(-round(values[label].real, 9) for label in labels)))
    return found


def build_central_idempotent(m: int, ring: Dict[str, Any], irreps_1d: Optional[List[Dict[str, complex]]] = None,
                             tol: float = DEFAULT_TOL, threshold: float = 1e-8) -> Dict[str, Any]:
    """Minimalny idempotent centralny Π_m algebry fuzji dla m-tej reprezentacji 1D.

    Wektor współczynników Π_m jest wspólnym wektorem własnym N_a (a·Π_m = λ_ma Π_m),
    znormalizowanym tak, by Π_m·Π_m = Π_m.

    Raises:
        UnsupportedInputError: Gdy przestrzeń własna ma wymiar większy niż 1.
        IndexError: Gdy ``m`` jest poza zakresem.
    """
    irreps_1d = find_1d_irreps(ring, tol) if irreps_1d is None else irreps_1d
    values = irreps_1d[m]
    labels = ring['labels']
    size = len(labels)
    system = np.vstack([fusion_ring.fusion_matrix(ring, label) - values[label] * np.eye(size) for label in labels])
    kernel = null_space(system.astype(complex), threshold)
    if kernel.shape[1] != 1:
        raise UnsupportedInputError(f'Reprezentacja {m} nie jest jednowymiarowym blokiem (wymiar {kernel.shape[1]})')
    vector = kernel[:, 0]
    scale = sum(vector[i] * values[label] for i, label in enumerate(labels))
    coefficients = {label: complex(vector[i] / scale) for i, label in enumerate(labels)}
    return {'m': m, 'coefficients': coefficients, 'lambdas': values}


def idempotent_boundary(idempotent: Dict[str, Any], psi: Representation) -> np.ndarray:
    """Σ_a Π_m^{(a)} P_a na przestrzeni wiązania."""
    return sum(value * block_projector(psi, label) for label, value in idempotent['coefficients'].items())


def transfer_data(
    omega: Dict[str, Any], psi: Representation, tol: float = DEFAULT_TOL, threshold: float = 1e-8
) -> Dict[str, Any]:
    """θ = Σ_x δ_x tr[ΩΦ(x)], E = Ψ(θ) i bloki Ψ_a(θ) wraz z diagnostyką."""
    phi = omega['phi']
    theta = np.einsum('ij,xji->x', omega['matrix'], phi['mats'])
    e_matrix = evaluate(psi, theta)
    blocks = {}
    ranks = {}
    for block in psi['blocks']:
        part = e_matrix[block['start']:block['stop'], block['start']:block['stop']]
        blocks[block['label']] = part
        ranks[block['label']] = numerical_rank(part, threshold) if np.linalg.norm(part) > tol else 0
    spectrum = np.linalg.eigvals(e_matrix)
    return {
        'theta': theta,
        'e_matrix': e_matrix,
        'blocks': blocks,
        'ranks': ranks,
        'idempotency': float(np.max(np.abs(e_matrix @ e_matrix - e_matrix))),
        'spectrum': spectrum,
        'spectrum_deviation': float(np.max(np.minimum(np.abs(spectrum), np.abs(spectrum - 1.0)))),
    }


def make_context(alg: Algebra, phi: Optional[Representation] = None, psi: Optional[Representation] = None,
                 tol: float = DEFAULT_TOL, threshold: float = 1e-8) -> Context:
    """Zbiera reprezentacje, pierścienie fuzji, Ω i dane przejścia dla algebry.

    Gdy Φ lub Ψ nie są podane, powstają z ``star_representation`` (Ψ dla
    algebry dualnej); bloki dostają wtedy nazwy kanoniczne ``I``, ``a1``...
    ``threshold`` to względny próg wartości osobliwych dla rzędów i jąder.

    Raises:
        InputError: Gdy całkowite wymiary kwantowe obu stron się różnią.
    """
    if phi is None:
        phi = star_representation(alg, tol, prefix='q', threshold=threshold)
    if psi is None:
        psi = star_representation(dual(alg), tol, prefix='b', threshold=threshold)

    phi_ring = fusion_rules(block_irreps(phi, tol), tol, threshold)
    ring = fusion_rules(block_irreps(psi, tol), tol, threshold)
    if ring['unit'] != 'I':
        mapping = fusion_ring.canonical_names(ring)
        psi = rename_blocks(psi, mapping)
        ring = fusion_ring.rename_labels(ring, mapping)
    if phi_ring['unit'] != 'I':
        phi_mapping = fusion_ring.canonical_names(phi_ring)
        phi = rename_blocks(phi, phi_mapping)
        phi_ring = fusion_ring.rename_labels(phi_ring, phi_mapping)

    total_phi = fusion_ring.total_dimension_squared(phi_ring, phi_ring['dims'])
    total_psi = fusion_ring.total_dimension_squared(ring, ring['dims'])
    if abs(total_phi - total_psi) > 1e-8 * max(1.0, total_psi):
        raise InputError(f'Całkowite wymiary kwantowe się różnią: {total_phi} wobec {total_psi}')

    omega = build_omega(phi, phi_ring)
    tensor = build_symmetry_tensor(phi, psi)
    context = {
        'algebra': alg,
        'phi': phi,
        'psi': psi,
        'ring': ring,
        'phi_ring': phi_ring,
        'omega': omega,
        'transfer': transfer_data(omega, psi, tol, threshold),
        'irreps_1d': find_1d_irreps(ring, tol),
        'tensor': tensor,
        'tol': tol,
        'threshold': threshold,
    }
    logger.info('Kontekst RFP: etykiety %s, wymiary %s', ring['labels'], ring['dims'])
    return context


def symmetry_operator(context: Context, label: str, length: int) -> Dict[str, Any]:
    return make_operator(context['tensor'], block_projector(context['psi'], label), length, context['tol'])


def idempotent_operator(context: Context, m: int, length: int) -> Dict[str, Any]:
    idempotent = build_central_idempotent(m, context['ring'], context['irreps_1d'], context['tol'], context['threshold'])
    return make_operator(context['tensor'], idempotent_boundary(idempotent, context['psi']), length, context['tol'])


def _dressed_tensor(context: Context, site_matrix: np.ndarray, psi: Optional[Representation] = None) -> Dict[str, Any]:
    """Tensor Σ_x Ψ(δ_x) ⊗ Φ(x)·M dla macierzy węzłowej M (Ω lub √Ω)."""
    psi = context['psi'] if psi is None else psi
    dressed = np.einsum('xij,jk->xik', context['phi']['mats'], site_matrix)
    return make_tensor(np.einsum('xlr,xij->lrij', psi['mats'], dressed), psi['mats'])


def normalization(context: Context, m: int) -> float:
    """N_m = Π_m^{(I)} tr Ψ_I(θ), niezależne od L."""
    idempotent = build_central_idempotent(m, context['ring'], context['irreps_1d'], context['tol'], context['threshold'])
    unit = context['ring']['unit']
    return float((idempotent['coefficients'][unit] * np.trace(context['transfer']['blocks'][unit])).real)


def build_rfp(m: int, length: int, context: Context, dense_cap: Optional[int] = None) -> Dict[str, Any]:
    """ρ_m^(L) = O^(L)(Π_m) Ω^{⊗L} / N_m w postaci MPO oraz gęstej dla małych L.

    Raises:
        InputError: Gdy N_m nie jest dodatnie.
    """
    idempotent = build_central_idempotent(m, context['ring'], context['irreps_1d'], context['tol'], context['threshold'])
    norm = normalization(context, m)
    if norm <= 0:
        raise InputError(f'Niedodatnia normalizacja N_{m} = {norm}')
    boundary = idempotent_boundary(idempotent, context['psi'])
    rho_op = make_operator(_dressed_tensor(context, context['omega']['matrix']), boundary / norm, length, context['tol'])
    rfp = {'m': m, 'L': length, 'norm': norm, 'idempotent': idempotent, 'operator': rho_op, 'dense': None}

    cap = DEFAULT_DENSE_CAP if dense_cap is None else dense_cap
    phys = context['phi']['dim']
    if context['tensor']['bond_dim'] ** 2 * phys ** (2 * length) <= cap:
        projector = assemble_dense(make_operator(context['tensor'], boundary, length, context['tol']), cap)
        rfp['projector'] = projector
        rfp['dense'] = projector @ kron_power(context['omega']['matrix'], length, cap) / norm
    return rfp


def check_projector(m: int, length: int, context: Context, tol: float = DEFAULT_TOL) -> List[Dict[str, Any]]:
    """O^(L)(Π_m) jest rzutnikiem ortogonalnym komutującym z Ω^{⊗L}."""
    op = idempotent_operator(context, m, length)
    scale = max(hs_inner(op, op).real, 1e-300)
    square = product_operator(op, op)
    idempotency = (hs_inner(square, square) - 2 * hs_inner(square, op).real + hs_inner(op, op)).real / scale
    dagger = dagger_operator(op)
    hermiticity = (hs_inner(dagger, dagger) - 2 * hs_inner(dagger, op).real + hs_inner(op, op)).real / scale
    checks = [
        _check('projector_idempotent', 'O(Π_m)² = O(Π_m)', max(idempotency, 0.0), tol, m=m, L=length),
        _check('projector_hermitian', 'O(Π_m)† = O(Π_m)', max(hermiticity, 0.0), tol, m=m, L=length),
    ]
    rfp = build_rfp(m, length, context)
    if rfp['dense'] is not None:
        omega_l = kron_power(context['omega']['matrix'], length)
        commutator = rfp['projector'] @ omega_l - omega_l @ rfp['projector']
        checks.append(_check('projector_commutes_omega', '[O(Π_m), Ω^{⊗L}] = 0', float(np.linalg.norm(commutator)), tol, m=m, L=length))
    return checks


def check_idempotent_sum(context: Context, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Σ_m Π_m jest brzegiem O_I (rzutnikiem na blok jedynki)."""
    psi = context['psi']
    total = sum(
        idempotent_boundary(build_central_idempotent(m, context['ring'], context['irreps_1d'], tol, context['threshold']), psi)
        for m in range(len(context['irreps_1d']))
    )
    residual = float(np.max(np.abs(total - block_projector(psi, context['ring']['unit']))))
    return _check('idempotent_sum', 'Σ_m Π_m = brzeg O_I', residual, tol)


def check_strong_symmetry(m: int, a: str, length: int, context: Context, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """O_a ρ_m = λ_ma ρ_m przez rzuty Hilberta-Schmidta.

    λ = tr[ρ† O_a ρ] / tr[ρ† ρ]; residuum to względny kwadrat normy HS
    różnicy O_a ρ − λρ. Kontrola przechodzi, gdy residuum i odchylenie λ
    od wartości z ``find_1d_irreps`` mieszczą się w tolerancji.
    """
    rho = build_rfp(m, length, context)['operator']
    op_a = symmetry_operator(context, a, length)
    acted = product_operator(op_a, rho)
    norm = hs_inner(rho, rho).real
    overlap = hs_inner(rho, acted)
    value = overlap / norm
    difference = hs_inner(acted, acted).real - 2 * (np.conj(value) * overlap).real + abs(value) ** 2 * norm
    residual = max(difference, 0.0) / norm
    expected = context['irreps_1d'][m][a]
    deviation = abs(value - expected)
    entry = _check('strong_symmetry', 'O_a ρ_m = λ_ma ρ_m', residual, tol, m=m, a=a, L=length)
    entry.update({'lambda': complex(value), 'expected': complex(expected), 'lambda_deviation': float(deviation)})
    entry['pass'] = bool(residual <= tol and deviation <= tol)
    return entry


def check_weak_symmetry(a: str, length: int, context: Context, m: int = 0, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Residuum komutatora [O_a, ρ_m] (gęsto)."""
    rho = build_rfp(m, length, context)['dense']
    op_a = assemble_dense(symmetry_operator(context, a, length))
    residual = float(np.linalg.norm(op_a @ rho - rho @ op_a))
    return _check('weak_symmetry', '[O_a, ρ_m] = 0', residual, tol, m=m, a=a, L=length)


def check_state(m: int, length: int, context: Context, tol: float = DEFAULT_TOL) -> List[Dict[str, Any]]:
    """Ślad, hermitowskość i dodatniość gęstego ρ_m^(L)."""
    rho = build_rfp(m, length, context)['dense']
    values = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return [
        _check('trace', 'tr ρ_m = 1', abs(np.trace(rho) - 1.0), tol, m=m, L=length),
        _check('hermitian', 'ρ_m = ρ_m†', float(np.linalg.norm(rho - rho.conj().T)), tol, m=m, L=length),
        _check('positive', 'min spec ρ_m ≥ 0', max(-float(values.min()), 0.0), tol, m=m, L=length),
    ]


def _permute_sites(matrix: np.ndarray, site_dim: int, order: List[int]) -> np.ndarray:
    """Macierz, w której czynnik ``k`` wyniku pochodzi z czynnika ``order[k]`` wejścia."""
    count = len(order)
    tensor = matrix.reshape([site_dim] * (2 * count))
    axes = order + [count + position for position in order]
    return tensor.transpose(axes).reshape(matrix.shape)


def trace_out_site(m: int, length: int, context: Context, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Ślad częściowy ρ_m^(L) po każdym węźle wobec O^(L−1)(Ψ_I(θ)) Ω^{⊗(L−1)} / tr Ψ_I(θ).

    Dla węzła ``k`` pozostałe węzły wzorca są ułożone cyklicznie
    (k+1, ..., L, 1, ..., k−1). Raport zawiera też odległość od stanu drugiego
    idempotentu (nierozróżnialność lokalna) i informacyjne odchylenie od
    znormalizowanego O_I^(L−1) Ω^{⊗(L−1)}.
    """
    if length < 2:
        raise ShapeError('Ślad częściowy wymaga co najmniej dwóch węzłów')
    unit = context['ring']['unit']
    psi = context['psi']
    phys = context['phi']['dim']
    block = context['transfer']['blocks'][unit]
    embedded = np.zeros((psi['dim'], psi['dim']), dtype=complex)
    start = next(item['start'] for item in psi['blocks'] if item['label'] == unit)
    embedded[start:start + block.shape[0], start:start + block.shape[0]] = block
    rest = length - 1
    omega_rest = kron_power(context['omega']['matrix'], rest)
    boundary_op = {'tensor': context['tensor'], 'boundary': embedded, 'length': rest}
    reference = assemble_dense(boundary_op) @ omega_rest / np.trace(block)

    literal = assemble_dense(symmetry_operator(context, unit, rest)) @ omega_rest
    literal = literal / np.trace(literal)

    rho = build_rfp(m, length, context)['dense']
    others = [other for other in range(len(context['irreps_1d'])) if other != m]
    other_rho = build_rfp(others[0], length, context)['dense'] if others else None

    sites = []
    for site in range(length):
        reduced = partial_trace(rho, [phys] * length, site)
        # czynnik wzorca j odpowiada węzłowi (site + 1 + j) mod L
        cyclic = [(site + 1 + j) % length for j in range(rest)]
        natural = sorted(cyclic)
        order = [cyclic.index(position) for position in natural]
        expected = _permute_sites(reference, phys, order)
        entry = {
            'site': site,
            'residual': float(np.linalg.norm(reduced - expected)),
            'trace': complex(np.trace(reduced)),
            'literal_deviation': float(np.linalg.norm(reduced - literal)),
        }
        if other_rho is not None:
            entry['indistinguishability'] = float(np.linalg.norm(reduced - partial_trace(other_rho, [phys] * length, site)))
        sites.append(entry)

    residual = max(entry['residual'] for entry in sites)
    indistinguishability = max((entry.get('indistinguishability', 0.0) for entry in sites), default=0.0)
    trace_error = max(abs(entry['trace'] - 1.0) for entry in sites)
    return {
        'm': m,
        'L': length,
        'sites': sites,
        'checks': [
            _check('trace_out', 'ślad po węźle daje O(Ψ_I(θ)) Ω / tr Ψ_I(θ)', residual, tol, m=m, L=length),
            _check('local_indistinguishability', 'ptr ρ_0 = ptr ρ_1', indistinguishability, tol, m=m, L=length),
            _check('trace_out_trace', 'tr ptr ρ_m = 1', trace_error, tol, m=m, L=length),
        ],
    }


def _multiset_distance(found: np.ndarray, expected: np.ndarray) -> float:
    cost = np.abs(found[:, None] - expected[None, :])
    rows, cols = scipy.optimize.linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) if len(rows) else 0.0


def gram_overlaps(length: int, context: Context) -> Dict[str, Any]:
    """Nakładania HS operatorów O_a √Ω^{⊗L} dla wszystkich par etykiet."""
    root = sqrt_omega(context['omega'], context['tol'])
    dressed = _dressed_tensor(context, root)
    labels = context['ring']['labels']
    ops = {label: make_operator(dressed, block_projector(context['psi'], label), length, context['tol']) for label in labels}
    matrix = np.array([[hs_inner(ops[a], ops[b]) for b in labels] for a in labels])
    return {'labels': labels, 'matrix': matrix, 'L': length}


def purification_mps(m: int, context: Context, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """MPS |Ψ_m⟩ = O(Π_m)√Ω^{⊗L}/√N_m z wymiarem fizycznym d² (węzeł ⊗ ancilla).

    Raises:
        InputError: Gdy √Ω nie istnieje albo N_m nie jest dodatnie.
    """
    norm = normalization(context, m)
    if norm <= 0:
        raise InputError(f'Niedodatnia normalizacja N_{m} = {norm}')
    idempotent = build_central_idempotent(m, context['ring'], context['irreps_1d'], context['tol'], context['threshold'])
    boundary = idempotent_boundary(idempotent, context['psi']) / np.sqrt(norm)
    return mps_from_mpo(_dressed_tensor(context, sqrt_omega(context['omega'], tol)), boundary)


def purification_check(m: int, length: int, context: Context, tol: float = DEFAULT_TOL) -> Dict[str, Any]:
    """Oczyszczenie |Ψ_m⟩ = O(Π_m)√Ω^{⊗L}/√N_m i widma mieszanych macierzy przejścia.

    Widmo E_ab (bra z bloku ``a``, ket z bloku ``b``) porównywane jest z
    ⊎_c spec Ψ_c(θ) powtórzonym N_{ā b}^c razy i dopełnionym zerami.

    Raises:
        InputError: Gdy √Ω nie istnieje.
    """
    checks: List[Dict[str, Any]] = []
    ring = context['ring']
    psi = context['psi']
    phys = context['phi']['dim']
    root = sqrt_omega(context['omega'], tol)
    rfp = build_rfp(m, length, context)
    mps = purification_mps(m, context, tol)
    if rfp['dense'] is not None:
        vector = mps_dense(mps, length)
        matrix = vector.reshape([phys, phys] * length)
        axes = [2 * k for k in range(length)] + [2 * k + 1 for k in range(length)]
        matrix = matrix.transpose(axes).reshape(phys ** length, phys ** length)
        reduced = matrix @ matrix.conj().T
        checks.append(_check('purification', 'tr_anc |Ψ_m⟩⟨Ψ_m| = ρ_m', float(np.linalg.norm(reduced - rfp['dense'])), tol, m=m, L=length))

    for label in ring['labels']:
        op = make_operator(extend_with_ancilla(context['tensor'], phys), block_projector(psi, label), length, tol)
        symmetric, value = check_mps_symmetric(mps, op, tol)
        expected = context['irreps_1d'][m][label]
        deviation = abs(value - expected) if symmetric else float('inf')
        checks.append(_check('purification_symmetry', '(O_a ⊗ 1)|Ψ_m⟩ = λ_ma |Ψ_m⟩', deviation, tol, m=m, a=label, L=length))

    irreps = block_irreps(psi, tol)
    by_label = {irrep['label']: irrep for irrep in irreps}
    phi = context['phi']
    for a in ring['labels']:
        for b in ring['labels']:
            t_a = make_tensor(np.einsum('xlr,xij->lrij', by_label[a]['mats'], np.einsum('xij,jk->xik', phi['mats'], root)))
            t_b = make_tensor(np.einsum('xlr,xij->lrij', by_label[b]['mats'], np.einsum('xij,jk->xik', phi['mats'], root)))
            spectrum = np.linalg.eigvals(transfer_matrix(t_a, t_b))
            a_bar = ring['dual'][a]
            expected: List[complex] = []
            for c in ring['labels']:
                count = fusion_ring.fusion_coefficient(ring, a_bar, b, c)
                expected.extend(list(np.linalg.eigvals(context['transfer']['blocks'][c])) * count)
            expected.extend([0j] * (len(spectrum) - len(expected)))
            distance = _multiset_distance(spectrum, np.array(expected[:len(spectrum)]))
            ones = int(np.sum(np.abs(spectrum - 1.0) <= 1e-6))
            unit_count = fusion_ring.fusion_coefficient(ring, a_bar, b, ring['unit'])
            checks.append(_check('transfer_spectrum', 'spec E_ab = ⊎_c spec Ψ_c(θ)^{N}', distance, max(tol, 1e-8), a=a, b=b))
            checks.append(_check('transfer_unit_multiplicity', 'krotność 1 w spec E_ab = N^I', float(abs(ones - unit_count)), 0.0, a=a, b=b))
    return {'m': m, 'L': length, 'checks': checks}


def transfer_checks(context: Context, tol: float = DEFAULT_TOL) -> List[Dict[str, Any]]:
    """E² = E, rząd Ψ_I(θ) równy 1, Ψ_a(θ) = 0 dla a ≠ I, widmo E w {0, 1}."""
    data = context['transfer']
    unit = context['ring']['unit']
    checks = [
        _check('transfer_idempotent', 'E² = E', data['idempotency'], tol),
        _check('transfer_unit_rank', 'rząd Ψ_I(θ) = 1', float(abs(data['ranks'][unit] - 1)), 0.0),
        _check('transfer_spectrum_binary', 'spec E ⊆ {0, 1}', data['spectrum_deviation'], max(tol, 1e-8)),
    ]
    for label, block in data['blocks'].items():
        if label != unit:
            checks.append(_check('transfer_block_zero', 'Ψ_a(θ) = 0 dla a ≠ I', float(np.max(np.abs(block))), tol, a=label))
    return checks


def fib_context(tol: float = DEFAULT_TOL, threshold: float = 1e-8) -> Context:
    """Kontekst dla wbudowanej algebry Fibonacciego z Φ i Ψ z tablic."""
    from lib import fib_data

    alg = fib_data.build_fib_wha()
    return make_context(alg, fib_data.build_phi(alg, tol), fib_data.build_psi(alg, tol), tol, threshold)
