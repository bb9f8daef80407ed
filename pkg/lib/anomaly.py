"""Kryteria anomalii: całkowitość wymiarów Frobeniusa-Perrona i okresowość ciągów wartości własnych."""

import logging
import math
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from lib import fusion_ring
from lib.errors import InputError, OrderExceededError

logger = logging.getLogger(__name__)

DEFAULT_INTEGER_TOL = 1e-6
FP_TOL = 1e-8
NOT_FINITE = 'obraz nieskończony w tym horyzoncie'
FINITE = 'obraz skończony'


def fp_dimensions(ring: Dict[str, Any]) -> Dict[str, float]:
    """Wymiary Frobeniusa-Perrona, d_I = 1; niespójność d_a d_b = Σ N d_c trafia do logu."""
    dims = fusion_ring.perron_dimensions(ring)
    residual = fp_residual(ring, dims)
    if residual > FP_TOL:
        logger.warning('Wymiary FP nie spełniają d_a d_b = Σ N d_c (residuum=%.3e)', residual)
    return dims


def fp_residual(ring: Dict[str, Any], dims: Dict[str, float]) -> float:
    return float(fusion_ring.check_ring(ring, dims)['dims'])


def theorem1_verdict(ring: Dict[str, Any], tol: float = DEFAULT_INTEGER_TOL) -> Dict[str, Any]:
    """Flaga anomalii: któryś wymiar FP jest dalej niż ``tol`` od każdej liczby całkowitej."""
    dims = fp_dimensions(ring)
    integral = {label: bool(abs(value - round(value)) <= tol) for label, value in dims.items()}
    verdict = {
        'fp_dims': dims,
        'fp_residual': fp_residual(ring, dims),
        'integral': integral,
        'anomalous_by_theorem1': not all(integral.values()),
        'tolerance': tol,
    }
    logger.info('Werdykt anomalii: %s', verdict['anomalous_by_theorem1'])
    return verdict


def _fit_recurrence(values: np.ndarray, order: int) -> Dict[str, Any]:
    """Najmniejsze kwadraty dla F(L+s) + Σ_t C_t F(L+s−t) = 0 na układzie Hankela."""
    rows = len(values) - order
    hankel = np.array([values[start:start + order][::-1] for start in range(rows)])
    target = -values[order:order + rows]
    coefficients, *_ = np.linalg.lstsq(hankel, target, rcond=None)
    scale = max(float(np.linalg.norm(target)), 1.0)
    residual = float(np.linalg.norm(hankel @ coefficients - target)) / scale
    return {'coefficients': coefficients, 'residual': residual}


def _root_of_unity_order(root: complex, horizon: int, tol: float) -> Optional[int]:
    """Rząd pierwiastka z jedności przez ułamek łańcuchowy arg(z)/2π z mianownikiem ≤ horizon."""
    if abs(abs(root) - 1.0) > tol:
        return None
    turn = (np.angle(root) / (2 * np.pi)) % 1.0
    fraction = Fraction(turn).limit_denominator(horizon)
    if abs(np.exp(2j * np.pi * float(fraction)) - root) > tol:
        return None
    return fraction.denominator


def analyze_sequence(values: Sequence[complex], max_order: int = 8, tol: float = 1e-9,
                     root_tol: float = DEFAULT_INTEGER_TOL) -> Dict[str, Any]:
    """Minimalna rekurencja liniowa F(1..K), pierwiastki charakterystyczne i okres.

    Okres to najmniejsze ℓ z z_t^ℓ = 1 dla wszystkich pierwiastków (NWW rzędów),
    potwierdzone przez F(L+ℓ) = F(L) na dostępnych wartościach. Gdy któryś
    pierwiastek nie jest pierwiastkiem z jedności, okres jest pusty, a werdykt
    brzmi ``NOT_FINITE``.

    Raises:
        InputError: Gdy K < 2·max_order.
        OrderExceededError: Gdy żadna rekurencja rzędu ≤ max_order nie pasuje.
    """
    data = np.asarray(values, dtype=complex)
    horizon = len(data)
    if horizon < 2 * max_order:
        raise InputError(f'Za mało wartości: {horizon} < 2·{max_order}')

    if float(np.max(np.abs(data), initial=0.0)) <= tol:
        return {'order': 0, 'coefficients': [], 'roots': [], 'period': 1, 'verdict': FINITE, 'residual': 0.0}

    best = math.inf
    for order in range(1, max_order + 1):
        fit = _fit_recurrence(data, order)
        best = min(best, fit['residual'])
        if fit['residual'] <= tol:
            break
    else:
        raise OrderExceededError(max_order, best)

    coefficients = fit['coefficients']
    roots = np.roots(np.concatenate([[1.0], coefficients]))
    orders = [_root_of_unity_order(root, horizon, root_tol) for root in roots]
    period: Optional[int] = None
    if all(item is not None for item in orders):
        period = math.lcm(*orders)
        scale = max(float(np.max(np.abs(data))), 1.0)
        if period < horizon and np.max(np.abs(data[period:] - data[:-period])) > root_tol * scale:
            logger.debug('Okres %d nie potwierdzony na danych', period)
            period = None

    result = {
        'order': order,
        'coefficients': [complex(value) for value in coefficients],
        'roots': sorted((complex(root) for root in roots), key=lambda z: (round(np.angle(z), 9), abs(z))),
        'period': period,
        'verdict': FINITE if period is not None else NOT_FINITE,
        'residual': fit['residual'],
    }
    logger.info('Rekurencja rzędu %d, okres %s', order, period)
    return result


def check_periodic_eigenvalues(values: Sequence[complex], max_order: int = 8, tol: float = 1e-9,
                               integer_tol: float = DEFAULT_INTEGER_TOL) -> Dict[str, Any]:
    """Dla wykrytego okresu ℓ wartości F(L) przy L ≡ 0 (mod ℓ) są nieujemnymi liczbami całkowitymi."""
    analysis = analyze_sequence(values, max_order, tol)
    period = analysis['period']
    samples: List[Dict[str, Any]] = []
    if period is not None:
        for length in range(period, len(values) + 1, period):
            value = complex(values[length - 1])
            nearest = round(value.real)
            ok = abs(value - nearest) <= integer_tol and nearest >= 0
            samples.append({'L': length, 'value': value, 'integer': int(nearest), 'pass': bool(ok)})
    return {
        'analysis': analysis,
        'samples': samples,
        'pass': period is not None and all(sample['pass'] for sample in samples),
    }
