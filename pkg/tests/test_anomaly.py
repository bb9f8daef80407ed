import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lib import anomaly, formats, fusion_ring
from lib.errors import InputError, OrderExceededError

FRACTIONS = sorted({(n // math.gcd(n, d), d // math.gcd(n, d)) for d in range(1, 7) for n in range(d)})


@pytest.fixture(scope='module')
def rings(data_dir):
    return {name: formats.read_fusion(data_dir / f'{name}_fusion.json') for name in ('fib', 'z2', 'ising')}


def test_fp_dimensions(rings):
    assert anomaly.fp_dimensions(rings['fib'])['tau'] == pytest.approx((1 + np.sqrt(5)) / 2)
    assert anomaly.fp_dimensions(rings['z2']) == pytest.approx({'0': 1.0, '1': 1.0})
    ising = anomaly.fp_dimensions(rings['ising'])
    assert ising['sigma'] == pytest.approx(np.sqrt(2))
    assert ising['psi'] == pytest.approx(1.0)


@pytest.mark.parametrize('name, anomalous', [('fib', True), ('z2', False), ('ising', True)])
def test_integrality_verdict(rings, name, anomalous):
    verdict = anomaly.theorem1_verdict(rings[name])
    assert verdict['anomalous_by_theorem1'] is anomalous
    assert verdict['tolerance'] == anomaly.DEFAULT_INTEGER_TOL
    assert verdict['fp_residual'] <= anomaly.FP_TOL


def test_verdict_ignores_label_order(rings):
    relabelled = fusion_ring.relabel(rings['ising'], [2, 0, 1])
    original = anomaly.theorem1_verdict(rings['ising'])
    moved = anomaly.theorem1_verdict(relabelled)
    assert moved['anomalous_by_theorem1'] == original['anomalous_by_theorem1']
    assert moved['fp_dims'] == pytest.approx(original['fp_dims'])


def test_exponential_growth_is_not_finite():
    result = anomaly.analyze_sequence([2.0 ** length for length in range(1, 31)])
    assert result['order'] == 1
    assert result['roots'][0] == pytest.approx(2.0)
    assert result['period'] is None
    assert result['verdict'] == anomaly.NOT_FINITE


def test_golden_ratio_growth_is_not_finite():
    phi = (1 + np.sqrt(5)) / 2
    values = [phi ** length + (-1 / phi) ** length for length in range(1, 31)]
    result = anomaly.analyze_sequence(values)
    assert result['order'] == 2
    assert result['verdict'] == anomaly.NOT_FINITE


def test_period_two():
    values = [1 + (-1) ** length for length in range(1, 21)]
    result = anomaly.analyze_sequence(values)
    assert result['order'] == 2
    assert result['period'] == 2
    assert result['verdict'] == anomaly.FINITE


def test_zero_sequence():
    result = anomaly.analyze_sequence([0.0] * 16)
    assert result['order'] == 0
    assert result['period'] == 1


def test_short_sequence_is_rejected():
    with pytest.raises(InputError):
        anomaly.analyze_sequence([1.0] * 10, max_order=8)


def test_noise_exceeds_order():
    values = np.random.default_rng(5).normal(size=20)
    with pytest.raises(OrderExceededError) as info:
        anomaly.analyze_sequence(values, max_order=4)
    assert info.value.max_order == 4


def test_periodic_values_are_integers():
    values = [1 + (-1) ** length for length in range(1, 21)]
    report = anomaly.check_periodic_eigenvalues(values)
    assert report['pass']
    assert [sample['L'] for sample in report['samples']] == list(range(2, 21, 2))
    assert all(sample['integer'] == 2 for sample in report['samples'])


def test_non_integer_periodic_values_fail():
    report = anomaly.check_periodic_eigenvalues([1.5] * 16)
    assert report['analysis']['period'] == 1
    assert not report['pass']


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_roots_of_unity_give_lcm_period(data):
    fractions = data.draw(st.lists(st.sampled_from(FRACTIONS), min_size=1, max_size=4, unique=True))
    weights = data.draw(st.lists(
        st.floats(min_value=0.5, max_value=2.0),
        min_size=len(fractions), max_size=len(fractions),
    ))
    signs = data.draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=len(fractions), max_size=len(fractions)))
    roots = [np.exp(2j * np.pi * n / d) for n, d in fractions]
    values = [
        sum(sign * weight * root ** length for sign, weight, root in zip(signs, weights, roots))
        for length in range(1, 31)
    ]
    result = anomaly.analyze_sequence(values)
    assert result['order'] == len(fractions)
    assert result['period'] == math.lcm(*(d for _, d in fractions))
    assert result['verdict'] == anomaly.FINITE
