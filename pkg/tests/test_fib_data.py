import numpy as np
import pytest

from lib import fib_data
from lib.wha_core import dual, verify_axioms


def test_basis_order():
    assert fib_data.BASIS[:4] == ['e1,11', 'e1,12', 'e1,21', 'e1,22']
    assert fib_data.BASIS[-1] == 'e2,33'
    assert len(fib_data.BASIS) == 13


def test_zeta_and_golden_ratio():
    assert fib_data.zeta() ** 2 == pytest.approx(1 / fib_data.PHI)
    assert fib_data.zeta() ** 4 == pytest.approx(1 / fib_data.PHI ** 2)


def test_pairing_matrices_are_inverse():
    tables = fib_data.pairing_tables()
    np.testing.assert_allclose(tables['r_tilde'] @ tables['r'], np.eye(13), atol=1e-12)


def test_pairing_identities_hold():
    report = fib_data.pairing_identities()
    assert [check['name'] for check in report['checks']] == [
        'product_left', 'product_right', 'unit_left', 'unit_right', 'antipode', 'star', 'inverse',
    ]
    assert report['overall'], [check for check in report['checks'] if not check['pass']]


def test_literal_table_fails_and_corrected_passes():
    literal = verify_axioms(fib_data.build_fib_wha(corrected=False), 1e-10)
    corrected = verify_axioms(fib_data.build_fib_wha(), 1e-10)
    assert not literal['overall']
    assert corrected['overall']


def test_printed_table_has_nine_lines_and_corrections_touch_four():
    printed = fib_data.printed_comultiplication()
    corrected = fib_data.corrected_comultiplication()
    assert len(printed) == 9
    changed = [label for label in printed if printed[label] != corrected[label]]
    assert sorted(changed) == sorted(item[0] for item in fib_data.CORRECTIONS)


def test_suspected_artifacts_are_reported(caplog):
    with caplog.at_level('WARNING', logger='lib.fib_data'):
        artifacts = fib_data.suspected_artifacts()
    assert [item['element'] for item in artifacts] == ['e1,22', 'e2,11', 'e2,13', 'e2,23']
    assert all(item['corrected_residual'] <= 1e-10 for item in artifacts)
    assert any(item['literal_residual'] > 1e-10 for item in artifacts)
    assert len([record for record in caplog.records if record.levelname == 'WARNING']) == 4


def test_phi_is_matrix_unit_representation(fib_phi):
    index = fib_data.INDEX['e2,13']
    expected = np.zeros((5, 5))
    expected[2, 4] = 1
    np.testing.assert_array_equal(fib_phi['mats'][index], expected)
    assert [block['label'] for block in fib_phi['blocks']] == ['I', 'tau']


def test_psi_represents_the_dual(fib_alg, fib_psi):
    assert fib_psi['algebra']['basis'] == dual(fib_alg)['basis']
    assert fib_psi['residuals']['homomorphism'] <= 1e-10


def test_fibonacci_ring():
    ring = fib_data.fib_ring()
    assert ring['labels'] == ['I', 'tau']
    assert ring['dims']['tau'] == pytest.approx((1 + np.sqrt(5)) / 2)


def test_verify_fib():
    report = fib_data.verify_fib()
    assert report['algebra']['overall'] and report['dual']['overall']
