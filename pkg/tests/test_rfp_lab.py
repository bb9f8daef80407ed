import numpy as np
import pytest

from lib import mpo_engine, rfp_lab
from lib.errors import ShapeError
from lib.fib_data import PHI
from lib.wha_core import block_projector

SQRT5 = np.sqrt(5.0)
TOL = 1e-8


def test_omega_coefficients(fib_context):
    omega = fib_context['omega']
    assert omega['d_squared'] == pytest.approx(1 + PHI ** 2)
    assert omega['coefficients']['I'] == pytest.approx(1 / (1 + PHI ** 2))
    assert omega['coefficients']['tau'] == pytest.approx(PHI / (1 + PHI ** 2))
    assert np.trace(omega['matrix']).real == pytest.approx((2 + 3 * PHI) / (1 + PHI ** 2))


def test_sqrt_omega_squares_to_omega(fib_context):
    root = rfp_lab.sqrt_omega(fib_context['omega'])
    np.testing.assert_allclose(root @ root, fib_context['omega']['matrix'], atol=1e-12)


def test_one_dimensional_irreps(fib_context):
    irreps = fib_context['irreps_1d']
    assert len(irreps) == 2
    assert irreps[0]['I'] == pytest.approx(1.0)
    assert irreps[0]['tau'] == pytest.approx(PHI)
    assert irreps[1]['tau'] == pytest.approx(-1 / PHI)


def test_central_idempotents(fib_context):
    first = rfp_lab.build_central_idempotent(0, fib_context['ring'], fib_context['irreps_1d'])
    second = rfp_lab.build_central_idempotent(1, fib_context['ring'], fib_context['irreps_1d'])
    assert first['coefficients']['I'] == pytest.approx(2 / (5 + SQRT5))
    assert first['coefficients']['tau'] == pytest.approx(1 / SQRT5)
    assert second['coefficients']['I'] == pytest.approx(2 / (5 - SQRT5))
    assert second['coefficients']['tau'] == pytest.approx(-1 / SQRT5)


def test_idempotent_index_out_of_range(fib_context):
    with pytest.raises(IndexError):
        rfp_lab.build_central_idempotent(2, fib_context['ring'], fib_context['irreps_1d'])


def test_transfer_checks_pass(fib_context):
    checks = rfp_lab.transfer_checks(fib_context)
    assert {check['name'] for check in checks} == {
        'transfer_idempotent', 'transfer_unit_rank', 'transfer_spectrum_binary', 'transfer_block_zero',
    }
    assert all(check['pass'] for check in checks), checks
    assert fib_context['transfer']['ranks'] == {'I': 1, 'tau': 0}


def test_idempotent_sum(fib_context):
    assert rfp_lab.check_idempotent_sum(fib_context)['pass']


@pytest.mark.parametrize('m', [0, 1])
def test_normalization_is_positive(fib_context, m):
    assert rfp_lab.normalization(fib_context, m) > 0


@pytest.mark.parametrize('length', [2, 3])
@pytest.mark.parametrize('m, expected', [(0, PHI), (1, -1 / PHI)])
def test_strong_symmetry_eigenvalues(fib_context, m, expected, length):
    entry = rfp_lab.check_strong_symmetry(m, 'tau', length, fib_context, TOL)
    assert entry['pass'], entry
    assert entry['lambda'] == pytest.approx(expected, abs=1e-8)
    unit = rfp_lab.check_strong_symmetry(m, 'I', length, fib_context, TOL)
    assert unit['lambda'] == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize('length', [1, 2, 3])
@pytest.mark.parametrize('m', [0, 1])
def test_states_are_normalized_positive(fib_context, m, length):
    checks = rfp_lab.check_state(m, length, fib_context, TOL)
    assert [check['name'] for check in checks] == ['trace', 'hermitian', 'positive']
    assert all(check['pass'] for check in checks), checks


@pytest.mark.parametrize('m', [0, 1])
def test_projector_checks(fib_context, m):
    checks = rfp_lab.check_projector(m, 2, fib_context, TOL)
    assert [check['name'] for check in checks] == [
        'projector_idempotent', 'projector_hermitian', 'projector_commutes_omega',
    ]
    assert all(check['pass'] for check in checks), checks


def test_rfp_dense_is_skipped_above_cap(fib_context):
    rfp = rfp_lab.build_rfp(0, 3, fib_context, dense_cap=1000)
    assert rfp['dense'] is None
    assert rfp['operator']['length'] == 3


def test_weak_symmetry(fib_context):
    assert rfp_lab.check_weak_symmetry('tau', 2, fib_context, 0, TOL)['pass']


@pytest.mark.parametrize('length', [2, 3])
@pytest.mark.parametrize('m', [0, 1])
def test_trace_out_site(fib_context, m, length):
    result = rfp_lab.trace_out_site(m, length, fib_context, TOL)
    assert len(result['sites']) == length
    assert all(check['pass'] for check in result['checks']), result['checks']


def test_trace_out_needs_two_sites(fib_context):
    with pytest.raises(ShapeError):
        rfp_lab.trace_out_site(0, 1, fib_context)


@pytest.mark.parametrize('m', [0, 1])
def test_purification(fib_context, m):
    result = rfp_lab.purification_check(m, 2, fib_context, TOL)
    failed = [check for check in result['checks'] if not check['pass']]
    assert not failed, failed
    names = {check['name'] for check in result['checks']}
    assert names == {'purification', 'purification_symmetry', 'transfer_spectrum', 'transfer_unit_multiplicity'}


@pytest.mark.parametrize('m, expected', [(0, PHI), (1, -1 / PHI)])
def test_purification_state_is_an_eigenvector(fib_context, m, expected):
    mps = rfp_lab.purification_mps(m, fib_context)
    assert mps['phys_dim'] == 25
    tensor = mpo_engine.extend_with_ancilla(fib_context['tensor'], fib_context['phi']['dim'])
    for length in (1, 2, 3):
        op = mpo_engine.make_operator(tensor, block_projector(fib_context['psi'], 'tau'), length)
        ok, value = mpo_engine.check_mps_symmetric(mps, op, TOL)
        assert ok
        assert value == pytest.approx(expected, abs=1e-8)


def test_gram_overlaps_are_hermitian(fib_context):
    gram = rfp_lab.gram_overlaps(2, fib_context)
    assert gram['labels'] == ['I', 'tau']
    np.testing.assert_allclose(gram['matrix'], gram['matrix'].conj().T, atol=1e-10)


def test_compiled_z2_has_sign_characters(z2_fsymbols):
    from lib.cat_compiler import compile

    context = rfp_lab.make_context(compile(z2_fsymbols['trivial']))
    assert sorted(context['ring']['labels']) == ['I', 'a1']
    values = sorted(irrep['a1'].real for irrep in context['irreps_1d'])
    assert values == pytest.approx([-1.0, 1.0])


@pytest.fixture(scope='module')
def compiled_context(fib_compiled):
    return rfp_lab.make_context(fib_compiled)


def test_compiled_fibonacci_context(compiled_context):
    ring = compiled_context['ring']
    assert len(ring['labels']) == 2 and ring['unit'] == 'I'
    assert all(check['pass'] for check in rfp_lab.transfer_checks(compiled_context, TOL))
    assert rfp_lab.check_idempotent_sum(compiled_context, TOL)['pass']


def test_compiled_fibonacci_fusion(compiled_context):
    ring = compiled_context['ring']
    phi, psi = compiled_context['phi'], compiled_context['psi']
    operators = mpo_engine.symmetry_operators(phi, psi, 1)
    for a in ring['labels']:
        for b in ring['labels']:
            result = mpo_engine.check_fusion(a, b, ring, [1, 2, 3, 8], mpo_engine.DEFAULT_FUSION_TOL, operators)
            assert result['pass'], result['entries']


@pytest.mark.parametrize('length', [2, 3])
def test_compiled_fibonacci_strong_symmetry(compiled_context, length):
    label = next(label for label in compiled_context['ring']['labels'] if label != 'I')
    values = []
    for m in (0, 1):
        entry = rfp_lab.check_strong_symmetry(m, label, length, compiled_context, TOL)
        assert entry['pass'], entry
        values.append(entry['lambda'].real)
    assert sorted(values) == pytest.approx([-1 / PHI, PHI], abs=1e-8)


@pytest.mark.parametrize('length', [2, 3])
@pytest.mark.parametrize('m', [0, 1])
def test_compiled_fibonacci_trace_out(compiled_context, m, length):
    result = rfp_lab.trace_out_site(m, length, compiled_context, TOL)
    assert all(check['pass'] for check in result['checks']), result['checks']
