import numpy as np
import pytest

from lib import wha_core
from lib.errors import InputError, NumericalError
from lib.fib_data import fib_ring

AXIOMS = [
    'associativity', 'unit', 'coassociativity', 'counit', 'comult_multiplicative', 'weak_unit', 'weak_counit',
    'antipode_target', 'antipode_source', 'antipode_sandwich', 'star_involution', 'star_antihomomorphism',
    'star_cohomomorphism',
]


def test_fibonacci_algebra_passes_every_axiom(fib_alg):
    report = wha_core.verify_axioms(fib_alg, 1e-10)
    assert [check['name'] for check in report['checks']] == AXIOMS
    assert report['overall'], report['failed']
    assert all(check['anchor'] for check in report['checks'])


def test_dual_algebra_passes_every_axiom(fib_alg):
    report = wha_core.verify_axioms(wha_core.dual(fib_alg), 1e-10)
    assert report['overall'], report['failed']


def test_dual_is_an_involution(fib_alg):
    twice = wha_core.dual(wha_core.dual(fib_alg))
    assert twice['basis'] == fib_alg['basis']
    for key in ('mult', 'comult', 'unit', 'counit', 'antipode', 'star'):
        np.testing.assert_allclose(twice[key], fib_alg[key], atol=1e-12)


def test_perturbed_table_fails(fib_alg):
    broken = dict(fib_alg)
    broken['mult'] = fib_alg['mult'].copy()
    broken['mult'][0, 0, 0] += 0.1
    report = wha_core.verify_axioms(broken, 1e-10)
    assert not report['overall']
    assert 'associativity' in report['failed'] or 'comult_multiplicative' in report['failed']


def test_singular_antipode_has_no_dual(fib_alg):
    broken = dict(fib_alg)
    broken['antipode'] = np.zeros_like(fib_alg['antipode'])
    with pytest.raises(InputError):
        wha_core.dual(broken)


def test_counital_maps_are_idempotent(fib_alg):
    maps = wha_core.counital_maps(fib_alg)
    for matrix in maps.values():
        np.testing.assert_allclose(matrix @ matrix, matrix, atol=1e-10)


def test_comultiply_powers(fib_alg):
    unit = fib_alg['unit']
    twice = wha_core.comultiply(fib_alg, unit, 2)
    np.testing.assert_allclose(twice.reshape(fib_alg['dim'], fib_alg['dim']), wha_core.unit_coproduct(fib_alg), atol=1e-12)
    assert wha_core.comultiply(fib_alg, unit, 3).size == fib_alg['dim'] ** 3


def test_wedderburn_structure(fib_alg):
    assert wha_core.center_basis(fib_alg).shape[1] == 2
    ranks = [item['rank'] for item in wha_core.central_idempotents(fib_alg)]
    assert ranks == [4, 9]


def test_regular_representation_is_a_homomorphism(fib_alg):
    rep = wha_core.make_representation(fib_alg, wha_core.regular_representation(fib_alg))
    assert rep['flags']['is_faithful']
    assert rep['flags']['is_unital']


def test_non_homomorphism_is_rejected(fib_alg):
    mats = np.array([np.eye(2) for _ in range(fib_alg['dim'])])
    with pytest.raises(NumericalError):
        wha_core.make_representation(fib_alg, mats)


def test_phi_and_psi_are_faithful_star_representations(fib_phi, fib_psi):
    for rep in (fib_phi, fib_psi):
        assert rep['dim'] == 5
        assert rep['flags'] == {'is_star': True, 'is_faithful': True, 'is_unital': True}
        assert wha_core.block_labels(rep) == ['I', 'tau']


def test_fusion_rules_of_psi_blocks(fib_psi):
    ring = wha_core.fusion_rules(wha_core.block_irreps(fib_psi))
    expected = fib_ring()
    assert ring['unit'] == 'I'
    np.testing.assert_array_equal(ring['N'], expected['N'])
    assert ring['dims']['tau'] == pytest.approx(expected['dims']['tau'])


def test_decompose_monoidal_square(fib_psi):
    irreps = wha_core.block_irreps(fib_psi)
    tau = irreps[1]
    result = wha_core.decompose(wha_core.monoidal_product(tau, tau), irreps)
    assert result['multiplicities'] == {'I': 1, 'tau': 1}
    for block in result['blocks']:
        for isometry in block['isometries']:
            np.testing.assert_allclose(isometry.conj().T @ isometry, np.eye(isometry.shape[1]), atol=1e-9)


def test_star_representation_of_fibonacci(fib_alg):
    rep = wha_core.star_representation(fib_alg)
    sizes = sorted(block['stop'] - block['start'] for block in rep['blocks'])
    assert sizes == [2, 3]
    assert rep['flags']['is_star'] and rep['flags']['is_faithful']
    assert wha_core.block_labels(rep) == ['b0', 'b1']


def test_block_projector_and_rename(fib_phi):
    projector = wha_core.block_projector(fib_phi, 'tau')
    np.testing.assert_array_equal(np.diag(projector).real, [0, 0, 1, 1, 1])
    renamed = wha_core.rename_blocks(fib_phi, {'tau': 't'})
    assert wha_core.block_labels(renamed) == ['I', 't']
    with pytest.raises(InputError):
        wha_core.block_projector(fib_phi, 'missing')


def test_dual_label():
    assert wha_core.dual_label('e1,11') == '~e1,11'
    assert wha_core.dual_label('~e1,11') == 'e1,11'


def test_antipode_reverses_products(fib_alg):
    unit = wha_core.apply_antipode(fib_alg, fib_alg['unit'])
    np.testing.assert_allclose(unit, fib_alg['unit'], atol=1e-12)
    for left in fib_alg['basis']:
        x = wha_core.basis_vector(fib_alg, left)
        for right in fib_alg['basis']:
            y = wha_core.basis_vector(fib_alg, right)
            np.testing.assert_allclose(
                wha_core.apply_antipode(fib_alg, wha_core.multiply(fib_alg, x, y)),
                wha_core.multiply(fib_alg, wha_core.apply_antipode(fib_alg, y), wha_core.apply_antipode(fib_alg, x)),
                atol=1e-10,
            )


def test_basis_vector_rejects_unknown_label(fib_alg):
    assert wha_core.basis_vector(fib_alg, fib_alg['basis'][2])[2] == 1
    with pytest.raises(ValueError):
        wha_core.basis_vector(fib_alg, 'nope')
