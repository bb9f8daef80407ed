import numpy as np
import pytest

from lib import fusion_ring
from lib.errors import InputError
from lib.fib_data import PHI, fib_ring


def test_fibonacci_ring_axioms():
    ring = fib_ring()
    residuals = fusion_ring.check_ring(ring)
    assert residuals == {'unit': 0.0, 'dual': 0.0, 'associativity': 0.0, 'dims': pytest.approx(0.0, abs=1e-12)}


def test_fusion_matrix_convention():
    ring = fib_ring()
    np.testing.assert_array_equal(fusion_ring.fusion_matrix(ring, 'tau'), [[0, 1], [1, 1]])
    assert fusion_ring.fusion_coefficient(ring, 'tau', 'tau', 'I') == 1
    assert fusion_ring.is_multiplicity_free(ring)


def test_perron_dimensions():
    dims = fusion_ring.perron_dimensions(fib_ring())
    assert dims['I'] == pytest.approx(1.0)
    assert dims['tau'] == pytest.approx(PHI)
    assert fusion_ring.total_dimension_squared(fib_ring(), dims) == pytest.approx((5 + np.sqrt(5)) / 2)


def test_relabel_and_rename():
    ring = fib_ring()
    swapped = fusion_ring.relabel(ring, [1, 0])
    assert swapped['labels'] == ['tau', 'I']
    assert fusion_ring.fusion_coefficient(swapped, 'tau', 'tau', 'tau') == 1
    assert fusion_ring.check_ring(swapped)['associativity'] == 0.0

    mapping = fusion_ring.canonical_names(swapped)
    assert mapping == {'I': 'I', 'tau': 'a1'}
    renamed = fusion_ring.rename_labels(ring, {'tau': 't'})
    assert renamed['labels'] == ['I', 't']
    assert renamed['dims']['t'] == pytest.approx(PHI)


def test_admissible_triples():
    assert fusion_ring.admissible_triples(fib_ring()) == [
        ('I', 'I', 'I'), ('I', 'tau', 'tau'), ('tau', 'I', 'tau'), ('tau', 'tau', 'I'), ('tau', 'tau', 'tau'),
    ]


@pytest.mark.parametrize('entries, unit', [
    ([('I', 'I', 'X', 1)], 'I'),
    ([('I', 'I', 'I', -1)], 'I'),
    ([], 'Y'),
])
def test_make_ring_rejects_bad_input(entries, unit):
    with pytest.raises(InputError):
        fusion_ring.make_ring(['I'], unit, {'I': 'I'}, entries)
