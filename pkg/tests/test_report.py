import json
import math

import numpy as np
from rich.console import Console

from lib import report


def _check(name, passed, **extra):
    return dict({'name': name, 'anchor': 'x', 'residual': 0.0 if passed else 1.0, 'tolerance': 1e-9, 'pass': passed}, **extra)


def test_jsonable_converts_numpy_and_complex():
    data = {'a': np.float64(1.5), 'b': np.array([1 + 2j]), 'c': np.int64(3), 'd': np.bool_(True), 'e': math.inf}
    assert report.jsonable(data) == {'a': 1.5, 'b': [[1.0, 2.0]], 'c': 3, 'd': True, 'e': 'inf'}


def test_overall_is_conjunction():
    assert report.make_report('x', [_check('a', True), _check('b', True)])['overall']
    assert not report.make_report('x', [_check('a', True), _check('b', False)])['overall']
    assert not report.make_report('x', [])['overall']


def test_digest_ignores_timestamp():
    first = report.make_report('x', [_check('a', True)], {'f': 'abc'})
    second = dict(first, generated_at='1970-01-01 00:00:00')
    assert report.report_digest(first) == report.report_digest(second)
    assert report.report_digest(first) != report.report_digest(dict(first, command='y'))


def test_to_json_is_sorted_and_parsable():
    text = report.to_json(report.make_report('x', [_check('a', True)], details={'z': 1, 'a': 2j}))
    data = json.loads(text)
    assert data['details'] == {'a': [0.0, 2.0], 'z': 1}
    assert text.index('"checks"') < text.index('"command"')


def test_failed_checks():
    data = report.make_report('x', [_check('a', True), _check('b', False, m=0, L=2)])
    assert report.failed_checks(data) == ['b']


def test_render_table():
    console = Console(record=True, width=160)
    report.render_table(report.make_report('verify-wha', [_check('a', True), _check('b', False, m=1, L=3)]), console)
    text = console.export_text()
    assert 'verify-wha' in text
    assert 'm=1 L=3' in text
    assert 'BŁĄD' in text
    assert 'niektóre kontrole nie przeszły' in text
