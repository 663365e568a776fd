import json
import math

import pytest

from conftest import TREFOIL_PD, cyclic_table
from main import run
from scripts.generate_sample_data import generate

P23 = 'M(2)∘M(3)#1'


def _write(path, payload):
    text = payload if isinstance(payload, str) else json.dumps(payload, ensure_ascii=False)
    path.write_text(text, encoding='utf-8')
    return str(path)


def _run(capsys, *argv):
    code = run([str(arg) for arg in argv])
    return code, json.loads(capsys.readouterr().out)


@pytest.fixture
def samples(tmp_path, capsys):
    directory = generate(tmp_path / 'samples')
    capsys.readouterr()
    return directory


def test_verify_the_tricoloring(capsys, tmp_path):
    pd = _write(tmp_path / 'trefoil.pd', TREFOIL_PD)
    coloring = _write(tmp_path / 'tricolor.json', {'degree': 3, 'images': {'g1': '(1 2)', 'g2': '(2 3)', 'g3': '(1 3)'}})
    code, report = _run(capsys, 'verify', '--pd', pd, '--coloring', coloring)
    assert code == 0
    assert report['valid'] is True
    assert report['presentation'] == 'trefoil'
    assert report['group_order'] == 6
    assert report['transitive'] is True
    assert report['indices']['g1'] == [2, 1]


def test_verify_reports_relator_violations(capsys, tmp_path):
    pd = _write(tmp_path / 'trefoil.pd', TREFOIL_PD)
    coloring = _write(tmp_path / 'bad.json', {'degree': 3, 'images': {'g1': '(1 2)', 'g2': '(1 2)', 'g3': '(1 3)'}})
    code, report = _run(capsys, 'verify', '--pd', pd, '--coloring', coloring)
    assert code == 1
    assert report['error']['code'] == 'relator_violation'


def test_failed_checks_are_logged_as_errors(capsys, caplog, tmp_path):
    pd = _write(tmp_path / 'trefoil.pd', TREFOIL_PD)
    coloring = _write(tmp_path / 'bad.json', {'degree': 3, 'images': {'g1': '(1 2)', 'g2': '(1 2)', 'g3': '(1 3)'}})
    code, _ = _run(capsys, 'verify', '--pd', pd, '--coloring', coloring)
    assert code == 1
    records = [r for r in caplog.records if r.name == 'main']
    assert [r.levelname for r in records] == ['ERROR']
    assert records[0].getMessage().startswith('relator_violation')


def test_cover_counts_dihedral_covers(capsys, samples):
    code, report = _run(capsys, 'cover', '--pd', samples / 'trefoil.pd', '--degree', 3, '--transitive', '--nontrivial')
    assert code == 0
    assert report['count'] == 2
    assert report['truncated'] is False


def test_cover_of_the_unknot_presentation(capsys, samples):
    code, report = _run(capsys, 'cover', '--presentation', samples / 'unknot.json', '--degree', 4, '--transitive')
    assert code == 0
    assert report['presentation'] == 'O'
    assert report['colorings'] == [{'images': {'g1': '(1 2 3 4)'}, 'orbits': 1}]


def test_compose_a_single_request(capsys, tmp_path):
    session = _write(tmp_path / 'session.json', {'cyclic': [2, 3]})
    table_out = tmp_path / 'table.json'
    code, report = _run(capsys, 'compose', '--session', session, '--left', 'M(2)', '--right', 'M(3)',
                        '--table-out', table_out)
    assert code == 0
    composite = report['composites'][0]
    assert composite['degrees'] == [6, 6]
    assert composite['registered'] == [P23]
    assert composite['formal_left'] == 'M(2)<(O) ∪ O'
    assert composite['components'][0]['cyclic'] is True
    written = json.loads(table_out.read_text(encoding='utf-8'))
    assert written['compose']['M(2)|M(3)'] == [P23]


def test_compose_with_an_inline_middle_diagram(capsys, tmp_path):
    session = _write(tmp_path / 'session.json', {'cyclic': [2, 3]})
    middle = _write(tmp_path / 'middle.json', {'generators': 2, 'names': ['a', 'b'], 'relators': [],
                                               'components': {'a': 'K1', 'b': 'K2'}})
    code, report = _run(capsys, 'compose', '--session', session, '--left', 'M(2)', '--right', 'M(3)',
                        '--middle', middle, '--side1', 'a:g1', '--side2', 'b:g1')
    assert code == 0
    composite = report['composites'][0]
    assert composite['components'][0]['middle_degree'] == 6
    assert composite['components'][0]['lifted'] is False
    assert composite['registered'] is None
    assert 'M(2)|M(3)' in report['failures']


def test_compose_all_then_convolve(capsys, tmp_path):
    session = _write(tmp_path / 'session.json', {'cyclic': [2, 3]})
    table = tmp_path / 'table.json'
    code, report = _run(capsys, 'compose', '--session', session, '--all', '--table-out', table)
    assert code == 0
    assert report['labels'] == 9
    split = next(c for c in report['composites'] if c['label'] == 'M(3)∘M(3)')
    assert split['cyclic_split'] is True
    assert len(split['components']) == 3

    f = _write(tmp_path / 'f.json', {'M(2)': 1})
    g = _write(tmp_path / 'g.json', {'M(3)': [0, 1]})
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'convolve', '--f', f, '--g', g)
    assert code == 0
    assert report['result']['coefficients'] == {P23: [0.0, 1.0]}


def test_compose_needs_a_pair(capsys, tmp_path):
    session = _write(tmp_path / 'session.json', {'cyclic': [2]})
    code, report = _run(capsys, 'compose', '--session', session, '--left', 'M(2)')
    assert code == 2
    assert report['error']['code'] == 'usage_error'
    code, report = _run(capsys, 'compose', '--session', session, '--pairs', 'M(2)M(2)')
    assert code == 2


def test_algebra_spectrum_of_cyclic_classes(capsys, tmp_path):
    table = _write(tmp_path / 'table.json', cyclic_table(10).to_json())
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'spectrum', '--graph', 'O', '--mode', 'R')
    assert code == 0
    assert report['multiplicities'] == [1] * 10
    assert report['degrees'] == list(range(1, 11))


def test_algebra_conjugation_and_dirac(capsys, tmp_path):
    table = _write(tmp_path / 'table.json', cyclic_table(10).to_json())
    f = _write(tmp_path / 'f.json', {'M(1)': 1, 'M(2)': [0.5, -1]})
    basis = 'M(1),M(2),M(3),M(4),M(5)'
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'conjugation', '--f', f, '--t', 0.7,
                        '--basis', basis)
    assert code == 1
    assert report['error']['code'] == 'truncation_escape'
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'dirac', '--basis', basis,
                        '--label', 'M(2)', '--loose')
    assert code == 0
    assert report['commutator_norm'] == 0.0


def test_algebra_usage_errors(capsys, tmp_path):
    table = _write(tmp_path / 'table.json', cyclic_table(4).to_json())
    f = _write(tmp_path / 'f.json', {'M(2)': 1})
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'convolve', '--f', f)
    assert code == 2
    assert report['error']['detail'] == 'algebra --op convolve needs --g'
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'hamiltonian')
    assert code == 2
    code, report = _run(capsys, 'algebra', '--table', table, '--op', 'nope')
    assert code == 2


def test_quotient_of_the_sample_table(capsys, samples):
    code, report = _run(capsys, 'quotient', '--table', samples / 'cyclic_table.json',
                        '--declaration', samples / 'declaration.json', '--graph', 'O')
    assert code == 0
    assert report['kind'] == 'cobordism'
    assert sorted(report['classes']['M(6)']) == sorted(['M(6)', P23, 'M(3)∘M(2)#1'])
    assert report['N']['6'] == 1
    assert report['N']['2'] == 3
    assert report['spectrum']['multiplicities'] == [1, 3, 1, 1, 1, 1]


def test_cells_vertical_gluing(capsys, samples):
    code, report = _run(capsys, 'cells', '--cells', samples / 'cells.json', '--boundary', samples / 'boundary.json',
                        '--op', 'vertical', '--first', 'W1', '--second', 'W2')
    assert code == 0
    assert report['label'] == 'W1•W2'
    assert report['cell']['inv'] == {'chi': 7.0}
    code, report = _run(capsys, 'cells', '--cells', samples / 'cells.json', '--op', 'dagger', '--first', 'W1')
    assert code == 2


def test_cells_evolution_residual(capsys, samples, tmp_path):
    f = _write(tmp_path / 'f.json', {'W1': 1})
    g = _write(tmp_path / 'g.json', {'W2': 1})
    code, report = _run(capsys, 'cells', '--cells', samples / 'cells.json', '--boundary', samples / 'boundary.json',
                        '--op', 'vertical-evolution', '--f', f, '--g', g, '--t', 0.5)
    assert code == 0
    assert report['residual'] < 1e-9


def test_bounds(capsys):
    assert _run(capsys, 'bounds', '--dim', 4, 4) == (0, {'D': 5})
    code, report = _run(capsys, 'bounds', '--pn', 10, '--Q', 6, 2, '--zeta', 2, 3)
    assert code == 0
    assert report['p'] == 42
    assert report['Q'] == 9
    assert report['zeta']['value'] == pytest.approx(49 / 36)
    code, report = _run(capsys, 'bounds')
    assert code == 2


def test_bounds_with_oracle_files(capsys, tmp_path):
    oracle = _write(tmp_path / 'oracle.json', {'p': 2, 'period': [1, 1]})
    code, report = _run(capsys, 'bounds', '--localized', 2, 2, 100, '--oracle', oracle)
    assert code == 0
    assert report['localized']['closed_form'] == pytest.approx(math.pi ** 2 / 6)
    basis = _write(tmp_path / 'basis.json', {'basis': {'U(O)': 1, 'M(2)': 2}, 'f': {'U(O)': 1.0, 'M(2)': 0.0}})
    code, report = _run(capsys, 'bounds', '--gibbs', 50, '--basis', basis)
    assert code == 0
    assert report['gibbs'] == pytest.approx(1.0)
    code, report = _run(capsys, 'bounds', '--localized', 2, 2, 100)
    assert code == 2


def test_input_errors(capsys, tmp_path):
    code, report = _run(capsys, 'verify', '--pd', tmp_path / 'missing.pd', '--coloring', tmp_path / 'c.json')
    assert code == 1
    assert report['error']['code'] == 'invalid_input'
    broken = _write(tmp_path / 'broken.json', '{"cells": ')
    code, report = _run(capsys, 'cells', '--cells', broken, '--op', 'convolve')
    assert code == 1
    assert report['error']['code'] == 'invalid_input'
    cells = _write(tmp_path / 'cells.json', {'cells': {'W': {'src': 'A', 'tgt': 'B', 'deg': 0}}})
    code, report = _run(capsys, 'cells', '--cells', cells, '--op', 'convolve')
    assert code == 1
    assert report['error']['code'] == 'invalid_input'
    assert 'W' in report['error']['context']['location']


def test_unknown_command_is_a_usage_error(capsys):
    code, report = _run(capsys, 'frobnicate')
    assert code == 2
    assert report['error']['code'] == 'usage_error'
