import json

import pytest
from pydantic import ValidationError

from services.exceptions import CorrespondenceError, InputError
from services.session_service import Session, emit_table, load_session, session_from_data

P23 = 'M(2)∘M(3)#1'

TWISTED = {
    'left': {'presentation': 'O', 'coloring': {'g1': '(1 2 3)'}, 'degree': 3},
    'right': {'presentation': 'O', 'coloring': {'g1': '(1 3 2)'}, 'degree': 3},
}


def test_empty_session_emits_an_empty_table():
    emitted = emit_table(Session())
    assert emitted['table'].labels == {}
    assert emitted['open_pairs'] == []
    assert emitted['failures'] == {}


def test_requests_register_their_components():
    session = session_from_data({
        'cyclic': [2, 3],
        'requests': [{'left': 'M(2)', 'right': 'M(3)'}, {'left': 'M(2)', 'right': 'M(2)'}],
    })
    assert session.entries['M(2)|M(3)'] == [P23]
    assert session.entries['M(2)|M(2)'] == ['M(2)∘M(2)#1', 'M(2)∘M(2)#2']
    assert session.correspondence(P23).n == 6

    emitted = emit_table(session)
    table = emitted['table']
    assert table.product('M(2)', 'M(3)') == [P23]
    assert table.multi == {'M(2)∘M(2)': ['M(2)∘M(2)#1', 'M(2)∘M(2)#2']}
    assert table.info(P23).transpose == P23
    assert 'M(3)|M(3)' in emitted['open_pairs']
    assert 'M(2)|M(3)' not in emitted['open_pairs']


def test_labels_that_only_renumber_sheets_are_reported():
    session = session_from_data({
        'cyclic': [1, 2, 3, 6],
        'requests': [{'left': 'M(2)', 'right': 'M(3)'}, {'left': 'M(3)', 'right': 'M(2)'}],
    })
    emitted = emit_table(session)
    assert emitted['conjugates'] == {'M(6)': [P23, 'M(3)∘M(2)#1']}
    assert {'M(6)', P23, 'M(3)∘M(2)#1'} <= set(emitted['table'].labels)


def test_single_component_composites_reuse_existing_labels():
    session = session_from_data({
        'units': ['O'],
        'cyclic': [2],
        'requests': [{'left': 'U(O)', 'right': 'M(2)'}, {'left': 'M(2)', 'right': 'U(O)'}],
    })
    assert session.entries == {'U(O)|M(2)': ['M(2)'], 'M(2)|U(O)': ['M(2)']}
    assert sorted(session.correspondences) == ['M(2)', 'U(O)']


def test_unliftable_components_are_failures():
    session = session_from_data({
        'cyclic': [3],
        'correspondences': {'T': TWISTED},
        'requests': [{'left': 'T', 'right': 'M(3)'}],
    })
    assert 'T|M(3)' in session.failures
    assert 'T|M(3)' not in session.entries
    emitted = emit_table(session)
    assert emitted['table'].transpose_of('T') == 'T∨'
    assert emitted['table'].info('T∨').transpose == 'T'
    assert 'T|M(3)' in emitted['open_pairs']
    assert 'T|M(3)' in emitted['failures']


def test_mirrored_entries_are_added_for_transposes():
    session = session_from_data({
        'cyclic': [3],
        'units': ['O'],
        'correspondences': {'T': TWISTED},
        'requests': [{'left': 'T', 'right': 'U(O)'}],
    })
    table = emit_table(session)['table']
    assert table.product('T', 'U(O)') == ['T']
    assert table.product('U(O)', 'T∨') == ['T∨']


def test_compose_pairs_keeps_failures_per_pair():
    session = session_from_data({'cyclic': [2, 3]})
    results = session.compose_pairs([('M(2)', 'M(3)'), ('M(3)', 'M(2)'), ('M(2)', 'M(9)')])
    assert sorted(results) == ['M(2)|M(3)', 'M(3)|M(2)']
    assert 'M(2)|M(9)' in session.failures
    assert session.entries['M(3)|M(2)'] == ['M(3)∘M(2)#1']


def test_all_pairs_skips_computed_keys():
    session = session_from_data({'cyclic': [2, 3], 'requests': [{'left': 'M(2)', 'right': 'M(3)'}]})
    pairs = session.all_pairs()
    assert ('M(2)', 'M(3)') not in pairs
    assert ('M(3)', 'M(2)') in pairs
    assert (P23, P23) in pairs


def test_labels_cannot_be_reused_for_other_correspondences():
    with pytest.raises(CorrespondenceError):
        session_from_data({'cyclic': [2], 'correspondences': {'M(2)': TWISTED}})


def test_rename_updates_entries():
    session = session_from_data({'cyclic': [2, 3], 'requests': [{'left': 'M(2)', 'right': 'M(3)'}]})
    session.rename(P23, 'N(6)')
    assert session.entries['M(2)|M(3)'] == ['N(6)']
    assert session.correspondence('N(6)').label == 'N(6)'
    with pytest.raises(CorrespondenceError):
        session.rename('N(6)', 'M(2)')


def test_sessions_with_presentations_and_middle_diagrams():
    session = session_from_data({
        'presentations': {
            'unlink': {'generators': 2, 'names': ['a', 'b'], 'relators': [], 'components': {'a': 'K1', 'b': 'K2'}},
        },
        'cyclic': [2, 3],
        'requests': [{
            'left': 'M(2)', 'right': 'M(3)', 'middle': 'unlink',
            'side1_arcs': {'a': 'g1'}, 'side2_arcs': {'b': 'g1'},
            'left_extension': {'a': '(1 2)', 'b': '()'},
        }],
    })
    composite = session.composites['M(2)|M(3)']
    assert composite.components[0].middle_degree == 6
    assert 'M(2)|M(3)' in session.failures


def test_bad_session_files(tmp_path):
    with pytest.raises(InputError):
        load_session(tmp_path / 'missing.json')
    broken = tmp_path / 'broken.json'
    broken.write_text('{"cyclic": [2', encoding='utf-8')
    with pytest.raises(InputError):
        load_session(broken)
    with pytest.raises(ValidationError):
        session_from_data({'cyclic': [2], 'requests': [{'left': 'M(2)'}]})


def test_load_session_from_disk(tmp_path):
    path = tmp_path / 'session.json'
    path.write_text(json.dumps({'cyclic': [2, 3], 'requests': [{'left': 'M(3)', 'right': 'M(2)'}]}),
                    encoding='utf-8')
    session = load_session(path)
    assert session.entries == {'M(3)|M(2)': ['M(3)∘M(2)#1']}
