import json

from scripts.generate_sample_data import generate
from services.cobordism_service import load_boundary, load_cells
from services.convolution import load_table
from services.wirtinger import parse_pd, presentation_from_json, wirtinger


def test_sample_data_is_consistent(tmp_path):
    directory = generate(tmp_path)
    names = sorted(path.name for path in directory.iterdir())
    assert names == ['boundary.json', 'cells.json', 'cyclic_session.json', 'cyclic_table.json',
                     'declaration.json', 'trefoil.pd', 'tricolor.json', 'unknot.json']

    def read(name):
        return json.loads((directory / name).read_text(encoding='utf-8'))

    table = load_table(read('cyclic_table.json'), require_transpose=True)
    assert table.product('M(2)', 'M(3)') == ['M(2)∘M(3)#1']
    assert len(table.product('M(2)', 'M(2)')) == 2

    cells = load_cells(read('cells.json'))
    boundary = load_boundary(read('boundary.json'))
    for cell in cells.cells.values():
        assert table.has(cell.source) and table.has(cell.target)
        assert boundary.lookup('chi', cell.target) is not None

    trefoil = wirtinger(parse_pd((directory / 'trefoil.pd').read_text(encoding='utf-8')))
    assert trefoil.generator_count == 3
    assert presentation_from_json(read('unknot.json')).label == 'O'
