from functools import partial
from typing import Dict

from models.cobordism import BoundaryInvariantTable, CellProduct
from routers.common import CommandError, element_report, load_element, read_json, require
from services.cobordism_service import (
    automorphism_residual,
    dagger,
    horizontal_compose,
    horizontal_order_evolution,
    load_boundary,
    load_cells,
    two_cell_convolve,
    vertical_compose,
    vertical_evolution,
)
from services.convolution import load_table

OPERATIONS = ('vertical', 'horizontal', 'dagger', 'convolve', 'vertical-evolution', 'order-evolution')


def register(subparsers) -> None:
    parser = subparsers.add_parser('cells', help='2-cells: gluing, fibered products, dagger and evolutions')
    parser.add_argument('--cells', required=True, help='cell table JSON file')
    parser.add_argument('--boundary', help='boundary invariant JSON file')
    parser.add_argument('--table', help='composition table JSON file (endpoint compositions, transposes)')
    parser.add_argument('--op', required=True, choices=OPERATIONS)
    parser.add_argument('--first', help='first cell label')
    parser.add_argument('--second', help='second cell label')
    parser.add_argument('--label', help='label of the resulting cell')
    parser.add_argument('--f', help='element JSON file over cells')
    parser.add_argument('--g', help='second element JSON file over cells')
    parser.add_argument('--t', type=float)
    parser.add_argument('--product', choices=[p.value for p in CellProduct], default=CellProduct.VERTICAL.value)
    parser.add_argument('--invariant', default='chi', help='invariant driving the vertical evolution')
    parser.set_defaults(handler=handle)


def _boundary(args) -> BoundaryInvariantTable:
    if args.boundary is None:
        raise CommandError(f"cells --op {args.op} needs --boundary")
    return load_boundary(read_json(args.boundary))


def _table(args):
    if args.table is None:
        raise CommandError(f"cells --op {args.op} needs --table")
    return load_table(read_json(args.table))


def handle(args) -> Dict:
    cells = load_cells(read_json(args.cells))
    f, g = load_element(args.f), load_element(args.g)

    if args.op in ('vertical', 'horizontal', 'dagger'):
        require(args, 'first')
        first = cells.cell(args.first)
        if args.op == 'dagger':
            cell = dagger(first, _table(args), cells)
        else:
            require(args, 'second')
            second = cells.cell(args.second)
            if args.op == 'vertical':
                cell = vertical_compose(first, second, _boundary(args), label=args.label)
            else:
                cell = horizontal_compose(first, second, _table(args), label=args.label)
        return {'label': cell.label, 'cell': cell.to_json()}

    product = CellProduct(args.product)
    if args.op == 'convolve':
        require(args, 'f', 'g')
        return {'product': product.value, 'result': element_report(two_cell_convolve(f, g, product, cells))}

    require(args, 'f', 't')
    if args.op == 'vertical-evolution':
        evolution = partial(vertical_evolution, t=args.t, name=args.invariant, cells=cells, boundary=_boundary(args))
    else:
        evolution = partial(horizontal_order_evolution, t=args.t, cells=cells)
    report = {'t': args.t, 'result': element_report(evolution(f))}
    if g is not None:
        report['product'] = product.value
        report['residual'] = automorphism_residual(evolution, f, g, product, cells)
    return report
