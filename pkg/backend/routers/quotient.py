from typing import Dict

from models.table import EvolutionMode
from routers.common import read_json
from services.bounds_calculator import BoundsCalculator
from services.cobordism_service import declaration_from_json, validate_quotient
from services.convolution import load_table
from services.operators import basis_for_graph, spectral_summary


def register(subparsers) -> None:
    parser = subparsers.add_parser('quotient', help='quotient a table by declared cobordism classes')
    parser.add_argument('--table', required=True, help='composition table JSON file')
    parser.add_argument('--declaration', required=True, help='declaration JSON file {"equiv": [[a, b], ...]}')
    parser.add_argument('--graph', help='report the Hamiltonian spectrum over classes with this target')
    parser.add_argument('--mode', choices=[EvolutionMode.LEFT.value, EvolutionMode.RIGHT.value],
                        default=EvolutionMode.RIGHT.value)
    parser.set_defaults(handler=handle)


def handle(args) -> Dict:
    table = load_table(read_json(args.table))
    declaration = declaration_from_json(read_json(args.declaration), table)
    quotient = validate_quotient(declaration, table)
    report = {
        'kind': declaration.kind.value,
        'classes': declaration.classes,
        'table': quotient.to_json(),
    }
    if args.graph:
        mode = EvolutionMode(args.mode)
        summary = spectral_summary(basis_for_graph(quotient, args.graph), quotient, mode)
        report['spectrum'] = {
            'mode': mode.value,
            'eigenvalues': summary.eigenvalues,
            'multiplicities': summary.multiplicities,
        }
        report['N'] = BoundsCalculator.oracle_from_table(quotient, args.graph, mode).counts
    return report
