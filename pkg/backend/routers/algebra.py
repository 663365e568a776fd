from typing import Dict, List

from models.table import CompositionTable, EvolutionMode
from routers.common import CommandError, element_report, load_element, read_json, require, split_list
from services.convolution import convolve, evolve, involve, load_table
from services.operators import (
    annihilator,
    basis_for_graph,
    commutator_norm,
    conjugation_check,
    creator,
    dirac_generator,
    hamiltonian,
    represent,
    spectral_summary,
)

OPERATIONS = ('convolve', 'involve', 'evolve', 'represent', 'annihilator', 'creator',
              'hamiltonian', 'conjugation', 'dirac', 'spectrum')


def register(subparsers) -> None:
    parser = subparsers.add_parser('algebra', help='convolution algebra and operators on a composition table')
    parser.add_argument('--table', required=True, help='composition table JSON file')
    parser.add_argument('--op', required=True, choices=OPERATIONS)
    parser.add_argument('--f', help='element JSON file')
    parser.add_argument('--g', help='second element JSON file')
    parser.add_argument('--t', type=float)
    parser.add_argument('--mode', choices=[m.value for m in EvolutionMode], default=EvolutionMode.LEFT.value)
    basis = parser.add_mutually_exclusive_group()
    basis.add_argument('--graph', help='use every label with this target graph as basis')
    basis.add_argument('--basis', help='comma-separated basis labels')
    parser.add_argument('--label', help='correspondence label for annihilator, creator and dirac')
    parser.add_argument('--loose', action='store_true', help='compress onto the basis instead of failing')
    parser.set_defaults(handler=handle)


def _basis(args, table: CompositionTable) -> List[str]:
    if args.basis:
        return split_list(args.basis)
    if args.graph:
        return basis_for_graph(table, args.graph)
    raise CommandError(f"algebra --op {args.op} needs --graph or --basis")


def handle(args) -> Dict:
    table = load_table(read_json(args.table))
    mode = EvolutionMode(args.mode)
    f = load_element(args.f, table)
    g = load_element(args.g, table)

    if args.op == 'convolve':
        require(args, 'f', 'g')
        return {'result': element_report(convolve(f, g, table))}
    if args.op == 'involve':
        require(args, 'f')
        return {'result': element_report(involve(f, table))}
    if args.op == 'evolve':
        require(args, 'f', 't')
        return {'mode': mode.value, 't': args.t, 'result': element_report(evolve(f, args.t, mode, table))}

    basis = _basis(args, table)
    strict = not args.loose
    if args.op == 'represent':
        require(args, 'f')
        return {'operator': represent(f, basis, table, strict=strict).to_json()}
    if args.op in ('annihilator', 'creator'):
        require(args, 'label')
        build = annihilator if args.op == 'annihilator' else creator
        return {'label': args.label, 'operator': build(args.label, basis, table, strict=strict).to_json()}
    if args.op == 'hamiltonian':
        return {'mode': mode.value, 'operator': hamiltonian(basis, table, mode).to_json()}
    if args.op == 'conjugation':
        require(args, 'f', 't')
        return {'mode': mode.value, 't': args.t, 'residual': conjugation_check(f, args.t, basis, table, mode)}
    if args.op == 'dirac':
        d = dirac_generator(basis, table)
        report = {'operator': d.to_json()}
        if args.label:
            report['label'] = args.label
            report['commutator_norm'] = commutator_norm(d, annihilator(args.label, basis, table, strict=strict))
        return report
    summary = spectral_summary(basis, table, mode)
    return {
        'mode': mode.value,
        'eigenvalues': summary.eigenvalues,
        'multiplicities': summary.multiplicities,
        'degrees': summary.degrees,
    }
