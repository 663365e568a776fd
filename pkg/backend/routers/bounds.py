from typing import Dict

from models.bounds import LocalizedOracle, MultiplicityOracle
from routers.common import CommandError, read_json
from services.bounds_calculator import BoundsCalculator


def register(subparsers) -> None:
    parser = subparsers.add_parser('bounds', help='partition numbers, homotopy dimensions and zeta bounds')
    parser.add_argument('--pn', type=int, metavar='N', help='partition number p(N)')
    parser.add_argument('--Q', type=int, nargs=2, metavar=('A', 'B'), help='necklace number Q(A, B)')
    parser.add_argument('--dim', type=int, nargs=2, metavar=('K', 'N'), help='rational homotopy dimension')
    parser.add_argument('--zeta', type=float, nargs=2, metavar=('BETA', 'NMAX'), help='partition function partial sum')
    parser.add_argument('--localized', type=float, nargs=3, metavar=('BETA', 'P', 'NMAX'),
                        help='localized zeta partial sum (needs --oracle)')
    parser.add_argument('--gibbs', type=float, metavar='BETA', help='Gibbs functional (needs --basis)')
    parser.add_argument('--oracle', help='oracle JSON file {"N": {"1": 1, ...}}')
    parser.add_argument('--basis', help='JSON file {"basis": {label: n}, "f": {label: value}}')
    parser.set_defaults(handler=handle)


def _oracle(args):
    return MultiplicityOracle.model_validate(read_json(args.oracle)) if args.oracle else None


def handle(args) -> Dict:
    report = {}
    if args.pn is not None:
        report['p'] = BoundsCalculator.partitions(args.pn)
    if args.Q is not None:
        report['Q'] = BoundsCalculator.necklace_Q(*args.Q)
    if args.dim is not None:
        report['D'] = BoundsCalculator.rational_homotopy_dim(*args.dim)
    if args.zeta is not None:
        beta, n_max = args.zeta[0], int(args.zeta[1])
        oracle = _oracle(args) or MultiplicityOracle.constant(1, n_max)
        result = BoundsCalculator.partition_function(beta, oracle, n_max)
        report['zeta'] = result.model_dump()
    if args.localized is not None:
        if not args.oracle:
            raise CommandError("bounds --localized needs --oracle")
        beta, p, n_max = args.localized[0], int(args.localized[1]), int(args.localized[2])
        oracle = LocalizedOracle.model_validate(read_json(args.oracle))
        localized = {'value': BoundsCalculator.localized_zeta(beta, p, oracle, n_max)}
        if oracle.period and beta > 1:
            localized['closed_form'] = BoundsCalculator.localized_zeta_closed_form(beta, p, oracle)
        report['localized'] = localized
    if args.gibbs is not None:
        if not args.basis:
            raise CommandError("bounds --gibbs needs --basis")
        data = read_json(args.basis)
        report['gibbs'] = BoundsCalculator.gibbs_functional(
            data.get('f', {}), args.gibbs, data.get('basis', {}), _oracle(args),
        )
    if not report:
        raise CommandError("bounds needs at least one of --pn, --Q, --dim, --zeta, --localized, --gibbs")
    return report
