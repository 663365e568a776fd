from typing import Dict, List

from models.correspondence import CompositeCorrespondence
from models.session import CompositionRequest
from routers.common import CommandError, read_json, split_list, write_json
from services.composition_service import outer_multiplicities
from services.reporting import dumps
from services.session_service import Session, emit_table, load_session
from services.wirtinger import presentation_from_json

INLINE_MIDDLE = '__middle__'


def register(subparsers) -> None:
    parser = subparsers.add_parser('compose', help='compose correspondences of a session by fibered product')
    parser.add_argument('--session', required=True, help='session JSON file')
    parser.add_argument('--left')
    parser.add_argument('--right')
    parser.add_argument('--middle', help='presentation JSON of the middle diagram')
    parser.add_argument('--side1', help='middle generators of the first factor: "g1,g2" or "a:g1,b:g2"')
    parser.add_argument('--side2', help='middle generators of the second factor, same format as --side1')
    parser.add_argument('--left-extension', help='coloring JSON extending the first factor')
    parser.add_argument('--right-extension', help='coloring JSON extending the second factor')
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument('--request', help='composition request JSON file')
    mode.add_argument('--pairs', help='"A|B,C|D": pairs composed over a shared middle')
    mode.add_argument('--all', action='store_true', help='compose every composable pair once')
    parser.add_argument('--table-out', help='write the emitted composition table here')
    parser.set_defaults(handler=handle)


def composite_report(session: Session, composite: CompositeCorrespondence) -> Dict:
    key = f"{composite.left_label}|{composite.right_label}"
    return {
        'label': composite.label,
        'left': composite.left_label,
        'right': composite.right_label,
        'degrees': list(outer_multiplicities(composite)),
        'middle_degrees': list(composite.middle_degrees),
        'formal_left': composite.formal_left.render(),
        'formal_right': composite.formal_right.render(),
        'cyclic_split': composite.cyclic_split,
        'warnings': composite.warnings,
        'registered': session.entries.get(key),
        'components': [
            {
                'label': c.label,
                'middle_degree': c.middle_degree,
                'degrees': [c.left_degree, c.right_degree],
                'cyclic': c.is_cyclic,
                'lifted': c.lifted,
                'middle_images': c.middle_rep.coloring_json()['images'],
            }
            for c in composite.components
        ],
    }


def _side_arcs(text: str) -> Dict[str, str]:
    arcs = {}
    for item in split_list(text):
        middle, _, factor = item.partition(':')
        arcs[middle.strip()] = factor.strip() or middle.strip()
    return arcs


def _request_from_args(session: Session, args) -> CompositionRequest:
    if args.left is None or args.right is None:
        raise CommandError("compose needs --left and --right, --request, --pairs or --all")
    data = {'left': args.left, 'right': args.right}
    if args.middle:
        session.presentations[INLINE_MIDDLE] = presentation_from_json({'label': 'middle', **read_json(args.middle)})
        data.update(middle=INLINE_MIDDLE, side1_arcs=_side_arcs(args.side1), side2_arcs=_side_arcs(args.side2))
    if args.left_extension:
        data['left_extension'] = read_json(args.left_extension)
    if args.right_extension:
        data['right_extension'] = read_json(args.right_extension)
    return CompositionRequest.model_validate(data)


def _request_from_file(session: Session, path: str) -> CompositionRequest:
    data = read_json(path)
    if isinstance(data.get('middle'), dict):
        session.presentations[INLINE_MIDDLE] = presentation_from_json({'label': 'middle', **data['middle']})
        data['middle'] = INLINE_MIDDLE
    return CompositionRequest.model_validate(data)


def _pairs(text: str) -> List[tuple]:
    pairs = []
    for item in split_list(text):
        a, sep, b = item.partition('|')
        if not sep or not a or not b:
            raise CommandError(f"--pairs entries look like A|B, got '{item}'")
        pairs.append((a, b))
    return pairs


def handle(args) -> Dict:
    session = load_session(args.session)
    if args.all:
        composites = list(session.compose_pairs(session.all_pairs()).values())
    elif args.pairs:
        composites = list(session.compose_pairs(_pairs(args.pairs)).values())
    elif args.request:
        composites = [session.compose_request(_request_from_file(session, args.request))]
    else:
        composites = [session.compose_request(_request_from_args(session, args))]

    emitted = emit_table(session)
    if args.table_out:
        write_json(args.table_out, dumps(emitted['table'].to_json()))
    return {
        'composites': [composite_report(session, c) for c in sorted(composites, key=lambda c: c.label)],
        'failures': emitted['failures'],
        'open_pairs': emitted['open_pairs'],
        'conjugates': emitted['conjugates'],
        'labels': len(emitted['table'].labels),
    }
