from typing import Dict

from routers.common import add_presentation_source, load_presentation, read_json
from services.coloring_service import branching_indices, coloring_from_json, orbits


def register(subparsers) -> None:
    parser = subparsers.add_parser('verify', help='check a permutation coloring against the relators')
    add_presentation_source(parser)
    parser.add_argument('--coloring', required=True, help='coloring JSON file')
    parser.set_defaults(handler=handle)


def handle(args) -> Dict:
    presentation = load_presentation(args)
    rep = coloring_from_json(presentation, read_json(args.coloring))
    decomposition = orbits(rep)
    return {
        'valid': True,
        'presentation': presentation.label,
        'degree': rep.degree,
        'orbits': decomposition.count,
        'orbit_sizes': decomposition.sizes,
        'transitive': decomposition.is_connected,
        'group_order': int(rep.group().order()),
        'indices': {name: branching_indices(rep, name) for name in presentation.generator_names},
    }
