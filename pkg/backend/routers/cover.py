from typing import Dict

from routers.common import add_presentation_source, load_presentation
from services.coloring_service import search_colorings


def register(subparsers) -> None:
    parser = subparsers.add_parser('cover', help='enumerate colorings of a given degree up to conjugation')
    add_presentation_source(parser)
    parser.add_argument('--degree', type=int, required=True)
    parser.add_argument('--transitive', action='store_true', help='connected coverings only')
    parser.add_argument('--nontrivial', action='store_true', help='skip the trivial representation')
    parser.add_argument('--noncyclic', action='store_true', help='skip representations with cyclic image')
    parser.add_argument('--cap', type=int, default=None, help='stop after this many classes')
    parser.set_defaults(handler=handle)


def handle(args) -> Dict:
    presentation = load_presentation(args)
    search = search_colorings(
        presentation,
        args.degree,
        transitive=args.transitive,
        nontrivial=args.nontrivial,
        noncyclic=args.noncyclic,
        cap=args.cap,
    )
    return {
        'presentation': presentation.label,
        'degree': search.degree,
        'count': search.count,
        'truncated': search.truncated,
        'colorings': [
            {'images': hit.rep.coloring_json()['images'], 'orbits': hit.orbit_count}
            for hit in search.hits
        ],
    }
