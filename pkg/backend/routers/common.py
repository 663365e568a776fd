import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from models.presentation import Presentation
from models.table import AlgebraElement, CompositionTable
from services.exceptions import InputError
from services.wirtinger import parse_pd, presentation_from_json, wirtinger


class CommandError(Exception):
    """Bad command-line usage; reported with exit code 2."""


def read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc.strerror}", path=path) from exc


def read_json(path: str) -> Any:
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})", path=path) from exc


def write_json(path: str, payload: str) -> None:
    try:
        Path(path).write_text(payload + '\n', encoding='utf-8')
    except OSError as exc:
        raise InputError(f"Cannot write {path}: {exc.strerror}", path=path) from exc


def split_list(value: Optional[str]) -> List[str]:
    if not value:
        return []
    return [item.strip() for item in value.split(',') if item.strip()]


def require(args, *names: str) -> None:
    for name in names:
        if getattr(args, name, None) is None:
            flag = '--' + name.replace('_', '-')
            op = getattr(args, 'op', None)
            action = f"{args.command} --op {op}" if op else args.command
            raise CommandError(f"{action} needs {flag}")


def add_presentation_source(parser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--pd', help='PD code file of a link diagram')
    source.add_argument('--presentation', help='presentation JSON file')
    parser.add_argument('--unknot-components', type=int, default=0,
                        help='number of split unknotted components without crossings')


def load_presentation(args) -> Presentation:
    if args.pd:
        diagram = parse_pd(read_text(args.pd), unknot_components=args.unknot_components)
        return wirtinger(diagram, label=Path(args.pd).stem)
    data = read_json(args.presentation)
    if isinstance(data, dict):
        data.setdefault('label', Path(args.presentation).stem)
    return presentation_from_json(data)


def load_element(path: Optional[str], table: Optional[CompositionTable] = None) -> Optional[AlgebraElement]:
    if path is None:
        return None
    data = read_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path} must hold a JSON object of coefficients", path=path)
    return AlgebraElement.from_mapping(data, table)


def element_report(element: AlgebraElement) -> Dict:
    return {'coefficients': element.to_json(), 'support': element.support}
