import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from config import settings
from routers import algebra, bounds, cells, compose, cover, quotient, verify
from routers.common import CommandError
from services.exceptions import CorrCalcError
from services.reporting import dumps, error_report

logging.basicConfig(
    level=settings.log_level,
    stream=sys.stderr,
    format='%(asctime)s %(levelname)s %(name)s: %(message)s',
)
logger = logging.getLogger(__name__)

COMMANDS = (verify, cover, compose, algebra, quotient, cells, bounds)


class CorrCalcParser(argparse.ArgumentParser):
    def error(self, message):
        raise CommandError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = CorrCalcParser(
        prog='corrcalc',
        description='Branched covers of the 3-sphere as correspondences: colorings, composition, '
                    'convolution algebras and their time evolutions',
    )
    subparsers = parser.add_subparsers(dest='command', required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse, dispatch and print one JSON report; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
        report = args.handler(args)
    except CommandError as e:
        print(error_report('usage_error', str(e)))
        return 2
    except ValidationError as e:
        error = e.errors()[0]
        detail = str(error.get('msg', e)).removeprefix('Value error, ')
        print(error_report('invalid_input', detail, {'location': [str(part) for part in error.get('loc', ())]}))
        return 1
    except CorrCalcError as e:
        logger.error(f"{e.code}: {e.detail}")
        print(dumps({'error': e.to_dict()}))
        return 1
    print(dumps(report))
    return 0


if __name__ == '__main__':
    sys.exit(run())
