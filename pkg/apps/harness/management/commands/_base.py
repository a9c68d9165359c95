"""
Shared plumbing of the qball management commands: the common flags, the
RunConfig they build, error mapping and output.

Exit status: 0 on success, 1 when a verification fails, 2 on bad input.
"""

import logging
from pathlib import Path
from typing import Dict

from django.core.management.base import BaseCommand, CommandError
from rest_framework.exceptions import APIException
from rest_framework.renderers import JSONRenderer

from apps.common.exceptions import QBallError
from apps.harness.config import OUTPUT_FORMATS, RunConfig
from apps.harness.serializers import RunConfigSerializer

logger = logging.getLogger('apps.harness')

EXIT_FAILED = 1
EXIT_BAD_INPUT = 2

INPUT_ERRORS = (QBallError, ValueError, APIException, OSError)


class QBallCommand(BaseCommand):
    """Base class; subclasses implement run(config, options)"""

    def add_arguments(self, parser):
        parser.add_argument('--q', type=float, help='Deformation parameter, 0 < q < 1 (QBALL_Q)')
        parser.add_argument('--n', type=int, help='Matrix size (QBALL_N)')
        parser.add_argument('--max-weight', type=int, dest='max_weight',
                            help='Window |lambda| <= max-weight (QBALL_MAX_WEIGHT)')
        parser.add_argument('--quad-nodes', type=int, dest='quad_nodes',
                            help='Simpson subintervals per spectral axis, even')
        parser.add_argument('--tol', type=float, help='Override every nonzero tolerance')
        parser.add_argument('--format', choices=OUTPUT_FORMATS, help='Output format (QBALL_OUTPUT_FORMAT)')
        parser.add_argument('--seed', type=int, help='Seed of the random test vectors')
        parser.add_argument('--out', help='Write output to this file instead of stdout')

    def run_config(self, options: Dict) -> RunConfig:
        fields = ('q', 'n', 'max_weight', 'quad_nodes', 'tol', 'format', 'seed')
        serializer = RunConfigSerializer(data={name: options.get(name) for name in fields})
        serializer.is_valid(raise_exception=True)
        return serializer.build()

    def handle(self, *args, **options):
        try:
            config = self.run_config(options)
            failed = self.run(config, options)
        except INPUT_ERRORS as e:
            detail = e.detail if isinstance(e, APIException) else e
            logger.error(f"{self.__module__.rsplit('.', 1)[-1]}: {detail}")
            raise CommandError(str(detail), returncode=EXIT_BAD_INPUT)
        if failed:
            raise CommandError(failed, returncode=EXIT_FAILED)

    def run(self, config: RunConfig, options: Dict):
        """Write the output; return a message to exit with status 1, or None"""
        raise NotImplementedError

    @staticmethod
    def render_json(data, indent=2) -> str:
        """Reports are indented; data files pass indent=None"""
        return JSONRenderer().render(data, renderer_context={'indent': indent}).decode()

    def emit(self, text: str, options: Dict):
        """Write to --out when given, stdout otherwise"""
        if not text.endswith('\n'):
            text += '\n'
        out = options.get('out')
        if out:
            Path(out).write_text(text)
            logger.info(f"Wrote {len(text)} characters to {out}")
        else:
            self.stdout.write(text, ending='')
