import csv
import io

from apps.harness.evaluation import EVALUATORS, evaluate, table_payload
from apps.harness.serializers import EvalTableSerializer
from ._base import QBallCommand


def _cell(value) -> str:
    if isinstance(value, list):
        return ' '.join(_cell(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


class Command(QBallCommand):
    help = 'Evaluate Phi_l, little q-Jacobi polynomials, a(l), c(l), kappa or Schur polynomials'

    def add_arguments(self, parser):
        parser.add_argument('what', choices=tuple(EVALUATORS))
        super().add_arguments(parser)
        parser.add_argument('--l', type=complex, nargs='+', help='Spectral parameters (complex allowed, e.g. 1.5+0.2j)')
        parser.add_argument('--u', type=complex, nargs='+', help='Points for phi')
        parser.add_argument('--m', type=int, help='Degree of the little q-Jacobi polynomial')
        parser.add_argument('--z', type=float, nargs='+', help='Points for jacobi or schur')
        parser.add_argument('--lam', type=int, nargs='+', help='Partition for schur')
        parser.add_argument('--rho', type=float, nargs='+', help='Principal series point for kappa')

    def run(self, config, options):
        ctx = config.context()
        params = {name: options.get(name) for name in ('l', 'u', 'm', 'z', 'lam', 'rho')}
        rows = evaluate(options['what'], params, ctx)
        data = EvalTableSerializer(table_payload(options['what'], rows, ctx)).data

        if config.output_format == 'json':
            self.emit(self.render_json(data), options)
            return None

        stream = io.StringIO()
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['arguments', 're', 'im', 'method'])
        for row in data['rows']:
            arguments = ' '.join(f'{name}={_cell(value)}' for name, value in row['arguments'].items())
            writer.writerow([arguments, repr(row['re']), repr(row['im']), row['method']])
        self.emit(stream.getvalue(), options)
        return None
