import csv
import io

from apps.harness.serializers import VerificationReportSerializer
from apps.harness.verification import SUITE_NAMES, run_suite
from ._base import QBallCommand


class Command(QBallCommand):
    help = 'Run verification suites and write a JSON (or CSV) report; exit 1 if any check fails'

    def add_arguments(self, parser):
        parser.add_argument('suite', choices=SUITE_NAMES)
        super().add_arguments(parser)

    def run(self, config, options):
        results = run_suite(options['suite'], config)
        data = VerificationReportSerializer(
            VerificationReportSerializer.payload(options['suite'], config, results)
        ).data

        if config.output_format == 'json':
            self.emit(self.render_json(data), options)
        else:
            stream = io.StringIO()
            writer = csv.writer(stream, lineterminator='\n')
            writer.writerow(['check', 'n', 'q', 'params', 'defect', 'tolerance', 'pass'])
            for check in data['checks']:
                params = ' '.join(f'{name}={value}' for name, value in check['params'].items())
                writer.writerow([check['check'], check['n'], repr(check['q']), params,
                                 repr(check['defect']), repr(check['tolerance']), check['pass']])
            self.emit(stream.getvalue(), options)

        failed = [check['check'] for check in data['checks'] if not check['pass']]
        if failed:
            return f"{len(failed)} of {len(data['checks'])} checks failed: {', '.join(sorted(set(failed)))}"
        return None
