import io

from apps.harness.tabulation import TABLES, tabulate, write_table_csv
from ._base import QBallCommand


class Command(QBallCommand):
    help = 'Tabulate the measure, the polynomial spherical functions or the spectrum over the window'

    def add_arguments(self, parser):
        parser.add_argument('table', choices=TABLES)
        super().add_arguments(parser)

    def run(self, config, options):
        result = tabulate(options['table'], config)
        # tables default to CSV unless --format asks otherwise
        if options.get('format') == 'json':
            self.emit(self.render_json(result), options)
        else:
            stream = io.StringIO()
            write_table_csv(result, stream)
            self.emit(stream.getvalue(), options)
        return None
