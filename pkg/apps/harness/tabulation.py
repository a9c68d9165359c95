"""
Tables over the window |lambda| <= max_weight: the measure, the polynomial
spherical functions and the spectrum of the radial operators.
"""

import csv
import logging
from typing import Dict, List, TextIO

from apps.partitions.coordinates import grid_point, sigma_point
from apps.partitions.partition import enumerate_partitions
from apps.radial.measure import weight_table
from apps.spherical.eigen import eigen_tuple
from apps.spherical.multivariate import SphericalParameter, grid_values
from .config import RunConfig

logger = logging.getLogger(__name__)

TABLES = ('measure', 'spherical', 'spectrum')
SPHERICAL_SAMPLE_WEIGHT = 2


def _partition_label(lam) -> str:
    return ' '.join(str(p) for p in lam)


def measure_table(config: RunConfig) -> Dict:
    ctx = config.context()
    weights = weight_table(config.n, config.max_weight, ctx)
    return {
        'columns': ['lambda', 'grid_point', 'weight'],
        'rows': [
            {'lambda': lam.to_list(), 'grid_point': grid_point(lam, ctx).tolist(), 'weight': weight}
            for lam, weight in weights.items()
        ],
    }


def spherical_table(config: RunConfig) -> Dict:
    """Eigenvalue tuple of Phi_{lambda+delta} and its values at the first grid points"""
    ctx = config.context()
    samples = enumerate_partitions(config.n, min(config.max_weight, SPHERICAL_SAMPLE_WEIGHT))
    rows = []
    for lam in enumerate_partitions(config.n, config.max_weight):
        values = grid_values(SphericalParameter.from_partition(lam), samples, ctx).real
        rows.append({
            'lambda': lam.to_list(),
            'eigen': [eigen_tuple(lam, k, ctx) for k in range(1, config.n + 1)],
            'values': [float(v) for v in values],
        })
    return {
        'columns': ['lambda', 'eigen', 'values'],
        'samples': [mu.to_list() for mu in samples],
        'rows': rows,
    }


def spectrum_table(config: RunConfig) -> Dict:
    ctx = config.context()
    return {
        'columns': ['lambda', 'sigma_point'],
        'rows': [
            {'lambda': lam.to_list(), 'sigma_point': sigma_point(lam, ctx).tolist()}
            for lam in enumerate_partitions(config.n, config.max_weight)
        ],
    }


BUILDERS = {
    'measure': measure_table,
    'spherical': spherical_table,
    'spectrum': spectrum_table,
}


def tabulate(table: str, config: RunConfig) -> Dict:
    """
    Raises:
        ValueError: unknown table
    """
    if table not in BUILDERS:
        raise ValueError(f"Unknown table: {table}")
    result = BUILDERS[table](config)
    result.update({'table': table, 'n': config.n, 'q': config.q, 'max_weight': config.max_weight})
    logger.info(f"Tabulated {table}: {len(result['rows'])} rows (n={config.n}, q={config.q})")
    return result


def _cell(value) -> str:
    if isinstance(value, list):
        return ' '.join(_cell(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table_csv(result: Dict, stream: TextIO):
    """Space-joined lists in each cell; spherical values get one column per sample point"""
    writer = csv.writer(stream, lineterminator='\n')
    columns: List[str] = list(result['columns'])
    if result['table'] == 'spherical':
        columns = ['lambda'] + [f'e_{k}' for k in range(1, result['n'] + 1)] + [
            f'phi({_partition_label(mu)})' for mu in result['samples']
        ]
        writer.writerow(columns)
        for row in result['rows']:
            writer.writerow([_cell(row['lambda'])] + [_cell(e) for e in row['eigen']]
                            + [_cell(v) for v in row['values']])
        return
    writer.writerow(columns)
    for row in result['rows']:
        writer.writerow([_cell(row[column]) for column in columns])
