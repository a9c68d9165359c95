"""
Point evaluation of the special functions behind the eval command.

Every row records which formula produced it, so a table can be traced back
without rerunning anything.
"""

import logging
from collections import namedtuple
from typing import Callable, Dict, List, Sequence

import numpy as np

from apps.partitions.partition import Partition
from apps.partitions.symmetric import coincident_mask, schur, schur_jacobi_trudi
from apps.plancherel.cfunction import c_function, kappa
from apps.qcore.context import QContext
from apps.qcore.series import grid_index, phi_one
from apps.spherical.eigen import a_eigen
from apps.spherical.jacobi import evaluate_jacobi, little_q_jacobi
from apps.spherical.multivariate import SphericalParameter, phi_multi

logger = logging.getLogger(__name__)

EvalRow = namedtuple('EvalRow', ['arguments', 'value', 'method'])


def number(value):
    """JSON form of a possibly complex argument"""
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


def _real_if_possible(value: complex):
    value = complex(value)
    return value.real if value.imag == 0 else value


def _require(params: Dict, *names):
    missing = [name for name in names if params.get(name) in (None, [])]
    if missing:
        raise ValueError(f"Missing parameter(s): {', '.join('--' + name for name in missing)}")


def _phi_method(u, ctx: QContext) -> str:
    u = complex(u)
    if u.imag == 0 and grid_index(u.real, ctx) is not None:
        return 'grid recurrence'
    return 'basic hypergeometric series'


def eval_phi(params: Dict, ctx: QContext) -> List[EvalRow]:
    """Phi_l(u): one variable per u value, or the n-variable function for n spectral parameters"""
    _require(params, 'l', 'u')
    l, u = params['l'], params['u']

    if len(l) == 1:
        rows = []
        for point in u:
            rows.append(EvalRow({'l': number(l[0]), 'u': number(point)}, phi_one(l[0], point, ctx),
                                _phi_method(point, ctx)))
        return rows

    if len(u) != len(l):
        raise ValueError(f"Phi with {len(l)} spectral parameters needs {len(l)} coordinates, got {len(u)}")
    value = phi_multi(SphericalParameter(l), np.array(u), ctx)
    return [EvalRow({'l': [number(x) for x in l], 'u': [number(x) for x in u]}, value,
                    'det[Phi_{l_j}(u_i)] / Delta(u)')]


def eval_jacobi(params: Dict, ctx: QContext) -> List[EvalRow]:
    """Coefficients of the monic little q-Jacobi polynomial P_m, then its values at z"""
    _require(params, 'm')
    m = params['m']
    coefficients = little_q_jacobi(m, ctx)
    rows = [
        EvalRow({'m': m, 'power': power}, value, 'terminating series, monic')
        for power, value in enumerate(coefficients)
    ]
    for z in params.get('z') or []:
        rows.append(EvalRow({'m': m, 'z': z}, evaluate_jacobi(m, z, ctx), 'three-term recurrence'))
    return rows


def eval_a(params: Dict, ctx: QContext) -> List[EvalRow]:
    _require(params, 'l')
    return [
        EvalRow({'l': number(l)}, a_eigen(_real_if_possible(l), ctx),
                'a(l) = (1 - q^{-2l})(1 - q^{2l+2}) / (1 - q^2)^2')
        for l in params['l']
    ]


def eval_c(params: Dict, ctx: QContext) -> List[EvalRow]:
    _require(params, 'l')
    return [
        EvalRow({'l': number(l)}, c_function(l, ctx), 'Gamma_{q^2}(2l + 1) / Gamma_{q^2}(l + 1)^2')
        for l in params['l']
    ]


def eval_kappa(params: Dict, ctx: QContext) -> List[EvalRow]:
    _require(params, 'rho')
    rho = [float(r) for r in params['rho']]
    return [EvalRow({'rho': rho}, kappa(rho, ctx), '(1 - q^2)^{n^2} Phi_{-1/2 + i rho}(q^{-2 delta})')]


def eval_schur(params: Dict, ctx: QContext) -> List[EvalRow]:
    _require(params, 'lam', 'z')
    lam = Partition(params['lam'])
    z = np.array(params['z'], dtype=float)
    if bool(np.any(coincident_mask(z))):
        return [EvalRow({'lambda': lam.to_list(), 'z': z.tolist()}, schur_jacobi_trudi(lam, z), 'Jacobi-Trudi')]
    return [EvalRow({'lambda': lam.to_list(), 'z': z.tolist()}, schur(lam, z), 'bialternant')]


EVALUATORS: Dict[str, Callable[[Dict, QContext], List[EvalRow]]] = {
    'phi': eval_phi,
    'jacobi': eval_jacobi,
    'a': eval_a,
    'c': eval_c,
    'kappa': eval_kappa,
    'schur': eval_schur,
}


def evaluate(what: str, params: Dict, ctx: QContext) -> List[EvalRow]:
    """
    Dispatch an eval request.

    Raises:
        ValueError: unknown quantity or missing/invalid parameters
    """
    if what not in EVALUATORS:
        raise ValueError(f"Unknown quantity: {what}")
    rows = EVALUATORS[what](params, ctx)
    logger.info(f"Evaluated {what} at {len(rows)} point(s), q={ctx.q}")
    return rows


def table_payload(what: str, rows: Sequence[EvalRow], ctx: QContext) -> Dict:
    """Instance dict consumed by EvalTableSerializer(...).data"""
    return {
        'what': what,
        'q': ctx.q,
        'rows': [
            {'arguments': row.arguments, 're': complex(row.value).real, 'im': complex(row.value).imag,
             'method': row.method}
            for row in rows
        ],
    }
