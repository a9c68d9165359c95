"""
Verification suites.

Each suite measures a family of identities as defects against tolerances
and records one CheckResult per identity. Suites draw their random vectors
from a generator seeded by the run configuration, so a report depends on
nothing but its RunConfig.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import partial
from itertools import combinations, combinations_with_replacement, product
from typing import Callable, Dict, Iterator, List

import numpy as np

from apps.common.performance import PerformanceMonitor
from apps.partitions.coordinates import corner_point, grid_point, partition_from_sigma_point, sigma_point
from apps.partitions.partition import Partition, dominance_leq, enumerate_partitions
from apps.partitions.symmetric import monomial, schur, vandermonde
from apps.plancherel.cfunction import (
    kappa, kappa_printed_constant, kappa_ratio, kappa_vandermonde_constant, sigma_weight,
)
from apps.plancherel.quadrature import composite_simpson
from apps.plancherel.spectral import SpectralFunction
from apps.plancherel.transform import (
    forward, intertwine_defect, kappa_on_nodes, parseval_ratio, roundtrip_defect, spectral_inner_product,
)
from apps.qcore.context import QContext
from apps.qcore.series import phi_grid
from apps.qdiff.operators import (
    band_violations, commutator_defect, eigen_defect, krylov_rank, norm_profile, operator_matrix,
    self_adjointness_defect,
)
from apps.qdiff.stencil import apply_box, f0_stencil_coefficients, stencil_at
from apps.radial.measure import (
    MeasureWeights, jackson_q2_converged, norm_constant, point_mass, radial_integral, trace_side_integral,
)
from apps.radial.radial_function import RadialFunction
from apps.spherical.eigen import a_eigen, eigen_tuple, principal_eigen_bound, wres_check
from apps.spherical.gram_schmidt import gram_schmidt_P, lower_basis, poly_eval
from apps.spherical.jacobi import evaluate_jacobi
from apps.spherical.multivariate import multivar_P, proportionality_ratios, spherical_radial
from .config import RunConfig
from .evaluation import number

logger = logging.getLogger(__name__)

EIGEN_PARAMETERS = (0.0, 1.0, 2.0, 3.0, 5.0)
PRINCIPAL_FRACTIONS = (0.1, 0.5, 1.0)
GRID_DEPTH = 20
RADIAL_EIGEN_WEIGHT = 4
RADIAL_EIGEN_WINDOW = 4
JACKSON_RTOL = 1e-12
JACOBI_DEGREES = 5
ORTHOGONALITY_WEIGHT = 3
KAPPA_SAMPLES = 50
INTERTWINE_NODES = 32
PROFILE_WINDOWS = (2, 4, 6, 8)
SWEEP_Q = (0.3, 0.5, 0.7, 0.9)
DISK_PARSEVAL_WEIGHT = 10
BALL_PARSEVAL_WEIGHT = 2


@dataclass(frozen=True)
class CheckResult:
    check: str
    n: int
    q: float
    params: Dict = field(default_factory=dict)
    defect: float = 0.0
    tolerance: float = 0.0

    @property
    def passed(self) -> bool:
        return math.isfinite(self.defect) and self.defect <= self.tolerance


class SuiteRun:
    """Collects the results of one suite under a RunConfig"""

    def __init__(self, config: RunConfig):
        self.config = config
        self.ctx = config.context()
        self.rng = np.random.default_rng(config.seed)
        self.results: List[CheckResult] = []

    def record(self, check: str, defect: float, tolerance: float, n: int = None, **params) -> CheckResult:
        result = CheckResult(
            check=check,
            n=self.config.n if n is None else n,
            q=self.ctx.q,
            params=params,
            defect=float(defect),
            tolerance=self.config.tolerance(tolerance),
        )
        self.results.append(result)
        if result.passed:
            logger.info(f"{check} {params}: defect {result.defect:.3e} <= {result.tolerance:.1e}")
        else:
            logger.warning(f"{check} {params} failed: defect {result.defect:.3e} > {result.tolerance:.1e}")
        return result

    def sweep(self) -> Iterator[QContext]:
        """The configured q, then the rest of SWEEP_Q; records made meanwhile carry the active q"""
        base = self.ctx
        try:
            for q in dict.fromkeys((base.q,) + SWEEP_Q):
                self.ctx = base.with_q(q)
                yield self.ctx
        finally:
            self.ctx = base

    def random_radial(self, n: int, max_weight: int, complex_values: bool = False) -> RadialFunction:
        partitions = enumerate_partitions(n, max_weight)
        values = self.rng.normal(size=len(partitions))
        if complex_values:
            values = values + 1j * self.rng.normal(size=len(partitions))
        return RadialFunction.from_vector(n, partitions, values)


SUITES: Dict[str, Callable[[SuiteRun], None]] = {}


def suite(name: str):
    """Register a suite under name, timed through PerformanceMonitor"""
    def decorator(func):
        timed = PerformanceMonitor.log_timing(func)
        SUITES[name] = timed
        return timed
    return decorator


def unit_partition(n: int) -> Partition:
    return Partition((1,) + (0,) * (n - 1))


def box_residual(l, ctx) -> float:
    """Largest relative residual of box Phi_l = a(l) Phi_l over the grid u = q^{-2k}, k < GRID_DEPTH"""
    values = phi_grid(l, GRID_DEPTH, ctx)
    image = apply_box({(k,): v for k, v in enumerate(values)}, 1, ctx)
    eigenvalue = a_eigen(l, ctx)
    worst = 0.0
    for k in range(GRID_DEPTH):
        c_minus, c_zero, c_plus = stencil_at(k, ctx)
        scale = abs(c_minus * values[k + 1]) + abs(c_zero * values[k]) + abs(eigenvalue * values[k])
        if k > 0:
            scale += abs(c_plus * values[k - 1])
        residual = abs(image.get((k,), 0) - eigenvalue * values[k])
        worst = max(worst, residual / scale)
    return worst


@suite('eigen')
def eigen_suite(run: SuiteRun):
    n = run.config.n

    for ctx in run.sweep():
        parameters = list(EIGEN_PARAMETERS) + [complex(-0.5, f * ctx.rho_max / 2) for f in PRINCIPAL_FRACTIONS]
        for l in parameters:
            run.record('box_eigenfunction', box_residual(l, ctx), 1e-10, n=1, l=number(l), k_max=GRID_DEPTH)

        for lam in enumerate_partitions(n, min(RADIAL_EIGEN_WEIGHT, run.config.max_weight)):
            phi = spherical_radial(lam, ctx, RADIAL_EIGEN_WINDOW + n)
            for k in range(1, n + 1):
                defect = eigen_defect(k, phi, eigen_tuple(lam, k, ctx), RADIAL_EIGEN_WINDOW, ctx)
                run.record('radial_eigenfunction', defect, 1e-9, lam=lam.to_list(), k=k)

    ctx = run.ctx
    for lam in enumerate_partitions(n, 3):
        for k in range(1, n + 1):
            run.record('psi_weyl_invariance', 0.0 if wres_check(lam.parts, k, ctx) else 1.0, 0.0,
                       lam=lam.to_list(), k=k)


@suite('orthogonality')
def orthogonality_suite(run: SuiteRun):
    n = run.config.n

    for ctx in run.sweep():
        def pairing_1d(m, k, scale=None):
            return jackson_q2_converged(
                lambda z: evaluate_jacobi(m, z[:, 0], ctx) * evaluate_jacobi(k, z[:, 0], ctx),
                1, ctx, JACKSON_RTOL, scale,
            )

        norms = {m: pairing_1d(m, m).value for m in range(JACOBI_DEGREES + 1)}
        for m in range(1, JACOBI_DEGREES + 1):
            for k in range(m):
                scale = math.sqrt(norms[m] * norms[k])
                estimate = pairing_1d(m, k, scale)
                run.record('little_q_jacobi_orthogonality', abs(estimate.value) / scale, 1e-10, n=1, m=m, k=k,
                           window=estimate.max_weight, tail_bound=estimate.tail_bound / scale)

        if n > 1:
            def pairing(f, g, scale=None):
                return jackson_q2_converged(
                    lambda z: f(z) * g(z) * vandermonde(z) ** 2, n, ctx, JACKSON_RTOL, scale,
                )

            for lam in enumerate_partitions(n, min(ORTHOGONALITY_WEIGHT, run.config.max_weight)):
                p = partial(multivar_P, lam, ctx=ctx)
                p_norm = pairing(p, p).value
                for eta in lower_basis(lam):
                    m = partial(monomial, eta)
                    scale = math.sqrt(p_norm * pairing(m, m).value)
                    estimate = pairing(p, m, scale)
                    run.record('multivariate_orthogonality', abs(estimate.value) / scale, 1e-10,
                               lam=lam.to_list(), eta=eta.to_list(),
                               window=estimate.max_weight, tail_bound=estimate.tail_bound / scale)

    ctx = run.ctx
    partitions = enumerate_partitions(n, 2)
    for lam in partitions:
        if lam.weight == 0:
            continue
        oracle = gram_schmidt_P(lam, ctx)
        z = run.rng.uniform(0.05, 1.5, size=(20, n))
        expected = poly_eval(oracle.array, z)
        defect = np.max(np.abs(multivar_P(lam, z, ctx) - expected)) / np.max(np.abs(expected))
        run.record('gram_schmidt_agreement', defect, 1e-9, lam=lam.to_list())

    for lam in partitions:
        _, spread = proportionality_ratios(lam, ctx, 4)
        run.record('phi_proportional_to_P', spread, 1e-9, lam=lam.to_list())


@suite('trace')
def trace_suite(run: SuiteRun):
    ctx, n = run.ctx, run.config.n
    expected = (1 - ctx.q2) ** (n * n)
    f0 = RadialFunction.f0(n)
    run.record('f0_integral', abs(radial_integral(f0, ctx) - expected) / expected, 1e-14)
    run.record('f0_trace_integral', abs(trace_side_integral(f0, ctx) - expected) / expected, 1e-14)

    window = min(run.config.max_weight, 6)
    worst = 0.0
    for lam in enumerate_partitions(n, window):
        chi = RadialFunction.characteristic(lam)
        jackson = radial_integral(chi, ctx).real
        worst = max(worst, abs(trace_side_integral(chi, ctx).real - jackson) / jackson)
    run.record('trace_weights', worst, 1e-12, max_weight=window)

    f = run.random_radial(n, window, complex_values=True)
    weights = MeasureWeights(n, ctx)
    scale = sum(abs(v) * weights(lam) for lam, v in f.items())
    defect = abs(trace_side_integral(f, ctx) - radial_integral(f, ctx)) / scale
    run.record('trace_equals_jackson', defect, 1e-12, max_weight=window, seed=run.config.seed)


@suite('kappa')
def kappa_suite(run: SuiteRun):
    ctx, n = run.ctx, run.config.n
    rho = run.rng.uniform(0, ctx.rho_max, size=(KAPPA_SAMPLES, n))

    if n == 1:
        defect = np.max(np.abs(np.asarray(kappa(rho, ctx)) / (1 - ctx.q2) - 1))
        run.record('kappa_disk', defect, 1e-13, samples=KAPPA_SAMPLES)
        return

    ratios = np.asarray(kappa_ratio(rho, ctx))
    mean = float(np.mean(ratios))
    run.record('kappa_vandermonde_spread', float(np.std(ratios)) / abs(mean), 1e-8, samples=KAPPA_SAMPLES)
    expected = kappa_vandermonde_constant(n, ctx)
    run.record('kappa_vandermonde_constant', abs(mean / expected - 1), 1e-8, expected=expected)

    printed = kappa_printed_constant(n, ctx)
    logger.warning(
        f"kappa / Vandermonde = {mean:.10e} for n={n}, q={ctx.q}; "
        f"the printed constant N = {printed:.10e} is off by a factor {mean / printed:.10e}"
    )

    coincident = rho[0].copy()
    coincident[1] = coincident[0]
    defect = abs(kappa(coincident, ctx)) / np.max(np.abs(kappa(rho, ctx)))
    run.record('kappa_vanishes_on_diagonal', defect, 1e-12)


@suite('parseval')
def parseval_suite(run: SuiteRun):
    ctx, n = run.ctx, run.config.n
    rule = run.config.rule(ctx)
    tolerance = 1e-6 if n == 1 else 1e-5

    mass = rule.integrate(sigma_weight(rule.nodes, ctx)).real
    run.record('sigma_total_mass', abs(mass * (1 - ctx.q2) - 1), 1e-7, n=1, M=rule.M)

    window = max(run.config.max_weight, DISK_PARSEVAL_WEIGHT) if n == 1 else BALL_PARSEVAL_WEIGHT
    basis = enumerate_partitions(n, window)
    transforms = {lam: forward(RadialFunction.characteristic(lam), rule, ctx) for lam in basis}
    ratios = []
    for a, b in combinations_with_replacement(basis, 2):
        spectral = spectral_inner_product(transforms[a], transforms[b], rule, ctx)
        exact = point_mass(a, ctx) if a == b else 0.0
        scale = math.sqrt(point_mass(a, ctx) * point_mass(b, ctx))
        run.record('parseval', abs(spectral - exact) / scale, tolerance, f=a.to_list(), g=b.to_list(), M=rule.M)
        if a == b:
            ratios.append(spectral.real / exact)
    run.record('parseval_ratio_variance', float(np.var(ratios)), 1e-6, max_weight=window, M=rule.M)

    ones = SpectralFunction.constant(n, rule)
    expected = (1 - ctx.q2) ** (n * n)
    total = spectral_inner_product(ones, ones, rule, ctx).real
    run.record('spectral_total_mass', abs(total - expected) / expected, tolerance, M=rule.M)

    f0 = RadialFunction.f0(n)
    printed = parseval_ratio(f0, rule, ctx, 'printed')
    expected_printed = math.factorial(n) * norm_constant(n, ctx) ** 2
    run.record('printed_normalization_ratio', abs(printed / expected_printed - 1), tolerance, M=rule.M)
    if n > 1:
        logger.warning(
            f"The printed Plancherel density scales norms by {printed:.10e} "
            f"(n! N^2 = {expected_printed:.10e}); reports use the unitary density"
        )

    roundtrip_window = max(1, min(run.config.max_weight, 3))
    for f in (f0, RadialFunction.characteristic(unit_partition(n))):
        defect = roundtrip_defect(f, rule, ctx, max_weight=roundtrip_window)
        run.record('roundtrip', defect, tolerance, f=f.support[0].to_list(), M=rule.M)


@suite('intertwine')
def intertwine_suite(run: SuiteRun):
    n = run.config.n
    functions = {
        'f0': RadialFunction.f0(n),
        'chi_unit': RadialFunction.characteristic(unit_partition(n)),
        'random': run.random_radial(n, 2),
    }
    for ctx in run.sweep():
        rule = composite_simpson(INTERTWINE_NODES, ctx)
        for name, f in functions.items():
            for k in range(1, n + 1):
                run.record('intertwining', intertwine_defect(k, f, rule, ctx), 1e-8, f=name, k=k, M=rule.M)

        if n > 1:
            fhat = forward(functions['random'], rule, ctx)
            weights = np.abs(kappa_on_nodes(n, rule, ctx))
            run.record('transform_symmetry', fhat.symmetry_defect(weights), 1e-10, M=rule.M)


@suite('cyclicity')
def cyclicity_suite(run: SuiteRun):
    ctx, n = run.ctx, run.config.n
    expected = len(enumerate_partitions(n, 3))
    rank = krylov_rank(3, n, 3, ctx)
    run.record('krylov_rank', abs(rank - expected), 0, depth=3, max_weight=3, rank=rank, expected=expected)
    if n == 2:
        logger.warning(f"Krylov span of f_0 to depth 3 has rank {rank}: the window |lambda| <= 3 "
                       f"holds {expected} partitions, not 7")

    zeros = 0
    for k in range(run.config.max_weight + 1):
        coefficients = f0_stencil_coefficients(k, ctx)
        zeros += sum(1 for c in (coefficients[1:] if k == 0 else coefficients) if c == 0)
    run.record('f0_stencil_nonzero', zeros, 0, n=1, max_weight=run.config.max_weight)


@suite('structure')
def structure_suite(run: SuiteRun):
    ctx, n = run.ctx, run.config.n

    for k in range(1, n + 1):
        op = operator_matrix(k, n, 4, ctx)
        run.record('band_rule', len(band_violations(op)), 0, k=k, max_weight=4)

    window = 5 if n <= 2 else 3
    for k in range(1, n + 1):
        op = operator_matrix(k, n, window, ctx)
        run.record('weighted_self_adjointness', self_adjointness_defect(op, ctx), 1e-11, k=k, max_weight=window)

    f = run.random_radial(n, 3)
    for j, k in combinations(range(1, n + 1), 2):
        run.record('commutator', commutator_defect(j, k, f, ctx), 1e-10, j=j, k=k)

    base = corner_point(n, ctx)
    worst = 0.0
    for lam in enumerate_partitions(n, 6):
        expected = float(vandermonde(grid_point(lam, ctx)) / vandermonde(base))
        worst = max(worst, abs(float(schur(lam, base)) - expected) / abs(expected))
    run.record('schur_specialization', worst, 1e-10, max_weight=6)

    window = enumerate_partitions(n, 5)
    points = {tuple(np.round(sigma_point(lam, ctx), 6)) for lam in window}
    misses = sum(1 for lam in window if partition_from_sigma_point(sigma_point(lam, ctx), n, ctx) != lam)
    run.record('sigma_point_injective', (len(window) - len(points)) + misses, 0, max_weight=5)

    window = enumerate_partitions(n, 4)
    violations = sum(1 for a in window if not dominance_leq(a, a))
    violations += sum(1 for a, b in product(window, repeat=2) if a != b and dominance_leq(a, b) and dominance_leq(b, a))
    violations += sum(
        1 for a, b, c in product(window, repeat=3)
        if dominance_leq(a, b) and dominance_leq(b, c) and not dominance_leq(a, c)
    )
    run.record('dominance_order_axioms', violations, 0, max_weight=4)

    windows = [w for w in PROFILE_WINDOWS if w <= max(run.config.max_weight, PROFILE_WINDOWS[0])]
    for k in range(1, n + 1):
        profile = norm_profile(k, n, windows, ctx)
        norms = [entry.norm for entry in profile]
        decrease = max([0.0] + [(a - b) / a for a, b in zip(norms, norms[1:])])
        run.record('norm_profile_monotone', decrease, 1e-12, k=k, windows=windows)
        bound = principal_eigen_bound(k, n, ctx)
        run.record('norm_profile_bounded', max(0.0, norms[-1] / bound - 1), 1e-9, k=k, bound=bound,
                   changes=[entry.relative_change for entry in profile[1:]])


SUITE_NAMES = tuple(SUITES) + ('all',)


def run_suite(name: str, config: RunConfig) -> List[CheckResult]:
    """
    Run one suite, or every suite for 'all'.

    Raises:
        ValueError: unknown suite
    """
    if name not in SUITE_NAMES:
        raise ValueError(f"Unknown suite: {name}")
    names = list(SUITES) if name == 'all' else [name]

    results = []
    for suite_name in names:
        run = SuiteRun(config)
        SUITES[suite_name](run)
        results.extend(run.results)

    failed = [result for result in results if not result.passed]
    logger.info(f"Suite {name}: {len(results) - len(failed)}/{len(results)} checks passed "
                f"(n={config.n}, q={config.q})")
    return results
