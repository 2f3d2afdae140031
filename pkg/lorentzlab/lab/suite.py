from copy import deepcopy
import logging

import numpy as np
from joblib import Parallel, delayed
from tqdm import tqdm

from .. import util
from ..exceptions import DomainError
from ..foundations import INFINITY, BallDomain, ExponentPair, Interval1D, as_exponent
from ..gallery import ClosedFormCatalog, parse_item
from ..norms import DEFAULT_QUAD
from ..rearrangement import IndicatorProfile, SampledField, radial_field
from .checks import (
    CheckReport, Verdict, check_ac_norm, check_distance_bound, check_embedding_eps,
    check_equivalence, check_general_holder, check_holder, check_holder_global_1d, check_morrey_1d,
    check_morrey_nd, check_poincare_ratio, default_sampler, estimate_holder_seminorm,
    quadrature_slack, witness_strict_inclusion, worst_of,
)
from .report import summary_frame
from .sampling import Strategy, sample_simple_field

logger = logging.getLogger(__name__)

SUITES = ('holder', 'equivalence', 'inclusion', 'ac', 'morrey1d', 'morreynd', 'poincare')

DEFAULT_SETTINGS = {
    'seed': 0,
    'holder_pairs': ((2, 1), (2, 2), (2, 'inf'), (3, 2)),
    'holder_trials': 1000,
    'holder_cells': 50,
    'general_holder_trials': 500,
    'p_grid': (1.5, 2, 3, 4),
    'alpha_grid': (0.25, 0.5, 1),
    'n_grid': (1, 2, 3),
    'r_grid': (0.5, 1, 2),
    'q_grid': (1, 2, 4, 'inf'),
    'ac_k_max': 10,
    'morrey_pairs': 10_000,
    'morrey_pq': ((2, 2), (2, 4), (3, 2), (3, 'inf')),
    'morrey_cells': 512,
    'seminorm_pairs': 4096,
}

DISTANCE_TEST_FUNCTIONS = {
    'zero': lambda s: np.zeros_like(s),
    'constant': lambda s: np.full_like(s, 10.0),
    'quadratic': lambda s: 1.0 + s ** 2,
    'cosine': lambda s: np.cos(s),
    'gaussian': lambda s: np.exp(-s ** 2),
}


def check_settings(settings):
    ''' Validate a settings dict and fill missing entries.

    Unknown keys raise DomainError, missing keys and keys set to None take
    their value from DEFAULT_SETTINGS.
    '''
    settings = {} if settings is None else deepcopy(settings)
    for key in settings.keys():
        if not key in DEFAULT_SETTINGS.keys():
            msg = f'key {key} is not part of allowed settings. See DEFAULT_SETTINGS for reference: {DEFAULT_SETTINGS}'
            raise DomainError(msg)
    for key in DEFAULT_SETTINGS.keys():
        if not (key in settings.keys() and settings[key] is not None):
            settings[key] = deepcopy(DEFAULT_SETTINGS[key])
    return settings


def _rng(seed, stream):
    return np.random.default_rng([int(seed), int(stream)])


# jobs: module level so loky can ship them to workers

def holder_job(pq, trials, cells, seed, stream, quad):
    rng = _rng(seed, stream)
    domain = Interval1D(0.0, 1.0)
    reports = []
    for _ in range(trials):
        f = sample_simple_field(domain, cells, rng)
        g = sample_simple_field(domain, cells, rng, weights=f.weights)
        reports.append(check_holder(f, g, pq, quad))
    pq = ExponentPair(*pq)
    out = [worst_of(reports, 'holder', {'pq': pq.to_dict(), 'cells': cells, 'trials': trials})]
    # equality case: f = g = indicator of a set of measure 1
    indicator = SampledField(domain, [1.0], [1.0], [0.5])
    equality = check_holder(indicator, indicator, pq, quad)
    equality.check_id = 'holder.indicator'
    out.append(equality)
    return out


def general_holder_job(trials, cells, seed, stream, quad):
    rng = _rng(seed, stream)
    domain = Interval1D(0.0, 1.0)
    reports = [check_general_holder(sample_simple_field(domain, cells, rng), 2, 2, 4, 4, 4, 4, quad)
               for _ in range(trials)]
    return [worst_of(reports, 'general_holder', {'exponents': [[2, 2], [4, 4], [4, 4]],
                                                 'cells': cells, 'trials': trials})]


def embedding_job(item_ids, quad):
    reports = []
    for item_id in item_ids:
        item = parse_item(item_id)
        p = ClosedFormCatalog.item_exponent(item)
        for q, eps in ((INFINITY, p - 1.0), (INFINITY, 0.5 * (p - 1.0)), (2 * p, 0.5 * (p - 1.0))):
            reports.append(check_embedding_eps(item, p, q, eps, quad=quad))
    return reports


def equivalence_job(item_ids, q_grid, seed, stream, quad):
    reports = []
    for item_id in item_ids:
        item = parse_item(item_id)
        p = ClosedFormCatalog.item_exponent(item)
        for q in q_grid:
            reports.append(check_equivalence(item, ExponentPair(p, q), quad))
    for p in (1.5, 2.0, 3.0):
        for q in q_grid:
            reports.append(check_equivalence(IndicatorProfile(1.0, 1.0), ExponentPair(p, q), quad))
    rng = _rng(seed, stream)
    random_reports = [check_equivalence(sample_simple_field(Interval1D(0.0, 1.0), 20, rng),
                                        ExponentPair(2, q), quad)
                      for q in q_grid for _ in range(10)]
    reports.append(worst_of(random_reports, 'equivalence', {'random_fields': len(random_reports)}))
    return reports


def catalog_job(quad):
    catalog = ClosedFormCatalog()
    reports = []
    for entry, computed, ok in catalog.verify(quad):
        params = {'item': entry.item_id, 'target': entry.target, 'pq': entry.pq.to_dict()}
        reports.append(CheckReport.predicate('catalog', params, ok,
                                             details={'closed_form': entry.norm, 'pipeline': computed}))
    return reports


def witness_job(p, q1, q2, quad):
    return witness_strict_inclusion(p, q1, q2, quad=quad).reports


def ac_job(p_grid, n_grid, k_max, quad):
    reports = []
    for n in n_grid:
        for p in p_grid:
            reports.append(check_ac_norm(parse_item(f'power_singularity(r=1,n={n},p={p})'),
                                         ExponentPair(p, INFINITY), k_max, quad))
            reports.append(check_ac_norm(parse_item(f'u_radial(r=1,alpha=1,n={n},p={p})'),
                                         ExponentPair(p, 2), k_max, quad))
        indicator = radial_field(lambda s: np.ones_like(s), BallDomain(n, 1.0), n_shells=1024)
        reports.append(check_ac_norm(indicator, ExponentPair(2, 2), k_max, quad))
    return reports


def distance_job(n_grid, p_grid):
    reports = []
    for n in n_grid:
        for p in p_grid:
            # the innermost shell caps |u_r| at 10^(8n/p), too low for n/p < 0.3
            if n / p < 0.3:
                continue
            for name, v in DISTANCE_TEST_FUNCTIONS.items():
                reports.append(check_distance_bound(v, 1.0, n, p, (1.0, 0.5, 0.25), name=name))
    return reports


def morrey_1d_job(pq, pairs, cells, seed, quad):
    pq = ExponentPair(*pq)
    p = pq.p
    item_ids = (f'v(r=1,alpha=1,n=1,p={p:g})', 'linear(slope=2,a=0,b=1)',
                f'trunc(k=3,v(r=1,alpha=1,n=1,p={p:g}))')
    reports = []
    for item_id in item_ids:
        item = parse_item(item_id)
        sampler = default_sampler(item, pairs, seed, Strategy.ENDPOINT)
        reports.append(check_morrey_1d(item, pq, sampler, quad, n_cells=cells))
        reports.append(check_holder_global_1d(item, pq, sampler, quad))
    return reports


def morrey_nd_job(pairs, seed, quad):
    reports = []
    for n, p in ((1, 2), (2, 4), (3, 6)):
        item = parse_item(f'up(n={n},p={p})')
        beta = 1.0 - n / p
        estimate = estimate_holder_seminorm(item, item.domain, beta, default_sampler(item, pairs, seed))
        reports.append(CheckReport.judge('holder_corollary', {'item': item.id, 'beta': beta},
                                         abs(estimate - 1.0), 1e-6, 0.0, samples=pairs,
                                         details={'estimate': estimate}))
        reports.append(check_morrey_nd(item, ExponentPair(p, INFINITY), default_sampler(item, pairs, seed), quad))
    for item_id, q in (('v(r=1,alpha=1,n=2,p=4)', 'inf'), ('v(r=1,alpha=1,n=3,p=4)', 2),
                       ('v(r=1,alpha=1,n=2,p=2)', 'inf'), ('v(r=1,alpha=0.5,n=3,p=2)', 'inf')):
        item = parse_item(item_id)
        reports.append(check_morrey_nd(item, ExponentPair(item.p, q), default_sampler(item, pairs, seed), quad))
    reports.extend(v_origin_reports(quad))
    return reports


def v_origin_reports(quad):
    ''' v(0) against its bound for p > n, and the p = n closed forms against
    direct quadrature.'''
    reports = []
    for n, p in ((1, 2), (2, 3), (2, 4), (3, 4)):
        for alpha in (0.5, 1.0):
            item = parse_item(f'v(r=1,alpha={alpha:g},n={n},p={p})')
            bound = item.origin_bound()
            reports.append(CheckReport.judge('v_origin', {'item': item.id}, item.value_at_origin(),
                                             bound, quadrature_slack(bound, quad)))
    for n in (2, 3):
        for alpha in (0.5, 1.0):
            item = parse_item(f'v(r=1,alpha={alpha:g},n={n},p={n})')
            for s in (1e-6, 1e-3, 0.1, 0.5, 0.9):
                closed = float(item.closed_form_value(s))
                direct = item.radial_value_quadrature(s)
                reports.append(CheckReport.judge('v_critical', {'item': item.id, 'radius': float(s)},
                                                 abs(closed - direct), 1e-8 * abs(closed), 0.0,
                                                 details={'closed_form': closed, 'quadrature': direct}))
    return reports


def poincare_job(p, q, alpha_grid, n_grid, quad):
    item_ids = [f'v(r=1,alpha={alpha:g},n={n},p={p:g})' for alpha in alpha_grid for n in n_grid]
    item_ids.append(f'trunc(k=3,v(r=1,alpha=1,n=2,p={p:g}))')
    item_ids.append(f'extend(r=2,v(r=1,alpha=1,n=2,p={p:g}))')
    for n in n_grid:
        item_ids.append(f'urp(n={n},p={p:g},r=1)')
    items = [parse_item(item_id) for item_id in item_ids]
    return [check_poincare_ratio(items, ExponentPair(p, q), quad)]


RANDOM_JOBS = (holder_job, general_holder_job, equivalence_job)


class Suite:
    ''' A verification matrix of the inequality lab.

    Attributes
    ----------
    name : str
        One of 'holder', 'equivalence', 'inclusion', 'ac', 'morrey1d',
        'morreynd', 'poincare' or 'all'.
    settings : dict
        See DEFAULT_SETTINGS. Keys:

        seed : int
            Base seed; every job draws from default_rng([seed, job index]).
        holder_pairs : list
            (p, q) pairs of the randomized Hoelder chain.
        holder_trials, holder_cells : int
            Random field pairs per (p, q) and cells per field.
        general_holder_trials : int
        p_grid, alpha_grid, n_grid, r_grid, q_grid : tuple
            Parameter grids of the gallery studies.
        ac_k_max : int
            Number of shrinking balls in the absolute continuity study; a decay
            verdict needs at least AC_MIN_WINDOW of them.
        morrey_pairs, morrey_pq, morrey_cells : int, tuple, int
            Sampled pairs, exponent pairs and cells per subinterval of the
            one-dimensional Morrey matrix.
        seminorm_pairs : int
            Sampled pairs of the n-dimensional seminorm estimates.
    quad : QuadratureSpec
    n_jobs : int
        The number of jobs/cores to utilize.
    parallel : bool
        Fan jobs out with joblib (loky backend).
    verbose : bool
        Show a progress bar.
    '''
    def __init__(self, name='all', settings=None, quad=DEFAULT_QUAD, n_jobs=-1, parallel=False,
                 verbose=False):
        if name != 'all' and name not in SUITES:
            msg = f'unknown suite {name!r}, choose one of {", ".join(SUITES + ("all",))}'
            raise DomainError(msg)
        self.name = name
        self.settings = check_settings(settings)
        self.quad = quad
        self.n_jobs = n_jobs
        self.parallel = parallel
        self.verbose = verbose
        self.reports = None
        self.summary = None

    @property
    def suites(self):
        return SUITES if self.name == 'all' else (self.name,)

    def jobs(self):
        ''' (suite, function, kwargs) in a fixed order.'''
        s, quad = self.settings, self.quad
        seed = util.resolve_seed(s['seed'])
        catalog_ids = [item.id for item in ClosedFormCatalog().items]
        jobs = []
        if 'holder' in self.suites:
            for pq in s['holder_pairs']:
                jobs.append(('holder', holder_job, dict(pq=tuple(pq), trials=s['holder_trials'],
                                                         cells=s['holder_cells'], seed=seed)))
            jobs.append(('holder', general_holder_job, dict(trials=s['general_holder_trials'],
                                                            cells=s['holder_cells'], seed=seed)))
            jobs.append(('holder', embedding_job, dict(item_ids=('power_singularity(r=1,n=1,p=2)',
                                                                 'u_radial(r=1,alpha=1,n=2,p=2)',
                                                                 'linear(slope=2,a=0,b=1)'))))
        if 'equivalence' in self.suites:
            jobs.append(('equivalence', equivalence_job, dict(item_ids=catalog_ids,
                                                              q_grid=s['q_grid'], seed=seed)))
            jobs.append(('equivalence', catalog_job, dict()))
        if 'inclusion' in self.suites:
            q_grid = sorted(as_exponent(q) for q in s['q_grid'])
            for p in s['p_grid']:
                for i, q1 in enumerate(q_grid):
                    for q2 in q_grid[i + 1:]:
                        jobs.append(('inclusion', witness_job, dict(p=p, q1=q1, q2=q2)))
        if 'ac' in self.suites:
            jobs.append(('ac', ac_job, dict(p_grid=s['p_grid'], n_grid=s['n_grid'], k_max=s['ac_k_max'])))
            jobs.append(('ac', distance_job, dict(n_grid=s['n_grid'], p_grid=s['p_grid'])))
        if 'morrey1d' in self.suites:
            for pq in s['morrey_pq']:
                jobs.append(('morrey1d', morrey_1d_job, dict(pq=tuple(pq), pairs=s['morrey_pairs'],
                                                             cells=s['morrey_cells'], seed=seed)))
        if 'morreynd' in self.suites:
            jobs.append(('morreynd', morrey_nd_job, dict(pairs=s['seminorm_pairs'], seed=seed)))
        if 'poincare' in self.suites:
            for p in s['p_grid']:
                for q in (2, 'inf'):
                    jobs.append(('poincare', poincare_job, dict(p=p, q=q, alpha_grid=s['alpha_grid'],
                                                                n_grid=s['n_grid'])))
        out = []
        for stream, (suite, func, kwargs) in enumerate(jobs):
            if func in RANDOM_JOBS:
                kwargs['stream'] = stream
            if func is not distance_job:
                kwargs['quad'] = quad
            out.append((suite, func, kwargs))
        return out

    def run(self):
        ''' Run every job and collect the reports, sorted by (check_id, params).'''
        jobs = self.jobs()
        logger.info('suite %s: %d jobs', self.name, len(jobs))
        iterator = tqdm(jobs, disable=not self.verbose)
        if self.parallel:
            results = Parallel(n_jobs=self.n_jobs, backend='loky')(
                delayed(func)(**kwargs) for _, func, kwargs in iterator)
        else:
            results = [func(**kwargs) for _, func, kwargs in iterator]
        reports = [report for result in results for report in result]
        self.reports = sorted(reports, key=CheckReport.sort_key)
        self.summary = summary_frame(self.reports)
        counts = self.counts()
        logger.info('suite %s: %s', self.name, counts)
        if counts['FAIL']:
            logger.warning('suite %s: %d failing checks', self.name, counts['FAIL'])
        return self

    def counts(self):
        counts = {verdict.value: 0 for verdict in Verdict}
        for report in self.reports or []:
            counts[report.verdict.value] += 1
        return counts

    @property
    def failures(self):
        return [report for report in self.reports or [] if report.failed]

    def save(self, file_name):
        ''' Store the suite with its reports.

        Parameters
        ----------
        file_name : str
            Filename or full path to store the object to.

        Example
        -------
        suite = Suite('holder').run()
        suite.save('holder_suite.pkl')
        '''
        util.save_object(self, file_name)


def load_suite(file_name):
    suite = util.load_object(file_name)
    if not isinstance(suite, Suite):
        msg = f'{file_name} does not hold a Suite'
        raise DomainError(msg)
    return suite
