####################################################################################################
# ppedge/harness.py
# Monte Carlo studies of the boundary estimators: (k, h) schedules, replication plans, report
# aggregation, and the statistics used to check convergence and asymptotic normality.

import os, time, warnings, six
import numpy as np, pyrsistent as ps, pandas as pd
from concurrent.futures import ThreadPoolExecutor
from scipy import stats
from .util import (DomainError, StudyError, to_real, to_int, imm_array, is_str, is_map,
                   is_vector, to_jsonable, write_csv, write_json)
from .util import digest as param_digest
from .immutable import (immutable, param, option, value, require)
from .calculation import (calc, plan)
from .model import (ProcessConfig, parse_boundary)
from .sampler import (sample_process, cell_extremes, replication_seed)
from .basis import (BasisSpec, kernel_bounds, approx_fn, b1_ceiling)
from .estimator import estimation_plan

class ScheduleWarning(UserWarning):
    '''
    ScheduleWarning is the category of warnings issued when a (k, h) schedule violates one of the
    growth conditions required by the convergence results it is meant to illustrate.
    '''
    pass

schedule_presets = ('normality45', 'normality23', 'mise', 'custom')
normality_presets = ('normality45', 'normality23')
default_eval_grid = (0.1, 0.3, 0.5, 0.7, 0.9)

####################################################################################################
# Schedules

def _even_h(raw):
    return int(max(2, 2*int(np.round(raw / 2.0))))
def schedule(n, preset, epsilon=0.01, pair=None):
    '''
    schedule(n, preset) yields the pair (k, h) of the cell count and truncation order for sample
      size n under the given preset:
      * 'normality45': k = n^(4/5) (ln n)^(3/5) (ln ln n)^e, h = n^(2/5) (ln n)^(-1/5) (ln ln n)^e;
      * 'normality23': k = n^(2/3) (ln n)^e, h = (ln n)^e;
      * 'mise': k = n^(2/3), h = n^(1/3);
      * 'custom': the given pair (k, h) is returned as-is (after validation).
      For the formula presets, k is rounded to the nearest integer and h to the nearest even
      integer that is at least 2.
    schedule(n, preset, epsilon) uses the exponent e = epsilon (default: 0.01).
    schedule(n, 'custom', epsilon, (k, h)) passes the pair through.

    A DomainError is raised when n < 16.
    '''
    n = to_int(n, 'n')
    if n < 16: raise DomainError('n must be ≥ 16; got %d' % n)
    epsilon = to_real(epsilon, 'epsilon', lower=0)
    if preset == 'custom':
        if pair is None or len(pair) != 2:
            raise DomainError('the custom schedule requires a (k, h) pair')
        return (to_int(pair[0], 'k', lower=1), to_int(pair[1], 'h', lower=0))
    (ln, lnln) = (np.log(n), np.log(np.log(n)))
    if preset == 'normality45':
        k = n**0.8 * ln**0.6 * lnln**epsilon
        h = n**0.4 * ln**-0.2 * lnln**epsilon
    elif preset == 'normality23':
        k = n**(2.0/3.0) * ln**epsilon
        h = ln**epsilon
    elif preset == 'mise':
        k = n**(2.0/3.0)
        h = n**(1.0/3.0)
    else:
        raise DomainError('unrecognized schedule preset: %r' % (preset,))
    return (int(max(1, np.round(k))), _even_h(h))
# StudyConfig.ks takes a member named schedule, which shadows the function
_schedule = schedule
def schedule_conditions(n, k, h, preset):
    '''
    schedule_conditions(n, k, h, preset) yields a tuple of (label, ratio, ok) triples, one for each
      growth condition that the given preset requires; each o(.) condition is represented at finite
      n by a ratio that must be below 1.
    '''
    (n, k, h) = (float(n), float(k), float(h))
    lh = np.log(max(h, 2.0))
    ln = np.log(n)
    if preset == 'normality45':
        conds = (('h ln h / k',                 h*lh / k),
                 ('k ln n / n',                 k*ln / n),
                 ('n / (h^1.5 k^0.5)',          n / (h**1.5 * k**0.5)),
                 ('n h^0.5 ln h / k^1.5',       n * h**0.5 * lh / k**1.5))
    elif preset == 'normality23':
        conds = (('h / k',                      h / k),
                 ('k ln n / n',                 k*ln / n),
                 ('n / k^1.5',                  n / k**1.5))
    elif preset == 'mise':
        conds = (('h (ln h)^0.5 / k',           h*np.sqrt(lh) / k),
                 ('k (ln h)^0.5 / n',           k*np.sqrt(lh) / n))
    else:
        conds = (('h / k',                      h / k),
                 ('k ln n / n',                 k*ln / n))
    return tuple((label, float(ratio), bool(ratio < 1)) for (label, ratio) in conds)
def check_schedule(n, k, h, preset, log=None):
    '''
    check_schedule(n, k, h, preset) yields True if all of the schedule_conditions of the given
      preset hold for (n, k, h) and False otherwise; each violated condition is reported with a
      ScheduleWarning.
    check_schedule(n, k, h, preset, log) reports violations to log.warn instead.
    '''
    ok = True
    for (label, ratio, passed) in schedule_conditions(n, k, h, preset):
        if passed: continue
        ok = False
        msg = 'schedule %s at n = %d (k = %d, h = %d): %s = %.3g is not below 1' % (
            preset, n, k, h, label, ratio)
        if log is None: warnings.warn(msg, ScheduleWarning)
        else: log.warn(msg)
    return ok

####################################################################################################
# Statistics

def midpoint_grid(g):
    '''
    midpoint_grid(G) yields the G midpoints (j - 1/2)/G, j = 1 ... G, of a uniform partition.
    '''
    g = to_int(g, 'G', lower=1)
    return (np.arange(1, g + 1) - 0.5) / g
def _voronoi_weights(xs):
    order = np.argsort(xs, kind='stable')
    sx = xs[order]
    cuts = np.concatenate([[0.0], (sx[1:] + sx[:-1]) / 2, [1.0]])
    w = np.empty(len(xs))
    w[order] = np.diff(cuts)
    return w
def _integrated_sq_error(grid, values, truth):
    grid = np.asarray(grid, dtype=float)
    if len(grid) < 64:
        raise DomainError('integrated errors require a grid of at least 64 points; got %d' % (
            len(grid),))
    w = _voronoi_weights(grid)
    return np.dot(np.square(np.asarray(values) - truth), w)
def mise(curve, f, which='corrected'):
    '''
    mise(curve, f) yields the integrated squared error of the corrected estimate in the given
      EstimateCurve with respect to the boundary function f. Each grid point is weighted by the
      length of its Voronoi cell in [0,1], which for a midpoint grid is the composite midpoint rule.
    mise(curve, f, 'raw') measures the raw estimate instead.

    A DomainError is raised if the curve's grid has fewer than 64 points.
    '''
    if which not in ('corrected', 'raw'):
        raise DomainError('which must be corrected or raw; got %r' % (which,))
    vals = curve.corrected if which == 'corrected' else curve.raw
    return float(_integrated_sq_error(curve.grid, vals, f(curve.grid)))
def standardized_errors(estimates, truth, n, c, k, h):
    '''
    standardized_errors(estimates, truth, n, c, k, h) yields nc (h k)^(-1/2) (estimates - truth),
      the standardized errors of the estimates of the boundary value truth at one point over a set
      of replications.
    '''
    (n, c) = (to_real(n, 'n', lower=0), to_real(c, 'c', lower=0))
    (k, h) = (to_int(k, 'k', lower=1), to_int(h, 'h', lower=1))
    est = np.asarray(estimates, dtype=float)
    return n * c / np.sqrt(h * k) * (est - truth)
def ks_distance(samples):
    '''
    ks_distance(samples) yields the Kolmogorov-Smirnov distance between the empirical distribution
      of the given samples and the standard normal distribution. At least 10 finite samples are
      required.
    '''
    x = np.reshape(np.asarray(samples, dtype=float), -1)
    if len(x) < 10:
        raise DomainError('ks_distance requires at least 10 samples; got %d' % len(x))
    if not np.all(np.isfinite(x)):
        raise DomainError('ks_distance requires finite samples')
    return float(stats.kstest(x, 'norm').statistic)
def rate_regression(n_values, y_values):
    '''
    rate_regression(n_values, y_values) yields the least-squares slope of log(y) against log(n).
    '''
    n = np.asarray(n_values, dtype=float)
    y = np.asarray(y_values, dtype=float)
    if n.shape != y.shape or n.ndim != 1:
        raise DomainError('rate_regression requires two vectors of equal length')
    if len(n) < 3:
        raise DomainError('rate_regression requires at least 3 points; got %d' % len(n))
    if np.any(~(n > 0)) or np.any(~(y > 0)):
        raise DomainError('rate_regression requires positive values')
    (slope, _) = np.polyfit(np.log(n), np.log(y), 1)
    return float(slope)

def _bound_ratios(spec, k, grid):
    b1 = kernel_bounds(spec, k, grid, 1)
    b2 = kernel_bounds(spec, k, grid, 2)
    h = spec.h
    b1_ratio = np.max(b1) / (k * np.log(h)) if h >= 2 else np.max(b1) / k
    b2_dev = np.nan if h == 0 else float(np.max(np.abs(b2 / np.sqrt(k * h) - 1)))
    ceiling_ok = bool(k > 2*(h + 1) and np.max(b1) <= b1_ceiling(k, h))
    return (float(b1_ratio), b2_dev, ceiling_ok)
def verify_kernel_bounds(preset, n_values, grid, epsilon=0.01, pairs=None, family='trig',
                         log=None):
    '''
    verify_kernel_bounds(preset, n_values, grid) yields a pandas DataFrame with one row for each n
      in n_values and the columns n, k, h (from the given schedule preset), b1_ratio_max (the
      maximum over the grid of B_1(x)/(k ln h), or of B_1(x)/k when h < 2), b2_deviation_max (the
      maximum over the grid of |B_2(x)/sqrt(k h) - 1|), b1_ceiling_ok (whether k > 2(h+1) and the
      maximum of B_1 lies below b1_ceiling(k, h)), and hypotheses_ok (whether h < k and the preset's
      schedule conditions hold). The grid may be a vector of x-values or an integer G, meaning
      midpoint_grid(G).

    The following options may be given:
      * epsilon (default: 0.01) the schedule exponent.
      * pairs (default: None) the (k, h) pairs of the custom preset; n_values may then be None.
      * family (default: 'trig') the basis family.
      * log (default: None) a work log to which violated hypotheses are reported; otherwise they
        are issued as ScheduleWarnings.
    '''
    grid = midpoint_grid(grid) if not is_vector(grid) else np.asarray(grid, dtype=float)
    if preset == 'custom':
        if pairs is None: raise DomainError('the custom preset requires (k, h) pairs')
        ns = [None]*len(pairs) if n_values is None else list(n_values)
        if len(ns) != len(pairs): raise DomainError('n_values and pairs must have equal lengths')
        rows = [(n,) + schedule(max(n or 16, 16), 'custom', epsilon, pair)
                for (n, pair) in zip(ns, pairs)]
    else:
        rows = [(n,) + schedule(n, preset, epsilon) for n in n_values]
    records = []
    for (n, k, h) in rows:
        spec = BasisSpec(family, h)
        (b1r, b2d, ceil_ok) = _bound_ratios(spec, k, grid)
        hyp_ok = h < k
        if not hyp_ok:
            msg = 'kernel hypotheses violated: h = %d is not below k = %d' % (h, k)
            if log is None: warnings.warn(msg, ScheduleWarning)
            else: log.warn(msg)
        if n is not None and preset != 'custom':
            hyp_ok = check_schedule(n, k, h, preset, log=log) and hyp_ok
        records.append({'n': n, 'k': k, 'h': h, 'b1_ratio_max': b1r, 'b2_deviation_max': b2d,
                        'b1_ceiling_ok': ceil_ok, 'hypotheses_ok': bool(hyp_ok)})
    return pd.DataFrame(records, columns=['n', 'k', 'h', 'b1_ratio_max', 'b2_deviation_max',
                                          'b1_ceiling_ok', 'hypotheses_ok'])
def kernel_diag_frame(spec, k, grid):
    '''
    kernel_diag_frame(spec, k, grid) yields a long-form pandas DataFrame with the columns x, j,
      B_value, k, h, and family, holding kernel_bounds(spec, k, x, j) for each x in the grid and
      each j in 1, 2, 3, inf.
    '''
    grid = midpoint_grid(grid) if not is_vector(grid) else np.asarray(grid, dtype=float)
    frames = []
    for j in (1, 2, 3, 'inf'):
        frames.append(pd.DataFrame({'x': grid, 'j': str(j),
                                    'B_value': kernel_bounds(spec, k, grid, j),
                                    'k': k, 'h': spec.h, 'family': spec.family}))
    return pd.concat(frames, ignore_index=True)

####################################################################################################
# Study configuration

def _as_pairs(pairs):
    if pairs is None: return None
    res = []
    for p in pairs:
        if not hasattr(p, '__len__') or len(p) != 2:
            raise DomainError('custom schedule entries must be (k, h) pairs')
        res.append((to_int(p[0], 'k', lower=1), to_int(p[1], 'h', lower=0)))
    return tuple(res)

@immutable
class StudyConfig(object):
    '''
    StudyConfig(boundary, n_values, schedule) describes a Monte Carlo study of the estimators of the
    given boundary (a BoundaryFunction or anything parse_boundary understands) at each sample size
    in n_values, with (k, h) chosen by the given schedule preset.

    The following options may be given:
      * pairs (default: None) the (k, h) pairs of the custom schedule, one per n.
      * c (default: 1) the intensity of each of the n superposed processes.
      * epsilon (default: 0.01) the exponent of the schedule's ln ln n factor.
      * replications (default: 100) the number of replications per n; at least 2.
      * eval_grid (default: (0.1, 0.3, 0.5, 0.7, 0.9)) the points at which pointwise statistics are
        reported.
      * mise_grid (default: 512) the number of midpoints used for integrated errors; at least 64.
      * seed (default: 0) the base seed; replication r uses seed + r.
      * family (default: 'trig') the basis family.
      * name (default: 'study') the name of the study, used for its output directory.
    '''
    def __init__(self, boundary, n_values, schedule, **kw):
        self.boundary = boundary
        self.n_values = n_values
        self.schedule = schedule
        for (k,v) in six.iteritems(kw): setattr(self, k, v)
    @param
    def boundary(f):
        return parse_boundary(f)
    @param
    def n_values(ns):
        if not is_vector(ns) or len(ns) == 0:
            raise DomainError('n_values must be a non-empty list of integers')
        ns = tuple(to_int(n, 'n', lower=1) for n in ns)
        if any(b <= a for (a,b) in zip(ns[:-1], ns[1:])):
            raise DomainError('n_values must be strictly increasing')
        return ns
    @param
    def schedule(s):
        if s not in schedule_presets:
            raise DomainError('schedule must be one of %s; got %r' % (schedule_presets, s))
        return s
    @option(None)
    def pairs(ps_):
        return _as_pairs(ps_)
    @option(1.0)
    def c(c):
        return to_real(c, 'c', lower=0)
    @option(0.01)
    def epsilon(e):
        return to_real(e, 'epsilon', lower=0)
    @option(100)
    def replications(r):
        return to_int(r, 'replications', lower=2)
    @option(default_eval_grid)
    def eval_grid(g):
        g = np.reshape(np.asarray(g, dtype=float), -1)
        if len(g) == 0 or np.any(~np.isfinite(g)) or np.any(g < 0) or np.any(g > 1):
            raise DomainError('eval_grid must be a non-empty vector of points in [0,1]')
        return tuple(g.tolist())
    @option(512)
    def mise_grid(g):
        return to_int(g, 'mise_grid', lower=64)
    @option(0)
    def seed(s):
        s = to_int(s, 'seed', lower=0)
        if s >= 2**64: raise DomainError('seed must be a 64-bit unsigned integer')
        return s
    @option('trig')
    def family(f):
        return BasisSpec(f, 0).family
    @option('study')
    def name(nm):
        if not is_str(nm) or not nm or '/' in nm:
            raise DomainError('study name must be a non-empty string without slashes')
        return nm
    @require
    def custom_pairs(schedule, pairs, n_values, family):
        if schedule != 'custom':
            if pairs is not None: raise DomainError('pairs are only used by the custom schedule')
            return True
        if pairs is None or len(pairs) != len(n_values):
            raise DomainError('the custom schedule requires one (k, h) pair per n')
        for (_, h) in pairs: BasisSpec(family, h)
        return True
    @value
    def ks(n_values, schedule, epsilon, pairs):
        '''
        cfg.ks is the tuple of (k, h) pairs used at each n.
        '''
        if schedule == 'custom':
            return tuple(_schedule(n, 'custom', epsilon, p) for (n, p) in zip(n_values, pairs))
        return tuple(_schedule(n, schedule, epsilon) for n in n_values)


def study_config_from_json(obj, **overrides):
    '''
    study_config_from_json(obj) yields the StudyConfig described by the JSON-ready map obj; the
      schedule may be a preset name or {"custom": [[k, h], ...]}.
    study_config_from_json(obj, key=val...) overrides the given entries of obj first.
    '''
    if not is_map(obj): raise DomainError('a study configuration must be a JSON object')
    d = dict(obj)
    d.update(overrides)
    sched = d.pop('schedule', None)
    if is_map(sched):
        if list(sched.keys()) != ['custom']:
            raise DomainError('a schedule object must have the single key custom')
        d['pairs'] = sched['custom']
        sched = 'custom'
    if sched is None: raise DomainError('a study configuration requires a schedule')
    for req in ('boundary', 'n_values'):
        if req not in d: raise DomainError('a study configuration requires %s' % req)
    known = ('boundary', 'n_values', 'pairs', 'c', 'epsilon', 'replications', 'eval_grid',
             'mise_grid', 'seed', 'family', 'name')
    unknown = sorted(k for k in d if k not in known)
    if unknown: raise DomainError('unrecognized study configuration keys: %s' % (unknown,))
    (f, ns) = (d.pop('boundary'), d.pop('n_values'))
    return StudyConfig(f, ns, sched, **d)
def study_config_to_json(cfg):
    '''
    study_config_to_json(cfg) yields the JSON-ready form of the StudyConfig cfg, which
      study_config_from_json reads back.
    '''
    d = to_jsonable({k: v for (k,v) in six.iteritems(cfg.params())
                     if k not in ('boundary', 'schedule', 'pairs')})
    d['boundary'] = cfg.boundary.to_json()
    d['schedule'] = {'custom': to_jsonable(cfg.pairs)} if cfg.schedule == 'custom' else cfg.schedule
    return d

####################################################################################################
# The replication plan

@calc('process')
def calc_process(n, c, seed):
    return ProcessConfig(n, c, seed)
@calc('sample')
def calc_sample(boundary, process):
    return sample_process(boundary, process)
@calc('extremes')
def calc_extremes(sample, k):
    return cell_extremes(sample, k)

replication_plan = plan(estimation_plan,
                        process=calc_process,
                        sample=calc_sample,
                        extremes=calc_extremes)

def _run_block(cfg, n, k, h, threads):
    f = cfg.boundary
    spec = BasisSpec(cfg.family, h)
    evals = np.asarray(cfg.eval_grid)
    mgrid = midpoint_grid(cfg.mise_grid)
    grid = np.concatenate([evals, mgrid])
    ne = len(evals)
    base = replication_plan(boundary=f, n=n, c=cfg.c, seed=replication_seed(cfg.seed, 0),
                            k=k, spec=spec, grid=grid)
    # the kernel rows do not depend on the seed; every replication shares them
    base['kernel']
    def _replicate(r):
        try:
            m = base.set(seed=replication_seed(cfg.seed, r))
            curve = m['curve']
            return (curve.raw, curve.corrected, curve.correction, m['extremes'].empty_cells)
        except Exception as e:
            six.raise_from(
                StudyError('replication %d at n = %d failed: %s' % (r, n, e), n=n, replication=r),
                e)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        results = list(ex.map(_replicate, range(cfg.replications)))
    raw = np.array([u[0] for u in results])
    cor = np.array([u[1] for u in results])
    zs = np.array([u[2] for u in results])
    empties = np.array([u[3] for u in results], dtype=float)
    nc = n * cfg.c
    # pointwise statistics
    truth = f(evals)
    target = approx_fn(spec, f, k, evals)
    b2 = kernel_bounds(spec, k, evals, 2)
    (raw_e, cor_e) = (raw[:, :ne], cor[:, :ne])
    (mraw, mcor) = (np.mean(raw_e, axis=0), np.mean(cor_e, axis=0))
    sys_bias = target - truth
    (stat_raw, stat_cor) = (mraw - target, mcor - target)
    if h >= 1:
        std = np.column_stack([standardized_errors(cor_e[:, i], truth[i], n, cfg.c, k, h)
                               for i in range(ne)])
    else:
        std = np.full(cor_e.shape, np.nan)
    centered = nc / b2 * (raw_e - mraw)
    ks_ok = cfg.replications >= 10 and h >= 1
    points = ps.pmap({
        'x':                  imm_array(evals),
        'f_true':             imm_array(truth),
        'f_n':                imm_array(target),
        'mean_raw':           imm_array(mraw),
        'mean_corrected':     imm_array(mcor),
        'var_raw':            imm_array(np.var(raw_e, axis=0, ddof=1)),
        'var_corrected':      imm_array(np.var(cor_e, axis=0, ddof=1)),
        'bias_raw':           imm_array(stat_raw + sys_bias),
        'bias_corrected':     imm_array(stat_cor + sys_bias),
        'stat_bias_raw':      imm_array(stat_raw),
        'stat_bias_corrected':imm_array(stat_cor),
        'sys_bias':           imm_array(sys_bias),
        'sys_bias_monitor':   imm_array(nc / b2 * sys_bias),
        'std_mean':           imm_array(np.mean(std, axis=0)),
        'std_var':            imm_array(np.var(std, axis=0, ddof=1)),
        'std_ks':             imm_array([ks_distance(std[:, i]) if ks_ok else np.nan
                                         for i in range(ne)]),
        'centered_ks':        imm_array([ks_distance(centered[:, i])
                                         if cfg.replications >= 10 else np.nan
                                         for i in range(ne)])})
    # integrated errors
    mtruth = f(mgrid)
    mise_raw = [_integrated_sq_error(mgrid, u, mtruth) for u in raw[:, ne:]]
    mise_cor = [_integrated_sq_error(mgrid, u, mtruth) for u in cor[:, ne:]]
    # kernel bounds at the evaluation points
    kb = ps.pmap({'x':      imm_array(evals),
                  'B1':     imm_array(kernel_bounds(spec, k, evals, 1)),
                  'B2':     imm_array(b2),
                  'B3':     imm_array(kernel_bounds(spec, k, evals, 3)),
                  'B_inf':  imm_array(kernel_bounds(spec, k, evals, 'inf'))})
    conds = schedule_conditions(n, k, h, cfg.schedule)
    return ps.pmap({
        'n': n, 'k': k, 'h': h, 'nc': nc,
        'mise_raw':        float(np.mean(mise_raw)),
        'mise_corrected':  float(np.mean(mise_cor)),
        'mise_corrected_sd': float(np.std(mise_cor, ddof=1)),
        'z_mean':          float(np.mean(zs)),
        'z_var':           float(np.var(zs, ddof=1)),
        'z_expected':      k / nc,
        'empty_cells':     float(np.mean(empties)),
        'conditions':      tuple((label, ratio, ok) for (label, ratio, ok) in conds),
        'points':          points,
        'standardized':    imm_array(std),
        'centered':        imm_array(centered),
        'kernel_bounds':   kb})

def run_study(cfg, threads=None, log=None):
    '''
    run_study(cfg) runs the Monte Carlo study described by the StudyConfig cfg and yields its
      StudyReport. For each n, every replication draws a sample with the seed cfg.seed + r, extracts
      the cell extremes, and evaluates the raw and corrected estimates on the evaluation grid and on
      the integrated-error grid; the replications are then aggregated into pointwise biases,
      variances, standardized residuals, and integrated squared errors.
    run_study(cfg, threads) caps the number of worker threads (default: the CPU count).
    run_study(cfg, threads, log) reports progress to the given work log.

    The report does not depend on the number of threads or on the order in which the n-values are
    run. A failing replication raises a StudyError that names n and the replication index.
    '''
    if not isinstance(cfg, StudyConfig): raise DomainError('run_study requires a StudyConfig')
    threads = None if threads is None else to_int(threads, 'threads', lower=1)
    t0 = time.time()
    blocks = {}
    for (n, (k, h)) in zip(cfg.n_values, cfg.ks):
        if log is not None: log('n = %d: k = %d, h = %d, %d replications' % (
            n, k, h, cfg.replications))
        check_schedule(n, k, h, cfg.schedule, log=None if log is None else log.indent())
        blocks[n] = _run_block(cfg, n, k, h, threads)
    return StudyReport(cfg, blocks, wall_time=time.time() - t0)

####################################################################################################
# Study reports

def _assertions(config, blocks):
    ns = sorted(blocks.keys())
    mises = [blocks[n]['mise_corrected'] for n in ns]
    res = {}
    if len(ns) >= 2:
        ok = all(b < a for (a,b) in zip(mises[:-1], mises[1:]))
        res['mise_decreasing'] = (ok, 'corrected MISE by n: %s' % (
            ', '.join('%d: %.3g' % (n, m) for (n, m) in zip(ns, mises)),))
    if len(ns) >= 3:
        if all(m > 0 for m in mises):
            slope = rate_regression(ns, mises)
            res['mise_rate'] = (-1.2 <= slope <= -0.4, 'MISE rate slope %.3f' % slope)
        else:
            res['mise_rate'] = (False, 'MISE values must be positive')
    if config.replications >= 100 and config.schedule in normality_presets:
        fails = []
        for n in ns:
            pts = blocks[n]['points']
            for (i, x) in enumerate(pts['x']):
                (ks, mu, var) = (pts['std_ks'][i], pts['std_mean'][i], pts['std_var'][i])
                if not (ks < 0.10 and abs(mu) < 0.15 and 0.7 <= var <= 1.3):
                    fails.append('n = %d, x = %g: ks %.3f, mean %.3f, var %.3f' % (
                        n, x, ks, mu, var))
        res['normality'] = (len(fails) == 0,
                            'all points normal' if not fails else '; '.join(fails))
    return ps.pmap(res)

@immutable
class StudyReport(object):
    '''
    StudyReport(config, blocks) holds the results of run_study: config is the StudyConfig and
    blocks is a map from each n to the aggregated results at that n (see run_study). The option
    wall_time (default: 0) records the run time in seconds; it is excluded from the report's digest,
    so that reports of identical studies have identical digests.

    The value assertions maps the name of each embedded acceptance check that applies to the
    study (mise_decreasing, mise_rate, normality) to a pair (passed, detail); passed is True when
    all of them pass.
    '''
    def __init__(self, config, blocks, wall_time=0):
        self.config = config
        self.blocks = blocks
        self.wall_time = wall_time
    @param
    def config(cfg):
        if not isinstance(cfg, StudyConfig): raise DomainError('config must be a StudyConfig')
        return cfg
    @param
    def blocks(b):
        if not is_map(b): raise DomainError('blocks must be a map from n to results')
        return ps.pmap({int(k): (v if isinstance(v, ps.PMap) else ps.pmap(v))
                        for (k,v) in six.iteritems(b)})
    @option(0)
    def wall_time(t):
        return to_real(t, 'wall_time', lower=0, strict=False)
    @require
    def blocks_match_config(config, blocks):
        if sorted(blocks.keys()) != list(config.n_values):
            raise DomainError('report blocks do not match the configured n_values')
        for b in six.itervalues(blocks):
            if b['standardized'].shape[0] != config.replications:
                raise DomainError('residual vectors must have one entry per replication')
        return True
    @value
    def n_values(config):
        return config.n_values
    @value
    def digest(config, blocks):
        return param_digest((study_config_to_json(config), blocks))
    @value
    def assertions(config, blocks):
        return _assertions(config, blocks)
    @value
    def passed(assertions):
        return all(ok for (ok, _) in six.itervalues(assertions))
    def summary_frame(self):
        '''
        report.summary_frame() yields a pandas DataFrame with one row per n of the report.
        '''
        cols = ['n', 'k', 'h', 'nc', 'mise_raw', 'mise_corrected', 'mise_corrected_sd', 'z_mean',
                'z_var', 'z_expected', 'empty_cells']
        rows = []
        for n in self.n_values:
            b = self.blocks[n]
            row = {c: b[c] for c in cols}
            row['conditions_ok'] = all(ok for (_, _, ok) in b['conditions'])
            rows.append(row)
        return pd.DataFrame(rows, columns=cols + ['conditions_ok'])
    def points_frame(self, n):
        '''
        report.points_frame(n) yields a pandas DataFrame of the pointwise statistics at n.
        '''
        pts = self.blocks[n]['points']
        order = ['x', 'f_true', 'f_n', 'mean_raw', 'mean_corrected', 'var_raw', 'var_corrected',
                 'bias_raw', 'bias_corrected', 'stat_bias_raw', 'stat_bias_corrected', 'sys_bias',
                 'sys_bias_monitor', 'std_mean', 'std_var', 'std_ks', 'centered_ks']
        return pd.DataFrame({c: np.asarray(pts[c]) for c in order}, columns=order)
    def residuals_frame(self, n):
        '''
        report.residuals_frame(n) yields a long-form pandas DataFrame of the residuals at n with the
          columns replication, x, standardized, and centered.
        '''
        b = self.blocks[n]
        (std, cen) = (b['standardized'], b['centered'])
        xs = np.asarray(b['points']['x'])
        (r, i) = np.meshgrid(np.arange(std.shape[0]), np.arange(len(xs)), indexing='ij')
        return pd.DataFrame({'replication': r.ravel(), 'x': xs[i.ravel()],
                             'standardized': std.ravel(), 'centered': cen.ravel()},
                            columns=['replication', 'x', 'standardized', 'centered'])
    def kernel_frame(self, n):
        '''
        report.kernel_frame(n) yields a pandas DataFrame of the kernel bounds at the evaluation
          points for n.
        '''
        kb = self.blocks[n]['kernel_bounds']
        order = ['x', 'B1', 'B2', 'B3', 'B_inf']
        return pd.DataFrame({c: np.asarray(kb[c]) for c in order}, columns=order)
    def to_json(self):
        '''
        report.to_json() yields the JSON-ready form of the full report.
        '''
        return {'config': study_config_to_json(self.config),
                'wall_time': self.wall_time,
                'digest': self.digest,
                'passed': self.passed,
                'assertions': {k: {'passed': ok, 'detail': d}
                               for (k, (ok, d)) in six.iteritems(self.assertions)},
                'blocks': {str(n): to_jsonable(self.blocks[n]) for n in self.n_values}}

def merge_reports(a, b):
    '''
    merge_reports(a, b) yields the StudyReport of the union of the n-values of the reports a and b,
      which must come from configurations that differ only in their n-values (and custom pairs).
      The merge is associative and commutative; wall times are added.
    '''
    (pa, pb) = (dict(a.config.params()), dict(b.config.params()))
    for key in ('n_values', 'pairs'): (pa.pop(key), pb.pop(key))
    if param_digest(pa) != param_digest(pb):
        raise DomainError('cannot merge reports of different study configurations')
    if set(a.n_values) & set(b.n_values):
        raise DomainError('cannot merge reports with overlapping n-values')
    blocks = dict(a.blocks)
    blocks.update(b.blocks)
    ns = sorted(blocks.keys())
    pairs = None
    if a.config.schedule == 'custom':
        pairs = [(blocks[n]['k'], blocks[n]['h']) for n in ns]
    cfg = a.config.copy(n_values=ns, pairs=pairs)
    return StudyReport(cfg, blocks, wall_time=a.wall_time + b.wall_time)

def save_report(report, out_dir, command=None):
    '''
    save_report(report, out_dir) writes the StudyReport to the directory {out_dir}/{name}, where
      name is the study's name: report.json holds the full report, summary.csv the per-n summary,
      and the subdirectory {n} of each n holds points.csv, residuals.csv, and kernel_bounds.csv.
      The path of the study directory is returned.
    save_report(report, out_dir, command) echoes the given command in every file written.
    '''
    root = os.path.join(out_dir, report.config.name)
    write_json(os.path.join(root, 'report.json'), report.to_json(), command=command)
    write_csv(os.path.join(root, 'summary.csv'), report.summary_frame(), command=command)
    for n in report.n_values:
        ndir = os.path.join(root, str(n))
        write_csv(os.path.join(ndir, 'points.csv'), report.points_frame(n), command=command)
        write_csv(os.path.join(ndir, 'residuals.csv'), report.residuals_frame(n), command=command)
        write_csv(os.path.join(ndir, 'kernel_bounds.csv'), report.kernel_frame(n), command=command)
    return root
