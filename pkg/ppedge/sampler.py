####################################################################################################
# ppedge/sampler.py
# Simulation of the superposed Poisson process, per-cell extremes, and their exact laws.

import numpy as np, pandas as pd
from scipy.stats import binned_statistic
from .util import (DomainError, to_real, to_int, imm_array)
from .immutable import (immutable, param, option, value, require)
from .model import (Partition, PointSample, ProcessConfig, is_boundary)

def replication_seed(seed_base, index):
    '''
    replication_seed(seed_base, index) yields the seed of the replication with the given index in
      a study whose base seed is seed_base; seeds wrap around modulo 2^64.
    '''
    return (int(seed_base) + int(index)) % (2**64)

def sample_process(f, cfg):
    '''
    sample_process(f, cfg) yields a PointSample drawn from the Poisson process with intensity
      cfg.total_intensity on the hypograph of the boundary function f. The total count in the box
      [0,1] x [0,M] (where M = sup f) is drawn first, points are placed uniformly in the box, and
      those above f are discarded. The sample is a deterministic function of cfg.seed.
    '''
    if not is_boundary(f): raise DomainError('sample_process requires a BoundaryFunction')
    if not isinstance(cfg, ProcessConfig): raise DomainError('sample_process requires a ProcessConfig')
    rng = np.random.default_rng(cfg.seed)
    top = f.bounds[1]
    count = rng.poisson(cfg.total_intensity * top)
    x = rng.uniform(0.0, 1.0, count)
    y = rng.uniform(0.0, top, count)
    keep = y <= f(x)
    return PointSample(np.column_stack([x[keep], y[keep]]), config=cfg, boundary=f)

@immutable
class CellExtremes(object):
    '''
    CellExtremes(k, x_max, y_min, count) holds, for each of the k cells of Partition(k), the
    maximum (x_max) and minimum (y_min) of the y-coordinates of the sample points in the cell and
    the number of such points (count). Empty cells have x_max = y_min = 0. The option config is the
    ProcessConfig of the generating sample, or None.
    '''
    def __init__(self, k, x_max, y_min, count, config=None):
        self.k = k
        self.x_max = x_max
        self.y_min = y_min
        self.count = count
        self.config = config
    @param
    def k(k):
        return to_int(k, 'k', lower=1)
    @param
    def x_max(u):
        return imm_array(u, dtype=float)
    @param
    def y_min(u):
        return imm_array(u, dtype=float)
    @param
    def count(u):
        u = np.asarray(u)
        if u.size and (np.any(u < 0) or np.any(u != np.round(u))):
            raise DomainError('cell counts must be non-negative integers')
        return imm_array(u, dtype=int)
    @option(None)
    def config(cfg):
        if cfg is not None and not isinstance(cfg, ProcessConfig):
            raise DomainError('config must be a ProcessConfig or None')
        return cfg
    @require
    def consistent_cells(k, x_max, y_min, count):
        if not (x_max.shape == y_min.shape == count.shape == (k,)):
            raise DomainError('cell vectors must all have length k = %d' % k)
        empty = count == 0
        if np.any(x_max[empty] != 0) or np.any(y_min[empty] != 0):
            raise DomainError('empty cells must have x_max = y_min = 0')
        full = ~empty
        if np.any(y_min[full] < 0) or np.any(y_min[full] > x_max[full]):
            raise DomainError('cell minima must satisfy 0 <= y_min <= x_max')
        single = count == 1
        if np.any(y_min[single] != x_max[single]):
            raise DomainError('cells with one point must have y_min = x_max')
        return True
    @value
    def partition(k):
        return Partition(k)
    @value
    def midpoints(partition):
        return partition.midpoints
    @value
    def empty_cells(count):
        return int(np.sum(count == 0))

def cell_extremes(s, p):
    '''
    cell_extremes(s, p) yields the CellExtremes object of the PointSample s over the partition p
      (a Partition or an integer k). Cells are the half-open intervals [(r-1)/k, r/k) except the
      last, which also holds x = 1.
    '''
    p = p if isinstance(p, Partition) else Partition(p)
    k = p.k
    if s.count == 0:
        z = np.zeros(k)
        return CellExtremes(k, z, z, np.zeros(k, dtype=int), config=s.config)
    # bin on the cell index itself so that binning agrees with Partition.cell_index exactly
    pos = p.cell_index(s.x) + 0.5
    stat = lambda nm: binned_statistic(pos, s.y, statistic=nm, bins=k, range=(0, k))[0]
    count = stat('count')
    occupied = count > 0
    x_max = np.where(occupied, np.nan_to_num(stat('max')), 0.0)
    y_min = np.where(occupied, np.nan_to_num(stat('min')), 0.0)
    return CellExtremes(k, x_max, y_min, count.astype(int), config=s.config)

####################################################################################################
# Exact laws of the cell extremes

def _law_args(f_level, nc, k):
    return (to_real(f_level, 'f_level', lower=0),
            to_real(nc, 'nc', lower=0),
            to_int(k, 'k', lower=1))
def extreme_cdf(x, f_level, nc, k, lambda_cell):
    '''
    extreme_cdf(x, f_level, nc, k, lambda_cell) yields P(X* <= x) = exp((nc/k)(x - k lambda_cell))
      for the maximum X* of a cell of measure lambda_cell on which the boundary is at least
      f_level. The law is only given on [0, f_level]; a DomainError is raised for x outside of that
      interval and for a cell measure smaller than f_level/k. The argument x may be an array.
    '''
    (f_level, nc, k) = _law_args(f_level, nc, k)
    lambda_cell = to_real(lambda_cell, 'lambda_cell', lower=0)
    if lambda_cell * k < f_level * (1 - 1e-12):
        raise DomainError('lambda_cell (%s) is smaller than f_level/k (%s)' % (
            lambda_cell, f_level/k))
    xs = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xs)) or np.any(xs < 0) or np.any(xs > f_level):
        raise DomainError('extreme_cdf is defined on [0, %s] only' % (f_level,))
    res = np.minimum(np.exp(nc / k * (xs - k*lambda_cell)), 1.0)
    return float(res) if np.ndim(x) == 0 else res
def extreme_moments(f_level, nc, k):
    '''
    extreme_moments(f_level, nc, k) yields the exact (mean, variance) of the maximum X* of a cell
      of Partition(k) on which the boundary is constant at f_level, for a process of total
      intensity nc; an empty cell contributes X* = 0.
    '''
    (f_level, nc, k) = _law_args(f_level, nc, k)
    kappa = k / nc
    mu = f_level / kappa
    q = -np.expm1(-mu)
    mean = f_level - kappa*q
    var = kappa**2 * (2*q - q**2 - 2*mu*np.exp(-mu))
    return (float(mean), float(max(var, 0.0)))
def minimum_moments(f_level, nc, k):
    '''
    minimum_moments(f_level, nc, k) yields the exact (mean, variance) of the minimum Z* of the
      y-coordinates in a cell of Partition(k) on which the boundary is constant at f_level; an
      empty cell contributes Z* = 0. As nc f_level / k grows, the mean tends to k/nc and the
      variance to (k/nc)^2.
    '''
    (f_level, nc, k) = _law_args(f_level, nc, k)
    kappa = k / nc
    mu = f_level / kappa
    e = np.exp(-mu)
    mean = kappa*(-np.expm1(-mu)) - f_level*e
    second = 2*kappa**2 * (1 - e*(1 + mu)) - f_level**2 * e
    return (float(mean), float(max(second - mean**2, 0.0)))

####################################################################################################
# Tabular forms

def sample_to_frame(s):
    '''
    sample_to_frame(s) yields a pandas DataFrame with the columns x and y of the PointSample s.
    '''
    return pd.DataFrame({'x': np.asarray(s.x), 'y': np.asarray(s.y)})
def sample_from_frame(df, config=None):
    '''
    sample_from_frame(df) yields the PointSample of the x and y columns of the DataFrame df.
    '''
    pts = np.column_stack([df['x'].values.astype(float), df['y'].values.astype(float)])
    return PointSample(pts, config=config)
def extremes_to_frame(ext):
    '''
    extremes_to_frame(ext) yields a pandas DataFrame with the columns r, x_r, count, x_max, and
      y_min of the CellExtremes object ext; r is 1-based.
    '''
    return pd.DataFrame({'r':     np.arange(1, ext.k + 1),
                         'x_r':   np.asarray(ext.midpoints),
                         'count': np.asarray(ext.count),
                         'x_max': np.asarray(ext.x_max),
                         'y_min': np.asarray(ext.y_min)})
