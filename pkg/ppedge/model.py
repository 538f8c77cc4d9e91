####################################################################################################
# ppedge/model.py
# Domain types of the support model: boundary functions, process configurations, the cell
# partition, point samples, and the polar reduction of star-shaped sets.

import os, json
import numpy as np, pyrsistent as ps
import scipy.integrate as spint, scipy.interpolate as spinterp
from .util import (DomainError, NumericError, to_real, to_int, imm_array, is_str, is_map,
                   to_jsonable, read_csv)
from .util import digest as param_digest
from .immutable import (immutable, param, option, value, require)

# The tolerance used when a boundary's integrals are treated as exact ground truth.
default_tolerance = 1e-10

def _check_unit_interval(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        bad = x[~((x >= 0) & (x <= 1))]
        raise DomainError('boundary evaluated outside of [0,1]: %s' % (bad[:5].tolist(),))
    return x
def _quad(fn, a, b, tol, points=None):
    points = None if points is None or len(points) == 0 else points
    limit = 400 if points is None else max(400, 4*len(points))
    res = spint.quad(fn, a, b, epsabs=tol, epsrel=0, limit=limit, full_output=1, points=points)
    if len(res) > 3 or res[1] > tol:
        raise NumericError('quadrature on [%g, %g] did not reach tolerance %g (error estimate %g)'
                           % (a, b, tol, res[1]))
    return res[0]

####################################################################################################
# Boundary functions

class BoundaryFunction(object):
    '''
    BoundaryFunction is the base class of the boundary functions f whose hypograph
    {(x,y) : 0 <= x <= 1, 0 <= y <= f(x)} is the support of the point process. Every variant is an
    immutable type with the lazy values bounds (the pair (m, M) of the infimum and supremum of f on
    [0,1]), area (the integral of f over [0,1]), and digest (a stable hash of its parameters).

    Calling a boundary function f(x) evaluates it at x, which may be a number or an array; a
    DomainError is raised when any x lies outside [0,1].
    '''
    variant = None
    def __call__(self, x):
        xs = _check_unit_interval(x)
        ys = self._evaluate(xs)
        return float(ys) if np.ndim(x) == 0 else ys
    def _evaluate(self, x):
        raise NotImplementedError('BoundaryFunction._evaluate is abstract')
    def cell_integrals(self, edges, tol=default_tolerance):
        '''
        f.cell_integrals(edges, tol) yields the vector of integrals of f over the consecutive
          intervals [edges[i], edges[i+1]], each accurate to within tol.
        '''
        raise NotImplementedError('BoundaryFunction.cell_integrals is abstract')
    def to_json(self):
        '''
        f.to_json() yields the JSON-ready description {'variant': name, 'params': {...}} of f.
        '''
        return {'variant': self.variant, 'params': to_jsonable(self.params())}

@immutable
class Constant(BoundaryFunction):
    '''
    Constant(level) is the boundary function that is equal to level everywhere on [0,1].
    '''
    variant = 'constant'
    def __init__(self, level):
        self.level = level
    @param
    def level(l):
        return to_real(l, 'level', lower=0)
    @value
    def bounds(level):
        return (level, level)
    @value
    def area(level):
        return level
    @value
    def digest(level):
        return param_digest(('constant', level))
    def _evaluate(self, x):
        return np.full(np.shape(x), self.level)
    def cell_integrals(self, edges, tol=default_tolerance):
        edges = np.asarray(edges, dtype=float)
        return self.level * np.diff(edges)

@immutable
class Sinusoid(BoundaryFunction):
    '''
    Sinusoid(base, amplitude, frequency, phase) is the boundary function
      f(x) = base + amplitude * sin(2 pi frequency x + phase),
    where frequency is a positive integer number of cycles over [0,1], so that f(0) = f(1). The
    amplitude must be smaller than the base in absolute value so that inf f > 0.
    '''
    variant = 'sinusoid'
    def __init__(self, base, amplitude, frequency=1, phase=0):
        self.base = base
        self.amplitude = amplitude
        self.frequency = frequency
        self.phase = phase
    @param
    def base(b):
        return to_real(b, 'base', lower=0)
    @param
    def amplitude(a):
        return to_real(a, 'amplitude')
    @option(1)
    def frequency(nu):
        return to_int(nu, 'frequency', lower=1)
    @option(0.0)
    def phase(ph):
        return to_real(ph, 'phase')
    @require
    def positive_infimum(base, amplitude):
        if abs(amplitude) >= base:
            raise DomainError('sinusoid amplitude (%s) must be smaller than its base (%s)' % (
                amplitude, base))
        return True
    @value
    def bounds(base, amplitude):
        return (base - abs(amplitude), base + abs(amplitude))
    @value
    def area(base):
        # whole cycles integrate to zero
        return base
    @value
    def digest(base, amplitude, frequency, phase):
        return param_digest(('sinusoid', base, amplitude, frequency, phase))
    def _evaluate(self, x):
        w = 2 * np.pi * self.frequency
        return self.base + self.amplitude * np.sin(w * x + self.phase)
    def cell_integrals(self, edges, tol=default_tolerance):
        edges = np.asarray(edges, dtype=float)
        (a, b) = (edges[:-1], edges[1:])
        w = 2 * np.pi * self.frequency
        osc = np.cos(w * b + self.phase) - np.cos(w * a + self.phase)
        return self.base * (b - a) - self.amplitude / w * osc

def load_knots(path):
    '''
    load_knots(path) yields the (q x 2) array of knots stored in the two-column CSV file at the
      given path; the columns must be named x and value.
    '''
    df = read_csv(path, columns=['x', 'value'])
    return np.column_stack([df['x'].values, df['value'].values]).astype(float)

@immutable
class TableInterpolated(BoundaryFunction):
    '''
    TableInterpolated(knots) is the boundary function that interpolates the given (x, value) knots
    with a periodic cubic spline over [0,1]. The knots are sorted by x; if the period is not closed
    by the knots themselves (both x=0 and x=1 present, with equal values), the first knot is
    repeated one period later. The interpolant is C^2 and satisfies f(0) = f(1).

    The knots may also be given as the path of a two-column CSV file (see load_knots).
    '''
    variant = 'table'
    def __init__(self, knots):
        self.knots = knots
    @param
    def knots(kn):
        if is_str(kn): kn = load_knots(kn)
        kn = np.array(kn, dtype=float)
        if kn.ndim != 2 or kn.shape[1] != 2:
            raise DomainError('knots must be a list of (x, value) pairs')
        if len(kn) < 3:
            raise DomainError('at least 3 knots are required; got %d' % len(kn))
        if not np.all(np.isfinite(kn)):
            raise DomainError('knots must be finite')
        kn = kn[np.argsort(kn[:,0], kind='stable')]
        if kn[0,0] < 0 or kn[-1,0] > 1:
            raise DomainError('knot x-values must lie in [0,1]')
        if np.any(np.diff(kn[:,0]) <= 0):
            raise DomainError('knot x-values must be distinct')
        if kn[0,0] == 0 and kn[-1,0] == 1 and kn[0,1] != kn[-1,1]:
            raise DomainError('knots at x=0 and x=1 must have equal values (f(0) = f(1))')
        return imm_array(kn)
    @value
    def spline(knots):
        (xs, ys) = (knots[:,0], knots[:,1])
        if xs[-1] - xs[0] < 1:
            (xs, ys) = (np.append(xs, xs[0] + 1), np.append(ys, ys[0]))
        return spinterp.CubicSpline(xs, ys, bc_type='periodic')
    @value
    def breakpoints(spline):
        # the spline's knots reduced into [0,1)
        return imm_array(np.unique(np.mod(spline.x, 1.0)))
    @value
    def bounds(spline, breakpoints):
        roots = np.asarray(spline.derivative().roots(extrapolate=False), dtype=float)
        roots = roots[np.isfinite(roots)]
        pts = np.concatenate([np.linspace(0, 1, 4097), breakpoints, np.mod(roots, 1.0)])
        ys = spline(pts)
        return (float(np.min(ys)), float(np.max(ys)))
    @require
    def positive_infimum(bounds):
        if bounds[0] <= 0:
            raise DomainError('interpolated boundary must be positive; its infimum is %s' % (
                bounds[0],))
        return True
    @value
    def area(spline, breakpoints):
        return _quad(spline, 0.0, 1.0, default_tolerance, points=breakpoints[breakpoints > 0])
    @value
    def digest(knots):
        return param_digest(('table', knots))
    def _evaluate(self, x):
        return self.spline(x)
    def cell_integrals(self, edges, tol=default_tolerance):
        edges = np.asarray(edges, dtype=float)
        bps = self.breakpoints
        res = np.empty(len(edges) - 1)
        for (r, (a, b)) in enumerate(zip(edges[:-1], edges[1:])):
            pts = bps[(bps > a) & (bps < b)]
            res[r] = _quad(self.spline, a, b, tol, points=pts)
        return res

boundary_variants = ps.pmap({'constant': Constant,
                             'sinusoid': Sinusoid,
                             'table':    TableInterpolated})
_preset_params = ps.pmap({'constant': ('level',),
                          'sinusoid': ('base', 'amplitude', 'frequency', 'phase')})

def is_boundary(f):
    '''
    is_boundary(f) yields True if f is a BoundaryFunction object and False otherwise.
    '''
    return isinstance(f, BoundaryFunction)
def boundary_from_json(obj):
    '''
    boundary_from_json(obj) yields the boundary function described by the JSON-ready map obj,
      which must have the form {'variant': name, 'params': {...}}; the table variant accepts
      either a 'knots' list of (x, value) pairs or a 'csv' path.
    '''
    if not is_map(obj) or 'variant' not in obj:
        raise DomainError('boundary description must be a map with a variant key')
    cls = boundary_variants.get(obj['variant'])
    if cls is None:
        raise DomainError('unrecognized boundary variant: %r' % (obj['variant'],))
    params = dict(obj.get('params', {}))
    if cls is TableInterpolated and 'csv' in params:
        params = {'knots': params['csv']}
    try: return cls(**params)
    except TypeError as e:
        raise DomainError('bad parameters for %s boundary: %s' % (obj['variant'], e))
def parse_boundary(arg):
    '''
    parse_boundary(arg) yields a BoundaryFunction from arg, which may be:
      * a BoundaryFunction, which is returned;
      * a map, interpreted by boundary_from_json;
      * a string holding a JSON object, or the path of a JSON file;
      * a preset string 'name:p1,p2,...', e.g. 'constant:1', 'sinusoid:1,0.5,1,0', or
        'table:knots.csv'.
    '''
    if is_boundary(arg): return arg
    elif is_map(arg): return boundary_from_json(arg)
    elif not is_str(arg):
        raise DomainError('cannot interpret boundary: %r' % (arg,))
    s = arg.strip()
    if s.startswith('{'):
        try: return boundary_from_json(json.loads(s))
        except ValueError as e:
            if isinstance(e, DomainError): raise
            raise DomainError('invalid boundary JSON: %s' % (e,))
    if ':' not in s and s.endswith('.json') and os.path.isfile(s):
        with open(s, 'r') as fl: return boundary_from_json(json.load(fl))
    (name, _, rest) = s.partition(':')
    name = name.strip().lower()
    if name == 'table':
        if not rest: raise DomainError('table boundary preset requires a CSV path')
        return TableInterpolated(rest.strip())
    if name not in _preset_params:
        raise DomainError('unrecognized boundary preset: %r' % (s,))
    try: vals = [float(u) for u in rest.split(',')] if rest.strip() else []
    except ValueError:
        raise DomainError('boundary preset parameters must be numbers: %r' % (s,))
    names = _preset_params[name]
    if len(vals) == 0 or len(vals) > len(names):
        raise DomainError('boundary preset %s takes 1 to %d parameters' % (name, len(names)))
    return boundary_variants[name](**dict(zip(names, vals)))

def eval_boundary(f, x):
    '''
    eval_boundary(f, x) yields f(x) for the boundary function f; x may be a real number or an array
      of numbers in [0,1]. A DomainError is raised for any x outside of [0,1].
    '''
    return f(x)
def boundary_bounds(f):
    '''
    boundary_bounds(f) yields the pair (m, M) of the infimum and supremum of f over [0,1].
    '''
    return f.bounds
def area_under(f, tol=default_tolerance):
    '''
    area_under(f) yields the integral of the boundary function f over [0,1].
    area_under(f, tol) computes the integral to the given absolute tolerance; closed forms are used
      for the constant and sinusoidal variants.
    '''
    to_real(tol, 'tol', lower=0)
    if tol == default_tolerance or not isinstance(f, TableInterpolated): return f.area
    bps = f.breakpoints
    return _quad(f.spline, 0.0, 1.0, tol, points=bps[bps > 0])

####################################################################################################
# Process configuration, partitions, and point samples

@immutable
class ProcessConfig(object):
    '''
    ProcessConfig(n, c) describes the superposition of n independent Poisson processes of
    intensity c on the support; total_intensity is the product n*c, the expected number of points
    per unit area. The option seed (default 0) is the unsigned 64-bit seed of the sampler.
    ProcessConfig(n, c, seed, total_intensity) additionally checks that the given total intensity
    agrees with n*c to within a relative tolerance of 1e-12.
    '''
    def __init__(self, n, c, seed=0, total_intensity=None):
        self.n = n
        self.c = c
        self.seed = seed
        self.total_intensity = self.n * self.c if total_intensity is None else total_intensity
    @param
    def n(n):
        return to_int(n, 'n', lower=1)
    @param
    def c(c):
        return to_real(c, 'c', lower=0)
    @option(0)
    def seed(s):
        s = to_int(s, 'seed', lower=0)
        if s >= 2**64: raise DomainError('seed must be a 64-bit unsigned integer; got %d' % s)
        return s
    @param
    def total_intensity(nc):
        return to_real(nc, 'total_intensity', lower=0)
    @require
    def consistent_intensity(n, c, total_intensity):
        if abs(total_intensity - n*c) > 1e-12 * n * c:
            raise DomainError('total_intensity (%s) must equal n*c (%s)' % (total_intensity, n*c))
        return True

@immutable
class Partition(object):
    '''
    Partition(k) is the partition of [0,1] into the k cells [(r-1)/k, r/k), r = 1..k, the last of
    which also contains x = 1. Its lazy values are edges (k+1 points), midpoints ((2r-1)/(2k)), and
    widths.
    '''
    def __init__(self, k):
        self.k = k
    @param
    def k(k):
        return to_int(k, 'k', lower=1)
    @value
    def edges(k):
        return imm_array(np.arange(k + 1) / float(k))
    @value
    def midpoints(k):
        return imm_array((2.0*np.arange(1, k + 1) - 1) / (2.0*k))
    @value
    def widths(edges):
        return imm_array(np.diff(edges))
    def cell_index(self, x):
        '''
        p.cell_index(x) yields the 0-based index of the cell of p that contains x.
        '''
        x = np.asarray(x, dtype=float)
        return np.minimum(np.floor(x * self.k), self.k - 1).astype(int)

def cell_measures(f, p, tol=default_tolerance):
    '''
    cell_measures(f, p) yields the vector of integrals of the boundary function f over the cells of
      the partition p (which may also be given as the integer k).
    cell_measures(f, p, tol) uses the given absolute tolerance per cell.
    '''
    p = p if isinstance(p, Partition) else Partition(p)
    to_real(tol, 'tol', lower=0)
    return imm_array(f.cell_integrals(p.edges, tol))

@immutable
class PointSample(object):
    '''
    PointSample(points) is an immutable (N x 2) array of sample points (x, y) with x in [0,1] and
    y >= 0. The options config (the ProcessConfig that generated the sample) and boundary (the
    generating BoundaryFunction, which, when given, is checked to lie above every point) default to
    None.
    '''
    def __init__(self, points, config=None, boundary=None):
        self.points = points
        self.config = config
        self.boundary = boundary
    @param
    def points(pts):
        pts = np.array(pts, dtype=float)
        if pts.size == 0: pts = np.zeros((0, 2))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DomainError('points must be an (N x 2) array of (x, y) pairs')
        if not np.all(np.isfinite(pts)):
            raise DomainError('point coordinates must be finite')
        if np.any(pts[:,0] < 0) or np.any(pts[:,0] > 1):
            raise DomainError('point x-coordinates must lie in [0,1]')
        if np.any(pts[:,1] < 0):
            raise DomainError('point y-coordinates must be non-negative')
        return imm_array(pts)
    @option(None)
    def config(cfg):
        if cfg is not None and not isinstance(cfg, ProcessConfig):
            raise DomainError('config must be a ProcessConfig or None')
        return cfg
    @option(None)
    def boundary(f):
        if f is not None and not is_boundary(f):
            raise DomainError('boundary must be a BoundaryFunction or None')
        return f
    @require
    def points_under_boundary(points, boundary):
        if boundary is None or len(points) == 0: return True
        if np.any(points[:,1] > boundary(points[:,0]) * (1 + 1e-12)):
            raise DomainError('sample contains points above the boundary')
        return True
    @value
    def x(points):
        return imm_array(points[:,0])
    @value
    def y(points):
        return imm_array(points[:,1])
    @value
    def count(points):
        return len(points)
    def __len__(self):
        return self.count

####################################################################################################
# Star-shaped sets

def _center(center):
    center = np.asarray(center, dtype=float).reshape(-1)
    if center.shape != (2,) or not np.all(np.isfinite(center)):
        raise DomainError('center must be a finite (u, v) pair')
    return center
def polar_transform(points, center):
    '''
    polar_transform(points, center) yields a PointSample of the (x, y) pairs that correspond to the
      given planar (u, v) points in polar coordinates about center: x is the angle of
      (u - u0, v - v0), in [0, 2 pi), divided by 2 pi and y is the distance to the center. Points
      that coincide with the center are dropped.
    '''
    c = _center(center)
    uv = np.array(points, dtype=float)
    if uv.size == 0: uv = np.zeros((0, 2))
    if uv.ndim != 2 or uv.shape[1] != 2:
        raise DomainError('points must be an (N x 2) array of (u, v) pairs')
    d = uv - c
    r = np.hypot(d[:,0], d[:,1])
    keep = r > 0
    (d, r) = (d[keep], r[keep])
    x = np.mod(np.arctan2(d[:,1], d[:,0]), 2*np.pi) / (2*np.pi)
    # rounding can put an angle just below 2 pi onto 1
    x[x >= 1] = 0.0
    return PointSample(np.column_stack([x, r]))
def inverse_polar(sample, center):
    '''
    inverse_polar(sample, center) yields the (N x 2) array of planar points (u0 + y cos 2 pi x,
      v0 + y sin 2 pi x) for the (x, y) points of the given PointSample or (N x 2) array.
    '''
    c = _center(center)
    pts = sample.points if isinstance(sample, PointSample) else np.asarray(sample, dtype=float)
    if pts.size == 0: return np.zeros((0, 2))
    (x, y) = (pts[:,0], pts[:,1])
    return np.column_stack([c[0] + y*np.cos(2*np.pi*x), c[1] + y*np.sin(2*np.pi*x)])
