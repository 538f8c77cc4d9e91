####################################################################################################
# ppedge/basis.py
# Orthonormal bases of L2[0,1], their Dirichlet kernels, kernel-row norms, and the deterministic
# approximation of a boundary function.

import threading
import numpy as np, pyrsistent as ps
import scipy.integrate as spint
from .util import (DomainError, NumericError, to_real, to_int, is_str)
from .immutable import (immutable, param, option, value, require)
from .model import (Partition, cell_measures, default_tolerance)

# The threshold on |sin(pi u)| below which the trigonometric kernel takes its diagonal value.
kernel_stability_threshold = 1e-9

_family_aliases = ps.pmap({'trig': 'trig', 'trigonometric': 'trig', 'fourier': 'trig',
                           'haar': 'haar'})

@immutable
class BasisSpec(object):
    '''
    BasisSpec(family, h) describes the truncated orthonormal basis e_0 ... e_h of L2[0,1] of the
    given family, which is either 'trig' (the trigonometric basis e_0 = 1,
    e_{2m-1} = sqrt(2) cos(2 m pi x), e_{2m} = sqrt(2) sin(2 m pi x); h must be even) or 'haar'
    (the L2-normalized Haar system in level order; h + 1 must be a power of 2).
    '''
    def __init__(self, family, h):
        self.family = family
        self.h = h
    @param
    def family(f):
        fam = _family_aliases.get(f.lower()) if is_str(f) else None
        if fam is None: raise DomainError('unrecognized basis family: %r' % (f,))
        return fam
    @param
    def h(h):
        return to_int(h, 'h', lower=0)
    @require
    def truncation_closes(family, h):
        if family == 'trig' and h % 2 != 0:
            raise DomainError('the trigonometric basis requires an even h; got %d' % h)
        if family == 'haar' and (h + 1) & h != 0:
            raise DomainError('the Haar basis requires h + 1 to be a power of 2; got h = %d' % h)
        return True
    @value
    def size(h):
        return h + 1

def _check_x(x, name='x'):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0) or np.any(x > 1):
        raise DomainError('%s must lie in [0,1]' % (name,))
    return x
def _check_index(spec, i):
    i = to_int(i, 'i', lower=0)
    if i > spec.h: raise DomainError('basis index %d exceeds the truncation order h = %d' % (i, spec.h))
    return i
def _haar_level(i):
    j = int(i).bit_length() - 1
    return (j, i - 2**j)
def _haar_cell(x, width_count):
    return np.minimum(np.floor(x * width_count), width_count - 1).astype(int)

def _eval_trig(i, x):
    if i == 0: return np.ones(np.shape(x))
    m = (i + 1) // 2
    fn = np.cos if i % 2 == 1 else np.sin
    return np.sqrt(2) * fn(2 * m * np.pi * x)
def _eval_haar(i, x):
    if i == 0: return np.ones(np.shape(x))
    (j, l) = _haar_level(i)
    scale = 2.0**j
    inside = _haar_cell(x, 2**j) == l
    sign = np.where(x * scale - l < 0.5, 1.0, -1.0)
    return np.where(inside, np.sqrt(scale) * sign, 0.0)

def eval_basis(spec, i, x):
    '''
    eval_basis(spec, i, x) yields e_i(x) for the basis described by the BasisSpec spec; x may be a
      number or an array in [0,1]. A DomainError is raised if i > spec.h.
    '''
    i = _check_index(spec, i)
    xs = _check_x(x)
    res = _eval_trig(i, xs) if spec.family == 'trig' else _eval_haar(i, xs)
    return float(res) if np.ndim(x) == 0 else res
def basis_matrix(spec, xs):
    '''
    basis_matrix(spec, xs) yields the (len(xs) x (h+1)) matrix whose (a, i) element is e_i(xs[a]).
    '''
    xs = np.reshape(_check_x(xs), -1)
    ev = _eval_trig if spec.family == 'trig' else _eval_haar
    res = np.empty((len(xs), spec.size))
    for i in range(spec.size): res[:, i] = ev(i, xs)
    return res

def _trig_kernel(h, d):
    u = d - np.round(d)
    s = np.sin(np.pi * u)
    small = np.abs(s) < kernel_stability_threshold
    with np.errstate(divide='ignore', invalid='ignore'):
        k = np.sin((1 + h) * np.pi * u) / np.where(small, 1.0, s)
    return np.where(small, 1.0 + h, k)
def _haar_kernel(h, x, y):
    w = h + 1
    return np.where(_haar_cell(x, w) == _haar_cell(y, w), float(w), 0.0)
def dirichlet_kernel(spec, x, y):
    '''
    dirichlet_kernel(spec, x, y) yields K(x, y) = sum_{i <= h} e_i(x) e_i(y), the Dirichlet kernel
      of the truncated basis. For the trigonometric family the closed form
      sin((1+h) pi u) / sin(pi u), with u = x - y reduced into [-1/2, 1/2], is used, and the
      diagonal value 1 + h is used wherever |sin(pi u)| is below kernel_stability_threshold. The
      arguments x and y may be arrays, which are broadcast together.
    '''
    (xs, ys) = (_check_x(x, 'x'), _check_x(y, 'y'))
    if spec.family == 'trig': res = _trig_kernel(spec.h, xs - ys)
    else:                     res = _haar_kernel(spec.h, xs, ys)
    return float(res) if np.ndim(res) == 0 else res
def kernel_matrix(spec, xs, ys):
    '''
    kernel_matrix(spec, xs, ys) yields the (len(xs) x len(ys)) matrix of K(xs[a], ys[b]).
    '''
    xs = np.reshape(_check_x(xs, 'xs'), (-1, 1))
    ys = np.reshape(_check_x(ys, 'ys'), (1, -1))
    if spec.family == 'trig': return _trig_kernel(spec.h, xs - ys)
    else:                     return _haar_kernel(spec.h, xs, ys)

####################################################################################################
# Kernel-row norms

def _norm_order(j):
    if is_str(j) and j.lower() in ('inf', 'infinity', 'max'): return np.inf
    if j == np.inf: return np.inf
    if j in (1, 2, 3): return int(j)
    raise DomainError('kernel bound order must be one of 1, 2, 3, inf; got %r' % (j,))
def kernel_bounds(spec, k, x, j):
    '''
    kernel_bounds(spec, k, x, j) yields B_j(x) = (sum_r |K(x_r, x)|^j)^(1/j), where the x_r are the
      midpoints of Partition(k); for j = inf, B_inf(x) = max_r |K(x_r, x)|. The argument j must be
      1, 2, 3, or inf, and x may be an array.
    '''
    order = _norm_order(j)
    p = k if isinstance(k, Partition) else Partition(k)
    rows = np.abs(kernel_matrix(spec, np.reshape(x, -1), p.midpoints))
    if order == np.inf: res = np.max(rows, axis=1)
    elif order == 1:    res = np.sum(rows, axis=1)
    else:               res = np.sum(rows**order, axis=1) ** (1.0 / order)
    return float(res[0]) if np.ndim(x) == 0 else res
def b1_ceiling(k, h):
    '''
    b1_ceiling(k, h) yields the explicit ceiling k (2 + ln(4 (h + 1))) on sup_x B_1(x) for the
      trigonometric family; it holds whenever k > 2 (h + 1).
    '''
    (k, h) = (to_int(k, 'k', lower=1), to_int(h, 'h', lower=0))
    return k * (2.0 + np.log(4.0 * (h + 1)))
def b2_reference(k, h):
    '''
    b2_reference(k, h) yields sqrt(k (1 + h)), the exact value of B_2(x) for the trigonometric
      family whenever h < k.
    '''
    (k, h) = (to_int(k, 'k', lower=1), to_int(h, 'h', lower=0))
    return np.sqrt(k * (1.0 + h))
def sine_ratio(p, u):
    '''
    sine_ratio(p, u) yields |sin(p u) / sin(u)|.
    '''
    u = np.asarray(u, dtype=float)
    return np.abs(np.sin(p * u) / np.sin(u))
def sine_ratio_bound(p, u, delta):
    '''
    sine_ratio_bound(p, u, delta) yields p 1[|u| <= delta] + (pi / (2|u|)) 1[delta <= |u| <= pi/2],
      an upper bound on sine_ratio(p, u) for 0 < |u| <= pi/2 and odd p.
    '''
    a = np.abs(np.asarray(u, dtype=float))
    near = np.where(a <= delta, float(p), 0.0)
    far = np.where((a >= delta) & (a <= np.pi/2), np.pi / (2*np.maximum(a, 1e-300)), 0.0)
    return near + far

####################################################################################################
# Coefficients of a boundary function

_coefficient_cache = {}
_coefficient_lock = threading.Lock()

def _segments(f):
    bps = getattr(f, 'breakpoints', None)
    if bps is None: return np.array([0.0, 1.0])
    return np.unique(np.concatenate([[0.0], bps, [1.0]]))
def _trig_coefficient(f, i, tol):
    m = (i + 1) // 2
    weight = 'cos' if i % 2 == 1 else 'sin'
    segs = _segments(f)
    seg_tol = tol / (len(segs) - 1)
    total = 0.0
    for (a, b) in zip(segs[:-1], segs[1:]):
        res = spint.quad(f, a, b, weight=weight, wvar=2*m*np.pi, epsabs=seg_tol, epsrel=0,
                         limit=200, full_output=1)
        if len(res) > 3 or res[1] > seg_tol:
            raise NumericError('quadrature of coefficient %d on [%g, %g] did not converge' % (
                i, a, b))
        total += res[0]
    return np.sqrt(2) * total
def _haar_coefficient(f, i, tol):
    (j, l) = _haar_level(i)
    w = 2.0**(-j)
    edges = np.array([l*w, (l + 0.5)*w, (l + 1)*w])
    (left, right) = f.cell_integrals(edges, tol / 2)
    return 2.0**(j / 2.0) * (left - right)
def coefficient(spec, f, i, tol=default_tolerance):
    '''
    coefficient(spec, f, i) yields a_i = int_0^1 e_i(t) f(t) dt for the boundary function f.
    coefficient(spec, f, i, tol) computes the integral to within the absolute tolerance tol.

    Coefficients are computed by adaptive quadrature and cached by basis family, index, boundary
    digest, and tolerance; the cache may be read from multiple threads.
    '''
    i = _check_index(spec, i)
    tol = to_real(tol, 'tol', lower=0)
    key = (spec.family, i, f.digest, tol)
    res = _coefficient_cache.get(key)
    if res is not None: return res
    if i == 0:                   res = float(f.cell_integrals([0.0, 1.0], tol)[0])
    elif spec.family == 'trig':  res = float(_trig_coefficient(f, i, tol))
    else:                        res = float(_haar_coefficient(f, i, tol))
    with _coefficient_lock:
        res = _coefficient_cache.setdefault(key, res)
    return res
def coefficients(spec, f, tol=default_tolerance):
    '''
    coefficients(spec, f) yields the vector (a_0 ... a_h) of the coefficients of f in spec.
    '''
    return np.array([coefficient(spec, f, i, tol) for i in range(spec.size)])
def clear_coefficient_cache():
    '''
    clear_coefficient_cache() empties the coefficient cache and yields the number of entries that
      were removed.
    '''
    with _coefficient_lock:
        n = len(_coefficient_cache)
        _coefficient_cache.clear()
    return n
def partial_sum(spec, f, x, tol=default_tolerance):
    '''
    partial_sum(spec, f, x) yields S(f)(x) = sum_{i <= h} a_i e_i(x), the truncated expansion of f.
    '''
    res = basis_matrix(spec, np.reshape(x, -1)).dot(coefficients(spec, f, tol))
    return float(res[0]) if np.ndim(x) == 0 else res
def approx_fn(spec, f, k, x, tol=default_tolerance):
    '''
    approx_fn(spec, f, k, x) yields f_n(x) = sum_r K(x_r, x) lambda_r, the deterministic
      approximation of f built from the cell measures lambda_r of Partition(k) (see cell_measures)
      and the kernel at the cell midpoints x_r. It is the noise-free target of the estimator.
    '''
    p = k if isinstance(k, Partition) else Partition(k)
    lam = cell_measures(f, p, tol)
    res = kernel_matrix(spec, np.reshape(x, -1), p.midpoints).dot(lam)
    return float(res[0]) if np.ndim(x) == 0 else res
