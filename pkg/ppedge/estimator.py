####################################################################################################
# ppedge/estimator.py
# Projection estimators of the boundary from cell maxima, with the minima-based correction.

import numpy as np, pandas as pd
from .util import (DomainError, imm_array, to_int)
from .immutable import (immutable, param, option, value, require)
from .calculation import (calc, plan)
from .model import Partition
from .basis import (BasisSpec, basis_matrix, kernel_matrix)
from .sampler import CellExtremes

@immutable
class EstimateCurve(object):
    '''
    EstimateCurve holds the estimates of a boundary on a grid of x-values: raw is the projection
    estimate built from the cell maxima, corrected is the estimate after the minima correction,
    coeffs are the estimated coefficients (a_0 ... a_h), correction is the correction term (the
    mean of the cell minima), and row_sums are the kernel row averages (1/k) sum_r K(x_r, x) on the
    grid, so that corrected - raw = correction * row_sums.
    '''
    def __init__(self, grid, raw, corrected, coeffs, correction, row_sums, spec, k):
        self.grid = grid
        self.raw = raw
        self.corrected = corrected
        self.coeffs = coeffs
        self.correction = correction
        self.row_sums = row_sums
        self.spec = spec
        self.k = k
    @param
    def grid(g): return imm_array(np.reshape(g, -1), dtype=float)
    @param
    def raw(u): return imm_array(np.reshape(u, -1), dtype=float)
    @param
    def corrected(u): return imm_array(np.reshape(u, -1), dtype=float)
    @param
    def coeffs(u): return imm_array(np.reshape(u, -1), dtype=float)
    @param
    def row_sums(u): return imm_array(np.reshape(u, -1), dtype=float)
    @param
    def correction(z): return float(z)
    @param
    def spec(s):
        if not isinstance(s, BasisSpec): raise DomainError('spec must be a BasisSpec')
        return s
    @param
    def k(k): return to_int(k, 'k', lower=1)
    @require
    def aligned(grid, raw, corrected, row_sums):
        if not (len(grid) == len(raw) == len(corrected) == len(row_sums)):
            raise DomainError('grid, raw, corrected, and row_sums must have equal lengths')
        return True
    @require
    def coefficient_count(coeffs, spec):
        if len(coeffs) != spec.size:
            raise DomainError('expected %d coefficients; got %d' % (spec.size, len(coeffs)))
        return True
    @require
    def correction_identity(raw, corrected, correction, row_sums):
        gap = corrected - raw - correction * row_sums
        return len(gap) == 0 or np.max(np.abs(gap)) <= 1e-12 * max(1.0, np.max(np.abs(corrected)))
    @value
    def correction_curve(raw, corrected):
        return imm_array(corrected - raw)

####################################################################################################
# The estimation plan

@calc(None)
def check_grid(grid):
    '''
    check_grid requires that the evaluation grid be a 1D vector of x-values in [0,1].
    '''
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1:
        raise DomainError('the evaluation grid must be a 1D vector')
    if np.any(~np.isfinite(g)) or np.any(g < 0) or np.any(g > 1):
        raise DomainError('the evaluation grid must lie in [0,1]')
@calc('kernel')
def calc_kernel(spec, k, grid):
    '''
    kernel is the (len(grid) x k) matrix K(grid[a], x_r) at the cell midpoints x_r.
    '''
    return imm_array(kernel_matrix(spec, grid, Partition(k).midpoints))
@calc('row_sums')
def calc_row_sums(kernel, k):
    return imm_array(np.sum(kernel, axis=1) / k)
@calc('coeffs')
def calc_coeffs(extremes, spec, k):
    _check_extremes(extremes, k)
    return imm_array(estimate_coeffs(extremes, spec))
@calc('raw')
def calc_raw(kernel, extremes, k):
    _check_extremes(extremes, k)
    return imm_array(kernel.dot(extremes.x_max) / k)
@calc('correction')
def calc_correction(extremes):
    return correction_term(extremes)
@calc('corrected')
def calc_corrected(raw, row_sums, correction):
    return imm_array(raw + correction * row_sums)
@calc('curve')
def calc_curve(grid, raw, corrected, coeffs, correction, row_sums, spec, k):
    return EstimateCurve(grid, raw, corrected, coeffs, correction, row_sums, spec, k)

estimation_plan = plan(check_grid=check_grid,
                       kernel=calc_kernel,
                       row_sums=calc_row_sums,
                       coeffs=calc_coeffs,
                       raw=calc_raw,
                       correction=calc_correction,
                       corrected=calc_corrected,
                       curve=calc_curve)

def _check_extremes(extremes, k):
    if not isinstance(extremes, CellExtremes):
        raise DomainError('estimation requires a CellExtremes object')
    if extremes.k != k:
        raise DomainError('cell extremes have k = %d but the estimate uses k = %d' % (extremes.k, k))
    return extremes
def _grid(x):
    return np.reshape(np.asarray(x, dtype=float), -1)

####################################################################################################
# Estimators

def estimate_coeffs(ext, spec):
    '''
    estimate_coeffs(ext, spec) yields the vector of estimated coefficients
      a_i = (1/k) sum_r e_i(x_r) X*_r, for i = 0 ... h, from the cell maxima X*_r of the CellExtremes
      object ext.
    '''
    return basis_matrix(spec, ext.midpoints).T.dot(ext.x_max) / ext.k
def estimate_raw(ext, spec, x):
    '''
    estimate_raw(ext, spec, x) yields the projection estimate (1/k) sum_r K(x_r, x) X*_r at x, which
      may be a number or a vector.
    '''
    res = kernel_matrix(spec, _grid(x), ext.midpoints).dot(ext.x_max) / ext.k
    return float(res[0]) if np.ndim(x) == 0 else res
def estimate_series(ext, spec, x):
    '''
    estimate_series(ext, spec, x) yields sum_i a_i e_i(x) using the coefficients of estimate_coeffs;
      it agrees with estimate_raw(ext, spec, x).
    '''
    res = basis_matrix(spec, _grid(x)).dot(estimate_coeffs(ext, spec))
    return float(res[0]) if np.ndim(x) == 0 else res
def correction_term(ext):
    '''
    correction_term(ext) yields the mean of the cell minima Z*_r of the CellExtremes object ext.
    '''
    return float(np.mean(ext.y_min))
def estimate_corrected(ext, spec, x):
    '''
    estimate_corrected(ext, spec, x) yields the corrected estimate
      (1/k) sum_r K(x_r, x) (X*_r + Z), where Z = correction_term(ext).
    '''
    kern = kernel_matrix(spec, _grid(x), ext.midpoints)
    res = kern.dot(ext.x_max + correction_term(ext)) / ext.k
    return float(res[0]) if np.ndim(x) == 0 else res
def estimate_curve(ext, spec, grid):
    '''
    estimate_curve(ext, spec, grid) yields the EstimateCurve of the raw and corrected estimates on
      the given grid; the kernel rows and their sums are computed once and shared by both.
    '''
    return estimation_plan(extremes=ext, spec=spec, k=ext.k, grid=_grid(grid))['curve']

####################################################################################################
# Tabular forms

def curve_to_frame(curve, boundary=None, corrected=True):
    '''
    curve_to_frame(curve) yields a pandas DataFrame with the columns x, f_hat, and f_tilde.
    curve_to_frame(curve, boundary) adds the column f_true, the boundary evaluated on the grid.
    curve_to_frame(curve, boundary, False) omits the f_tilde column.
    '''
    cols = [('x', np.asarray(curve.grid))]
    if boundary is not None: cols.append(('f_true', np.asarray(boundary(curve.grid))))
    cols.append(('f_hat', np.asarray(curve.raw)))
    if corrected: cols.append(('f_tilde', np.asarray(curve.corrected)))
    return pd.DataFrame(dict(cols), columns=[c[0] for c in cols])
def coeffs_to_frame(curve):
    '''
    coeffs_to_frame(curve) yields a pandas DataFrame with the columns i and a_hat.
    '''
    return pd.DataFrame({'i': np.arange(len(curve.coeffs)), 'a_hat': np.asarray(curve.coeffs)})
