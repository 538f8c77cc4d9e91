####################################################################################################
# ppedge/test/lazy_interval.py
# Usage example: an immutable interval type and a lazy plan that counts points per cell.

import numpy as np
import ppedge

# every calculation of a width or of the cells is recorded here
width_calls = []
cell_runs = []

@ppedge.immutable
class LazyInterval(object):
    '''
    LazyInterval(lo, hi) is a closed interval [lo, hi] with the lazy values width and midpoint.
    '''
    def __init__(self, lo, hi=None):
        if isinstance(lo, tuple) and hi is None:
            (lo, hi) = lo
        self.lo = lo
        self.hi = hi

    @ppedge.param
    def lo(x):
        return float(x)
    @ppedge.option(1.0)
    def hi(x):
        return float(x) if x is not None else 1.0

    @ppedge.require
    def ordered(lo, hi):
        return lo <= hi

    @ppedge.value
    def width(lo, hi):
        width_calls.append((lo, hi))
        return hi - lo
    @ppedge.value
    def midpoint(lo, width):
        return lo + width / 2.0

    def __repr__(self):
        return '[%.3f, %.3f]' % (self.lo, self.hi)


# The cell-count plan: given points and a cell count k, compute the cell of each point and then
# the number of points in each cell.
@ppedge.calc(None)
def check_cell_count(k):
    if k < 1: raise ValueError('k must be positive')

@ppedge.calc('cells')
def calc_cells(points, k):
    cell_runs.append(k)
    return np.minimum(np.floor(np.asarray(points) * k), k - 1).astype(int)

@ppedge.calc('counts')
def calc_counts(cells, k):
    return np.bincount(cells, minlength=k)

cell_count_plan = ppedge.plan(check=check_cell_count, cells=calc_cells, counts=calc_counts)
