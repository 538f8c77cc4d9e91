####################################################################################################
# ppedge/__init__.py
#
# This source-code file is part of the ppedge library.
#
# The ppedge library is free software: you can redistribute it and/or modify it under the terms of
# the GNU General Public License as published by the Free Software Foundation, either version 3 of
# the License, or (at your option) any later version.
#
# This program is distributed in the hope that it will be useful, but WITHOUT ANY WARRANTY; without
# even the implied warranty of  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the GNU
# General Public License for more details.
#
# You should have received a copy of the GNU General Public License along with this program.  If
# not, see <http://www.gnu.org/licenses/>.

'''
The ppedge library estimates the upper boundary of the support of a planar Poisson point process
from the sample points that fall under it. The support is the hypograph {(x,y) : 0 <= x <= 1,
0 <= y <= f(x)} of a positive, periodic boundary function f; the observed process is the
superposition of n independent Poisson processes of intensity c on that support.

The estimate works in three steps:
  * the interval [0,1] is split into k equal cells and, for each cell, the largest y-coordinate of
    the points in the cell (the cell maximum X*) is extracted, along with the smallest (Z*);
  * the cell maxima are projected onto the first h + 1 functions of an orthonormal basis (the
    trigonometric basis by default, or the Haar system), which amounts to smoothing them with the
    basis's Dirichlet kernel;
  * the systematic downward bias of the cell maxima, which is of order k/(nc), is corrected by
    adding the mean of the cell minima to every cell maximum before projecting.

The library's pieces are organized as follows:
  * ppedge.model: boundary functions (Constant, Sinusoid, TableInterpolated), the ProcessConfig of
    the superposed process, cell partitions, point samples, and the polar transform used for
    star-shaped sets.
  * ppedge.sampler: simulation of the process, per-cell extremes, and their exact laws.
  * ppedge.basis: the orthonormal bases, their Dirichlet kernels, kernel-row norms, and the
    coefficients of a boundary function.
  * ppedge.estimator: the raw and corrected estimators and the estimation plan that computes them.
  * ppedge.harness: schedules for (k, h) as functions of n, Monte Carlo studies, their statistics,
    and their reports.
  * ppedge.cmdline: the ppedge command-line interface.

Immutable data-structures (see ppedge.immutable) and lazy calculation plans (see
ppedge.calculation) are used throughout: every configuration and result object is an @immutable
class whose parameters are validated on construction, and estimates are computed by plans whose
intermediate results (such as the kernel matrix) are cached and shared.
'''

from .util        import (DomainError, NumericError, StudyError,
                          is_str, is_int, is_real, is_map, is_pmap, is_set, is_vector,
                          to_real, to_int, imm_array, qhash, digest, merge,
                          write_csv, read_csv, to_jsonable, write_json, read_json)
from .immutable   import (immutable, require, value, param, option, is_imm, is_imm_type, imm_copy,
                          imm_persist, imm_transient, imm_params, imm_values, imm_is_persistent)
from .calculation import (calc,    plan,    imap,
                          Calc,    Plan,    IMap,
                          is_calc, is_plan, is_imap)
from .model       import (BoundaryFunction, Constant, Sinusoid, TableInterpolated,
                          boundary_variants, is_boundary, boundary_from_json, parse_boundary,
                          eval_boundary, boundary_bounds, area_under, load_knots,
                          ProcessConfig, Partition, cell_measures, PointSample,
                          polar_transform, inverse_polar)
from .sampler     import (replication_seed, sample_process, CellExtremes, cell_extremes,
                          extreme_cdf, extreme_moments, minimum_moments,
                          sample_to_frame, sample_from_frame, extremes_to_frame)
from .basis       import (BasisSpec, eval_basis, basis_matrix, dirichlet_kernel, kernel_matrix,
                          kernel_bounds, b1_ceiling, b2_reference, sine_ratio, sine_ratio_bound,
                          coefficient, coefficients, clear_coefficient_cache, partial_sum,
                          approx_fn)
from .estimator   import (EstimateCurve, estimation_plan, estimate_coeffs, estimate_raw,
                          estimate_series, correction_term, estimate_corrected, estimate_curve,
                          curve_to_frame, coeffs_to_frame)
from .harness     import (ScheduleWarning, schedule_presets, schedule, schedule_conditions,
                          check_schedule, midpoint_grid, mise, standardized_errors, ks_distance,
                          rate_regression, verify_kernel_bounds, kernel_diag_frame, StudyConfig,
                          study_config_from_json, study_config_to_json, replication_plan,
                          run_study, StudyReport, merge_reports, save_report)
from .cmdline     import (CommandLineParser, WorkLog, worklog, main)

__version__ = '0.1.0'
description = 'Boundary estimation for the support of planar Poisson point processes'
