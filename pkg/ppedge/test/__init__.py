####################################################################################################
# ppedge/test/__init__.py
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
The ppedge.test test package contains tests for the ppedge library as well as small examples of
the library's usage (see lazy_interval and disc_cloud). The tests may be run with
  python -m unittest ppedge.test
The slow Monte Carlo tests (see constant_runs) are skipped unless PPEDGE_SLOW_TESTS=1 is set.
'''

from .test_util      import TestUtil
from .test_machinery import TestMachinery
from .test_model     import TestModel
from .test_sampler   import TestSampler
from .test_basis     import TestBasis
from .test_estimator import TestEstimator
from .test_harness   import TestHarness
from .test_cmdline   import TestCmdline
