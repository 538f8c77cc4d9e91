####################################################################################################
# ppedge/test/test_sampler.py
# Tests of the ppedge.sampler module.

import unittest
import numpy as np
from scipy import stats
import ppedge
from .constant_runs import constant_runs

class TestSampler(unittest.TestCase):
    '''
    The TestSampler class tests the point-process sampler, the cell extremes, and their exact laws.
    '''
    def test_replication_seed(self):
        '''
        test_replication_seed ensures that replication seeds are offsets of the base seed that wrap
        around at 2^64.
        '''
        self.assertEqual(ppedge.replication_seed(5, 3), 8)
        self.assertEqual(ppedge.replication_seed(0, 0), 0)
        self.assertEqual(ppedge.replication_seed(2**64 - 1, 1), 0)

    def test_sample_process(self):
        '''
        test_sample_process ensures that samples are deterministic functions of the seed, lie under
        the boundary, and have the expected number of points.
        '''
        f = ppedge.Sinusoid(1.0, 0.5)
        cfg = ppedge.ProcessConfig(1000, 2.0, seed=11)
        s1 = ppedge.sample_process(f, cfg)
        s2 = ppedge.sample_process(f, cfg)
        s3 = ppedge.sample_process(f, cfg.copy(seed=12))
        self.assertTrue(np.array_equal(s1.points, s2.points))
        self.assertFalse(s1.count == s3.count and np.array_equal(s1.points, s3.points))
        self.assertIs(s1.config, cfg)
        self.assertIs(s1.boundary, f)
        self.assertTrue(np.all(s1.y <= f(s1.x)))
        self.assertTrue(np.all((s1.x >= 0) & (s1.x <= 1)))
        # the count is Poisson with mean nc * area = 2000
        self.assertLess(abs(s1.count - 2000), 5 * np.sqrt(2000))
        with self.assertRaises(ppedge.DomainError): ppedge.sample_process(f, 2000)
        with self.assertRaises(ppedge.DomainError): ppedge.sample_process(lambda x: 1, cfg)

    def test_cell_extremes(self):
        '''
        test_cell_extremes ensures that the per-cell maxima, minima, and counts are extracted
        correctly, including for empty cells and for points on cell edges.
        '''
        s = ppedge.PointSample([(0.1, 0.5), (0.2, 0.9), (0.6, 0.3), (0.5, 0.7), (1.0, 0.4)])
        e = ppedge.cell_extremes(s, 2)
        self.assertEqual(e.k, 2)
        self.assertEqual(e.count.tolist(), [2, 3])
        self.assertEqual(e.x_max.tolist(), [0.9, 0.7])
        self.assertEqual(e.y_min.tolist(), [0.5, 0.3])
        self.assertEqual(e.empty_cells, 0)
        e = ppedge.cell_extremes(s, ppedge.Partition(4))
        self.assertEqual(e.count.tolist(), [2, 0, 2, 1])
        self.assertEqual(e.x_max.tolist(), [0.9, 0.0, 0.7, 0.4])
        self.assertEqual(e.y_min.tolist(), [0.5, 0.0, 0.3, 0.4])
        self.assertEqual(e.empty_cells, 1)
        self.assertEqual(e.midpoints.tolist(), [0.125, 0.375, 0.625, 0.875])
        e = ppedge.cell_extremes(ppedge.PointSample([]), 3)
        self.assertEqual(e.empty_cells, 3)
        self.assertEqual(e.x_max.tolist(), [0.0, 0.0, 0.0])
        # invalid extremes are rejected
        with self.assertRaises(ppedge.DomainError):
            ppedge.CellExtremes(2, [0.5, 0.5], [0.6, 0.1], [2, 2])
        with self.assertRaises(ppedge.DomainError):
            ppedge.CellExtremes(2, [0.5, 0.1], [0.5, 0.0], [2, 0])
        with self.assertRaises(ppedge.DomainError):
            ppedge.CellExtremes(2, [0.5, 0.5], [0.4, 0.5], [1, 2])
        with self.assertRaises(ppedge.DomainError):
            ppedge.CellExtremes(3, [0.5, 0.5], [0.4, 0.5], [2, 2])

    def test_exact_laws(self):
        '''
        test_exact_laws ensures that the closed-form laws of the cell extremes have the right
        values and agree with simulated cell maxima and minima.
        '''
        # P(X* <= x) = exp((nc/k)(x - k lambda))
        self.assertLess(abs(ppedge.extreme_cdf(0.5, 1.0, 100, 10, 0.1) - np.exp(-5)), 1e-15)
        self.assertEqual(ppedge.extreme_cdf(1.0, 1.0, 100, 10, 0.1), 1.0)
        cdf = ppedge.extreme_cdf(np.array([0.0, 0.9, 1.0]), 1.0, 100, 10, 0.1)
        self.assertTrue(np.all(np.diff(cdf) > 0))
        with self.assertRaises(ppedge.DomainError): ppedge.extreme_cdf(1.2, 1.0, 100, 10, 0.1)
        with self.assertRaises(ppedge.DomainError): ppedge.extreme_cdf(0.5, 1.0, 100, 10, 0.05)
        # with nc f / k = 20, X* has mean ~ f - k/nc and variance ~ (k/nc)^2
        (mu, var) = ppedge.extreme_moments(1.0, 2000, 100)
        self.assertLess(abs(mu - 0.95), 1e-6)
        self.assertLess(abs(var - 0.0025), 1e-6)
        (zmu, zvar) = ppedge.minimum_moments(1.0, 2000, 100)
        self.assertLess(abs(zmu - 0.05), 1e-6)
        self.assertLess(abs(zvar - 0.0025), 1e-6)
        # an almost surely empty cell has X* = Z* = 0
        self.assertLess(ppedge.extreme_moments(1.0, 1e-3, 100)[0], 1e-4)
        self.assertLess(ppedge.minimum_moments(1.0, 1e-3, 100)[0], 1e-4)
        # simulated cells agree with the laws
        cfg = ppedge.ProcessConfig(2000, 1.0, seed=3)
        e = ppedge.cell_extremes(ppedge.sample_process(ppedge.Constant(1.0), cfg), 100)
        self.assertLess(abs(np.mean(e.x_max) - mu), 0.025)
        self.assertLess(abs(np.mean(e.y_min) - zmu), 0.025)
        self.assertLess(abs(np.var(e.x_max) - var), 0.004)

    def test_cell_laws(self):
        '''
        test_cell_laws ensures that replicated cells of the constant boundary follow their laws: the
        counts are Poisson, each cell maximum matches extreme_cdf, and points are uniform within
        their cells.
        '''
        (nc, k, reps) = (1000, 10, 2000)
        runs = constant_runs(nc, k, reps, seed=500)
        x_max = np.array([e.x_max for e in runs])
        counts = np.concatenate([e.count for e in runs])
        # chi-square of the pooled cell counts against Poisson(nc/k)
        edges = np.array([-1, 80, 85, 90, 95, 100, 105, 110, 115, 120, np.inf])
        expected = len(counts) * np.diff(stats.poisson.cdf(edges, nc / k))
        observed = np.array([np.sum((counts > a) & (counts <= b))
                             for (a, b) in zip(edges[:-1], edges[1:])])
        self.assertEqual(np.sum(observed), len(counts))
        self.assertGreater(stats.chisquare(observed, expected).pvalue, 0.001)
        # Kolmogorov-Smirnov distance of each cell's maxima from the exact law
        cdf = lambda x: ppedge.extreme_cdf(x, 1.0, nc, k, 1.0 / k)
        for r in range(k):
            self.assertLess(stats.kstest(x_max[:, r], cdf).statistic, 0.05)
        # pooled moments within four standard errors of the exact ones
        (mu, var) = ppedge.extreme_moments(1.0, nc, k)
        n = x_max.size
        self.assertLess(abs(np.mean(x_max) - mu), 4 * np.sqrt(var / n))
        self.assertLess(abs(np.var(x_max) - var), 4 * np.sqrt(8.0 / n) * var)
        # given the counts, points are uniform on each cell
        f = ppedge.Constant(1.0)
        part = ppedge.Partition(k)
        (us, ys) = ([], [])
        for r in range(50):
            s = ppedge.sample_process(f, ppedge.ProcessConfig(nc, 1.0, seed=200 + r))
            us.append(k * s.x - part.cell_index(s.x))
            ys.append(s.y)
        self.assertGreater(stats.kstest(np.concatenate(us), 'uniform').pvalue, 0.001)
        self.assertGreater(stats.kstest(np.concatenate(ys), 'uniform').pvalue, 0.001)

    def test_frames(self):
        '''
        test_frames ensures that samples and cell extremes convert to and from data frames.
        '''
        s = ppedge.PointSample([(0.1, 0.5), (0.6, 0.3)])
        df = ppedge.sample_to_frame(s)
        self.assertEqual(list(df.columns), ['x', 'y'])
        back = ppedge.sample_from_frame(df)
        self.assertTrue(np.array_equal(back.points, s.points))
        ef = ppedge.extremes_to_frame(ppedge.cell_extremes(s, 2))
        self.assertEqual(sorted(ef.columns), ['count', 'r', 'x_max', 'x_r', 'y_min'])
        self.assertEqual(ef['r'].tolist(), [1, 2])
        self.assertEqual(ef['x_r'].tolist(), [0.25, 0.75])
