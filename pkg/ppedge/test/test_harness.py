####################################################################################################
# ppedge/test/test_harness.py
# Tests of the ppedge.harness module.

import unittest, os, tempfile, shutil, warnings
import numpy as np
import ppedge
from .constant_runs import slow

class TestHarness(unittest.TestCase):
    '''
    The TestHarness class tests the (k, h) schedules, the study statistics, the study
    configurations, and the Monte Carlo runner and its reports.
    '''
    def setUp(self):
        self.tmpdir = tempfile.mkdtemp(prefix='ppedge_test_')
    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def test_schedules(self):
        '''
        test_schedules ensures that the schedule presets yield the expected (k, h) pairs and that
        invalid requests are rejected.
        '''
        self.assertEqual(ppedge.schedule(1000, 'mise'), (100, 10))
        self.assertEqual(ppedge.schedule(4096, 'normality23'), (261, 2))
        (k, h) = ppedge.schedule(1024, 'normality45')
        self.assertIn(k, (823, 824))
        self.assertEqual(h, 10)
        self.assertEqual(ppedge.schedule(100, 'custom', pair=(20, 4)), (20, 4))
        # h is always even and at least 2 for the formula presets
        for n in (16, 100, 5000, 100000):
            for preset in ('normality45', 'normality23', 'mise'):
                (k, h) = ppedge.schedule(n, preset)
                self.assertEqual(h % 2, 0)
                self.assertGreaterEqual(h, 2)
                self.assertGreaterEqual(k, 1)
        with self.assertRaises(ppedge.DomainError): ppedge.schedule(10, 'mise')
        with self.assertRaises(ppedge.DomainError): ppedge.schedule(100, 'bogus')
        with self.assertRaises(ppedge.DomainError): ppedge.schedule(100, 'custom')

    def test_schedule_conditions(self):
        '''
        test_schedule_conditions ensures that violated growth conditions are detected and reported.
        '''
        conds = ppedge.schedule_conditions(1000, 100, 10, 'mise')
        self.assertEqual(len(conds), 2)
        self.assertTrue(all(ok for (_, _, ok) in conds))
        self.assertTrue(ppedge.check_schedule(1000, 100, 10, 'mise'))
        with self.assertWarns(ppedge.ScheduleWarning):
            self.assertFalse(ppedge.check_schedule(1000, 10, 20, 'custom'))
        msgs = []
        class _Log(object):
            def warn(self, msg): msgs.append(msg)
        self.assertFalse(ppedge.check_schedule(1000, 10, 20, 'custom', log=_Log()))
        self.assertEqual(len(msgs), 1)
        self.assertIn('h / k', msgs[0])

    def test_statistics(self):
        '''
        test_statistics ensures that the integrated errors, standardized errors, KS distances, and
        rate regressions are computed correctly.
        '''
        self.assertEqual(ppedge.midpoint_grid(4).tolist(), [0.125, 0.375, 0.625, 0.875])
        k = 16
        ext = ppedge.CellExtremes(k, np.ones(k), np.full(k, 0.5), np.full(k, 2))
        curve = ppedge.estimate_curve(ext, ppedge.BasisSpec('trig', 2), ppedge.midpoint_grid(64))
        f = ppedge.Constant(1.0)
        self.assertLess(ppedge.mise(curve, f, 'raw'), 1e-20)
        self.assertLess(abs(ppedge.mise(curve, f) - 0.25), 1e-12)
        with self.assertRaises(ppedge.DomainError): ppedge.mise(curve, f, 'bogus')
        short = ppedge.estimate_curve(ext, ppedge.BasisSpec('trig', 2), ppedge.midpoint_grid(16))
        with self.assertRaises(ppedge.DomainError): ppedge.mise(short, f)
        z = ppedge.standardized_errors([1.1, 0.9], 1.0, 100, 1.0, 4, 1)
        self.assertLess(np.max(np.abs(z - [5.0, -5.0])), 1e-9)
        rng = np.random.default_rng(1)
        self.assertLess(ppedge.ks_distance(rng.standard_normal(2000)), 0.05)
        self.assertGreater(ppedge.ks_distance(rng.uniform(0, 1, 2000)), 0.3)
        with self.assertRaises(ppedge.DomainError): ppedge.ks_distance(np.zeros(5))
        with self.assertRaises(ppedge.DomainError):
            ppedge.ks_distance(np.concatenate([np.zeros(20), [np.nan]]))
        ns = [10, 100, 1000, 10000]
        self.assertLess(abs(ppedge.rate_regression(ns, [3.0/n for n in ns]) + 1), 1e-12)
        with self.assertRaises(ppedge.DomainError): ppedge.rate_regression([10, 100], [1, 2])
        with self.assertRaises(ppedge.DomainError):
            ppedge.rate_regression([10, 100, 1000], [1, 0, 2])

    def test_ks_calibration(self):
        '''
        test_ks_calibration ensures that ks_distance stays below 0.0607, its 95% critical value for
        500 samples, in about 95% of samples drawn from the standard normal distribution.
        '''
        rng = np.random.default_rng(17)
        ds = np.array([ppedge.ks_distance(rng.standard_normal(500)) for _ in range(1000)])
        rate = np.mean(ds < 0.0607)
        self.assertGreaterEqual(rate, 0.925)
        self.assertLessEqual(rate, 0.975)

    def test_kernel_diagnostics(self):
        '''
        test_kernel_diagnostics ensures that the kernel-bound diagnostics hold along the MISE
        schedule and have the documented shape.
        '''
        df = ppedge.verify_kernel_bounds('mise', [1000, 8000], 64)
        self.assertEqual(df['k'].tolist(), [100, 400])
        self.assertEqual(df['h'].tolist(), [10, 20])
        self.assertTrue(bool(df['b1_ceiling_ok'].all()))
        self.assertTrue(bool(df['hypotheses_ok'].all()))
        self.assertTrue(np.all(df['b2_deviation_max'].values < 0.2))
        with self.assertWarns(ppedge.ScheduleWarning):
            df = ppedge.verify_kernel_bounds('custom', None, 16, pairs=[(8, 10)])
        self.assertFalse(bool(df['hypotheses_ok'][0]))
        self.assertFalse(bool(df['b1_ceiling_ok'][0]))
        spec = ppedge.BasisSpec('trig', 4)
        kd = ppedge.kernel_diag_frame(spec, 32, 16)
        self.assertEqual(len(kd), 64)
        self.assertEqual(sorted(set(kd['j'])), ['1', '2', '3', 'inf'])
        b2 = kd[kd['j'] == '2']['B_value'].values
        self.assertLess(np.max(np.abs(b2 - ppedge.b2_reference(32, 4))), 1e-9)

    def test_kernel_bound_trends(self):
        '''
        test_kernel_bound_trends ensures that, along the normality45 schedule, the B_2 deviation
        shrinks with n while the B_1 ratio stays within 20% of its first value and under the
        explicit ceiling.
        '''
        ns = [2**10, 2**12, 2**14, 2**16]
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ppedge.ScheduleWarning)
            df = ppedge.verify_kernel_bounds('normality45', ns, 64)
        self.assertEqual(df['n'].tolist(), ns)
        self.assertTrue(np.all(np.diff(df['h'].values) > 0))
        self.assertTrue(np.all(np.diff(df['b2_deviation_max'].values) < 0))
        b1 = df['b1_ratio_max'].values
        self.assertTrue(np.all(b1 <= 1.2 * b1[0]))
        self.assertTrue(bool(df['b1_ceiling_ok'].all()))

    def test_study_config(self):
        '''
        test_study_config ensures that study configurations validate their parameters and read and
        write their JSON forms.
        '''
        f = ppedge.Sinusoid(1.0, 0.3)
        cfg = ppedge.StudyConfig(f, [256, 1024], 'mise')
        self.assertEqual(cfg.ks, ((40, 6), (102, 10)))
        self.assertEqual((cfg.c, cfg.replications, cfg.mise_grid, cfg.seed), (1.0, 100, 512, 0))
        self.assertEqual(cfg.family, 'trig')
        for (args, kw) in ((([1024, 256], 'mise'), {}),
                           (([256], 'bogus'), {}),
                           (([256], 'mise'), {'replications': 1}),
                           (([256], 'mise'), {'mise_grid': 32}),
                           (([256], 'mise'), {'pairs': [(10, 2)]}),
                           (([256, 512], 'custom'), {'pairs': [(10, 2)]}),
                           (([256], 'custom'), {'pairs': [(10, 3)]}),
                           (([256], 'mise'), {'eval_grid': [0.5, 1.5]}),
                           (([256], 'mise'), {'name': 'a/b'})):
            with self.assertRaises(ppedge.DomainError): ppedge.StudyConfig(f, *args, **kw)
        obj = {'boundary': 'sinusoid:1,0.3', 'n_values': [100, 200],
               'schedule': {'custom': [[10, 2], [20, 4]]}, 'replications': 10}
        cfg = ppedge.study_config_from_json(obj)
        self.assertEqual(cfg.schedule, 'custom')
        self.assertEqual(cfg.ks, ((10, 2), (20, 4)))
        self.assertEqual(cfg.boundary.digest, f.digest)
        back = ppedge.study_config_from_json(ppedge.study_config_to_json(cfg))
        self.assertEqual(back.ks, cfg.ks)
        self.assertEqual(back.boundary.digest, cfg.boundary.digest)
        self.assertEqual(back.replications, 10)
        self.assertEqual(ppedge.study_config_from_json(obj, seed=4).seed, 4)
        with self.assertRaises(ppedge.DomainError):
            ppedge.study_config_from_json(dict(obj, bogus=1))
        with self.assertRaises(ppedge.DomainError):
            ppedge.study_config_from_json({'boundary': 'constant:1', 'n_values': [100]})
        with self.assertRaises(ppedge.DomainError):
            ppedge.study_config_from_json([1, 2])

    def test_run_study(self):
        '''
        test_run_study ensures that a small Monte Carlo study shows a decreasing MISE and an
        unbiased correction, that its report is independent of the thread count and of how the
        n-values are split, and that the report is saved to disk.
        '''
        kw = dict(replications=20, mise_grid=64, eval_grid=(0.25, 0.75), seed=7)
        f = ppedge.Sinusoid(1.0, 0.3)
        cfg = ppedge.StudyConfig(f, [256, 1024, 4096], 'mise', **kw)
        report = ppedge.run_study(cfg, threads=4)
        self.assertEqual(report.n_values, (256, 1024, 4096))
        self.assertTrue(report.assertions['mise_decreasing'][0])
        self.assertIn('mise_rate', report.assertions)
        self.assertNotIn('normality', report.assertions)
        b = report.blocks[4096]
        self.assertEqual((b['k'], b['h']), (256, 16))
        self.assertLess(abs(b['z_mean'] / b['z_expected'] - 1), 0.1)
        self.assertEqual(b['standardized'].shape, (20, 2))
        self.assertLess(report.blocks[4096]['mise_corrected'], report.blocks[256]['mise_raw'])
        # the report does not depend on the thread count
        self.assertEqual(ppedge.run_study(cfg, threads=1).digest, report.digest)
        # or on how the n-values are split between runs
        r1 = ppedge.run_study(ppedge.StudyConfig(f, [256], 'mise', **kw))
        r2 = ppedge.run_study(ppedge.StudyConfig(f, [1024, 4096], 'mise', **kw))
        merged = ppedge.merge_reports(r2, r1)
        self.assertEqual(merged.n_values, (256, 1024, 4096))
        self.assertEqual(merged.digest, report.digest)
        with self.assertRaises(ppedge.DomainError): ppedge.merge_reports(r1, r1)
        # saved reports
        root = ppedge.save_report(report, self.tmpdir, command='ppedge study')
        self.assertEqual(root, os.path.join(self.tmpdir, 'study'))
        for fl in ('report.json', 'summary.csv', '256/points.csv', '1024/residuals.csv',
                   '4096/kernel_bounds.csv'):
            self.assertTrue(os.path.isfile(os.path.join(root, fl)))
        js = ppedge.read_json(os.path.join(root, 'report.json'))
        self.assertEqual(js['digest'], report.digest)
        self.assertEqual(js['command'], 'ppedge study')
        self.assertEqual(sorted(js['blocks'].keys()), ['1024', '256', '4096'])
        summary = ppedge.read_csv(os.path.join(root, 'summary.csv'))
        self.assertEqual(summary['n'].tolist(), [256, 1024, 4096])
        self.assertEqual(len(report.residuals_frame(256)), 40)
        with self.assertRaises(ppedge.DomainError): ppedge.run_study({'n_values': [256]})

    @slow
    def test_normality(self):
        '''
        test_normality ensures that the standardized errors of the corrected estimate are close to
        standard normal along the normality45 schedule at n = 10^4 and c = 10.
        '''
        cfg = ppedge.StudyConfig(ppedge.Sinusoid(1.0, 0.5), [10000], 'normality45', c=10,
                                 replications=500, eval_grid=(0.25, 0.5), mise_grid=64, seed=11)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ppedge.ScheduleWarning)
            report = ppedge.run_study(cfg, threads=4)
        pts = report.blocks[10000]['points']
        for i in range(2):
            self.assertLess(pts['std_ks'][i], 0.10)
            self.assertLess(abs(pts['std_mean'][i]), 0.15)
            self.assertGreaterEqual(pts['std_var'][i], 0.7)
            self.assertLessEqual(pts['std_var'][i], 1.3)
        self.assertTrue(report.assertions['normality'][0])
