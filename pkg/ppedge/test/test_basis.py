####################################################################################################
# ppedge/test/test_basis.py
# Tests of the ppedge.basis module.

import unittest
import numpy as np
import ppedge

class TestBasis(unittest.TestCase):
    '''
    The TestBasis class tests the orthonormal bases, their Dirichlet kernels, the kernel-row norms,
    and the coefficients of boundary functions.
    '''
    def test_basis_spec(self):
        '''
        test_basis_spec ensures that basis descriptions validate their family and truncation order.
        '''
        self.assertEqual(ppedge.BasisSpec('fourier', 4).family, 'trig')
        self.assertEqual(ppedge.BasisSpec('Trigonometric', 0).size, 1)
        self.assertEqual(ppedge.BasisSpec('haar', 7).size, 8)
        for (fam, h) in (('trig', 3), ('haar', 4), ('haar', 6), ('bogus', 2), ('trig', -2)):
            with self.assertRaises(ppedge.DomainError): ppedge.BasisSpec(fam, h)

    def test_orthonormality(self):
        '''
        test_orthonormality ensures that both basis families are orthonormal, using the midpoint
        rule, which is exact for these functions on a fine enough grid.
        '''
        xs = (np.arange(1024) + 0.5) / 1024
        for spec in (ppedge.BasisSpec('trig', 8), ppedge.BasisSpec('haar', 7)):
            b = ppedge.basis_matrix(spec, xs)
            self.assertEqual(b.shape, (1024, spec.size))
            gram = b.T.dot(b) / len(xs)
            self.assertLess(np.max(np.abs(gram - np.eye(spec.size))), 1e-10)
        trig = ppedge.BasisSpec('trig', 4)
        self.assertLess(abs(ppedge.eval_basis(trig, 1, 0.0) - np.sqrt(2)), 1e-15)
        self.assertLess(abs(ppedge.eval_basis(trig, 2, 0.25) - np.sqrt(2)), 1e-15)
        self.assertLess(abs(ppedge.eval_basis(trig, 3, 0.25) + np.sqrt(2)), 1e-12)
        haar = ppedge.BasisSpec('haar', 3)
        self.assertEqual(ppedge.eval_basis(haar, 1, 0.25), 1.0)
        self.assertEqual(ppedge.eval_basis(haar, 1, 0.75), -1.0)
        self.assertEqual(ppedge.eval_basis(haar, 3, 0.25), 0.0)
        self.assertLess(abs(ppedge.eval_basis(haar, 3, 0.6) - np.sqrt(2)), 1e-15)
        with self.assertRaises(ppedge.DomainError): ppedge.eval_basis(trig, 5, 0.5)
        with self.assertRaises(ppedge.DomainError): ppedge.eval_basis(trig, 1, 1.5)

    def test_dirichlet_kernel(self):
        '''
        test_dirichlet_kernel ensures that the closed-form kernels agree with the sums of products
        of the basis functions, including on the diagonal.
        '''
        rng = np.random.default_rng(0)
        xs = np.concatenate([rng.uniform(0, 1, 40), [0.0, 0.5, 1.0]])
        ys = np.concatenate([rng.uniform(0, 1, 30), [0.0, 0.5, 1.0, xs[0]]])
        for spec in (ppedge.BasisSpec('trig', 10), ppedge.BasisSpec('haar', 15)):
            direct = ppedge.basis_matrix(spec, xs).dot(ppedge.basis_matrix(spec, ys).T)
            kern = ppedge.kernel_matrix(spec, xs, ys)
            self.assertEqual(kern.shape, (len(xs), len(ys)))
            self.assertLess(np.max(np.abs(kern - direct)), 1e-9)
            self.assertLess(abs(ppedge.dirichlet_kernel(spec, 0.3, 0.3) - spec.size), 1e-12)
        trig = ppedge.BasisSpec('trig', 10)
        # the kernel is periodic: x = 0 and x = 1 are the same point
        self.assertLess(abs(ppedge.dirichlet_kernel(trig, 0.0, 1.0) - 11), 1e-9)
        self.assertLess(abs(ppedge.dirichlet_kernel(trig, 0.2, 0.45) -
                            np.sin(11 * np.pi * 0.25) / np.sin(np.pi * 0.25)), 1e-12)

    def test_reproducing_property(self):
        '''
        test_reproducing_property ensures that integrating the kernel against a basis function
        reproduces that function, using the midpoint rule, which is exact here.
        '''
        ys = (np.arange(1024) + 0.5) / 1024
        xs = np.random.default_rng(4).uniform(0, 1, 25)
        for spec in (ppedge.BasisSpec('trig', 10), ppedge.BasisSpec('haar', 7)):
            kern = ppedge.kernel_matrix(spec, xs, ys)
            for i in range(spec.size):
                integral = kern.dot(ppedge.eval_basis(spec, i, ys)) / len(ys)
                self.assertLess(np.max(np.abs(integral - ppedge.eval_basis(spec, i, xs))), 1e-8)

    def test_kernel_bounds(self):
        '''
        test_kernel_bounds ensures that the kernel-row norms B_j have their known values and obey
        their bounds.
        '''
        (k, h) = (50, 10)
        trig = ppedge.BasisSpec('trig', h)
        xs = np.array([0.0, 0.123, 0.5, 0.77, 1.0])
        b2 = ppedge.kernel_bounds(trig, k, xs, 2)
        self.assertLess(np.max(np.abs(b2 - ppedge.b2_reference(k, h))), 1e-8)
        self.assertLess(abs(ppedge.b2_reference(k, h) - np.sqrt(550)), 1e-12)
        binf = ppedge.kernel_bounds(trig, k, xs, 'inf')
        self.assertTrue(np.all(binf <= h + 1 + 1e-9))
        self.assertLess(abs(ppedge.kernel_bounds(trig, k, 0.01, np.inf) -
                            ppedge.kernel_bounds(trig, k, 0.01, 'inf')), 1e-15)
        b1 = ppedge.kernel_bounds(trig, 200, np.linspace(0, 1, 101), 1)
        self.assertTrue(np.all(b1 <= ppedge.b1_ceiling(200, h)))
        # the norms are ordered: B_inf <= B_3 <= B_2 <= B_1
        b3 = ppedge.kernel_bounds(trig, k, xs, 3)
        b1 = ppedge.kernel_bounds(trig, k, xs, 1)
        self.assertTrue(np.all(binf <= b3 + 1e-12))
        self.assertTrue(np.all(b3 <= b2 + 1e-12))
        self.assertTrue(np.all(b2 <= b1 + 1e-12))
        # the Haar kernel row at x has h + 1 nonzero entries of h + 1 when k is a multiple of h + 1
        haar = ppedge.BasisSpec('haar', 7)
        self.assertLess(abs(ppedge.kernel_bounds(haar, 64, 0.3, 1) - 64.0), 1e-12)
        with self.assertRaises(ppedge.DomainError): ppedge.kernel_bounds(trig, k, xs, 4)

    def test_sine_ratio(self):
        '''
        test_sine_ratio ensures that |sin(p u) / sin(u)| lies below its piecewise bound.
        '''
        u = np.linspace(1e-3, np.pi/2, 500)
        for p in (3, 7, 21):
            r = ppedge.sine_ratio(p, u)
            self.assertTrue(np.all(r <= ppedge.sine_ratio_bound(p, u, 0.3) + 1e-12))
            self.assertTrue(np.all(r <= p + 1e-12))
        self.assertLess(abs(ppedge.sine_ratio(3, np.pi/6) - 2.0), 1e-12)

    def test_coefficients(self):
        '''
        test_coefficients ensures that the coefficients of boundary functions are computed to the
        requested tolerance and are cached.
        '''
        ppedge.clear_coefficient_cache()
        trig = ppedge.BasisSpec('trig', 4)
        a = ppedge.coefficients(trig, ppedge.Constant(2.0))
        self.assertLess(abs(a[0] - 2.0), 1e-10)
        self.assertLess(np.max(np.abs(a[1:])), 1e-9)
        f = ppedge.Sinusoid(1.0, 0.5)
        a = ppedge.coefficients(trig, f)
        self.assertLess(abs(a[0] - 1.0), 1e-10)
        self.assertLess(abs(a[1]), 1e-9)
        self.assertLess(abs(a[2] - np.sqrt(2) / 4), 1e-9)
        self.assertLess(np.max(np.abs(a[3:])), 1e-9)
        self.assertGreater(ppedge.clear_coefficient_cache(), 0)
        self.assertEqual(ppedge.clear_coefficient_cache(), 0)
        haar = ppedge.BasisSpec('haar', 3)
        self.assertLess(abs(ppedge.coefficient(haar, f, 1) - 1/np.pi), 1e-9)
        # the truncated expansion of a sinusoid of frequency 1 is the sinusoid itself
        xs = np.linspace(0, 1, 33)
        self.assertLess(np.max(np.abs(ppedge.partial_sum(trig, f, xs) - f(xs))), 1e-8)
        # tables are integrated piecewise between their knots
        t = ppedge.TableInterpolated([(0.0, 1.0), (0.25, 1.5), (0.5, 1.0), (0.75, 0.5)])
        self.assertLess(abs(ppedge.coefficient(trig, t, 0) - 1.0), 1e-9)
        self.assertGreater(ppedge.coefficient(trig, t, 2), 0.3)
        with self.assertRaises(ppedge.DomainError): ppedge.coefficient(trig, f, 5)

    def test_approx_fn(self):
        '''
        test_approx_fn ensures that the deterministic approximation built from the cell measures
        reproduces constants exactly and approaches smooth boundaries.
        '''
        trig = ppedge.BasisSpec('trig', 6)
        xs = np.linspace(0, 1, 21)
        self.assertLess(np.max(np.abs(ppedge.approx_fn(trig, ppedge.Constant(1.5), 40, xs) - 1.5)),
                        1e-10)
        f = ppedge.Sinusoid(1.0, 0.5)
        err = np.max(np.abs(ppedge.approx_fn(trig, f, 200, xs) - f(xs)))
        self.assertLess(err, 1e-3)
        self.assertTrue(isinstance(ppedge.approx_fn(trig, f, 200, 0.5), float))
