import itertools
import json
import os
import tempfile

import fudge
import numpy as np

from armstrong.labs.summability import maps as maps_module
from armstrong.labs.summability.exceptions import (
    BudgetError, ConfigError, DomainError, StructuralError)
from armstrong.labs.summability.maps import (
    DenseSymmetric, DenseTensor, DiagonalC0, OperatorNormResult, dump_tensor,
    eval_multilinear, eval_polynomial, load_tensor, map_from_spec,
    mixed_power_sum, operator_norm, poly_power_sum)
from armstrong.labs.summability.oracles import brute_force_mixed_sum
from armstrong.labs.summability.spaces import SpaceDescriptor, Vector
from armstrong.labs.summability.weak_norms import VectorFamily
from ._utils import TestCase


def random_tensor(rng, m, d, d_out=None, p=2):
    space = SpaceDescriptor.lp(p, d)
    out = SpaceDescriptor.lp(p, d_out or d)
    return DenseTensor(rng.standard_normal((d,) * m + (out.dimension,)),
                       [space] * m, out)


def symmetrize(coefficients):
    degree = coefficients.ndim - 1
    perms = list(itertools.permutations(range(degree)))
    return sum(np.transpose(coefficients, p + (degree,)) for p in perms) / len(perms)


class DenseTensorTestCase(TestCase):
    def test_shape_must_match(self):
        space = SpaceDescriptor.lp(2, 2)
        with self.assertRaises(StructuralError):
            DenseTensor(np.zeros((2, 3, 2)), [space, space], space)

    def test_bilinear_evaluation(self):
        space = SpaceDescriptor.lp(2, 2)
        coefficients = np.zeros((2, 2, 1))
        coefficients[0, 1, 0] = 3.0
        T = DenseTensor(coefficients, [space, space], SpaceDescriptor.real_line())
        value = eval_multilinear(T, [Vector([2, 0], space), Vector([0, 5], space)])
        self.assertEqual(list(value.coords), [30.0])

    def test_is_multilinear(self):
        rng = self.rng()
        T = random_tensor(rng, 3, 3)
        x, y, z, w = rng.standard_normal((4, 3))
        left = eval_multilinear(T, [x, 2 * y + 3 * w, z]).coords
        right = 2 * eval_multilinear(T, [x, y, z]).coords + \
            3 * eval_multilinear(T, [x, w, z]).coords
        np.testing.assert_allclose(left, right, rtol=1e-12, atol=1e-12)

    def test_wrong_arity(self):
        T = random_tensor(self.rng(), 2, 2)
        with self.assertRaises(StructuralError):
            eval_multilinear(T, [np.ones(2)])

    def test_wrong_space(self):
        T = random_tensor(self.rng(), 1, 2)
        with self.assertRaises(StructuralError):
            eval_multilinear(T, [Vector([1, 0], SpaceDescriptor.lp(1, 2))])


class DiagonalC0TestCase(TestCase):
    def test_outer_product(self):
        T = DiagonalC0(2, 2)
        space = SpaceDescriptor.lp(2, 2)
        value = eval_multilinear(T, [Vector([1, 2], space), Vector([3, 4], space)])
        self.assertEqual(list(value.coords), [3.0, 4.0, 6.0, 8.0])
        self.assertEqual(T.codomain, SpaceDescriptor.sup(4))

    def test_output_norms_match_evaluation(self):
        rng = self.rng()
        T = DiagonalC0(3, 3)
        args = [rng.standard_normal((5, 3)) for _ in range(3)]
        np.testing.assert_allclose(
            T.output_norms(args),
            np.abs(T.evaluate_batch(args)).max(axis=1), rtol=1e-14)

    def test_budget(self):
        T = DiagonalC0(3, 10)
        with self.settings(TUPLE_BUDGET=100):
            with self.assertRaises(BudgetError):
                T.evaluate_batch([np.ones((1, 10))] * 3)

    def test_norm_is_one(self):
        result = operator_norm(DiagonalC0(2, 3))
        self.assertEqual(result.value, 1.0)
        self.assertTrue(result.exact)


class MixedPowerSumTestCase(TestCase):
    def test_identity_basis_is_sqrt_n(self):
        space = SpaceDescriptor.lp(2, 9)
        T = DenseTensor(np.eye(9), [space], space)
        self.assertClose(mixed_power_sum(T, [VectorFamily.basis(space)], 2), 3.0)

    def test_zero_map(self):
        space = SpaceDescriptor.lp(2, 2)
        T = DenseTensor(np.zeros((2, 2, 2)), [space, space], space)
        family = VectorFamily.basis(space)
        self.assertEqual(mixed_power_sum(T, [family, family], 1.5), 0.0)

    def test_diagonal_basis_is_n_to_half_m(self):
        for m, n in ((1, 4), (2, 4), (3, 4)):
            family = VectorFamily.basis(SpaceDescriptor.lp(2, n))
            value = mixed_power_sum(DiagonalC0(m, n), [family] * m, 2)
            self.assertClose(value, n ** (m / 2.0))

    def test_matches_brute_force(self):
        rng = self.rng()
        for trial in range(40):
            m = 1 + trial % 3
            n = 2 + trial % 4
            d = 2 + trial % 2
            T = random_tensor(rng, m, d)
            families = [VectorFamily.from_matrix(T.domain[0],
                                                 rng.standard_normal((n, d)))
                        for _ in range(m)]
            for p in (0.5, 1.0, 2.0, 3.0):
                self.assertClose(mixed_power_sum(T, families, p),
                                 brute_force_mixed_sum(T, families, p), rel=1e-12)

    def test_partitioning_does_not_change_the_sum(self):
        rng = self.rng()
        T = random_tensor(rng, 2, 3)
        families = [VectorFamily.from_matrix(T.domain[0],
                                             rng.standard_normal((12, 3)))
                    for _ in range(2)]
        whole = mixed_power_sum(T, families, 2.5)
        with fudge.patched_context(maps_module, 'BLOCK_ELEMENTS', 40):
            with self.settings(THREADS=3):
                split = mixed_power_sum(T, families, 2.5)
        self.assertClose(whole, split, rel=1e-13)

    def test_checks(self):
        T = random_tensor(self.rng(), 2, 2)
        family = VectorFamily.basis(T.domain[0])
        with self.assertRaises(DomainError):
            mixed_power_sum(T, [family, family], 0)
        with self.assertRaises(StructuralError):
            mixed_power_sum(T, [family], 2)
        with self.assertRaises(StructuralError):
            mixed_power_sum(T, [family, VectorFamily.basis(T.domain[0], 3)], 2)
        with self.assertRaises(StructuralError):
            other = VectorFamily.basis(SpaceDescriptor.lp(1, 2))
            mixed_power_sum(T, [family, other], 2)
        with self.settings(TUPLE_BUDGET=3):
            with self.assertRaises(BudgetError):
                mixed_power_sum(T, [family, family], 2)


class PolynomialTestCase(TestCase):
    def test_symmetry_is_required(self):
        space = SpaceDescriptor.lp(2, 2)
        coefficients = np.zeros((2, 2, 1))
        coefficients[0, 1, 0] = 1.0
        with self.assertRaises(DomainError):
            DenseSymmetric(coefficients, space, SpaceDescriptor.real_line())

    def test_is_homogeneous(self):
        rng = self.rng()
        space = SpaceDescriptor.lp(2, 3)
        P = DenseSymmetric(symmetrize(rng.standard_normal((3, 3, 3, 2))),
                           space, SpaceDescriptor.lp(2, 2))
        self.assertEqual(P.degree, 3)
        x = rng.standard_normal(3)
        np.testing.assert_allclose(eval_polynomial(P, -2 * x).coords,
                                   -8 * eval_polynomial(P, x).coords, rtol=1e-12)

    def test_poly_power_sum(self):
        space = SpaceDescriptor.lp(2, 2)
        coefficients = np.zeros((2, 2, 1))
        coefficients[0, 0, 0] = coefficients[1, 1, 0] = 1.0
        P = DenseSymmetric(coefficients, space, SpaceDescriptor.real_line())
        family = VectorFamily.from_matrix(space, [[1, 0], [1, 1]])
        self.assertClose(poly_power_sum(P, family, 1), 3.0)

    def test_poly_power_sum_checks_space(self):
        space = SpaceDescriptor.lp(2, 2)
        P = DenseSymmetric(np.zeros((2, 2, 1)), space, SpaceDescriptor.real_line())
        with self.assertRaises(StructuralError):
            poly_power_sum(P, VectorFamily.basis(SpaceDescriptor.lp(2, 3)), 2)


class OperatorNormTestCase(TestCase):
    def test_identity(self):
        space = SpaceDescriptor.lp(2, 4)
        T = DenseTensor(np.eye(4), [space], space)
        result = operator_norm(T, self.budget())
        self.assertIsInstance(result, OperatorNormResult)
        self.assertFalse(result.exact)
        self.assertClose(result.value, 1.0, rel=1e-9)

    def test_matrix_spectral_norm(self):
        rng = self.rng()
        space = SpaceDescriptor.lp(2, 3)
        matrix = rng.standard_normal((3, 3))
        T = DenseTensor(matrix, [space], space)
        expected = np.linalg.svd(matrix, compute_uv=False)[0]
        value = operator_norm(T, self.budget(restarts=32)).value
        self.assertLessEqual(value, expected * (1 + 1e-12))
        self.assertClose(value, expected, rel=1e-6)

    def test_certificate_attains_value(self):
        T = random_tensor(self.rng(), 2, 2)
        result = operator_norm(T, self.budget())
        attained = eval_multilinear(T, result.certificate).norm()
        self.assertClose(attained, result.value, rel=1e-12)
        for v in result.certificate:
            self.assertClose(v.norm(), 1.0, rel=1e-12)

    def test_polynomial(self):
        space = SpaceDescriptor.lp(2, 2)
        coefficients = np.zeros((2, 2, 1))
        coefficients[0, 0, 0] = coefficients[1, 1, 0] = 1.0
        P = DenseSymmetric(coefficients, space, SpaceDescriptor.real_line())
        # |x_1^2 + x_2^2| = 1 on the whole sphere
        self.assertClose(operator_norm(P, self.budget()).value, 1.0, rel=1e-12)


class TensorContainerTestCase(TestCase):
    def test_dump_and_load(self):
        array = np.arange(12.0).reshape(2, 3, 2)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'tensor.json')
            dump_tensor(array, path)
            with open(path) as fh:
                self.assertEqual(json.load(fh)['shape'], [2, 3, 2])
            np.testing.assert_array_equal(load_tensor(path), array)

    def test_bad_container(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'tensor.json')
            with open(path, 'w') as fh:
                json.dump({'shape': [2, 2], 'data': [1, 2, 3]}, fh)
            with self.assertRaises(ConfigError):
                load_tensor(path)
        with self.assertRaises(ConfigError):
            load_tensor('/no/such/tensor.json')

    def test_npy_file(self):
        array = np.arange(8.0).reshape(2, 2, 2)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'tensor.npy')
            dump_tensor(array, path)
            np.testing.assert_array_equal(np.load(path), array)
            np.testing.assert_array_equal(load_tensor(path), array)

    def test_unreadable_npy_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'tensor.npy')
            with open(path, 'w') as fh:
                fh.write('not numpy')
            with self.assertRaises(ConfigError):
                load_tensor(path)


class MapFromSpecTestCase(TestCase):
    space = {'family': 'lp', 'p': 2, 'dim': 2}

    def test_inline_tensor(self):
        T = map_from_spec({'kind': 'tensor', 'domain': [self.space],
                           'codomain': self.space, 'shape': [2, 2],
                           'data': [1, 0, 0, 1]})
        self.assertEqual(T.arity, 1)
        np.testing.assert_array_equal(T.coefficients, np.eye(2))

    def test_tensor_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            dump_tensor(np.eye(2), os.path.join(tmp, 'eye.json'))
            T = map_from_spec({'kind': 'tensor', 'domain': [self.space],
                               'codomain': self.space, 'file': 'eye.json'},
                              base_dir=tmp)
        self.assertEqual(T.codomain.dimension, 2)

    def test_npy_tensor_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            dump_tensor(np.eye(2), os.path.join(tmp, 'eye.npy'))
            T = map_from_spec({'kind': 'tensor', 'domain': [self.space],
                               'codomain': self.space, 'file': 'eye.npy'},
                              base_dir=tmp)
        np.testing.assert_array_equal(T.coefficients, np.eye(2))

    def test_dense_polynomial(self):
        P = map_from_spec({'kind': 'dense', 'domain': self.space,
                           'codomain': {'family': 'lp', 'p': 2, 'dim': 1},
                           'shape': [2, 2, 1], 'data': [1, 0, 0, 1]})
        self.assertEqual(P.degree, 2)

    def test_errors(self):
        with self.assertRaises(ConfigError):
            map_from_spec({'kind': 'nope'})
        with self.assertRaises(ConfigError):
            map_from_spec({'kind': 'tensor', 'codomain': self.space})
        with self.assertRaises(ConfigError):
            map_from_spec({'kind': 'tensor', 'domain': [self.space],
                           'codomain': self.space, 'shape': [3, 2],
                           'data': [0] * 6})

    def test_fingerprint_tracks_coefficients(self):
        space = SpaceDescriptor.lp(2, 2)
        a = DenseTensor(np.eye(2), [space], space)
        b = DenseTensor(2 * np.eye(2), [space], space)
        self.assertNotEqual(a.fingerprint(), b.fingerprint())
        self.assertEqual(a.fingerprint(),
                         DenseTensor(np.eye(2), [space], space).fingerprint())
