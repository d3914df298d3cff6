import numpy as np

from armstrong.labs.summability.exceptions import BudgetError, DomainError
from armstrong.labs.summability.spaces import SpaceDescriptor
from armstrong.labs.summability.weak_norms import (
    VectorFamily, weak_norm_vertex_oracle)
from armstrong.labs.summability.weak_norms.vertex import (
    CrossPolytopeBackend, CubeVertexBackend, sign_vertices)
from ._common import CommonBackendTestCaseMixin, random_family
from .._utils import TestCase


class SignVerticesTestCase(TestCase):
    def test_enumerates_half_the_cube(self):
        vertices = sign_vertices(3, 0, 4)
        self.assertTrue(np.all(vertices[:, 0] == 1))
        self.assertEqual(len(set(map(tuple, vertices))), 4)

    def test_blocks_concatenate(self):
        whole = sign_vertices(4, 0, 8)
        parts = np.vstack([sign_vertices(4, 0, 3), sign_vertices(4, 3, 8)])
        np.testing.assert_array_equal(whole, parts)


class CubeVertexBackendTestCase(CommonBackendTestCaseMixin, TestCase):
    backend_cls = CubeVertexBackend
    backend_name = 'cube'

    def families(self):
        rng = self.rng()
        l1 = SpaceDescriptor.lp(1, 3)
        return [
            (VectorFamily.from_matrix(l1, [[1, 1, 0], [1, -1, 0]]), 1.0, 2.0),
            (VectorFamily.basis(l1), 2.0, 3 ** 0.5),
            (random_family(rng, l1, 4), 1.5, None),
            (random_family(rng, l1, 3), float('inf'), None),
        ]

    def test_agrees_with_the_oracle(self):
        rng = self.rng()
        for d in (1, 2, 4, 6):
            space = SpaceDescriptor.lp(1, d)
            for q in (1.0, 1.5, 2.0, 3.0):
                family = random_family(rng, space, 5)
                self.assertClose(self.backend.call(family, q).value,
                                 weak_norm_vertex_oracle(family, q), rel=1e-12)

    def test_dimension_limit(self):
        family = VectorFamily.basis(SpaceDescriptor.lp(1, 5))
        with self.settings(VERTEX_MAX_DIM=4):
            self.assertFalse(self.backend.accepts(family, 2))
            with self.assertRaises(BudgetError):
                weak_norm_vertex_oracle(family, 2)

    def test_needs_q_at_least_one(self):
        family = VectorFamily.basis(SpaceDescriptor.lp(1, 3))
        self.assertFalse(self.backend.accepts(family, 0.5))

    def test_oracle_needs_l1(self):
        with self.assertRaises(DomainError):
            weak_norm_vertex_oracle(VectorFamily.basis(SpaceDescriptor.lp(2, 2)), 2)


class CrossPolytopeBackendTestCase(CommonBackendTestCaseMixin, TestCase):
    backend_cls = CrossPolytopeBackend
    backend_name = 'cross'

    def families(self):
        sup = SpaceDescriptor.sup(3)
        return [
            (VectorFamily.from_matrix(sup, [[1, 2, 0], [1, -2, 0]]), 2.0, 8 ** 0.5),
            (VectorFamily.basis(sup), 1.0, 1.0),
            (random_family(self.rng(), sup, 5), 3.0, None),
        ]

    def test_column_norms(self):
        family = random_family(self.rng(), SpaceDescriptor.sup(4), 6)
        expected = max(np.sum(np.abs(family.matrix) ** 2, axis=0)) ** 0.5
        self.assertClose(self.backend.call(family, 2).value, expected)

    def test_needs_sup_space(self):
        family = VectorFamily.basis(SpaceDescriptor.lp(2, 2))
        self.assertFalse(self.backend.accepts(family, 2))
