import math

from armstrong.labs.summability.spaces import SpaceDescriptor
from armstrong.labs.summability.weak_norms import VectorFamily
from armstrong.labs.summability.weak_norms.single import SingleVectorBackend
from ._common import CommonBackendTestCaseMixin
from .._utils import TestCase


class SingleVectorBackendTestCase(CommonBackendTestCaseMixin, TestCase):
    backend_cls = SingleVectorBackend
    backend_name = 'single'

    def families(self):
        out = []
        for space in (SpaceDescriptor.lp(1, 3), SpaceDescriptor.lp(2, 3),
                      SpaceDescriptor.lp(3, 3), SpaceDescriptor.sup(3)):
            family = VectorFamily.from_matrix(space, [[1.0, -2.0, 2.0]])
            out.append((family, 2.0, float(space.norm_of(family.matrix[0]))))
        return out

    def test_value_is_the_norm_for_every_q(self):
        family = VectorFamily.from_matrix(SpaceDescriptor.lp(2, 2), [[3, 4]])
        for q in (0.5, 1, 2, float('inf')):
            self.assertClose(self.backend.call(family, q).value, 5.0)

    def test_rejects_longer_families(self):
        family = VectorFamily.basis(SpaceDescriptor.lp(2, 2))
        self.assertFalse(self.backend.accepts(family, 2))

    def test_l1_norm(self):
        family = VectorFamily.from_matrix(SpaceDescriptor.lp(1, 3), [[1, -2, 2]])
        self.assertTrue(math.isclose(self.backend.call(family, 2).value, 5.0))
