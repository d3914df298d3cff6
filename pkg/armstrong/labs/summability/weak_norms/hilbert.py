import numpy as np

from . import proxy
from .base_response import WeakNormResult
from ..spaces import Functional


class HilbertBackend(object):
    """
    E = l_2 and q = 2: the weak norm is the largest singular value of the
    n x d coordinate matrix, attained at the top right singular vector.

    """
    response_class = WeakNormResult

    @proxy
    def accepts(self, family, q):
        return family.space.is_hilbert() and q == 2

    @proxy
    def call(self, family, q, budget=None):
        _, singular, vt = np.linalg.svd(family.matrix, full_matrices=False)
        v = vt[0]
        # fix the sign so the certificate is reproducible
        lead = np.flatnonzero(np.abs(v) > 0)
        if lead.size and v[lead[0]] < 0:
            v = -v
        return self.wrap_result(
            singular[0], Functional(v, family.space), exact=True)

    @proxy
    def wrap_result(self, value, certificate, **kwargs):
        kwargs.setdefault('backend', 'hilbert')
        return self.response_class(value, certificate, **kwargs)
