import numpy as np

from . import proxy
from .base_response import WeakNormResult
from ..spaces import Functional, is_inf


class BasisBackend(object):
    """
    Families of distinct signed unit vectors +-e_i. Their weak q-norm is
    the norm of the inclusion l_{p*}^n -> l_q^n, which is
    n^(1/q - 1/p*) when q < p* and 1 otherwise.

    """
    response_class = WeakNormResult

    @proxy
    def accepts(self, family, q):
        return family.basis_support() is not None

    @proxy
    def call(self, family, q, budget=None):
        support = family.basis_support()
        signs = family.matrix[np.arange(family.n), support]
        n = family.n
        p_star = family.space.dual_exponent
        inverse_p_star = 0.0 if is_inf(p_star) else 1.0 / p_star

        coords = np.zeros(family.space.dimension)
        if 1.0 / q > inverse_p_star:
            value = n ** (1.0 / q - inverse_p_star)
            coords[support] = signs * n ** (-inverse_p_star)
        else:
            value = 1.0
            coords[support[0]] = signs[0]
        return self.wrap_result(
            value, Functional(coords, family.space), exact=True)

    @proxy
    def wrap_result(self, value, certificate, **kwargs):
        kwargs.setdefault('backend', 'basis')
        return self.response_class(value, certificate, **kwargs)
