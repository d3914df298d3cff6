from . import proxy
from .base_response import WeakNormResult
from ..spaces import norming_functional


class SingleVectorBackend(object):
    "A lone vector: the supremum is its norm, attained by a norming functional"
    response_class = WeakNormResult

    @proxy
    def accepts(self, family, q):
        return family.n == 1

    @proxy
    def call(self, family, q, budget=None):
        x = family[0]
        return self.wrap_result(
            x.norm(), norming_functional(family.space, x), exact=True)

    @proxy
    def wrap_result(self, value, certificate, **kwargs):
        kwargs.setdefault('backend', 'single')
        return self.response_class(value, certificate, **kwargs)
