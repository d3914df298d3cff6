"""
Exact weak norms where the dual ball is a polytope.

For q >= 1 the objective phi -> (sum_k |phi(x_k)|^q)^(1/q) is convex, so
its maximum over a polytope sits at a vertex. The dual ball of l_1^d is
the cube [-1, 1]^d (2^d vertices); the dual ball of a sup-normed space is
the cross-polytope (2d vertices +-e_i).

"""
import itertools
import math

import numpy as np

from . import proxy
from .base_response import WeakNormResult
from ..conf import settings
from ..exceptions import BudgetError, DomainError
from ..spaces import Functional, lp_norm

# vertices scored per block
VERTEX_BLOCK = 1 << 14


def sign_vertices(dimension, start, stop):
    """
    Rows start..stop-1 of the cube vertices with the first coordinate
    fixed to +1. Bit j of the row number sets the sign of coordinate j+1.

    """
    rows = np.arange(start, stop, dtype=np.int64)[:, None]
    bits = (rows >> np.arange(dimension - 1, dtype=np.int64)) & 1
    vertices = np.ones((stop - start, dimension))
    vertices[:, 1:] = 1.0 - 2.0 * bits
    return vertices


class CubeVertexBackend(object):
    "l_1^d with d <= VERTEX_MAX_DIM: enumerate the 2^(d-1) vertex pairs +-v"
    response_class = WeakNormResult

    @proxy
    def accepts(self, family, q):
        space = family.space
        return (space.is_l1() and q >= 1 and
                space.dimension <= settings.VERTEX_MAX_DIM)

    @proxy
    def call(self, family, q, budget=None):
        d = family.space.dimension
        total = 1 << (d - 1)
        best_value, best_vertex = -1.0, None
        for start in range(0, total, VERTEX_BLOCK):
            stop = min(start + VERTEX_BLOCK, total)
            vertices = sign_vertices(d, start, stop)
            values = lp_norm(vertices @ family.matrix.T, q, axis=1)
            i = int(np.argmax(values))
            if values[i] > best_value:
                best_value, best_vertex = float(values[i]), vertices[i]
        return self.wrap_result(
            best_value, Functional(best_vertex, family.space), exact=True)

    @proxy
    def wrap_result(self, value, certificate, **kwargs):
        kwargs.setdefault('backend', 'cube')
        return self.response_class(value, certificate, **kwargs)


class CrossPolytopeBackend(object):
    "Sup-normed spaces: the best of the 2d vertices +-e_i"
    response_class = WeakNormResult

    @proxy
    def accepts(self, family, q):
        return family.space.is_sup() and q >= 1

    @proxy
    def call(self, family, q, budget=None):
        columns = lp_norm(family.matrix, q, axis=0)
        i = int(np.argmax(columns))
        coords = np.zeros(family.space.dimension)
        coords[i] = 1.0
        return self.wrap_result(
            columns[i], Functional(coords, family.space), exact=True)

    @proxy
    def wrap_result(self, value, certificate, **kwargs):
        kwargs.setdefault('backend', 'cross')
        return self.response_class(value, certificate, **kwargs)


def weak_norm_vertex_oracle(family, q):
    """
    Brute force over every sign vector of the cube, one at a time. Only
    meant as an independent check on CubeVertexBackend.

    """
    space = family.space
    if not space.is_l1():
        raise DomainError("the vertex oracle needs an l_1 space, got %s" % space)
    if not q > 0:
        raise DomainError("weak norms need q > 0, got %r" % (q,))
    if space.dimension > settings.VERTEX_MAX_DIM:
        raise BudgetError("2^%d sign vectors exceed the vertex budget (d <= %d)"
                          % (space.dimension, settings.VERTEX_MAX_DIM))

    rows = family.matrix.tolist()
    best = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=space.dimension):
        total = math.fsum(
            abs(math.fsum(s * x for s, x in zip(signs, row))) ** q
            for row in rows)
        best = max(best, total ** (1.0 / q))
    return best
