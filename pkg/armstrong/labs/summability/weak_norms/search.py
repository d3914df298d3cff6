import struct

import numpy as np

from . import proxy, objective_values
from .base_response import WeakNormResult
from .. import logger
from ..ascent import (
    SearchBudget, multistart_ascent, quasi_random_directions, sphere_projector)
from ..seeding import rng_for
from ..spaces import Functional, is_inf, lp_norm, norming_coords

POLISH_STEPS = 50


def weak_objective(matrix, q):
    """
    phi -> ||(phi(x_k))_k||_q with an ascent direction for each row of
    a stack of functionals. For q < 1 zero pairings get no weight.

    """
    def objective(points):
        pairings = points @ matrix.T
        values = lp_norm(pairings, q, axis=1)
        if is_inf(q):
            weights = np.zeros_like(pairings)
            top = np.argmax(np.abs(pairings), axis=1)
            weights[np.arange(len(top)), top] = 1.0
        elif q == 1:
            weights = np.ones_like(pairings)
        else:
            safe = np.where(values > 0, values, 1.0)[:, None]
            ratio = np.abs(pairings) / safe
            with np.errstate(divide='ignore'):
                weights = np.where(ratio > 0, ratio ** (q - 1.0), 0.0)
        grads = (np.sign(pairings) * weights) @ matrix
        return values, grads
    return objective


class SearchBackend(object):
    """
    The general case: multistart projected ascent over the dual unit
    sphere, started from the norming functionals of every x_k and from
    quasi-random directions. The best point is then polished by the
    power step phi <- norming functional of the gradient, which cannot
    decrease a convex objective. The result is a certified lower bound.

    """
    response_class = WeakNormResult

    @proxy
    def accepts(self, family, q):
        return True

    @proxy
    def call(self, family, q, budget=None):
        budget = budget or SearchBudget()
        space = family.space
        matrix = family.matrix
        p_star = space.dual_exponent
        objective = weak_objective(matrix, q)
        project = sphere_projector(p_star)

        instance = family.fingerprint() + struct.pack('<d', q)
        rng = rng_for('weak_norm', instance, budget.seed)

        nonzero = matrix[np.any(matrix != 0, axis=1)]
        starts = [norming_coords(space, row) for row in nonzero]
        extra = max(budget.restarts - len(starts), 0)
        if extra:
            starts.extend(quasi_random_directions(extra, space.dimension, rng))
        starts = np.vstack(starts)

        result = multistart_ascent(
            objective, starts, project, budget.max_iter, budget.tol)
        point, value = self.polish(objective, space, result.point, result.value)
        if result.exhausted:
            logger.warning("weak_norm search on %r at q=%g stopped at the "
                           "iteration budget; value %.12g is a lower bound"
                           % (family, q, value))

        # report exactly what the certificate achieves
        value = float(objective_values(matrix, point, q)[0])
        return self.wrap_result(value, Functional(point, space), exact=False)

    def polish(self, objective, space, point, value):
        point = point[None, :]
        for _ in range(POLISH_STEPS):
            _, grad = objective(point)
            if not np.any(grad):
                break
            candidate = norming_coords(space, grad[0])[None, :]
            cand_value, _ = objective(candidate)
            if not cand_value[0] > value:
                break
            point, value = candidate, float(cand_value[0])
        return point[0], value

    @proxy
    def wrap_result(self, value, certificate, **kwargs):
        kwargs.setdefault('backend', 'search')
        return self.response_class(value, certificate, **kwargs)
