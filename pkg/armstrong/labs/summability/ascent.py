"""
Multistart projected ascent on the unit sphere of a finite-dimensional norm.

All restarts advance together as the rows of one array. A row accepts a
step only if the objective strictly rises; rejected rows halve their step.
A row retires when an accepted step gains less than `tol` relative, or
when its step underflows.

"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import norm as normal_dist
from scipy.stats import qmc

from . import logger
from .conf import settings
from .spaces import lp_norm

MIN_STEP = 1e-12
MAX_STEP = 64.0


@dataclass
class SearchBudget(object):
    """
    Effort limits for every search-based routine. Unset fields take the
    current settings when the budget is created.

    """
    restarts: Optional[int] = None
    max_iter: Optional[int] = None
    tol: Optional[float] = None
    refine_steps: Optional[int] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.restarts is None:
            self.restarts = settings.SEARCH_RESTARTS
        if self.max_iter is None:
            self.max_iter = settings.SEARCH_MAX_ITER
        if self.tol is None:
            self.tol = settings.SEARCH_TOL
        if self.refine_steps is None:
            self.refine_steps = settings.REFINE_STEPS
        if self.seed is None:
            self.seed = settings.SEED


@dataclass
class AscentResult(object):
    value: float
    point: np.ndarray
    restart: int
    iterations: int
    exhausted: bool
    values: np.ndarray = field(repr=False, default=None)


def sphere_projector(p):
    """Radial projection of rows onto the unit sphere of the l_p norm"""

    def project(points):
        norms = lp_norm(points, p, axis=1)
        norms = np.where(norms > 0, norms, 1.0)
        return points / norms[:, None]
    return project


def quasi_random_directions(count, dimension, rng):
    """
    `count` scrambled Sobol points pushed through the normal inverse CDF,
    i.e. quasi-uniform directions in R^dimension (not yet normalised).

    """
    if count <= 0:
        return np.zeros((0, dimension))
    sampler = qmc.Sobol(d=dimension, scramble=True, seed=rng)
    exponent = int(np.ceil(np.log2(max(count, 2))))
    u = sampler.random_base2(m=exponent)[:count]
    u = np.clip(u, 1e-12, 1.0 - 1e-12)
    return normal_dist.ppf(u)


def multistart_ascent(objective, starts, project, max_iter, tol, step=1.0):
    """
    Maximise `objective` from every row of `starts`.

    `objective(points)` returns (values, gradients) for a stack of points;
    gradients may be any ascent direction (a subgradient for nonsmooth
    objectives). Ties between restarts go to the lowest row index.

    """
    points = project(np.array(starts, dtype=np.float64, copy=True))
    values, grads = objective(points)
    values = np.array(values, dtype=np.float64)
    grads = np.array(grads, dtype=np.float64)

    restarts = points.shape[0]
    steps = np.full(restarts, float(step))
    active = np.ones(restarts, dtype=bool)

    iterations = 0
    while iterations < max_iter and active.any():
        iterations += 1
        idx = np.flatnonzero(active)

        direction = grads[idx]
        length = np.linalg.norm(direction, axis=1)
        stationary = length == 0
        if stationary.any():
            active[idx[stationary]] = False
            idx = idx[~stationary]
            direction = direction[~stationary]
            length = length[~stationary]
            if not idx.size:
                break

        radius = np.linalg.norm(points[idx], axis=1)
        move = (steps[idx] * radius / length)[:, None] * direction
        candidates = project(points[idx] + move)
        cand_values, cand_grads = objective(candidates)

        better = cand_values > values[idx]
        accepted = idx[better]
        if accepted.size:
            base = np.maximum(np.abs(values[accepted]), np.finfo(float).tiny)
            gain = (cand_values[better] - values[accepted]) / base
            points[accepted] = candidates[better]
            values[accepted] = cand_values[better]
            grads[accepted] = cand_grads[better]
            steps[accepted] = np.minimum(steps[accepted] * 2.0, MAX_STEP)
            active[accepted[gain < tol]] = False

        rejected = idx[~better]
        if rejected.size:
            steps[rejected] *= 0.5
            active[rejected[steps[rejected] < MIN_STEP]] = False

    exhausted = bool(active.any())
    if exhausted:
        logger.debug("ascent stopped at the iteration budget (%d) with %d "
                     "restarts still improving" % (max_iter, active.sum()))

    best = int(np.argmax(values))
    return AscentResult(
        value=float(values[best]),
        point=points[best].copy(),
        restart=best,
        iterations=iterations,
        exhausted=exhausted,
        values=values)
