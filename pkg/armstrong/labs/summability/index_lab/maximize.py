"""
Search for the families that make a summing quotient large.

Strategies run in a fixed order and a later strategy only replaces the
current best when it is strictly larger, so ties keep the earlier one.

"""
import struct

import numpy as np

from .. import logger
from ..ascent import SearchBudget
from ..conf import settings
from ..exceptions import BudgetError, DegenerateInputError, DomainError
from ..maps import HomogeneousPolynomial
from ..seeding import derive_seed
from ..weak_norms import VectorFamily
from .quotients import QuotientSample, polynomial_quotient, summing_quotient

BASIS = 'basis'
WITNESS = 'witness'
RANDOM = 'random'
STRATEGIES = (BASIS, WITNESS, RANDOM)


def random_unit_family(space, n, rng):
    rows = rng.standard_normal((n, space.dimension))
    norms = space.norm_of(rows, axis=1)
    return VectorFamily.from_matrix(space, rows / norms[:, None])


def _anchor_families(anchors, spaces, n):
    if anchors is None:
        return None
    if isinstance(anchors, VectorFamily):
        anchors = [anchors] * len(spaces)
    anchors = list(anchors)
    if len(anchors) != len(spaces):
        return None
    for family, space in zip(anchors, spaces):
        if family.space != space or family.n != n:
            return None
    return anchors


class QuotientSearch(object):
    "Keeps the running best quotient for one map at one (n, p, q)"

    def __init__(self, mapping, n, p, q, budget, exact_only=False):
        self.mapping = mapping
        self.n, self.p, self.q = n, p, q
        self.budget = budget
        self.exact_only = exact_only
        self.polynomial = isinstance(mapping, HomogeneousPolynomial)
        if self.polynomial:
            self.spaces = [mapping.domain]
        else:
            self.spaces = list(mapping.domain)
        self.best = None
        self.excluded = None
        self.evaluated = 0

    def evaluate(self, families, descriptor):
        """The quotient at `families`, or None when it cannot be computed"""
        try:
            if self.polynomial:
                sample = polynomial_quotient(self.mapping, families[0], self.p,
                                             self.q, self.budget, descriptor)
            else:
                sample = summing_quotient(self.mapping, families, self.p,
                                          self.q, self.budget, descriptor)
        except BudgetError as e:
            logger.warning("skipping %s candidate: %s"
                           % (descriptor.get('strategy'), e))
            return None
        except DegenerateInputError as e:
            logger.debug("skipping %s candidate: %s"
                         % (descriptor.get('strategy'), e))
            return None
        self.evaluated += 1
        if self.exact_only and sample.conservative:
            if self.excluded is None or sample.quotient > self.excluded.quotient:
                self.excluded = sample
            return sample
        if self.best is None or sample.quotient > self.best.quotient:
            self.best = sample
        return sample

    def basis(self):
        families = [VectorFamily.basis(s, self.n) for s in self.spaces]
        self.evaluate(families, {'strategy': BASIS})

    def fallback(self):
        """
        The sample to report when no strategy produced an admissible one:
        the best sample `exact_only` excluded, else the basis family, else
        the trivial quotient 0. Always flagged conservative.

        """
        sample = self.excluded
        if sample is None:
            families = [VectorFamily.basis(s, self.n) for s in self.spaces]
            sample = self.evaluate(families, {'strategy': BASIS})
        if sample is None:
            sample = QuotientSample(n=self.n, quotient=0.0,
                                    family_descriptor={'strategy': None})
        sample.conservative = True
        sample.family_descriptor['fallback'] = True
        return sample

    def witness(self, anchors):
        families = _anchor_families(anchors, self.spaces, self.n)
        if families is None:
            logger.debug("no witness anchors of length %d for %r"
                         % (self.n, self.mapping))
            return
        self.evaluate(families, {'strategy': WITNESS})

    def random(self):
        """
        Random unit families, each refined by perturbing one vector at a
        time and keeping the change when the quotient rises. The step
        size cools geometrically.

        """
        instance = self.mapping.fingerprint() + struct.pack(
            '<qdd', self.n, self.p, self.q)
        seed = derive_seed('maximize_quotient', instance, self.budget.seed)
        rng = np.random.default_rng(seed)

        for start in range(settings.REFINE_FAMILIES):
            families = [random_unit_family(s, self.n, rng) for s in self.spaces]
            descriptor = {'strategy': RANDOM, 'seed': seed, 'start': start}
            sample = self.evaluate(families, dict(descriptor, accepted=0))
            if sample is None:
                continue
            current, accepted = sample.quotient, 0
            step = settings.REFINE_STEP
            for _ in range(self.budget.refine_steps):
                slot = int(rng.integers(len(families)))
                k = int(rng.integers(self.n))
                family = families[slot]
                row = family.matrix[k] + step * rng.standard_normal(
                    family.space.dimension)
                norm = family.space.norm_of(row)
                step *= settings.REFINE_COOLING
                if not norm > 0:
                    continue
                candidate = list(families)
                candidate[slot] = family.with_row(k, row / norm)
                sample = self.evaluate(
                    candidate, dict(descriptor, accepted=accepted + 1))
                if sample is not None and sample.quotient > current:
                    families, current = candidate, sample.quotient
                    accepted += 1


def maximize_quotient(mapping, n, p, q, strategies=STRATEGIES, budget=None,
                      anchors=None, exact_only=False):
    """
    Best summing quotient of `mapping` over length-n families, trying
    canonical basis families, then witness anchors, then refined random
    families. With `exact_only` only quotients whose weak norms are all
    exact may win. Never raises for lack of an admissible family; see
    QuotientSearch.fallback.

    """
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1, got %d" % n)
    budget = budget or SearchBudget()
    search = QuotientSearch(mapping, n, p, q, budget, exact_only=exact_only)

    for strategy in strategies:
        if strategy == BASIS:
            search.basis()
        elif strategy == WITNESS:
            search.witness(anchors)
        elif strategy == RANDOM:
            search.random()
        else:
            raise DomainError("unknown family strategy %r (known: %s)"
                              % (strategy, ', '.join(STRATEGIES)))

    best = search.best
    if best is None:
        logger.warning("no admissible family for %r at n=%d; reporting a "
                       "fallback sample" % (mapping, n))
        best = search.fallback()
    elif best.conservative:
        logger.warning("best quotient of %r at n=%d rests on a searched weak "
                       "norm and may be overestimated" % (mapping, n))
    best.family_descriptor['evaluated'] = search.evaluated
    return best
