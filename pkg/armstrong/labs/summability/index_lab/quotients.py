import math
from dataclasses import dataclass, field

from .. import logger
from ..exceptions import DegenerateInputError, DomainError
from ..maps import mixed_power_sum, poly_power_sum
from ..weak_norms import weak_norm


@dataclass
class QuotientSample(object):
    """
    One summing quotient at size n. `conservative` is set when a weak
    norm in the denominator came from search, so the quotient may be
    overestimated.

    """
    n: int
    quotient: float
    family_descriptor: dict = field(default_factory=dict)
    conservative: bool = False
    numerator: float = None
    denominator: float = None

    def __post_init__(self):
        if not (math.isfinite(self.quotient) and self.quotient >= 0):
            raise DomainError("a quotient must be finite and nonnegative, "
                              "got %r" % (self.quotient,))

    def to_json(self):
        return {
            'n': self.n,
            'quotient': self.quotient,
            'numerator': self.numerator,
            'denominator': self.denominator,
            'conservative': self.conservative,
            'family': self.family_descriptor,
        }


def _weak_norms(families, q, budget):
    results = [weak_norm(family, q, budget) for family in families]
    for k, result in enumerate(results):
        if result.value == 0:
            raise DegenerateInputError("family %d has weak norm 0" % k)
    return results


def _descriptor(results, descriptor):
    data = dict(descriptor or {})
    data['weak_norms'] = [
        {'value': r.value, 'exact': r.is_exact(), 'backend': r.backend}
        for r in results]
    return data


def summing_quotient(T, families, p, q, budget=None, descriptor=None):
    """
    (sum over all tuples of ||T(x_k1, ..., x_km)||^p)^(1/p) divided by the
    product of the weak q-norms of the families.

    """
    families = list(families)
    if len(set(f.n for f in families)) > 1:
        raise DomainError("families of unequal length")
    weak = _weak_norms(families, q, budget)
    numerator = mixed_power_sum(T, families, p)
    denominator = math.prod(r.value for r in weak)
    conservative = not all(r.is_exact() for r in weak)
    if conservative:
        logger.debug("summing quotient of %r at n=%d uses a searched weak norm"
                     % (T, families[0].n))
    return QuotientSample(
        n=families[0].n, quotient=numerator / denominator,
        family_descriptor=_descriptor(weak, descriptor),
        conservative=conservative, numerator=numerator,
        denominator=denominator)


def polynomial_quotient(P, family, p, q, budget=None, descriptor=None):
    "(sum_k ||P(x_k)||^p)^(1/p) / ||(x_k)||_{w,q}^m"
    weak = _weak_norms([family], q, budget)
    numerator = poly_power_sum(P, family, p)
    denominator = weak[0].value ** P.degree
    conservative = not weak[0].is_exact()
    return QuotientSample(
        n=family.n, quotient=numerator / denominator,
        family_descriptor=_descriptor(weak, descriptor),
        conservative=conservative, numerator=numerator,
        denominator=denominator)
