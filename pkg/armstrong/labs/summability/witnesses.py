"""
Constructors for the extremal maps used to test summability exponents,
with the coefficient normalisations their norm estimates rely on.

Every constructor checks its coefficient constraint, its analytic norm
bound and the lower estimate at its anchors before returning.

"""
import math
from dataclasses import dataclass

import numpy as np

from .conf import settings
from .exceptions import BudgetError, ConfigError, DomainError, StructuralError
from .maps import (
    CotypeWitness, DenseTensor, DiagonalC0, RealEvenWitness, map_from_spec)
from .spaces import SpaceDescriptor, norming_rows
from .weak_norms import VectorFamily

SUM_RP = 'sum_rp'
SUM_INV_P = 'sum_inv_p'

NORM_SLACK = 1e-12
ANCHOR_SLACK = 1e-10


@dataclass(frozen=True)
class WitnessCoefficients(object):
    a: tuple
    constraint: str
    p: float
    r: float = None

    @classmethod
    def equal(cls, n, constraint, p, r=None):
        if constraint == SUM_RP:
            value = float(n) ** (-p / r)
        elif constraint == SUM_INV_P:
            value = float(n) ** (-p)
        else:
            raise DomainError("unknown coefficient constraint %r" % (constraint,))
        return cls((value,) * int(n), constraint, float(p), r)

    @property
    def power(self):
        if self.constraint == SUM_RP:
            return self.r / self.p
        return 1.0 / self.p

    def total(self):
        return math.fsum(abs(a) ** self.power for a in self.a)

    def holds(self, tol=1e-12):
        return abs(self.total() - 1.0) <= tol

    def to_json(self):
        return {'a': list(self.a), 'constraint': self.constraint,
                'p': self.p, 'r': self.r}


def tensor_witness(m, n):
    if int(n) ** int(m) > settings.TUPLE_BUDGET:
        raise BudgetError("%d^%d tuples exceed the tuple budget" % (n, m))
    return DiagonalC0(m, n)


def identity_witness(space):
    d = space.dimension
    return DenseTensor(np.eye(d), [space], space)


def _anchor_family(space_in, n, anchors):
    if anchors is None or anchors == 'basis':
        return VectorFamily.basis(space_in, n)
    if not isinstance(anchors, VectorFamily):
        anchors = VectorFamily.from_matrix(space_in, anchors)
    if anchors.space != space_in or anchors.n != n:
        raise StructuralError("%d anchors in %s expected, got %r"
                              % (n, space_in, anchors))
    return anchors


def _check_anchor_estimate(polynomial, anchors):
    """||P(x_k)|| >= |a_k|^(1/p) ||x_k||^m at every anchor"""
    values = polynomial.output_norms(anchors.matrix)
    floor = polynomial.weights * anchors.norms() ** polynomial.degree
    if np.any(values < floor - ANCHOR_SLACK):
        k = int(np.argmax(floor - values))
        raise DomainError("witness misses its lower estimate at anchor %d: "
                          "%.15g < %.15g" % (k, values[k], floor[k]))


def _check_norm_bound(bound):
    if bound > 1 + NORM_SLACK:
        raise DomainError("witness norm bound %.15g exceeds 1" % bound)


def cotype_witness(m, p, space_in, target_r, n, anchors='basis'):
    """
    P_n(x) = sum_j |a_j|^(1/p) x_j*(x)^m e_j into l_r^n with equal
    coefficients a_j = n^(-p/r). Returns the polynomial and its anchors.

    """
    m, n = int(m), int(n)
    p, r = float(p), float(target_r)
    if m < 1 or n < 1:
        raise DomainError("the cotype witness needs m, n >= 1")
    if r < 2:
        raise DomainError("target exponent r must be >= 2, got %g" % r)
    if not 0 < p < r:
        raise DomainError("the cotype witness needs 0 < p < r, got p=%g, r=%g"
                          % (p, r))

    coefficients = WitnessCoefficients.equal(n, SUM_RP, p, r)
    if not coefficients.holds():
        raise DomainError("coefficients violate sum |a_j|^(r/p) = 1")
    family = _anchor_family(space_in, n, anchors)
    functionals = norming_rows(space_in, family.matrix)
    targets = np.eye(n)
    polynomial = CotypeWitness(
        m, coefficients.a, functionals, targets, p,
        space_in, SpaceDescriptor.lp(r, n))

    # ||P|| <= (sum_j |a_j|^(r/p))^(1/r) for unit x_j* and y_j = e_j
    dual = space_in.dual_norm_of(functionals, axis=1)
    _check_norm_bound(
        math.fsum((polynomial.weights * dual ** m) ** r) ** (1.0 / r))
    _check_anchor_estimate(polynomial, family)
    return polynomial, family


def real_even_witness(m, p, space_in, n, anchors='basis'):
    """
    P_n(x) = sum_j |a_j|^(1/p) x_j*(x)^m, scalar valued and nonnegative,
    with a_j = n^(-p). Returns the polynomial and its anchors.

    """
    m, n = int(m), int(n)
    p = float(p)
    if m < 1 or m % 2:
        raise DomainError("the real even witness needs an even degree, got %d" % m)
    if not 0 < p < 1:
        raise DomainError("the real even witness needs 0 < p < 1, got %g" % p)
    if n < 1:
        raise DomainError("the real even witness needs n >= 1")

    coefficients = WitnessCoefficients.equal(n, SUM_INV_P, p)
    if not coefficients.holds():
        raise DomainError("coefficients violate sum |a_j|^(1/p) = 1")
    family = _anchor_family(space_in, n, anchors)
    functionals = norming_rows(space_in, family.matrix)
    polynomial = RealEvenWitness(m, coefficients.a, functionals, p, space_in)

    dual = space_in.dual_norm_of(functionals, axis=1)
    _check_norm_bound(math.fsum(polynomial.weights * dual ** m))
    _check_anchor_estimate(polynomial, family)
    return polynomial, family


def _spec_input_space(spec, n):
    data = dict(spec.get('space') or {'family': 'lp', 'p': 2})
    data.setdefault('dim', n)
    try:
        return SpaceDescriptor.from_json(data)
    except (StructuralError, DomainError) as e:
        raise ConfigError("bad space descriptor %r: %s" % (data, e))


def _spec_anchors(spec, space_in):
    anchors = spec.get('anchors', 'basis')
    if anchors == 'basis':
        return anchors
    try:
        return VectorFamily.from_matrix(space_in, anchors['vectors'])
    except (TypeError, KeyError) as e:
        raise ConfigError('custom anchors need {"vectors": [...]}: %s' % e)


def witness_from_spec(spec, n=None, base_dir=None):
    """
    Build (map, anchors) from an experiment config entry. Witness kinds:
    "diagonal" {m}, "identity" {space?}, "cotype" {m, p, r, space?,
    anchors?}, "real_even" {m, p, space?, anchors?}; `n` fills in the
    size. Anything else goes to maps.map_from_spec with no anchors.

    """
    kind = spec.get('kind')
    n = int(spec.get('n', n or 1))
    try:
        if kind == 'diagonal':
            return tensor_witness(spec['m'], n), None
        if kind == 'identity':
            return identity_witness(_spec_input_space(spec, n)), None
        if kind == 'cotype':
            space_in = _spec_input_space(spec, n)
            return cotype_witness(spec['m'], spec['p'], space_in, spec['r'], n,
                                  anchors=_spec_anchors(spec, space_in))
        if kind == 'real_even':
            space_in = _spec_input_space(spec, n)
            return real_even_witness(spec['m'], spec['p'], space_in, n,
                                     anchors=_spec_anchors(spec, space_in))
    except KeyError as e:
        raise ConfigError("witness spec of kind %s is missing %s" % (kind, e))
    return map_from_spec(spec, base_dir=base_dir), None
