"""
Finite-dimensional normed spaces over the reals.

Sequence spaces l_p^d (1 <= p <= inf) and sup-normed slices, the finite
sections of c_0 and C(K). Every value here is immutable once built.

"""
import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import StructuralError, DomainError, DegenerateInputError

INF = math.inf

SEQUENCE_LP = 'lp'
SUP_SLICE = 'sup'
FAMILIES = (SEQUENCE_LP, SUP_SLICE)


def is_inf(p):
    return p == INF


def dual_exponent(p):
    """The conjugate exponent p* with 1/p + 1/p* = 1"""

    if p is None or math.isnan(p) or p < 1:
        raise DomainError("conjugate exponent is undefined for p=%r" % (p,))
    if p == 1:
        return INF
    if is_inf(p):
        return 1.0
    return p / (p - 1.0)


def lp_norm(values, p, axis=-1):
    """
    (sum |v_i|^p)^(1/p) along `axis`, max |v_i| for p = inf. Also serves
    as the quasi-norm power sum for 0 < p < 1. Rows are rescaled by their
    largest entry so large and tiny coordinates neither overflow nor vanish.

    """
    a = np.abs(np.asarray(values, dtype=np.float64))
    if is_inf(p):
        return a.max(axis=axis, initial=0.0)
    if p == 1:
        return a.sum(axis=axis)
    scale = a.max(axis=axis, keepdims=True, initial=0.0)
    safe = np.where(scale > 0, scale, 1.0)
    total = ((a / safe) ** p).sum(axis=axis)
    return np.squeeze(safe, axis=axis) * total ** (1.0 / p)


@dataclass(frozen=True)
class SpaceDescriptor(object):
    family: str
    exponent: float
    dimension: int
    cotype: float = field(init=False, compare=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError("unknown space family %r" % (self.family,))
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DomainError("dimension must be a positive integer, got %r"
                              % (self.dimension,))
        object.__setattr__(self, 'dimension', int(self.dimension))

        if self.family == SUP_SLICE:
            object.__setattr__(self, 'exponent', INF)
        else:
            exponent = float(self.exponent)
            if math.isnan(exponent) or exponent < 1:
                raise DomainError("space exponent must be >= 1 or inf, got %r"
                                  % (self.exponent,))
            object.__setattr__(self, 'exponent', exponent)

        # cot(l_p) = max(2, p); sup-normed spaces have no finite cotype
        if is_inf(self.exponent):
            cotype = INF
        else:
            cotype = max(2.0, self.exponent)
        object.__setattr__(self, 'cotype', cotype)

    @classmethod
    def lp(cls, p, dimension):
        return cls(SEQUENCE_LP, p, dimension)

    @classmethod
    def sup(cls, dimension):
        return cls(SUP_SLICE, INF, dimension)

    @classmethod
    def real_line(cls):
        return cls(SEQUENCE_LP, 2.0, 1)

    @property
    def dual_exponent(self):
        return dual_exponent(self.exponent)

    def is_hilbert(self):
        return self.family == SEQUENCE_LP and self.exponent == 2

    def is_l1(self):
        return self.family == SEQUENCE_LP and self.exponent == 1

    def is_sup(self):
        return is_inf(self.exponent)

    def with_dimension(self, dimension):
        return type(self)(self.family, self.exponent, dimension)

    def norm_of(self, coords, axis=-1):
        return lp_norm(coords, self.exponent, axis=axis)

    def dual_norm_of(self, coords, axis=-1):
        return lp_norm(coords, self.dual_exponent, axis=axis)

    def to_json(self):
        p = 'inf' if is_inf(self.exponent) else self.exponent
        if self.family == SUP_SLICE:
            p = 'inf'
        return {'family': self.family, 'p': p, 'dim': self.dimension}

    @classmethod
    def from_json(cls, data):
        try:
            family = data['family']
            dim = data['dim']
        except (KeyError, TypeError):
            raise StructuralError(
                'space descriptor needs "family" and "dim": %r' % (data,))
        p = data.get('p', 'inf')
        if p in ('inf', 'Infinity', None):
            p = INF
        return cls(family, p, dim)

    def __str__(self):
        if self.family == SUP_SLICE:
            return 'sup^%d' % self.dimension
        p = 'inf' if is_inf(self.exponent) else '%g' % self.exponent
        return 'l_%s^%d' % (p, self.dimension)


def _coerce_coords(coords, space):
    coords = np.array(coords, dtype=np.float64).reshape(-1)
    if coords.shape[0] != space.dimension:
        raise StructuralError("%d coordinates do not fit %s"
                              % (coords.shape[0], space))
    if not np.all(np.isfinite(coords)):
        raise DomainError("coordinates must be finite")
    coords.setflags(write=False)
    return coords


class Vector(object):
    __slots__ = ('coords', 'space')

    def __init__(self, coords, space):
        object.__setattr__(self, 'space', space)
        object.__setattr__(self, 'coords', _coerce_coords(coords, space))

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    def __eq__(self, other):
        try:
            return (self.space == other.space and
                    np.array_equal(self.coords, other.coords))
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return 'Vector(%s, %s)' % (list(self.coords), self.space)

    def norm(self):
        return float(self.space.norm_of(self.coords))

    def scaled(self, factor):
        return Vector(self.coords * factor, self.space)

    def is_zero(self):
        return not np.any(self.coords)

    @classmethod
    def basis(cls, space, index):
        coords = np.zeros(space.dimension)
        coords[index] = 1.0
        return cls(coords, space)


class Functional(object):
    """A linear functional on `space`, stored by its coordinates"""

    __slots__ = ('coords', 'space')

    def __init__(self, coords, space):
        object.__setattr__(self, 'space', space)
        object.__setattr__(self, 'coords', _coerce_coords(coords, space))

    def __setattr__(self, name, value):
        raise AttributeError("Functional is immutable")

    def __call__(self, v):
        coords = v.coords if isinstance(v, Vector) else np.asarray(v)
        if coords.shape[-1] != self.space.dimension:
            raise StructuralError("functional on %s applied to %d coordinates"
                                  % (self.space, coords.shape[-1]))
        return coords @ self.coords

    def __repr__(self):
        return 'Functional(%s, %s)' % (list(self.coords), self.space)

    def dual_norm(self):
        return float(self.space.dual_norm_of(self.coords))


def _check_member(space, v):
    if isinstance(v, Vector):
        if v.space != space:
            raise StructuralError("vector of %s used in %s" % (v.space, space))
        return v.coords
    coords = np.asarray(v, dtype=np.float64)
    if coords.shape != (space.dimension,):
        raise StructuralError("shape %s does not fit %s"
                              % (coords.shape, space))
    return coords


def norm(space, v):
    return float(space.norm_of(_check_member(space, v)))


def norming_coords(space, coords):
    """
    Coordinates of a unit dual functional phi with phi(v) = ||v||. Ties in
    sup-normed spaces go to the lowest index.

    """
    coords = np.asarray(coords, dtype=np.float64)
    if not np.any(coords):
        raise DegenerateInputError("the zero vector has no norming functional")
    p = space.exponent
    if is_inf(p):
        phi = np.zeros_like(coords)
        i0 = int(np.argmax(np.abs(coords)))
        phi[i0] = np.sign(coords[i0])
        return phi
    if p == 1:
        return np.sign(coords)
    u = coords / space.norm_of(coords)
    return np.sign(u) * np.abs(u) ** (p - 1.0)


def norming_functional(space, v):
    coords = _check_member(space, v)
    return Functional(norming_coords(space, coords), space)


def norming_rows(space, rows):
    """
    norming_coords for every row of a matrix. Zero rows map to the zero
    functional instead of raising.

    """
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    p = space.exponent
    if is_inf(p):
        phi = np.zeros_like(rows)
        top = np.argmax(np.abs(rows), axis=1)
        index = np.arange(rows.shape[0])
        phi[index, top] = np.sign(rows[index, top])
        return phi
    if p == 1:
        return np.sign(rows)
    norms = space.norm_of(rows, axis=1)
    safe = np.where(norms > 0, norms, 1.0)[:, None]
    u = rows / safe
    return np.sign(u) * np.abs(u) ** (p - 1.0)
