"""
Bounded multilinear maps and homogeneous polynomials between
finite-dimensional spaces, and the power sums that form the numerators
of every summing quotient.

Batched evaluation takes one (R, d_i) coordinate array per slot and
returns an (R, d_out) array, so search routines can evaluate all of
their restarts in one call.

"""
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from . import logger
from .ascent import (
    SearchBudget, multistart_ascent, quasi_random_directions, sphere_projector)
from .conf import settings, worker_count
from .exceptions import BudgetError, ConfigError, DomainError, StructuralError
from .seeding import array_fingerprint, rng_for
from .spaces import SpaceDescriptor, Vector, norming_rows

# array elements materialised per partition of a mixed power sum
BLOCK_ELEMENTS = 1 << 22

SYMMETRY_TOL = 1e-12
CONSTRAINT_TOL = 1e-12


def _contract_batch(t, args, skip=None):
    """
    `t` has shape (R, d_1, ..., d_m, *rest). Contract row r of args[j]
    into slot j for every j except `skip`, whose axis ends up last.

    """
    if skip is not None:
        t = np.moveaxis(t, skip + 1, -1)
    for j, x in enumerate(args):
        if j != skip:
            t = np.einsum('ri,ri...->r...', x, t)
    return t


def _coords_of(space, v):
    if isinstance(v, Vector):
        if v.space != space:
            raise StructuralError("argument in %s, expected %s" % (v.space, space))
        return v.coords
    coords = np.asarray(v, dtype=np.float64)
    if coords.shape != (space.dimension,):
        raise StructuralError("argument of shape %s does not fit %s"
                              % (coords.shape, space))
    return coords


class MultilinearMap(object):
    """T : E_1 x ... x E_m -> F"""

    body = None

    def __init__(self, domain, codomain):
        self.domain = tuple(domain)
        self.codomain = codomain
        if not self.domain:
            raise StructuralError("a multilinear map needs at least one slot")

    @property
    def arity(self):
        return len(self.domain)

    def __repr__(self):
        return "%s(%s -> %s)" % (
            self.__class__.__name__,
            ' x '.join(str(s) for s in self.domain), self.codomain)

    def evaluate_batch(self, args):
        raise NotImplementedError()  # pragma: no cover

    def output_norms(self, args):
        return self.codomain.norm_of(self.evaluate_batch(args), axis=1)

    def jacobian_products(self, args, psi):
        """Gradient of x -> psi_r(T(x)) in every slot, row by row"""
        raise NotImplementedError()  # pragma: no cover

    def tuple_norms(self, matrices, lead):
        """
        ||T(x_k1, ..., x_km)|| for every tuple whose first index lies in
        the slice `lead`, flattened in row-major tuple order.

        """
        raise NotImplementedError()  # pragma: no cover

    def tuple_width(self):
        return self.codomain.dimension

    def arrays(self):
        return ()

    def to_json(self):
        return {
            'kind': self.body,
            'arity': self.arity,
            'domain': [s.to_json() for s in self.domain],
            'codomain': self.codomain.to_json(),
        }

    def fingerprint(self):
        description = json.dumps(self.to_json(), sort_keys=True)
        return description.encode('utf-8') + array_fingerprint(*self.arrays())


class DenseTensor(MultilinearMap):
    "Coefficients of shape d_1 x ... x d_m x d_out"
    body = 'tensor'

    def __init__(self, coefficients, domain, codomain):
        super(DenseTensor, self).__init__(domain, codomain)
        coefficients = np.array(coefficients, dtype=np.float64)
        expected = tuple(s.dimension for s in self.domain) + (codomain.dimension,)
        if coefficients.shape != expected:
            raise StructuralError("coefficient array of shape %s, expected %s"
                                  % (coefficients.shape, expected))
        if not np.all(np.isfinite(coefficients)):
            raise DomainError("tensor coefficients must be finite")
        coefficients.setflags(write=False)
        self.coefficients = coefficients

    def evaluate_batch(self, args):
        rows = args[0].shape[0]
        t = np.broadcast_to(self.coefficients, (rows,) + self.coefficients.shape)
        return _contract_batch(t, args)

    def jacobian_products(self, args, psi):
        t = np.einsum('...o,ro->r...', self.coefficients, psi)
        return [_contract_batch(t, args, skip=i) for i in range(self.arity)]

    def tuple_norms(self, matrices, lead):
        out = np.tensordot(matrices[0][lead], self.coefficients, axes=(1, 0))
        for i in range(1, self.arity):
            out = np.tensordot(out, matrices[i], axes=([i], [1]))
            out = np.moveaxis(out, -1, i)
        out = out.reshape(-1, self.codomain.dimension)
        return self.codomain.norm_of(out, axis=1)

    def arrays(self):
        return (self.coefficients,)

    def to_json(self):
        data = super(DenseTensor, self).to_json()
        data['shape'] = list(self.coefficients.shape)
        return data


class DiagonalC0(MultilinearMap):
    """
    (x^(1), ..., x^(m)) -> (x^(1)_j1 ... x^(m)_jm) over all multi-indices,
    from (l_2^n)^m into the sup-normed slice of dimension n^m. The
    operator norm is exactly 1.

    """
    body = 'diagonal'

    def __init__(self, m, n):
        m, n = int(m), int(n)
        if m < 1 or n < 1:
            raise DomainError("the diagonal map needs m, n >= 1")
        space = SpaceDescriptor.lp(2, n)
        super(DiagonalC0, self).__init__([space] * m, SpaceDescriptor.sup(n ** m))
        self.m, self.n = m, n

    def evaluate_batch(self, args):
        if self.n ** self.m > settings.TUPLE_BUDGET:
            raise BudgetError("an output of %d^%d coordinates exceeds the "
                              "tuple budget" % (self.n, self.m))
        rows = args[0].shape[0]
        out = args[0]
        for x in args[1:]:
            out = (out[:, :, None] * x[:, None, :]).reshape(rows, -1)
        return out

    def output_norms(self, args):
        # the sup of an outer product is the product of the sups
        norms = np.ones(args[0].shape[0])
        for x in args:
            norms = norms * np.abs(x).max(axis=1)
        return norms

    def jacobian_products(self, args, psi):
        rows = psi.shape[0]
        t = psi.reshape((rows,) + (self.n,) * self.m)
        return [_contract_batch(t, args, skip=i) for i in range(self.m)]

    def tuple_norms(self, matrices, lead):
        sups = [np.abs(x).max(axis=1) for x in matrices]
        out = sups[0][lead]
        for s in sups[1:]:
            out = np.multiply.outer(out, s).reshape(-1)
        return out

    def tuple_width(self):
        return 1

    def to_json(self):
        data = super(DiagonalC0, self).to_json()
        data.update(m=self.m, n=self.n)
        return data


class HomogeneousPolynomial(object):
    """P : E -> F, homogeneous of degree m"""

    body = None

    def __init__(self, degree, domain, codomain):
        degree = int(degree)
        if degree < 1:
            raise DomainError("degree must be a positive integer")
        self.degree = degree
        self.domain = domain
        self.codomain = codomain

    def __repr__(self):
        return "%s(degree=%d, %s -> %s)" % (
            self.__class__.__name__, self.degree, self.domain, self.codomain)

    def evaluate_batch(self, points):
        raise NotImplementedError()  # pragma: no cover

    def gradient_products(self, points, psi):
        """Gradient of x -> psi_r(P(x)) at every row"""
        raise NotImplementedError()  # pragma: no cover

    def output_norms(self, points):
        return self.codomain.norm_of(self.evaluate_batch(points), axis=1)

    def arrays(self):
        return ()

    def to_json(self):
        return {
            'kind': self.body,
            'degree': self.degree,
            'domain': self.domain.to_json(),
            'codomain': self.codomain.to_json(),
        }

    def fingerprint(self):
        description = json.dumps(self.to_json(), sort_keys=True)
        return description.encode('utf-8') + array_fingerprint(*self.arrays())


class DenseSymmetric(HomogeneousPolynomial):
    "A symmetric coefficient tensor of shape d x ... x d x d_out"
    body = 'dense'

    def __init__(self, coefficients, domain, codomain):
        coefficients = np.array(coefficients, dtype=np.float64)
        degree = coefficients.ndim - 1
        super(DenseSymmetric, self).__init__(degree, domain, codomain)
        expected = (domain.dimension,) * degree + (codomain.dimension,)
        if coefficients.shape != expected:
            raise StructuralError("coefficient array of shape %s, expected %s"
                                  % (coefficients.shape, expected))
        scale = max(1.0, float(np.abs(coefficients).max(initial=0.0)))
        for perm in itertools.permutations(range(degree)):
            swapped = np.transpose(coefficients, perm + (degree,))
            if not np.allclose(swapped, coefficients, rtol=0,
                               atol=SYMMETRY_TOL * scale):
                raise DomainError("polynomial coefficients must be symmetric")
        coefficients.setflags(write=False)
        self.coefficients = coefficients

    def evaluate_batch(self, points):
        rows = points.shape[0]
        t = np.broadcast_to(self.coefficients, (rows,) + self.coefficients.shape)
        return _contract_batch(t, [points] * self.degree)

    def gradient_products(self, points, psi):
        t = np.einsum('...o,ro->r...', self.coefficients, psi)
        return self.degree * _contract_batch(t, [points] * self.degree, skip=0)

    def arrays(self):
        return (self.coefficients,)


class WitnessPolynomial(HomogeneousPolynomial):
    """
    x -> sum_j |a_j|^(1/p) x_j*(x)^m y_j for coefficients a_j, functionals
    x_j* (rows of `functionals`) and targets y_j (rows of `targets`).

    """
    def __init__(self, degree, coefficients, functionals, targets, p,
                 domain, codomain):
        super(WitnessPolynomial, self).__init__(degree, domain, codomain)
        p = float(p)
        if not p > 0:
            raise DomainError("witness exponent must be positive, got %r" % p)
        coefficients = np.array(coefficients, dtype=np.float64).reshape(-1)
        functionals = np.atleast_2d(np.array(functionals, dtype=np.float64))
        targets = np.atleast_2d(np.array(targets, dtype=np.float64))
        terms = coefficients.shape[0]
        if functionals.shape != (terms, domain.dimension):
            raise StructuralError("%d functionals on %s expected, got shape %s"
                                  % (terms, domain, functionals.shape))
        if targets.shape != (terms, codomain.dimension):
            raise StructuralError("%d targets in %s expected, got shape %s"
                                  % (terms, codomain, targets.shape))
        for array in (coefficients, functionals, targets):
            array.setflags(write=False)
        self.coefficients = coefficients
        self.functionals = functionals
        self.targets = targets
        self.p = p
        self.weights = np.abs(coefficients) ** (1.0 / p)

    @property
    def terms(self):
        return self.coefficients.shape[0]

    def _check_constraint(self, power, label):
        total = math.fsum((np.abs(self.coefficients) ** power).tolist())
        if abs(total - 1.0) > CONSTRAINT_TOL:
            raise DomainError("%s: sum |a_j|^%g = %.15g, expected 1"
                              % (label, power, total))

    def evaluate_batch(self, points):
        pairings = points @ self.functionals.T
        return (self.weights * pairings ** self.degree) @ self.targets

    def gradient_products(self, points, psi):
        pairings = points @ self.functionals.T
        scale = self.degree * self.weights * pairings ** (self.degree - 1)
        return (scale * (psi @ self.targets.T)) @ self.functionals

    def arrays(self):
        return (self.coefficients, self.functionals, self.targets)

    def to_json(self):
        data = super(WitnessPolynomial, self).to_json()
        data.update(p=self.p, terms=self.terms,
                    coefficients=self.coefficients.tolist())
        return data


class CotypeWitness(WitnessPolynomial):
    "Into l_r with sum_j |a_j|^(r/p) = 1, r the cotype of the codomain"
    body = 'cotype'

    def __init__(self, degree, coefficients, functionals, targets, p,
                 domain, codomain):
        super(CotypeWitness, self).__init__(
            degree, coefficients, functionals, targets, p, domain, codomain)
        self.r = codomain.cotype
        if not math.isfinite(self.r):
            raise DomainError("the target space %s has no finite cotype" % codomain)
        self._check_constraint(self.r / self.p, 'cotype witness')

    def to_json(self):
        data = super(CotypeWitness, self).to_json()
        data['r'] = self.r
        return data


class RealEvenWitness(WitnessPolynomial):
    "Scalar valued, even degree, sum_j |a_j|^(1/p) = 1"
    body = 'real_even'

    def __init__(self, degree, coefficients, functionals, p, domain):
        if int(degree) % 2:
            raise DomainError("the real even witness needs an even degree, "
                              "got %r" % degree)
        codomain = SpaceDescriptor.real_line()
        targets = np.ones((len(np.atleast_1d(coefficients)), 1))
        super(RealEvenWitness, self).__init__(
            degree, coefficients, functionals, targets, p, domain, codomain)
        self._check_constraint(1.0 / self.p, 'real even witness')


def eval_multilinear(T, args):
    if len(args) != T.arity:
        raise StructuralError("%r takes %d arguments, got %d"
                              % (T, T.arity, len(args)))
    coords = [_coords_of(s, v)[None, :] for s, v in zip(T.domain, args)]
    return Vector(T.evaluate_batch(coords)[0], T.codomain)


def eval_polynomial(P, x):
    coords = _coords_of(P.domain, x)[None, :]
    return Vector(P.evaluate_batch(coords)[0], P.codomain)


def _check_power(p):
    p = float(p)
    if not p > 0:
        raise DomainError("power sums need p > 0, got %r" % p)
    return p


def mixed_power_sum(T, families, p):
    """
    (sum over all n^m tuples of ||T(x_k1, ..., x_km)||^p)^(1/p).

    The leading index is split into partitions that run on a thread pool;
    each partition is summed with math.fsum and the partials are combined
    in index order, so the result does not depend on the partitioning.

    """
    p = _check_power(p)
    families = list(families)
    if len(families) != T.arity:
        raise StructuralError("%r takes %d families, got %d"
                              % (T, T.arity, len(families)))
    for space, family in zip(T.domain, families):
        if family.space != space:
            raise StructuralError("family in %s, expected %s"
                                  % (family.space, space))
    sizes = set(f.n for f in families)
    if len(sizes) != 1:
        raise StructuralError("families of unequal lengths %s" % sorted(sizes))
    n = sizes.pop()
    tuples = n ** T.arity
    if tuples > settings.TUPLE_BUDGET:
        raise BudgetError("%d tuples exceed the tuple budget of %d"
                          % (tuples, settings.TUPLE_BUDGET))

    matrices = [f.matrix for f in families]
    per_lead = max(tuples // n, 1) * T.tuple_width()
    block = max(BLOCK_ELEMENTS // per_lead, 1)
    leads = [slice(start, min(start + block, n)) for start in range(0, n, block)]

    def partial(lead):
        norms = T.tuple_norms(matrices, lead)
        return math.fsum((norms ** p).tolist())

    if len(leads) == 1:
        partials = [partial(leads[0])]
    else:
        with ThreadPoolExecutor(max_workers=worker_count()) as pool:
            partials = list(pool.map(partial, leads))
    logger.debug("mixed_power_sum: %d tuples in %d partitions"
                 % (tuples, len(leads)))
    return math.fsum(partials) ** (1.0 / p)


def poly_power_sum(P, family, p):
    """(sum_k ||P(x_k)||^p)^(1/p)"""
    p = _check_power(p)
    if family.space != P.domain:
        raise StructuralError("family in %s, expected %s"
                              % (family.space, P.domain))
    norms = P.output_norms(family.matrix)
    return math.fsum((norms ** p).tolist()) ** (1.0 / p)


@dataclass
class OperatorNormResult(object):
    value: float
    certificate: List[Vector] = field(repr=False)
    exact: bool = False

    def to_json(self):
        return {
            'value': self.value,
            'exact': self.exact,
            'certificate': [v.coords.tolist() for v in self.certificate],
        }


def _block_projector(spaces):
    bounds = np.cumsum([0] + [s.dimension for s in spaces])
    projectors = [sphere_projector(s.exponent) for s in spaces]

    def project(points):
        return np.hstack([
            projector(points[:, lo:hi])
            for projector, lo, hi in zip(projectors, bounds[:-1], bounds[1:])])
    return project, bounds


def _basis_starts(spaces, count):
    rows = []
    for j in range(count):
        row = []
        for s in spaces:
            block = np.zeros(s.dimension)
            block[j % s.dimension] = 1.0
            row.append(block)
        rows.append(np.concatenate(row))
    return np.array(rows).reshape(count, -1)


def operator_norm(mapping, budget=None):
    """
    sup of ||T(x_1, ..., x_m)|| (or ||P(x)||) over unit vectors. Closed
    form for the diagonal map; otherwise a lower bound from multistart
    ascent with the maximising arguments attached.

    """
    budget = budget or SearchBudget()
    if isinstance(mapping, DiagonalC0):
        certificate = [Vector.basis(s, 0) for s in mapping.domain]
        return OperatorNormResult(1.0, certificate, exact=True)

    if isinstance(mapping, HomogeneousPolynomial):
        spaces = [mapping.domain]

        def outputs(args):
            return mapping.evaluate_batch(args[0])

        def gradients(args, psi):
            return [mapping.gradient_products(args[0], psi)]
    else:
        spaces = list(mapping.domain)
        outputs = mapping.evaluate_batch
        gradients = mapping.jacobian_products

    project, bounds = _block_projector(spaces)
    codomain = mapping.codomain

    def objective(points):
        args = [points[:, lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:])]
        out = outputs(args)
        psi = norming_rows(codomain, out)
        return codomain.norm_of(out, axis=1), np.hstack(gradients(args, psi))

    rng = rng_for('operator_norm', mapping.fingerprint(), budget.seed)
    basis_count = min(max(s.dimension for s in spaces), max(budget.restarts // 4, 1))
    starts = np.vstack([
        _basis_starts(spaces, basis_count),
        quasi_random_directions(
            max(budget.restarts - basis_count, 1), int(bounds[-1]), rng)])

    result = multistart_ascent(
        objective, starts, project, budget.max_iter, budget.tol)
    if result.exhausted:
        logger.warning("operator_norm of %r stopped at the iteration budget; "
                       "%.12g is a lower bound" % (mapping, result.value))
    certificate = [Vector(result.point[lo:hi], s)
                   for s, lo, hi in zip(spaces, bounds[:-1], bounds[1:])]
    return OperatorNormResult(result.value, certificate, exact=False)


NPY_SUFFIX = '.npy'


def load_tensor(path):
    """
    Read a dense tensor: a .npy file, or the JSON container
    {"shape": [...], "data": [row-major floats]}.

    """
    if path.endswith(NPY_SUFFIX):
        try:
            return np.load(path, allow_pickle=False).astype(np.float64)
        except (IOError, ValueError) as e:
            raise ConfigError("cannot read tensor %s: %s" % (path, e))
    try:
        with open(path) as fh:
            container = json.load(fh)
    except (IOError, ValueError) as e:
        raise ConfigError("cannot read tensor %s: %s" % (path, e))
    return _tensor_from_container(container, path)


def _tensor_from_container(container, source):
    try:
        shape = tuple(int(d) for d in container['shape'])
        data = np.array(container['data'], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError('tensor %s needs "shape" and "data": %s' % (source, e))
    if data.size != int(np.prod(shape)):
        raise ConfigError("tensor %s: %d values do not fill shape %s"
                          % (source, data.size, shape))
    return data.reshape(shape)


def dump_tensor(array, path):
    """Write `array` as .npy when the path says so, else as the JSON container"""
    array = np.asarray(array, dtype=np.float64)
    if path.endswith(NPY_SUFFIX):
        np.save(path, array, allow_pickle=False)
        return
    with open(path, 'w') as fh:
        json.dump({'shape': list(array.shape),
                   'data': array.reshape(-1).tolist()}, fh)


def _spec_tensor(spec, base_dir):
    if 'file' in spec:
        path = spec['file']
        if base_dir and not os.path.isabs(path):
            path = os.path.join(base_dir, path)
        return load_tensor(path)
    return _tensor_from_container(spec, 'inline')


def _spec_space(data):
    try:
        return SpaceDescriptor.from_json(data)
    except (StructuralError, DomainError) as e:
        raise ConfigError("bad space descriptor %r: %s" % (data, e))


def map_from_spec(spec, base_dir=None):
    """
    Build a map from an experiment config entry:
    {"kind": "tensor", "domain": [spaces], "codomain": space, "file"|"shape"+"data"}
    or {"kind": "dense", "domain": space, "codomain": space, ...} for a
    symmetric polynomial.

    """
    kind = spec.get('kind')
    try:
        if kind == 'tensor':
            domain = [_spec_space(s) for s in spec['domain']]
            return DenseTensor(_spec_tensor(spec, base_dir), domain,
                               _spec_space(spec['codomain']))
        if kind == 'dense':
            return DenseSymmetric(_spec_tensor(spec, base_dir),
                                  _spec_space(spec['domain']),
                                  _spec_space(spec['codomain']))
    except KeyError as e:
        raise ConfigError("map spec of kind %s is missing %s" % (kind, e))
    except (StructuralError, DomainError) as e:
        raise ConfigError("invalid %s map: %s" % (kind, e))
    raise ConfigError("unknown map kind %r" % (kind,))
