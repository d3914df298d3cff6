import json
import os
import inspect
from functools import wraps

import numpy as np

from .. import logger
from ..ascent import SearchBudget
from ..conf import settings
from ..exceptions import (
    StructuralError, DomainError, ImproperlyConfigured)
from ..seeding import array_fingerprint
from ..spaces import Vector, Functional, SpaceDescriptor, lp_norm


class VectorFamily(object):
    """
    An ordered, nonempty list x_1, ..., x_n of vectors in one space.
    Stored as an n x d coordinate matrix (rows are the vectors).

    """
    def __init__(self, vectors, space=None):
        vectors = list(vectors)
        if not vectors:
            raise StructuralError("a vector family must be nonempty")
        space = space or vectors[0].space
        for v in vectors:
            if not isinstance(v, Vector) or v.space != space:
                raise StructuralError(
                    "every member of the family must be a Vector of %s" % space)
        matrix = np.vstack([v.coords for v in vectors])
        self._init(matrix, space)

    def _init(self, matrix, space):
        matrix = np.array(matrix, dtype=np.float64)
        matrix.setflags(write=False)
        self._matrix = matrix
        self._space = space

    @classmethod
    def from_matrix(cls, space, matrix):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        if matrix.shape[0] < 1:
            raise StructuralError("a vector family must be nonempty")
        if matrix.ndim != 2 or matrix.shape[1] != space.dimension:
            raise StructuralError("matrix of shape %s does not fit %s"
                                  % (matrix.shape, space))
        if not np.all(np.isfinite(matrix)):
            raise DomainError("coordinates must be finite")
        family = cls.__new__(cls)
        family._init(matrix, space)
        return family

    @classmethod
    def basis(cls, space, n=None):
        """e_1, ..., e_n, wrapping around when n exceeds the dimension"""
        n = space.dimension if n is None else int(n)
        matrix = np.zeros((n, space.dimension))
        matrix[np.arange(n), np.arange(n) % space.dimension] = 1.0
        return cls.from_matrix(space, matrix)

    @property
    def matrix(self):
        return self._matrix

    @property
    def space(self):
        return self._space

    @property
    def n(self):
        return self._matrix.shape[0]

    def __len__(self):
        return self.n

    def __getitem__(self, k):
        return Vector(self._matrix[k], self._space)

    def __iter__(self):
        for k in range(self.n):
            yield self[k]

    def __eq__(self, other):
        try:
            return (self.space == other.space and
                    np.array_equal(self.matrix, other.matrix))
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return 'VectorFamily(n=%d, space=%s)' % (self.n, self.space)

    def norms(self):
        return self.space.norm_of(self._matrix, axis=1)

    def is_zero(self):
        return not np.any(self._matrix)

    def scaled(self, factor):
        return VectorFamily.from_matrix(self.space, self._matrix * factor)

    def permuted(self, order):
        return VectorFamily.from_matrix(self.space, self._matrix[list(order)])

    def with_row(self, k, coords):
        matrix = np.array(self._matrix)
        matrix[k] = coords
        return VectorFamily.from_matrix(self.space, matrix)

    def canonical(self):
        """The same family with rows in lexicographic order"""
        order = np.lexsort(self._matrix.T[::-1])
        if np.array_equal(order, np.arange(self.n)):
            return self
        return self.permuted(order)

    def fingerprint(self):
        space = json.dumps(self.space.to_json(), sort_keys=True)
        return space.encode('utf-8') + array_fingerprint(self._matrix)

    def basis_support(self):
        """
        The coordinate of each vector if the family is made of distinct
        signed unit vectors +-e_i, otherwise None.

        """
        m = self._matrix
        nonzero = m != 0
        if not np.all(nonzero.sum(axis=1) == 1):
            return None
        support = np.argmax(nonzero, axis=1)
        if not np.all(np.abs(m[np.arange(self.n), support]) == 1.0):
            return None
        if np.unique(support).size != self.n:
            return None
        return support

    def to_json(self):
        return {'space': self.space.to_json(),
                'vectors': self._matrix.tolist()}

    @classmethod
    def from_json(cls, data):
        space = SpaceDescriptor.from_json(data['space'])
        return cls.from_matrix(space, data['vectors'])


def objective_values(matrix, certificates, q):
    """(sum_k |phi(x_k)|^q)^(1/q) for every row phi of `certificates`"""
    pairings = np.atleast_2d(certificates) @ matrix.T
    return lp_norm(pairings, q, axis=-1)


class InvalidResultError(Exception):
    pass


def get_backend(path):
    if not path:
        raise ImportError

    try:
        module, cls = path.rsplit('.', 1)
    except ValueError:
        raise ImportError

    from importlib import import_module
    module = import_module(module)
    return getattr(module, cls)()


def proxy(view_func=None):
    """Mark an attribute as proxyable"""

    def decorator(view_func):
        @wraps(view_func)
        def wrapper(*args, **kwargs):
            return view_func(*args, **kwargs)
        return wrapper

    retval = decorator if not view_func else decorator(view_func)
    retval.proxy = True
    return retval


class Backend(object):
    """
    A registered weak-norm evaluation path. Loads the backend code from
    `code_path` and passes its proxied methods through, so calling code
    talks to the registry entry and never to the backend directly.

    """
    def __init__(self, name, code_path, priority=0, description=''):
        self.name = name
        self.code_path = code_path
        self.priority = int(priority)
        self.description = description

        # Load the backend code and sanity check
        try:
            self._backend = get_backend(self.code_path)
        except (ImportError, AttributeError) as e:
            raise ImproperlyConfigured(
                'Backends must have a code module: %s (%s)'
                % (self.code_path, e))

        self._setup_backend_proxy_methods()

    def _setup_backend_proxy_methods(self):
        self._proxy_to_backend = []
        for name, func in inspect.getmembers(self._backend, inspect.ismethod):
            if getattr(func, 'proxy', False):
                self._proxy_to_backend.append(name)

    def __getattr__(self, name):
        if name != '_proxy_to_backend' and name in self._proxy_to_backend:
            return getattr(self._backend, name)
        return object.__getattribute__(self, name)

    def __repr__(self):
        return "Backend(%s, priority=%d)" % (self.name, self.priority)


_registry_cache = {}


def load_backends(fixture=None):
    """Registry entries from the JSON fixture, highest priority first"""

    fixture = fixture or settings.WEAK_NORM_BACKENDS_FIXTURE
    key = os.path.abspath(fixture)
    if key not in _registry_cache:
        try:
            with open(fixture) as fh:
                records = json.load(fh)
        except (IOError, ValueError) as e:
            raise ImproperlyConfigured(
                'Cannot read weak-norm backend registry %s: %s' % (fixture, e))
        backends = [Backend(**record['fields']) for record in records]
        backends.sort(key=lambda b: -b.priority)
        _registry_cache[key] = backends
    return _registry_cache[key]


def choose_backend(family, q, backends=None):
    """Determine the best Backend for this family and exponent"""

    for backend in (backends if backends is not None else load_backends()):
        if backend.accepts(family, q):
            return backend
    return None


def find_backend(name, backends=None):
    for backend in (backends if backends is not None else load_backends()):
        if backend.name == name:
            return backend
    raise ImproperlyConfigured('No weak-norm backend named "%s"' % name)


def weak_norm(family, q, budget=None, force=None):
    """
    ||(x_k)||_{w,q} = sup over the dual unit ball of (sum_k |phi(x_k)|^q)^(1/q).

    Rows are put in canonical order first so the result does not depend on
    the order of the family. Closed-form paths return exact results; the
    search fallback returns a certified lower bound. `force` names a
    registry backend to use instead of the highest priority one.

    """
    from .base_response import WeakNormResult

    q = float(q)
    if not q > 0:
        raise DomainError("weak norms need q > 0, got %r" % q)
    budget = budget or SearchBudget()
    family = family.canonical()

    if family.is_zero():
        return WeakNormResult(
            0.0, Functional(np.zeros(family.space.dimension), family.space),
            exact=True, backend='zero')

    if force:
        backend = find_backend(force)
        if not backend.accepts(family, q):
            raise DomainError("backend %s cannot evaluate %r at q=%g"
                              % (backend.name, family, q))
    else:
        backend = choose_backend(family, q)
    if backend is None:
        raise ImproperlyConfigured("no weak-norm backend accepts %r" % family)

    logger.debug("weak_norm(n=%d, %s, q=%g) via %s"
                 % (family.n, family.space, q, backend.name))
    result = backend.call(family, q, budget)
    if not isinstance(result, WeakNormResult):
        raise InvalidResultError("%s did not return a WeakNormResult"
                                 % backend.name)
    if not result.is_valid(family, q):
        raise InvalidResultError("%s returned an uncertified value %r"
                                 % (backend.name, result.value))
    return result


from .vertex import weak_norm_vertex_oracle  # noqa: E402
