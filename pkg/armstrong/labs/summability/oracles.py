"""
Deliberately plain reference implementations and growth checks.

The brute-force routines are serial loops with naive accumulation; when
one disagrees with the optimised path beyond tolerance, the optimised
path is the one at fault. Checks return JSON-able report dicts with a
boolean "passed".

"""
import itertools
import math

import numpy as np

from .ascent import SearchBudget, quasi_random_directions, sphere_projector
from .conf import settings
from .exceptions import BudgetError, DomainError
from .index_lab import (
    KONIG_CONSTANT, estimate_index, identity_summing_cap, inclusion_cap,
    konig_exponent, lemar_exponent, lower_bound_pol_cotype,
    lower_bound_pol_real_even, maximize_quotient, polynomial_quotient,
    summing_quotient)
from .index_lab.bounds import cotype_branch, real_even_branch
from .index_lab.regression import MIN_GRID
from .maps import eval_multilinear
from .seeding import rng_for
from .spaces import SpaceDescriptor, lp_norm, norm
from .weak_norms import VectorFamily
from .witnesses import cotype_witness, identity_witness, real_even_witness

DEFAULT_GRID = (2, 4, 8, 16)
SLOPE_TOL = 0.01
SAMPLE_CHUNK = 1 << 16

COTYPE = 'cotype'
REAL_EVEN = 'real_even'


def brute_force_mixed_sum(T, families, p):
    if not p > 0:
        raise DomainError("power sums need p > 0, got %r" % (p,))
    n = families[0].n
    if n ** T.arity > settings.ORACLE_TUPLE_BUDGET:
        raise BudgetError("%d^%d tuples exceed the oracle budget of %d"
                          % (n, T.arity, settings.ORACLE_TUPLE_BUDGET))
    total = 0.0
    for index in itertools.product(range(n), repeat=T.arity):
        value = eval_multilinear(T, [f.matrix[k] for f, k in zip(families, index)])
        total += norm(T.codomain, value) ** p
    return total ** (1.0 / p)


def brute_force_weak_norm(family, q, resolution=10 ** 6, seed=None):
    """
    Largest objective over `resolution` quasi-random points of the dual
    unit sphere. Always a lower bound.

    """
    space = family.space
    if space.dimension > settings.ORACLE_SAMPLE_MAX_DIM:
        raise BudgetError("dense sampling is limited to dimension %d, got %d"
                          % (settings.ORACLE_SAMPLE_MAX_DIM, space.dimension))
    if resolution > settings.ORACLE_MAX_SAMPLES:
        raise BudgetError("%d samples exceed the oracle limit of %d"
                          % (resolution, settings.ORACLE_MAX_SAMPLES))
    rng = rng_for('brute_force_weak_norm', family.fingerprint(), seed)
    project = sphere_projector(space.dual_exponent)
    best, drawn = 0.0, 0
    while drawn < resolution:
        count = min(SAMPLE_CHUNK, resolution - drawn)
        points = project(quasi_random_directions(count, space.dimension, rng))
        values = lp_norm(points @ family.matrix.T, q, axis=1)
        best = max(best, float(values.max()))
        drawn += count
    return best


def _identity_on_l2(d):
    return identity_witness(SpaceDescriptor.lp(2, d))


def _basis_quotient(T, n, p, q, budget=None):
    family = VectorFamily.basis(T.domain[0], n)
    return summing_quotient(T, [family], p, q, budget)


def pietsch_check(d, budget=None):
    """The identity of l_2^d has 2-summing quotient exactly sqrt(d) at n = d"""

    d = int(d)
    if not 1 <= d <= 32:
        raise DomainError("pietsch_check needs 1 <= d <= 32, got %d" % d)
    budget = budget or SearchBudget()
    T = _identity_on_l2(d)
    expected = math.sqrt(d)
    best = maximize_quotient(T, d, 2, 2, budget=budget)
    basis = _basis_quotient(T, d, 2, 2, budget)
    passed = (expected - 1e-9 <= best.quotient <= expected + 1e-6 and
              abs(basis.quotient - expected) <= 1e-9)
    return {
        'check': 'pietsch', 'd': d, 'expected': expected,
        'best': best.quotient, 'strategy': best.family_descriptor.get('strategy'),
        'basis': basis.quotient, 'passed': bool(passed),
    }


def _growth_report(check, samples, expected_slope, **extra):
    """
    Regress the samples when the grid allows it. With fewer than MIN_GRID
    distinct sizes there is no slope, and `slope_ok` is None.

    """
    estimate, slope_ok = None, None
    if len(set(s.n for s in samples)) >= MIN_GRID:
        estimate = estimate_index(samples)
        slope_ok = bool(abs(estimate.slope - expected_slope) <= SLOPE_TOL)
    report = {
        'check': check,
        'expected_slope': expected_slope,
        'estimate': estimate.to_json() if estimate else None,
        'samples': [s.to_json() for s in samples],
        'slope_ok': slope_ok,
    }
    report.update(extra)
    return report


def _slope_passes(report):
    return report['slope_ok'] is not False


def konig_growth_check(q, n_grid=DEFAULT_GRID, budget=None):
    """
    Basis families give the identity of l_2^n the quotient n^(1/q) at
    (q, 2); it must dominate (2e)^-1 n^(1/q) and grow with slope 1/q.

    """
    exponent = konig_exponent(q)
    samples, floors_ok = [], True
    for n in n_grid:
        sample = _basis_quotient(_identity_on_l2(n), n, q, 2, budget)
        samples.append(sample)
        floors_ok &= sample.quotient >= KONIG_CONSTANT * n ** exponent
    report = _growth_report('konig', samples, exponent, q=q,
                            constant=KONIG_CONSTANT,
                            floors_ok=bool(floors_ok))
    report['passed'] = bool(_slope_passes(report) and floors_ok)
    return report


def corollary22_check(p, d, budget=None):
    """No exact-path quotient of id on l_2^d at (p, p), n = d, exceeds d^max(1/p, 1/2)"""

    d = int(d)
    if not p > 0:
        raise DomainError("corollary22_check needs p > 0, got %r" % (p,))
    if not 1 <= d <= 16:
        raise DomainError("corollary22_check needs 1 <= d <= 16, got %d" % d)
    cap = identity_summing_cap(p, d)
    best = maximize_quotient(_identity_on_l2(d), d, p, p, budget=budget,
                             exact_only=True)
    return {
        'check': 'corollary22', 'p': p, 'd': d, 'cap': cap,
        'best': best.quotient, 'strategy': best.family_descriptor.get('strategy'),
        'passed': bool(best.quotient <= cap * (1 + 1e-6)),
    }


def inclusion_check(p, q, d, budget=None):
    """Exact-path quotients of id on l_2^d at (p, q), n = d, stay below inclusion_cap"""

    d = int(d)
    cap = inclusion_cap(p, q, d)
    best = maximize_quotient(_identity_on_l2(d), d, p, q, budget=budget,
                             exact_only=True)
    return {
        'check': 'inclusion', 'p': p, 'q': q, 'd': d, 'cap': cap,
        'best': best.quotient, 'strategy': best.family_descriptor.get('strategy'),
        'passed': bool(best.quotient <= cap * (1 + 1e-6)),
    }


def lemar_growth_check(s, d_param, n_grid=DEFAULT_GRID):
    """
    Basis families give the identity of l_2^n the quotient
    n^(1/s - max(0, 1/d - 1/2)) at (s, d), which for 1 <= d <= s <= 2 is
    n^lemar_exponent(s, d).

    """
    exponent = lemar_exponent(s, d_param)
    samples, exact_ok = [], True
    for n in n_grid:
        sample = _basis_quotient(_identity_on_l2(n), n, s, d_param)
        samples.append(sample)
        expected = float(n) ** exponent
        exact_ok &= abs(sample.quotient - expected) <= 1e-9 * expected
    report = _growth_report('lemar', samples, exponent, s=s,
                            d=d_param, exact_ok=bool(exact_ok))
    report['passed'] = bool(_slope_passes(report) and exact_ok)
    return report


def witness_exponent(kind, m, p, q, r=None):
    """Growth of the witness quotient with basis anchors in l_2^n"""
    loss = m * max(0.0, 1.0 / q - 0.5)
    if kind == COTYPE:
        return 1.0 / p - 1.0 / r - loss
    if kind == REAL_EVEN:
        return (1.0 - p) / p - loss
    raise DomainError("unknown witness kind %r" % (kind,))


def witness_growth_check(kind, m, p, q, r=None, n_grid=DEFAULT_GRID,
                         budget=None):
    """
    Polynomial quotients of a witness at its own basis anchors regress to
    witness_exponent. Where the top branch of the matching lower bound
    applies (q >= 2, p past the upper seam) the two must coincide.

    """
    expected = witness_exponent(kind, m, p, q, r)
    samples = []
    for n in n_grid:
        space_in = SpaceDescriptor.lp(2, n)
        if kind == COTYPE:
            P, anchors = cotype_witness(m, p, space_in, r, n)
        else:
            P, anchors = real_even_witness(m, p, space_in, n)
        samples.append(polynomial_quotient(P, anchors, p, q, budget))

    report = _growth_report('witness_growth', samples, expected,
                            kind=kind, m=m, p=p, q=q, r=r)
    if kind == COTYPE:
        branch = cotype_branch(m, p, q, r)
        bound = lower_bound_pol_cotype(m, p, q, r) if branch else None
    else:
        branch = real_even_branch(m, p, q)
        bound = lower_bound_pol_real_even(m, p, q) if branch else None
    report.update(branch=branch, lower_bound=bound)

    matches = True
    if branch == 'd':
        matches = abs(expected - bound) <= 1e-12
    report['bound_ok'] = bool(matches)
    report['passed'] = bool(_slope_passes(report) and matches)
    return report


def oracle_equivalence(instances, p_values=(0.5, 1.0, 2.0, 3.0), seed=None):
    """
    Compare maps.mixed_power_sum with brute_force_mixed_sum on random
    dense tensors. `instances` is a list of (m, n, d) triples.

    """
    from .maps import DenseTensor, mixed_power_sum

    rng = rng_for('oracle_equivalence', b'', seed)
    records = []
    for m, n, d in instances:
        space = SpaceDescriptor.lp(2, d)
        coefficients = rng.standard_normal((d,) * m + (d,))
        T = DenseTensor(coefficients, [space] * m, space)
        families = [VectorFamily.from_matrix(space, rng.standard_normal((n, d)))
                    for _ in range(m)]
        for p in p_values:
            fast = mixed_power_sum(T, families, p)
            slow = brute_force_mixed_sum(T, families, p)
            gap = abs(fast - slow) / max(abs(slow), np.finfo(float).tiny)
            records.append({'m': m, 'n': n, 'd': d, 'p': p, 'fast': fast,
                            'slow': slow, 'gap': gap,
                            'passed': bool(gap <= 1e-12)})
    return records
