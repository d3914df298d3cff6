"""
Closed-form bounds on summability indices.

Every lower-bound family is a list of branches; each branch carries its
validity predicate, so a value is only ever returned where the formula
is claimed. Branch order matters at seams: the first valid branch wins.

"""
import math
from collections import namedtuple
from dataclasses import dataclass, asdict
from typing import Optional

from ..exceptions import DomainError, ValidityError
from ..seeding import rng_for

KONIG_CONSTANT = 1.0 / (2.0 * math.e)

SEAM_TOL = 1e-12

MULT_UPPER = 'mult_upper'
POL_UPPER = 'pol_upper'
POL_LOWER_COTYPE = 'pol_lower_cotype'
POL_LOWER_REAL_EVEN = 'pol_lower_real_even'
EXACT = 'exact'

L2_C0 = 'l2_c0'
L1_L2 = 'l1_l2'
CK_F = 'ck_f'
EXACT_CASES = (L2_C0, L1_L2, CK_F)


def _check_degree(m):
    if int(m) != m or m < 1:
        raise DomainError("degree must be a positive integer, got %r" % (m,))
    return int(m)


def _check_positive(**values):
    for name, value in values.items():
        if not value > 0:
            raise DomainError("%s must be positive, got %r" % (name, value))


def upper_bound_mult(m, p, q):
    """
    Upper bound for the multilinear index at (p, q):

        q <= 2           m/p
        q >= 2, p >= q   mq/(2p)
        q >= 2, p < q    m(qp - 2p + 2q)/(2qp)

    The pieces agree on q = 2 and on p = q.

    """
    m = _check_degree(m)
    _check_positive(p=p, q=q)
    if q <= 2:
        return m / p
    if p >= q:
        return m * q / (2.0 * p)
    return m * (q * p - 2.0 * p + 2.0 * q) / (2.0 * q * p)


def upper_bound_pol(m, p, q):
    "1/p for q <= 2, 1/p + m(q - 2)/(2q) for q >= 2; claimed only for p < q/m"
    m = _check_degree(m)
    _check_positive(p=p, q=q)
    if not p < q / m:
        raise ValidityError("the polynomial upper bound needs p < q/m "
                            "(m=%d, p=%g, q=%g)" % (m, p, q))
    if q <= 2:
        return 1.0 / p
    return 1.0 / p + m * (q - 2.0) / (2.0 * q)


Branch = namedtuple('Branch', 'label applies value validity')


def _cotype_seams(m, q, r):
    return r * q / (m * r + q), 2.0 * r / (m * r + 2.0)


COTYPE_BRANCHES = (
    Branch('a',
           lambda m, p, q, r: 1 <= q <= 2 and p <= _cotype_seams(m, q, r)[0],
           lambda m, p, q, r: m / 2.0,
           '1 <= q <= 2, 0 < p <= rq/(mr+q)'),
    Branch('b',
           lambda m, p, q, r: (1 <= q <= 2 and
                               _cotype_seams(m, q, r)[0] <= p <= _cotype_seams(m, q, r)[1]),
           lambda m, p, q, r: (m * p + 2.0) / (2.0 * p) - (m * r + q) / (r * q),
           '1 <= q <= 2, rq/(mr+q) <= p <= 2r/(mr+2)'),
    Branch('c',
           lambda m, p, q, r: q >= 2 and p <= _cotype_seams(m, q, r)[1],
           lambda m, p, q, r: m / 2.0,
           'q >= 2, 0 < p <= 2r/(mr+2)'),
    Branch('d',
           lambda m, p, q, r: q >= 2 and _cotype_seams(m, q, r)[1] < p < r,
           lambda m, p, q, r: (r - p) / (p * r),
           'q >= 2, 2r/(mr+2) < p < r'),
)


def _real_even_seams(m, q):
    return q / (m + q), 2.0 / (m + 2.0)


REAL_EVEN_BRANCHES = (
    Branch('a',
           lambda m, p, q, r: 1 <= q <= 2 and p <= _real_even_seams(m, q)[0],
           lambda m, p, q, r: m / 2.0,
           '1 <= q <= 2, 0 < p <= q/(m+q)'),
    Branch('b',
           lambda m, p, q, r: (1 <= q <= 2 and
                               _real_even_seams(m, q)[0] <= p <= _real_even_seams(m, q)[1]),
           lambda m, p, q, r: (m * p + 2.0) / (2.0 * p) - (m + q) / float(q),
           '1 <= q <= 2, q/(m+q) <= p <= 2/(m+2)'),
    Branch('c',
           lambda m, p, q, r: q >= 2 and p <= _real_even_seams(m, q)[1],
           lambda m, p, q, r: m / 2.0,
           'q >= 2, 0 < p <= 2/(m+2)'),
    Branch('d',
           lambda m, p, q, r: q >= 2 and _real_even_seams(m, q)[1] < p < 1,
           lambda m, p, q, r: (1.0 - p) / p,
           'q >= 2, 2/(m+2) < p < 1'),
)


def _first_branch(branches, m, p, q, r):
    for branch in branches:
        if branch.applies(m, p, q, r):
            return branch
    return None


def cotype_branch(m, p, q, r):
    """The label of the branch lower_bound_pol_cotype would use, or None"""
    return getattr(_first_branch(COTYPE_BRANCHES, m, p, q, r), 'label', None)


def real_even_branch(m, p, q):
    return getattr(_first_branch(REAL_EVEN_BRANCHES, m, p, q, None),
                   'label', None)


def lower_bound_pol_cotype(m, p, q, r):
    """Lower bound for the polynomial index into a space of cotype r"""

    m = _check_degree(m)
    _check_positive(p=p, q=q)
    if r < 2:
        raise DomainError("cotype is at least 2, got r=%r" % (r,))
    if not p < r:
        raise ValidityError("the cotype lower bound needs p < r "
                            "(p=%g, r=%g)" % (p, r))
    branch = _first_branch(COTYPE_BRANCHES, m, p, q, r)
    if branch is None:
        raise ValidityError("no cotype lower bound is claimed at "
                            "m=%d, p=%g, q=%g, r=%g" % (m, p, q, r))
    return branch.value(m, p, q, r)


def lower_bound_pol_real_even(m, p, q):
    """Lower bound for scalar valued polynomials of even degree"""

    m = _check_degree(m)
    _check_positive(p=p, q=q)
    if m % 2:
        raise DomainError("the real even lower bound needs an even degree, "
                          "got %d" % m)
    branch = _first_branch(REAL_EVEN_BRANCHES, m, p, q, None)
    if branch is None:
        raise ValidityError("no real even lower bound is claimed at "
                            "m=%d, p=%g, q=%g" % (m, p, q))
    return branch.value(m, p, q, None)


ExactIndex = namedtuple('ExactIndex', 'value low high validity')


def exact_index(case_id, m=1, p=None, r=None):
    """
    Exactly known indices:

        l2_c0   m-linear, (2, 2), l_2 into c_0        m/2
        l1_l2   m-homogeneous, (p, 1), l_1 into l_2   1/p - (m+1)/2
                for 2/(2m+1) <= p < 2/(m+1)
        ck_f    linear, (p, 2), C(K) into cotype r    1/p - 1/r
                for 2r/(r+2) < p < r

    """
    m = _check_degree(m)
    if case_id == L2_C0:
        if p is not None and p != 2:
            raise ValidityError("the l2 -> c0 index is known at p = q = 2 only")
        return ExactIndex(m / 2.0, 2.0, 2.0, 'p = q = 2')
    if case_id == L1_L2:
        low, high = 2.0 / (2 * m + 1), 2.0 / (m + 1)
        if p is None or not low <= p < high:
            raise ValidityError("the l1 -> l2 index needs %g <= p < %g, got %r"
                                % (low, high, p))
        return ExactIndex(1.0 / p - (m + 1) / 2.0, low, high,
                          '2/(2m+1) <= p < 2/(m+1), q = 1')
    if case_id == CK_F:
        if r is None or r < 2:
            raise ValidityError("the C(K) -> F index needs a cotype r >= 2")
        low, high = 2.0 * r / (r + 2), float(r)
        if p is None or not low < p < high:
            raise ValidityError("the C(K) -> F index needs %g < p < %g, got %r"
                                % (low, high, p))
        return ExactIndex(1.0 / p - 1.0 / r, low, high,
                          '2r/(r+2) < p < r, q = 2')
    raise DomainError("unknown exact case %r (known: %s)"
                      % (case_id, ', '.join(EXACT_CASES)))


def index_shift(p_target, p_known, eta_known):
    """
    Hoelder padding: an index eta at p_known gives eta + 1/p_target - 1/p_known
    at any smaller p_target.

    """
    _check_positive(p_target=p_target)
    if not p_target < p_known:
        raise DomainError("index_shift needs p_target < p_known "
                          "(%g >= %g)" % (p_target, p_known))
    return eta_known + 1.0 / p_target - 1.0 / p_known


def lemar_exponent(s, d_param):
    """Growth exponent (2d + s(d - 2))/(2sd) = 1/s + 1/2 - 1/d, 1 <= d <= s <= 2"""
    if not 1 <= d_param <= s <= 2:
        raise DomainError("lemar_exponent needs 1 <= d <= s <= 2, got s=%r, d=%r"
                          % (s, d_param))
    return (2.0 * d_param + s * (d_param - 2.0)) / (2.0 * s * d_param)


def konig_exponent(q):
    if not q > 2:
        raise DomainError("konig_exponent needs q > 2, got %r" % (q,))
    return 1.0 / q


def identity_summing_cap(p, d):
    "d^max(1/p, 1/2): the (p, p)-summing norm of the identity of a d-dimensional space"
    _check_positive(p=p)
    return float(d) ** max(1.0 / p, 0.5)


def inclusion_cap(p, q, d):
    "d^((q/p) max(1/q, 1/2)) caps the (p, q)-summing norm of the identity, 1 <= q <= p"
    if not 1 <= q <= p:
        raise DomainError("inclusion_cap needs 1 <= q <= p, got p=%r, q=%r" % (p, q))
    return identity_summing_cap(q, d) ** (q / p)


@dataclass
class BoundEntry(object):
    kind: str
    m: int
    p: float
    q: float
    r: Optional[float]
    branch: str
    value: Optional[float]
    validity: str

    def to_json(self):
        return asdict(self)

    def to_row(self):
        return [self.kind, self.m, self.p, self.q,
                '' if self.r is None else self.r, self.branch,
                '' if self.value is None else repr(self.value)]


def _entry(kind, m, p, q, r, branch, validity, compute):
    try:
        value = compute()
    except (ValidityError, DomainError):
        value = None
    return BoundEntry(kind, m, p, q, r, branch, value, validity)


def _branch_entries(kind, branches, m, p, q, r):
    entries = []
    for branch in branches:
        valid = branch.applies(m, p, q, r)
        value = branch.value(m, p, q, r) if valid else None
        entries.append(BoundEntry(kind, m, p, q, r, branch.label, value,
                                  branch.validity))
    return entries


def bound_table(m, p, q, r=None):
    """Every bound at these parameters; `value` is None where not claimed"""

    m = _check_degree(m)
    _check_positive(p=p, q=q)
    entries = [
        _entry(MULT_UPPER, m, p, q, r, '-', 'p, q > 0',
               lambda: upper_bound_mult(m, p, q)),
        _entry(POL_UPPER, m, p, q, r, '-', 'p < q/m',
               lambda: upper_bound_pol(m, p, q)),
    ]
    if r is not None and r >= 2 and p < r:
        entries.extend(_branch_entries(POL_LOWER_COTYPE, COTYPE_BRANCHES,
                                       m, p, q, r))
    else:
        entries.extend(BoundEntry(POL_LOWER_COTYPE, m, p, q, r, b.label, None,
                                  b.validity + ', p < r, r >= 2')
                       for b in COTYPE_BRANCHES)
    if m % 2 == 0:
        entries.extend(_branch_entries(POL_LOWER_REAL_EVEN, REAL_EVEN_BRANCHES,
                                       m, p, q, None))
    else:
        entries.extend(BoundEntry(POL_LOWER_REAL_EVEN, m, p, q, r, b.label,
                                  None, b.validity + ', m even')
                       for b in REAL_EVEN_BRANCHES)

    entries.append(_entry(
        EXACT, m, p, q, r, L2_C0, 'm-linear, l_2 into c_0, p = q = 2',
        lambda: exact_index(L2_C0, m, p).value if q == 2 else _out_of_range()))
    entries.append(_entry(
        EXACT, m, p, q, r, L1_L2, 'l_1 into l_2, q = 1, 2/(2m+1) <= p < 2/(m+1)',
        lambda: exact_index(L1_L2, m, p).value if q == 1 else _out_of_range()))
    entries.append(_entry(
        EXACT, m, p, q, r, CK_F, 'm = 1, C(K) into cotype r, q = 2, 2r/(r+2) < p < r',
        lambda: (exact_index(CK_F, m, p, r).value
                 if q == 2 and m == 1 else _out_of_range())))
    return entries


def _out_of_range():
    raise ValidityError("out of range")


def _seam_record(kind, m, q, r, seam, point, left, right):
    gap = abs(left - right)
    return {
        'kind': kind, 'm': m, 'q': q, 'r': r, 'seam': seam, 'p': point,
        'left': left, 'right': right, 'gap': gap, 'passed': gap <= SEAM_TOL,
    }


def seam_report(m_values, q_values, r_values):
    """
    Compare adjacent lower-bound branches at the four seams:
    p = rq/(mr+q) and p = 2r/(mr+2) for the cotype family,
    p = q/(m+q) and p = 2/(m+2) for the real even family.

    """
    a, b, c, d = COTYPE_BRANCHES
    ra, rb, rc, rd = REAL_EVEN_BRANCHES
    records = []
    for m in m_values:
        for q in q_values:
            for r in r_values:
                s1, s2 = _cotype_seams(m, q, r)
                if 1 <= q <= 2:
                    records.append(_seam_record(
                        POL_LOWER_COTYPE, m, q, r, 'rq/(mr+q)', s1,
                        a.value(m, s1, q, r), b.value(m, s1, q, r)))
                if q >= 2:
                    records.append(_seam_record(
                        POL_LOWER_COTYPE, m, q, r, '2r/(mr+2)', s2,
                        c.value(m, s2, q, r), d.value(m, s2, q, r)))
            if m % 2:
                continue
            t1, t2 = _real_even_seams(m, q)
            if 1 <= q <= 2:
                records.append(_seam_record(
                    POL_LOWER_REAL_EVEN, m, q, None, 'q/(m+q)', t1,
                    ra.value(m, t1, q, None), rb.value(m, t1, q, None)))
            if q >= 2:
                records.append(_seam_record(
                    POL_LOWER_REAL_EVEN, m, q, None, '2/(m+2)', t2,
                    rc.value(m, t2, q, None), rd.value(m, t2, q, None)))
    return records


def exact_case_report(draws=100, seed=None):
    """
    Random in-range parameters for the two polynomial exact cases. Each
    record compares exact_index with the matching lower-bound branch and
    with the Hoelder-padded upper value from index_shift.

    """
    rng = rng_for('exact_case_report', b'', seed)
    records = []
    for k in range(int(draws)):
        if k % 2 == 0:
            m = int(rng.integers(1, 5))
            low, high = 2.0 / (2 * m + 1), 2.0 / (m + 1)
            p = float(rng.uniform(low, high))
            exact = exact_index(L1_L2, m, p).value
            lower = lower_bound_pol_cotype(m, p, 1.0, 2.0)
            shifted = index_shift(p, high, 0.0)
            params = {'m': m, 'p': p, 'q': 1.0, 'r': 2.0}
            case = L1_L2
        else:
            r = float(rng.uniform(2.0, 4.0))
            p = float(rng.uniform(2.0 * r / (r + 2), r))
            if not 2.0 * r / (r + 2) < p < r:
                continue
            exact = exact_index(CK_F, 1, p, r).value
            lower = lower_bound_pol_cotype(1, p, 2.0, r)
            shifted = index_shift(p, r, 0.0)
            params = {'m': 1, 'p': p, 'q': 2.0, 'r': r}
            case = CK_F
        gap = max(abs(exact - lower), abs(exact - shifted))
        records.append(dict(params, case=case, exact=exact, lower=lower,
                            shifted=shifted, gap=gap,
                            passed=bool(gap <= SEAM_TOL)))
    return records

