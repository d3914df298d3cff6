from .quotients import QuotientSample, summing_quotient, polynomial_quotient
from .maximize import maximize_quotient, STRATEGIES
from .regression import IndexEstimate, estimate_index
from .bounds import (
    KONIG_CONSTANT, BoundEntry, ExactIndex,
    upper_bound_mult, upper_bound_pol,
    lower_bound_pol_cotype, lower_bound_pol_real_even,
    exact_index, index_shift, lemar_exponent, konig_exponent,
    inclusion_cap, identity_summing_cap,
    bound_table, seam_report, exact_case_report)

__all__ = [
    'QuotientSample', 'summing_quotient', 'polynomial_quotient',
    'maximize_quotient', 'STRATEGIES',
    'IndexEstimate', 'estimate_index',
    'KONIG_CONSTANT', 'BoundEntry', 'ExactIndex',
    'upper_bound_mult', 'upper_bound_pol',
    'lower_bound_pol_cotype', 'lower_bound_pol_real_even',
    'exact_index', 'index_shift', 'lemar_exponent', 'konig_exponent',
    'inclusion_cap', 'identity_summing_cap',
    'bound_table', 'seam_report', 'exact_case_report',
]
