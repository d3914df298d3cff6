import math

from armstrong.labs.summability.exceptions import DomainError, ValidityError
from armstrong.labs.summability.index_lab import (
    KONIG_CONSTANT, BoundEntry, bound_table, exact_case_report, exact_index,
    identity_summing_cap, inclusion_cap, index_shift, konig_exponent,
    lemar_exponent, lower_bound_pol_cotype, lower_bound_pol_real_even,
    seam_report, upper_bound_mult, upper_bound_pol)
from armstrong.labs.summability.index_lab.bounds import (
    CK_F, L1_L2, L2_C0, POL_LOWER_COTYPE, cotype_branch, real_even_branch)
from .._utils import TestCase


def entries_of(table, kind, branch=None):
    return [e for e in table
            if e.kind == kind and (branch is None or e.branch == branch)]


class UpperBoundTestCase(TestCase):
    def test_multilinear_pieces(self):
        self.assertEqual(upper_bound_mult(2, 2, 2), 1.0)
        self.assertClose(upper_bound_mult(1, 3, 2), 1 / 3.0)
        self.assertEqual(upper_bound_mult(2, 4, 4), 1.0)
        self.assertClose(upper_bound_mult(1, 2, 4), (8 - 4 + 8) / 16.0)

    def test_multilinear_pieces_agree(self):
        for m in (1, 2, 3):
            for p in (0.5, 1, 2, 3):
                self.assertClose(upper_bound_mult(m, p, 2),
                                 upper_bound_mult(m, p, 2 + 1e-13), rel=1e-9)
            for q in (2.5, 3, 4):
                self.assertClose(upper_bound_mult(m, q, q),
                                 upper_bound_mult(m, q - 1e-13, q), rel=1e-9)

    def test_polynomial(self):
        self.assertEqual(upper_bound_pol(1, 0.5, 1), 2.0)
        self.assertClose(upper_bound_pol(2, 1, 4), 1 + 2 * 2 / 8.0)
        with self.assertRaises(ValidityError):
            upper_bound_pol(2, 1, 2)

    def test_polynomial_worked_values(self):
        self.assertEqual(upper_bound_pol(2, 0.5, 2), 2.0)
        # p = 2 < q/m = 3, so the formula is claimed here
        self.assertClose(upper_bound_pol(1, 2, 3), 0.5 + 1 / 6.0)

    def test_polynomial_validity_edge(self):
        self.assertClose(upper_bound_pol(1, 2.999, 3), 1 / 2.999 + 1 / 6.0)
        for m, p, q in ((1, 3, 3), (1, 4, 3), (3, 1, 3)):
            with self.assertRaises(ValidityError):
                upper_bound_pol(m, p, q)

    def test_domain(self):
        with self.assertRaises(DomainError):
            upper_bound_mult(0, 1, 1)
        with self.assertRaises(DomainError):
            upper_bound_mult(1.5, 1, 1)
        with self.assertRaises(DomainError):
            upper_bound_mult(1, 0, 1)


class LowerBoundTestCase(TestCase):
    def test_cotype_branches(self):
        # m=2, q=1, r=2: seams at 0.4 and 2/3
        self.assertEqual(lower_bound_pol_cotype(2, 0.3, 1, 2), 1.0)
        self.assertClose(lower_bound_pol_cotype(2, 0.4, 1, 2), 1.0)
        self.assertClose(lower_bound_pol_cotype(2, 0.5, 1, 2), 3.0 - 2.5)
        self.assertEqual(lower_bound_pol_cotype(2, 0.5, 3, 2), 1.0)
        self.assertClose(lower_bound_pol_cotype(1, 1.5, 3, 2), 0.5 / 3.0)

    def test_cotype_out_of_range(self):
        with self.assertRaises(ValidityError):
            lower_bound_pol_cotype(2, 2.5, 1, 2)
        with self.assertRaises(ValidityError):
            lower_bound_pol_cotype(2, 1.0, 1, 2)
        with self.assertRaises(DomainError):
            lower_bound_pol_cotype(2, 1.0, 1, 1.5)

    def test_real_even_branches(self):
        self.assertEqual(lower_bound_pol_real_even(2, 0.2, 1), 1.0)
        self.assertClose(lower_bound_pol_real_even(2, 0.4, 1), 3.5 - 3.0)
        self.assertClose(lower_bound_pol_real_even(2, 0.75, 2), 1 / 3.0)
        with self.assertRaises(DomainError):
            lower_bound_pol_real_even(3, 0.2, 1)
        with self.assertRaises(ValidityError):
            lower_bound_pol_real_even(2, 0.75, 1)

    def test_branch_labels(self):
        self.assertEqual(cotype_branch(2, 0.3, 1, 2), 'a')
        self.assertEqual(cotype_branch(2, 0.5, 1, 2), 'b')
        self.assertEqual(cotype_branch(2, 0.5, 3, 2), 'c')
        self.assertEqual(cotype_branch(2, 1.5, 3, 2), 'd')
        self.assertIsNone(cotype_branch(2, 1.5, 1, 2))
        self.assertEqual(real_even_branch(2, 0.75, 3), 'd')

    def test_seams_are_continuous(self):
        records = seam_report([2, 4], [1, 1.5, 2, 3], [2, 2.5, 3])
        self.assertTrue(records)
        for record in records:
            self.assertTrue(record['passed'], record)
        kinds = set(r['seam'] for r in records)
        self.assertEqual(kinds, {'rq/(mr+q)', '2r/(mr+2)', 'q/(m+q)', '2/(m+2)'})


class ExactIndexTestCase(TestCase):
    def test_l2_c0(self):
        self.assertEqual(exact_index(L2_C0, 3).value, 1.5)
        with self.assertRaises(ValidityError):
            exact_index(L2_C0, 2, p=1)

    def test_l1_l2(self):
        self.assertClose(exact_index(L1_L2, 1, 0.8).value, 1.25 - 1.0)
        with self.assertRaises(ValidityError):
            exact_index(L1_L2, 1, 1.0)

    def test_ck_f(self):
        self.assertClose(exact_index(CK_F, 1, 1.5, 2).value, 1 / 1.5 - 0.5)
        with self.assertRaises(ValidityError):
            exact_index(CK_F, 1, 0.5, 2)
        with self.assertRaises(ValidityError):
            exact_index(CK_F, 1, 1.5)

    def test_unknown(self):
        with self.assertRaises(DomainError):
            exact_index('nope')

    def test_matches_lower_bounds_and_shift(self):
        records = exact_case_report(100, seed=3)
        self.assertGreaterEqual(len(records), 90)
        self.assertEqual(set(r['case'] for r in records), {L1_L2, CK_F})
        for record in records:
            self.assertTrue(record['passed'], record)


class MiscFormulaTestCase(TestCase):
    def test_index_shift(self):
        self.assertClose(index_shift(1, 2, 0.5), 1.0)
        with self.assertRaises(DomainError):
            index_shift(2, 1, 0)

    def test_lemar(self):
        self.assertEqual(lemar_exponent(2, 1), 0.0)
        self.assertClose(lemar_exponent(1.5, 1.5), 0.5)
        with self.assertRaises(DomainError):
            lemar_exponent(1, 2)

    def test_konig(self):
        self.assertEqual(konig_exponent(4), 0.25)
        self.assertClose(KONIG_CONSTANT, 1 / (2 * math.e))
        with self.assertRaises(DomainError):
            konig_exponent(2)

    def test_caps(self):
        self.assertEqual(identity_summing_cap(2, 4), 2.0)
        self.assertEqual(identity_summing_cap(1, 4), 4.0)
        self.assertClose(identity_summing_cap(4, 9), 3.0)
        self.assertClose(inclusion_cap(2, 1, 4), 2.0)
        with self.assertRaises(DomainError):
            inclusion_cap(1, 2, 4)


class BoundTableTestCase(TestCase):
    def test_l2_c0(self):
        table = bound_table(2, 2, 2)
        self.assertTrue(all(isinstance(e, BoundEntry) for e in table))
        self.assertEqual(entries_of(table, 'mult_upper')[0].value, 1.0)
        self.assertEqual(entries_of(table, 'exact', L2_C0)[0].value, 1.0)
        self.assertIsNone(entries_of(table, 'pol_upper')[0].value)

    def test_both_branches_at_a_seam(self):
        table = bound_table(2, 0.4, 1, 2)
        a = entries_of(table, POL_LOWER_COTYPE, 'a')[0]
        b = entries_of(table, POL_LOWER_COTYPE, 'b')[0]
        self.assertEqual(a.value, 1.0)
        self.assertClose(b.value, 1.0)

    def test_inapplicable_branches(self):
        table = bound_table(1, 3, 2, 2)
        self.assertClose(entries_of(table, 'mult_upper')[0].value, 1 / 3.0)
        for entry in entries_of(table, POL_LOWER_COTYPE):
            self.assertIsNone(entry.value)
        for entry in entries_of(table, 'pol_lower_real_even'):
            self.assertIsNone(entry.value)

    def test_rows(self):
        entry = bound_table(1, 1, 1)[0]
        self.assertEqual(entry.to_row()[:4], ['mult_upper', 1, 1, 1])
        self.assertEqual(entry.to_json()['kind'], 'mult_upper')
