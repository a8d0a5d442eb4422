import pytest

from loewy.errors import CapacityError, DomainError
from loewy.mfunc import (
    LargeMCase,
    classify_large_m,
    exponent_digits,
    m_bfs,
    m_closed_form,
    m_digit_scan,
    m_functional_equation,
    m_groups_by_generator,
    m_groups_by_residue,
    m_value,
    m_via_z,
    render_m_grid_csv,
    render_m_groups,
    small_e_candidates,
)


def check_witness(result, q, e):
    assert result.witness is not None
    assert len(result.witness) == result.m
    assert sum(pow(q, i, e) for i in result.witness) % e == 0


class TestBfs:
    def test_anchors(self):
        assert m_bfs(2, 7).m == 3
        assert m_bfs(5, 33).m == 3
        assert m_bfs(9, 1).m == 1

    def test_witnesses(self):
        for q, e in [(2, 7), (5, 33), (3, 11), (7, 100), (23, 4096)]:
            check_witness(m_bfs(q, e), q, e)

    def test_q_congruent_one(self):
        assert m_bfs(8, 7).m == 7

    def test_rejects_common_factor(self):
        with pytest.raises(DomainError):
            m_bfs(6, 9)

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            m_bfs(3, (1 << 31) + 2)


class TestDigitScan:
    def test_anchors(self):
        assert m_digit_scan(3, 12, 7592).m == 8
        assert m_digit_scan(55, 8, 680763722688).m == 126

    def test_full_modulus(self):
        # z = 1: the single multiple is q^n - 1 with the all-maximal expansion
        for q, n in [(3, 4), (7, 2), (2, 9)]:
            assert m_digit_scan(q, n, q**n - 1).m == n * (q - 1)

    def test_records_minimizer(self):
        result = m_digit_scan(3, 12, 7592)
        assert result.k_min == 1
        check_witness(result, 3, 7592)

    def test_divisibility_check(self):
        with pytest.raises(DomainError):
            m_digit_scan(3, 4, 7)


class TestViaZ:
    def test_anchors(self):
        assert m_via_z(3, 12, 70).m == 8
        assert m_via_z(9, 15, 5551).m == 24
        assert m_via_z(4, 6, 1).m == 18

    def test_witness_from_residues(self):
        result = m_via_z(3, 12, 70)
        e = (3**12 - 1) // 70
        check_witness(result, 3, e)

    def test_rejects_bad_modulus(self):
        with pytest.raises(DomainError):
            m_via_z(3, 4, 7)


class TestExponentDigits:
    def test_row_values(self):
        assert exponent_digits(3, 12, 70, 1) == [2, 1, 0, 2, 0, 1, 1, 0, 1, 0, 0, 0]
        assert exponent_digits(3, 12, 70, 35) == [1] * 12
        assert exponent_digits(3, 12, 70, 70) == [2] * 12
        assert exponent_digits(3, 12, 70, 0) == [0] * 12

    def test_out_of_range(self):
        with pytest.raises(DomainError):
            exponent_digits(3, 12, 70, 71)


class TestClosedForm:
    def test_two_power(self):
        assert m_closed_form(5, 32).m == 4
        assert m_closed_form(17, 32).m == 16
        assert m_closed_form(31, 32).m == 2
        assert m_closed_form(3, 32).m == 4

    def test_eleven_power(self):
        assert m_closed_form(3, 11).m == 3
        assert m_closed_form(2, 11).m == 2   # ord 10 even
        assert m_closed_form(4, 121).m == 3  # ord 55 = 5 * 11
        assert m_closed_form(81, 121).m == 5  # ord 5 only

    def test_trivial_cases(self):
        assert m_closed_form(5, 1).m == 1
        assert m_closed_form(8, 7).m == 7
        assert m_closed_form(3, 2).m == 2
        assert m_closed_form(6, 7).m == 2  # q = -1 mod e

    def test_order_two(self):
        # ord_e(q) <= 2: m is e1 or 2 e1 by the parity dichotomy
        assert m_closed_form(3, 8).m == 4
        assert m_closed_form(5, 24).m == 8

    def test_pierpont_rule(self):
        assert m_closed_form(2, 7).m == 3  # ord 3: odd, divisible by 3

    def test_no_rule(self):
        # 43 is not a Pierpont prime and ord_43(2) = 14 is neither phi/2
        # nor covered by any congruence rule
        assert m_closed_form(2, 43) is None

    def test_dispatch(self):
        assert m_value(2, 43).method == "bfs"
        assert m_value(2, 43).m == 2
        assert m_value(5, 32).method == "closed_form"


class TestClassifyLargeM:
    def test_table_cases(self):
        assert classify_large_m(4, 15) == LargeMCase("IV", 6)
        assert classify_large_m(5, 24) == LargeMCase("IV", 8)
        assert classify_large_m(19, 15) == LargeMCase("IV", 6)  # 19 = 4 mod 15

    def test_families(self):
        assert classify_large_m(7, 12) == LargeMCase("I", 6)
        assert classify_large_m(11, 15) == LargeMCase("III", 5)
        assert classify_large_m(4, 9) == LargeMCase("II", 3)

    def test_none(self):
        assert classify_large_m(2, 9).case_id == "none"

    def test_rejects_q_congruent_one(self):
        with pytest.raises(DomainError):
            classify_large_m(16, 15)


class TestFunctionalEquation:
    def test_quotient_modulus(self):
        # e = (q^n - 1)/(q^n' - 1) gives m = n/n'
        for q, n, n_prime in [(2, 12, 4), (3, 6, 2), (5, 8, 1)]:
            e = (q**n - 1) // (q**n_prime - 1)
            assert m_functional_equation(q, n, n_prime, 1) == n // n_prime
            assert m_bfs(q, e).m == n // n_prime

    def test_scaled_modulus(self):
        # e = e'(q^n - 1)/(q - 1) gives m = n e'
        q, n, e_prime = 3, 4, 2
        e = e_prime * (q**n - 1) // (q - 1)
        assert m_functional_equation(q, n, 1, e_prime) == n * e_prime
        assert m_bfs(q, e).m == n * e_prime

    def test_identity(self):
        assert m_functional_equation(5, 10, 10, 33) == m_value(5, 33).m

    def test_rejects_bad_divisibility(self):
        with pytest.raises(DomainError):
            m_functional_equation(3, 10, 4, 1)


class TestSmallECandidates:
    def test_degree_five(self):
        result = small_e_candidates(5, 4)
        assert result[3] == {11}
        assert result[4] == {61}

    def test_degree_five_unfiltered(self):
        raw = small_e_candidates(5, 4, keep_unfiltered=True)
        assert raw[3] == {11}
        assert raw[4] == {11, 61}  # 11 is dropped by the order filter

    def test_degree_seven(self):
        result = small_e_candidates(7, 3)
        assert result[3] == {43}

    def test_rejects_composite_degree(self):
        with pytest.raises(DomainError):
            small_e_candidates(6, 3)
        with pytest.raises(DomainError):
            small_e_candidates(5, 5)


class TestTables:
    def test_grid_render(self):
        text = render_m_grid_csv(range(2, 4), range(2, 8))
        lines = text.strip().splitlines()
        assert lines[0] == "q,2,3,4,5,6,7"
        assert lines[1] == "2,,2,,2,,3"
        assert lines[2] == "3,2,,2,2,,2"

    def test_groups_by_residue(self):
        groups = m_groups_by_residue(31)
        assert groups[5] == [2, 4, 8, 16]

    def test_groups_by_generator(self):
        groups = m_groups_by_generator(61)
        assert groups[2] == [2, 3, 4, 8, 11, 14, 21, 60]
        assert groups[3] == [12, 13]
        assert groups[4] == [9]

    def test_groups_render(self):
        text = render_m_groups([32], by="residues")
        assert text == ("32; 2: {31}; 4: {3, 5, 7, 11, 13, 15, 19, 21, 23, 27, 29}; "
                        "8: {9, 25}; 16: {17}\n")
        with pytest.raises(DomainError):
            render_m_groups([10], by="columns")
