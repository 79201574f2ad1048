from fractions import Fraction

import pytest

from kll.fpgroups import BudgetExceeded
from kll.towers import TowerRecord
from kll.counting import (GroupTable, sl2_group_table, subgroup_census,
                          rank_bound_check, essential_subgroups,
                          congruence_kernel, level_vs_index_check, s_n,
                          sn_vs_cn_table, _pow2_floor,
                          EXCEPTIONAL_MINIMAL_INDEX_Q)


def test_sl2_z2_census_is_s3():
    table = sl2_group_table(2)
    assert table.n == 6
    census = subgroup_census(table)
    assert census.count == 6
    assert census.orders() == [1, 2, 2, 2, 3, 6]


def test_sl2_z3_census():
    census = subgroup_census(sl2_group_table(3))
    assert census.count == 15
    assert rank_bound_check(census).holds


def test_sl2_z4_census_rank3():
    census = subgroup_census(sl2_group_table(4))
    rep = rank_bound_check(census)
    assert rep.rank == 3 and rep.holds


def test_sl2_z5_census():
    census = subgroup_census(sl2_group_table(5))
    assert census.count == 76
    assert rank_bound_check(census).holds


def test_trivial_group_census():
    table = GroupTable([0], lambda a, b: 0)
    census = subgroup_census(table)
    assert census.count == 1


def test_census_methods_agree():
    # the two routes share no enumeration logic; agreement is a strong check
    for m in (2, 3, 4, 5):
        table = sl2_group_table(m)
        complete = subgroup_census(table, method="complete")
        cyclic = subgroup_census(table, method="cyclic-extension")
        assert set(complete.subgroups) == set(cyclic.subgroups), m


def test_index2_count_matches_d2():
    for m in (2, 3, 4, 5, 6):
        table = sl2_group_table(m)
        census = subgroup_census(table)
        idx2 = len(census.subgroups_of_index(2))
        assert idx2 == 2 ** table.d2_quotient_rank() - 1, m


def test_lagrange_consistency():
    for m in (2, 3, 4, 5):
        table = sl2_group_table(m)
        census = subgroup_census(table)
        for h in census.subgroups:
            assert table.n % len(h) == 0


def test_essential_prime_q5_exceptional():
    census = subgroup_census(sl2_group_table(5))
    rep = essential_subgroups(5, census)
    assert rep.prime_field
    assert rep.minimal_index == 5
    assert rep.exceptional
    assert 5 in EXCEPTIONAL_MINIMAL_INDEX_Q


def test_essential_prime_q7_exceptional():
    census = subgroup_census(sl2_group_table(7))
    rep = essential_subgroups(7, census)
    assert rep.minimal_index == 7
    assert rep.exceptional


def test_essential_q13_nonexceptional():
    census = subgroup_census(sl2_group_table(13))
    rep = essential_subgroups(13, census)
    assert rep.minimal_index == 14 == rep.expected_minimal
    assert not rep.exceptional


def test_essential_composite_m4():
    table = sl2_group_table(4)
    census = subgroup_census(table)
    rep = essential_subgroups(4, census)
    kernel = congruence_kernel(table, 4, 2)
    assert len(kernel) == 8
    for h in rep.essential:
        assert not kernel <= h


def test_level_vs_index_kernel():
    table = sl2_group_table(4)
    census = subgroup_census(table)
    kernel = congruence_kernel(table, 4, 2)
    rep = level_vs_index_check(kernel, 4, census=census)
    assert rep.level == 2
    assert rep.index == 6
    assert rep.holds
    assert rep.minimal_c == Fraction(2, 6)


def test_level_vs_index_whole_group():
    table = sl2_group_table(4)
    census = subgroup_census(table)
    rep = level_vs_index_check(frozenset(range(table.n)), 4, census=census)
    assert rep.level == 1 and rep.index == 1 and rep.holds


def test_level_vs_index_minimal_essential_q5():
    table = sl2_group_table(5)
    census = subgroup_census(table)
    rep5 = essential_subgroups(5, census)
    biggest = max(rep5.essential, key=len)
    rep = level_vs_index_check(biggest, 5, census=census)
    assert rep.level == 5
    assert rep.holds  # 5 <= 1 * index 5


def test_s_n_counts():
    census = subgroup_census(sl2_group_table(2))
    assert s_n(census, 1) == 1
    assert s_n(census, 2) == 2   # whole group + the order-3 subgroup
    assert s_n(census, 6) == 6


def test_census_budget():
    import os
    os.environ["KLL_BUDGET"] = "10"
    try:
        with pytest.raises(BudgetExceeded):
            subgroup_census(sl2_group_table(3))
    finally:
        del os.environ["KLL_BUDGET"]


def test_pow2_floor():
    assert _pow2_floor(Fraction(3)) == 8
    assert _pow2_floor(Fraction(7, 2)) == 11   # 2^3.5 = 11.31
    assert _pow2_floor(Fraction(0)) == 1
    assert _pow2_floor(Fraction(10, 3)) == 10  # 2^(10/3) = 10.079


def test_sn_vs_cn_table():
    rec = TowerRecord()
    for d in (1, 2, 4, 8):
        rec.add(degree=d, d_p=d)
    censuses = {m: subgroup_census(sl2_group_table(m)) for m in (2, 3, 4, 5)}
    table = sn_vs_cn_table(rec, m_range=(2, 3, 4, 5), censuses=censuses)
    assert table.lam == 1
    rows = {r.n: r for r in table.rows}
    assert rows[1].homology_lower == 1       # 2^1 - 1
    assert rows[8].homology_lower == 255     # 2^8 - 1
    assert rows[8].census_cn == sum(s_n(censuses[m], 8) for m in (2, 3, 4, 5))
    assert table.fitted_b_lo is not None
    # counts grow far slower than 2^n on this range
    assert rows[8].census_cn < 255 * 8


def test_sn_vs_cn_requires_positive_growth():
    rec = TowerRecord()
    rec.add(degree=1, d_p=0)
    with pytest.raises(ValueError):
        sn_vs_cn_table(rec)
