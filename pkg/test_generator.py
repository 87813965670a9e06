import pytest

from errors import ResourceLimitError
from polynomials import weight_profiles
from tesler_generator import (brute_force_enumerate, children, count, diagonal_census, dpro_distribution,
                              enumerate_family, fold_family, iter_family, seed, visit_family)
from tesler_matrix import GTMatrix, diagonal_product

TESLER_COUNTS = [(1, 1), (2, 2), (3, 7), (4, 40), (5, 357)]


@pytest.mark.parametrize("n,expected", TESLER_COUNTS)
def test_counts_of_ones(n, expected):
    assert count((1,) * n) == expected
    assert enumerate_family((1,) * n).count == expected


def test_count_of_ones_six():
    assert count((1,) * 6) == 4820


@pytest.mark.parametrize("n", range(1, 6))
def test_generator_agrees_with_brute_force(n):
    generated = {m.entries for m in enumerate_family((1,) * n)}
    oracle = {m.entries for m in brute_force_enumerate((1,) * n)}
    assert generated == oracle


@pytest.mark.parametrize("alpha", [(2, 0, 1), (0, 1, 1), (1, 2, 0, 1), (3,), (0, 0, 0)])
def test_generator_agrees_with_brute_force_on_general_alpha(alpha):
    assert [m.entries for m in enumerate_family(alpha)] == [m.entries for m in brute_force_enumerate(alpha)]
    assert count(alpha) == len(brute_force_enumerate(alpha))


def test_every_member_has_the_right_hook_sums():
    for m in enumerate_family((1, 2, 0, 1)):
        assert m.hook_sums() == (1, 2, 0, 1)
        assert sum(m.diagonal) == 4


def test_children_count_is_diagonal_product():
    m = GTMatrix.from_rows([[0, 1, 0], [1, 1], [2]])
    kids = children(m, 1)
    assert len(kids) == diagonal_product(m) == 6
    assert all(k.alpha == (1, 1, 1, 1) and k.hook_sums() == (1, 1, 1, 1) for k in kids)


def test_children_of_seed():
    kids = children(seed((1, 1)), 1)
    assert sorted(str(k) for k in kids) == ["[[0,1],[2]]", "[[1,0],[1]]"]


def test_last_hook_sum_does_not_change_count():
    assert len({count((1, 1, x)) for x in range(5)}) == 1
    assert count((1, 0, 0, 0)) == 8


def test_staircase_five():
    assert count((1, 2, 3, 4, 5)) == 5880


def test_iteration_orders_agree():
    streamed = sorted(m.entries for m in iter_family((1, 1, 1, 1)))
    assert streamed == [m.entries for m in enumerate_family((1, 1, 1, 1))]
    seen = []
    assert visit_family((1, 1, 1, 1), seen.append) == 40


def test_parallel_enumeration_matches_serial():
    serial = enumerate_family((1, 1, 1, 1, 1))
    parallel = enumerate_family((1, 1, 1, 1, 1), jobs=2)
    assert serial.matrices == parallel.matrices


def test_parallel_count_matches_serial():
    assert count((1,) * 7, jobs=2) == count((1,) * 7)


def test_fold_family_returns_one_partial_per_subtree():
    partials = fold_family((1, 1, 1, 1), weight_profiles, jobs=2)
    assert len(partials) == 2
    assert sum(sum(p.values()) for p in partials) == 40
    merged = partials[0] + partials[1]
    assert merged == fold_family((1, 1, 1, 1), weight_profiles)[0]
    blocks = fold_family((1, 1, 1, 1), list, jobs=2)
    assert [m for block in blocks for m in block] == list(iter_family((1, 1, 1, 1)))


def test_diagonal_census():
    assert diagonal_census((1, 1)) == {(0, 2): 1, (1, 1): 1}
    assert sum(diagonal_census((1, 1, 1)).values()) == 7


def test_dpro_distribution():
    assert dpro_distribution((1, 1, 1)) == {4: 2, 6: 4, 8: 1}


def test_enumeration_ceiling():
    with pytest.raises(ResourceLimitError) as info:
        enumerate_family((1,) * 5, ceiling=100)
    assert info.value.needed == 357


def test_count_ceiling():
    with pytest.raises(ResourceLimitError):
        count((1,) * 8, ceiling=10)


def test_brute_force_ceiling():
    with pytest.raises(ResourceLimitError):
        brute_force_enumerate((1,) * 5, ceiling=10)


@pytest.mark.slow
def test_count_of_ones_eleven():
    assert count((1,) * 11, ceiling=None) == 515_564_231_770
