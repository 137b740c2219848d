import sys
from math import comb

import pytest
from hypothesis import given, strategies as st

from densicohom.multiindex import MultiIndex, InvalidParameterError, NotLowerableError, \
    enumerate_level, count, raise_index, lower_index, up_to_level


def test_python_version():
    assert sys.version_info.major == 3


def multi_index(n_min=1, n_max=4):
    return st.lists(st.integers(min_value=0, max_value=5), min_size=n_min, max_size=n_max) \
        .map(lambda entries: MultiIndex(tuple(entries)))


@pytest.mark.parametrize('n, k, expected',
                         [
                             (2, 2, [(2, 0), (1, 1), (0, 2)]),
                             (1, 3, [(3,)]),
                             (3, 1, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
                             (2, 0, [(0, 0)]),
                             (2, -1, []),
                         ])
def test_enumerate_level_good_weather(n, k, expected):
    assert [alpha.entries for alpha in enumerate_level(n, k)] == expected


def test_enumerate_level_bad_weather():
    with pytest.raises(InvalidParameterError):
        enumerate_level(0, 2)


@pytest.mark.parametrize('n, k, expected',
                         [
                             (2, 3, 4),
                             (3, 2, 6),
                             (2, -1, 0),
                             (1, 0, 1),
                             (0, 0, 1),
                             (0, 2, 0),
                         ])
def test_count(n, k, expected):
    assert count(n, k) == expected


def test_count_bad_weather():
    with pytest.raises(InvalidParameterError):
        count(-1, 2)


def test_count_is_exact_for_large_levels():
    assert count(40, 60) == comb(99, 60)


@pytest.mark.parametrize('alpha, i, expected',
                         [
                             ((1, 0), 2, (1, 1)),
                             ((0, 0, 0), 1, (1, 0, 0)),
                             ((2, 3), 1, (3, 3)),
                         ])
def test_raise_index(alpha, i, expected):
    assert raise_index(MultiIndex(alpha), i) == MultiIndex(expected)


@pytest.mark.parametrize('alpha, i, expected',
                         [
                             ((1, 1), 1, (0, 1)),
                             ((3,), 1, (2,)),
                         ])
def test_lower_index_good_weather(alpha, i, expected):
    assert lower_index(MultiIndex(alpha), i) == MultiIndex(expected)


def test_lower_index_not_lowerable():
    with pytest.raises(NotLowerableError):
        lower_index(MultiIndex((0, 2)), 1)


@pytest.mark.parametrize('i', [0, 3, -1])
def test_slot_out_of_range(i):
    with pytest.raises(InvalidParameterError):
        raise_index(MultiIndex((1, 1)), i)
    with pytest.raises(InvalidParameterError):
        lower_index(MultiIndex((1, 1)), i)


@pytest.mark.parametrize('entries', [(-1, 0), (1.5,), (True, 0)])
def test_multi_index_rejects_non_naturals(entries):
    with pytest.raises(InvalidParameterError):
        MultiIndex(entries)


def test_multi_index_accessors():
    alpha = MultiIndex((1, 0, 2))
    assert alpha.n == 3
    assert alpha.degree == 3
    assert alpha[3] == 2
    assert str(alpha) == "(1,0,2)"
    assert alpha.to_json() == [1, 0, 2]
    assert MultiIndex.from_json([1, 0, 2]) == alpha


@pytest.mark.parametrize('n', [1, 2, 3, 4])
@pytest.mark.parametrize('k', [0, 1, 2, 5])
def test_enumerate_matches_count_and_is_descending(n, k):
    level = enumerate_level(n, k)
    assert len(level) == count(n, k)
    assert all(a > b for a, b in zip(level, level[1:]))
    assert all(alpha.degree == k for alpha in level)


@pytest.mark.parametrize('n', [1, 2, 3, 4])
@pytest.mark.parametrize('k', [1, 2, 3, 6])
def test_level_difference_identity(n, k):
    assert count(n, k) - count(n, k - 1) == count(n - 1, k)


def test_up_to_level():
    assert [alpha.entries for alpha in up_to_level(2, 1)] == [(0, 0), (1, 0), (0, 1)]


@given(multi_index(), st.data())
def test_raise_then_lower(alpha, data):
    i = data.draw(st.integers(min_value=1, max_value=alpha.n))
    raised = raise_index(alpha, i)
    assert raised.degree == alpha.degree + 1
    assert lower_index(raised, i) == alpha


@given(multi_index(), st.data())
def test_lower_then_raise(alpha, data):
    i = data.draw(st.integers(min_value=1, max_value=alpha.n))
    if alpha[i] == 0:
        with pytest.raises(NotLowerableError):
            lower_index(alpha, i)
    else:
        assert raise_index(lower_index(alpha, i), i) == alpha
