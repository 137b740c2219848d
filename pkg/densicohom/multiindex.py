from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import List, Tuple


class Error(Exception):
    """Base class for exceptions in this module."""


class InvalidParameterError(Error):
    """Raised when a slot count, level or slot index is out of range"""


class NotLowerableError(Error):
    """Raised when lowering a slot whose derivative order is already zero"""


@dataclass(frozen=True, order=True)
class MultiIndex:
    """
    A multi-index (α₁, …, αₙ) of derivative orders, one per tensor slot.

    Ordering is lexicographic with the leftmost slot most significant, so sorting with
    ``reverse=True`` gives the descending order used for every matrix in the package.

    :param entries: the derivative orders, all non-negative
    :type entries: tuple
    """
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        for entry in entries:
            if not isinstance(entry, int) or isinstance(entry, bool) or entry < 0:
                raise InvalidParameterError(
                    "Multi-index entries must be natural numbers, got {e}.".format(e=entries))
        object.__setattr__(self, 'entries', entries)

    @property
    def n(self) -> int:
        """Number of slots."""
        return len(self.entries)

    @property
    def degree(self) -> int:
        """Total derivative order |α|."""
        return sum(self.entries)

    def __getitem__(self, i: int) -> int:
        """Entry of slot ``i``, counted from 1."""
        check_slot(self.n, i)
        return self.entries[i - 1]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "(" + ",".join(str(entry) for entry in self.entries) + ")"

    def to_json(self) -> List[int]:
        return list(self.entries)

    @classmethod
    def from_json(cls, data) -> 'MultiIndex':
        return cls(tuple(data))

    @classmethod
    def zero(cls, n: int) -> 'MultiIndex':
        return cls((0,) * n)


def check_slot(n: int, i: int):
    """
    Checks that ``i`` names one of the ``n`` slots.

    :raise InvalidParameterError: when ``i`` is not in 1..n
    """
    if not 1 <= i <= n:
        raise InvalidParameterError("Slot {i} is out of range 1..{n}.".format(i=i, n=n))


@lru_cache(maxsize=None)
def _compositions(n: int, k: int) -> Tuple[Tuple[int, ...], ...]:
    if n == 1:
        return ((k,),)
    result = []
    for head in range(k, -1, -1):
        for tail in _compositions(n - 1, k - head):
            result.append((head,) + tail)
    return tuple(result)


def enumerate_level(n: int, k: int) -> List[MultiIndex]:
    """
    Lists all α ∈ ℕⁿ with |α| = k in strictly descending lexicographic order.

    A negative level is empty.

    :param n: number of slots, at least 1
    :param k: the level |α|
    :return: the multi-indices of that level
    :raise InvalidParameterError: when n < 1
    """
    if n < 1:
        raise InvalidParameterError("The number of slots must be positive, got {n}.".format(n=n))
    if k < 0:
        return []
    return [MultiIndex(entries) for entries in _compositions(n, k)]


def count(n: int, k: int) -> int:
    """
    Number of multi-indices of ``n`` slots at level ``k``, that is C(n+k-1, k).

    Counting semantics throughout: an empty set counts 0, and with no slots only the empty
    multi-index exists, at level 0.

    :param n: number of slots
    :param k: the level
    :raise InvalidParameterError: when n < 0
    """
    if n < 0:
        raise InvalidParameterError("The number of slots cannot be negative, got {n}.".format(n=n))
    if k < 0:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    return comb(n + k - 1, k)


def raise_index(alpha: MultiIndex, i: int) -> MultiIndex:
    """
    Returns αⁱ, the multi-index with slot ``i`` raised by one.

    :raise InvalidParameterError: when ``i`` is not a slot of ``alpha``
    """
    check_slot(alpha.n, i)
    entries = list(alpha.entries)
    entries[i - 1] += 1
    return MultiIndex(tuple(entries))


def lower_index(alpha: MultiIndex, i: int) -> MultiIndex:
    """
    Returns α⁻ⁱ, the multi-index with slot ``i`` lowered by one.

    :raise InvalidParameterError: when ``i`` is not a slot of ``alpha``
    :raise NotLowerableError: when αᵢ = 0
    """
    check_slot(alpha.n, i)
    if alpha.entries[i - 1] == 0:
        raise NotLowerableError("Slot {i} of {a} is zero and cannot be lowered."
                                .format(i=i, a=alpha))
    entries = list(alpha.entries)
    entries[i - 1] -= 1
    return MultiIndex(tuple(entries))


def up_to_level(n: int, max_order: int) -> List[MultiIndex]:
    """All multi-indices with |α| <= max_order, level by level."""
    result = []
    for k in range(max_order + 1):
        result.extend(enumerate_level(n, k))
    return result
