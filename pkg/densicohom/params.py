from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from densicohom.exactlin import format_rational, parse_rational


class Error(Exception):
    """Base class for exceptions in this module."""


class InvalidParameterError(Error):
    """Raised when the weights do not describe a module D_{λ,μ}"""


@dataclass(frozen=True)
class ParamSpace:
    """
    The module datum (n, λ, μ) of the space D_{λ,μ} of n-ary differential operators from
    F_{λ₁}⊗…⊗F_{λₙ} to F_μ.

    The shift δ = μ - Σλᵢ is always derived, never stored.

    :param n: number of tensor slots
    :param lam: the weights λ₁, …, λₙ
    :param mu: the target weight μ
    """
    n: int
    lam: Tuple[Fraction, ...]
    mu: Fraction

    def __post_init__(self):
        lam = tuple(parse_rational(value) for value in self.lam)
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidParameterError("n must be a positive integer, got {n}.".format(n=self.n))
        if len(lam) != self.n:
            raise InvalidParameterError("Expected {n} weights, got {m}."
                                        .format(n=self.n, m=len(lam)))
        object.__setattr__(self, 'lam', lam)
        object.__setattr__(self, 'mu', parse_rational(self.mu))

    @classmethod
    def of(cls, lam: Sequence, mu) -> 'ParamSpace':
        """Builds the datum from the weights alone, n is their number."""
        return cls(len(lam), tuple(lam), mu)

    @classmethod
    def from_shift(cls, lam: Sequence, delta) -> 'ParamSpace':
        """Builds the datum with μ = Σλᵢ + δ."""
        lam = tuple(parse_rational(value) for value in lam)
        return cls(len(lam), lam, sum(lam, Fraction(0)) + parse_rational(delta))

    @property
    def delta(self) -> Fraction:
        """The shift δ = μ - Σλᵢ."""
        return self.mu - sum(self.lam, Fraction(0))

    def weight(self, i: int) -> Fraction:
        """λᵢ, slots counted from 1."""
        return self.lam[i - 1]

    def permuted(self, permutation: Sequence[int]) -> 'ParamSpace':
        """The same module with its slots reordered, ``permutation`` lists 0-based slots."""
        return ParamSpace(self.n, tuple(self.lam[p] for p in permutation), self.mu)

    def to_json(self) -> dict:
        return {
            'n': self.n,
            'lambda': [format_rational(value) for value in self.lam],
            'mu': format_rational(self.mu),
            'delta': format_rational(self.delta),
        }

    def __str__(self):
        return "n={n}, lambda=({lam}), mu={mu}".format(
            n=self.n, lam=",".join(format_rational(v) for v in self.lam),
            mu=format_rational(self.mu))
