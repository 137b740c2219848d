from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from sympy import QQ, ring

from densicohom.exactlin import format_rational
from densicohom.multiindex import MultiIndex, lower_index, raise_index
from densicohom.params import ParamSpace


class Error(Exception):
    """Base class for exceptions in this module."""


class InvalidParameterError(Error):
    """Raised when an input falls outside what an operation accepts"""


class ContextMismatchError(Error):
    """Raised when operators of different modules D_{λ,μ} are combined"""


Scalar = Union[int, Fraction]

_QQ_X, _X = ring("x", QQ)


def _to_domain(value: Scalar):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


class Poly:
    """
    A univariate polynomial over ℚ, held as an element of the sympy ring QQ[x].

    :attr:`coefficients` lists the coefficients lowest degree first without trailing zeros, so
    the zero polynomial has none and equality is coefficient equality.
    """
    __slots__ = ('element',)

    def __init__(self, coefficients: Sequence[Scalar] = ()):
        self.element = _QQ_X.from_dict({(j,): _to_domain(c) for j, c in enumerate(coefficients)})

    @classmethod
    def from_element(cls, element) -> 'Poly':
        poly = cls.__new__(cls)
        poly.element = element
        return poly

    @classmethod
    def constant(cls, value: Scalar) -> 'Poly':
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coefficient: Scalar = 1) -> 'Poly':
        return cls.from_element(_QQ_X.from_dict({(degree,): _to_domain(coefficient)}))

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        terms = dict(self.element.terms())
        return tuple(_to_fraction(terms.get((j,), QQ.zero)) for j in range(self.degree + 1))

    def coefficient(self, j: int) -> Fraction:
        """Coefficient of x^j."""
        return _to_fraction(dict(self.element.terms()).get((j,), QQ.zero))

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return -1 if self.is_zero() else self.element.degree()

    def is_zero(self) -> bool:
        return not self.element

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.element == other.element

    def __hash__(self):
        return hash(self.coefficients)

    def __add__(self, other: 'Poly') -> 'Poly':
        return Poly.from_element(self.element + other.element)

    def __neg__(self) -> 'Poly':
        return Poly.from_element(-self.element)

    def __sub__(self, other: 'Poly') -> 'Poly':
        return Poly.from_element(self.element - other.element)

    def __mul__(self, other: Union['Poly', Scalar]) -> 'Poly':
        if isinstance(other, Poly):
            return Poly.from_element(self.element * other.element)
        return Poly.from_element(self.element * _to_domain(other))

    __rmul__ = __mul__

    def derivative(self, order: int = 1) -> 'Poly':
        element = self.element
        for _ in range(order):
            element = element.diff(_X)
        return Poly.from_element(element)

    def __call__(self, x: Scalar) -> Fraction:
        return _to_fraction(self.element(_to_domain(x)))

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coefficients]

    def __repr__(self):
        return "Poly({c})".format(c=self.coefficients)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for j, c in enumerate(self.coefficients):
            if c == 0:
                continue
            power = "" if j == 0 else ("x" if j == 1 else "x^{j}".format(j=j))
            parts.append(format_rational(c) + ("*" + power if power else ""))
        return " + ".join(parts)


@dataclass(frozen=True)
class Sl2Element:
    """
    The vector field X_h = h d/dx with deg h <= 2.

    :param h: the coefficient polynomial
    """
    h: Poly

    def __post_init__(self):
        if self.h.degree > 2:
            raise InvalidParameterError("sl(2) elements have degree at most 2, got {h}."
                                        .format(h=self.h))

    def coordinates(self) -> Tuple[Fraction, Fraction, Fraction]:
        """Coordinates in the basis (X_1, X_x, X_{x²})."""
        return self.h.coefficient(0), self.h.coefficient(1), self.h.coefficient(2)


X_1 = Sl2Element(Poly.monomial(0))
X_X = Sl2Element(Poly.monomial(1))
X_X2 = Sl2Element(Poly.monomial(2))
SL2_BASIS = (X_1, X_X, X_X2)
SL2_BASIS_NAMES = ("X1", "Xx", "Xx2")
BASIS_PAIRS = ((0, 1), (0, 2), (1, 2))
BASIS_PAIR_NAMES = ("X1^Xx", "X1^Xx2", "Xx^Xx2")


def commutator(g: Sl2Element, h: Sl2Element) -> Sl2Element:
    """[X_g, X_h] = X_{g h' - g' h}."""
    return Sl2Element(g.h * h.h.derivative() - g.h.derivative() * h.h)


@dataclass(frozen=True)
class PolyOperator:
    """
    A multilinear differential operator F ↦ Σ_α p_α(x) F^(α) in D_{λ,μ}.

    :param context: the module the operator belongs to
    :param terms: coefficient polynomial of each derivative monomial F^(α), zeros dropped
    """
    context: ParamSpace
    terms: Mapping[MultiIndex, Poly] = field(default_factory=dict)

    def __post_init__(self):
        terms = {}
        for alpha, poly in self.terms.items():
            if alpha.n != self.context.n:
                raise InvalidParameterError("Multi-index {a} does not have {n} slots."
                                            .format(a=alpha, n=self.context.n))
            if not isinstance(poly, Poly):
                poly = Poly.constant(poly)
            if not poly.is_zero():
                terms[alpha] = poly
        object.__setattr__(self, 'terms', dict(sorted(terms.items(), reverse=True)))

    @classmethod
    def zero(cls, context: ParamSpace) -> 'PolyOperator':
        return cls(context, {})

    @classmethod
    def monomial(cls, context: ParamSpace, alpha: MultiIndex,
                 poly: Union[Poly, Scalar] = 1) -> 'PolyOperator':
        return cls(context, {alpha: poly})

    @classmethod
    def from_constants(cls, context: ParamSpace,
                       coefficients: Mapping[MultiIndex, Scalar]) -> 'PolyOperator':
        return cls(context, {alpha: Poly.constant(c) for alpha, c in coefficients.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: 'PolyOperator'):
        if other.context != self.context:
            raise ContextMismatchError("Cannot combine operators of {a} and {b}."
                                       .format(a=self.context, b=other.context))

    def __add__(self, other: 'PolyOperator') -> 'PolyOperator':
        self._check(other)
        terms = dict(self.terms)
        for alpha, poly in other.terms.items():
            terms[alpha] = terms.get(alpha, Poly()) + poly
        return PolyOperator(self.context, terms)

    def __neg__(self) -> 'PolyOperator':
        return PolyOperator(self.context, {alpha: -poly for alpha, poly in self.terms.items()})

    def __sub__(self, other: 'PolyOperator') -> 'PolyOperator':
        return self + (-other)

    def __mul__(self, factor: Union[Poly, Scalar]) -> 'PolyOperator':
        """Multiplies every coefficient by a scalar or a polynomial."""
        return PolyOperator(self.context,
                            {alpha: poly * factor for alpha, poly in self.terms.items()})

    __rmul__ = __mul__

    @property
    def order(self) -> int:
        """Highest |α| among the terms, -1 for the zero operator."""
        return max((alpha.degree for alpha in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(poly.degree <= 0 for poly in self.terms.values())

    def apply(self, densities: Sequence[Poly]) -> Poly:
        """Evaluates the operator on polynomial densities (f₁, …, fₙ)."""
        if len(densities) != self.context.n:
            raise InvalidParameterError("Expected {n} densities, got {m}."
                                        .format(n=self.context.n, m=len(densities)))
        total = Poly()
        for alpha, poly in self.terms.items():
            product = poly
            for f, order in zip(densities, alpha.entries):
                product = product * f.derivative(order)
            total = total + product
        return total

    def to_json(self) -> List[dict]:
        return [{'alpha': alpha.to_json(), 'poly': poly.to_json()}
                for alpha, poly in self.terms.items()]


@dataclass(frozen=True)
class Cochain1:
    """
    A linear map sl(2) → D_{λ,μ}, given by its values on (X_1, X_x, X_{x²}).
    """
    images: Tuple[PolyOperator, PolyOperator, PolyOperator]

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != 3:
            raise InvalidParameterError("A 1-cochain has three images, got {m}."
                                        .format(m=len(images)))
        for image in images[1:]:
            images[0]._check(image)
        object.__setattr__(self, 'images', images)

    @classmethod
    def zero(cls, context: ParamSpace) -> 'Cochain1':
        return cls((PolyOperator.zero(context),) * 3)

    @property
    def context(self) -> ParamSpace:
        return self.images[0].context

    def evaluate(self, element: Sl2Element) -> PolyOperator:
        """Value at any X_h of sl(2), extended linearly from the basis."""
        total = PolyOperator.zero(self.context)
        for coordinate, image in zip(element.coordinates(), self.images):
            if coordinate != 0:
                total = total + image * coordinate
        return total

    def is_zero(self) -> bool:
        return all(image.is_zero() for image in self.images)

    def __add__(self, other: 'Cochain1') -> 'Cochain1':
        return Cochain1(tuple(a + b for a, b in zip(self.images, other.images)))

    def __sub__(self, other: 'Cochain1') -> 'Cochain1':
        return Cochain1(tuple(a - b for a, b in zip(self.images, other.images)))

    def __mul__(self, factor: Scalar) -> 'Cochain1':
        return Cochain1(tuple(image * factor for image in self.images))

    __rmul__ = __mul__

    def to_json(self) -> dict:
        return {name: image.to_json() for name, image in zip(SL2_BASIS_NAMES, self.images)}


@dataclass(frozen=True)
class Cochain2:
    """
    An alternating bilinear map sl(2)×sl(2) → D_{λ,μ}, given on the pairs
    (X_1∧X_x, X_1∧X_{x²}, X_x∧X_{x²}).
    """
    images: Tuple[PolyOperator, PolyOperator, PolyOperator]

    def __post_init__(self):
        images = tuple(self.images)
        if len(images) != 3:
            raise InvalidParameterError("A 2-cochain has three images, got {m}."
                                        .format(m=len(images)))
        for image in images[1:]:
            images[0]._check(image)
        object.__setattr__(self, 'images', images)

    def is_zero(self) -> bool:
        return all(image.is_zero() for image in self.images)

    def to_json(self) -> dict:
        return {name: image.to_json() for name, image in zip(BASIS_PAIR_NAMES, self.images)}


def _with_slot(alpha: MultiIndex, i: int, value: int) -> MultiIndex:
    entries = list(alpha.entries)
    entries[i - 1] = value
    return MultiIndex(tuple(entries))


def _accumulate(terms: Dict[MultiIndex, Poly], alpha: MultiIndex, poly: Poly):
    if not poly.is_zero():
        terms[alpha] = terms.get(alpha, Poly()) + poly


def _derivatives(h: Poly) -> List[Poly]:
    """h, h', h'', … up to the last nonzero derivative."""
    result = []
    while not h.is_zero():
        result.append(h)
        h = h.derivative()
    return result


def act_on_operator(g: Sl2Element, operator: PolyOperator) -> PolyOperator:
    """
    The action X_h·A = L^μ_{X_h}∘A - A∘L^λ_{X_h}, expanded into Σ p_α F^(α).

    L^μ(A(F)) = h·(A F)' + μh'·A F is differentiated term by term. A(L^λ F) uses
    L^λ(F) = Σᵢ f₁⊗…⊗(hfᵢ' + λᵢh'fᵢ)⊗…⊗fₙ and the Leibniz rule for the αᵢ-th derivative
    of each slot, which terminates because h is a polynomial.

    :param g: the vector field X_h
    :param operator: the operator A
    """
    context = operator.context
    h_derivatives = _derivatives(g.h)
    h = g.h
    h_prime = h.derivative()
    terms: Dict[MultiIndex, Poly] = {}
    for alpha, poly in operator.terms.items():
        _accumulate(terms, alpha, h * poly.derivative())
        for i in range(1, context.n + 1):
            _accumulate(terms, raise_index(alpha, i), h * poly)
        _accumulate(terms, alpha, h_prime * poly * context.mu)

        for i in range(1, context.n + 1):
            a = alpha.entries[i - 1]
            weight = context.weight(i)
            for m in range(min(a, len(h_derivatives) - 1) + 1):
                binomial = comb(a, m)
                # ∂^m h · fᵢ^(a-m+1)
                _accumulate(terms, _with_slot(alpha, i, a - m + 1),
                            h_derivatives[m] * poly * (-binomial))
                # λᵢ ∂^(m+1) h · fᵢ^(a-m)
                if m + 1 < len(h_derivatives):
                    _accumulate(terms, _with_slot(alpha, i, a - m),
                                h_derivatives[m + 1] * poly * (-binomial * weight))
    return PolyOperator(context, terms)


def differential0(operator: PolyOperator) -> Cochain1:
    """∂b(X) = X·b on the basis of sl(2)."""
    return Cochain1(tuple(act_on_operator(element, operator) for element in SL2_BASIS))


def differential1(cochain: Cochain1) -> Cochain2:
    """∂c(g, h) = g·c(h) - h·c(g) - c([g, h]) on the three basis pairs."""
    images = []
    for a, b in BASIS_PAIRS:
        g, h = SL2_BASIS[a], SL2_BASIS[b]
        images.append(act_on_operator(g, cochain.images[b])
                      - act_on_operator(h, cochain.images[a])
                      - cochain.evaluate(commutator(g, h)))
    return Cochain2(tuple(images))


def _constant_value(alpha: MultiIndex, value) -> Fraction:
    if isinstance(value, Poly):
        if value.degree > 0:
            raise InvalidParameterError("Coefficient of {a} is not constant: {p}."
                                        .format(a=alpha, p=value))
        return value.coefficient(0)
    return Fraction(value)


def closed_form_coboundary(coefficients: Mapping[MultiIndex, Union[Poly, Scalar]],
                           context: ParamSpace) -> Cochain1:
    """
    Coboundary of b = Σ D_α F^(α) with constant D, from the closed form

        ∂b(X_h) = Σ (δ-|α|) D_α h' F^(α) - ½ Σ_α Σᵢ αᵢ(αᵢ+2λᵢ-1) D_α h'' F^(α⁻ⁱ).

    :param coefficients: the map α ↦ D_α
    :param context: the module of b
    :raise InvalidParameterError: when a coefficient is a non-constant polynomial
    """
    delta = context.delta
    h_prime_part: Dict[MultiIndex, Fraction] = {}
    h_second_part: Dict[MultiIndex, Fraction] = {}
    for alpha, value in coefficients.items():
        d = _constant_value(alpha, value)
        if d == 0:
            continue
        h_prime_part[alpha] = h_prime_part.get(alpha, Fraction(0)) + (delta - alpha.degree) * d
        for i in range(1, context.n + 1):
            a = alpha.entries[i - 1]
            if a == 0:
                continue
            lowered = lower_index(alpha, i)
            h_second_part[lowered] = h_second_part.get(lowered, Fraction(0)) \
                - Fraction(a * (a + 2 * context.weight(i) - 1), 2) * d
    return h_derivative_cochain(h_prime_part, h_second_part, context)


def h_derivative_cochain(h_prime_part: Mapping[MultiIndex, Scalar],
                         h_second_part: Mapping[MultiIndex, Scalar],
                         context: ParamSpace) -> Cochain1:
    """
    The cochain X_h ↦ Σ P_α h' F^(α) + Σ Q_β h'' F^(β) with constant P and Q.
    """
    p = PolyOperator.from_constants(context, h_prime_part)
    q = PolyOperator.from_constants(context, h_second_part)
    images = []
    for element in SL2_BASIS:
        images.append(p * element.h.derivative() + q * element.h.derivative(2))
    return Cochain1(tuple(images))


def operator_terms(operators: Iterable[PolyOperator]) -> List[Tuple[int, MultiIndex, int, Fraction]]:
    """Flattens operators into (position, α, power of x, coefficient) entries."""
    entries = []
    for position, operator in enumerate(operators):
        for alpha, poly in operator.terms.items():
            for power, coefficient in enumerate(poly.coefficients):
                if coefficient != 0:
                    entries.append((position, alpha, power, coefficient))
    return entries
