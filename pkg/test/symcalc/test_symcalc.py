import sys
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from densicohom.multiindex import MultiIndex, up_to_level
from densicohom.params import ParamSpace
from densicohom.symcalc import Poly, Sl2Element, PolyOperator, Cochain1, X_1, X_X, X_X2, \
    SL2_BASIS, InvalidParameterError, ContextMismatchError, commutator, act_on_operator, \
    differential0, differential1, closed_form_coboundary, h_derivative_cochain

x = sympy.Symbol('x')


def test_python_version():
    assert sys.version_info.major == 3


def rationals():
    return st.fractions(min_value=-3, max_value=3, max_denominator=4)


def param_spaces(max_n=2):
    return st.integers(min_value=1, max_value=max_n).flatmap(
        lambda n: st.tuples(st.lists(rationals(), min_size=n, max_size=n), rationals())
        .map(lambda pair: ParamSpace.of(pair[0], pair[1])))


def polys(max_degree=3):
    return st.lists(rationals(), max_size=max_degree + 1).map(lambda c: Poly(tuple(c)))


def operators(params, max_order=2, constant=False):
    coefficients = polys(0) if constant else polys()
    return st.dictionaries(st.sampled_from(up_to_level(params.n, max_order)), coefficients,
                           max_size=4).map(lambda terms: PolyOperator(params, terms))


def as_sympy(poly: Poly):
    return sum((sympy.Rational(c.numerator, c.denominator) * x ** j
                for j, c in enumerate(poly.coefficients)), sympy.Integer(0))


def sympy_apply(operator: PolyOperator, densities):
    total = sympy.Integer(0)
    for alpha, poly in operator.terms.items():
        product = as_sympy(poly)
        for f, order in zip(densities, alpha.entries):
            product *= f if order == 0 else sympy.diff(f, x, order)
        total += product
    return total


def lie_derivative(f, weight, h):
    return h * sympy.diff(f, x) + sympy.Rational(weight.numerator, weight.denominator) \
        * sympy.diff(h, x) * f


def identity(params):
    return PolyOperator.monomial(params, MultiIndex.zero(params.n))


def test_poly_canonical_form():
    assert Poly((1, 2, 0, 0)).coefficients == (1, 2)
    assert Poly((0, 0)).is_zero()
    assert Poly().degree == -1
    assert Poly((1, 0, 3)).derivative() == Poly((0, 6))
    assert Poly((1, 0, 3))(2) == 13
    assert Poly((1, 1)) * Poly((-1, 1)) == Poly((-1, 0, 1))


def test_poly_lives_in_rational_ring():
    poly = Poly((Fraction(1, 2), 0, -3))
    assert poly.element.ring.domain == sympy.QQ
    assert poly.coefficients == (Fraction(1, 2), 0, -3)
    assert poly.coefficient(5) == 0
    assert poly.to_json() == ["1/2", "0", "-3"]
    assert Poly((0, 1, 0)) == Poly.monomial(1)
    assert hash(Poly((2, 0))) == hash(Poly.constant(2))


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), rationals())
def test_poly_arithmetic_matches_sympy(p, q, point):
    assert sympy.expand(as_sympy(p * q) - as_sympy(p) * as_sympy(q)) == 0
    assert sympy.expand(as_sympy(p - q * 3) - (as_sympy(p) - 3 * as_sympy(q))) == 0
    assert sympy.expand(as_sympy(p.derivative(2)) - sympy.diff(as_sympy(p), x, 2)) == 0
    value = as_sympy(p).subs(x, sympy.Rational(point.numerator, point.denominator))
    assert p(point) == Fraction(int(sympy.numer(value)), int(sympy.denom(value)))


def test_sl2_element_degree_bound():
    with pytest.raises(InvalidParameterError):
        Sl2Element(Poly.monomial(3))


@pytest.mark.parametrize('g, h, expected',
                         [
                             (X_1, X_X2, Poly((0, 2))),
                             (X_X, X_X, Poly()),
                             (X_1, X_X, Poly((1,))),
                         ])
def test_commutator(g, h, expected):
    assert commutator(g, h).h == expected


def test_identity_commutes_with_translations():
    params = ParamSpace.of([Fraction(1, 3)], 2)
    assert act_on_operator(X_1, identity(params)).is_zero()


def test_identity_scaled_by_shift():
    params = ParamSpace.of([Fraction(1, 3)], 2)
    result = act_on_operator(X_X, identity(params))
    assert result == identity(params) * params.delta


def test_derivative_invariant_from_zero_to_one_densities():
    params = ParamSpace.of([0], 1)
    derivative = PolyOperator.monomial(params, MultiIndex((1,)))
    assert act_on_operator(X_X2, derivative).is_zero()


def test_derivative_action_with_half_weight():
    params = ParamSpace.of([Fraction(1, 2)], 2)
    derivative = PolyOperator.monomial(params, MultiIndex((1,)))
    expected = PolyOperator(params, {MultiIndex((1,)): Poly((0, 1)), MultiIndex((0,)): -1})
    assert act_on_operator(X_X2, derivative) == expected


def test_operator_context_mismatch():
    a = identity(ParamSpace.of([0], 1))
    b = identity(ParamSpace.of([0], 2))
    with pytest.raises(ContextMismatchError):
        a + b


def test_operator_rejects_wrong_slot_count():
    with pytest.raises(InvalidParameterError):
        PolyOperator(ParamSpace.of([0, 0], 1), {MultiIndex((1,)): 1})


def test_operator_apply():
    params = ParamSpace.of([0, 0], 1)
    operator = PolyOperator(params, {MultiIndex((1, 0)): Poly((0, 1)), MultiIndex((0, 1)): 2})
    f, g = Poly((0, 0, 1)), Poly((1, 1))
    # x·(2x)·(1+x) + 2·x²·1
    assert operator.apply([f, g]) == Poly((0, 0, 4, 2))


def test_cochain_evaluate_is_linear():
    params = ParamSpace.of([0], 1)
    images = (identity(params), identity(params) * 2, identity(params) * 3)
    cochain = Cochain1(images)
    value = cochain.evaluate(Sl2Element(Poly((1, -1, 2))))
    assert value == identity(params) * (1 - 2 + 6)


def test_differential0_of_zero():
    params = ParamSpace.of([Fraction(1, 2), 1], 3)
    assert differential0(PolyOperator.zero(params)).is_zero()


def test_differential0_identity_invariant_at_zero_shift():
    params = ParamSpace.of([Fraction(1, 2), Fraction(1, 2)], 1)
    assert differential0(identity(params)).is_zero()


@pytest.mark.parametrize('lam', [[Fraction(1, 5)], [Fraction(2, 3), -1], [0, 1, Fraction(1, 2)]])
def test_zero_shift_cocycle_is_closed(lam):
    params = ParamSpace.from_shift(lam, 0)
    cocycle = h_derivative_cochain({MultiIndex.zero(params.n): 1}, {}, params)
    assert differential1(cocycle).is_zero()
    assert not cocycle.is_zero()


def test_pure_second_derivative_cochain_is_not_closed():
    params = ParamSpace.of([Fraction(1, 3)], Fraction(7, 5))
    zero = PolyOperator.zero(params)
    cochain = Cochain1((zero, zero, identity(params)))
    assert not differential1(cochain).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_action_matches_pointwise_lie_derivatives(data):
    params = data.draw(param_spaces())
    operator = data.draw(operators(params))
    h = data.draw(polys(2))
    densities = [as_sympy(data.draw(polys(4))) for _ in range(params.n)]
    h_expr = as_sympy(h)

    lhs = sympy_apply(act_on_operator(Sl2Element(h), operator), densities)
    rhs = lie_derivative(sympy_apply(operator, densities), params.mu, h_expr)
    for i in range(params.n):
        moved = list(densities)
        moved[i] = lie_derivative(densities[i], params.lam[i], h_expr)
        rhs -= sympy_apply(operator, moved)
    assert sympy.expand(lhs - rhs) == 0


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_differential_squares_to_zero(data):
    params = data.draw(param_spaces(3))
    operator = data.draw(operators(params, max_order=3))
    assert differential1(differential0(operator)).is_zero()


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_closed_form_coboundary_matches_differential0(data):
    params = data.draw(param_spaces(3))
    operator = data.draw(operators(params, max_order=3, constant=True))
    assert closed_form_coboundary(operator.terms, params) == differential0(operator)


def test_closed_form_rejects_polynomial_coefficients():
    params = ParamSpace.of([0], 1)
    with pytest.raises(InvalidParameterError):
        closed_form_coboundary({MultiIndex((1,)): Poly((0, 1))}, params)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_action_respects_brackets(data):
    params = data.draw(param_spaces(3))
    operator = data.draw(operators(params, max_order=3))
    for g in SL2_BASIS:
        for h in SL2_BASIS:
            lhs = act_on_operator(commutator(g, h), operator)
            rhs = act_on_operator(g, act_on_operator(h, operator)) \
                - act_on_operator(h, act_on_operator(g, operator))
            assert lhs == rhs


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_action_is_linear(data):
    params = data.draw(param_spaces(3))
    a = data.draw(operators(params, max_order=3))
    b = data.draw(operators(params, max_order=3))
    r = data.draw(rationals())
    h = Sl2Element(data.draw(polys(2)))
    assert act_on_operator(h, a + b * r) == act_on_operator(h, a) + act_on_operator(h, b) * r
