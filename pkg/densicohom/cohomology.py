from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from densicohom import exactlin
from densicohom.exactlin import QMatrix, format_rational
from densicohom.multiindex import MultiIndex, count, enumerate_level, lower_index, raise_index
from densicohom.params import ParamSpace
from densicohom.py3_logger import get_logger
from densicohom.symcalc import Cochain1, Poly, closed_form_coboundary, h_derivative_cochain

Coefficients = Dict[MultiIndex, Fraction]


class Error(Exception):
    """Base class for exceptions in this module."""


class NotACocycleError(Error):
    """Raised when coefficient maps violate the cocycle equations"""


class WrongCaseError(Error):
    """Raised when an operation needs an integral shift δ = k ∈ ℕ and gets another one"""


@dataclass(frozen=True)
class NonIntegerShift:
    """δ ∉ {0, 1, 2, …}: every cocycle is a coboundary."""

    @property
    def is_integer(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {'tag': 'NonIntegerShift'}


@dataclass(frozen=True)
class IntegerShift:
    """
    δ = k ∈ ℕ.

    :param k: the shift
    :param resonant: whether -2λᵢ ∈ {0, …, k-1} for every slot
    :param r: max(-2λᵢ), set only in the resonant case
    """
    k: int
    resonant: bool = False
    r: Optional[int] = None

    @property
    def is_integer(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {'tag': 'Integer', 'k': self.k, 'resonant': self.resonant, 'r': self.r}


CaseTag = Union[NonIntegerShift, IntegerShift]


@dataclass(frozen=True)
class LambdaMatrix:
    """
    The constraint matrix Λ linking level k-1 (rows) to level k (columns).

    Entry (β, βⁱ) is (βᵢ+1)(βᵢ+2λᵢ), every other entry is zero. Both index sets are in
    descending lexicographic order.
    """
    matrix: QMatrix
    rows: Tuple[MultiIndex, ...]
    cols: Tuple[MultiIndex, ...]

    def to_json(self) -> dict:
        return {
            'rows': [beta.to_json() for beta in self.rows],
            'cols': [alpha.to_json() for alpha in self.cols],
            'entries': self.matrix.to_json(),
        }


@dataclass(frozen=True)
class CocycleSymbolic:
    """
    A normal-form 1-cocycle c(X_h, F) = Σ_{|α|=k} B_α h'F^(α) + Σ_{|β|=k-1} C_β h''F^(β).

    :param b: the h'-coefficients, level k
    :param c: the h''-coefficients, level k-1
    :param name: optional label, ``C0`` for the δ = 0 class
    """
    b: Mapping[MultiIndex, Fraction] = field(default_factory=dict)
    c: Mapping[MultiIndex, Fraction] = field(default_factory=dict)
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, 'b', _clean(self.b))
        object.__setattr__(self, 'c', _clean(self.c))

    @property
    def is_b_type(self) -> bool:
        return bool(self.b)

    def to_json(self) -> dict:
        data = {
            'B': [{'alpha': alpha.to_json(), 'coef': format_rational(value)}
                  for alpha, value in self.b.items()],
            'C': [{'alpha': beta.to_json(), 'coef': format_rational(value)}
                  for beta, value in self.c.items()],
        }
        if self.name is not None:
            data['name'] = self.name
        return data


@dataclass(frozen=True)
class CohomologyReport:
    """Dimensions of H¹(sl(2), D_{λ,μ}) and of the aff(1)-relative space at one point."""
    params: ParamSpace
    case: CaseTag
    n_k: int
    n_k_minus_1: int
    rank_lambda: int
    dim_h1: int
    dim_h1_relative: int
    paper_lower: int
    paper_upper: int
    bounds_satisfied: bool

    def to_json(self) -> dict:
        return {
            'params': self.params.to_json(),
            'case': self.case.to_json(),
            'N_k': self.n_k,
            'N_k_minus_1': self.n_k_minus_1,
            'rank_lambda': self.rank_lambda,
            'dim_h1': self.dim_h1,
            'dim_h1_relative': self.dim_h1_relative,
            'paper_lower': self.paper_lower,
            'paper_upper': self.paper_upper,
            'bounds_satisfied': self.bounds_satisfied,
        }


@dataclass(frozen=True)
class TrivialityResult:
    """
    Outcome of :func:`is_trivial`.

    A trivial cocycle carries ``witness``, the level-k map D with c = ∂(Σ D_α F^(α)).
    A nontrivial one carries either ``nonzero_b``, an index with B_α ≠ 0, or
    ``certificate``, a y with yᵀΛ = 0 and yᵀC ≠ 0.
    """
    trivial: bool
    witness: Optional[Coefficients] = None
    certificate: Optional[Coefficients] = None
    nonzero_b: Optional[MultiIndex] = None

    def to_json(self) -> dict:
        return {
            'trivial': self.trivial,
            'witness': _coefficients_json(self.witness),
            'certificate': _coefficients_json(self.certificate),
            'nonzero_B': self.nonzero_b.to_json() if self.nonzero_b is not None else None,
        }


def _clean(coefficients: Mapping[MultiIndex, Union[int, Fraction]]) -> Coefficients:
    cleaned = {alpha: Fraction(value) for alpha, value in coefficients.items() if value != 0}
    return dict(sorted(cleaned.items(), reverse=True))


def _coefficients_json(coefficients: Optional[Mapping[MultiIndex, Fraction]]):
    if coefficients is None:
        return None
    return [{'alpha': alpha.to_json(), 'coef': format_rational(value)}
            for alpha, value in coefficients.items()]


def integral_shift(params: ParamSpace) -> Optional[int]:
    """δ as a natural number, or None when δ ∉ ℕ."""
    delta = params.delta
    if delta.denominator != 1 or delta < 0:
        return None
    return int(delta)


def classify(params: ParamSpace) -> CaseTag:
    """
    Splits parameter points into the non-integral case and the integral case δ = k, the latter
    flagged resonant when -2λᵢ ∈ {0, …, k-1} for every slot.
    """
    k = integral_shift(params)
    if k is None:
        return NonIntegerShift()
    resonances = []
    for weight in params.lam:
        twice = -2 * weight
        if twice.denominator == 1 and 0 <= twice <= k - 1:
            resonances.append(int(twice))
    if k >= 1 and len(resonances) == params.n:
        return IntegerShift(k, resonant=True, r=max(resonances))
    return IntegerShift(k)


def build_lambda_matrix(params: ParamSpace, k: int) -> LambdaMatrix:
    """
    Λ with rows |β| = k-1 and columns |α| = k; for k = 0 it is the empty 0 × 1 matrix.
    """
    rows = tuple(enumerate_level(params.n, k - 1))
    cols = tuple(enumerate_level(params.n, k))
    col_positions = {alpha: j for j, alpha in enumerate(cols)}
    entries = []
    for beta in rows:
        row = [Fraction(0)] * len(cols)
        for i in range(1, params.n + 1):
            b = beta.entries[i - 1]
            row[col_positions[raise_index(beta, i)]] = (b + 1) * (b + 2 * params.weight(i))
        entries.append(row)
    return LambdaMatrix(QMatrix.from_rows(entries, len(cols)), rows, cols)


def compute(params: ParamSpace) -> CohomologyReport:
    """
    Exact dim H¹(sl(2), D_{λ,μ}) = N_k + N_{k-1} - 2 rank Λ and
    dim H¹(sl(2), aff(1); D_{λ,μ}) = N_{k-1} - rank Λ, both zero when δ ∉ ℕ.

    The report also carries the published bounds: C(n+k-2, k) in the generic case, and that
    value plus twice the number of β with |β| = k-1 and β₁ = r in the resonant case.
    """
    logger = get_logger()
    case = classify(params)
    if not case.is_integer:
        logger.debug("{p}: shift is not a natural number.".format(p=params))
        return CohomologyReport(params, case, 0, 0, 0, 0, 0, 0, 0, True)

    k = case.k
    n_k = count(params.n, k)
    n_k_minus_1 = count(params.n, k - 1)
    rank_lambda = exactlin.rank(build_lambda_matrix(params, k).matrix)
    if not case.resonant and rank_lambda < n_k_minus_1:
        logger.warning("{p}: generic point with rank {r} < N_(k-1) = {m}."
                       .format(p=params, r=rank_lambda, m=n_k_minus_1))

    dim_h1 = n_k + n_k_minus_1 - 2 * rank_lambda
    dim_h1_relative = n_k_minus_1 - rank_lambda
    lower = count(params.n - 1, k)
    upper = lower
    if case.resonant:
        upper = lower + 2 * count(params.n - 1, k - 1 - case.r)
    bounds_satisfied = lower <= dim_h1 <= upper
    if not bounds_satisfied:
        logger.error("{p}: dimension {d} outside the bounds [{lo}, {up}]."
                     .format(p=params, d=dim_h1, lo=lower, up=upper))
    return CohomologyReport(params, case, n_k, n_k_minus_1, rank_lambda, dim_h1,
                            dim_h1_relative, lower, upper, bounds_satisfied)


def basis(params: ParamSpace) -> List[CocycleSymbolic]:
    """
    Canonical cocycles spanning H¹: first the B-type ones (B over the kernel basis of Λ,
    C = 0), then the C-type ones (B = 0, C = e_β for every row β of Λ that depends on the
    rows above it).
    """
    case = classify(params)
    if not case.is_integer:
        return []
    k = case.k
    lam_matrix = build_lambda_matrix(params, k)
    name = 'C0' if k == 0 else None
    cocycles = []
    for vector in exactlin.kernel_basis(lam_matrix.matrix):
        cocycles.append(CocycleSymbolic(dict(zip(lam_matrix.cols, vector)), {}, name))
    for position in exactlin.dependent_rows(lam_matrix.matrix):
        cocycles.append(CocycleSymbolic({}, {lam_matrix.rows[position]: Fraction(1)}))
    return cocycles


def check_coefficients(b: Mapping[MultiIndex, Fraction], c: Mapping[MultiIndex, Fraction],
                       params: ParamSpace) -> List[MultiIndex]:
    """
    Indices α where 2(δ-|α|-1)C_α + Σᵢ(αᵢ+1)(αᵢ+2λᵢ)B_{αⁱ} ≠ 0.

    An empty result means X_h ↦ Σ B_α h'F^(α) + Σ C_α h''F^(α) is a cocycle.
    """
    delta = params.delta
    candidates = set(c)
    for alpha in b:
        for i in range(1, params.n + 1):
            if alpha.entries[i - 1] > 0:
                candidates.add(lower_index(alpha, i))
    failures = []
    for alpha in sorted(candidates, reverse=True):
        total = 2 * (delta - alpha.degree - 1) * Fraction(c.get(alpha, 0))
        for i in range(1, params.n + 1):
            a = alpha.entries[i - 1]
            total += (a + 1) * (a + 2 * params.weight(i)) * Fraction(b.get(raise_index(alpha, i), 0))
        if total != 0:
            failures.append(alpha)
    return failures


def _check_indices(coefficients: Mapping[MultiIndex, Fraction], params: ParamSpace):
    for alpha in coefficients:
        if alpha.n != params.n:
            raise NotACocycleError("Multi-index {a} does not have {n} slots."
                                   .format(a=alpha, n=params.n))


def normalizing_source(b: Mapping[MultiIndex, Fraction], params: ParamSpace) -> Coefficients:
    """
    The operator b = Σ B_α/(δ-|α|) F^(α) over the levels |α| ≠ δ whose coboundary removes
    every h'-term off level δ (and, through the cocycle equations, every h''-term off
    level δ-1).
    """
    delta = params.delta
    return _clean({alpha: Fraction(value) / (delta - alpha.degree)
                   for alpha, value in b.items() if alpha.degree != delta})


def normalize_cocycle(b: Mapping[MultiIndex, Fraction], c: Mapping[MultiIndex, Fraction],
                      params: ParamSpace) -> CocycleSymbolic:
    """
    The normal form of the cocycle X_h ↦ Σ B_α h'F^(α) + Σ C_α h''F^(α) with constant
    coefficients at all levels, obtained by subtracting ∂ of :func:`normalizing_source`.

    :raise WrongCaseError: when δ ∉ ℕ, where every such cocycle is trivial
    :raise NotACocycleError: when the coefficient maps violate the cocycle equations
    """
    k = integral_shift(params)
    if k is None:
        raise WrongCaseError("Shift {d} is not a natural number, the cocycle is a coboundary."
                             .format(d=format_rational(params.delta)))
    _check_indices(b, params)
    _check_indices(c, params)
    failures = check_coefficients(b, c, params)
    if failures:
        raise NotACocycleError("Cocycle equations fail at {f}."
                               .format(f=", ".join(str(alpha) for alpha in failures)))
    source = normalizing_source(b, params)
    get_logger().debug("Normalizing with source {s}.".format(s=_coefficients_json(source)))
    cochain = realize(CocycleSymbolic(b, c), params) - closed_form_coboundary(source, params)
    normal_b, normal_c = decompose(cochain, params)
    return CocycleSymbolic(normal_b, normal_c)


def _check_normal_form(cocycle: CocycleSymbolic, params: ParamSpace) -> Tuple[int, LambdaMatrix]:
    k = integral_shift(params)
    if k is None:
        raise WrongCaseError("Shift {d} is not a natural number."
                             .format(d=format_rational(params.delta)))
    _check_indices(cocycle.b, params)
    _check_indices(cocycle.c, params)
    if any(alpha.degree != k for alpha in cocycle.b) \
            or any(beta.degree != k - 1 for beta in cocycle.c):
        raise NotACocycleError("Coefficients outside the levels {k} and {j}."
                               .format(k=k, j=k - 1))
    lam_matrix = build_lambda_matrix(params, k)
    b_vector = [cocycle.b.get(alpha, Fraction(0)) for alpha in lam_matrix.cols]
    if not exactlin.is_zero_vector(lam_matrix.matrix.apply(b_vector)):
        raise NotACocycleError("The h'-coefficients are not in the kernel of the Lambda matrix.")
    return k, lam_matrix


def is_trivial(cocycle: CocycleSymbolic, params: ParamSpace) -> TrivialityResult:
    """
    Decides whether a normal-form cocycle is a coboundary.

    A nonzero B is never trivial. With B = 0 the cocycle is ∂(Σ D_α F^(α)) for a level-k D
    exactly when -½Λ·D = C is solvable.

    :raise WrongCaseError: when δ ∉ ℕ
    :raise NotACocycleError: when the cocycle is not a normal-form cocycle
    """
    _, lam_matrix = _check_normal_form(cocycle, params)
    if cocycle.b:
        return TrivialityResult(False, nonzero_b=next(iter(cocycle.b)))
    c_vector = [cocycle.c.get(beta, Fraction(0)) for beta in lam_matrix.rows]
    solution = exactlin.solve_or_witness(lam_matrix.matrix.scaled(Fraction(1, 2)), c_vector)
    if solution.consistent:
        return TrivialityResult(True, witness=dict(zip(lam_matrix.cols,
                                                       (-x for x in solution.x))))
    return TrivialityResult(False, certificate=dict(zip(lam_matrix.rows, solution.certificate)))


def realize(cocycle: CocycleSymbolic, params: ParamSpace) -> Cochain1:
    """The cochain X_h ↦ Σ B_α h'F^(α) + Σ C_β h''F^(β) on the basis of sl(2)."""
    return h_derivative_cochain(cocycle.b, cocycle.c, params)


def decompose(cochain: Cochain1, params: ParamSpace) -> Tuple[Coefficients, Coefficients]:
    """
    Reads (B, C) back from a cochain of the form X_h ↦ h'P + h''Q with constant P and Q.

    On the basis, c(X_1) = 0, c(X_x) = P and c(X_{x²}) = 2xP + 2Q.

    :raise NotACocycleError: when the cochain has another shape
    """
    first, second, third = cochain.images
    if not first.is_zero():
        raise NotACocycleError("The cochain does not vanish on X_1.")
    if not second.is_constant():
        raise NotACocycleError("The h'-part has non-constant coefficients.")
    remainder = third - second * Poly.monomial(1, 2)
    if not remainder.is_constant():
        raise NotACocycleError("The h''-part has non-constant coefficients.")
    b = {alpha: poly.coefficient(0) for alpha, poly in second.terms.items()}
    c = {alpha: poly.coefficient(0) / 2 for alpha, poly in remainder.terms.items()}
    _check_indices(b, params)
    return _clean(b), _clean(c)


def _slot_symbol(n: int, i: int) -> str:
    if n == 1:
        return 'f'
    if n == 2:
        return ('f', 'g')[i - 1]
    return 'f{i}'.format(i=i)


def _derivative_symbol(symbol: str, order: int) -> str:
    if order <= 3:
        return symbol + "'" * order
    return "{s}^({m})".format(s=symbol, m=order)


def annotate(cocycle: CocycleSymbolic, n: int) -> str:
    """
    Human-readable form of the cocycle, e.g. ``h' f'' g - 4 h' f' g' + h' f g''``.

    Slots are written f, g for n <= 2 and f1, ..., fn beyond.
    """
    terms = [("h'", alpha, value) for alpha, value in cocycle.b.items()]
    terms += [("h''", beta, value) for beta, value in cocycle.c.items()]
    if not terms:
        return "0"
    text = ""
    for position, (h_part, alpha, value) in enumerate(terms):
        factors = " ".join(_derivative_symbol(_slot_symbol(n, i), order)
                           for i, order in enumerate(alpha.entries, start=1))
        magnitude = abs(value)
        body = "{h} {f}".format(h=h_part, f=factors)
        if magnitude != 1:
            body = "{m} {b}".format(m=format_rational(magnitude), b=body)
        if position == 0:
            text = ("-" if value < 0 else "") + body
        else:
            text += (" - " if value < 0 else " + ") + body
    return text
