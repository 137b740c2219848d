from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from densicohom import exactlin
from densicohom.exactlin import QMatrix
from densicohom.multiindex import MultiIndex, up_to_level
from densicohom.params import ParamSpace
from densicohom.py3_logger import get_logger
from densicohom.symcalc import Cochain1, Poly, PolyOperator, differential0, differential1, \
    operator_terms

Coordinate = Tuple[int, MultiIndex, int]


class Error(Exception):
    """Base class for exceptions in this module."""


class InvalidBoxError(Error):
    """Raised when a truncation box or a stabilization schedule is malformed"""


@dataclass(frozen=True)
class TruncationBox:
    """
    Finite window on the cochain spaces.

    :param max_order: cap M on |α| for operator terms
    :param max_degree: cap d on the degree of coefficient polynomials of 1-cochains
    :param source_degree_margin: extra degree E allowed for 0-cochain sources
    """
    max_order: int
    max_degree: int
    source_degree_margin: int = 2

    def __post_init__(self):
        for name in ('max_order', 'max_degree', 'source_degree_margin'):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise InvalidBoxError("{name} must be a natural number, got {v}."
                                      .format(name=name, v=value))

    @property
    def source_degree(self) -> int:
        return self.max_degree + self.source_degree_margin

    def enlarged(self, step: int = 2) -> 'TruncationBox':
        """The next box of the schedule: degree and margin grow together."""
        return replace(self, max_degree=self.max_degree + step,
                       source_degree_margin=self.source_degree_margin + step)

    def to_json(self) -> dict:
        return {'max_order': self.max_order, 'max_degree': self.max_degree,
                'source_degree_margin': self.source_degree_margin}


@dataclass(frozen=True)
class TruncationOutcome:
    """dim Z¹(box) - dim(B¹ ∩ box), with both terms kept for bookkeeping."""
    dim: int
    cocycle_dim: int
    coboundary_dim: int
    box: TruncationBox
    warnings: Tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {'dim': self.dim, 'cocycle_dim': self.cocycle_dim,
                'coboundary_dim': self.coboundary_dim, 'box': self.box.to_json(),
                'warnings': list(self.warnings)}


@dataclass(frozen=True)
class OracleResult:
    """
    Outcome of :func:`stabilized_h1`. ``dim`` is None when two consecutive steps never agreed,
    ``last_dim`` then holds the value of the final step.
    """
    dim: Optional[int]
    stabilized: bool
    steps: int
    warnings: Tuple[str, ...] = ()
    last_dim: Optional[int] = None

    def to_json(self) -> dict:
        return {'dim': self.dim, 'stabilized': self.stabilized, 'steps': self.steps,
                'warnings': list(self.warnings)}


def _monomials(params: ParamSpace, max_order: int, max_degree: int) -> List[Tuple[MultiIndex, int]]:
    return [(alpha, power) for alpha in up_to_level(params.n, max_order)
            for power in range(max_degree + 1)]


def _operator(params: ParamSpace, alpha: MultiIndex, power: int) -> PolyOperator:
    return PolyOperator.monomial(params, alpha, Poly.monomial(power))


class _CoordinateMatrix:
    """Columns of images collected sparsely, rows keyed by (position, α, power)."""

    def __init__(self):
        self.columns: List[Dict[Coordinate, Fraction]] = []
        self.row_keys: Dict[Coordinate, int] = {}

    def add_column(self, images: Iterable[PolyOperator]):
        column = {}
        for position, alpha, power, coefficient in operator_terms(images):
            key = (position, alpha, power)
            self.row_keys.setdefault(key, len(self.row_keys))
            column[key] = coefficient
        self.columns.append(column)

    def rank(self, rows=None) -> int:
        """Rank of the matrix, or of its rows accepted by the ``rows`` predicate."""
        keys = [key for key in self.row_keys if rows is None or rows(key)]
        if not keys or not self.columns:
            return 0
        # rank(M) = rank(Mᵀ); one elimination row per column keeps the grid short
        grid = [[column.get(key, Fraction(0)) for key in keys] for column in self.columns]
        return exactlin.rank(QMatrix.from_rows(grid, len(keys)))


def _differential0_matrix(params: ParamSpace, max_order: int, max_degree: int) -> _CoordinateMatrix:
    matrix = _CoordinateMatrix()
    for alpha, power in _monomials(params, max_order, max_degree):
        matrix.add_column(differential0(_operator(params, alpha, power)).images)
    return matrix


def _box_warnings(params: ParamSpace, box: TruncationBox) -> List[str]:
    warnings = []
    delta = params.delta
    if delta.denominator == 1 and delta >= 0 and box.max_order < delta:
        warnings.append("box order {m} is below the shift {k}, order-{k} classes are not seen"
                        .format(m=box.max_order, k=delta))
    return warnings


def truncated_h1(params: ParamSpace, box: TruncationBox) -> TruncationOutcome:
    """
    dim Z¹(box) - dim(B¹ ∩ box) by exact linear algebra over the monomial basis
    x^p F^(α) of 1-cochains and 0-cochains.

    B¹ ∩ box is the image of the boxed sources restricted to those whose coboundary stays inside
    the degree cap, so its dimension is rank(∂₀) - rank(rows of ∂₀ above the cap).
    """
    logger = get_logger()
    warnings = _box_warnings(params, box)
    for warning in warnings:
        logger.warning("{p}: {w}.".format(p=params, w=warning))

    cocycle_matrix = _CoordinateMatrix()
    zero = PolyOperator.zero(params)
    monomials = _monomials(params, box.max_order, box.max_degree)
    for position in range(3):
        for alpha, power in monomials:
            images = [zero, zero, zero]
            images[position] = _operator(params, alpha, power)
            cocycle_matrix.add_column(differential1(Cochain1(tuple(images))).images)
    cocycle_dim = 3 * len(monomials) - cocycle_matrix.rank()

    sources = _differential0_matrix(params, box.max_order, box.source_degree)
    coboundary_dim = sources.rank() - sources.rank(lambda key: key[2] > box.max_degree)

    dim = cocycle_dim - coboundary_dim
    logger.debug("{p}: box {b} gives Z1 {z}, B1 {c}, H1 {d}."
                 .format(p=params, b=box.to_json(), z=cocycle_dim, c=coboundary_dim, d=dim))
    return TruncationOutcome(dim, cocycle_dim, coboundary_dim, box, tuple(warnings))


def default_box(params: ParamSpace) -> TruncationBox:
    """Order k (2 when δ ∉ ℕ), degree order + 2, margin 2."""
    delta = params.delta
    order = int(delta) if delta.denominator == 1 and delta >= 0 else 2
    return TruncationBox(order, order + 2, 2)


def stabilized_h1(params: ParamSpace, initial: Optional[TruncationBox] = None,
                  max_steps: int = 5) -> OracleResult:
    """
    Runs :func:`truncated_h1` on boxes of growing degree and margin until two consecutive
    steps agree.

    :raise InvalidBoxError: when ``max_steps`` is below 2
    """
    if max_steps < 2:
        raise InvalidBoxError("At least two steps are needed to detect stabilization, got {s}."
                              .format(s=max_steps))
    logger = get_logger()
    box = initial if initial is not None else default_box(params)
    warnings: List[str] = []
    previous = None
    for step in range(1, max_steps + 1):
        outcome = truncated_h1(params, box)
        for warning in outcome.warnings:
            if warning not in warnings:
                warnings.append(warning)
        if previous is not None and outcome.dim == previous:
            return OracleResult(outcome.dim, True, step, tuple(warnings), outcome.dim)
        previous = outcome.dim
        box = box.enlarged()

    warnings.append("no two consecutive steps agreed within {s} steps".format(s=max_steps))
    logger.warning("{p}: oracle did not stabilize, last value {d}.".format(p=params, d=previous))
    return OracleResult(None, False, max_steps, tuple(warnings), previous)


def boundary_rank(params: ParamSpace, max_order: int, max_degree: int) -> int:
    """dim ∂C⁰ for the 0-cochains of order <= max_order and degree <= max_degree."""
    box = TruncationBox(max_order, max_degree, 0)
    return _differential0_matrix(params, box.max_order, box.max_degree).rank()


def source_count(params: ParamSpace, max_order: int, max_degree: int) -> int:
    """dim C⁰ of the same source box."""
    return len(_monomials(params, max_order, max_degree))


def invariant_operator_dim(params: ParamSpace, box: TruncationBox) -> int:
    """
    Dimension of the sl(2)-invariant operators of order <= max_order and coefficient degree
    <= max_degree, the kernel of the degree-0 differential on that box.
    """
    return source_count(params, box.max_order, box.max_degree) \
        - boundary_rank(params, box.max_order, box.max_degree)
