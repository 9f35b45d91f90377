"""Domain types, exact rational arithmetic, and the shared equilibrium checks.

Every quantity in this package is an exact rational; there is no floating
point and no tolerance parameter anywhere.  Budgets are exactly 1 per buyer,
so the equilibrium conditions are exact equalities and are decided by exact
comparison.

All types are immutable after construction and all operations are pure
functions, so values can be shared freely across threads.

Buyer and item indices are 0-based throughout the library; the JSON layer
(`ceei.io`) converts to the 1-based convention used externally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

try:  # gmpy2's mpq is a drop-in exact rational, roughly 10x faster than Fraction
    from gmpy2 import mpq as _rational_backend
except ImportError:  # pragma: no cover
    _rational_backend = Fraction

#: Exact rational scalar: reduced numerator/denominator, denominator > 0,
#: arbitrary precision.  Either gmpy2.mpq or fractions.Fraction; both satisfy
#: the contract and interoperate.
RationalLike = Union[int, str, Fraction]

LEONTIEF = "leontief"
ADDITIVE = "additive"


def rational(value: RationalLike, den: int = 1):
    """Coerce an int, "p/q" string, or rational to the exact rational type."""
    if den != 1:
        return _rational_backend(value) / _rational_backend(den)
    return _rational_backend(value)


ZERO = rational(0)
ONE = rational(1)


class InvalidMarketError(ValueError):
    """A market violates a structural invariant."""


class InfeasibleAllocationError(ValueError):
    """An allocation reuses an item or references one out of range."""


class SearchCapExceeded(RuntimeError):
    """An exhaustive search would exceed the configured resource cap."""


@dataclass(frozen=True)
class SearchCaps:
    """Hard limits for the exhaustive searches.

    Exceeding a cap raises :class:`SearchCapExceeded`; searches are never
    silently truncated.
    """

    max_items: int = 12           # item count for assignment searches
    max_states: int = 10_000_000  # (n+1)**m assignment-space bound
    max_enum_items: int = 22      # item count for per-buyer bundle enumeration


DEFAULT_CAPS = SearchCaps()


@dataclass(frozen=True)
class Market:
    """A market of `n` buyers and `m` indivisible items.

    `values[i][j]` is buyer i's value for item j (exact rational, >= 0).
    `market_class` selects the utility model: LEONTIEF (perfect complements)
    or ADDITIVE (perfect substitutes).
    """

    n: int
    m: int
    values: tuple
    market_class: str


@dataclass(frozen=True)
class Allocation:
    """Per-buyer item bundles.  Feasibility (disjointness, index range) is a
    checked property, not a construction invariant, so that verifiers can
    report infeasible inputs instead of refusing to represent them."""

    bundles: tuple


@dataclass(frozen=True)
class PriceVector:
    """Nonnegative exact price per item."""

    prices: tuple

    def __post_init__(self):
        if any(p < 0 for p in self.prices):
            raise ValueError("prices must be nonnegative")


# Violation kinds, in the order the shared verifier checks them.
INFEASIBLE_ALLOCATION = "infeasible-allocation"
ITEM_UNSOLD_POSITIVE_PRICE = "item-unsold-positive-price"
BUDGET_NOT_EXHAUSTED = "budget-not-exhausted"
SUBOPTIMAL_BUNDLE = "suboptimal-bundle"


@dataclass(frozen=True)
class Violation:
    kind: str
    buyer: Optional[int] = None
    item: Optional[int] = None
    witness: Optional[frozenset] = None


@dataclass(frozen=True)
class EquilibriumReport:
    """Verdict of an equilibrium check: pass, or exactly one violation.

    Verifiers report the first violation found in a fixed order —
    feasibility, clearing, budgets, then per-buyer optimality by buyer
    index — so reports are reproducible.
    """

    equilibrium: bool
    violation: Optional[Violation] = None

    @staticmethod
    def ok() -> "EquilibriumReport":
        return EquilibriumReport(True, None)

    @staticmethod
    def fail(violation: Violation) -> "EquilibriumReport":
        return EquilibriumReport(False, violation)


def make_market(values: Sequence[Sequence[RationalLike]], market_class: str) -> Market:
    """Build and validate a market from a rectangular value matrix."""
    rows = tuple(tuple(rational(v) for v in row) for row in values)
    n = len(rows)
    m = len(rows[0]) if rows else 0
    return validate_market(Market(n=n, m=m, values=rows, market_class=market_class))


def make_allocation(bundles: Iterable[Iterable[int]]) -> Allocation:
    return Allocation(tuple(frozenset(b) for b in bundles))


def make_prices(prices: Iterable[RationalLike]) -> PriceVector:
    return PriceVector(tuple(rational(p) for p in prices))


def validate_market(market: Market) -> Market:
    """Return the market iff all structural invariants hold.

    Raises InvalidMarketError for: zero buyers or items, ragged or
    inconsistent value matrix, negative values, unknown class, or a
    perfect-complements buyer with an all-zero row (such a buyer demands
    nothing and its utility is undefined, so it is rejected outright).
    """
    if market.market_class not in (LEONTIEF, ADDITIVE):
        raise InvalidMarketError(f"unknown market class {market.market_class!r}")
    if market.n < 1:
        raise InvalidMarketError("market needs at least one buyer")
    if market.m < 1:
        raise InvalidMarketError("market needs at least one item")
    if len(market.values) != market.n:
        raise InvalidMarketError("value matrix has wrong number of rows")
    for i, row in enumerate(market.values):
        if len(row) != market.m:
            raise InvalidMarketError(f"value row {i} has wrong length")
        for j, v in enumerate(row):
            if v < 0:
                raise InvalidMarketError(f"negative value at buyer {i}, item {j}")
        if market.market_class == LEONTIEF and all(v == 0 for v in row):
            raise InvalidMarketError(f"buyer {i} has an empty demand set")
    return market


def demand_items(market: Market, buyer: int) -> frozenset:
    """Items the buyer values strictly positively."""
    return frozenset(j for j, v in enumerate(market.values[buyer]) if v > 0)


def bundle_utility(market: Market, buyer: int, bundle: Iterable[int]):
    """Utility of `buyer` for `bundle` under the market's class.

    Perfect complements: min over demanded items j of 1/values[buyer][j] if
    the bundle contains every demanded item, else 0.  Perfect substitutes:
    sum of values over the bundle.
    """
    row = market.values[buyer]
    if market.market_class == ADDITIVE:
        total = ZERO
        for j in bundle:
            total += row[j]
        return total
    bundle = frozenset(bundle)
    demanded = [j for j, v in enumerate(row) if v > 0]
    if not all(j in bundle for j in demanded):
        return ZERO
    return min(ONE / row[j] for j in demanded)


def check_feasible(market: Market, allocation: Allocation) -> Optional[Violation]:
    """None iff bundles are pairwise disjoint, in range, and one per buyer."""
    if len(allocation.bundles) != market.n:
        return Violation(INFEASIBLE_ALLOCATION)
    seen = set()
    for bundle in allocation.bundles:
        for j in bundle:
            if not 0 <= j < market.m or j in seen:
                return Violation(INFEASIBLE_ALLOCATION)
            seen.add(j)
    return None


def check_clearing(market: Market, allocation: Allocation, prices: PriceVector) -> Optional[Violation]:
    """None iff every item is allocated or has price zero."""
    sold = set()
    for bundle in allocation.bundles:
        sold.update(bundle)
    for j in range(market.m):
        if j not in sold and prices.prices[j] != 0:
            return Violation(ITEM_UNSOLD_POSITIVE_PRICE, item=j)
    return None


def check_budgets(market: Market, allocation: Allocation, prices: PriceVector) -> Optional[Violation]:
    """None iff every buyer's spend is exactly 1."""
    for i, bundle in enumerate(allocation.bundles):
        spend = ZERO
        for j in bundle:
            spend += prices.prices[j]
        if spend != 1:
            return Violation(BUDGET_NOT_EXHAUSTED, buyer=i)
    return None


def social_welfare(market: Market, allocation: Allocation):
    """Sum of the buyers' utilities under the market's utility class."""
    if check_feasible(market, allocation) is not None:
        raise InfeasibleAllocationError("allocation is not feasible")
    total = ZERO
    for i, bundle in enumerate(allocation.bundles):
        total += bundle_utility(market, i, bundle)
    return total
