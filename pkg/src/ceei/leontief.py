"""Perfect-complements (Leontief) market algorithms.

A buyer's utility is positive only when its whole demand set (the items it
values strictly positively) is received, so equilibrium verification reduces
to exact budget, clearing and affordability checks, and both equilibrium
computation and price recovery run in polynomial time.  The given-prices
allocation search and the welfare-optimal search are exact exponential
enumerations guarded by hard caps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from . import lp
from .core import (
    DEFAULT_CAPS,
    LEONTIEF,
    ONE,
    SUBOPTIMAL_BUNDLE,
    ZERO,
    Allocation,
    EquilibriumReport,
    Market,
    PriceVector,
    SearchCapExceeded,
    SearchCaps,
    Violation,
    check_budgets,
    check_clearing,
    check_feasible,
    demand_items,
)


@dataclass(frozen=True)
class DemandSet:
    buyer: int
    items: frozenset


def _require_leontief(market: Market) -> None:
    if market.market_class != LEONTIEF:
        raise ValueError("operation requires a perfect-complements market")


def demand_sets(market: Market) -> list:
    """One DemandSet per buyer: the items valued strictly positively."""
    _require_leontief(market)
    return [DemandSet(i, demand_items(market, i)) for i in range(market.n)]


def leontief_utility(market: Market, buyer: int, bundle: Iterable[int]):
    """min over demanded items j of 1/values[buyer][j] when the bundle
    contains the buyer's whole demand set, else 0."""
    row = market.values[buyer]
    bundle = frozenset(bundle)
    demanded = [j for j, v in enumerate(row) if v > 0]
    if not all(j in bundle for j in demanded):
        return ZERO
    return min(ONE / row[j] for j in demanded)


def verify_equilibrium(market: Market, allocation: Allocation, prices: PriceVector) -> EquilibriumReport:
    """Decide whether (allocation, prices) is a competitive equilibrium.

    Checks, in order: feasibility, market clearing, exact budget exhaustion,
    and per-buyer optimality (a buyer missing part of its demand set must
    find the demand set unaffordable: its total price strictly above 1).
    Touches each (buyer, item) pair a constant number of times.
    """
    _require_leontief(market)
    for found in (
        check_feasible(market, allocation),
        check_clearing(market, allocation, prices),
        check_budgets(market, allocation, prices),
    ):
        if found is not None:
            return EquilibriumReport.fail(found)
    for i in range(market.n):
        demand = demand_items(market, i)
        if demand <= allocation.bundles[i]:
            continue  # full demand received: utility is maximal regardless of prices
        cost = ZERO
        for j in demand:
            cost += prices.prices[j]
        if cost <= 1:
            return EquilibriumReport.fail(Violation(SUBOPTIMAL_BUNDLE, buyer=i, witness=demand))
    return EquilibriumReport.ok()


def price_support_lp(market: Market, allocation: Allocation) -> lp.LPProblem:
    """The price-recovery system for a fixed feasible allocation.

    Variables 0..m-1 are item prices, variable m is the strictness slack.
    Unsold items are pinned to price zero, every bundle must cost exactly 1,
    and every buyer missing part of its demand needs the demand set priced
    at least 1 + slack.  The allocation is price-supportable exactly when
    the maximal slack is positive.
    """
    _require_leontief(market)
    m = market.m
    eps = m
    cons = []
    sold = set()
    for bundle in allocation.bundles:
        sold.update(bundle)
    for j in range(m):
        if j not in sold:
            cons.append(lp.constraint({j: 1}, lp.EQ, 0))
    for i, bundle in enumerate(allocation.bundles):
        if not bundle:
            raise ValueError(f"buyer {i} has an empty bundle; no prices can exhaust its budget")
        cons.append(lp.constraint({j: 1 for j in bundle}, lp.EQ, 1))
        demand = demand_items(market, i)
        if not demand <= bundle:
            coeffs = {j: -1 for j in demand}
            coeffs[eps] = 1
            cons.append(lp.constraint(coeffs, lp.LE, -1))
    cons.append(lp.constraint({eps: 1}, lp.LE, 1))
    return lp.lp_problem(m + 1, cons, {eps: 1})


def prices_for_allocation(market: Market, allocation: Allocation) -> Optional[PriceVector]:
    """Prices making the given allocation an equilibrium, or None."""
    _require_leontief(market)
    if check_feasible(market, allocation) is not None:
        return None
    if any(not b for b in allocation.bundles):
        return None
    result = lp.solve_lp(price_support_lp(market, allocation))
    if result.status != lp.OPTIMAL or result.value <= 0:
        return None
    return PriceVector(result.point[: market.m])


def _check_assignment_cap(market: Market, caps: SearchCaps) -> None:
    if market.m > caps.max_items or (market.n + 1) ** market.m > caps.max_states:
        raise SearchCapExceeded(
            f"assignment search over {market.n} buyers and {market.m} items exceeds the cap"
        )


def allocation_for_prices(
    market: Market, prices: PriceVector, caps: SearchCaps = DEFAULT_CAPS
) -> Optional[Allocation]:
    """First allocation (in the deterministic assignment order) that forms an
    equilibrium with the given prices, or None.

    Assignments are enumerated lexicographically: items in index order, each
    tried with buyers in index order and unsold last.  Leaving an item unsold
    is considered only at price zero, and branches where a buyer's spend
    already exceeds 1 are cut; neither prune can discard an equilibrium.
    """
    _require_leontief(market)
    _check_assignment_cap(market, caps)
    n, m = market.n, market.m
    p = prices.prices
    bundles = [[] for _ in range(n)]
    spend = [ZERO] * n

    def assign(j: int) -> Optional[Allocation]:
        if j == m:
            candidate = Allocation(tuple(frozenset(b) for b in bundles))
            if verify_equilibrium(market, candidate, prices).equilibrium:
                return candidate
            return None
        for i in range(n):
            if spend[i] + p[j] <= 1:
                bundles[i].append(j)
                spend[i] += p[j]
                found = assign(j + 1)
                if found is not None:
                    return found
                bundles[i].pop()
                spend[i] -= p[j]
        if p[j] == 0:
            return assign(j + 1)
        return None

    return assign(0)


def compute_equilibrium(market: Market) -> Optional[Tuple[Allocation, PriceVector]]:
    """Constructive equilibrium, or None exactly when none exists.

    No equilibrium exists iff there are fewer items than buyers or two
    buyers share an identical singleton demand set.  Otherwise buyers are
    processed in increasing order of demand-set size (ties by index); each
    receives the lowest-index unallocated item of its demand set, or the
    lowest-index unallocated item outright.  The buyer processed last also
    absorbs all leftover items.  Every bundle is priced uniformly so it
    costs exactly 1.
    """
    _require_leontief(market)
    demands = [demand_items(market, i) for i in range(market.n)]
    plan = _assignment_plan(market, demands)
    if plan is None:
        return None
    bundles, _ = plan
    prices = [ZERO] * market.m
    for bundle in bundles:
        share = ONE / len(bundle)
        for j in bundle:
            prices[j] = share
    return Allocation(tuple(bundles)), PriceVector(tuple(prices))


def _assignment_plan(market: Market, demands) -> Optional[Tuple[list, int]]:
    """Shared allocation loop: singleton picks in size order, leftovers to the
    last buyer.  Returns (bundles, last_buyer) or None if no equilibrium."""
    n, m = market.n, market.m
    if m < n:
        return None
    seen_singletons = set()
    for d in demands:
        if len(d) == 1:
            if d in seen_singletons:
                return None
            seen_singletons.add(d)
    order = sorted(range(n), key=lambda i: (len(demands[i]), i))
    allocated = set()
    bundles = [frozenset()] * n
    for i in order:
        free_demand = demands[i] - allocated
        pick = min(free_demand) if free_demand else min(set(range(m)) - allocated)
        bundles[i] = frozenset([pick])
        allocated.add(pick)
    last = order[-1]
    bundles[last] |= frozenset(range(m)) - allocated
    return bundles, last


def _strictness_eps(market: Market, demands):
    """A positive rational strictly below 1/|D| for every demand set D."""
    d_max = max(len(d) for d in demands)
    return ONE / ((market.m + 1) * (d_max + 1))


def compute_equilibrium_prealloc(
    market: Market, excluded_buyer: int, preallocated_items: Iterable[int]
) -> Optional[Tuple[Allocation, PriceVector]]:
    """Run the constructive loop with one buyer excluded and a set of items
    already taken; used to complete an allocation that hands the excluded
    buyer its full demand set.

    The excluded buyer's bundle is left empty and the preallocated items are
    priced zero (the caller owns both).  Singleton bundles are priced 1; the
    last processed buyer's bundle splits its budget with most weight on the
    items it actually wants: (1 - eps) spread over the wanted items and eps
    over the unwanted ones, degenerating to a uniform split when either part
    is empty.  eps is chosen below 1/|D| for every demand set D so that an
    unwanted item's price can never make a missing demanded item affordable.
    """
    _require_leontief(market)
    prealloc = frozenset(preallocated_items)
    if not prealloc <= frozenset(range(market.m)):
        raise ValueError("preallocated items out of range")
    if not 0 <= excluded_buyer < market.n:
        raise ValueError("excluded buyer out of range")
    if market.m - len(prealloc) < market.n - 1:
        raise ValueError("not enough free items for the remaining buyers")
    demands = [demand_items(market, i) for i in range(market.n)]
    remaining = [i for i in range(market.n) if i != excluded_buyer]
    order = sorted(remaining, key=lambda i: (len(demands[i]), i))
    allocated = set(prealloc)
    bundles = [frozenset()] * market.n
    for i in order:
        free_demand = demands[i] - allocated
        pick = min(free_demand) if free_demand else min(set(range(market.m)) - allocated)
        bundles[i] = frozenset([pick])
        allocated.add(pick)
    prices = [ZERO] * market.m
    if order:
        last = order[-1]
        bundles[last] |= frozenset(range(market.m)) - allocated
        for i in order[:-1]:
            for j in bundles[i]:
                prices[j] = ONE
        wanted = bundles[last] & demands[last]
        unwanted = bundles[last] - demands[last]
        if wanted and unwanted:
            eps = _strictness_eps(market, demands)
            for j in wanted:
                prices[j] = (ONE - eps) / len(wanted)
            for j in unwanted:
                prices[j] = eps / len(unwanted)
        else:
            share = ONE / len(bundles[last])
            for j in bundles[last]:
                prices[j] = share
    return Allocation(tuple(bundles)), PriceVector(tuple(prices))


def compute_equilibrium_apx_welfare(market: Market) -> Optional[Tuple[Allocation, PriceVector]]:
    """Equilibrium whose social welfare is at least 1/n of the best welfare
    any equilibrium can achieve; None exactly when no equilibrium exists.

    A buyer can receive its full demand set in some equilibrium only if no
    other buyer's demand is contained in it and enough items remain for
    everyone else.  Among such eligible buyers, the one with the highest
    utility for its own demand (ties to the lowest index) is served fully at
    uniform prices, and the rest of the market is completed around it.  With
    no eligible buyer, every equilibrium has zero welfare and the basic
    construction is used as-is.
    """
    _require_leontief(market)
    demands = [demand_items(market, i) for i in range(market.n)]
    if _assignment_plan(market, demands) is None:
        return None
    n, m = market.n, market.m
    eligible = []
    for k in range(n):
        if m - len(demands[k]) < n - 1:
            continue
        if any(i != k and demands[i] <= demands[k] for i in range(n)):
            continue
        eligible.append(k)
    if not eligible:
        return compute_equilibrium(market)
    best, best_value = None, None
    for k in eligible:
        value = leontief_utility(market, k, demands[k])
        if best is None or value > best_value:
            best, best_value = k, value
    sub = compute_equilibrium_prealloc(market, best, demands[best])
    sub_alloc, sub_prices = sub
    bundles = list(sub_alloc.bundles)
    bundles[best] = demands[best]
    prices = list(sub_prices.prices)
    share = ONE / len(demands[best])
    for j in demands[best]:
        prices[j] = share
    return Allocation(tuple(bundles)), PriceVector(tuple(prices))


def optimal_welfare_equilibrium(
    market: Market, caps: SearchCaps = DEFAULT_CAPS
) -> Optional[Tuple[Allocation, PriceVector, object]]:
    """Exact welfare-maximal equilibrium by exhaustive search, or None.

    Welfare levels are scanned from the highest achievable downward; within
    a level, assignments are tried in the deterministic enumeration order
    and the first price-supportable one is returned together with its
    welfare.  So the result is the maximal-welfare equilibrium whose
    allocation comes first in enumeration order.
    """
    _require_leontief(market)
    _check_assignment_cap(market, caps)
    n, m = market.n, market.m
    demands = [demand_items(market, i) for i in range(n)]
    masks = [sum(1 << j for j in d) for d in demands]
    gains = [leontief_utility(market, i, demands[i]) for i in range(n)]

    levels = {ZERO}
    for chosen in itertools.product((False, True), repeat=n):
        picked = [i for i in range(n) if chosen[i]]
        union, disjoint = 0, True
        for i in picked:
            if union & masks[i]:
                disjoint = False
                break
            union |= masks[i]
        if disjoint:
            total = ZERO
            for i in picked:
                total += gains[i]
            levels.add(total)

    owners_range = range(n + 1)  # digit n = unsold
    for level in sorted(levels, reverse=True):
        for owners in itertools.product(owners_range, repeat=m):
            bundle_masks = [0] * n
            for j, o in enumerate(owners):
                if o < n:
                    bundle_masks[o] |= 1 << j
            if any(mask == 0 for mask in bundle_masks):
                continue  # an empty bundle can never exhaust a budget
            welfare = ZERO
            for i in range(n):
                if masks[i] & ~bundle_masks[i] == 0:
                    welfare += gains[i]
            if welfare != level:
                continue
            candidate = Allocation(
                tuple(frozenset(j for j in range(m) if owners[j] == i) for i in range(n))
            )
            prices = prices_for_allocation(market, candidate)
            if prices is not None:
                return candidate, prices, welfare
    return None
