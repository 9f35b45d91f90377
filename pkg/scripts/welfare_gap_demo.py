#!/usr/bin/env python3
"""Show the welfare gap between the basic equilibrium construction and the
welfare-aware one on the pair-demand family.

Buyer i demands items {2i-1, 2i} (1-based), so every buyer can be served
simultaneously: the welfare-optimal equilibrium serves all n buyers, while
the basic construction hands out singletons and serves just one.  The
welfare-aware construction is guaranteed at least a 1/n share of the
optimum; here it lands at 2 for every n.

Usage: python scripts/welfare_gap_demo.py [max_n]
"""

import sys

from ceei import leontief
from ceei.core import make_allocation, make_market, social_welfare


def pair_market(n):
    rows = [[1 if j in (2 * i, 2 * i + 1) else 0 for j in range(2 * n)] for i in range(n)]
    return make_market(rows, "leontief")


def main(max_n=6):
    print(f"{'n':>3} {'baseline SW':>12} {'approx SW':>10} {'optimal SW':>11}")
    for n in range(2, max_n + 1):
        market = pair_market(n)
        base_x, _ = leontief.compute_equilibrium(market)
        apx_x, _ = leontief.compute_equilibrium_apx_welfare(market)
        # serving everyone is supportable, and no allocation beats welfare n,
        # so the equilibrium optimum is exactly n
        everyone = make_allocation([d.items for d in leontief.demand_sets(market)])
        assert leontief.prices_for_allocation(market, everyone) is not None
        optimal = social_welfare(market, everyone)
        base = social_welfare(market, base_x)
        apx = social_welfare(market, apx_x)
        assert apx * n >= optimal
        print(f"{n:>3} {str(base):>12} {str(apx):>10} {str(optimal):>11}")


if __name__ == "__main__":
    main(*(int(a) for a in sys.argv[1:2]))
