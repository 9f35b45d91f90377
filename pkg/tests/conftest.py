import itertools

from ceei.core import make_market


def demand_market(demands, m, market_class="leontief"):
    """Market whose buyers value exactly the given item sets, at 1 each."""
    rows = [[1 if j in d else 0 for j in range(m)] for d in demands]
    return make_market(rows, market_class)


def leontief_profile_corpus(buyer_counts=(1, 2, 3), item_counts=(1, 2, 3, 4)):
    """Every demand-set profile with unit values: the exhaustive small corpus."""
    for n in buyer_counts:
        for m in item_counts:
            subsets = [frozenset(c)
                       for size in range(1, m + 1)
                       for c in itertools.combinations(range(m), size)]
            for profile in itertools.product(subsets, repeat=n):
                yield demand_market(profile, m), profile


def example1_market():
    """3 buyers, 4 items; the worked utility example."""
    return make_market([
        [1, 0, 0, 0],
        [0, 2, 0, 3],
        ["1/2", "5/2", 5, 0],
    ], "leontief")


def example2_market():
    """6 buyers, 8 items; the worked construction example."""
    return demand_market([{0}, {1}, {1, 2}, {1, 2}, {3, 4, 5}, {5, 6, 7}], 8)


def example3_market(n):
    """n buyers demanding consecutive item pairs; equilibria range from
    welfare 1 to welfare n."""
    return demand_market([{2 * i, 2 * i + 1} for i in range(n)], 2 * n)


def example4_market():
    """2 buyers with identical two-item demands plus a filler item; every
    equilibrium has zero welfare."""
    return make_market([[1, 1, 0], [1, 1, 0]], "leontief")
