"""Independent reference computations used to freeze expected values.

Nothing here imports the closed forms from ``fpdm.pricing``.
"""
import itertools
import math

import numpy as np

from fpdm.mechanisms import MechanismConfig, run_fpdm
from fpdm.network import SELLER, build_tree


def price(x):
    return math.exp(-1) if x == 0 else (1 / (1 + x)) ** (1 / x)


def revenue_by_branch_patterns(sizes):
    """Sum over which branches hold at least one claimer."""
    k = sum(sizes)
    ps = [price(k - s) for s in sizes]
    total = 0.0
    for pattern in itertools.product([0, 1], repeat=len(sizes)):
        if not any(pattern):
            continue
        prob = 1.0
        for p, s, c in zip(ps, sizes, pattern):
            prob *= (1 - p**s) if c else p**s
        total += prob * ps[pattern.index(1)]
    return total


def revenue_by_buyer_patterns(tree, config=None):
    """Exact expected gross revenue: run the mechanism on every claim pattern.

    Each buyer claims independently with probability ``1 - price`` of her
    branch; a claimer gets valuation 1, a non-claimer 0.
    """
    from fpdm.network import branches

    config = config or MechanismConfig()
    decomp = branches(tree)
    k = tree.k
    price_of = {}
    for b in decomp:
        for m in b.members:
            price_of[m] = price(k - b.size)
    buyers = tree.buyers
    total = 0.0
    for pattern in itertools.product([0, 1], repeat=len(buyers)):
        prob = 1.0
        for b, c in zip(buyers, pattern):
            prob *= (1 - price_of[b]) if c else price_of[b]
        out = run_fpdm(tree, None, dict(zip(buyers, map(float, pattern))), config, seed=0)
        total += prob * out.gross_revenue
    return total


def grid_argmax_price(x, step):
    best_p, best_e = None, -1.0
    i = 1
    while i * step < 1:
        p = i * step
        e = (1 - p**x) * p
        if e > best_e:
            best_p, best_e = p, e
        i += 1
    return best_p


def labelled_rooted_trees(n_buyers):
    """Every recursive parent array on n_buyers + 1 nodes (parent id < child id)."""
    for parents in itertools.product(*[range(i) for i in range(1, n_buyers + 1)]):
        yield build_tree((p, c) for c, p in enumerate(parents, start=1))


def ahu(tree, node=SELLER):
    return "(" + "".join(sorted(ahu(tree, c) for c in tree.children[node])) + ")"


def distinct_shapes(n_buyers):
    return {ahu(t) for t in labelled_rooted_trees(n_buyers)}


def mc_baseline(x, p, n, seed):
    rng = np.random.default_rng(seed)
    v = rng.random((n, x))
    sold = (v > p).any(axis=1)
    return float(np.mean(np.where(sold, p, 0.0)))
