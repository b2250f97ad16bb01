import random
from fractions import Fraction

import pytest

from stablered.tree import (Edge, NEW, PRIMITIVE, ReductionTree, WILD)


def make_star(specs, genus=0):
    """specs: list of (kind, m, h) leaf edge data."""
    leaves = {}
    edges = []
    for i, (kind, m, h) in enumerate(specs, 1):
        name = f"t{i}"
        leaves[name] = kind
        edges.append(Edge("v0", name, m, h))
    return ReductionTree(root="v0", genus={"v0": genus}, leaves=leaves,
                         edges=edges)


def _random_leaf(rng, max_denom):
    kind = rng.choice([PRIMITIVE, PRIMITIVE, NEW, WILD])
    if kind == WILD:
        return kind, 1, 0
    m = rng.randrange(2, max_denom + 1)
    if kind == PRIMITIVE:
        h = rng.randrange(1, m)
    else:
        h = rng.randrange(m + 1, 2 * m)
    g = __import__("math").gcd(h, m)
    return kind, m // g, h // g


def random_consistent_tree(rng: random.Random, max_interior=3, max_denom=8,
                           max_tries=60):
    """A random tree satisfying every local vertex identity exactly.

    Leaf values are drawn freely, interior edges are solved bottom-up,
    and one balancing leaf at the root absorbs the root equation; draws
    whose balancer lands outside the legal leaf ranges are rejected.
    """
    for _ in range(max_tries):
        n_int = rng.randrange(1, max_interior + 1)
        interior = [f"v{i}" for i in range(n_int)]
        parent = {interior[i]: interior[rng.randrange(i)]
                  for i in range(1, n_int)}
        genus = {v: rng.choice([0, 0, 0, 1]) for v in interior}

        leaves = {}
        edges = []
        leaf_sigma_at = {v: [] for v in interior}
        counter = [0]

        def add_leaf(v, kind, m, h):
            counter[0] += 1
            name = f"t{counter[0]}"
            leaves[name] = kind
            edges.append(Edge(v, name, m, h))
            leaf_sigma_at[v].append(Fraction(h, m))

        for v in interior:
            n_leaves = rng.randrange(1, 4) if v != "v0" else rng.randrange(0, 3)
            for _ in range(n_leaves):
                add_leaf(v, *_random_leaf(rng, max_denom))

        children = {v: [] for v in interior}
        for v, par in parent.items():
            children[par].append(v)

        up_sigma = {}
        ok = True

        def solve(v):
            nonlocal ok
            for c in children[v]:
                solve(c)
            if v == "v0":
                return
            deg = len(leaf_sigma_at[v]) + len(children[v]) + 1
            total = sum(leaf_sigma_at[v], Fraction(0)) + \
                sum((-up_sigma[c] for c in children[v]), Fraction(0))
            up_sigma[v] = Fraction(2 * genus[v] - 2 + deg) - total
            if up_sigma[v] == 0:
                ok = False       # a zero interior edge breaks nothing
                                 # locally but keep values nondegenerate

        solve("v0")
        if not ok:
            continue
        for v, par in parent.items():
            s = up_sigma[v]
            edges.append(Edge(v, par, s.denominator, s.numerator))

        deg_root = len(leaf_sigma_at["v0"]) + len(children["v0"]) + 1
        total_root = sum(leaf_sigma_at["v0"], Fraction(0)) + \
            sum((-up_sigma[c] for c in children["v0"]), Fraction(0))
        balancer = Fraction(2 * genus["v0"] - 2 + deg_root) - total_root
        if balancer == 0:
            kind = WILD
        elif 0 < balancer < 1:
            kind = PRIMITIVE
        elif 1 < balancer < 2:
            kind = NEW
        else:
            continue
        add_leaf("v0", kind, balancer.denominator, balancer.numerator)
        return ReductionTree(root="v0", genus=genus, leaves=leaves,
                             edges=edges)
    raise RuntimeError("random tree generation kept failing")


@pytest.fixture
def rng():
    return random.Random(90021)
