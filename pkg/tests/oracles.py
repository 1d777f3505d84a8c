"""Independent brute-force oracles shared by the test modules.

Everything here works by exhaustive element enumeration on finite rings,
deliberately avoiding the lattice machinery it is used to check.
"""

from __future__ import annotations

import random
from math import gcd

from fdzring.intlinalg import IntMatrix, row_times_matrix
from fdzring.rings import FdzRing


def subgroup_closure(ring: FdzRing, seed) -> frozenset:
    """The additive subgroup generated by the seed elements, as a set."""
    current = {ring.zero()}
    frontier = [ring.reduce(s) for s in seed]
    while frontier:
        nxt = frontier.pop()
        if nxt in current:
            continue
        extra = {ring.add(nxt, x) for x in current} | {nxt}
        fresh = extra - current
        current |= fresh
        frontier.extend(fresh)
        neg = ring.neg(nxt)
        if neg not in current:
            frontier.append(neg)
    return frozenset(current)


def brute_force_chain(ring: FdzRing) -> dict[str, frozenset]:
    """Characteristic ideals of a finite ring by pure set computation."""
    elements = list(ring.elements())
    zero = ring.zero()
    order = ring.order
    assert order is not None

    ann = frozenset(
        x
        for x in elements
        if all(ring.mul(x, y) == zero and ring.mul(y, x) == zero for y in elements)
    )
    products = {ring.mul(x, y) for x in elements for y in elements}
    sq = subgroup_closure(ring, products)

    def isolator(subset: frozenset) -> frozenset:
        return frozenset(
            x
            for x in elements
            if any(ring.scale(n, x) in subset for n in range(1, order + 1))
        )

    delta = isolator(sq)
    k = frozenset(ring.add(a, d) for a in ann for d in delta)
    ann_plus_sq = frozenset(ring.add(a, s) for a in ann for s in sq)
    l = isolator(ann_plus_sq)
    o = ann & delta
    return {"ann": ann, "sq": sq, "delta": delta, "k": k, "l": l, "o": o}


def subgroup_elements(ring: FdzRing, sub) -> frozenset:
    """The element set of a lattice-presented subgroup of a finite ring."""
    group, basis = sub.as_group()
    out = set()
    for coords in group.elements():
        out.add(ring.reduce(row_times_matrix(coords, basis)))
    return frozenset(out)


FINITE_ORDER_SHAPES = [
    (2,),
    (3,),
    (4,),
    (5,),
    (7,),
    (8,),
    (9,),
    (16,),
    (2, 2),
    (2, 4),
    (2, 6),
    (2, 8),
    (3, 3),
    (4, 4),
    (2, 2, 2),
    (2, 2, 4),
    (2, 2, 3),
    (6,),
    (12,),
    (2, 3),
]


def random_finite_ring(rng: random.Random, max_order: int = 16) -> FdzRing:
    """A random valid structure tensor over a random finite diagonal group."""
    shapes = [s for s in FINITE_ORDER_SHAPES if _prod(s) <= max_order]
    orders = rng.choice(shapes)
    r = len(orders)
    tensor = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            for k in range(r):
                dk = orders[k]
                step = _lcm(dk // gcd(dk, orders[i]), dk // gcd(dk, orders[j]))
                choices = dk // step
                tensor[i][j][k] = rng.randrange(choices) * step
    return FdzRing(orders, tensor)


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


MIXED_ORDER_SHAPES = [
    (0,),
    (0, 2),
    (0, 0),
    (0, 4),
    (0, 0, 2),
    (0, 2, 2),
    (0, 0, 3),
    (2, 0),
    (0, 6),
]


def random_mixed_ring(rng: random.Random, max_entry: int = 2) -> FdzRing:
    """A random valid ring over a mixed free/torsion diagonal group."""
    orders = rng.choice(MIXED_ORDER_SHAPES)
    r = len(orders)
    tensor = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            for k in range(r):
                dk = orders[k]
                if dk == 0:
                    # free target coordinates only take products of free
                    # generators
                    if orders[i] == 0 and orders[j] == 0:
                        tensor[i][j][k] = rng.randint(-max_entry, max_entry)
                else:
                    step = _lcm(
                        dk // gcd(dk, orders[i]) if orders[i] else 1,
                        dk // gcd(dk, orders[j]) if orders[j] else 1,
                    )
                    choices = dk // step
                    tensor[i][j][k] = rng.randrange(choices) * step
    return FdzRing(orders, tensor)


def random_lattice_preserving_unimodular(
    rng: random.Random, orders, steps: int = 6
) -> tuple[IntMatrix, IntMatrix]:
    """A unimodular base change preserving the diagonal relation lattice.

    Built from transvections e_i -> e_i + q·e_j with q chosen so both the
    map and its inverse respect the orders.
    """
    r = len(orders)
    t = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    tinv = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    for _ in range(steps):
        i, j = rng.randrange(r), rng.randrange(r)
        if i == j:
            continue
        di, dj = orders[i], orders[j]
        if dj == 0:
            step = 1 if di == 0 else 0  # cannot send torsion into a free line
        elif di == 0:
            step = 1
        else:
            step = dj // gcd(di, dj)
        if step == 0:
            continue
        q = step * rng.randint(-2, 2)
        if q == 0:
            continue
        # t := t * E and tinv := E^-1 * tinv, with E = I + q e_{ij}
        for k in range(r):
            t[k][j] += q * t[k][i]
        for k in range(r):
            tinv[i][k] -= q * tinv[j][k]
    return IntMatrix(t), IntMatrix(tinv)
