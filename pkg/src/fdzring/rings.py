"""Rings of finite rank over the integers, presented by structure constants.

A ring here is an abelian group with a diagonal presentation (a vector of
generator orders, 0 meaning infinite) plus an integer tensor c with
e_i·e_j = sum_k c[i][j][k]·e_k.  Multiplication is bilinear by construction;
associativity, commutativity and unity are never assumed.  On top of that
sit the characteristic two-sided ideals

    ann   : everything that multiplies to zero from both sides
    sq    : the additive span of all products ("A squared")
    delta : the saturation of sq
    k     : ann + delta
    l     : the saturation of ann + sq
    o     : ann ∩ delta

and the derived quotients m = A/l (torsion-free) and n = l/k (finite),
together with the tame/regular predicates, additions and foundations,
quotient and product constructions, and the torsion/free normal
presentation used when coding a ring into integer tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod
from typing import Callable, Iterator, Sequence

from .groups import FgAbelianGroup, GroupError, Subgroup, quotient_of_subgroups, split_complement
from .intlinalg import (
    IntMatrix,
    Vec,
    row_times_matrix,
    smith,
    solve_congruences,
)

ELEMENT_LIMIT = 4096


class RingValidationError(ValueError):
    """A structure tensor violates the well-definedness congruences."""

    def __init__(self, i: int, j: int, k: int, message: str | None = None):
        self.violation = (i, j, k)
        super().__init__(
            message
            or f"product congruence violated at generators ({i + 1}, {j + 1}), "
            f"coordinate {k + 1}"
        )


Tensor = tuple[tuple[Vec, ...], ...]


def _freeze_tensor(tensor: Sequence[Sequence[Sequence[int]]], rank: int) -> Tensor:
    if len(tensor) != rank or any(len(row) != rank for row in tensor):
        raise RingValidationError(0, 0, 0, "tensor shape must be rank x rank x rank")
    out = []
    for row in tensor:
        vecs = []
        for v in row:
            if len(v) != rank:
                raise RingValidationError(0, 0, 0, "tensor shape must be rank x rank x rank")
            vecs.append(tuple(int(x) for x in v))
        out.append(tuple(vecs))
    return tuple(out)


class FdzRing:
    """A finitely generated ring presented by orders and structure constants."""

    __slots__ = ("orders", "tensor", "additive", "_hash")

    def __init__(self, orders: Sequence[int], tensor: Sequence[Sequence[Sequence[int]]]):
        self.orders = tuple(int(d) for d in orders)
        if any(d < 0 for d in self.orders):
            raise RingValidationError(0, 0, 0, "orders must be nonnegative")
        raw = _freeze_tensor(tensor, self.rank)
        self.additive = FgAbelianGroup.from_orders(self.orders)
        # well-definedness: d_i·c[i][j] and d_j·c[i][j] must vanish coordinatewise
        for i in range(self.rank):
            for j in range(self.rank):
                for k in range(self.rank):
                    c = raw[i][j][k]
                    for d_side in (self.orders[i], self.orders[j]):
                        v = d_side * c
                        dk = self.orders[k]
                        if (dk == 0 and v != 0) or (dk != 0 and v % dk):
                            raise RingValidationError(i, j, k)
        self.tensor = tuple(
            tuple(self.reduce(v) for v in row) for row in raw
        )
        self._hash = hash((self.orders, self.tensor))

    @property
    def rank(self) -> int:
        return len(self.orders)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FdzRing)
            and self.orders == other.orders
            and self.tensor == other.tensor
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FdzRing(orders={list(self.orders)})"

    # -- element arithmetic ------------------------------------------------

    def reduce(self, vec: Sequence[int]) -> Vec:
        if len(vec) != self.rank:
            raise GroupError("coordinate vector has wrong length")
        return tuple(
            int(x) % d if d else int(x) for x, d in zip(vec, self.orders)
        )

    def zero(self) -> Vec:
        return tuple([0] * self.rank)

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        return self.reduce([x + y for x, y in zip(a, b)])

    def neg(self, a: Sequence[int]) -> Vec:
        return self.reduce([-x for x in a])

    def sub(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        return self.reduce([x - y for x, y in zip(a, b)])

    def scale(self, n: int, a: Sequence[int]) -> Vec:
        return self.reduce([n * x for x in a])

    def mul(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        acc = [0] * self.rank
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self.tensor[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                c = row[j]
                f = ai * bj
                for k in range(self.rank):
                    acc[k] += f * c[k]
        return self.reduce(acc)

    @property
    def order(self) -> int | None:
        return None if 0 in self.orders else prod(self.orders) if self.orders else 1

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def elements(self, limit: int = ELEMENT_LIMIT) -> Iterator[Vec]:
        if self.order is None:
            raise GroupError("cannot enumerate an infinite ring")
        if self.order > limit:
            raise GroupError(f"ring of order {self.order} exceeds enumeration limit")
        yield from itertools.product(*(range(d) for d in self.orders))

    def generator(self, i: int) -> Vec:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def element_order(self, vec: Sequence[int]) -> int | None:
        return self.additive.element_order(self.reduce(vec))

    def subgroup(self, gens) -> Subgroup:
        return self.additive.subgroup(gens)

    def is_commutative(self) -> bool:
        return all(
            self.tensor[i][j] == self.tensor[j][i]
            for i in range(self.rank)
            for j in range(i)
        )

    def is_associative(self) -> bool:
        for i in range(self.rank):
            for j in range(self.rank):
                for k in range(self.rank):
                    left = self.mul(self.tensor[i][j], self.generator(k))
                    right = self.mul(self.generator(i), self.tensor[j][k])
                    if left != right:
                        return False
        return True

    def unity(self) -> Vec | None:
        """The two-sided multiplicative identity, if one exists."""
        eqs = []
        moduli = []
        rhs = []
        for j in range(self.rank):
            for k in range(self.rank):
                left = [self.tensor[i][j][k] for i in range(self.rank)]
                right = [self.tensor[j][i][k] for i in range(self.rank)]
                for row in (left, right):
                    eqs.append(row)
                    moduli.append(self.orders[k])
                    rhs.append(1 if j == k else 0)
        res = solve_congruences(eqs, moduli, rhs=rhs, unknowns=self.rank)
        if res is None:
            return None
        return self.reduce(res[0])


def validate_ring(orders: Sequence[int], tensor) -> FdzRing:
    """Build a ring, raising RingValidationError on the first bad congruence."""
    return FdzRing(orders, tensor)


def z0_ring() -> FdzRing:
    """The integers with identically zero multiplication."""
    return FdzRing((0,), (((0,),),))


def direct_product(a: FdzRing, b: FdzRing) -> FdzRing:
    ra, rb = a.rank, b.rank
    r = ra + rb
    orders = a.orders + b.orders
    tensor = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(ra):
        for j in range(ra):
            for k in range(ra):
                tensor[i][j][k] = a.tensor[i][j][k]
    for i in range(rb):
        for j in range(rb):
            for k in range(rb):
                tensor[ra + i][ra + j][ra + k] = b.tensor[i][j][k]
    return FdzRing(orders, tensor)


# -- characteristic ideals -------------------------------------------------


@dataclass(frozen=True)
class IdealChain:
    ann: Subgroup
    sq: Subgroup
    delta: Subgroup
    k_ideal: Subgroup
    l_ideal: Subgroup
    o_ideal: Subgroup
    m_quot: FgAbelianGroup
    n_quot: FgAbelianGroup


def annihilator(a: FdzRing) -> Subgroup:
    eqs = []
    moduli = []
    for j in range(a.rank):
        for k in range(a.rank):
            eqs.append([a.tensor[i][j][k] for i in range(a.rank)])
            moduli.append(a.orders[k])
            eqs.append([a.tensor[j][i][k] for i in range(a.rank)])
            moduli.append(a.orders[k])
    res = solve_congruences(eqs, moduli, unknowns=a.rank)
    assert res is not None
    return a.additive.subgroup(res[1])


def ideal_closure(a: FdzRing, s: Subgroup) -> Subgroup:
    """Smallest two-sided ideal containing s (ascending chain terminates)."""
    current = s
    while True:
        extra = []
        for row in current.lift_basis:
            for i in range(a.rank):
                g = a.generator(i)
                extra.append(a.mul(row, g))
                extra.append(a.mul(g, row))
        bigger = current.sum(a.additive.subgroup(extra))
        if bigger == current:
            return current
        current = bigger


def square_ideal(a: FdzRing) -> Subgroup:
    gens = [a.tensor[i][j] for i in range(a.rank) for j in range(a.rank)]
    return ideal_closure(a, a.additive.subgroup(gens))


@lru_cache(maxsize=256)
def characteristic_ideals(a: FdzRing) -> IdealChain:
    ann = annihilator(a)
    sq = square_ideal(a)
    delta = sq.saturate()
    k_ideal = ann.sum(delta)
    l_ideal = ann.sum(sq).saturate()
    o_ideal = ann.intersect(delta)
    m_quot = l_ideal.quotient()
    n_quot = quotient_of_subgroups(l_ideal, k_ideal)
    return IdealChain(
        ann=ann,
        sq=sq,
        delta=delta,
        k_ideal=k_ideal,
        l_ideal=l_ideal,
        o_ideal=o_ideal,
        m_quot=m_quot,
        n_quot=n_quot,
    )


@dataclass(frozen=True)
class RingPredicates:
    tame: bool
    regular: bool


def predicates(a: FdzRing) -> RingPredicates:
    chain = characteristic_ideals(a)
    return RingPredicates(
        tame=chain.delta.contains_subgroup(chain.ann),
        regular=chain.k_ideal == chain.l_ideal,
    )


# -- presentations derived from a ring --------------------------------------


@dataclass(frozen=True)
class QuotientPresentation:
    """A quotient ring together with coordinate transport.

    ``project`` maps ambient coordinates of the source to quotient
    coordinates; ``lift`` picks coordinates of a preimage.
    """

    ring: FdzRing
    project: IntMatrix
    lift: IntMatrix


def quotient_ring(a: FdzRing, ideal: Subgroup) -> QuotientPresentation:
    if ideal.parent != a.additive:
        raise GroupError("ideal does not live in the ring")
    for row in ideal.lift_basis:
        for i in range(a.rank):
            g = a.generator(i)
            if not ideal.contains(a.mul(row, g)) or not ideal.contains(a.mul(g, row)):
                raise GroupError("subgroup is not a two-sided ideal")
    rel = IntMatrix(
        list(ideal.lift_basis) + [list(r) for r in a.additive.relation_basis],
        cols=a.rank,
    )
    dec = smith(rel)
    diag = list(dec.diagonal) + [0] * (a.rank - len(dec.diagonal))
    keep = [i for i, d in enumerate(diag) if d != 1]
    orders = [diag[i] for i in keep]
    project = IntMatrix(
        [[dec.v[(i, j)] for j in keep] for i in range(a.rank)], cols=len(keep)
    )
    lift = IntMatrix([dec.vinv.row(i) for i in keep], cols=a.rank)
    tensor = []
    for p in range(len(keep)):
        row = []
        for q in range(len(keep)):
            prod_ambient = a.mul(lift.row(p), lift.row(q))
            row.append(row_times_matrix(prod_ambient, project))
        tensor.append(row)
    ring = FdzRing(orders, tensor)
    return QuotientPresentation(ring=ring, project=project, lift=lift)


def reduce_mod_n(a: FdzRing, n: int) -> FdzRing:
    """The finite quotient ring A/nA."""
    if n < 1:
        raise ValueError("modulus must be at least 1")
    scaled = a.additive.subgroup(
        [[n if j == i else 0 for j in range(a.rank)] for i in range(a.rank)]
    )
    return quotient_ring(a, scaled).ring


@dataclass(frozen=True)
class SubringPresentation:
    """A multiplicatively closed subgroup presented as a ring of its own.

    ``lift`` rows are ambient coordinates of the presentation's generators;
    ``express`` sends an ambient element of the subgroup to its coordinates.
    """

    ring: FdzRing
    lift: IntMatrix
    express: Callable[[Sequence[int]], Vec]


def subring_presentation(a: FdzRing, s: Subgroup) -> SubringPresentation:
    if s.parent != a.additive:
        raise GroupError("subgroup does not live in the ring")
    for x in s.lift_basis:
        for y in s.lift_basis:
            if not s.contains(a.mul(x, y)):
                raise GroupError("subgroup is not closed under multiplication")
    pres = s.presentation()
    lift = pres.lift
    express = pres.to_coords
    k = len(pres.orders)
    tensor = []
    for p in range(k):
        row = []
        for q in range(k):
            row.append(express(a.mul(lift.row(p), lift.row(q))))
        tensor.append(row)
    ring = FdzRing(pres.orders, tensor)
    return SubringPresentation(ring=ring, lift=lift, express=express)


def transport(a: FdzRing, t: IntMatrix, tinv: IntMatrix) -> FdzRing:
    """Rewrite A along the additive base change x -> x·t.

    ``t`` must be unimodular with both t and tinv preserving the relation
    lattice; the result is the identical ring presented in new coordinates.
    """
    if t.mul(tinv) != IntMatrix.identity(a.rank):
        raise ValueError("base change must be unimodular with the given inverse")
    tensor = []
    for i in range(a.rank):
        row = []
        for j in range(a.rank):
            prod_old = a.mul(tinv.row(i), tinv.row(j))
            row.append(row_times_matrix(prod_old, t))
        tensor.append(row)
    return FdzRing(a.orders, tensor)


# -- additions and foundations ----------------------------------------------


@dataclass(frozen=True)
class AdditionFoundation:
    """An addition A0 with Ann = A0 ⊕ O, plus the matching foundation.

    The foundation is a complementary subring containing delta when one
    exists, and the quotient ring A/A0 otherwise.  All fields are None when
    no addition exists.
    """

    addition: Subgroup | None
    foundation_subring: Subgroup | None
    foundation_quotient: QuotientPresentation | None


def _complement_in_subgroup(
    g: FgAbelianGroup, ambient: Subgroup, part: Subgroup
) -> Subgroup | None:
    """A complement of ``part`` inside ``ambient`` (both subgroups of g)."""
    abstract, basis = ambient.as_group()
    inner = []
    for row in part.lift_basis:
        coeffs = ambient.express(row)
        if coeffs is None:
            raise GroupError("part is not inside the ambient subgroup")
        inner.append(list(coeffs))
    split = split_complement(abstract, abstract.subgroup(inner))
    if split is None:
        return None
    gens = [row_times_matrix(row, basis) for row in split.complement.lift_basis]
    return Subgroup(g, gens)


def _projection_killing(
    a: FdzRing, target: Subgroup, kill: Subgroup
) -> IntMatrix | None:
    """An idempotent projection of A onto ``target`` vanishing on ``kill``."""
    g = a.additive
    r = g.rank
    tbasis = target.lift_basis
    t = len(tbasis)
    rels = g.relation_basis
    nrel = len(rels)
    kbasis = kill.lift_basis
    nunk = r * r + r * t + t * nrel + len(kbasis) * nrel
    eqs: list[list[int]] = []
    rhs: list[int] = []

    def p_idx(i, j):
        return i * r + j

    def a_idx(i, k):
        return r * r + i * t + k

    def b_idx(k, m):
        return r * r + r * t + k * nrel + m

    def c_idx(k, m):
        return r * r + r * t + t * nrel + k * nrel + m

    for i in range(r):
        for j in range(r):
            row = [0] * nunk
            row[p_idx(i, j)] = 1
            for k in range(t):
                row[a_idx(i, k)] = -tbasis[k][j]
            eqs.append(row)
            rhs.append(0)
    for k in range(t):
        for j in range(r):
            row = [0] * nunk
            for i in range(r):
                row[p_idx(i, j)] += tbasis[k][i]
            for m in range(nrel):
                row[b_idx(k, m)] = -rels[m][j]
            eqs.append(row)
            rhs.append(tbasis[k][j])
    for k, w in enumerate(kbasis):
        for j in range(r):
            row = [0] * nunk
            for i in range(r):
                row[p_idx(i, j)] += w[i]
            for m in range(nrel):
                row[c_idx(k, m)] = -rels[m][j]
            eqs.append(row)
            rhs.append(0)
    res = solve_congruences(eqs, [0] * len(eqs), rhs=rhs, unknowns=nunk)
    if res is None:
        return None
    sol = res[0]
    return IntMatrix([[sol[p_idx(i, j)] for j in range(r)] for i in range(r)], cols=r)


def addition_and_foundation(a: FdzRing) -> AdditionFoundation:
    chain = characteristic_ideals(a)
    addition = _complement_in_subgroup(a.additive, chain.ann, chain.o_ideal)
    if addition is None:
        return AdditionFoundation(None, None, None)
    proj = _projection_killing(a, addition, chain.delta)
    if proj is not None:
        from .intlinalg import preimage_lattice

        kernel_rows = preimage_lattice(proj, a.additive.relation_basis)
        foundation = Subgroup(a.additive, kernel_rows)
        # products land in sq ⊆ delta ⊆ foundation, so it is a subring
        assert foundation.contains_subgroup(chain.delta)
        return AdditionFoundation(addition, foundation, None)
    return AdditionFoundation(addition, None, quotient_ring(a, addition))


# -- normal presentation -----------------------------------------------------


@dataclass(frozen=True)
class NormalPresentation:
    """Generator products split along the free/torsion decomposition.

    With free generators a_1..a_l and torsion generators b_1..b_m of orders
    d_1..d_m, the constants satisfy

        a_i·a_j = sum_k c[i][j][k]·a_k + sum_k t[i][j][k]·b_k
        a_i·b_j = sum_k s[i][j][k]·b_k
        b_j·a_i = sum_k u[i][j][k]·b_k
        b_i·b_j = sum_k v[i][j][k]·b_k

    with every torsion constant reduced into [0, d_k).
    """

    free_indices: Vec
    torsion_indices: Vec
    torsion_orders: Vec
    c: tuple
    t: tuple
    s: tuple
    u: tuple
    v: tuple


def normal_presentation(a: FdzRing) -> NormalPresentation:
    free = tuple(i for i, d in enumerate(a.orders) if d == 0)
    tors = tuple(i for i, d in enumerate(a.orders) if d != 0)

    def torsion_part(vec: Vec) -> Vec:
        for i in free:
            assert vec[i] == 0, "product of mixed generators left the torsion part"
        return tuple(vec[i] for i in tors)

    c = tuple(
        tuple(tuple(a.tensor[i][j][k] for k in free) for j in free) for i in free
    )
    t = tuple(
        tuple(tuple(a.tensor[i][j][k] for k in tors) for j in free) for i in free
    )
    s = tuple(
        tuple(torsion_part(a.tensor[i][j]) for j in tors) for i in free
    )
    u = tuple(
        tuple(torsion_part(a.tensor[j][i]) for j in tors) for i in free
    )
    v = tuple(
        tuple(torsion_part(a.tensor[i][j]) for j in tors) for i in tors
    )
    return NormalPresentation(
        free_indices=free,
        torsion_indices=tors,
        torsion_orders=tuple(a.orders[i] for i in tors),
        c=c,
        t=t,
        s=s,
        u=u,
        v=v,
    )


# -- torsion -----------------------------------------------------------------


def torsion_subgroup(a: FdzRing) -> Subgroup:
    return a.additive.zero_subgroup().saturate()
