"""Finitely generated abelian groups presented as Z^r modulo a relation lattice.

A group is the ambient free group Z^r divided by the row span of a relation
matrix; a subgroup is carried by the lattice of its lifts, canonicalized by
its Hermite basis (so subgroup equality is syntactic equality of canonical
forms).  Saturation, sums, intersections, quotients, invariant factors, and
direct-summand complements all reduce to exact lattice computations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Callable, Iterable, Iterator, Sequence

from .intlinalg import (
    IntMatrix,
    Vec,
    hermite_reduce,
    hermite_rows,
    preimage_lattice,
    row_times_matrix,
    smith,
    solve_congruences,
    vec_add,
    vec_scale,
)


class GroupError(ValueError):
    pass


class FgAbelianGroup:
    """Z^rank modulo the lattice spanned by the relation rows."""

    def __init__(self, rank: int, relations: Iterable[Sequence[int]] = ()):
        self.rank = int(rank)
        self.relation_basis = hermite_rows(relations, self.rank)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FgAbelianGroup)
            and self.rank == other.rank
            and self.relation_basis == other.relation_basis
        )

    def __hash__(self) -> int:
        return hash((self.rank, self.relation_basis))

    def __repr__(self) -> str:
        return f"FgAbelianGroup(rank={self.rank}, invariants={list(self.invariant_factors)})"

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FgAbelianGroup":
        """Diagonal presentation: one generator per order, 0 meaning infinite."""
        r = len(orders)
        rels = []
        for i, d in enumerate(orders):
            if d < 0:
                raise GroupError("orders must be nonnegative")
            if d:
                rels.append([d if j == i else 0 for j in range(r)])
        return cls(r, rels)

    @cached_property
    def _smith(self):
        mat = IntMatrix(self.relation_basis, cols=self.rank)
        return smith(mat)

    @cached_property
    def invariant_factors(self) -> Vec:
        """d1 | d2 | ... then zeros for free rank; unit factors dropped."""
        diag = list(self._smith.diagonal)
        diag += [0] * (self.rank - len(diag))
        return tuple(d for d in diag if d != 1)

    @cached_property
    def order(self) -> int | None:
        """Group order, or None when infinite."""
        inv = self.invariant_factors
        if any(d == 0 for d in inv):
            return None
        return prod(inv) if inv else 1

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @property
    def is_trivial(self) -> bool:
        return self.order == 1

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    def exponent(self) -> int | None:
        """Least n >= 1 with n·x = 0 for all x, or None when unbounded."""
        if not self.is_finite:
            return None
        inv = self.invariant_factors
        return inv[-1] if inv else 1

    def reduce(self, vec: Sequence[int]) -> Vec:
        """Canonical coset representative of an ambient vector."""
        if len(vec) != self.rank:
            raise GroupError("vector length does not match ambient rank")
        return hermite_reduce(self.relation_basis, vec)

    def contains_zero(self, vec: Sequence[int]) -> bool:
        return all(x == 0 for x in self.reduce(vec))

    def element_order(self, vec: Sequence[int]) -> int | None:
        """Additive order of the coset of ``vec`` (None = infinite)."""
        # order = index of {n : n·vec in relations} in Z
        rows = [list(vec)]
        mat = IntMatrix(rows, cols=self.rank)
        pre = preimage_lattice(mat, self.relation_basis)
        if not pre:
            return None
        n = abs(pre[0][0])
        return n if n else None

    def elements(self, limit: int = 65536) -> Iterator[Vec]:
        """All canonical representatives; finite groups only."""
        if not self.is_finite:
            raise GroupError("cannot enumerate an infinite group")
        assert self.order is not None
        if self.order > limit:
            raise GroupError(f"group of order {self.order} exceeds enumeration limit")
        dec = self._smith
        diag = list(dec.diagonal) + [0] * (self.rank - len(dec.diagonal))
        # coordinates y relative to the diagonalized presentation; x = y·Vinv
        ranges = [range(d) for d in diag]
        for y in itertools.product(*ranges):
            yield self.reduce(row_times_matrix(y, dec.vinv))

    def zero(self) -> Vec:
        return tuple([0] * self.rank)

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vec:
        return self.reduce(vec_add(tuple(a), tuple(b)))

    def neg(self, a: Sequence[int]) -> Vec:
        return self.reduce(tuple(-x for x in a))

    def scale(self, n: int, a: Sequence[int]) -> Vec:
        return self.reduce(vec_scale(n, tuple(a)))

    def subgroup(self, generators: Iterable[Sequence[int]]) -> "Subgroup":
        return Subgroup(self, generators)

    def full_subgroup(self) -> "Subgroup":
        return Subgroup(self, IntMatrix.identity(self.rank).data)

    def zero_subgroup(self) -> "Subgroup":
        return Subgroup(self, ())


class Subgroup:
    """A subgroup of an FgAbelianGroup, canonicalized by its lift lattice."""

    def __init__(self, parent: FgAbelianGroup, generators: Iterable[Sequence[int]]):
        self.parent = parent
        rows = list(generators) + [list(r) for r in parent.relation_basis]
        self.lift_basis = hermite_rows(rows, parent.rank)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.parent == other.parent
            and self.lift_basis == other.lift_basis
        )

    def __hash__(self) -> int:
        return hash((self.parent, self.lift_basis))

    def __repr__(self) -> str:
        return f"Subgroup(invariants={list(self.as_group()[0].invariant_factors)})"

    def contains(self, vec: Sequence[int]) -> bool:
        return all(
            x == 0 for x in hermite_reduce(self.lift_basis, self.parent.reduce(vec))
        )

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return all(self.contains(row) for row in other.lift_basis)

    def is_zero(self) -> bool:
        return self == self.parent.zero_subgroup()

    def is_full(self) -> bool:
        return self == self.parent.full_subgroup()

    def sum(self, other: "Subgroup") -> "Subgroup":
        if self.parent != other.parent:
            raise GroupError("subgroup sum requires a common parent")
        return Subgroup(self.parent, self.lift_basis + other.lift_basis)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        if self.parent != other.parent:
            raise GroupError("subgroup intersection requires a common parent")
        b1, b2 = self.lift_basis, other.lift_basis
        if not b1 or not b2:
            return self.parent.zero_subgroup()
        stacked = IntMatrix(
            [list(r) for r in b1] + [[-x for x in r] for r in b2],
            cols=self.parent.rank,
        )
        from .intlinalg import left_kernel

        gens = []
        for row in left_kernel(stacked):
            coeffs = row[: len(b1)]
            vec = [0] * self.parent.rank
            for c, b in zip(coeffs, b1):
                for k in range(self.parent.rank):
                    vec[k] += c * b[k]
            gens.append(vec)
        return Subgroup(self.parent, gens)

    def saturate(self) -> "Subgroup":
        """Isolator: all x with n·x inside for some n >= 1."""
        if not self.lift_basis:
            basis = ()
        else:
            dec = smith(IntMatrix(self.lift_basis, cols=self.parent.rank))
            diag = dec.diagonal
            basis = tuple(
                dec.vinv.row(i) for i in range(len(diag)) if diag[i] != 0
            )
        return Subgroup(self.parent, basis)

    def quotient(self) -> FgAbelianGroup:
        """The parent modulo this subgroup."""
        return FgAbelianGroup(self.parent.rank, self.lift_basis)

    def index(self) -> int | None:
        return self.quotient().order

    def as_group(self) -> tuple[FgAbelianGroup, IntMatrix]:
        """Present this subgroup abstractly.

        Returns ``(group, basis)`` where ``basis`` rows are ambient lifts of
        the abstract generators and ``group`` is Z^k modulo the coefficient
        vectors that die in the parent.
        """
        basis = IntMatrix(self.lift_basis, cols=self.parent.rank)
        rels = preimage_lattice(basis, self.parent.relation_basis)
        return FgAbelianGroup(basis.rows, rels), basis

    def presentation(self) -> "SubgroupPresentation":
        """Diagonal presentation: orders, ambient lifts, coordinate map.

        Unit factors are dropped, so the presented group is minimal; the
        ``lift`` rows are ambient representatives of its generators and
        ``to_coords`` writes an ambient member in those coordinates.
        """
        abstract, basis = self.as_group()
        dec = smith(IntMatrix(abstract.relation_basis, cols=abstract.rank))
        diag = list(dec.d.diagonal()) + [0] * (abstract.rank - len(dec.d.diagonal()))
        keep = [i for i, d in enumerate(diag) if d != 1]
        orders = tuple(diag[i] for i in keep)
        to_new = IntMatrix(
            [[dec.v[(i, j)] for j in keep] for i in range(abstract.rank)],
            cols=len(keep),
        )
        from_new = IntMatrix([dec.vinv.row(i) for i in keep], cols=abstract.rank)
        lift = (
            from_new.mul(basis)
            if keep
            else IntMatrix([], cols=self.parent.rank)
        )

        def to_coords(vec: Sequence[int]) -> Vec:
            coeffs = self.express(vec)
            if coeffs is None:
                raise GroupError("element lies outside the subgroup")
            raw = row_times_matrix(coeffs, to_new)
            return tuple(x % d if d else x for x, d in zip(raw, orders))

        return SubgroupPresentation(orders=orders, lift=lift, to_coords=to_coords)

    def express(self, vec: Sequence[int]) -> Vec | None:
        """Coefficients of ``vec`` over the abstract basis, if it lies here.

        The lift lattice contains the parent relations, so membership of the
        raw vector in the lattice is exactly membership in the subgroup.
        """
        basis = self.lift_basis
        if not basis:
            return () if self.contains(vec) else None
        eqs = [[basis[i][j] for i in range(len(basis))] for j in range(self.parent.rank)]
        res = solve_congruences(eqs, [0] * self.parent.rank, rhs=list(vec))
        if res is None:
            return None
        return res[0]


def subgroup_sum(s: Subgroup, t: Subgroup) -> Subgroup:
    return s.sum(t)


def subgroup_intersect(s: Subgroup, t: Subgroup) -> Subgroup:
    return s.intersect(t)


def saturation(s: Subgroup) -> Subgroup:
    return s.saturate()


def quotient_group(g: FgAbelianGroup, s: Subgroup) -> FgAbelianGroup:
    if s.parent != g:
        raise GroupError("subgroup does not live in the given group")
    return s.quotient()


def invariant_factors(g: FgAbelianGroup) -> Vec:
    return g.invariant_factors


def quotient_of_subgroups(big: Subgroup, small: Subgroup) -> FgAbelianGroup:
    """big/small as an abstract group (small must lie inside big)."""
    if not big.contains_subgroup(small):
        raise GroupError("quotient requires containment")
    group, basis = big.as_group()
    inner = []
    for row in small.lift_basis:
        coeffs = big.express(row)
        assert coeffs is not None
        inner.append(list(coeffs))
    return quotient_group(group, group.subgroup(inner))


@dataclass(frozen=True)
class SubgroupPresentation:
    orders: Vec
    lift: IntMatrix
    to_coords: "Callable[[Sequence[int]], Vec]"


@dataclass(frozen=True)
class Splitting:
    complement: Subgroup
    projection: IntMatrix  # ambient endomorphism projecting onto the subgroup


def split_complement(g: FgAbelianGroup, s: Subgroup) -> Splitting | None:
    """A complement C with G = S ⊕ C, or None when S is not a summand.

    Decided by integer solvability of a projection p: G -> S with p
    restricting to the identity on S; the complement is its kernel.
    """
    if s.parent != g:
        raise GroupError("subgroup does not live in the given group")
    r = g.rank
    sbasis = s.lift_basis
    t = len(sbasis)
    rels = g.relation_basis
    nrel = len(rels)
    # unknowns: P (r*r), A (r*t) coefficients writing e_i·P over the S basis,
    # B (t*nrel) slack writing s_k·P - s_k over the parent relations
    nunk = r * r + r * t + t * nrel
    eqs: list[list[int]] = []
    rhs: list[int] = []

    def p_idx(i: int, j: int) -> int:
        return i * r + j

    def a_idx(i: int, k: int) -> int:
        return r * r + i * t + k

    def b_idx(k: int, m: int) -> int:
        return r * r + r * t + k * nrel + m

    for i in range(r):
        for j in range(r):
            row = [0] * nunk
            row[p_idx(i, j)] = 1
            for k in range(t):
                row[a_idx(i, k)] = -sbasis[k][j]
            eqs.append(row)
            rhs.append(0)
    for k in range(t):
        for j in range(r):
            row = [0] * nunk
            for i in range(r):
                row[p_idx(i, j)] += sbasis[k][i]
            for m in range(nrel):
                row[b_idx(k, m)] = -rels[m][j]
            eqs.append(row)
            rhs.append(sbasis[k][j])
    res = solve_congruences(eqs, [0] * len(eqs), rhs=rhs, unknowns=nunk)
    if res is None:
        return None
    sol = res[0]
    proj = IntMatrix([[sol[p_idx(i, j)] for j in range(r)] for i in range(r)], cols=r)
    kernel_rows = preimage_lattice(proj, rels)
    complement = Subgroup(g, kernel_rows)
    return Splitting(complement=complement, projection=proj)
