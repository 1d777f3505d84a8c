"""Bilinear maps attached to a ring and their largest scalar ring.

For a ring A the multiplication descends to a full non-degenerate bilinear
map  (A/ann) x (A/ann) -> sq.  The largest commutative associative unital
ring acting compatibly on both sides is computed exactly: endomorphism
pairs (phi on the domain, psi on the codomain) satisfying

    f(phi·x, y) = f(x, phi·y) = psi(f(x, y))

form an integer solution lattice; modulo the pairs whose image dies in the
relation lattices this quotient is the scalar ring, with composition as its
product and (id, id) as unity.  Commutativity and associativity follow from
fullness and non-degeneracy; both are asserted after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence

from .groups import FgAbelianGroup, Subgroup
from .intlinalg import (
    IntMatrix,
    Vec,
    hermite_rows,
    lattice_contains,
    row_times_matrix,
    smith,
    solve_congruences,
)
from .rings import (
    ELEMENT_LIMIT,
    FdzRing,
    characteristic_ideals,
    quotient_ring,
    subring_presentation,
)


class BilinearMapError(ValueError):
    pass


class DegenerateMapError(BilinearMapError):
    """The map has a nonzero radical."""


class ScalarRingError(AssertionError):
    """Scalar ring axioms violated; signals a degenerate or non-full input."""


@dataclass(frozen=True)
class BilinearMap:
    """A bilinear map between diagonally presented groups, via its values
    on generator pairs (in codomain coordinates)."""

    domain_orders: Vec
    codomain_orders: Vec
    values: tuple[tuple[Vec, ...], ...]

    def __post_init__(self):
        m = len(self.domain_orders)
        n = len(self.codomain_orders)
        if len(self.values) != m or any(len(r) != m for r in self.values):
            raise BilinearMapError("value tensor must be square in the domain rank")
        for i in range(m):
            for j in range(m):
                if len(self.values[i][j]) != n:
                    raise BilinearMapError("value vectors must match the codomain rank")
                for k in range(n):
                    c = self.values[i][j][k]
                    dk = self.codomain_orders[k]
                    for side in (self.domain_orders[i], self.domain_orders[j]):
                        v = side * c
                        if (dk == 0 and v != 0) or (dk != 0 and v % dk):
                            raise BilinearMapError(
                                f"value at ({i}, {j}) is not well defined modulo the "
                                "relation lattices"
                            )

    @cached_property
    def domain_group(self) -> FgAbelianGroup:
        return FgAbelianGroup.from_orders(self.domain_orders)

    @cached_property
    def codomain_group(self) -> FgAbelianGroup:
        return FgAbelianGroup.from_orders(self.codomain_orders)

    @property
    def domain_rank(self) -> int:
        return len(self.domain_orders)

    @property
    def codomain_rank(self) -> int:
        return len(self.codomain_orders)

    def reduce_codomain(self, vec: Sequence[int]) -> Vec:
        return tuple(
            int(x) % d if d else int(x) for x, d in zip(vec, self.codomain_orders)
        )

    def evaluate(self, x: Sequence[int], y: Sequence[int]) -> Vec:
        acc = [0] * self.codomain_rank
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                c = self.values[i][j]
                f = xi * yj
                for k in range(self.codomain_rank):
                    acc[k] += f * c[k]
        return self.reduce_codomain(acc)

    def radical(self) -> Subgroup:
        """Elements x with f(x, ·) = f(·, x) = 0, as a domain subgroup."""
        eqs = []
        moduli = []
        for j in range(self.domain_rank):
            for k in range(self.codomain_rank):
                eqs.append([self.values[i][j][k] for i in range(self.domain_rank)])
                moduli.append(self.codomain_orders[k])
                eqs.append([self.values[j][i][k] for i in range(self.domain_rank)])
                moduli.append(self.codomain_orders[k])
        res = solve_congruences(eqs, moduli, unknowns=self.domain_rank)
        assert res is not None
        return self.domain_group.subgroup(res[1])

    def is_nondegenerate(self) -> bool:
        return self.radical().is_zero()

    def is_full(self) -> bool:
        gens = [self.values[i][j] for i in range(self.domain_rank) for j in range(self.domain_rank)]
        return self.codomain_group.subgroup(gens).is_full()


@dataclass(frozen=True)
class InducedBilinearMap:
    """The multiplication map of a ring, with coordinate transport.

    ``domain_project``/``domain_lift`` move between ring coordinates and the
    annihilator quotient; ``codomain_embed`` rows are ambient coordinates of
    the square's generators and ``codomain_express`` inverts it on the
    square.
    """

    map: BilinearMap
    domain_project: IntMatrix
    domain_lift: IntMatrix
    codomain_embed: IntMatrix
    codomain_express: Callable[[Sequence[int]], Vec]


def induced_bilinear_map(a: FdzRing) -> InducedBilinearMap:
    chain = characteristic_ideals(a)
    hat = quotient_ring(a, chain.ann)
    square = subring_presentation(a, chain.sq)
    m = hat.ring.rank
    values = tuple(
        tuple(
            square.express(a.mul(hat.lift.row(i), hat.lift.row(j)))
            for j in range(m)
        )
        for i in range(m)
    )
    bmap = BilinearMap(
        domain_orders=hat.ring.orders,
        codomain_orders=square.ring.orders,
        values=values,
    )
    return InducedBilinearMap(
        map=bmap,
        domain_project=hat.project,
        domain_lift=hat.lift,
        codomain_embed=square.lift,
        codomain_express=square.express,
    )


# -- width and complete systems ----------------------------------------------


@dataclass(frozen=True)
class WidthResult:
    exact: int | None
    upper_bound: int


def _reduced_domain_elements(f: BilinearMap, modulus: int) -> list[Vec]:
    ranges = []
    total = 1
    for d in f.domain_orders:
        span = d if d else modulus
        total *= max(span, 1)
        ranges.append(range(span))
    if total > ELEMENT_LIMIT:
        raise BilinearMapError("domain too large for value enumeration")
    return [tuple(v) for v in itertools.product(*ranges)]


def width(f: BilinearMap) -> WidthResult:
    upper = f.domain_rank
    cod = f.codomain_group
    if cod.is_trivial:
        return WidthResult(exact=0, upper_bound=upper)
    if not cod.is_finite:
        if upper == 1 and f.is_full():
            # fullness bounds the width by the generator count, and a
            # nontrivial codomain forces at least one product
            return WidthResult(exact=1, upper_bound=upper)
        return WidthResult(exact=None, upper_bound=upper)
    exponent = cod.exponent()
    assert exponent is not None
    domain = _reduced_domain_elements(f, exponent)
    products = {f.evaluate(x, y) for x in domain for y in domain}
    carrier = {f.reduce_codomain(v) for v in cod.elements()}
    reach = {f.reduce_codomain(cod.zero())}
    steps = 0
    while reach != carrier:
        bigger = {f.reduce_codomain(tuple(a + b for a, b in zip(u, p)))
                  for u in reach for p in products}
        steps += 1
        if bigger == reach:
            return WidthResult(exact=None, upper_bound=upper)
        reach = bigger
    return WidthResult(exact=steps, upper_bound=upper)


@dataclass(frozen=True)
class CompleteSystem:
    witness: tuple[Vec, ...]
    size_bound: int


def _pairing_kernel(f: BilinearMap, indices: Sequence[int]) -> Subgroup:
    eqs = []
    moduli = []
    for j in indices:
        for k in range(f.codomain_rank):
            eqs.append([f.values[i][j][k] for i in range(f.domain_rank)])
            moduli.append(f.codomain_orders[k])
            eqs.append([f.values[j][i][k] for i in range(f.domain_rank)])
            moduli.append(f.codomain_orders[k])
    res = solve_congruences(eqs, moduli, unknowns=f.domain_rank)
    assert res is not None
    return f.domain_group.subgroup(res[1])


def complete_system(f: BilinearMap) -> CompleteSystem:
    """The smallest generator subset pairing trivially only with zero."""
    all_indices = range(f.domain_rank)
    if not _pairing_kernel(f, all_indices).is_zero():
        raise DegenerateMapError("map has a nonzero radical")
    for size in range(f.domain_rank + 1):
        for combo in itertools.combinations(all_indices, size):
            if _pairing_kernel(f, combo).is_zero():
                witness = tuple(
                    tuple(1 if i == c else 0 for i in range(f.domain_rank))
                    for c in combo
                )
                return CompleteSystem(witness=witness, size_bound=size)
    raise AssertionError("unreachable: the full generator set is complete")


# -- the largest scalar ring --------------------------------------------------


@dataclass(frozen=True)
class ScalarRingAction:
    """A scalar ring with its compatible actions on both sides of a map.

    ``action_on_domain[g]`` and ``action_on_codomain[g]`` are the matrices of
    the g-th ring generator; ``unity`` holds the coordinates of (id, id).
    ``pair_basis`` rows span the full solution lattice of endomorphism pairs
    (domain matrix flattened, then codomain matrix), and ``in_parent`` is set
    when this ring was carved out of a larger one.
    """

    ring: FdzRing
    action_on_domain: tuple[IntMatrix, ...]
    action_on_codomain: tuple[IntMatrix, ...]
    unity: Vec
    bilinear: BilinearMap
    pair_basis: IntMatrix
    express_pair: Callable[[IntMatrix, IntMatrix], Vec]
    in_parent: IntMatrix | None = None

    def pair_of(self, coords: Sequence[int]) -> tuple[IntMatrix, IntMatrix]:
        m = self.bilinear.domain_rank
        n = self.bilinear.codomain_rank
        phi = [[0] * m for _ in range(m)]
        psi = [[0] * n for _ in range(n)]
        for g, c in enumerate(coords):
            if not c:
                continue
            dom = self.action_on_domain[g]
            cod = self.action_on_codomain[g]
            for i in range(m):
                for j in range(m):
                    phi[i][j] += c * dom[(i, j)]
            for i in range(n):
                for j in range(n):
                    psi[i][j] += c * cod[(i, j)]
        return IntMatrix(phi, cols=m), IntMatrix(psi, cols=n)


def _pair_conditions(f: BilinearMap) -> tuple[list[list[int]], list[int]]:
    m, n = f.domain_rank, f.codomain_rank
    nunk = m * m + n * n

    def phi_idx(i, j):
        return i * m + j

    def psi_idx(i, j):
        return m * m + i * n + j

    eqs: list[list[int]] = []
    moduli: list[int] = []
    for i in range(m):
        if f.domain_orders[i] == 0:
            continue
        for k in range(m):
            row = [0] * nunk
            row[phi_idx(i, k)] = f.domain_orders[i]
            eqs.append(row)
            moduli.append(f.domain_orders[k])
    for i in range(n):
        if f.codomain_orders[i] == 0:
            continue
        for k in range(n):
            row = [0] * nunk
            row[psi_idx(i, k)] = f.codomain_orders[i]
            eqs.append(row)
            moduli.append(f.codomain_orders[k])
    for i in range(m):
        for j in range(m):
            base = f.values[i][j]
            for k in range(n):
                left = [0] * nunk
                for t in range(m):
                    left[phi_idx(i, t)] += f.values[t][j][k]
                for s in range(n):
                    left[psi_idx(s, k)] -= base[s]
                eqs.append(left)
                moduli.append(f.codomain_orders[k])
                right = [0] * nunk
                for t in range(m):
                    right[phi_idx(j, t)] += f.values[i][t][k]
                for s in range(n):
                    right[psi_idx(s, k)] -= base[s]
                eqs.append(right)
                moduli.append(f.codomain_orders[k])
    return eqs, moduli


def _degenerate_pair_rows(f: BilinearMap) -> list[Vec]:
    m, n = f.domain_rank, f.codomain_rank
    nunk = m * m + n * n
    rows = []
    for i in range(m):
        for k in range(m):
            if f.domain_orders[k]:
                row = [0] * nunk
                row[i * m + k] = f.domain_orders[k]
                rows.append(tuple(row))
    for i in range(n):
        for k in range(n):
            if f.codomain_orders[k]:
                row = [0] * nunk
                row[m * m + i * n + k] = f.codomain_orders[k]
                rows.append(tuple(row))
    return rows


def _build_action(
    f: BilinearMap,
    extra_eqs: list[list[int]] | None = None,
    extra_moduli: list[int] | None = None,
) -> tuple[ScalarRingAction, IntMatrix]:
    """Shared pipeline; returns the action and its solution basis matrix."""
    m, n = f.domain_rank, f.codomain_rank
    nunk = m * m + n * n
    if f.domain_group.is_trivial or f.codomain_group.is_trivial:
        raise BilinearMapError(
            "largest scalar ring undefined: quotient or square is trivial"
        )
    if not f.is_full():
        raise ScalarRingError("scalar ring axioms violated: map is not full")
    if not f.is_nondegenerate():
        raise ScalarRingError("scalar ring axioms violated: map is degenerate")
    eqs, moduli = _pair_conditions(f)
    if extra_eqs:
        eqs = eqs + extra_eqs
        moduli = moduli + list(extra_moduli or [])
    res = solve_congruences(eqs, moduli, unknowns=nunk)
    assert res is not None
    sol_basis = hermite_rows(res[1], nunk)
    smat = IntMatrix(sol_basis, cols=nunk)
    degenerate = _degenerate_pair_rows(f)
    for row in degenerate:
        if not lattice_contains(sol_basis, row):
            raise ScalarRingError(
                "scalar ring axioms violated: degenerate pairs escape the solution lattice"
            )

    def express_z(z: Sequence[int]) -> Vec:
        if not sol_basis:
            return ()
        eqs_z = [
            [sol_basis[i][j] for i in range(len(sol_basis))] for j in range(nunk)
        ]
        r = solve_congruences(eqs_z, [0] * nunk, rhs=list(z))
        if r is None:
            raise ScalarRingError(
                "scalar ring axioms violated: composite pair escapes the lattice"
            )
        return r[0]

    relations = [express_z(row) for row in degenerate]
    s = len(sol_basis)
    dec = smith(IntMatrix(relations, cols=s) if relations else IntMatrix([], cols=s))
    diag = list(dec.diagonal) + [0] * (s - len(dec.diagonal))
    keep = [i for i, d in enumerate(diag) if d != 1]
    orders = [diag[i] for i in keep]
    to_new = IntMatrix([[dec.v[(i, j)] for j in keep] for i in range(s)], cols=len(keep))
    from_new = IntMatrix([dec.vinv.row(i) for i in keep], cols=s)

    def unpack(z: Sequence[int]) -> tuple[IntMatrix, IntMatrix]:
        phi = IntMatrix([[z[i * m + j] for j in range(m)] for i in range(m)], cols=m)
        psi = IntMatrix(
            [[z[m * m + i * n + j] for j in range(n)] for i in range(n)], cols=n
        )
        return phi, psi

    def pack(phi: IntMatrix, psi: IntMatrix) -> Vec:
        return tuple(phi.entries) + tuple(psi.entries)

    basis_pairs = []
    for alpha in range(len(keep)):
        z = row_times_matrix(from_new.row(alpha), smat)
        basis_pairs.append(unpack(z))

    def express_pair(phi: IntMatrix, psi: IntMatrix) -> Vec:
        coords = row_times_matrix(express_z(pack(phi, psi)), to_new)
        return tuple(
            c % d if d else c for c, d in zip(coords, orders)
        )

    tensor = []
    for alpha, (pa, sa) in enumerate(basis_pairs):
        row = []
        for beta, (pb, sb) in enumerate(basis_pairs):
            row.append(express_pair(pa.mul(pb), sa.mul(sb)))
        tensor.append(row)
    ring = FdzRing(orders, tensor)
    unity = express_pair(IntMatrix.identity(m), IntMatrix.identity(n))
    if not ring.is_commutative() or not ring.is_associative():
        raise ScalarRingError("scalar ring axioms violated: composition is not scalar")
    if ring.unity() != unity:
        raise ScalarRingError("scalar ring axioms violated: (id, id) is not a unity")
    action = ScalarRingAction(
        ring=ring,
        action_on_domain=tuple(p for p, _ in basis_pairs),
        action_on_codomain=tuple(q for _, q in basis_pairs),
        unity=unity,
        bilinear=f,
        pair_basis=smat,
        express_pair=express_pair,
    )
    return action, smat


def pf_ring(f: BilinearMap) -> ScalarRingAction:
    """The largest scalar ring keeping f bilinear, with both actions."""
    action, _ = _build_action(f)
    return action


def pa_ring(a: FdzRing) -> ScalarRingAction:
    """The subring of the largest scalar ring making sq -> A/ann linear."""
    induced = induced_bilinear_map(a)
    f = induced.map
    parent, parent_basis = _build_action(f)
    m, n = f.domain_rank, f.codomain_rank
    nunk = m * m + n * n
    pi = [
        row_times_matrix(induced.codomain_embed.row(k), induced.domain_project)
        for k in range(n)
    ]
    extra_eqs: list[list[int]] = []
    extra_moduli: list[int] = []
    for k in range(n):
        for c in range(m):
            row = [0] * nunk
            for s in range(n):
                row[m * m + k * n + s] += pi[s][c]
            for t in range(m):
                row[t * m + c] -= pi[k][t]
            extra_eqs.append(row)
            extra_moduli.append(f.domain_orders[c])
    action, _ = _build_action(f, extra_eqs, extra_moduli)
    in_parent = IntMatrix(
        [
            parent.express_pair(phi, psi)
            for phi, psi in zip(action.action_on_domain, action.action_on_codomain)
        ],
        cols=parent.ring.rank,
    )
    return ScalarRingAction(
        ring=action.ring,
        action_on_domain=action.action_on_domain,
        action_on_codomain=action.action_on_codomain,
        unity=action.unity,
        bilinear=f,
        pair_basis=action.pair_basis,
        express_pair=action.express_pair,
        in_parent=in_parent,
    )


def brute_force_pairs(f: BilinearMap) -> set[tuple[Vec, ...]]:
    """All compatible endomorphism pairs of a finite map, canonicalized.

    Oracle for the lattice construction: enumerates every pair of matrices
    respecting the relation lattices and keeps those satisfying the three-way
    compatibility on generator pairs.  Pairs are canonicalized entrywise
    (column k reduced modulo the order of generator k).
    """
    m, n = f.domain_rank, f.codomain_rank
    if any(d == 0 for d in f.domain_orders) or any(d == 0 for d in f.codomain_orders):
        raise BilinearMapError("brute force requires finite domain and codomain")

    def endo_candidates(orders: Vec) -> list[IntMatrix]:
        size = len(orders)
        choices_per_entry = []
        for i in range(size):
            for k in range(size):
                valid = [
                    v
                    for v in range(orders[k])
                    if (orders[i] * v) % orders[k] == 0
                ]
                choices_per_entry.append(valid)
        out = []
        for flat in itertools.product(*choices_per_entry):
            out.append(
                IntMatrix(
                    [[flat[i * size + k] for k in range(size)] for i in range(size)],
                    cols=size,
                )
            )
        return out

    result = set()
    gens = [tuple(1 if t == i else 0 for t in range(m)) for i in range(m)]
    for phi in endo_candidates(f.domain_orders):
        phi_rows = [phi.row(i) for i in range(m)]
        for psi in endo_candidates(f.codomain_orders):
            ok = True
            for i in range(m):
                for j in range(m):
                    target = f.reduce_codomain(
                        row_times_matrix(f.values[i][j], psi)
                    )
                    if f.evaluate(phi_rows[i], gens[j]) != target:
                        ok = False
                        break
                    if f.evaluate(gens[i], phi_rows[j]) != target:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                result.add((tuple(phi.entries), tuple(psi.entries)))
    return result
