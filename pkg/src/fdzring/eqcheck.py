"""Elementary-equivalence and isomorphism testing between rings.

Equality of invariant profiles (characteristic-ideal invariant factors plus
finite-quotient fingerprints) is a necessary condition for elementary
equivalence; the sufficient direction goes through a bounded search for an
isomorphism between the two rings padded with a null line, mirroring the
equivalence  "A = B elementarily  iff  Z0 x A and Z0 x B are isomorphic".

Witnesses found by the search are always re-verified independently by a
full tensor comparison before being returned.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .groups import Subgroup, quotient_of_subgroups
from .intlinalg import IntMatrix, Vec, hermite_rows, preimage_lattice, row_times_matrix
from .rings import FdzRing, characteristic_ideals, direct_product, z0_ring


def _group_invariants(s: Subgroup) -> Vec:
    return s.as_group()[0].invariant_factors


@dataclass(frozen=True)
class InvariantProfile:
    """Isomorphism-invariant fingerprint of a ring.

    Every field is preserved by ring isomorphism and definable without
    parameters, so a mismatch refutes elementary equivalence.
    """

    additive: Vec
    ann: Vec
    square: Vec
    delta: Vec
    k_ideal: Vec
    l_ideal: Vec
    m_quot: Vec
    n_quot: Vec
    mod_square: Vec
    fingerprints: tuple[tuple[int, int, Vec, Vec], ...]

    def first_mismatch(self, other: "InvariantProfile") -> str | None:
        for name in (
            "additive",
            "ann",
            "square",
            "delta",
            "k_ideal",
            "l_ideal",
            "m_quot",
            "n_quot",
            "mod_square",
        ):
            if getattr(self, name) != getattr(other, name):
                return name
        for mine, theirs in zip(self.fingerprints, other.fingerprints):
            if mine != theirs:
                return f"mod_{mine[0]}"
        return None


FINGERPRINT_RANGE = range(2, 17)


@lru_cache(maxsize=512)
def invariant_profile(a: FdzRing) -> InvariantProfile:
    chain = characteristic_ideals(a)
    fingerprints = []
    for n in FINGERPRINT_RANGE:
        scaled = a.additive.subgroup(
            [[n if j == i else 0 for j in range(a.rank)] for i in range(a.rank)]
        )
        quot = scaled.quotient()
        order = quot.order
        assert order is not None
        sq_image = quotient_of_subgroups(chain.sq.sum(scaled), scaled)
        fingerprints.append(
            (n, order, quot.invariant_factors, sq_image.invariant_factors)
        )
    return InvariantProfile(
        additive=a.additive.invariant_factors,
        ann=_group_invariants(chain.ann),
        square=_group_invariants(chain.sq),
        delta=_group_invariants(chain.delta),
        k_ideal=_group_invariants(chain.k_ideal),
        l_ideal=_group_invariants(chain.l_ideal),
        m_quot=chain.m_quot.invariant_factors,
        n_quot=chain.n_quot.invariant_factors,
        mod_square=chain.sq.quotient().invariant_factors,
        fingerprints=tuple(fingerprints),
    )


# -- isomorphism search --------------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    matrix: IntMatrix
    verified: bool


@dataclass(frozen=True)
class IsoResult:
    kind: str  # "yes" | "no" | "unknown"
    witness: IsoWitness | None = None
    reason: str | None = None


def _coefficient_order(bound: int) -> list[int]:
    out = [0]
    for v in range(1, bound + 1):
        out.extend((v, -v))
    return out


def verify_iso_witness(a: FdzRing, b: FdzRing, h: IntMatrix) -> bool:
    """Full independent check that h defines a ring isomorphism A -> B."""
    if h.rows != a.rank or h.cols != b.rank:
        return False
    for i in range(a.rank):
        d = a.orders[i]
        if d and any(v for v in b.reduce([d * x for x in h.row(i)])):
            return False
    for i in range(a.rank):
        for j in range(a.rank):
            image = row_times_matrix(a.tensor[i][j], h)
            if b.reduce(image) != b.mul(h.row(i), h.row(j)):
                return False
    full = hermite_rows(
        list(h.data) + [list(r) for r in b.additive.relation_basis], b.rank
    )
    identity = tuple(tuple(1 if i == j else 0 for j in range(b.rank)) for i in range(b.rank))
    if full != identity:
        return False
    kernel = preimage_lattice(h, b.additive.relation_basis)
    return hermite_rows(kernel, a.rank) == a.additive.relation_basis


def _element_additive_order(b: FdzRing, vec: Sequence[int]) -> int:
    """Additive order within a diagonal presentation; 0 encodes infinite."""
    order = 1
    for x, d in zip(vec, b.orders):
        if d == 0:
            if x:
                return 0
        elif x % d:
            dd = d // _gcd(d, x % d)
            order = order * dd // _gcd(order, dd)
    return order


def _candidate_images(b: FdzRing, order: int, bound: int) -> list[Vec]:
    """Images for a generator of the given additive order (0 = infinite).

    An isomorphism preserves element orders exactly, so torsion generators
    only range over elements of equal order; free generators range over
    bounded coefficient vectors of infinite order.
    """
    values = _coefficient_order(bound)
    per_coord = []
    for d in b.orders:
        if d == 0:
            per_coord.append([0] if order else values)
        else:
            if order:
                per_coord.append([x for x in range(d) if (order * x) % d == 0])
            else:
                per_coord.append(list(range(d)))
    out = []
    for cand in itertools.product(*per_coord):
        if _element_additive_order(b, cand) == order:
            out.append(tuple(cand))
    return out


def _iso_witnesses(
    a: FdzRing, b: FdzRing, coeff_bound: int, max_nodes: int, seed: int = 0
) -> Iterator[IntMatrix | None]:
    """Yields verified witnesses; a final ``None`` means the budget ran out."""
    order_of = list(a.orders)
    gen_order = sorted(
        range(a.rank), key=lambda i: (order_of[i] == 0, order_of[i])
    )
    position = {idx: pos for pos, idx in enumerate(gen_order)}
    candidates = {
        d: _candidate_images(b, d, coeff_bound) for d in set(order_of)
    }
    if seed:
        # alternative deterministic orderings; 0 keeps smallest-first
        rng = random.Random(seed)
        for pool in candidates.values():
            rng.shuffle(pool)

    # a product constraint becomes checkable once its factors and the
    # support of its value are all assigned; fire each at that moment
    checks_at: list[list[tuple[int, int]]] = [[] for _ in gen_order]
    for p in range(a.rank):
        for q in range(a.rank):
            needed = {p, q} | {
                k for k in range(a.rank) if a.tensor[p][q][k]
            }
            checks_at[max(position[i] for i in needed)].append((p, q))

    images: dict[int, Vec] = {}
    budget = [max_nodes]
    free_gens = [i for i in gen_order if order_of[i] == 0]

    def partial_ok(pos: int, idx: int) -> bool:
        for p, q in checks_at[pos]:
            coeffs = a.tensor[p][q]
            acc = [0] * b.rank
            for k in range(a.rank):
                if coeffs[k]:
                    img = images[k]
                    for t in range(b.rank):
                        acc[t] += coeffs[k] * img[t]
            if b.reduce(acc) != b.mul(images[p], images[q]):
                return False
        if order_of[idx] == 0:
            # assigned free generators must stay independent modulo torsion
            rows = [
                [images[i][t] for t in range(b.rank) if b.orders[t] == 0]
                for i in free_gens
                if i in images
            ]
            if rows and len(hermite_rows(rows, len(rows[0]))) != len(rows):
                return False
        return True

    def dfs(pos: int) -> Iterator[IntMatrix]:
        if budget[0] <= 0:
            return
        if pos == len(gen_order):
            h = IntMatrix([images[i] for i in range(a.rank)], cols=b.rank)
            if verify_iso_witness(a, b, h):
                yield h
            return
        idx = gen_order[pos]
        for cand in candidates[order_of[idx]]:
            budget[0] -= 1
            if budget[0] <= 0:
                return
            images[idx] = cand
            if partial_ok(pos, idx):
                yield from dfs(pos + 1)
            del images[idx]

    yield from dfs(0)
    if budget[0] <= 0:
        yield None


def iso_search(
    a: FdzRing,
    b: FdzRing,
    coeff_bound: int = 5,
    max_nodes: int = 150_000,
    seed: int = 0,
) -> IsoResult:
    """Bounded search for a ring isomorphism A -> B.

    Profiles are compared first; a mismatch is a definitive ``no``.  The
    image search enumerates generator images with free coordinates bounded
    by ``coeff_bound`` (torsion coordinates always range over their full
    canonical span), smallest coefficients first.  For finite rings the
    search is exhaustive, so running out of candidates is a definitive
    ``no``; with free generators it is only ``unknown``.
    """
    mismatch = invariant_profile(a).first_mismatch(invariant_profile(b))
    if mismatch is not None:
        return IsoResult(kind="no", reason=f"invariant mismatch: {mismatch}")
    complete = all(d != 0 for d in a.orders)
    for witness in _iso_witnesses(a, b, coeff_bound, max_nodes, seed):
        if witness is None:
            return IsoResult(kind="unknown", reason="search budget exhausted")
        return IsoResult(kind="yes", witness=IsoWitness(matrix=witness, verified=True))
    if complete:
        return IsoResult(kind="no", reason="exhaustive search found no isomorphism")
    return IsoResult(kind="unknown", reason="bounded search exhausted")


def brute_force_isomorphic(a: FdzRing, b: FdzRing) -> bool:
    """Oracle: enumerate every additive bijection given by generator images."""
    if a.order is None or b.order is None:
        raise ValueError("brute force requires finite rings")
    if a.order != b.order:
        return False
    b_elements = list(b.elements())

    def candidates(d: int) -> list[Vec]:
        return [e for e in b_elements if b.scale(d, e) == b.zero()]

    from .groups import FgAbelianGroup

    per_gen = [candidates(d) for d in a.orders]
    for choice in itertools.product(*per_gen):
        h = IntMatrix(list(choice), cols=b.rank) if choice else IntMatrix([], cols=b.rank)
        # bijectivity: the images generate all of B
        generated = hermite_rows(
            list(choice) + [list(r) for r in b.additive.relation_basis], b.rank
        )
        if FgAbelianGroup(b.rank, generated).order != 1:
            continue
        ok = True
        for i in range(a.rank):
            for j in range(a.rank):
                image = row_times_matrix(a.tensor[i][j], h)
                if b.reduce(image) != b.mul(choice[i], choice[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


# -- embedding verification ----------------------------------------------------


@dataclass(frozen=True)
class EmbeddingReport:
    passed: bool
    checks: tuple[tuple[str, bool, str], ...]
    index: int | None
    torsion_quotient_order: int | None


def verify_embedding(a: FdzRing, b: FdzRing, h: IntMatrix) -> EmbeddingReport:
    """Check the finite-index embedding criterion for h: A -> B.

    Runs, in order: well-definedness, ring homomorphism, injectivity,
    finite index, coprimality of the index with |l(B)/k(B)|, restriction to
    an isomorphism of the saturated squares, and inducing an isomorphism of
    the annihilator quotients.  All checks are evaluated (no short
    circuit); the report lists each.
    """
    if h.rows != a.rank or h.cols != b.rank:
        raise ValueError("embedding matrix shape must be rank(A) x rank(B)")
    checks: list[tuple[str, bool, str]] = []
    chain_a = characteristic_ideals(a)
    chain_b = characteristic_ideals(b)

    well = all(
        not any(b.reduce([a.orders[i] * x for x in h.row(i)]))
        for i in range(a.rank)
        if a.orders[i]
    )
    checks.append(("well_defined", well, "orders map to zero"))

    hom = all(
        b.reduce(row_times_matrix(a.tensor[i][j], h)) == b.mul(h.row(i), h.row(j))
        for i in range(a.rank)
        for j in range(a.rank)
    )
    checks.append(("ring_homomorphism", hom, "tensor compatibility on generators"))

    kernel = hermite_rows(preimage_lattice(h, b.additive.relation_basis), a.rank)
    injective = kernel == a.additive.relation_basis
    checks.append(("injective", injective, "kernel lattice is trivial"))

    image = b.additive.subgroup(h.data)
    index = image.index()
    checks.append(("finite_index", index is not None, f"index {index}"))

    k = chain_b.n_quot.order
    assert k is not None
    coprime = index is not None and _gcd(index, k) == 1
    checks.append(("index_coprime", coprime, f"gcd(index, {k}) == 1"))

    delta_image = b.additive.subgroup(
        [row_times_matrix(row, h) for row in chain_a.delta.lift_basis]
    )
    delta_iso = injective and delta_image == chain_b.delta
    checks.append(
        ("saturated_square_isomorphism", delta_iso, "image of delta equals delta")
    )

    maps_ann = all(
        chain_b.ann.contains(row_times_matrix(row, h))
        for row in chain_a.ann.lift_basis
    )
    ann_preimage = hermite_rows(
        preimage_lattice(h, chain_b.ann.lift_basis), a.rank
    )
    ann_injective = ann_preimage == chain_a.ann.lift_basis
    covering = hermite_rows(
        list(h.data) + [list(r) for r in chain_b.ann.lift_basis], b.rank
    )
    identity = tuple(
        tuple(1 if i == j else 0 for j in range(b.rank)) for i in range(b.rank)
    )
    ann_surjective = covering == identity
    hat_iso = maps_ann and ann_injective and ann_surjective
    checks.append(
        (
            "annihilator_quotient_isomorphism",
            hat_iso,
            "induced map on the annihilator quotients is bijective",
        )
    )

    passed = all(ok for _, ok, _ in checks)
    return EmbeddingReport(
        passed=passed, checks=tuple(checks), index=index, torsion_quotient_order=k
    )


def _gcd(x: int, y: int) -> int:
    while y:
        x, y = y, x % y
    return x


# -- equivalence verdict --------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceResult:
    kind: str  # "equivalent" | "not_equivalent" | "unknown"
    witness: IsoWitness | None = None
    reason: str | None = None


def equivalence_verdict(
    a: FdzRing,
    b: FdzRing,
    coeff_bound: int = 5,
    max_nodes: int = 150_000,
    seed: int = 0,
) -> EquivalenceResult:
    """Decide elementary equivalence as far as the two criteria reach."""
    mismatch = invariant_profile(a).first_mismatch(invariant_profile(b))
    if mismatch is not None:
        return EquivalenceResult(
            kind="not_equivalent", reason=f"invariant mismatch: {mismatch}"
        )
    padded = iso_search(
        direct_product(z0_ring(), a),
        direct_product(z0_ring(), b),
        coeff_bound=coeff_bound,
        max_nodes=max_nodes,
        seed=seed,
    )
    if padded.kind == "yes":
        return EquivalenceResult(kind="equivalent", witness=padded.witness)
    if padded.kind == "no":
        # profiles agree, so a definitive refutation can only come from an
        # exhaustive finite search
        return EquivalenceResult(kind="not_equivalent", reason=padded.reason)
    return EquivalenceResult(kind="unknown", reason=padded.reason)
