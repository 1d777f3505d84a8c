"""Classification verdicts: tame/QFA, rigidity, super-tameness, bi-interpretability.

The spectrum side works on a scalar ring P (commutative, associative,
unital).  Idempotents are found exactly: the torsion part is finite and
enumerable; the torsion-free quotient is taken into a rational algebra,
where the nilradical is the radical of the trace form, the semisimple
quotient is split by factoring the minimal polynomial of a primitive
element, and the primitive idempotents are Hensel-lifted back through the
nilpotents.  Only idempotents with integral coordinates survive, and each
is re-lifted against the torsion by finite enumeration.

The punctured-spectrum connectivity rule is deliberately isolated in
``spec0_connected_rule``: connected iff at most one indecomposable factor
is infinite (finite factors only contribute isolated closed points, which
the puncture removes).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import Poly, Symbol

from .bilinear import BilinearMapError, induced_bilinear_map, pa_ring, pf_ring
from .intlinalg import IntMatrix, Vec, row_times_matrix
from .rings import (
    FdzRing,
    SubringPresentation,
    characteristic_ideals,
    predicates,
    quotient_ring,
    subring_presentation,
    torsion_subgroup,
)

DEGREE_BOUND = 12

YES = "yes"
NO = "no"
UNKNOWN = "unknown"
NOT_APPLICABLE = "not_applicable"

TAG_TAME_DEFINITION = "def:tame"
TAG_REGULAR_DEFINITION = "def:regular"
TAG_MAIN1 = "thm:Main1"
TAG_MAIN2 = "thm:main2"
TAG_MAIN3 = "thm:Main3"
TAG_RIGID = "cor:1.8"
TAG_BIINT_QFA = "thm:1.4"
TAG_SPEC0 = "spec0-rule"
TAG_PF_UNDEFINED = "pf-undefined"
TAG_FINITE = "nies-qfa-infinite"
TAG_OPEN = "outside-criteria"

CITATION_TAGS = frozenset(
    {
        TAG_TAME_DEFINITION,
        TAG_REGULAR_DEFINITION,
        TAG_MAIN1,
        TAG_MAIN2,
        TAG_MAIN3,
        TAG_RIGID,
        TAG_BIINT_QFA,
        TAG_SPEC0,
        TAG_PF_UNDEFINED,
        TAG_FINITE,
        TAG_OPEN,
    }
)


class FactorizationIncomplete(Exception):
    """The exact spectrum machinery gave up (degree bound exceeded)."""


class ScalarRingRequired(ValueError):
    pass


def _require_scalar(p: FdzRing) -> Vec:
    if not p.is_commutative() or not p.is_associative():
        raise ScalarRingRequired("commutative associative ring required")
    unity = p.unity()
    if unity is None:
        raise ScalarRingRequired("unital ring required")
    return unity


# -- rational polynomial helpers (coefficients lowest-first) ----------------


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_divmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and _poly_trim(list(a)):
        a = _poly_trim(a)
        if len(a) < len(b):
            break
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for i, y in enumerate(b):
            a[shift + i] -= c * y
        a = _poly_trim(a)
    return _poly_trim(q), _poly_trim(list(a))


def _poly_egcd(a, b):
    # returns (g, u, v) with u*a + v*b = g, g monic
    r0, r1 = _poly_trim(list(a)), _poly_trim(list(b))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([x - y for x, y in itertools.zip_longest(s0, _poly_mul(q, s1), fillvalue=Fraction(0))])
        t0, t1 = t1, _poly_trim([x - y for x, y in itertools.zip_longest(t0, _poly_mul(q, t1), fillvalue=Fraction(0))])
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return ([c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0])


# -- exact rational algebra -------------------------------------------------


class _RationalAlgebra:
    """A finite-dimensional commutative Q-algebra from an integer tensor."""

    def __init__(self, tensor: Sequence[Sequence[Sequence[int]]], unity: Sequence[int]):
        self.dim = len(tensor)
        self.tensor = tensor
        self.unity = [Fraction(v) for v in unity]

    def mul(self, a, b):
        out = [Fraction(0)] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                f = x * y
                for k, c in enumerate(self.tensor[i][j]):
                    if c:
                        out[k] += f * c
        return out

    def mult_operator(self, a):
        return [self.mul(a, [Fraction(1) if t == i else Fraction(0) for t in range(self.dim)]) for i in range(self.dim)]

    def trace_of_mult(self, a) -> Fraction:
        op = self.mult_operator(a)
        return sum((op[i][i] for i in range(self.dim)), Fraction(0))


def _express_over(rows: list[list[Fraction]], target: list[Fraction]) -> list[Fraction] | None:
    """Coefficients x with sum x_i·rows_i = target, or None."""
    if not rows:
        return [] if all(v == 0 for v in target) else None
    ncols = len(rows)
    n = len(target)
    aug = [[rows[i][j] for i in range(ncols)] + [target[j]] for j in range(n)]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        scale = aug[r][c]
        aug[r] = [v / scale for v in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [v - f * w for v, w in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    x = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    for j in range(n):
        if sum(rows[i][j] * x[i] for i in range(ncols)) != target[j]:
            return None
    return x


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    work = [r[:] for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        scale = work[r][col]
        work[r] = [x / scale for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def _free_idempotents(ring: FdzRing) -> list[Vec]:
    """All idempotents of a torsion-free scalar ring, via the Q-algebra."""
    dim = ring.rank
    if dim == 0:
        return [()]
    if dim > DEGREE_BOUND:
        raise FactorizationIncomplete(
            f"free rank {dim} exceeds the factorization degree bound {DEGREE_BOUND}"
        )
    unity = ring.unity()
    assert unity is not None
    alg = _RationalAlgebra(ring.tensor, unity)
    # nilradical = radical of the trace form
    gram = [
        [alg.trace_of_mult([Fraction(v) for v in ring.tensor[i][j]]) for j in range(dim)]
        for i in range(dim)
    ]
    nil_rows = _nullspace(gram)
    nil_ech, nil_pivots = _echelon(nil_rows) if nil_rows else ([], [])
    complement = [c for c in range(dim) if c not in nil_pivots]

    def project(vec):
        out = vec[:]
        for row, col in zip(nil_ech, nil_pivots):
            f = out[col]
            if f != 0:
                out = [x - f * y for x, y in zip(out, row)]
        return [out[c] for c in complement]

    sdim = len(complement)
    assert sdim > 0, "a unital algebra cannot be entirely nilpotent"

    def embed(svec):
        out = [Fraction(0)] * dim
        for c, v in zip(complement, svec):
            out[c] = v
        return out

    class _SemiSimple:
        def mul(self, a, b):
            return project(alg.mul(embed(a), embed(b)))

    ss = _SemiSimple()
    ss_unity = project(list(alg.unity))

    def ss_minpoly(a):
        rows: list[list[Fraction]] = []
        power = list(ss_unity)
        while True:
            dep = _express_over(rows, power)
            if dep is not None:
                return [-d for d in dep] + [Fraction(1)]
            rows.append(list(power))
            power = ss.mul(power, a)

    primitive = None
    candidates = [
        [Fraction(1) if i == t else Fraction(0) for t in range(sdim)]
        for i in range(sdim)
    ]
    for t in range(1, 64):
        candidates.append([Fraction(t) ** i for i in range(sdim)])
    for cand in candidates:
        mp = ss_minpoly(cand)
        if len(mp) - 1 == sdim:
            primitive = cand
            minpoly = mp
            break
    if primitive is None:
        raise FactorizationIncomplete("no primitive element found for the semisimple part")

    factors = _factor_rational_poly(minpoly)
    prim_idems_ss = []
    for f in factors:
        g, _ = _poly_divmod(minpoly, f)
        gcd, u, _ = _poly_egcd(g, f)
        assert len(gcd) == 1, "minimal polynomial of an etale algebra must be squarefree"
        _, e_poly = _poly_divmod(_poly_mul(u, g), minpoly)
        # evaluate at the primitive element inside the semisimple quotient
        val = [Fraction(0)] * sdim
        power = list(ss_unity)
        for c in e_poly:
            if c:
                val = [x + c * y for x, y in zip(val, power)]
            power = ss.mul(power, primitive)
        prim_idems_ss.append(val)

    # lift to the full rational algebra through the nilradical
    lifted = []
    for e_ss in prim_idems_ss:
        e = embed(e_ss)
        for _ in range(64):
            e2 = alg.mul(e, e)
            if e2 == e:
                break
            e3 = alg.mul(e2, e)
            e = [3 * a - 2 * b for a, b in zip(e2, e3)]
        else:
            raise FactorizationIncomplete("idempotent lifting did not converge")
        lifted.append(e)
    return _lift_subset_sums(alg, lifted, dim)


def _lift_subset_sums(alg, primitives, dim) -> list[Vec]:
    out = set()
    for mask in range(1 << len(primitives)):
        total = [Fraction(0)] * dim
        for i, e in enumerate(primitives):
            if mask >> i & 1:
                total = [a + b for a, b in zip(total, e)]
        if all(v.denominator == 1 for v in total):
            out.add(tuple(int(v) for v in total))
    return sorted(out)


def _nullspace(matrix: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(matrix)
    if n == 0:
        return []
    ech, pivots = _echelon([list(map(Fraction, row)) for row in matrix])
    basis = []
    free_cols = [c for c in range(n) if c not in pivots]
    for fc in free_cols:
        vec = [Fraction(0)] * n
        vec[fc] = Fraction(1)
        for row, pc in zip(ech, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def _factor_rational_poly(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    """Monic irreducible factors over Q of a monic rational polynomial."""
    x = Symbol("x")
    denom = 1
    for c in coeffs:
        denom = denom * c.denominator // _int_gcd(denom, c.denominator)
    ints = [int(c * denom) for c in coeffs]
    poly = Poly(list(reversed(ints)), x)
    _, factor_list = poly.factor_list()
    out = []
    for fac, mult in factor_list:
        assert mult == 1, "expected a squarefree minimal polynomial"
        fac_coeffs = [Fraction(int(c)) for c in reversed(fac.all_coeffs())]
        lead = fac_coeffs[-1]
        out.append([c / lead for c in fac_coeffs])
    return out


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# -- idempotents and spectrum -------------------------------------------------


def idempotents(p: FdzRing) -> list[Vec]:
    """The complete finite set of idempotents of a scalar ring."""
    _require_scalar(p)
    torsion = torsion_subgroup(p)
    torsion_group, torsion_basis = torsion.as_group()
    if torsion_group.order is None or torsion_group.order > 4096:
        raise FactorizationIncomplete("torsion part too large to enumerate")
    torsion_elements = [
        p.reduce(row_times_matrix(coords, torsion_basis))
        for coords in torsion_group.elements()
    ]
    if all(d != 0 for d in p.orders):
        return sorted(e for e in p.elements() if p.mul(e, e) == e)
    free = quotient_ring(p, torsion)
    free_idems = _free_idempotents(free.ring)
    found = set()
    for ebar in free_idems:
        base = p.reduce(row_times_matrix(ebar, free.lift))
        for t in torsion_elements:
            cand = p.add(base, t)
            if p.mul(cand, cand) == cand:
                found.add(cand)
    return sorted(found)


@dataclass(frozen=True)
class SpectrumAnalysis:
    idempotents: tuple[Vec, ...]
    primitive_idempotents: tuple[Vec, ...]
    factors: tuple[FdzRing, ...]
    factor_presentations: tuple[SubringPresentation, ...]
    infinite_factor_count: int
    spec0_connected: str
    product_map: IntMatrix


def spec0_connected_rule(infinite_factor_count: int) -> str:
    """Connectivity of the punctured spectrum from the factor census."""
    return YES if infinite_factor_count <= 1 else NO


def indecomposable_factors(p: FdzRing) -> SpectrumAnalysis:
    unity = _require_scalar(p)
    idems = idempotents(p)
    nonzero = [e for e in idems if any(e)]
    primitives = []
    for e in nonzero:
        if not any(f != e and p.mul(f, e) == f for f in nonzero):
            primitives.append(e)
    # primitive idempotents are orthogonal and sum to unity
    total = p.zero()
    for i, e in enumerate(primitives):
        total = p.add(total, e)
        for f in primitives[i + 1 :]:
            assert p.mul(e, f) == p.zero(), "primitive idempotents must be orthogonal"
    assert total == unity, "primitive idempotents must sum to the unity"
    presentations = []
    for e in primitives:
        gens = [p.mul(e, p.generator(i)) for i in range(p.rank)]
        presentations.append(subring_presentation(p, p.subgroup(gens)))
    factors = tuple(pres.ring for pres in presentations)
    infinite = sum(1 for f in factors if f.order is None)
    rows = []
    for i in range(p.rank):
        row: list[int] = []
        for e, pres in zip(primitives, presentations):
            row.extend(pres.express(p.mul(p.generator(i), e)))
        rows.append(row)
    width = sum(f.rank for f in factors)
    return SpectrumAnalysis(
        idempotents=tuple(idems),
        primitive_idempotents=tuple(primitives),
        factors=factors,
        factor_presentations=tuple(presentations),
        infinite_factor_count=infinite,
        spec0_connected=spec0_connected_rule(infinite),
        product_map=IntMatrix(rows, cols=width),
    )


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    infinite: bool
    tame: bool
    regular: bool
    qfa: str
    first_order_rigid_hint: str
    super_tame: str
    bi_interpretable: str
    justifications: tuple[str, ...]


def classify_ring(a: FdzRing, use_pa_ring: bool = False) -> ClassificationReport:
    chain = characteristic_ideals(a)
    preds = predicates(a)
    infinite = a.order is None
    justify: list[str] = [
        f"tame={'yes' if preds.tame else 'no'}: {TAG_TAME_DEFINITION}",
        f"regular={'yes' if preds.regular else 'no'}: {TAG_REGULAR_DEFINITION}",
    ]

    if infinite:
        qfa = YES if preds.tame else NO
        justify.append(f"qfa={qfa}: {TAG_MAIN1}")
    else:
        qfa = NOT_APPLICABLE
        justify.append(f"qfa={qfa}: {TAG_FINITE}")

    rigid = YES if preds.regular else UNKNOWN
    justify.append(f"first_order_rigid_hint={rigid}: {TAG_RIGID}")

    ann_is_finite = chain.ann.as_group()[0].order is not None
    delta_is_all = chain.delta.is_full()

    spec0 = None
    spec0_tag = TAG_SPEC0
    try:
        if use_pa_ring:
            scalar = pa_ring(a)
        else:
            scalar = pf_ring(induced_bilinear_map(a).map)
        try:
            spectrum = indecomposable_factors(scalar.ring)
            spec0 = spectrum.spec0_connected
        except FactorizationIncomplete:
            spec0 = UNKNOWN
    except BilinearMapError:
        spec0 = None
        spec0_tag = TAG_PF_UNDEFINED

    side = ann_is_finite or delta_is_all
    if spec0 is None:
        super_tame = NO
    elif spec0 == UNKNOWN:
        super_tame = UNKNOWN if side else NO
    elif spec0 == YES and side:
        super_tame = YES
    else:
        super_tame = NO
    justify.append(f"super_tame={super_tame}: {spec0_tag}")

    if not infinite:
        bi = NOT_APPLICABLE
        justify.append(f"bi_interpretable={bi}: {TAG_FINITE}")
    elif super_tame == YES:
        bi = YES
        justify.append(f"bi_interpretable={bi}: {TAG_MAIN3}")
    elif not ann_is_finite and not delta_is_all:
        bi = NO
        justify.append(f"bi_interpretable={bi}: {TAG_MAIN2}")
    elif qfa == NO:
        bi = NO
        justify.append(f"bi_interpretable={bi}: {TAG_BIINT_QFA}")
    else:
        bi = UNKNOWN
        justify.append(f"bi_interpretable={bi}: {TAG_OPEN}")

    return ClassificationReport(
        infinite=infinite,
        tame=preds.tame,
        regular=preds.regular,
        qfa=qfa,
        first_order_rigid_hint=rigid,
        super_tame=super_tame,
        bi_interpretable=bi,
        justifications=tuple(justify),
    )
