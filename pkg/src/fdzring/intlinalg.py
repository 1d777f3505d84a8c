"""Exact integer matrix arithmetic: Smith and Hermite forms, linear solving.

Everything here works with arbitrary-precision Python ints.  Matrices are
immutable; reduction algorithms copy into lists, reduce with elementary
row/column operations (minimal-pivot selection to keep coefficients small),
and freeze the result.  Intended scale is small dense matrices (rank <= 12
plus the auxiliary systems built from them), so no sparsity or modular
arithmetic is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Vec = tuple[int, ...]


def _as_vec(values: Iterable[int]) -> Vec:
    return tuple(int(v) for v in values)


class IntMatrix:
    """An immutable rows x cols matrix of integers."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Sequence[Sequence[int]], cols: int | None = None):
        rows = tuple(_as_vec(r) for r in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged matrix data")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            width = cols
        if cols is not None and rows and cols != width:
            raise ValueError("column count disagrees with data")
        self.rows = len(rows)
        self.cols = width
        self.data = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @property
    def entries(self) -> Vec:
        """Row-major flattening."""
        return tuple(v for row in self.data for v in row)

    def row(self, i: int) -> Vec:
        return self.data[i]

    def column(self, j: int) -> Vec:
        return tuple(r[j] for r in self.data)

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return self.data[i][j]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.cols == other.cols
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.cols, self.data))

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.data]!r})"

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.data for v in row)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            [[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        out = []
        for i in range(self.rows):
            ri = self.data[i]
            out.append(
                [
                    sum(ri[k] * other.data[k][j] for k in range(self.cols))
                    for j in range(other.cols)
                ]
            )
        return IntMatrix(out, cols=other.cols)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        return self.mul(other)

    def diagonal(self) -> Vec:
        return tuple(self.data[i][i] for i in range(min(self.rows, self.cols)))

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("dimension mismatch in vertical stack")
        return IntMatrix(self.data + other.data, cols=self.cols)


def vec_add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))

def vec_sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))

def vec_neg(a: Vec) -> Vec:
    return tuple(-x for x in a)

def vec_scale(c: int, a: Vec) -> Vec:
    return tuple(c * x for x in a)

def row_times_matrix(v: Sequence[int], m: IntMatrix) -> Vec:
    if len(v) != m.rows:
        raise ValueError("dimension mismatch in vector-matrix product")
    return tuple(
        sum(v[i] * m.data[i][j] for i in range(m.rows)) for j in range(m.cols)
    )

def matrix_times_col(m: IntMatrix, v: Sequence[int]) -> Vec:
    if len(v) != m.cols:
        raise ValueError("dimension mismatch in matrix-vector product")
    return tuple(sum(row[j] * v[j] for j in range(m.cols)) for row in m.data)


@dataclass(frozen=True)
class SmithDecomposition:
    """U·A·V = D with U, V unimodular and D diagonal, d1 | d2 | ...

    The inverses of the transforms are accumulated during reduction, since
    several callers (saturation, solving) need them and unimodular inversion
    is cheapest when tracked alongside the elimination.
    """

    u: IntMatrix
    v: IntMatrix
    d: IntMatrix
    uinv: IntMatrix
    vinv: IntMatrix

    @property
    def diagonal(self) -> Vec:
        return self.d.diagonal()


def smith(a: IntMatrix) -> SmithDecomposition:
    """Smith normal form by elementary operations with minimal-pivot choice."""
    m, n = a.rows, a.cols
    d = [list(r) for r in a.data]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    uinv = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]
        for r in uinv:
            r[i], r[j] = r[j], r[i]

    def row_addmul(i, j, q):
        # row_i += q * row_j
        d[i] = [x + q * y for x, y in zip(d[i], d[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]
        for r in uinv:
            r[j] -= q * r[i]

    def row_negate(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]
        for r in uinv:
            r[i] = -r[i]

    def col_swap(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def col_addmul(i, j, q):
        # col_i += q * col_j
        for r in d:
            r[i] += q * r[j]
        for r in v:
            r[i] += q * r[j]
        vinv[j] = [x - q * y for x, y in zip(vinv[j], vinv[i])]

    for t in range(min(m, n)):
        while True:
            # minimal nonzero pivot in the remaining block
            pivot = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    val = abs(d[i][j])
                    if val and (best is None or val < best):
                        best = val
                        pivot = (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            if d[t][t] < 0:
                row_negate(t)
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // p
                    row_addmul(i, t, -q)
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // p
                    col_addmul(j, t, -q)
                    if d[t][j]:
                        dirty = True
            if dirty:
                continue
            # pivot now alone in its row and column; enforce divisibility
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if d[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_addmul(t, offender, 1)

    return SmithDecomposition(
        u=IntMatrix(u, cols=m),
        v=IntMatrix(v, cols=n),
        d=IntMatrix(d, cols=n),
        uinv=IntMatrix(uinv, cols=m),
        vinv=IntMatrix(vinv, cols=n),
    )


def hermite_rows(rows: Iterable[Sequence[int]], width: int) -> tuple[Vec, ...]:
    """Canonical row Hermite basis of the lattice spanned by ``rows``.

    Pivots are positive, entries above a pivot are reduced into [0, pivot),
    zero rows are dropped.  Two row sets span the same lattice iff their
    Hermite bases are equal, which is what subgroup canonicalization relies
    on.
    """
    work = [list(_as_vec(r)) for r in rows if any(r)]
    for r in work:
        if len(r) != width:
            raise ValueError("row width mismatch")
    pivots: list[list[int]] = []
    for col in range(width):
        live = [r for r in work if r[col] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            base = live[0]
            for r in live[1:]:
                q = r[col] // base[col]
                if q:
                    for k in range(col, width):
                        r[k] -= q * base[k]
            live = [r for r in live if r[col] != 0]
        row = live[0]
        work = [r for r in work if r is not row and any(r[col:])]
        if row[col] < 0:
            for k in range(col, width):
                row[k] = -row[k]
        for p in pivots:
            if p[col]:
                q = p[col] // row[col]
                if q:
                    for k in range(col, width):
                        p[k] -= q * row[k]
        pivots.append(row)
    return tuple(tuple(r) for r in pivots)


def hermite_reduce(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> Vec:
    """Canonical representative of ``vec`` modulo the Hermite basis rows."""
    out = list(_as_vec(vec))
    for row in basis:
        col = next((j for j, x in enumerate(row) if x), None)
        if col is None:
            continue
        q = out[col] // row[col]
        if q:
            for k in range(col, len(out)):
                out[k] -= q * row[k]
    return tuple(out)


def lattice_contains(basis: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    return all(x == 0 for x in hermite_reduce(basis, vec))


def left_kernel(a: IntMatrix) -> tuple[Vec, ...]:
    """Basis rows for {y : y·A = 0}."""
    dec = smith(a)
    diag = dec.diagonal
    free = [
        i
        for i in range(a.rows)
        if i >= len(diag) or diag[i] == 0
    ]
    return tuple(dec.u.row(i) for i in free)


def right_kernel(a: IntMatrix) -> tuple[Vec, ...]:
    """Basis (as vectors) for {x : A·x = 0}."""
    return left_kernel(a.transpose())


def solve(a: IntMatrix, b: Sequence[int]) -> tuple[Vec, tuple[Vec, ...]] | None:
    """Solve A·x = b over the integers.

    Returns ``(particular, kernel_basis)`` or ``None`` when no integer
    solution exists.  The kernel basis spans all homogeneous solutions.
    """
    if len(b) != a.rows:
        raise ValueError("right-hand side length mismatch")
    dec = smith(a)
    c = matrix_times_col(dec.u, b)
    diag = dec.diagonal
    y = [0] * a.cols
    free: list[int] = []
    for j in range(a.cols):
        dj = diag[j] if j < len(diag) else 0
        if dj == 0:
            free.append(j)
    for i in range(a.rows):
        di = diag[i] if i < len(diag) else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            y[i] = c[i] // di
    x = matrix_times_col(dec.v, y)
    kernel = tuple(dec.v.column(j) for j in free)
    return x, kernel


def solve_congruences(
    equations: Sequence[Sequence[int]],
    moduli: Sequence[int],
    rhs: Sequence[int] | None = None,
    unknowns: int | None = None,
) -> tuple[Vec, tuple[Vec, ...]] | None:
    """Solve a system of simultaneous congruences in z.

    Each equation row ``e`` with modulus ``m`` imposes  e·z = rhs_e (mod m),
    where modulus 0 means exact equality.  Returns a particular solution and
    a basis of the homogeneous solution lattice, or ``None``.  With
    ``rhs=None`` the zero solution is returned as the particular part, which
    turns this into a kernel computation.
    """
    eqs = [list(_as_vec(e)) for e in equations]
    if len(eqs) != len(moduli):
        raise ValueError("one modulus per equation required")
    if eqs:
        nunk = len(eqs[0])
    elif unknowns is not None:
        nunk = unknowns
    else:
        raise ValueError("unknown count required for an empty system")
    if any(len(e) != nunk for e in eqs):
        raise ValueError("ragged equation rows")
    if not eqs:
        basis = tuple(
            tuple(1 if i == j else 0 for j in range(nunk)) for i in range(nunk)
        )
        return tuple([0] * nunk), basis
    aux = [i for i, m in enumerate(moduli) if m != 0]
    cols = nunk + len(aux)
    rows = []
    for r, eq in enumerate(eqs):
        row = eq + [0] * len(aux)
        if moduli[r]:
            row[nunk + aux.index(r)] = -int(moduli[r])
        rows.append(row)
    mat = IntMatrix(rows, cols=cols)
    if rhs is None:
        kern = right_kernel(mat)
        return tuple([0] * nunk), tuple(k[:nunk] for k in kern)
    res = solve(mat, rhs)
    if res is None:
        return None
    part, kern = res
    return part[:nunk], tuple(k[:nunk] for k in kern)


def preimage_lattice(
    w: IntMatrix, target_basis: Sequence[Sequence[int]]
) -> tuple[Vec, ...]:
    """Basis rows of {x : x·W lies in the lattice spanned by target_basis}."""
    tb = [list(_as_vec(r)) for r in target_basis]
    rows = [list(r) for r in w.data] + [[-v for v in r] for r in tb]
    stacked = IntMatrix(rows, cols=w.cols) if rows else IntMatrix([], cols=w.cols)
    kern = left_kernel(stacked)
    return hermite_rows([k[: w.rows] for k in kern], w.rows)
