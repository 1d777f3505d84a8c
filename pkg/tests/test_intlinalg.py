import random

from fdzring.intlinalg import (
    IntMatrix,
    hermite_reduce,
    hermite_rows,
    lattice_contains,
    left_kernel,
    preimage_lattice,
    smith,
    solve,
    solve_congruences,
)


def check_smith(a):
    dec = smith(a)
    assert dec.u.mul(a).mul(dec.v) == dec.d
    assert dec.u.mul(dec.uinv) == IntMatrix.identity(a.rows)
    assert dec.v.mul(dec.vinv) == IntMatrix.identity(a.cols)
    diag = dec.diagonal
    for i in range(len(diag)):
        assert diag[i] >= 0
        if i and diag[i - 1]:
            assert diag[i] % diag[i - 1] == 0
        if i and diag[i - 1] == 0:
            assert diag[i] == 0
    return dec


def test_smith_identity_and_zero():
    assert check_smith(IntMatrix.identity(2)).diagonal == (1, 1)
    assert check_smith(IntMatrix.zero(2, 3)).diagonal == (0, 0)


def test_smith_divisibility_example():
    assert check_smith(IntMatrix([[2, 4], [6, 8]])).diagonal == (2, 4)


def test_smith_random():
    rng = random.Random(11)
    for _ in range(150):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        check_smith(IntMatrix([[rng.randint(-20, 20) for _ in range(n)] for _ in range(m)]))


def test_solve_basic():
    x, kernel = solve(IntMatrix([[2]]), [4])
    assert x == (2,) and kernel == ()
    assert solve(IntMatrix([[2]]), [3]) is None


def test_solve_with_kernel():
    res = solve(IntMatrix([[1, 2], [2, 4]]), [3, 6])
    assert res is not None
    x, kernel = res
    # substitute and check both rows
    assert x[0] + 2 * x[1] == 3 and 2 * x[0] + 4 * x[1] == 6
    assert len(kernel) == 1
    k = kernel[0]
    assert k[0] + 2 * k[1] == 0 and (k[0], k[1]) != (0, 0)


def test_solve_random_consistency():
    rng = random.Random(5)
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = IntMatrix([[rng.randint(-6, 6) for _ in range(n)] for _ in range(m)])
        x = [rng.randint(-5, 5) for _ in range(n)]
        b = [sum(a[(i, j)] * x[j] for j in range(n)) for i in range(m)]
        res = solve(a, b)
        assert res is not None
        got, kernel = res
        assert [sum(a[(i, j)] * got[j] for j in range(n)) for i in range(m)] == b
        for k in kernel:
            assert all(sum(a[(i, j)] * k[j] for j in range(n)) == 0 for i in range(m))


def test_hermite_canonical():
    assert hermite_rows([(2, 0), (0, 3)], 2) == ((2, 0), (0, 3))
    assert hermite_rows([(2, 2)], 2) == ((2, 2),)
    # same lattice, different generators -> same canonical basis
    assert hermite_rows([(2, 0), (2, 3)], 2) == hermite_rows([(4, 3), (2, 3), (2, 0)], 2)


def test_hermite_reduce_membership():
    basis = hermite_rows([(2, 0), (0, 3)], 2)
    assert hermite_reduce(basis, (4, 6)) == (0, 0)
    assert hermite_reduce(basis, (5, 7)) == (1, 1)
    assert lattice_contains(basis, (2, 3))
    assert not lattice_contains(basis, (1, 0))


def test_left_kernel():
    rows = left_kernel(IntMatrix([[1, 2], [2, 4]]))
    assert len(rows) == 1
    y = rows[0]
    assert y[0] * 1 + y[1] * 2 == 0 and y[0] * 2 + y[1] * 4 == 0


def test_solve_congruences():
    # x = 1 mod 2 and x = 2 mod 3 -> x = 5 mod 6
    res = solve_congruences([[1], [1]], [2, 3], rhs=[1, 2])
    assert res is not None
    x, kernel = res
    assert x[0] % 2 == 1 and x[0] % 3 == 2
    assert kernel and kernel[0][0] % 6 == 0


def test_preimage_lattice():
    w = IntMatrix([[2]])
    assert preimage_lattice(w, [(4,)]) == ((2,),)
    # {x : x * [1 1] in span{(2, 0), (0, 2)}} = 2Z
    w2 = IntMatrix([[1, 1]])
    assert preimage_lattice(w2, [(2, 0), (0, 2)]) == ((2,),)
