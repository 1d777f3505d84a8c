"""The named example rings used across the test and CLI corpora."""

from __future__ import annotations

from .rings import FdzRing, direct_product, reduce_mod_n, z0_ring


def z_ring() -> FdzRing:
    """The integers with the usual product."""
    return FdzRing((0,), (((1,),),))


def twoz_ring() -> FdzRing:
    """The ring 2Z: a single generator e with e·e = 2e."""
    return FdzRing((0,), (((2,),),))


def zxz0_ring() -> FdzRing:
    """Z x Z0: usual product on the first factor, zero on the second."""
    return direct_product(z_ring(), z0_ring())


def w_ring() -> FdzRing:
    """Rank 3 with orders (0, 0, 2): e1·e1 = t, all other products zero.

    The smallest ring whose l/k quotient is nontrivial (isomorphic to Z/2),
    which makes it the standard non-regular example.
    """
    zero = (0, 0, 0)
    return FdzRing(
        (0, 0, 2),
        (
            ((0, 0, 1), zero, zero),
            (zero, zero, zero),
            (zero, zero, zero),
        ),
    )


def zx2_ring() -> FdzRing:
    """Z[x]/(x^2) as a rank-2 ring: e1 the unity, e2 squaring to zero."""
    return FdzRing(
        (0, 0),
        (
            ((1, 0), (0, 1)),
            ((0, 1), (0, 0)),
        ),
    )


def z_mod(n: int) -> FdzRing:
    """Z/n with the usual product."""
    return reduce_mod_n(z_ring(), n)


NAMED_RINGS = {
    "z": z_ring,
    "twoz": twoz_ring,
    "z0": z0_ring,
    "zxz0": zxz0_ring,
    "w": w_ring,
    "zx2": zx2_ring,
}
