"""Fixture complexes.

Hand elimination for the torus (chi = (-1, 0), basis e_t, e_s of C_1):

    d2 = [s - 1, 1 - t],  d1 = [t - 1; s - 1]

The entry 1 - t of d2 is 1 - a with a = t, ||a|| < 1, so F cancels e_s.
Clearing row F leaves d1 = [t - 1] on the surviving e_t, which is
-(1 - t), again a unit; cancelling it against the vertex empties the complex.
The circle is the last step on its own.  For T^3 the same two kinds of
pivot, 1 - t1 and t1 - 1, appear in every degree.
"""

import random

from .chargroup import Character, GroupSpec, Scalar
from .complexes import BasedComplex, apply_complex_move, direct_sum, validate
from .matrix import AddLeftMultiple, AddRightMultiple, NovMatrix, SwapPair
from .series import NovikovRing


def _ring(kind, names, weights, orientation=None):
    return NovikovRing(GroupSpec(kind, len(names), orientation, tuple(names)),
                       Character(tuple(Scalar.coerce(w) for w in weights)))


def circle(weight=-1, ring=None):
    R = ring or NovikovRing.laurent(weight)
    t, one = R.gen(0), R.one()
    return BasedComplex(R, (1, 1), {1: NovMatrix.from_rows(R, [[t - one]])},
                        labels=(("v",), ("e",)))


def torus2(weights=(-1, 0), ring=None):
    R = ring or _ring("free_abelian", ("t", "s"), weights)
    t, s, one = R.gen(0), R.gen(1), R.one()
    d1 = NovMatrix.from_rows(R, [[t - one], [s - one]])
    d2 = NovMatrix.from_rows(R, [[s - one, one - t]])
    return BasedComplex(R, (1, 2, 1), {1: d1, 2: d2},
                        labels=(("v",), ("e_t", "e_s"), ("F",)))


def torus3(weights=(-1, 0, 0), ring=None):
    R = ring or _ring("free_abelian", ("t1", "t2", "t3"), weights)
    t1, t2, t3, one = R.gen(0), R.gen(1), R.gen(2), R.one()
    z = R.zero()
    d1 = NovMatrix.from_rows(R, [[t1 - one], [t2 - one], [t3 - one]])
    # faces f12, f13, f23 over edges e1, e2, e3
    d2 = NovMatrix.from_rows(R, [[t2 - one, one - t1, z],
                                 [t3 - one, z, one - t1],
                                 [z, t3 - one, one - t2]])
    d3 = NovMatrix.from_rows(R, [[t3 - one, one - t2, t1 - one]])
    return BasedComplex(R, (1, 3, 3, 1), {1: d1, 2: d2, 3: d3},
                        labels=(("v",), ("e1", "e2", "e3"), ("f12", "f13", "f23"), ("c",)))


def random_ring(rng, rank=None):
    """Z or Z^2 with a character whose generator values are 0 or negative."""
    rank = rank or rng.choice((1, 2))
    if rank == 1:
        return NovikovRing.laurent(-1)
    return _ring("free_abelian", ("t", "s"), (-1, rng.choice((0, -1))))


def random_small(ring, rng, terms=2, allow_zero=False):
    """A short exact series with every term of chi-value <= 0."""
    group = ring.group
    out = ring.zero()
    for _ in range(rng.randint(0 if allow_zero else 1, terms)):
        while True:
            g = tuple(rng.randint(-1, 2) for _ in range(group.rank)) if group.abelian else \
                group.reduce(tuple(rng.choice((1, -1)) * rng.randint(1, group.rank)
                                   for _ in range(rng.randint(0, 2))))
            if not ring.chi_of(g) > 0:
                break
        out = out + ring.monomial(g, rng.choice((1, -1, 2, -2, 3)))
    return out


def random_contracting(ring, rng, terms=2):
    """Exact series with every term of chi-value < 0."""
    group = ring.group
    step = group.generator(0)
    out = ring.zero()
    for _ in range(rng.randint(1, terms)):
        g = group.identity
        if group.rank > 1:
            g = group.generator(1, rng.randint(-1, 1))
        for _ in range(rng.randint(1, 3)):
            g = group.mul(g, step)
        out = out + ring.monomial(g, rng.choice((1, -1, 2, -3)))
    return out


def random_complex(seed=0, ring=None, top=3, pairs=3, moves=12):
    """Direct sum of stabilized pairs scrambled by random exact row/column moves.

    Units are +-g(1 - a) with ||a|| < 1 and monomial g of chi-value 0, so
    every boundary has log-norm 0 and the complex is acyclic.
    """
    rng = random.Random(seed)
    R = ring or random_ring(rng)
    C = BasedComplex.empty(R, top)
    group = R.group
    zero_chi = [group.identity]
    if group.rank > 1 and R.chi.weights[1].sign() == 0:
        zero_chi += [group.generator(1), group.generator(1, -1)]
    for _ in range(pairs):
        i = rng.randint(0, top - 1)
        a = random_contracting(R, rng)
        u = R.monomial(rng.choice(zero_chi), rng.choice((1, -1))) * (R.one() - a)
        part = BasedComplex(R, tuple(1 if k in (i, i + 1) else 0 for k in range(top + 1)),
                            {i + 1: NovMatrix(R, [[u]], 1, 1)})
        C = direct_sum(C, part)
    for _ in range(moves):
        step = random_move(C, rng)
        if step is not None:
            C = apply_complex_move(C, *step)
    assert validate(C).ok
    return C


def random_move(C, rng):
    """A random exact (degree, move) on some boundary, or None if all are 1 x 1."""
    R = C.ring
    degrees = [k for k in range(1, C.top + 1) if C.rank(k) > 1 or C.rank(k - 1) > 1]
    if not degrees:
        return None
    k = rng.choice(degrees)
    left = C.rank(k) > 1
    right = C.rank(k - 1) > 1
    if left and right:
        left = rng.random() < 0.5
    n = C.rank(k) if left else C.rank(k - 1)
    i, j = rng.sample(range(n), 2)
    side = "left" if left else "right"
    if rng.random() < 0.15:
        return k, SwapPair(i, j, side)
    cls = AddLeftMultiple if left else AddRightMultiple
    return k, cls(i, j, random_small(R, rng))


CORPUS = {
    "circle": circle,
    "torus2": torus2,
    "torus3": torus3,
    "random": random_complex,
}


def corpus(name, **params):
    try:
        make = CORPUS[name]
    except KeyError:
        raise KeyError(f"unknown corpus entry {name!r}; known: {', '.join(CORPUS)}") from None
    return make(**params)
