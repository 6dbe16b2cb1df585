"""Seeding a prescribed unit into an acyclic complex and reading it back.

realize_torsion adds a summand C(1 - b) to the host.  Minimizing cancels it
again, and the accumulated unit of the move log recovers 1 - b up to
inversion.  A second summand multiplies in.
"""

from novikov import BasedComplex, NovikovRing, minimize
from novikov.complexes import n_equiv
from novikov.corpus import corpus
from novikov.torsion import realize_torsion, torsion_of_log


def accumulated(C, L):
    out, log, report = minimize(C, L=L)
    print(f"  minimized to ranks {report['final_ranks']} ({report['status']})")
    return torsion_of_log(log, L).unit


def main():
    R = NovikovRing.laurent(-1)
    t = R.gen(0)
    L = -6

    C, seeded = realize_torsion(2 * t, BasedComplex.empty(R, 0), L=L)
    print("seeded", seeded.unit, "in degrees 2, 3")
    print("  read back:", accumulated(C, L))

    C2, _ = realize_torsion(3 * t ** 2, C, L=L)
    print("seeded 1 - 3*t^2 on top")
    print("  read back:", accumulated(C2, L))
    print("  expected :", (R.one() - 2 * t).mul(R.one() - 3 * t ** 2, L))

    # approximate basis changes: noise below -12 never reaches the -12 level
    T = corpus("torus2")
    exact, _, _ = minimize(T, L=-14, search_depth=10)
    noisy, _, _ = minimize(T, L=-14, search_depth=10, noise=(1, -12))
    print("\nnoisy and exact minimizations of the torus agree at N = -12:",
          n_equiv(exact, noisy, -12))


if __name__ == "__main__":
    main()
