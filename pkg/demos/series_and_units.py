"""Series arithmetic over the Novikov ring of Z with chi(t) = -1.

Walks through truncation, the geometric-series inverse of a unit 1 - a,
and the +-t^k (1 - a) normal form.
"""

from novikov import NovikovRing, geom_inv, parse_series
from novikov.torsion import normal_form_Z


def main():
    R = NovikovRing.laurent(-1)
    t, one = R.gen(0), R.one()

    x = parse_series(R, "t^-1 + 3 - 2*t^4")
    print("x                 =", x)
    print("lognorm(x)        =", x.lognorm())
    print("x truncated at -2 =", x.truncate(-2))

    # 1 - 2t is a unit because ||2t|| < 1; its inverse is 1 + 2t + 4t^2 + ...
    u = one - 2 * t
    inv = geom_inv(u, -6)
    print("\n(1 - 2t)^-1 mod p_-6 =", inv)
    print("check u * inv         =", u.mul(inv, -6))

    # products of truncated series carry the weaker of the two precisions
    y = (one + t).truncate(-3)
    print("\n(1 + t + O(-3)) * (1 - t) =", y * (one - t))

    # units of the completed group ring of Z split as sign * t^k * (1 - a)
    v = -(t ** 2) + 3 * t ** 3
    print("\nnormal form of", v, "->", normal_form_Z(v))


if __name__ == "__main__":
    main()
