"""Minimizing the cellular chain complex of the 2-torus.

With chi = (-1, 0) the incidence 1 - t is a unit, so the face cancels an
edge; the remaining edge then cancels the vertex.  The move log replays the
computation and certifies that the torsion dies in the Whitehead group.
"""

from novikov import corpus, dualize, minimize, validate
from novikov.fileformat import dumps, log_to_json
from novikov.torsion import latour_obstruction


def show(C, title):
    print(f"{title}: ranks {list(C.ranks)}")
    for k in range(1, C.top + 1):
        print(f"  d{k} = {[[str(x) for x in row] for row in C.boundary(k).entries]}")


def main():
    T = corpus("torus2")
    show(T, "torus")
    print("d^2 = 0:", validate(T).ok)

    out, log, report = minimize(T, L=-8)
    print("\nstatus", report["status"], "trajectory", report["rank_trajectory"])
    print("moves:")
    for degree, move in log:
        print(f"  degree {degree}: {type(move).__name__}")

    cert = latour_obstruction(T, L=-8)
    print("\ncertificate:", cert.summary())

    # the dual lives over -chi; dualizing twice gives the torus back
    D = dualize(T, 2)
    show(D, "\ndual")
    print("double dual is the torus:", dualize(D, 2) == T)

    print("\nthe log as the CLI reports it:")
    print(dumps(log_to_json(log))[:400], "...")


if __name__ == "__main__":
    main()
