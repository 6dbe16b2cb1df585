"""Acceptance criteria 1-9, each timed and reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the report lines.
"""

import random
import time
from fractions import Fraction

from novikov.chargroup import Scalar
from novikov.complexes import (BasedComplex, apply_complex_move, boundary_difference,
                               cancel_pair, chan2iso, change_basis, complex_norm,
                               conjugate_by_near_identity, dualize, is_chain_map, isoinv,
                               minimize, n_equiv, stabilize, validate, verify_homotopy)
from novikov.corpus import corpus, random_complex, random_move
from novikov.matrix import NovMatrix, invert, neumann_inv
from novikov.series import geom_inv
from novikov.torsion import latour_obstruction, realize_torsion, torsion_of_log

from instances import (F2, Z, Z2, Z2_SQRT, Z_TWISTED, block_instance, corpus_complexes,
                       iso_instance, near_identity, random_contracting, random_element,
                       random_matrix)


def check(number, title, limit, body):
    start = time.perf_counter()
    failure = None
    try:
        detail = body()
    except AssertionError as exc:
        failure, detail = exc, str(exc)
    elapsed = time.perf_counter() - start
    ok = failure is None and elapsed < limit
    verdict = "PASS" if ok else "FAIL"
    print(f"\n{verdict} criterion {number}: {title} ({elapsed:.1f}s of {limit}s) {detail or ''}")
    if failure is not None:
        raise failure
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s"


def test_1_geometric_inverse():
    def body():
        rng = random.Random(1)
        one = Z2_SQRT.one()
        for _ in range(200):
            a = random_contracting(Z2_SQRT, rng, n_terms=5)
            assert a.lognorm() < 0
            u = one - a
            prod = (u * geom_inv(u, -10)).truncate(-10)
            assert prod.terms == one.terms, f"(1 - {a}) * inverse = {prod}"
        return "200 units over Z^2, chi = (-1, -sqrt 2)"
    check(1, "geom_inv multiply-back mod p_-10", 30, body)


def test_2_matrix_neumann():
    def body():
        rng = random.Random(2)
        for n in range(100):
            ring = (Z, Z2)[n % 2]
            A = near_identity(ring, rng, 4, -1)
            A = A + random_matrix(ring, rng, 4, 4, lambda: random_contracting(ring, rng, 2, 2))
            assert A.matnorm() <= -1
            B = neumann_inv(A, -8)
            I = NovMatrix.identity(ring, 4)
            assert ((I - A) @ B).eq_mod(I, -8) and (B @ (I - A)).eq_mod(I, -8)
        return "100 4x4 matrices over Z and Z^2"
    check(2, "Neumann inverse both-sided mod p_-8", 60, body)


def test_3_surgery_safety():
    def body():
        rng = random.Random(3)
        moves = 0
        seed = 0
        while moves < 1000:
            C = random_complex(seed, top=3, pairs=4, moves=4)
            seed += 1
            for _ in range(20):
                step = random_move(C, rng)
                if step is None:
                    break
                C = apply_complex_move(C, *step)
                moves += 1
                assert validate(C).ok, f"move {step} broke d^2 = 0"
        L = Scalar(-10)
        for n in range(200):
            C = random_complex(1000 + n, top=3, pairs=2, moves=6)
            i = rng.randint(0, 2)
            a = random_contracting(C.ring, rng, 2, 2) if rng.random() < 0.7 else C.ring.zero()
            S, log = stabilize(C, i, C.ring.one() - a, L)
            assert validate(S).ok
            back, log2 = cancel_pair(S, C.rank(i + 1), C.rank(i), i, L)
            assert validate(back).ok
            assert n_equiv(back, C.truncate(L), L), f"roundtrip {n} moved the complex"
            assert torsion_of_log(log + log2, L).trivial_in_wh
        return f"{moves} moves, 200 roundtrips"
    check(3, "moves and stabilize/cancel keep d^2 = 0", 120, body)


def test_4_corpus_minimization():
    def body():
        for name in ("circle", "torus2", "torus3"):
            C = corpus(name)
            out, log, rep = minimize(C, L=-8)
            assert out.is_empty(), f"{name} stopped at {rep['final_ranks']}"
            assert all(r == 0 for r in rep["final_ranks"])
            cert = latour_obstruction(C, L=-8)
            assert cert.trivial_in_wh, f"{name}: {cert.summary()}"
        return "circle, T^2, T^3 emptied"
    check(4, "circle/torus minimization oracle", 10, body)


def test_5_homotopy_identities():
    def body():
        done = seed = 0
        while done < 100:
            inst = block_instance(seed)
            seed += 1
            if inst is None:
                continue
            D, E, phi, j = inst
            assert is_chain_map(phi, -4)
            psi, H = chan2iso(D, E, phi, j, -4)
            assert verify_homotopy(H, phi, psi, -4), f"block instance {seed - 1}"
            done += 1
        for s in range(100):
            D, E, phi, psi_p, H, j = iso_instance(s)
            r = isoinv(phi, j, psi_p, H, -10)
            assert is_chain_map(r.psi, -10), f"iso instance {s}"
            for i in range(j):
                assert r.psi[i].eq_mod(invert(phi[i], -10), -10), f"iso instance {s} degree {i}"
            assert verify_homotopy(r.K, r.psi, psi_p, -10)
        return "100 block and 100 inverse instances"
    check(5, "chan2iso / isoinv identities", 60, body)


def test_6_conjugation_bound():
    def body():
        rng = random.Random(6)
        sharp = 0
        for n in range(100):
            D = random_complex(600 + n, top=3, pairs=3, moves=8)
            assert complex_norm(D) == 0
            degrees = [k for k in range(D.top + 1) if D.rank(k)]
            A = {k: near_identity(D.ring, rng, D.rank(k), -4 - rng.randint(0, 2)) for k in degrees}
            k = rng.choice(degrees)
            A[k] = near_identity(D.ring, rng, D.rank(k), -4)
            assert max(M.matnorm() for M in A.values()) == -4
            E = conjugate_by_near_identity(D, A, L=-12)
            assert n_equiv(D, E, -4)
            diff = boundary_difference(D, E)
            assert diff <= -4
            if isinstance(diff, Scalar):
                assert not n_equiv(D, E, diff - Scalar(Fraction(1, 2)))
                sharp += 1
        assert sharp >= 90
        return f"{sharp} instances with a finite realized difference"
    check(6, "near-identity conjugation within N = -4", 60, body)


def test_7_duality():
    def body():
        for name, C in corpus_complexes():
            n = C.trimmed().top
            for m in (n, n + 1):
                assert dualize(dualize(C, m), m) == C, f"{name} with n = {m}"
        twisted = BasedComplex(Z_TWISTED, (1, 1),
                               {1: NovMatrix.from_rows(Z_TWISTED, [[Z_TWISTED.gen(0) - Z_TWISTED.one()]])})
        assert dualize(dualize(twisted, 1), 1) == twisted
        rng = random.Random(7)
        for n in range(500):
            ring = (Z, Z2, F2, Z_TWISTED)[n % 4]
            x, y = random_element(ring, rng), random_element(ring, rng)
            assert (x * y).involute() == y.involute() * x.involute()
        return "corpus double duals, 500 involution pairs"
    check(7, "duality", 30, body)


def test_8_torsion_realization():
    def body():
        t, one = Z.gen(0), Z.one()
        empty = BasedComplex.empty(Z, 0)
        first, _ = realize_torsion(2 * t, empty, L=-6)
        out, log, rep = minimize(first, L=-6)
        assert out.is_empty()
        u = torsion_of_log(log, -6).unit
        target = one - 2 * t
        assert u.eq_mod(target, -6) or u.eq_mod(geom_inv(target, -6), -6), str(u)
        second, _ = realize_torsion(3 * t ** 2, first, L=-6)
        out, log, rep = minimize(second, L=-6)
        assert out.is_empty()
        v = torsion_of_log(log, -6).unit
        prod = target.mul(one - 3 * t ** 2, -6)
        assert v.eq_mod(prod, -6) or v.eq_mod(geom_inv(prod, -6), -6), str(v)
        return f"accumulated {v}"
    check(8, "torsion realization 2t then 3t^2", 10, body)


def test_9_noise_robustness():
    def body():
        rng = random.Random(9)
        compared = nonempty = 0
        for idx, (name, C) in enumerate(corpus_complexes()):
            exact = noisy = C
            for step in range(6):
                pick = random_move(exact, rng)
                if pick is None:
                    break
                k, move = pick
                exact, _ = change_basis(exact, k, move)
                noisy, _ = change_basis(noisy, k, move, noise=(100 * idx + step, -12))
            assert n_equiv(exact, noisy, -12), f"{name}: scrambling already diverged"
            a, _, ra = minimize(exact, L=-14, search_depth=10)
            b, _, rb = minimize(noisy, L=-14, search_depth=10, noise=(idx, -12))
            assert n_equiv(a, b, -12), f"{name}: ranks {ra['final_ranks']} vs {rb['final_ranks']}"
            compared += 1
            nonempty += not a.is_empty()
        return f"{compared} corpus complexes, {nonempty} with nonempty minimal form"
    check(9, "noise at L_noise = -12 stays -12-equivalent", 60, body)
