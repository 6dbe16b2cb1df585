import random

import pytest

from novikov.complexes import (BasedComplex, ChainMap, Homotopy, cancel_pair, chan2iso,
                               change_basis, conjugate_by_near_identity,
                               direct_sum, dualize, is_chain_map, isoinv, minimize, n_equiv,
                               replay_complex, stabilize, torsion_complex, validate,
                               verify_homotopy)
from novikov.corpus import corpus, random_complex
from novikov.errors import NormNotContracting, NotAUnitForm, PivotNotUnit
from novikov.matrix import AddLeftMultiple, NovMatrix, neumann_inv
from novikov.series import geom_inv

from instances import Z, block_instance, one, t

M = NovMatrix.from_rows


def single(ring, value, bottom=0, top=None):
    top = bottom + 1 if top is None else top
    ranks = [1 if k in (bottom, bottom + 1) else 0 for k in range(top + 1)]
    return BasedComplex(ring, ranks, {bottom + 1: M(ring, [[value]])})


def test_validate_examples():
    assert validate(corpus("torus2")).ok
    fake = BasedComplex(Z, (1, 1, 1), {1: M(Z, [[one]]), 2: M(Z, [[one]])})
    assert validate(fake).failures == [(2, 0, 0)]
    assert validate(BasedComplex.empty(Z, 3)).ok


def test_validate_dimension_warning():
    rep = validate(corpus("torus2"), dimension=6)
    assert rep.ok and len(rep.warnings) == 2


def test_verify_homotopy_examples():
    C = corpus("circle")
    idC = ChainMap.identity(C)
    assert verify_homotopy(Homotopy.zero(C, C), idC, idC)
    other = ChainMap(C, C, {0: M(Z, [[one + t ** 3]]), 1: M(Z, [[one + t ** 3]])})
    assert is_chain_map(other)
    assert not verify_homotopy(Homotopy.zero(C, C), idC, other)


def test_chan2iso_formula():
    D = BasedComplex(Z, (1, 0))
    E = BasedComplex(Z, (2, 1), {1: M(Z, [[t, one]])})
    phi = ChainMap(D, E, {0: M(Z, [[one, Z.zero()]])})
    psi, H = chan2iso(D, E, phi, 0, -6)
    assert psi[0].eq_mod(M(Z, [[one + t, one]]), -6)
    assert verify_homotopy(H, phi, psi)


def test_chan2iso_no_complement():
    D = BasedComplex(Z, (1, 0))
    E = BasedComplex(Z, (1, 1), {1: M(Z, [[one - 2 * t]])})
    A2 = M(Z, [[3 * t]])
    phi = ChainMap(D, E, {0: A2})
    psi, H = chan2iso(D, E, phi, 0, -6)
    assert psi[0] == A2 + NovMatrix.identity(Z, 1)
    assert verify_homotopy(H, phi, psi, -6)


def test_chan2iso_random_blocks():
    for seed in range(15):
        D, E, phi, j = block_instance(seed)
        psi, H = chan2iso(D, E, phi, j, -4)
        assert verify_homotopy(H, phi, psi, -4)
        assert is_chain_map(psi, -4)


def test_isoinv_iso_case():
    C = corpus("circle")
    A = {0: M(Z, [[2 * t]]), 1: M(Z, [[2 * t]])}
    E = conjugate_by_near_identity(C, A, -8)
    phi = ChainMap(C, E, {k: NovMatrix.identity(Z, 1) - A[k] for k in A})
    inv = ChainMap(E, C, {k: neumann_inv(A[k], -8) for k in A})
    res = isoinv(phi, 2, inv, Homotopy.zero(C, C), -8)
    for k in A:
        assert res.psi[k].eq_mod(inv[k], -8)
    # j below the bottom degree leaves psi' alone
    res = isoinv(phi, 0, inv, Homotopy.zero(C, C), -8)
    assert all(res.psi[k] == inv[k] for k in A)


def test_isoinv_two_degree():
    C = single(Z, one - t)
    A = {0: M(Z, [[2 * t]])}
    E = conjugate_by_near_identity(C, A, -8)
    phi = ChainMap(C, E, {0: M(Z, [[one - 2 * t]]), 1: NovMatrix.identity(Z, 1)})
    assert is_chain_map(phi, -8)
    rough = ChainMap(E, C, {0: neumann_inv(A[0], -8), 1: NovMatrix.identity(Z, 1)})
    res = isoinv(phi, 1, rough, Homotopy.zero(C, C), -8)
    assert res.psi[0].eq_mod(neumann_inv(A[0], -8), -8)
    assert is_chain_map(res.psi, -8)
    assert verify_homotopy(res.K, res.psi, rough, -8)


def test_stabilize_examples():
    C, log = stabilize(BasedComplex.empty(Z, 0), 2)
    assert C.ranks == (0, 0, 1, 1) and C.boundary(3) == M(Z, [[one]])
    C, log = stabilize(BasedComplex.empty(Z, 0), 2, one - 2 * t)
    assert C.boundary(3) == M(Z, [[one - 2 * t]])
    with pytest.raises(NotAUnitForm):
        stabilize(C, 1, 2 + t)


def test_stabilize_cancel_roundtrip():
    T = corpus("torus2")
    S, _ = stabilize(T, 1, T.ring.one() - 3 * T.ring.gen(0))
    assert validate(S).ok
    back, _ = cancel_pair(S, 1, 2, 1, -10)
    assert n_equiv(back, T, -10)


def test_cancel_pair_examples():
    empty, log = cancel_pair(single(Z, -(one - 2 * t)), 0, 0, 0, -6)
    assert empty.is_empty()
    C = BasedComplex(Z, (2, 2), {1: M(Z, [[one - t, 2 * t], [3 * t, one - t]])})
    out, _ = cancel_pair(C, 0, 0, 0, -3)
    assert out.boundary(1)[0, 0].terms == (one - t - 6 * t ** 2 - 6 * t ** 3).terms
    T = corpus("torus2")
    step, _ = cancel_pair(T, 0, 1, 1, -8)  # pivot 1 - t at (F, e_s)
    assert step.ranks == (1, 1, 0)
    final, _ = cancel_pair(step, 0, 0, 0, -8)
    assert final.is_empty()


def test_cancel_pair_rejects_non_unit():
    with pytest.raises(PivotNotUnit):
        cancel_pair(single(Z, 2 + t), 0, 0, 0, -5)


def test_change_basis_examples():
    C = BasedComplex(Z, (2, 2), {1: NovMatrix.diagonal(Z, [one - t, one - t])})
    out, log = change_basis(C, 1, AddLeftMultiple(0, 1, t))
    assert out.boundary(1)[0, 1] == t - t ** 2 and validate(out).ok
    back, _ = change_basis(out, 1, AddLeftMultiple(0, 1, t).inverse())
    assert back == C


def test_change_basis_noise_below_threshold():
    T = corpus("torus2")
    R = T.ring
    T3, _ = stabilize(T, 1, R.one())
    move = AddLeftMultiple(0, 1, R.one() + R.gen(0))
    exact, _ = change_basis(T3, 1, move)
    noisy, _ = change_basis(T3, 1, move, noise=(4, -10))
    assert noisy != exact
    assert n_equiv(noisy.truncate(-10), exact.truncate(-10), -100)
    assert validate(noisy).ok


def test_minimize_examples():
    for name in ("circle", "torus2", "torus3"):
        out, log, rep = minimize(corpus(name), L=-8)
        assert out.is_empty() and rep["status"] == "empty"
    even = BasedComplex(Z, (1, 1), {1: M(Z, [[2 + 2 * t]])})
    out, log, rep = minimize(even, L=-8, search_depth=5)
    assert out.ranks == (1, 1) and n_equiv(out, even, -8) and rep["status"] == "no pivot"


def test_minimize_monotone_and_replayable():
    for seed in range(12):
        C = random_complex(seed)
        out, log, rep = minimize(C, L=-10, search_depth=10)
        traj = rep["rank_trajectory"]
        assert all(b <= a for x, y in zip(traj, traj[1:]) for a, b in zip(x, y))
        assert n_equiv(replay_complex(C, log, -10), out, -10)
        assert validate(out).ok


def test_n_equiv_examples():
    C = single(Z, t - one)
    D = single(Z, t - one + t ** 7)
    assert n_equiv(C, C, -1000)
    assert n_equiv(C, D, -5) and n_equiv(D, C, -5)
    assert not n_equiv(C, D, -8)
    assert not n_equiv(C, corpus("torus2").__class__(Z, (1, 2)), 0)


def test_conjugate_examples():
    C = single(Z, t - one)
    assert conjugate_by_near_identity(C, {}) == C
    A = {0: M(Z, [[2 * t ** 6]]), 1: M(Z, [[2 * t ** 6]])}
    assert n_equiv(C, conjugate_by_near_identity(C, A), -5)
    with pytest.raises(NormNotContracting):
        conjugate_by_near_identity(C, {0: M(Z, [[one]])})


def test_dualize_examples():
    C = single(Z, one - 2 * t)
    D = dualize(C, 1)
    opp = Z.opposite()
    entry = D.boundary(1)[0, 0]
    assert entry.ring == opp
    assert entry in (opp.one() - 2 * opp.gen(0, -1), -(opp.one() - 2 * opp.gen(0, -1)))
    zero = BasedComplex(Z, (1, 2, 3))
    assert dualize(zero, 2).ranks == (3, 2, 1)
    T = corpus("torus2")
    assert dualize(dualize(T, 2), 2) == T
    assert validate(dualize(corpus("torus3"), 3)).ok
    with pytest.raises(ValueError):
        dualize(T, 1)


def test_dual_of_twisted_circle_is_valid():
    from instances import Z_TWISTED
    C = single(Z_TWISTED, Z_TWISTED.gen(0) - Z_TWISTED.one())
    assert dualize(dualize(C, 1), 1) == C


def test_torsion_complex_examples():
    X = torsion_complex(2 * t, n=6, L=-6)
    assert X.ranks == (0, 0, 0, 1, 1)
    assert X.boundary(4)[0, 0] == geom_inv(one - 2 * t, -6)
    Y = torsion_complex(Z.zero(), n=5)
    assert Y.boundary(3)[0, 0] == one
    out, _, _ = minimize(Y, L=-5)
    assert out.is_empty()
    assert direct_sum(BasedComplex.empty(Z, 0), X) == X
    with pytest.raises(NotAUnitForm):
        torsion_complex(Z.gen(0, -1), n=5)


def test_operations_keep_validity():
    rng = random.Random(9)
    for seed in range(10):
        C = random_complex(seed, top=3)
        for _ in range(10):
            k = rng.randint(0, 2)
            C, _ = stabilize(C, k, one - t if C.ring == Z else C.ring.one())
            assert validate(C).ok
        out, _, _ = minimize(C, L=-10)
        assert validate(out).ok


def test_isoinv_random_instances():
    from novikov.matrix import invert
    from instances import iso_instance
    for seed in range(15):
        D, E, phi, psi_p, H, j = iso_instance(seed)
        r = isoinv(phi, j, psi_p, H, -10)
        assert is_chain_map(r.psi, -10)
        assert all(r.psi[i].eq_mod(invert(phi[i], -10), -10) for i in range(j))
        assert verify_homotopy(r.K, r.psi, psi_p, -10)


def test_isoinv_rejects_bad_witness():
    from novikov.errors import WitnessInvalid
    from instances import iso_instance
    D, E, phi, psi_p, H, j = iso_instance(3)
    with pytest.raises(WitnessInvalid):
        isoinv(phi, j, psi_p, Homotopy.zero(D, D), -10)
