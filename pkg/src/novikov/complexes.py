"""Based free chain complexes over the Novikov ring.

``C.d[k]`` is the boundary ``C_k -> C_{k-1}`` as a ``rank_k x rank_{k-1}``
matrix whose row p lists the incidences ``[p:q]``.  Maps and homotopies
follow the same row-vector convention as :mod:`novikov.matrix`, so the
complex axiom reads ``d[k+1] @ d[k] == 0`` and a chain map ``f: D -> E``
satisfies ``D.d[k] @ f[k-1] == f[k] @ E.d[k]``.
"""

import random
from dataclasses import dataclass, field

from .chargroup import MINUS_INFINITY, Scalar, smax
from .errors import (ContextMismatch, NoiseBreaksComplex, NormNotContracting,
                     NotAUnitForm, PivotNotUnit, WitnessInvalid)
from .matrix import (AddLeftMultiple, AddRightMultiple, Destabilize, MoveLog,
                     NovMatrix, ScaleByUnit, Stabilize, SwapPair, apply_move,
                     block, invert, pivot_moves)
from .series import as_cutoff, geom_inv, recognize_unit


class BasedComplex:
    __slots__ = ("ring", "ranks", "d", "labels")

    def __init__(self, ring, ranks, boundaries=None, labels=None):
        ranks = tuple(int(r) for r in ranks)
        if any(r < 0 for r in ranks):
            raise ValueError("negative rank")
        boundaries = dict(boundaries or {})
        d = {}
        for k in range(1, len(ranks)):
            M = boundaries.pop(k, None)
            if M is None:
                M = NovMatrix.zeros(ring, ranks[k], ranks[k - 1])
            if M.shape != (ranks[k], ranks[k - 1]):
                raise ValueError(f"d[{k}] has shape {M.shape}, expected "
                                 f"{(ranks[k], ranks[k - 1])}")
            if M.ring != ring:
                raise ContextMismatch(f"d[{k}] lives over another ring")
            d[k] = M
        for k, M in boundaries.items():
            if M.rows or M.cols:
                raise ValueError(f"boundary d[{k}] outside the degree range")
        self.ring = ring
        self.ranks = ranks
        self.d = d
        if labels is not None:
            labels = tuple(tuple(l) for l in labels)
            if tuple(len(l) for l in labels) != ranks:
                raise ValueError("labels do not match ranks")
        self.labels = labels

    @classmethod
    def empty(cls, ring, top=0):
        return cls(ring, (0,) * (top + 1))

    @property
    def top(self):
        return len(self.ranks) - 1

    def rank(self, k):
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    def boundary(self, k):
        if k in self.d:
            return self.d[k]
        return NovMatrix.zeros(self.ring, self.rank(k), self.rank(k - 1))

    @property
    def cutoff(self):
        return smax(*(M.cutoff for M in self.d.values()))

    def is_empty(self):
        return not any(self.ranks)

    def extended(self, top):
        if top <= self.top:
            return self
        return BasedComplex(self.ring, self.ranks + (0,) * (top - self.top), self.d)

    def replace_boundaries(self, ranks, d):
        return BasedComplex(self.ring, ranks, d)

    def truncate(self, L):
        if as_cutoff(L) is None:
            return self
        return BasedComplex(self.ring, self.ranks, {k: M.truncate(L) for k, M in self.d.items()},
                            self.labels)

    def trimmed(self):
        """Drop trailing zero-rank degrees."""
        top = self.top
        while top > 0 and self.ranks[top] == 0:
            top -= 1
        return BasedComplex(self.ring, self.ranks[:top + 1],
                            {k: M for k, M in self.d.items() if k <= top})

    def __eq__(self, other):
        if not isinstance(other, BasedComplex):
            return NotImplemented
        a, b = self.trimmed(), other.trimmed()
        return a.ring == b.ring and a.ranks == b.ranks and a.d == b.d

    def __repr__(self):
        return f"BasedComplex(ranks={self.ranks})"


def _zero_map(ring, rows, cols):
    return NovMatrix.zeros(ring, rows, cols)


# -- validation -------------------------------------------------------------

@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok


def validate(C, dimension=None):
    """Positions (k, row, col) where d[k] @ d[k-1] keeps a known nonzero term.

    With ``dimension`` set, also warns when generators sit in degrees
    <= 1 or >= dimension - 1.
    """
    report = ValidationReport()
    for k in range(2, C.top + 1):
        P = C.boundary(k) @ C.boundary(k - 1)
        for i in range(P.rows):
            for j in range(P.cols):
                if not P[i, j].is_zero():
                    report.failures.append((k, i, j))
    if dimension is not None:
        for k, r in enumerate(C.ranks):
            if r and (k <= 1 or k >= dimension - 1):
                report.warnings.append(
                    f"{r} generator(s) in degree {k}, outside 2..{dimension - 2}")
    return report


# -- chain maps and homotopies ---------------------------------------------

class ChainMap:
    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        top = max(source.top, target.top)
        full = {}
        for k in range(top + 1):
            M = maps.get(k)
            shape = (source.rank(k), target.rank(k))
            if M is None:
                M = _zero_map(source.ring, *shape)
            if M.shape != shape:
                raise ValueError(f"map in degree {k} has shape {M.shape}, expected {shape}")
            full[k] = M
        self.maps = full

    def __getitem__(self, k):
        if k in self.maps:
            return self.maps[k]
        return _zero_map(self.source.ring, self.source.rank(k), self.target.rank(k))

    @property
    def top(self):
        return max(self.source.top, self.target.top)

    @classmethod
    def identity(cls, C):
        return cls(C, C, {k: NovMatrix.identity(C.ring, r) for k, r in enumerate(C.ranks)})

    def then(self, other, L=None):
        """other o self."""
        return ChainMap(self.source, other.target,
                        {k: self[k].mul(other[k], L) for k in range(max(self.top, other.top) + 1)})


class Homotopy:
    """H[k]: D_k -> E_{k+1}."""

    def __init__(self, source, target, maps):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        for k, M in self.maps.items():
            shape = (source.rank(k), target.rank(k + 1))
            if M.shape != shape:
                raise ValueError(f"homotopy in degree {k} has shape {M.shape}, expected {shape}")

    def __getitem__(self, k):
        if k in self.maps:
            return self.maps[k]
        return _zero_map(self.source.ring, self.source.rank(k), self.target.rank(k + 1))

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, {})


def is_chain_map(f, L=None):
    D, E = f.source, f.target
    for k in range(1, f.top + 1):
        lhs = D.boundary(k) @ f[k - 1]
        rhs = f[k] @ E.boundary(k)
        if not lhs.eq_mod(rhs, L):
            return False
    return True


def verify_homotopy(H, phi, psi, L=None):
    """phi_k - psi_k == H_k dE_{k+1} + dD_k H_{k-1} in every degree."""
    D, E = phi.source, phi.target
    if psi.source.ranks != D.ranks and psi.source.trimmed().ranks != D.trimmed().ranks:
        raise ValueError("maps have different sources")
    top = max(phi.top, psi.top)
    for k in range(top + 1):
        lhs = phi[k] - psi[k]
        rhs = H[k] @ E.boundary(k + 1) + D.boundary(k) @ H[k - 1]
        if not lhs.eq_mod(rhs, L):
            return False
    return True


def chan2iso(D, E, phi, j, L=None):
    """Replace phi by a homotopic psi whose D_j-block is I + A_2.

    E_j = C_j + D_j and E_{j+1} = C_{j+1} + D_j, with the D_j summands being
    the last ``D.rank(j)`` basis elements in both degrees.  Returns (psi, H)
    with H_j = (0 | -d22^{-1}).
    """
    L = as_cutoff(L) if L is not None else smax(E.cutoff, D.cutoff)
    n = D.rank(j)
    ring = E.ring
    cj = E.rank(j) - n
    cj1 = E.rank(j + 1) - n
    if cj < 0 or cj1 < 0:
        raise ValueError("E does not contain the D_j summands")
    dE = E.boundary(j + 1)
    d22 = dE.submatrix(range(cj1, cj1 + n), range(cj, cj + n))
    d12 = dE.submatrix(range(cj1, cj1 + n), range(cj))
    inv22 = invert(d22, L)
    I = NovMatrix.identity(ring, n)
    maps = dict(phi.maps)
    maps[j] = phi[j] + block([[inv22.mul(d12, L), I]])
    correction = D.boundary(j + 1).mul(inv22, L)
    maps[j + 1] = phi[j + 1] + block([[_zero_map(ring, D.rank(j + 1), cj1), correction]])
    psi = ChainMap(D, E, maps)
    H = Homotopy(D, E, {j: block([[_zero_map(ring, n, cj1), -inv22]])})
    return psi, H


@dataclass
class IsoInvResult:
    psi: ChainMap
    K: Homotopy


def isoinv(phi, j, psi_prime, H, L=None):
    """Inverse equivalence psi with psi_i = phi_i^{-1} for i <= j - 1.

    ``H`` must witness id ~ psi' o phi on D.  The returned ``K`` is a
    homotopy psi ~ psi'.
    """
    D, E = phi.source, phi.target
    L = as_cutoff(L) if L is not None else smax(D.cutoff, E.cutoff)
    idD = ChainMap.identity(D)
    if not verify_homotopy(H, idD, phi.then(psi_prime, L), L):
        raise WitnessInvalid("H is not a homotopy id ~ psi' phi")
    top = max(D.top, E.top)
    maps = dict(psi_prime.maps)
    inverses = {}
    for i in range(0, min(j, top + 1)):
        inverses[i] = invert(phi[i], L)
        maps[i] = inverses[i]
    if 0 <= j <= top and j - 1 >= 0:
        maps[j] = psi_prime[j] + E.boundary(j).mul(inverses[j - 1], L).mul(H[j - 1], L)
    psi = ChainMap(E, D, maps)
    K = Homotopy(E, D, {i: inverses[i].mul(H[i], L) for i in inverses})
    return IsoInvResult(psi, K)


# -- moves on complexes -----------------------------------------------------

def other_side(move):
    """The opposite-side inverse: a row move on d[k] seen on d[k+1] and back."""
    if isinstance(move, AddLeftMultiple):
        return AddRightMultiple(move.source, move.target, -move.coeff)
    if isinstance(move, AddRightMultiple):
        return AddLeftMultiple(move.source, move.target, -move.coeff)
    if isinstance(move, ScaleByUnit):
        from dataclasses import replace
        return replace(move, power=-move.power,
                       side="right" if move.side == "left" else "left")
    if isinstance(move, SwapPair):
        return SwapPair(move.i, move.j, "right" if move.side == "left" else "left")
    raise TypeError(f"{move!r} has no other-side form")


def _insert_zero_col(M, c):
    z = M.ring.zero()
    rows = [list(r) for r in M.entries]
    for r in rows:
        r.insert(c, z)
    return NovMatrix(M.ring, rows, M.rows, M.cols + 1)


def _insert_zero_row(M, r):
    rows = [list(x) for x in M.entries]
    rows.insert(r, [M.ring.zero()] * M.cols)
    return NovMatrix(M.ring, rows, M.rows + 1, M.cols)


def apply_complex_move(C, k, move, L=None):
    """Apply a move acting on d[k] to the whole complex."""
    L = as_cutoff(L)
    if isinstance(move, Stabilize):
        C = C.extended(k)
        ranks = list(C.ranks)
        r = ranks[k] if move.row is None else move.row
        c = ranks[k - 1] if move.col is None else move.col
        d = dict(C.d)
        d[k] = apply_move(C.boundary(k), Stabilize(move.unit, r, c))
        if k + 1 <= C.top:
            d[k + 1] = _insert_zero_col(C.boundary(k + 1), r)
        if k - 1 >= 1:
            d[k - 1] = _insert_zero_row(C.boundary(k - 1), c)
        ranks[k] += 1
        ranks[k - 1] += 1
        return BasedComplex(C.ring, ranks, d)
    if isinstance(move, Destabilize):
        r = C.rank(k) - 1 if move.row is None else move.row
        c = C.rank(k - 1) - 1 if move.col is None else move.col
        d = dict(C.d)
        d[k] = apply_move(C.boundary(k), Destabilize(r, c))
        if k + 1 <= C.top:
            up = C.boundary(k + 1)
            if L is not None:
                up = up.truncate(L)
            if not all(x.is_zero() for x in up.col(r)):
                raise PivotNotUnit(f"d[{k + 1}] column {r} is not zero; cannot destabilize")
            d[k + 1] = up.submatrix(range(up.rows), [j for j in range(up.cols) if j != r])
        if k - 1 >= 1:
            down = C.boundary(k - 1)
            if L is not None:
                down = down.truncate(L)
            if not all(x.is_zero() for x in down.row(c)):
                raise PivotNotUnit(f"d[{k - 1}] row {c} is not zero; cannot destabilize")
            d[k - 1] = down.submatrix([i for i in range(down.rows) if i != c], range(down.cols))
        ranks = list(C.ranks)
        ranks[k] -= 1
        ranks[k - 1] -= 1
        return BasedComplex(C.ring, ranks, d)
    d = dict(C.d)
    d[k] = apply_move(C.boundary(k), move, L)
    side = getattr(move, "side", "left") if not isinstance(
        move, (AddLeftMultiple, AddRightMultiple)) else (
        "left" if isinstance(move, AddLeftMultiple) else "right")
    partner = other_side(move)
    if side == "left" and k + 1 <= C.top:
        d[k + 1] = apply_move(C.boundary(k + 1), partner, L)
    elif side == "right" and k - 1 >= 1:
        d[k - 1] = apply_move(C.boundary(k - 1), partner, L)
    if L is not None:
        d = {i: M.truncate(L) for i, M in d.items()}
    return BasedComplex(C.ring, C.ranks, d)


def replay_complex(C, log, L=None):
    if L is None:
        L = log.cutoff
    for k, move in log:
        C = apply_complex_move(C, k, move, L)
    return C


def _noise_series(ring, rng, bound, terms=2):
    """Pseudo-random series with even coefficients and every chi value < bound."""
    group = ring.group
    weights = ring.chi.weights
    movers = [i for i, w in enumerate(weights) if w.sign() != 0]
    out = ring.zero()
    for _ in range(terms):
        g = group.identity
        for _ in range(rng.randint(0, 2)):
            g = group.mul(g, group.generator(rng.randrange(group.rank), rng.choice((1, -1))))
        i = rng.choice(movers)
        step = group.generator(i, -1 if weights[i].sign() > 0 else 1)
        while not ring.chi_of(g) < bound:
            g = group.mul(g, step)
        for _ in range(rng.randint(0, 2)):
            g = group.mul(g, step)
        out = out + ring.monomial(g, rng.choice((2, -2, 4, -4)))
    return out


def perturb_move(C, k, move, seed, L_noise):
    """Approximate a move by perturbing its coefficient below L_noise.

    The perturbation's character values are pushed down by the boundary
    norms, so every affected entry changes only in terms below L_noise.
    Swaps and stabilizations are carried out exactly.
    """
    ring = C.ring
    L_noise = as_cutoff(L_noise)
    slack = Scalar(0)
    for M in (C.boundary(k), C.boundary(k + 1), C.boundary(k - 1)):
        nu = M.matnorm()
        if nu is not MINUS_INFINITY and nu > slack:
            slack = nu
    rng = random.Random(seed)
    bound = L_noise - slack
    if isinstance(move, AddLeftMultiple):
        return AddLeftMultiple(move.target, move.source,
                               move.coeff + _noise_series(ring, rng, bound))
    if isinstance(move, AddRightMultiple):
        return AddRightMultiple(move.target, move.source,
                                move.coeff + _noise_series(ring, rng, bound))
    if isinstance(move, ScaleByUnit):
        from dataclasses import replace
        lead = ring.chi_of(move.g)
        return replace(move, a=move.a + _noise_series(ring, rng, bound - lead))
    return move


def change_basis(C, degree, move, noise=None, L=None):
    """Apply one move on d[degree]; ``noise=(seed, L_noise)`` approximates it."""
    if isinstance(move, (AddLeftMultiple, AddRightMultiple)):
        n = C.rank(degree) if isinstance(move, AddLeftMultiple) else C.rank(degree - 1)
        if not (0 <= move.target < n and 0 <= move.source < n):
            raise IndexError(f"move indices out of range for rank {n}")
    if noise is not None:
        seed, L_noise = noise
        move = perturb_move(C, degree, move, seed, L_noise)
    result = apply_complex_move(C, degree, move, L)
    if noise is not None:
        if not validate(result.truncate(as_cutoff(noise[1]))).ok:
            raise NoiseBreaksComplex("d^2 != 0 above the noise level")
    log = MoveLog([(degree, move)], as_cutoff(L), "change_basis")
    return result, log


def stabilize(C, i, u=None, L=None):
    """Insert a cancelling pair in degrees i+1, i with incidence u = 1 - a."""
    ring = C.ring
    if i < 0:
        raise IndexError("degree out of range")
    if u is None:
        u = ring.one()
    factored = recognize_unit(u) if not u.is_zero() else None
    if factored is None or factored[0] != 1 or factored[1] != ring.group.identity:
        raise NotAUnitForm(f"{u} is not of the form 1 - a with ||a|| < 1")
    move = Stabilize(u)
    result = apply_complex_move(C, i + 1, move, L)
    return result, MoveLog([(i + 1, move)], as_cutoff(L), "stabilize")


def cancel_pair(C, p, q, i, L=None):
    """Cancel generator p (degree i+1) against q (degree i) through a unit pivot."""
    L = as_cutoff(L) if L is not None else C.cutoff
    M = C.boundary(i + 1)
    if not (0 <= p < M.rows and 0 <= q < M.cols):
        raise IndexError(f"no entry ({p}, {q}) in d[{i + 1}]")
    moves, Lamb = pivot_moves(M, p, q, L)
    log = MoveLog([], Lamb, "cancel_pair")
    for move in moves:
        C = apply_complex_move(C, i + 1, move, Lamb)
        log.append(move, i + 1)
    return C, log


# -- minimization -------------------------------------------------------------

DEFAULT_MINIMIZE_CUTOFF = -10


def find_pivot(C):
    for k in range(1, C.top + 1):
        M = C.boundary(k)
        for r in range(M.rows):
            for c in range(M.cols):
                x = M[r, c]
                if not x.is_zero() and recognize_unit(x) is not None:
                    return k, r, c
    return None


def _euclid_candidates(C):
    """Row/column additions cancelling leading terms, smallest coefficient first."""
    group = C.ring.group
    ring = C.ring
    out = []
    for k in range(1, C.top + 1):
        M = C.boundary(k)
        for c in range(M.cols):
            for i in range(M.rows):
                for j in range(M.rows):
                    if i == j or M[i, c].is_zero() or M[j, c].is_zero():
                        continue
                    gi, ci, _ = M[i, c].sorted_terms()[0]
                    gj, cj, _ = M[j, c].sorted_terms()[0]
                    if abs(cj) > abs(ci):
                        continue
                    q = round(ci / cj) or (1 if ci * cj > 0 else -1)
                    lam = ring.monomial(group.mul(gi, group.inv(gj)), -q)
                    out.append((k, AddLeftMultiple(i, j, lam), (i, c)))
        for r in range(M.rows):
            for i in range(M.cols):
                for j in range(M.cols):
                    if i == j or M[r, i].is_zero() or M[r, j].is_zero():
                        continue
                    gi, ci, _ = M[r, i].sorted_terms()[0]
                    gj, cj, _ = M[r, j].sorted_terms()[0]
                    if abs(cj) > abs(ci):
                        continue
                    q = round(ci / cj) or (1 if ci * cj > 0 else -1)
                    lam = ring.monomial(group.mul(group.inv(gj), gi), -q)
                    out.append((k, AddRightMultiple(i, j, lam), (r, i)))
    return out


def minimize(C, max_steps=100, search_depth=0, L=None, noise=None):
    """Greedy cancellation of unit pivots, lowest degree first.

    Returns ``(complex, MoveLog, report)``.  When no pivot is recognizable and
    ``search_depth`` > 0, up to that many Euclid-style basis changes are tried
    to create one.  ``noise=(seed, L_noise)`` approximates those basis changes.
    """
    if L is None:
        L = C.cutoff if C.cutoff is not None else Scalar(DEFAULT_MINIMIZE_CUTOFF)
    L = as_cutoff(L)
    C = C.truncate(L)
    strategy = f"greedy lowest-degree lexicographic; search_depth={search_depth}"
    log = MoveLog([], L, strategy)
    trajectory = [list(C.ranks)]
    status = "max_steps"
    searched = 0
    steps = 0
    while steps < max_steps:
        if C.is_empty():
            status = "empty"
            break
        pivot = find_pivot(C)
        if pivot is None and search_depth > 0:
            for n, (k, move, (r, c)) in enumerate(_euclid_candidates(C)):
                if n >= search_depth:
                    break
                searched += 1
                sub_noise = None if noise is None else (noise[0] * 7919 + searched, noise[1])
                trial, sub = change_basis(C, k, move, sub_noise, L)
                x = trial.boundary(k)[r, c]
                if not x.is_zero() and recognize_unit(x) is not None:
                    C = trial
                    log.extend(sub)
                    pivot = (k, r, c)
                    break
        if pivot is None:
            status = "no pivot"
            break
        k, r, c = pivot
        C, sub = cancel_pair(C, r, c, k - 1, L)
        log.entries.extend(sub.entries)
        trajectory.append(list(C.ranks))
        steps += 1
    else:
        if C.is_empty():
            status = "empty"
    report = {
        "status": status,
        "steps": steps,
        "searched_moves": searched,
        "rank_trajectory": trajectory,
        "final_ranks": list(C.ranks),
        "strategy": strategy,
        "cutoff": str(L),
    }
    return C, log, report


# -- comparison and near-identity conjugation ---------------------------------

def n_equiv(C, D, N):
    """Equal ranks and matnorm(dC - dD) <= N in every degree."""
    if C.ring != D.ring:
        raise ContextMismatch("complexes over different rings")
    N = as_cutoff(N)
    top = max(C.top, D.top)
    for k in range(top + 1):
        if C.rank(k) != D.rank(k):
            return False
    for k in range(1, top + 1):
        nu = (C.boundary(k) - D.boundary(k)).matnorm()
        if nu is not MINUS_INFINITY and nu > N:
            return False
    return True


def boundary_difference(C, D):
    """max_k matnorm(dC_k - dD_k)."""
    best = MINUS_INFINITY
    for k in range(1, max(C.top, D.top) + 1):
        nu = (C.boundary(k) - D.boundary(k)).matnorm()
        if nu > best:
            best = nu
    return best


def complex_norm(C):
    best = MINUS_INFINITY
    for M in C.d.values():
        nu = M.matnorm()
        if nu > best:
            best = nu
    return best


def conjugate_by_near_identity(C, maps, L=None):
    """Boundaries (I - A_k)^{-1} d_k (I - A_{k-1}) for contracting A_k.

    Asserts the resulting complex is N-equivalent to C with
    N = matnorm(d) + max matnorm(A_k).
    """
    ring = C.ring
    worst = MINUS_INFINITY
    for k, A in maps.items():
        nu = A.matnorm()
        if nu is not MINUS_INFINITY and nu >= 0:
            raise NormNotContracting(f"A_{k} has matnorm {nu}")
        if A.shape != (C.rank(k), C.rank(k)):
            raise ValueError(f"A_{k} must be square of size {C.rank(k)}")
        if nu > worst:
            worst = nu
    if worst is MINUS_INFINITY:
        return C
    dnorm = complex_norm(C)
    bound = dnorm + worst if dnorm is not MINUS_INFINITY and worst is not MINUS_INFINITY \
        else MINUS_INFINITY
    if L is None:
        L = C.cutoff
        if L is None:
            L = (bound if bound is not MINUS_INFINITY else Scalar(0)) + Scalar(-8)
    L = as_cutoff(L)
    phi = {}
    phi_inv = {}
    for k in range(C.top + 1):
        A = maps.get(k)
        I = NovMatrix.identity(ring, C.rank(k))
        if A is None:
            phi[k] = phi_inv[k] = I
        else:
            phi[k] = I - A
            from .matrix import neumann_inv
            phi_inv[k] = neumann_inv(A, L)
    d = {k: phi_inv[k].mul(C.boundary(k), L).mul(phi[k - 1], L) for k in range(1, C.top + 1)}
    result = BasedComplex(ring, C.ranks, d)
    if bound is not MINUS_INFINITY:
        assert n_equiv(C, result, bound), "near-identity conjugation broke the norm bound"
    return result


# -- duality, sums, torsion complexes ---------------------------------------

def _eps(i):
    return -1 if (i * (i + 1) // 2) % 2 else 1


def _cochain_sign(m):
    # coboundary on C^m is (-1)^(m+1) times precomposition with the boundary
    return -1 if m % 2 == 0 else 1


def dual_sign(n, k):
    """Sign s with delta_k = s * conj-transpose(d_{n-k+1}) making P a chain map."""
    i = n - k + 1
    return _eps(i - 1) * _eps(i) * _cochain_sign(n - i)


def dualize(C, n):
    """The complex over -chi with D_k = C_{n-k}^* and P: p -> eps_i pbar a chain iso."""
    if C.trimmed().top > n:
        raise ValueError(f"degree overflow: complex reaches degree {C.trimmed().top} > {n}")
    C = C.extended(n)
    opp = C.ring.opposite()
    ranks = [C.rank(n - k) for k in range(n + 1)]
    signs = {k: dual_sign(n, k) for k in range(1, n + 1)}
    if len(set(signs.values())) > 1:
        raise AssertionError(f"dual boundary signs disagree across degrees: {signs}")
    d = {}
    for k in range(1, n + 1):
        d[k] = C.boundary(n - k + 1).involute_transpose().scale(signs[k])
    D = BasedComplex(opp, ranks, d)
    # P-commutation: eps_{i-1} d_i == sigma_{n-i} eps_i conj-transpose(delta_{n-i+1})
    for i in range(1, n + 1):
        lhs = C.boundary(i).scale(_eps(i - 1))
        rhs = D.boundary(n - i + 1).involute_transpose().scale(_cochain_sign(n - i) * _eps(i))
        if lhs != rhs:
            raise AssertionError(f"P fails to commute with the boundary in degree {i}")
    return D


def direct_sum(C, D):
    if C.ring != D.ring:
        raise ContextMismatch("complexes over different rings")
    ring = C.ring
    top = max(C.top, D.top)
    C, D = C.extended(top), D.extended(top)
    ranks = [C.rank(k) + D.rank(k) for k in range(top + 1)]
    d = {}
    for k in range(1, top + 1):
        a, b = C.boundary(k), D.boundary(k)
        d[k] = block([[a, _zero_map(ring, a.rows, b.cols)],
                      [_zero_map(ring, b.rows, a.cols), b]]) if (a.rows + b.rows) else \
            NovMatrix.zeros(ring, 0, a.cols + b.cols)
    return BasedComplex(ring, ranks, d)


def torsion_complex(c, n=None, degree=None, L=None):
    """Two-term complex in degrees n-3, n-2 with boundary (1 - c)^((-1)^(n-1))."""
    ring = c.ring
    if n is None and degree is None:
        raise ValueError("give the dimension n or the bottom degree")
    if n is None:
        n = degree + 3
    if degree is None:
        degree = n - 3
    if degree < 0:
        raise ValueError(f"bottom degree {degree} is negative")
    u = ring.one() - c
    factored = recognize_unit(u) if not u.is_zero() else None
    if factored is None or factored[0] != 1 or factored[1] != ring.group.identity:
        raise NotAUnitForm(f"1 - ({c}) is not of the form 1 - a with ||a|| < 1")
    if (n - 1) % 2 == 0:
        value = u
    else:
        if L is None and not (c.is_zero() and c.cutoff is None):
            raise ValueError("inverting 1 - c needs a cutoff")
        value = geom_inv(u, L if L is not None else -1)
    ranks = [0] * (degree + 2)
    ranks[degree] = ranks[degree + 1] = 1
    return BasedComplex(ring, ranks, {degree + 1: NovMatrix(ring, [[value]], 1, 1)})
