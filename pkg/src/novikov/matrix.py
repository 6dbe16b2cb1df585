"""Matrices over the Novikov ring and the elementary moves acting on them.

Matrices act on row vectors: a homomorphism of free left modules
``R^m -> R^n`` is an ``m x n`` matrix ``M`` and ``x -> x M``.  Composition
``g o f`` is therefore the product ``M_f @ M_g``.
"""

from dataclasses import dataclass, field, replace

from .chargroup import MINUS_INFINITY, smax
from .errors import (BlockNotInvertible, ContextMismatch, CutoffTooCoarse,
                     InverseCheckFailed, NormEscape, NormNotContracting,
                     NotAUnitForm, PivotNotUnit)
from .series import (NovikovSeries, as_cutoff, geom_inv, recognize_unit,
                     unit_inverse)


class NovMatrix:
    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring, entries, rows=None, cols=None):
        entries = tuple(tuple(row) for row in entries)
        self.rows = len(entries) if rows is None else rows
        if cols is None:
            cols = len(entries[0]) if entries else 0
        self.cols = cols
        if len(entries) != self.rows or any(len(row) != cols for row in entries):
            raise ValueError("ragged matrix")
        for row in entries:
            for x in row:
                if x.ring is not ring and x.ring != ring:
                    raise ContextMismatch("matrix entries over different rings")
        self.ring = ring
        self.entries = entries

    @classmethod
    def from_rows(cls, ring, rows, cols=None):
        """Build from nested lists of series, ints or series strings."""
        def conv(x):
            if isinstance(x, NovikovSeries):
                return x
            if isinstance(x, int):
                return ring.const(x)
            return ring.parse(x)
        rows = [[conv(x) for x in row] for row in rows]
        return cls(ring, rows, len(rows), cols)

    @classmethod
    def zeros(cls, ring, rows, cols):
        z = ring.zero()
        return cls(ring, [[z] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, ring, n):
        z = ring.zero()
        one = ring.one()
        return cls(ring, [[one if i == j else z for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, ring, values):
        n = len(values)
        z = ring.zero()
        return cls(ring, [[values[i] if i == j else z for j in range(n)] for i in range(n)], n, n)

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def col(self, j):
        return tuple(row[j] for row in self.entries)

    @property
    def cutoff(self):
        """Coarsest entry cutoff (None if every entry is exact)."""
        return smax(*(x.cutoff for row in self.entries for x in row))

    def matnorm(self):
        best = MINUS_INFINITY
        for row in self.entries:
            for x in row:
                nu = x.lognorm()
                if nu > best:
                    best = nu
        return best

    def is_zero(self):
        return all(x.is_zero() for row in self.entries for x in row)

    def _same_shape(self, other):
        if other.ring != self.ring:
            raise ContextMismatch("matrices over different rings")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._same_shape(other)
        return NovMatrix(self.ring, [[x + y for x, y in zip(r, s)]
                                     for r, s in zip(self.entries, other.entries)],
                         self.rows, self.cols)

    def __sub__(self, other):
        self._same_shape(other)
        return NovMatrix(self.ring, [[x - y for x, y in zip(r, s)]
                                     for r, s in zip(self.entries, other.entries)],
                         self.rows, self.cols)

    def __neg__(self):
        return NovMatrix(self.ring, [[-x for x in r] for r in self.entries], self.rows, self.cols)

    def scale(self, k):
        return NovMatrix(self.ring, [[x * k for x in r] for r in self.entries], self.rows, self.cols)

    def mul(self, other, L=None):
        if other.ring != self.ring:
            raise ContextMismatch("matrices over different rings")
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.ring.zero()
        out = []
        for i in range(self.rows):
            row = self.entries[i]
            new = []
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    x = row[k]
                    y = other.entries[k][j]
                    if x.terms and y.terms or x.cutoff is not None or y.cutoff is not None:
                        acc = acc + x.mul(y, L)
                new.append(acc if L is None else acc.truncate(L))
            out.append(new)
        return NovMatrix(self.ring, out, self.rows, other.cols)

    def __matmul__(self, other):
        return self.mul(other)

    def left_scalar(self, lam, L=None):
        return NovMatrix(self.ring, [[lam.mul(x, L) for x in r] for r in self.entries],
                         self.rows, self.cols)

    def truncate(self, L):
        if as_cutoff(L) is None:
            return self
        return NovMatrix(self.ring, [[x.truncate(L) for x in r] for r in self.entries],
                         self.rows, self.cols)

    def eq_mod(self, other, L=None):
        """Entrywise equality on every term both sides know (and >= L if given)."""
        diff = self - other
        if L is not None:
            diff = diff.truncate(L)
        return diff.is_zero()

    def submatrix(self, rows, cols):
        rows = list(rows)
        cols = list(cols)
        return NovMatrix(self.ring, [[self.entries[i][j] for j in cols] for i in rows],
                         len(rows), len(cols))

    def transpose(self):
        return NovMatrix(self.ring, [list(c) for c in zip(*self.entries)] if self.rows else [],
                         self.cols, self.rows)

    def involute_transpose(self):
        """Conjugate transpose over the opposite character."""
        ring = self.ring.opposite()
        entries = [[self.entries[i][j].involute() for i in range(self.rows)]
                   for j in range(self.cols)]
        return NovMatrix(ring, entries, self.cols, self.rows)

    def with_ring(self, ring):
        return NovMatrix(ring, self.entries, self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, NovMatrix):
            return NotImplemented
        return self.ring == other.ring and self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        return f"NovMatrix({self.to_strings()})"

    def to_strings(self):
        return [[str(x) for x in row] for row in self.entries]


def block(rows_of_blocks):
    """Assemble a block matrix; every block row shares row counts, etc."""
    out = []
    ring = None
    for brow in rows_of_blocks:
        height = brow[0].rows
        for b in brow:
            ring = b.ring
            if b.rows != height:
                raise ValueError("block row heights differ")
        for i in range(height):
            line = []
            for b in brow:
                line.extend(b.entries[i])
            out.append(line)
    cols = sum(b.cols for b in rows_of_blocks[0]) if rows_of_blocks else 0
    return NovMatrix(ring, out, len(out), cols)


def matnorm(A):
    return A.matnorm()


# -- elementary moves -------------------------------------------------------

@dataclass(frozen=True)
class AddLeftMultiple:
    """row[target] += coeff * row[source]"""
    target: int
    source: int
    coeff: NovikovSeries

    def __post_init__(self):
        if self.target == self.source:
            raise ValueError("target and source rows must differ")

    def inverse(self):
        return AddLeftMultiple(self.target, self.source, -self.coeff)


@dataclass(frozen=True)
class AddRightMultiple:
    """col[target] += col[source] * coeff"""
    target: int
    source: int
    coeff: NovikovSeries

    def __post_init__(self):
        if self.target == self.source:
            raise ValueError("target and source columns must differ")

    def inverse(self):
        return AddRightMultiple(self.target, self.source, -self.coeff)


@dataclass(frozen=True)
class ScaleByUnit:
    """Multiply a row (side='left') or column (side='right') by u**power.

    ``u = sign * g * (1 - a)`` with lognorm(a) < 0.  The default power -1
    divides the unit out, which is how pivots are normalized to 1.  ``prec``
    is the cutoff to which ``u**-1`` is formed.
    """
    index: int
    sign: int
    g: tuple
    a: NovikovSeries
    power: int = -1
    side: str = "left"
    prec: object = None

    def __post_init__(self):
        if self.sign not in (1, -1) or self.power not in (1, -1):
            raise ValueError("sign and power must be +-1")
        if self.side not in ("left", "right"):
            raise ValueError("side is 'left' or 'right'")
        nu = self.a.lognorm()
        if nu is not MINUS_INFINITY and nu >= 0:
            raise NotAUnitForm("ScaleByUnit needs lognorm(a) < 0")

    def unit(self):
        ring = self.a.ring
        return ring.monomial(self.g, self.sign).mul(ring.one() - self.a)

    def inverse(self):
        return replace(self, power=-self.power)


@dataclass(frozen=True)
class SwapPair:
    """row_i <- row_j, row_j <- -row_i (an elementary product); columns for side='right'."""
    i: int
    j: int
    side: str = "left"

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError("swap needs two distinct indices")

    def inverse(self):
        return SwapPair(self.j, self.i, self.side)


@dataclass(frozen=True)
class Stabilize:
    """Insert a new row and column meeting in ``unit`` (default 1)."""
    unit: NovikovSeries = None
    row: int = None
    col: int = None

    def inverse(self):
        return Destabilize(self.row, self.col)


@dataclass(frozen=True)
class Destabilize:
    """Remove a row and column meeting in a pivot equal to 1 (mod cutoff)."""
    row: int = None
    col: int = None

    def inverse(self):
        return Stabilize(None, self.row, self.col)


ElementaryMove = (AddLeftMultiple, AddRightMultiple, ScaleByUnit, SwapPair, Stabilize, Destabilize)


@dataclass
class MoveLog:
    """Ordered ``(degree, move)`` pairs; degree is None for bare matrix logs."""
    entries: list = field(default_factory=list)
    cutoff: object = None
    strategy: str = ""

    def append(self, move, degree=None):
        self.entries.append((degree, move))

    def extend(self, other):
        self.entries.extend(other.entries)
        self.cutoff = smax(self.cutoff, other.cutoff)

    def moves(self):
        return [m for _, m in self.entries]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __add__(self, other):
        return MoveLog(self.entries + other.entries, smax(self.cutoff, other.cutoff),
                       self.strategy or other.strategy)

    def inverse(self):
        return MoveLog([(d, m.inverse()) for d, m in reversed(self.entries)], self.cutoff,
                       self.strategy)


def _replace_row(A, i, new):
    entries = list(A.entries)
    entries[i] = tuple(new)
    return NovMatrix(A.ring, entries, A.rows, A.cols)


def _replace_col(A, j, new):
    entries = [list(r) for r in A.entries]
    for i, x in enumerate(new):
        entries[i][j] = x
    return NovMatrix(A.ring, entries, A.rows, A.cols)


def _scale_value(move, L):
    if move.power == 1:
        return move.unit()
    return unit_inverse(move.unit(), move.prec if move.prec is not None else L)


def apply_move(A, move, L=None):
    """Apply one move to a matrix; products are truncated at L when given."""
    ring = A.ring
    if isinstance(move, AddLeftMultiple):
        lam = move.coeff
        src = A.row(move.source)
        new = [x + lam.mul(y, L) for x, y in zip(A.row(move.target), src)]
        return _replace_row(A, move.target, new)
    if isinstance(move, AddRightMultiple):
        lam = move.coeff
        src = A.col(move.source)
        new = [x + y.mul(lam, L) for x, y in zip(A.col(move.target), src)]
        return _replace_col(A, move.target, new)
    if isinstance(move, ScaleByUnit):
        if move.prec is not None:
            L = move.prec
        v = _scale_value(move, L)
        if move.side == "left":
            return _replace_row(A, move.index, [v.mul(x, L) for x in A.row(move.index)])
        return _replace_col(A, move.index, [x.mul(v, L) for x in A.col(move.index)])
    if isinstance(move, SwapPair):
        i, j = move.i, move.j
        if move.side == "left":
            ri, rj = A.row(i), A.row(j)
            B = _replace_row(A, i, rj)
            return _replace_row(B, j, [-x for x in ri])
        ci, cj = A.col(i), A.col(j)
        B = _replace_col(A, i, cj)
        return _replace_col(B, j, [-x for x in ci])
    if isinstance(move, Stabilize):
        unit = move.unit if move.unit is not None else ring.one()
        r = A.rows if move.row is None else move.row
        c = A.cols if move.col is None else move.col
        z = ring.zero()
        rows = [list(row) for row in A.entries]
        for row in rows:
            row.insert(c, z)
        new_row = [z] * (A.cols + 1)
        new_row[c] = unit
        rows.insert(r, new_row)
        return NovMatrix(ring, rows, A.rows + 1, A.cols + 1)
    if isinstance(move, Destabilize):
        r = A.rows - 1 if move.row is None else move.row
        c = A.cols - 1 if move.col is None else move.col
        if not (A[r, c] - ring.one()).is_zero():
            raise PivotNotUnit(f"destabilizing needs pivot 1, found {A[r, c]}")
        for j in range(A.cols):
            if j != c and not A[r, j].is_zero():
                raise PivotNotUnit(f"row {r} not cleared at column {j}")
        for i in range(A.rows):
            if i != r and not A[i, c].is_zero():
                raise PivotNotUnit(f"column {c} not cleared at row {i}")
        return A.submatrix([i for i in range(A.rows) if i != r],
                           [j for j in range(A.cols) if j != c])
    raise TypeError(f"unknown move {move!r}")


def replay(A, log, L=None):
    """Apply every move of a matrix log in order."""
    moves = log.moves() if isinstance(log, MoveLog) else list(log)
    if L is None and isinstance(log, MoveLog):
        L = log.cutoff
    for move in moves:
        A = apply_move(A, move, L)
    return A


def move_matrix(move, n, ring, L=None):
    """The n x n matrix E of a same-size move (A -> E A for left moves, A -> A E for right)."""
    if isinstance(move, (Stabilize, Destabilize)):
        raise ValueError("stabilizations change the matrix size")
    return apply_move(NovMatrix.identity(ring, n), move, L)


def log_product(moves, n, ring, L=None):
    """E_1 E_2 ... E_k for a sequence of same-size moves."""
    if isinstance(moves, MoveLog):
        moves = moves.moves()
    P = NovMatrix.identity(ring, n)
    for move in moves:
        P = P.mul(move_matrix(move, n, ring, L), L)
    return P


# -- inversion --------------------------------------------------------------

def neumann_inv(A, L):
    """(I - A)^{-1} = sum_{k<=K} A^k, exact modulo p_L; needs matnorm(A) < 0."""
    L = as_cutoff(L)
    if A.rows != A.cols:
        raise ValueError("neumann_inv needs a square matrix")
    ring = A.ring
    n = A.rows
    nu = A.matnorm()
    I = NovMatrix.identity(ring, n)
    if nu is MINUS_INFINITY:
        return I.truncate(smax(L, A.cutoff))
    if nu >= 0:
        raise NormNotContracting(f"matnorm {nu} is not < 0")
    K = 0
    while nu * (K + 1) >= L:
        K += 1
    total = I.truncate(L)
    power = I
    for _ in range(K):
        power = power.mul(A, L)
        total = total + power
    return total


def verify_inverse(A, B):
    """A B == I == B A on every known term."""
    n = A.rows
    I = NovMatrix.identity(A.ring, n)
    return (A @ B).eq_mod(I) and (B @ A).eq_mod(I)


def stability_radius(A, A_inv):
    """Log-scale radius -matnorm(A^{-1}): A - B stays invertible for matnorm(B) below it."""
    if not verify_inverse(A, A_inv):
        raise InverseCheckFailed("supplied inverse does not multiply back to I")
    nu = A_inv.matnorm()
    if nu is MINUS_INFINITY:
        raise InverseCheckFailed("zero matrix cannot be an inverse")
    return -nu


def invert(M, L):
    """Inverse of a square matrix through Neumann series or unit pivots.

    Tries I - A with matnorm(A) < 0 first, then Gauss-Jordan elimination
    with pivots of the shape +-g(1-a).
    """
    L = as_cutoff(L)
    n = M.rows
    if M.cols != n:
        raise BlockNotInvertible("non-square block")
    ring = M.ring
    if n == 0:
        return M
    I = NovMatrix.identity(ring, n)
    A = I - M
    nu = A.matnorm()
    if nu is MINUS_INFINITY or nu < 0:
        return neumann_inv(A, L)
    work = M
    inv = I
    used = []
    for col in range(n):
        pivot_row = None
        for r in [col] + [r for r in range(n) if r != col]:
            if r in used:
                continue
            entry = work[r, col]
            if not entry.is_zero() and recognize_unit(entry) is not None:
                pivot_row = r
                break
        if pivot_row is None:
            raise BlockNotInvertible(f"no unit pivot in column {col}")
        used.append(pivot_row)
        uinv = unit_inverse(work[pivot_row, col], L)
        work = _replace_row(work, pivot_row, [uinv.mul(x, L) for x in work.row(pivot_row)])
        inv = _replace_row(inv, pivot_row, [uinv.mul(x, L) for x in inv.row(pivot_row)])
        for r in range(n):
            if r == pivot_row or work[r, col].is_zero():
                continue
            lam = -work[r, col]
            work = _replace_row(work, r, [x + lam.mul(y, L) for x, y in
                                          zip(work.row(r), work.row(pivot_row))])
            inv = _replace_row(inv, r, [x + lam.mul(y, L) for x, y in
                                        zip(inv.row(r), inv.row(pivot_row))])
    # rows of `work` are now a permutation of I; reorder so work == I
    order = [None] * n
    for col, r in enumerate(used):
        order[col] = r
    return inv.submatrix(order, range(n)).truncate(L)


# -- Schur elimination ------------------------------------------------------

def _ambient_cutoff(A, L):
    L = as_cutoff(L)
    return smax(L, A.cutoff) if L is not None else A.cutoff


def pivot_moves(A, r, c, L=None):
    """Moves clearing row r and column c around the unit pivot A[r, c].

    Returns ``(moves, Lamb)``: scaling the pivot row to make the pivot 1,
    row additions clearing column c, column additions clearing row r, and the
    destabilization removing the pair.
    """
    factored = recognize_unit(A[r, c]) if not A[r, c].is_zero() else None
    if factored is None:
        raise PivotNotUnit(f"entry ({r}, {c}) = {A[r, c]} is not +-g(1-a)")
    sign, g, a = factored
    Lamb = _ambient_cutoff(A, L)
    monomial = a.is_zero() and a.cutoff is None
    if Lamb is None and not monomial:
        raise CutoffTooCoarse("exact matrix with a non-monomial pivot needs a cutoff")
    need = smax(*(A[i, c].lognorm_floor() for i in range(A.rows) if i != r))
    if Lamb is None or need is None:
        prec = Lamb
    else:
        prec = Lamb - need if need > 0 else Lamb
    scale = ScaleByUnit(r, sign, g, a, power=-1, side="left", prec=prec)
    moves = [scale]
    A1 = apply_move(A, scale, Lamb)
    for i in range(A.rows):
        if i != r and not A1[i, c].is_zero():
            move = AddLeftMultiple(i, r, -A1[i, c])
            moves.append(move)
            A1 = apply_move(A1, move, Lamb)
    for j in range(A.cols):
        if j != c and not A1[r, j].is_zero():
            move = AddRightMultiple(j, c, -A1[r, j])
            moves.append(move)
            A1 = apply_move(A1, move, Lamb)
    moves.append(Destabilize(r, c))
    try:
        apply_move(A1, moves[-1], Lamb)
    except PivotNotUnit as exc:
        raise CutoffTooCoarse(f"pivot inverse not formed to cutoff {Lamb}: {exc}") from exc
    return moves, Lamb


def schur_complement(A, r, c, L=None):
    """A_ij - A_ic A_rc^{-1} A_rj over the remaining rows and columns."""
    Lamb = _ambient_cutoff(A, L)
    u = A[r, c]
    if u.is_zero() or recognize_unit(u) is None:
        raise PivotNotUnit(f"entry ({r}, {c}) = {u} is not +-g(1-a)")
    need_col = smax(*(A[i, c].lognorm_floor() for i in range(A.rows) if i != r))
    need_row = smax(*(A[r, j].lognorm_floor() for j in range(A.cols) if j != c))
    if Lamb is None:
        prec = None
    else:
        prec = Lamb
        for extra in (need_col, need_row):
            if extra is not None:
                prec = prec - extra
    uinv = unit_inverse(u, prec)
    rows = []
    for i in range(A.rows):
        if i == r:
            continue
        left = A[i, c].mul(uinv) if not A[i, c].is_zero() or A[i, c].cutoff is not None else None
        row = []
        for j in range(A.cols):
            if j == c:
                continue
            x = A[i, j]
            if left is not None:
                x = x - left.mul(A[r, j], Lamb)
            row.append(x.truncate(Lamb) if Lamb is not None else x)
        rows.append(row)
    return NovMatrix(A.ring, rows, A.rows - 1, A.cols - 1)


def schur_eliminate(A, r, c, L=None):
    """Eliminate the unit pivot (r, c): returns (Schur complement, MoveLog)."""
    moves, Lamb = pivot_moves(A, r, c, L)
    log = MoveLog([(None, m) for m in moves], Lamb, "schur")
    return schur_complement(A, r, c, L), log


# -- X(I - D) decomposition ---------------------------------------------------

def simple_decompose(log, n, ring, L):
    """Rewrite a product of moves as X (I - D), X elementary/+-g, matnorm(D) < 0.

    Unit factors are pushed to the right; elementary factors are conjugated
    on the way.  The identity is checked by explicit multiplication.
    """
    L = as_cutoff(L)
    moves = log.moves() if isinstance(log, MoveLog) else list(log)
    group = ring.group
    one = ring.one()
    delta = [one] * n
    X = []
    for move in moves:
        if isinstance(move, (Stabilize, Destabilize)):
            raise ValueError("simple_decompose works in a fixed dimension")
        if isinstance(move, (AddLeftMultiple, AddRightMultiple)):
            if isinstance(move, AddLeftMultiple):
                p, q = move.target, move.source
            else:
                p, q = move.source, move.target
            lam = delta[p].mul(move.coeff, L).mul(geom_inv(delta[q], L), L)
            X.append(AddLeftMultiple(p, q, lam))
        elif isinstance(move, SwapPair):
            i, j = (move.i, move.j) if move.side == "left" else (move.j, move.i)
            X.append(SwapPair(i, j, "left"))
            delta[move.i], delta[move.j] = delta[move.j], delta[move.i]
        elif isinstance(move, ScaleByUnit):
            k = move.index
            if move.power == 1:
                m_g, m_sign = move.g, move.sign
                w = one - move.a
            else:
                m_g, m_sign = group.inv(move.g), move.sign
                g_mono = ring.monomial(move.g)
                conj = g_mono.mul(move.a).mul(ring.monomial(group.inv(move.g)))
                w = geom_inv(one - conj, L)
            if m_g != group.identity or m_sign != 1:
                X.append(ScaleByUnit(k, m_sign, m_g, ring.zero(), power=1))
                mono = ring.monomial(m_g, m_sign)
                mono_inv = ring.monomial(group.inv(m_g), m_sign)
                delta[k] = mono_inv.mul(delta[k]).mul(mono)
            delta[k] = delta[k].mul(w, L)
        else:
            raise TypeError(f"unknown move {move!r}")
    D = NovMatrix.diagonal(ring, [(one - x).truncate(L) for x in delta])
    nu = D.matnorm()
    if nu is not MINUS_INFINITY and nu >= 0:
        raise NormEscape(f"matnorm(D) = {nu} after commuting unit factors")
    lhs = log_product(X, n, ring, L).mul(NovMatrix.identity(ring, n) - D, L)
    rhs = log_product(moves, n, ring, L)
    if not lhs.eq_mod(rhs, L):
        raise NormEscape("X (I - D) does not reproduce the logged product")
    return MoveLog([(None, m) for m in X], L, "simple_decompose"), D
