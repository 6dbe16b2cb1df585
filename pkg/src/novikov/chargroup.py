"""Groups with solvable normal forms and exact real-valued characters.

Group elements are plain tuples so they hash cheaply and can key the term
dictionaries of :class:`~novikov.series.NovikovSeries`:

* free abelian group of rank n: a length-n tuple of integer exponents;
* free group of rank n: a freely reduced word, one nonzero integer per letter,
  ``k`` meaning generator ``k`` and ``-k`` its inverse (generators count from 1).

Character values live in the ordered field Q(sqrt d) and are represented by
:class:`Scalar`.
"""

import math
import os
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from .errors import ContextMismatch

DEFAULT_D = 2


def default_d():
    """Session default for d; the ``NOVIKOV_D`` environment variable wins."""
    value = os.environ.get("NOVIKOV_D")
    if value is None:
        return DEFAULT_D
    d = int(value)
    if not is_squarefree(d):
        raise ValueError(f"NOVIKOV_D={value} is not a square-free integer > 1")
    return d


def is_squarefree(d):
    if d < 2:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _sign(x):
    return (x > 0) - (x < 0)


class _MinusInfinity:
    """Log-norm of the zero element. Compares below every Scalar."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "-inf"

    __str__ = __repr__

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("novikov.-inf")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("-(-inf) is not representable")

    def __float__(self):
        return -math.inf


MINUS_INFINITY = _MinusInfinity()

# relative gap above which float comparison is trusted; below it we decide exactly
_FILTER_EPS = 1e-9


@total_ordering
class Scalar:
    """Exact element a + b*sqrt(d) of the real quadratic field Q(sqrt d).

    Rational scalars (b == 0) are compatible with every d.
    """

    __slots__ = ("a", "b", "d", "_approx", "_hash")

    def __init__(self, a=0, b=0, d=None):
        a = Fraction(a)
        b = Fraction(b)
        if d is None:
            d = default_d()
        self.a = a
        self.b = b
        self.d = d
        self._approx = float(a) + (float(b) * math.sqrt(d) if b else 0.0)
        self._hash = None

    @classmethod
    def coerce(cls, x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, str):
            return parse_scalar(x)
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot interpret {x!r} as a Scalar")

    def _d_with(self, other):
        if self.b and other.b and self.d != other.d:
            raise ContextMismatch(f"sqrt({self.d}) and sqrt({other.d}) mixed")
        return self.d if self.b else other.d

    def is_rational(self):
        return self.b == 0

    def sign(self):
        """Exact sign of a + b*sqrt(d)."""
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __add__(self, other):
        if other is MINUS_INFINITY:
            return other
        other = Scalar.coerce(other)
        return Scalar(self.a + other.a, self.b + other.b, self._d_with(other))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return Scalar(self.a * other, self.b * other, self.d)
        if other is MINUS_INFINITY:
            return NotImplemented
        other = Scalar.coerce(other)
        d = self._d_with(other)
        return Scalar(self.a * other.a + self.b * other.b * d,
                      self.a * other.b + self.b * other.a, d)

    __rmul__ = __mul__

    def cmp(self, other):
        """Three-way comparison: -1, 0 or 1."""
        if other is MINUS_INFINITY:
            return 1
        other = Scalar.coerce(other)
        x, y = self._approx, other._approx
        if abs(x - y) > _FILTER_EPS * (1.0 + abs(x) + abs(y)):
            return 1 if x > y else -1
        self._d_with(other)
        return Scalar(self.a - other.a, self.b - other.b, self.d).sign()

    def __eq__(self, other):
        if other is MINUS_INFINITY:
            return False
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = Scalar.coerce(other)
        return self.a == other.a and self.b == other.b and (
            self.b == 0 or self.d == other.d)

    def __lt__(self, other):
        if other is MINUS_INFINITY:
            return False
        return self.cmp(other) < 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.a, self.b, self.d if self.b else 0))
        return self._hash

    def __float__(self):
        return self._approx

    def __repr__(self):
        return f"Scalar({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


def _fmt_q(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x):
    """Render as ``a`` or ``a+b*sqrt(d)``; inverse of :func:`parse_scalar`."""
    if x is MINUS_INFINITY:
        return "-inf"
    if x.b == 0:
        return _fmt_q(x.a)
    b = x.b
    if b == 1:
        root = f"sqrt({x.d})"
    elif b == -1:
        root = f"-sqrt({x.d})"
    else:
        root = f"{_fmt_q(b)}*sqrt({x.d})"
    if x.a == 0:
        return root
    if root.startswith("-"):
        return f"{_fmt_q(x.a)}{root}"
    return f"{_fmt_q(x.a)}+{root}"


_Q = r"\d+(?:/\d+)?"
_RATIONAL_RE = re.compile(rf"^[+-]?{_Q}$")
_ROOT = rf"(?P<sign>[+-])?(?:(?P<b>{_Q})\*)?sqrt\((?P<d>\d+)\)$"
_ROOT_RE = re.compile(rf"^{_ROOT}")
_MIXED_RE = re.compile(rf"^(?P<a>[+-]?{_Q})(?=[+-]){_ROOT}")


def parse_scalar(text, d=None):
    """Parse ``"a"``, ``"b*sqrt(d)"`` or ``"a+b*sqrt(d)"`` with exact rationals a, b."""
    s = text.replace(" ", "")
    if _RATIONAL_RE.match(s):
        return Scalar(Fraction(s), 0, d)
    m = _MIXED_RE.match(s) or _ROOT_RE.match(s)
    if m is None:
        raise ValueError(f"malformed scalar {text!r}")
    a = Fraction(m.group("a")) if "a" in m.groupdict() and m.group("a") else Fraction(0)
    b = Fraction(m.group("b")) if m.group("b") else Fraction(1)
    if m.group("sign") == "-":
        b = -b
    root = int(m.group("d"))
    if not is_squarefree(root):
        raise ValueError(f"sqrt({root}): d must be square-free and > 1")
    if d is not None and root != d:
        raise ContextMismatch(f"sqrt({root}) used where d = {d}")
    return Scalar(a, b, root)


def scalar_cmp(x, y):
    """Exact total order on scalars (MINUS_INFINITY below everything)."""
    if x is MINUS_INFINITY:
        return 0 if y is MINUS_INFINITY else -1
    return x.cmp(y)


def smax(*xs):
    """Maximum treating ``None`` (an exact, untruncated value) as -infinity."""
    best = None
    for x in xs:
        if x is None or x is MINUS_INFINITY:
            continue
        if best is None or x > best:
            best = x
    return best


@dataclass(frozen=True)
class GroupSpec:
    kind: str = "free_abelian"
    rank: int = 1
    orientation: tuple = None
    generators: tuple = None

    def __post_init__(self):
        if self.kind not in ("free_abelian", "free"):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        orientation = self.orientation or (1,) * self.rank
        orientation = tuple(int(s) for s in orientation)
        if len(orientation) != self.rank or any(s not in (1, -1) for s in orientation):
            raise ValueError(f"orientation must be {self.rank} signs in {{+1,-1}}")
        object.__setattr__(self, "orientation", orientation)
        names = self.generators or tuple(f"g{i + 1}" for i in range(self.rank))
        names = tuple(names)
        if len(names) != self.rank or len(set(names)) != self.rank:
            raise ValueError("generator names must be distinct, one per generator")
        for name in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
                raise ValueError(f"bad generator name {name!r}")
        object.__setattr__(self, "generators", names)

    @property
    def abelian(self):
        return self.kind == "free_abelian"

    @property
    def identity(self):
        return (0,) * self.rank if self.abelian else ()

    def check(self, g):
        if self.abelian:
            if len(g) != self.rank:
                raise ContextMismatch(f"{g} is not an element of Z^{self.rank}")
        else:
            for x in g:
                if x == 0 or abs(x) > self.rank:
                    raise ContextMismatch(f"letter {x} out of range for F_{self.rank}")
        return g

    def mul(self, g, h):
        if self.abelian:
            if len(g) != self.rank or len(h) != self.rank:
                raise ContextMismatch("exponent vectors of the wrong length")
            return tuple(x + y for x, y in zip(g, h))
        # free reduction at the seam only: both inputs are reduced
        k = 0
        n = min(len(g), len(h))
        while k < n and g[len(g) - 1 - k] == -h[k]:
            k += 1
        return g[:len(g) - k] + h[k:]

    def inv(self, g):
        if self.abelian:
            return tuple(-x for x in g)
        return tuple(-x for x in reversed(g))

    def pow(self, g, k):
        if k < 0:
            g, k = self.inv(g), -k
        result = self.identity
        for _ in range(k):
            result = self.mul(result, g)
        return result

    def reduce(self, word):
        """Freely reduce an arbitrary letter sequence (free groups only)."""
        out = []
        for x in word:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        return tuple(out)

    def generator(self, i, power=1):
        """The element gen_i^power, i counting from 0."""
        if self.abelian:
            e = [0] * self.rank
            e[i] = power
            return tuple(e)
        letter = i + 1 if power > 0 else -(i + 1)
        return (letter,) * abs(power)

    def abelianize(self, g):
        if self.abelian:
            return g
        e = [0] * self.rank
        for x in g:
            e[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(e)

    def sort_key(self, g):
        # length first keeps words with few letters ahead; then lexicographic
        return (len(g), g) if not self.abelian else g


def w_eval(spec, g):
    """Orientation character w(g) in {+1, -1}."""
    sign = 1
    for s, e in zip(spec.orientation, spec.abelianize(g)):
        if s == -1 and e % 2:
            sign = -sign
    return sign


def group_mul(spec, g, h):
    return spec.mul(spec.check(g), spec.check(h))


@dataclass(frozen=True)
class Character:
    """Homomorphism G -> Q(sqrt d) given by its values on the generators."""

    weights: tuple
    d: int = None

    def __post_init__(self):
        d = self.d if self.d is not None else default_d()
        weights = tuple(Scalar.coerce(w) if not isinstance(w, str) else parse_scalar(w)
                        for w in self.weights)
        for w in weights:
            if w.b and w.d != d:
                if self.d is None:
                    d = w.d
                else:
                    raise ContextMismatch(f"weight {w} does not live in Q(sqrt {d})")
        weights = tuple(Scalar(w.a, w.b, d) for w in weights)
        if not weights:
            raise ValueError("a character needs at least one weight")
        if all(w.sign() == 0 for w in weights):
            raise ValueError("the zero homomorphism is not a character")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "d", d)

    @property
    def rank(self):
        return len(self.weights)

    def __neg__(self):
        return Character(tuple(-w for w in self.weights), self.d)

    def eval_exponents(self, exps):
        a = Fraction(0)
        b = Fraction(0)
        for w, e in zip(self.weights, exps):
            if e:
                a += w.a * e
                b += w.b * e
        return Scalar(a, b, self.d)


def chi_eval(character, spec, g):
    if character.rank != spec.rank:
        raise ContextMismatch(
            f"character of rank {character.rank} on a group of rank {spec.rank}")
    return character.eval_exponents(spec.abelianize(spec.check(g)))


def format_element(spec, g):
    """``t1^2*t2^-1`` style for free abelian groups, ``(a b^-1)`` for words."""
    names = spec.generators
    if spec.abelian:
        parts = []
        for name, e in zip(names, g):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts)
    if not g:
        return ""
    # collapse runs of the same letter into powers
    parts = []
    i = 0
    while i < len(g):
        j = i
        while j < len(g) and g[j] == g[i]:
            j += 1
        name = names[abs(g[i]) - 1]
        power = (j - i) * (1 if g[i] > 0 else -1)
        parts.append(name if power == 1 else f"{name}^{power}")
        i = j
    return "(" + " ".join(parts) + ")"
