"""Truncated elements of the Novikov ring of a group with a character.

A :class:`NovikovSeries` is a finite integer combination of group elements
together with a *cutoff* L: it stands for every element of the completed ring
whose terms of character value >= L are exactly the stored ones.  Terms below
the cutoff are unknown and are never stored.  ``cutoff=None`` (``EXACT``)
marks a genuine group-ring element.

Norms are kept on the logarithmic scale, ``lognorm(x) = max chi(supp x)``, so
the multiplicative norm is ``exp(lognorm)``; this keeps every comparison exact.
"""

import re
from dataclasses import dataclass, field

from .chargroup import (MINUS_INFINITY, Character, GroupSpec, Scalar, chi_eval,
                        format_element, format_scalar, parse_scalar, smax, w_eval)
from .errors import ContextMismatch, NotAUnitForm

EXACT = None


def as_cutoff(L):
    if L is None or isinstance(L, Scalar):
        return L
    return Scalar.coerce(L)


@dataclass(frozen=True)
class NovikovRing:
    """The context shared by series: a group and a character on it."""

    group: GroupSpec
    chi: Character
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.chi.rank != self.group.rank:
            raise ContextMismatch("character rank differs from group rank")

    @classmethod
    def laurent(cls, weight=-1, name="t", orientation=None):
        """Z = <t> with chi(t) = weight."""
        return cls(GroupSpec("free_abelian", 1, orientation, (name,)),
                   Character((Scalar.coerce(weight),)))

    @property
    def d(self):
        return self.chi.d

    def chi_of(self, g):
        try:
            return self._cache[g]
        except KeyError:
            value = chi_eval(self.chi, self.group, g)
            self._cache[g] = value
            return value

    def w_of(self, g):
        return w_eval(self.group, g)

    def opposite(self):
        """The same group with character -chi (target of the involution)."""
        opp = self._cache.get("__opposite__")
        if opp is None:
            opp = NovikovRing(self.group, -self.chi)
            opp._cache["__opposite__"] = self
            self._cache["__opposite__"] = opp
        return opp

    def series(self, terms=None, cutoff=EXACT):
        return NovikovSeries(self, terms or {}, cutoff)

    def zero(self, cutoff=EXACT):
        return NovikovSeries(self, {}, cutoff)

    def one(self):
        return NovikovSeries(self, {self.group.identity: 1}, None, _trusted=True)

    def const(self, c):
        return NovikovSeries(self, {self.group.identity: c} if c else {}, None, _trusted=True)

    def monomial(self, g, c=1):
        self.group.check(g)
        return NovikovSeries(self, {g: c} if c else {}, None, _trusted=True)

    def gen(self, i=0, power=1, c=1):
        return self.monomial(self.group.generator(i, power), c)

    def parse(self, text):
        return parse_series(self, text)


def _sum_below(x, y, L):
    """x + y < L, skipping Scalar construction when all three are rational."""
    if not (x.b or y.b or L.b):
        return x.a + y.a < L.a
    return x + y < L


class NovikovSeries:
    """An element of the Novikov ring known modulo terms below ``cutoff``."""

    __slots__ = ("ring", "terms", "cutoff", "_lognorm", "_sorted")

    def __init__(self, ring, terms, cutoff=EXACT, _trusted=False):
        cutoff = as_cutoff(cutoff)
        self.ring = ring
        if _trusted:
            self.terms = terms
        else:
            clean = {}
            for g, c in terms.items():
                if c:
                    ring.group.check(g)
                    if cutoff is None or ring.chi_of(g) >= cutoff:
                        clean[g] = int(c)
            self.terms = clean
        self.cutoff = cutoff
        self._lognorm = None
        self._sorted = None

    # -- inspection ---------------------------------------------------------

    @property
    def exact(self):
        return self.cutoff is None

    def is_zero(self):
        """True if no term is known to be nonzero (zero modulo the cutoff)."""
        return not self.terms

    def coeff(self, g):
        return self.terms.get(g, 0)

    def sorted_terms(self):
        """``(g, c, chi(g))`` in canonical order: decreasing chi, then group order."""
        if self._sorted is None:
            ring = self.ring
            key = ring.group.sort_key
            items = [(g, c, ring.chi_of(g)) for g, c in self.terms.items()]
            items.sort(key=lambda item: key(item[0]))
            if all(not item[2].b for item in items):
                items.sort(key=lambda item: item[2].a, reverse=True)
            else:
                items.sort(key=lambda item: item[2], reverse=True)
            self._sorted = items
        return self._sorted

    def lognorm(self):
        if self._lognorm is None:
            items = self.sorted_terms()
            self._lognorm = items[0][2] if items else MINUS_INFINITY
        return self._lognorm

    def lognorm_floor(self):
        """max(lognorm, cutoff): a bound on every term, known or unknown."""
        nu = self.lognorm()
        if self.cutoff is None:
            return None if nu is MINUS_INFINITY else nu
        return self.cutoff if nu is MINUS_INFINITY else smax(nu, self.cutoff)

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, NovikovSeries):
            raise TypeError(f"cannot combine a series with {type(other).__name__}")
        if other.ring != self.ring:
            raise ContextMismatch("series over different rings")
        return other

    # -- ring operations ----------------------------------------------------

    def truncate(self, L):
        """p_L: drop every term with chi(g) < L; cutoff becomes max(cutoff, L)."""
        L = as_cutoff(L)
        if L is None:
            return self
        if self.cutoff is not None and L <= self.cutoff:
            return self
        ring = self.ring
        kept = {g: c for g, c in self.terms.items() if ring.chi_of(g) >= L}
        return NovikovSeries(ring, kept, L, _trusted=True)

    def __add__(self, other):
        other = self._check(other)
        if not other.terms and (other.cutoff is None or
                                (self.cutoff is not None and other.cutoff <= self.cutoff)):
            return self
        cutoff = smax(self.cutoff, other.cutoff)
        terms = dict(self.terms)
        for g, c in other.terms.items():
            s = terms.get(g, 0) + c
            if s:
                terms[g] = s
            else:
                del terms[g]
        if cutoff is not None and (cutoff != self.cutoff or cutoff != other.cutoff):
            ring = self.ring
            terms = {g: c for g, c in terms.items() if ring.chi_of(g) >= cutoff}
        return NovikovSeries(self.ring, terms, cutoff, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return NovikovSeries(self.ring, {g: -c for g, c in self.terms.items()},
                             self.cutoff, _trusted=True)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return self.ring.zero(self.cutoff)
            return NovikovSeries(self.ring, {g: c * other for g, c in self.terms.items()},
                                 self.cutoff, _trusted=True)
        return self.mul(other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def product_cutoff(self, other):
        """Sound cutoff of self*other under the ultrametric bound."""
        c1 = c2 = None
        if self.cutoff is not None:
            nu = other.lognorm_floor()
            if nu is not None:
                c1 = self.cutoff + nu
        if other.cutoff is not None:
            nu = self.lognorm_floor()
            if nu is not None:
                c2 = other.cutoff + nu
        return smax(c1, c2)

    def mul(self, other, L=None):
        """Convolution product, optionally truncated at L as it is formed."""
        other = self._check(other)
        ring = self.ring
        group = ring.group
        cutoff = smax(self.product_cutoff(other), as_cutoff(L))
        xs = self.sorted_terms()
        ys = other.sorted_terms()
        terms = {}
        if xs and ys:
            gmul = group.mul
            if cutoff is None:
                for g, c, _ in xs:
                    for h, e, _ in ys:
                        k = gmul(g, h)
                        terms[k] = terms.get(k, 0) + c * e
            else:
                floor = float(cutoff)
                margin = 1e-9 * (1.0 + abs(floor))
                for g, c, xg in xs:
                    fxg = float(xg)
                    for h, e, yh in ys:
                        s = fxg + float(yh)
                        if s < floor - margin:
                            break  # ys sorted by decreasing chi
                        if s < floor + margin and _sum_below(xg, yh, cutoff):
                            continue
                        k = gmul(g, h)
                        terms[k] = terms.get(k, 0) + c * e
            terms = {k: v for k, v in terms.items() if v}
        return NovikovSeries(ring, terms, cutoff, _trusted=True)

    def __pow__(self, k):
        if k < 0:
            raise ValueError("use geom_inv/unit_inverse for inverses")
        result = self.ring.one()
        for _ in range(k):
            result = result * self
        return result

    def eq_mod(self, other, L):
        """Equality of p_L(self) and p_L(other) on the terms both know."""
        other = self._check(other)
        return (self - other).truncate(L).is_zero()

    def involute(self):
        """g -> w(g) g^{-1}, landing in the ring of the opposite character."""
        ring = self.ring
        group = ring.group
        terms = {group.inv(g): c * ring.w_of(g) for g, c in self.terms.items()}
        return NovikovSeries(ring.opposite(), terms, self.cutoff, _trusted=True)

    # -- dunder plumbing ----------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, NovikovSeries):
            return NotImplemented
        return (self.ring == other.ring and self.terms == other.terms
                and self.cutoff == other.cutoff)

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.cutoff))

    def __repr__(self):
        return f"NovikovSeries({format_series(self)!r})"

    def __str__(self):
        return format_series(self)


# -- free functions mirroring the operation list ----------------------------

def lognorm(x):
    return x.lognorm()


def truncate(x, L):
    return x.truncate(L)


def add(x, y):
    return x + y


def neg(x):
    return -x


def mul(x, y, L=None):
    return x.mul(y, L)


def involute(x):
    return x.involute()


def eq_mod(x, y, L):
    return x.eq_mod(y, L)


def recognize_unit(u):
    """Factor u = sign * g * (1 - a) with lognorm(a) < 0, or return None.

    Succeeds exactly when u has a unique term of maximal character value and
    that term's coefficient is +-1.
    """
    items = u.sorted_terms()
    if not items:
        return None
    g0, c0, top = items[0]
    if c0 not in (1, -1):
        return None
    if len(items) > 1 and items[1][2] == top:
        return None
    ring = u.ring
    g0inv = ring.group.inv(g0)
    # a = 1 - sign * g0^{-1} u
    shifted = ring.monomial(g0inv, c0).mul(u)
    a = ring.one() - shifted
    return c0, g0, a


def _minimal_power_count(nu, L):
    """Smallest K >= 0 with (K + 1) * nu < L, for nu < 0."""
    K = 0
    while nu * (K + 1) >= L:
        K += 1
    return K


def geom_inv(u, L):
    """Inverse of u = 1 - a (lognorm a < 0) as sum_{k <= K} a^k, truncated at L."""
    L = as_cutoff(L)
    if L is None:
        raise ValueError("geom_inv needs a finite cutoff L")
    ring = u.ring
    a = ring.one() - u
    nu = a.lognorm()
    if nu is not MINUS_INFINITY and nu >= 0:
        raise NotAUnitForm(f"{u} is not of the form 1 - a with ||a|| < 1")
    if nu is MINUS_INFINITY:
        return ring.one().truncate(smax(L, a.cutoff))
    K = _minimal_power_count(nu, L)
    total = ring.one().truncate(L)
    power = ring.one()
    for _ in range(K):
        power = power.mul(a, L)
        total = total + power
    return total


def unit_inverse(u, L):
    """Inverse of a recognizable unit sign*g*(1-a), known down to chi-value L."""
    L = as_cutoff(L)
    factored = recognize_unit(u)
    if factored is None:
        raise NotAUnitForm(f"{u} has no unique +-1-led leading term")
    sign, g, a = factored
    ring = u.ring
    one_minus_a = ring.one() - a
    nu = a.lognorm()
    lead = ring.chi_of(g)
    if nu is MINUS_INFINITY and a.cutoff is None:
        inv = ring.one()
    else:
        if L is None:
            raise ValueError("inverting a non-monomial unit needs a cutoff")
        inv = geom_inv(one_minus_a, L + lead)
    return inv.mul(ring.monomial(ring.group.inv(g), sign)).truncate(L)


# -- textual form -----------------------------------------------------------

def _format_term(group, g, c):
    mono = format_element(group, g)
    if not mono:
        return str(abs(c))
    if abs(c) == 1:
        return mono
    return f"{abs(c)}*{mono}"


def format_series(x, with_cutoff=True):
    """Canonical text: ``3 - 2*t1^2*t2^-1 + O(-4)``."""
    group = x.ring.group
    parts = []
    for g, c, _ in x.sorted_terms():
        body = _format_term(group, g, c)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    text = " ".join(parts) if parts else "0"
    if with_cutoff and x.cutoff is not None:
        text = f"{text} + O({format_scalar(x.cutoff)})" if parts else f"O({format_scalar(x.cutoff)})"
    return text


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\^\s*[+-]?\s*\d+)|([*+\-()]))")


def _tokenize(text):
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        num, name, power, sym = m.groups()
        if name == "O" and m.end() < len(text) and text[m.end():].lstrip().startswith("("):
            start = text.index("(", m.end())
            depth = 0
            for end in range(start, len(text)):
                if text[end] == "(":
                    depth += 1
                elif text[end] == ")":
                    depth -= 1
                    if depth == 0:
                        break
            else:
                raise ValueError(f"unbalanced O( in {text!r}")
            tokens.append(("O", text[start + 1:end]))
            pos = end + 1
            continue
        if num is not None:
            tokens.append(("int", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        elif power is not None:
            tokens.append(("pow", int(power[1:].replace(" ", ""))))
        else:
            tokens.append((sym, sym))
        pos = m.end()
    return tokens


def parse_series(ring, text):
    """Inverse of :func:`format_series`; also accepts a trailing ``exact``."""
    group = ring.group
    names = {name: i for i, name in enumerate(group.generators)}
    body = text.rstrip()
    if body.endswith("exact") and "exact" not in names:
        body = body[:-len("exact")]
    tokens = _tokenize(body)
    pos = 0

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def power_of(i):
        e = 1
        if peek() == "pow":
            e = take()[1]
        return group.generator(i, e)

    def factor():
        kind = peek()
        if kind == "int":
            return take()[1], group.identity
        if kind == "name":
            name = take()[1]
            if name not in names:
                raise ValueError(f"unknown generator {name!r} in {text!r}")
            return 1, power_of(names[name])
        if kind == "(":
            take()
            g = group.identity
            while peek() in ("name", "*"):
                if take()[0] == "*":
                    continue
                name = tokens[pos - 1][1]
                if name not in names:
                    raise ValueError(f"unknown generator {name!r} in {text!r}")
                g = group.mul(g, power_of(names[name]))
            if peek() != ")":
                raise ValueError(f"expected ')' in {text!r}")
            take()
            return 1, g
        raise ValueError(f"unexpected token {tokens[pos] if pos < len(tokens) else 'end'} in {text!r}")

    terms = {}
    cutoff = None
    sign = 1
    if peek() == "-":
        take()
        sign = -1
    elif peek() == "+":
        take()
    while True:
        if peek() == "O":
            cutoff = parse_scalar(take()[1].strip(), None)
        elif peek() == "name" and tokens[pos][1] == "exact":
            take()
        else:
            c, g = factor()
            while peek() == "*":
                take()
                c2, g2 = factor()
                c *= c2
                g = group.mul(g, g2)
            terms[g] = terms.get(g, 0) + sign * c
        if peek() is None:
            break
        op = take()[0]
        if op not in ("+", "-"):
            raise ValueError(f"expected + or - in {text!r}")
        sign = 1 if op == "+" else -1
    if cutoff is not None and cutoff.b and cutoff.d != ring.d:
        raise ContextMismatch(f"cutoff {cutoff} not in Q(sqrt {ring.d})")
    return NovikovSeries(ring, terms, cutoff)
