"""Torsion bookkeeping for move logs.

Every move the package emits is either elementary, a scaling by a unit
+-g(1-a), or a (de)stabilization, so each log certifies a class that dies
in Wh(G; chi).  The certificate also carries the finer K1/<+-g> data as one
accumulated unit ``1 - b``.

Sign convention: scaling a row of d[k] by u^p contributes u^(-p (-1)^(k+1)),
so cancelling the circle's pivot t - 1 records the factor 1 - t.  Matrix
logs (degree None) use the exponent -p.  Stabilizing with 1 - a contributes
the inverse of what cancelling that pivot again would record.
"""

from dataclasses import dataclass

from .chargroup import MINUS_INFINITY, Scalar
from .complexes import direct_sum, minimize, torsion_complex
from .errors import NotAUnitForm
from .matrix import (AddLeftMultiple, AddRightMultiple, Destabilize, MoveLog,
                     ScaleByUnit, Stabilize, SwapPair)
from .series import as_cutoff, geom_inv, recognize_unit

TRIVIAL_IN_WH = "trivial_in_wh"
UNIT_FORM = "unit_form"
UNKNOWN = "unknown"

DEFAULT_TORSION_CUTOFF = -10


@dataclass
class TorsionCertificate:
    kind: str
    sign: int = 1
    monomial: tuple = None
    unit: object = None  # accumulated 1 - b
    log: MoveLog = None
    diagnostic: str = ""
    strategy: str = ""
    cutoff: object = None

    @property
    def b(self):
        if self.unit is None:
            return None
        return self.unit.ring.one() - self.unit

    @property
    def trivial_in_wh(self):
        return self.kind == TRIVIAL_IN_WH

    def summary(self):
        if self.kind == UNKNOWN:
            return f"unknown: {self.diagnostic}"
        ring = self.unit.ring
        from .chargroup import format_element
        g = format_element(ring.group, self.monomial) if self.monomial is not None else ""
        g = g or "1"
        s = "+" if self.sign > 0 else "-"
        return f"{self.kind}: {s}{g} * ({self.unit})"


def _degree_sign(degree):
    if degree is None:
        return 1
    return 1 if (degree + 1) % 2 == 0 else -1


def _power(x, e, L):
    if e == 0:
        return x.ring.one()
    base = x if e > 0 else geom_inv(x, L)
    out = x.ring.one()
    for _ in range(abs(e)):
        out = out.mul(base, L)
    return out


def torsion_of_log(log, L=None):
    """Certificate for a log: always Wh-trivial, plus the accumulated unit."""
    if L is None:
        L = log.cutoff
    if L is None:
        L = Scalar(DEFAULT_TORSION_CUTOFF)
    L = as_cutoff(L)
    ring = None
    for _, move in log:
        for attr in ("a", "coeff", "unit"):
            x = getattr(move, attr, None)
            if x is not None:
                ring = x.ring
                break
        if ring is not None:
            break
    if ring is None:
        return TorsionCertificate(TRIVIAL_IN_WH, 1, None, None, log, "no unit factors",
                                  log.strategy, L)
    group = ring.group
    sign = 1
    mono = group.identity
    unit = ring.one()
    for degree, move in log:
        eps = _degree_sign(degree)
        if isinstance(move, ScaleByUnit):
            e = -move.power * eps
            if e % 2:
                sign *= move.sign
            mono = group.mul(mono, group.pow(move.g, e))
            unit = unit.mul(_power(ring.one() - move.a, e, L), L)
        elif isinstance(move, Stabilize):
            u = move.unit if move.unit is not None else ring.one()
            _, _, a = recognize_unit(u)
            unit = unit.mul(_power(ring.one() - a, -eps, L), L)
        elif not isinstance(move, (AddLeftMultiple, AddRightMultiple, SwapPair, Destabilize)):
            return TorsionCertificate(UNKNOWN, log=log, diagnostic=f"unrecognized move {move!r}",
                                      strategy=log.strategy, cutoff=L)
    return TorsionCertificate(TRIVIAL_IN_WH, sign, mono, unit.truncate(L), log, "",
                              log.strategy, L)


def latour_obstruction(C, L=None, max_steps=100, search_depth=0):
    """Wh-trivial certificate when minimization empties C, Unknown otherwise."""
    M, log, report = minimize(C, max_steps=max_steps, search_depth=search_depth, L=L)
    if report["status"] != "empty":
        return TorsionCertificate(
            UNKNOWN, log=log, strategy=log.strategy, cutoff=log.cutoff,
            diagnostic=f"not witnessed acyclic: minimization stopped ({report['status']}) "
                       f"at ranks {report['final_ranks']}")
    return torsion_of_log(log, L if L is not None else log.cutoff)


def normal_form_Z(u):
    """u = sign * t^k * (1 - a) over G = Z; returns (sign, k, 1 - a)."""
    group = u.ring.group
    if group.kind != "free_abelian" or group.rank != 1:
        raise ValueError("normal_form_Z needs G = Z")
    factored = recognize_unit(u) if not u.is_zero() else None
    if factored is None:
        raise NotAUnitForm(f"{u} is not +-t^k(1-a)")
    sign, g, a = factored
    return sign, g[0], u.ring.one() - a


def realize_torsion(b, host, degrees=None, L=None):
    """host + C(1 - b) with the summand in degrees (i, i+1).

    The certificate returned is the expected class 1 - b of the seeded
    summand; minimizing the sum and reading its log recovers it.
    """
    ring = b.ring
    nu = b.lognorm()
    if nu is not MINUS_INFINITY and nu >= 0:
        raise NotAUnitForm(f"lognorm(b) = {nu} is not negative")
    if degrees is None:
        i = 2
    else:
        i = degrees[0]
        if degrees[1] != i + 1:
            raise ValueError("degrees must be consecutive")
    summand = torsion_complex(b, degree=i, L=L)
    total = direct_sum(host, summand)
    cert = TorsionCertificate(UNIT_FORM, 1, ring.group.identity, ring.one() - b,
                              None, "", "seeded", as_cutoff(L))
    return total, cert
