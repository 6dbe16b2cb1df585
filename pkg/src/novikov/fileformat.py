"""JSON documents for complexes and move logs.

A document looks like::

    {
      "group": {"kind": "free_abelian", "rank": 2, "generators": ["t", "s"],
                "orientation": [1, 1]},
      "character": {"d": 2, "weights": ["-1", "0"]},
      "complex": {"top": 2, "ranks": [1, 2, 1],
                  "boundaries": {"1": [["t - 1"], ["s - 1"]],
                                 "2": [["s - 1", "1 - t"]]}},
      "cutoff": "exact"
    }

Boundary ``k`` is a ``ranks[k] x ranks[k-1]`` array of series strings; row p
lists the incidences of generator p.  ``cutoff`` is ``"exact"`` or a scalar
such as ``"-8"`` or ``"-3/2+sqrt(2)"``; every entry is truncated there on load.
"""

import json
import re

from .chargroup import Character, GroupSpec, format_element, format_scalar, parse_scalar
from .complexes import BasedComplex, validate
from .errors import ComplexInvalid, DocumentError
from .matrix import (AddLeftMultiple, AddRightMultiple, Destabilize, MoveLog,
                     NovMatrix, ScaleByUnit, Stabilize, SwapPair)
from .series import NovikovRing, format_series, parse_series


def _need(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"missing field {key!r}", where)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise DocumentError(f"field {key!r} has the wrong type", f"{where}.{key}")
    return value


def ring_from_json(doc):
    g = _need(doc, "group", "")
    kind = g.get("kind", "free_abelian")
    rank = _need(g, "rank", "group", int)
    try:
        group = GroupSpec(kind, rank, tuple(g["orientation"]) if g.get("orientation") else None,
                          tuple(g["generators"]) if g.get("generators") else None)
    except (ValueError, TypeError) as exc:
        raise DocumentError(str(exc), "group") from exc
    c = _need(doc, "character", "")
    weights = _need(c, "weights", "character", list)
    d = c.get("d")
    try:
        values = tuple(parse_scalar(str(w), d) for w in weights)
        chi = Character(values, d)
        return NovikovRing(group, chi)
    except (ValueError, TypeError) as exc:
        raise DocumentError(str(exc), "character") from exc


def ring_to_json(ring):
    g = ring.group
    return {
        "group": {"kind": g.kind, "rank": g.rank, "generators": list(g.generators),
                  "orientation": list(g.orientation)},
        "character": {"d": ring.chi.d, "weights": [format_scalar(w) for w in ring.chi.weights]},
    }


def _parse_cutoff(text, ring, where="cutoff"):
    if text is None or text == "exact":
        return None
    try:
        return parse_scalar(str(text), ring.d)
    except ValueError as exc:
        raise DocumentError(str(exc), where) from exc


def _cutoff_text(L):
    return "exact" if L is None else format_scalar(L)


def from_document(doc, check=True):
    ring = ring_from_json(doc)
    body = _need(doc, "complex", "")
    ranks = _need(body, "ranks", "complex", list)
    if not all(isinstance(r, int) and r >= 0 for r in ranks):
        raise DocumentError("ranks must be non-negative integers", "complex.ranks")
    top = body.get("top", len(ranks) - 1)
    if top != len(ranks) - 1:
        raise DocumentError(f"top {top} disagrees with {len(ranks)} ranks", "complex.top")
    L = _parse_cutoff(doc.get("cutoff", "exact"), ring)
    raw = body.get("boundaries", {})
    if not isinstance(raw, dict):
        raise DocumentError("boundaries must map degrees to arrays", "complex.boundaries")
    d = {}
    for key, rows in raw.items():
        where = f"complex.boundaries.{key}"
        try:
            k = int(key)
        except ValueError:
            raise DocumentError("degree keys must be integers", where) from None
        if not 1 <= k <= top:
            raise DocumentError(f"degree {k} outside 1..{top}", where)
        if not isinstance(rows, list) or len(rows) != ranks[k]:
            raise DocumentError(f"expected {ranks[k]} rows", where)
        entries = []
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != ranks[k - 1]:
                raise DocumentError(f"expected {ranks[k - 1]} entries", f"{where}[{i}]")
            out = []
            for j, text in enumerate(row):
                try:
                    x = parse_series(ring, str(text))
                except ValueError as exc:
                    raise DocumentError(str(exc), f"{where}[{i}][{j}]") from exc
                out.append(x.truncate(L) if L is not None else x)
            entries.append(out)
        d[k] = NovMatrix(ring, entries, ranks[k], ranks[k - 1])
    labels = body.get("labels")
    try:
        C = BasedComplex(ring, ranks, d, labels)
    except ValueError as exc:
        raise DocumentError(str(exc), "complex") from exc
    if check:
        report = validate(C)
        if not report.ok:
            raise ComplexInvalid(report.failures)
    return C


def to_document(C):
    doc = ring_to_json(C.ring)
    boundaries = {}
    for k in range(1, C.top + 1):
        M = C.boundary(k)
        boundaries[str(k)] = [[format_series(x) for x in row] for row in M.entries] \
            if M.rows else []
    body = {"top": C.top, "ranks": list(C.ranks), "boundaries": boundaries}
    if C.labels is not None:
        body["labels"] = [list(l) for l in C.labels]
    doc["complex"] = body
    doc["cutoff"] = _cutoff_text(C.cutoff)
    return doc


_FLAT_LIST = re.compile(r'\[\s*((?:"[^"\\]*"|-?\d+|null)(?:,\s*(?:"[^"\\]*"|-?\d+|null))*)\s*\]')


def dumps(obj):
    """Canonical JSON: two-space indent, innermost arrays kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    text = _FLAT_LIST.sub(lambda m: "[" + ", ".join(
        part.strip() for part in re.split(r',\s*(?=(?:"[^"\\]*"|-?\d+|null)(?:,|$))',
                                          m.group(1))) + "]", text)
    return text + "\n"


def loads(text, check=True):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}, column {exc.colno}") \
            from exc
    return from_document(doc, check)


def load(path, check=True):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), check)


def store(C, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(to_document(C)))


# -- move logs ----------------------------------------------------------------

def _element_text(group, g):
    return format_element(group, g) or "1"


def _parse_element(ring, text, where):
    x = parse_series(ring, text)
    terms = x.sorted_terms()
    if len(terms) != 1 or terms[0][1] != 1:
        raise DocumentError(f"{text!r} is not a group element", where)
    return terms[0][0]


def move_to_json(move, degree=None):
    out = {"degree": degree, "move": type(move).__name__}
    if isinstance(move, (AddLeftMultiple, AddRightMultiple)):
        out.update(target=move.target, source=move.source, coeff=format_series(move.coeff))
    elif isinstance(move, ScaleByUnit):
        out.update(index=move.index, sign=move.sign,
                   g=_element_text(move.a.ring.group, move.g), a=format_series(move.a),
                   power=move.power, side=move.side,
                   prec=None if move.prec is None else format_scalar(move.prec))
    elif isinstance(move, SwapPair):
        out.update(i=move.i, j=move.j, side=move.side)
    elif isinstance(move, Stabilize):
        out.update(unit=None if move.unit is None else format_series(move.unit),
                   row=move.row, col=move.col)
    elif isinstance(move, Destabilize):
        out.update(row=move.row, col=move.col)
    else:
        raise TypeError(f"cannot serialize {move!r}")
    return out


def move_from_json(ring, obj, where="move"):
    kind = _need(obj, "move", where, str)
    try:
        if kind in ("AddLeftMultiple", "AddRightMultiple"):
            cls = AddLeftMultiple if kind == "AddLeftMultiple" else AddRightMultiple
            return cls(obj["target"], obj["source"], parse_series(ring, obj["coeff"]))
        if kind == "ScaleByUnit":
            prec = obj.get("prec")
            return ScaleByUnit(obj["index"], obj["sign"], _parse_element(ring, obj["g"], where),
                               parse_series(ring, obj["a"]), obj.get("power", -1),
                               obj.get("side", "left"),
                               None if prec is None else parse_scalar(prec, ring.d))
        if kind == "SwapPair":
            return SwapPair(obj["i"], obj["j"], obj.get("side", "left"))
        if kind == "Stabilize":
            unit = obj.get("unit")
            return Stabilize(None if unit is None else parse_series(ring, unit),
                             obj.get("row"), obj.get("col"))
        if kind == "Destabilize":
            return Destabilize(obj.get("row"), obj.get("col"))
    except (KeyError, ValueError, TypeError) as exc:
        raise DocumentError(f"bad {kind}: {exc}", where) from exc
    raise DocumentError(f"unknown move kind {kind!r}", where)


def log_to_json(log):
    return {"cutoff": _cutoff_text(log.cutoff), "strategy": log.strategy,
            "moves": [move_to_json(m, k) for k, m in log]}


def log_from_json(ring, obj):
    moves = _need(obj, "moves", "log", list)
    entries = [(m.get("degree"), move_from_json(ring, m, f"log.moves[{i}]"))
               for i, m in enumerate(moves)]
    return MoveLog(entries, _parse_cutoff(obj.get("cutoff"), ring, "log.cutoff"),
                   obj.get("strategy", ""))


def certificate_to_json(cert):
    out = {"kind": cert.kind, "strategy": cert.strategy,
           "cutoff": _cutoff_text(cert.cutoff)}
    if cert.unit is not None:
        group = cert.unit.ring.group
        out["sign"] = cert.sign
        out["monomial"] = _element_text(group, cert.monomial if cert.monomial is not None
                                        else group.identity)
        out["unit"] = format_series(cert.unit)
    if cert.diagnostic:
        out["diagnostic"] = cert.diagnostic
    if cert.log is not None:
        out["log"] = log_to_json(cert.log)
    return out


def matrix_from_document(doc):
    """A bare matrix document: the ring header plus ``"matrix"`` and ``"cutoff"``."""
    ring = ring_from_json(doc)
    rows = _need(doc, "matrix", "", list)
    L = _parse_cutoff(doc.get("cutoff", "exact"), ring)
    width = len(rows[0]) if rows else 0
    entries = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != width:
            raise DocumentError(f"expected {width} entries", f"matrix[{i}]")
        out = []
        for j, text in enumerate(row):
            try:
                x = parse_series(ring, str(text))
            except ValueError as exc:
                raise DocumentError(str(exc), f"matrix[{i}][{j}]") from exc
            out.append(x.truncate(L) if L is not None else x)
        entries.append(out)
    return NovMatrix(ring, entries, len(rows), width)


def matrix_to_document(M):
    doc = ring_to_json(M.ring)
    doc["matrix"] = [[format_series(x) for x in row] for row in M.entries]
    doc["cutoff"] = _cutoff_text(M.cutoff)
    return doc
