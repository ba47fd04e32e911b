"""Text formats for posets, facet complexes and monotone maps.

The poset format stores elements and cover pairs; the canonical writer is
deterministic and the parser/writer round-trip is byte-identical on
canonical files.  Facet files carry one facet per token; map files embed
their source and target inline.
"""

from __future__ import annotations

import hashlib

from .core import CycleError, MonotoneMap, Poset
from .ops import FacetComplex

POSET_HEADER = "poset v1"
FACETS_HEADER = "facets v1"
MAP_HEADER = "map v1"


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


def _lines(text):
    out = []
    for k, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((k, line))
    return out


def _key_values(lines, start=0):
    fields = []
    for k, line in lines[start:]:
        if ":" not in line:
            raise ParseError("expected 'key: values'", k)
        key, rest = line.split(":", 1)
        fields.append((k, key.strip(), rest.split()))
    return fields


def parse_poset(text) -> Poset:
    lines = _lines(text)
    if not lines or lines[0][1] != POSET_HEADER:
        raise ParseError("missing '%s' header" % POSET_HEADER,
                         lines[0][0] if lines else 1)
    elements = None
    covers = []
    for k, key, vals in _key_values(lines, 1):
        if key == "elements":
            if elements is not None:
                raise ParseError("duplicate elements line", k)
            elements = vals
        elif key == "covers":
            for tok in vals:
                if "<" not in tok:
                    raise ParseError("cover %r is not of the form a<b"
                                     % (tok,), k)
                a, b = tok.split("<", 1)
                covers.append((a, b))
        else:
            raise ParseError("unknown key %r" % (key,), k)
    if elements is None:
        raise ParseError("missing elements line")
    try:
        return Poset.from_covers(elements, covers)
    except CycleError as e:
        raise ParseError("cycle through %s" % " < ".join(e.cycle)) from None
    except ValueError as e:
        raise ParseError(str(e)) from None


def write_poset(p: Poset) -> str:
    parts = [POSET_HEADER]
    parts.append("elements: " + " ".join(p.labels))
    covers = sorted((p.labels[i], p.labels[j]) for i, j in p.covers)
    parts.append("covers: " + " ".join("%s<%s" % c for c in covers))
    return "\n".join(parts) + "\n"


def parse_facets(text) -> FacetComplex:
    """Facet tokens are comma-split when they contain commas, else one
    single-character vertex per character ('abc' or 'v1,v2')."""
    lines = _lines(text)
    if not lines or lines[0][1] != FACETS_HEADER:
        raise ParseError("missing '%s' header" % FACETS_HEADER,
                         lines[0][0] if lines else 1)
    facets = []
    for k, key, vals in _key_values(lines, 1):
        if key != "facets":
            raise ParseError("unknown key %r" % (key,), k)
        for tok in vals:
            if "," in tok:
                facets.append([v for v in tok.split(",") if v])
            else:
                facets.append(list(tok))
    if not facets:
        raise ParseError("no facets given")
    try:
        return FacetComplex(facets)
    except ValueError as e:
        raise ParseError(str(e)) from None


def write_facets(k: FacetComplex) -> str:
    toks = []
    for f in k.facets:
        vs = sorted(f)
        if all(len(v) == 1 for v in vs):
            toks.append("".join(vs))
        else:
            toks.append(",".join(vs))
    return "%s\nfacets: %s\n" % (FACETS_HEADER, " ".join(toks))


def parse_map(text) -> MonotoneMap:
    lines = _lines(text)
    if not lines or lines[0][1] != MAP_HEADER:
        raise ParseError("missing '%s' header" % MAP_HEADER,
                         lines[0][0] if lines else 1)
    fields = {}
    for k, key, vals in _key_values(lines, 1):
        if key in fields:
            raise ParseError("duplicate key %r" % (key,), k)
        fields[(key)] = (k, vals)
    for need in ("source", "source-covers", "target", "target-covers",
                 "table"):
        if need not in fields:
            raise ParseError("missing %r line" % (need,))

    def covers_of(key):
        k, vals = fields[key]
        out = []
        for tok in vals:
            if "<" not in tok:
                raise ParseError("cover %r is not of the form a<b" % (tok,), k)
            out.append(tuple(tok.split("<", 1)))
        return out

    try:
        source = Poset.from_covers(fields["source"][1], covers_of("source-covers"))
        target = Poset.from_covers(fields["target"][1], covers_of("target-covers"))
    except (CycleError, ValueError) as e:
        raise ParseError(str(e)) from None
    table = {}
    k, vals = fields["table"]
    for tok in vals:
        if ">" not in tok:
            raise ParseError("table entry %r is not of the form a>b"
                             % (tok,), k)
        a, b = tok.split(">", 1)
        table[a] = b
    try:
        return MonotoneMap(source, target, table)
    except (KeyError, ValueError) as e:
        raise ParseError(str(e)) from None


def write_map(f: MonotoneMap) -> str:
    src, tgt = f.source, f.target
    parts = [MAP_HEADER]
    parts.append("source: " + " ".join(src.labels))
    parts.append("source-covers: " + " ".join(
        "%s<%s" % c for c in sorted((src.labels[i], src.labels[j])
                                    for i, j in src.covers)))
    parts.append("target: " + " ".join(tgt.labels))
    parts.append("target-covers: " + " ".join(
        "%s<%s" % c for c in sorted((tgt.labels[i], tgt.labels[j])
                                    for i, j in tgt.covers)))
    parts.append("table: " + " ".join(
        "%s>%s" % (src.labels[i], tgt.labels[f.table[i]])
        for i in range(src.n)))
    return "\n".join(parts) + "\n"


def load_subject(text):
    """Parse a poset or facet file by its header."""
    lines = _lines(text)
    if not lines:
        raise ParseError("empty file")
    head = lines[0][1]
    if head == POSET_HEADER:
        return parse_poset(text)
    if head == FACETS_HEADER:
        return parse_facets(text)
    if head == MAP_HEADER:
        return parse_map(text)
    raise ParseError("unknown header %r" % (head,), lines[0][0])


def subject_hash(obj) -> str:
    """Canonical content hash of a poset or facet complex."""
    if isinstance(obj, Poset):
        data = write_poset(obj)
    elif isinstance(obj, FacetComplex):
        data = write_facets(obj)
    else:
        raise TypeError("cannot hash %r" % (type(obj),))
    return hashlib.sha256(data.encode()).hexdigest()
