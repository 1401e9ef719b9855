"""Line-oriented text format for orbit-finite systems.

    ring Q                                # or Z, or Zmod 7
    set B = orbit(k=2, group=[(1 2)])     # unordered pairs
    set C = orbit(k=2, group=[])          # ordered pairs
    rows B
    cols C
    entry row (a,b) col (a,b) = 1
    target row (a,b) = 1/2

Integers inside patterns are atoms, lowercase names are variables standing
for pairwise distinct atoms outside every atom mentioned in the file.
When ``rows`` or ``cols`` lists several sets, each pattern is prefixed by
its set name: ``entry row B (a,b) col C (b) = 1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .atoms import PermGroup, parse_cycles
from .linvec import SymMatrix, SymVector
from .orbits import OrbitDecl, OrbitSet, canonical, format_entries, product_canonical
from .ring import QQ, Ring, RingError, ring_from_name


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        where = "" if line is None else f"line {line}" + ("" if col is None else f", col {col}")
        super().__init__(f"{where}: {msg}" if where else msg)
        self.line, self.col = line, col


@dataclass
class System:
    ring: Ring
    sets: dict
    rows: OrbitSet
    cols: OrbitSet
    A: SymMatrix
    t: SymVector
    support: frozenset = frozenset()
    entry_rules: int = 0
    target_rules: int = 0


_SET = re.compile(r"set\s+([A-Za-z]\w*)\s*=\s*orbit\(\s*k\s*=\s*(\d+)\s*,\s*group\s*=\s*\[(.*)\]\s*\)\s*$")
_VAR = re.compile(r"[a-z]\w*$")
_INT = re.compile(r"\d+$")
_COEF = re.compile(r"-?\d+(/\d+)?$")


def _parse_group(text, k, ln):
    """Comma-separated generators, each a product of cycles like ``(1 2)(3 4)``."""
    gens, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            gens.append(cur)
            cur = ""
            continue
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth < 0 or depth > 1:
            raise ParseError(f"malformed group [{text}]", ln)
        cur += ch
    gens.append(cur)
    gens = [g.strip() for g in gens if g.strip()]
    try:
        return PermGroup(k, [parse_cycles(g, k) for g in gens])
    except ValueError as exc:
        raise ParseError(str(exc), ln) from exc


def _parse_pattern(text, ln, col, names):
    """``(1, a, b)`` to raw entries; ``names`` maps variables to indices."""
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ParseError(f"expected a parenthesized pattern, got {text!r}", ln, col)
    body = text[1:-1].strip()
    items = [s.strip() for s in body.split(",")] if body else []
    out = []
    for it in items:
        if _INT.match(it):
            a = int(it)
            if a < 1:
                raise ParseError("atoms are positive integers", ln, col)
            out.append(a)
        elif _VAR.match(it):
            out.append(-1 - names.setdefault(it, len(names)))
        else:
            raise ParseError(f"bad pattern item {it!r}", ln, col)
    if len(set(out)) != len(out):
        raise ParseError(f"repeated atom or variable in {text}", ln, col)
    return tuple(out)


def _split_ref(text, side, sets_on_side, ln, col):
    """Optional leading set name, then a pattern."""
    text = text.strip()
    m = re.match(r"([A-Za-z]\w*)\s*(\(.*\))$", text)
    if m:
        sid, pat = m.group(1), m.group(2)
        if sid not in sets_on_side:
            raise ParseError(f"unknown {side} set {sid!r}", ln, col)
        return sid, pat
    if len(sets_on_side) != 1:
        raise ParseError(f"{side} pattern needs a set name ({', '.join(sets_on_side)})", ln, col)
    return sets_on_side[0], text


def parse(text: str, ring: Ring | None = None) -> System:
    """Parse a system description.  ``ring`` overrides the file's directive."""
    ring_decl = None
    sets: dict = {}
    rows_ids: list = []
    cols_ids: list = []
    entries = []
    targets = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split()[0]
        if word == "ring":
            try:
                ring_decl = ring_from_name(line[4:].strip())
            except RingError as exc:
                raise ParseError(str(exc), ln) from exc
        elif word == "set":
            m = _SET.match(line)
            if not m:
                raise ParseError("expected: set <Id> = orbit(k=<int>, group=[<cycles>])", ln)
            sid, k = m.group(1), int(m.group(2))
            if sid in sets:
                raise ParseError(f"set {sid!r} declared twice", ln)
            try:
                sets[sid] = OrbitDecl(sid, k, _parse_group(m.group(3), k, ln))
            except ValueError as exc:
                raise ParseError(str(exc), ln) from exc
        elif word in ("rows", "cols"):
            ids = line[4:].replace(",", " ").split()
            if not ids:
                raise ParseError(f"{word} needs a set name", ln)
            for sid in ids:
                if sid not in sets:
                    raise ParseError(f"unknown set {sid!r}", ln)
            (rows_ids if word == "rows" else cols_ids).extend(ids)
        elif word == "entry":
            m = re.match(r"entry\s+row\s+(.*?)\s+col\s+(.*?)\s*=\s*(\S+)\s*$", line)
            if not m:
                raise ParseError("expected: entry row <pat> col <pat> = <coef>", ln)
            entries.append((ln, raw.index("row"), m.group(1), m.group(2), m.group(3)))
        elif word == "target":
            m = re.match(r"target\s+row\s+(.*?)\s*=\s*(\S+)\s*$", line)
            if not m:
                raise ParseError("expected: target row <pat> = <coef>", ln)
            targets.append((ln, raw.index("row"), m.group(1), m.group(2)))
        else:
            raise ParseError(f"unknown directive {word!r}", ln, raw.index(word) + 1)
    if not rows_ids or not cols_ids:
        raise ParseError("both rows and cols must be declared")
    ring = ring or ring_decl or QQ
    rows = OrbitSet(tuple(sets[s] for s in rows_ids))
    cols = OrbitSet(tuple(sets[s] for s in cols_ids))

    def coef(text, ln):
        if not _COEF.match(text):
            raise ParseError(f"bad coefficient {text!r}", ln)
        try:
            return ring.parse(text)
        except (RingError, ZeroDivisionError) as exc:
            raise ParseError(f"coefficient {text}: {exc}", ln) from exc

    def check_arity(decl, pat, ln, col):
        if len(pat) != decl.arity:
            raise ParseError(f"pattern {format_entries(pat)} has arity {len(pat)}, "
                             f"set {decl.id} has arity {decl.arity}", ln, col)

    support = set()
    mat: dict = {}
    for ln, col, rtext, ctext, ctext_coef in entries:
        names: dict = {}
        rid, rpat = _split_ref(rtext, "row", rows_ids, ln, col)
        cid, cpat = _split_ref(ctext, "col", cols_ids, ln, col)
        r = _parse_pattern(rpat, ln, col, names)
        c = _parse_pattern(cpat, ln, col, names)
        check_arity(sets[rid], r, ln, col)
        check_arity(sets[cid], c, ln, col)
        support |= {a for a in r + c if a > 0}
        key = (rid, cid, product_canonical(sets[rid], sets[cid], r, c))
        v = coef(ctext_coef, ln)
        if key in mat and mat[key][0] != v:
            raise ParseError(f"rule conflicts with line {mat[key][1]} (same product orbit, "
                             f"different coefficient)", ln)
        mat.setdefault(key, (v, ln))
    tgt: dict = {}
    for ln, col, rtext, vtext in targets:
        rid, rpat = _split_ref(rtext, "row", rows_ids, ln, col)
        r = _parse_pattern(rpat, ln, col, {})
        check_arity(sets[rid], r, ln, col)
        support |= {a for a in r if a > 0}
        key = (rid, canonical(r, sets[rid].group))
        v = coef(vtext, ln)
        if key in tgt and tgt[key][0] != v:
            raise ParseError(f"target rule conflicts with line {tgt[key][1]}", ln)
        tgt.setdefault(key, (v, ln))
    S = frozenset(support)
    A = SymMatrix(rows, cols, S, {k: v for k, (v, _) in mat.items() if v})
    t = SymVector(rows, S, {k: v for k, (v, _) in tgt.items() if v})
    return System(ring, sets, rows, cols, A, t, S, len(entries), len(targets))


def _cycles(g) -> str:
    seen, out = set(), []
    for i in range(len(g)):
        if i in seen or g[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = g[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out)


def _names(entries, names):
    out = []
    for e in entries:
        if e > 0:
            out.append(str(e))
        else:
            i = -1 - e
            out.append(names[i])
    return "(" + ",".join(out) + ")"


def _var_names(n):
    letters = "abcdefghijklmnopqrstuvwxyz"
    return [letters[i] if i < 26 else f"v{i}" for i in range(n)]


def format_system(sys: System) -> str:
    """Text that parses back to the same canonical system."""
    lines = [f"ring {sys.ring}"]
    for decl in sys.sets.values():
        gens = [_cycles(g) for g in decl.group.generators if _cycles(g)]
        lines.append(f"set {decl.id} = orbit(k={decl.arity}, group=[{', '.join(gens)}])")
    lines.append("rows " + " ".join(o.id for o in sys.rows))
    lines.append("cols " + " ".join(o.id for o in sys.cols))
    multi_r, multi_c = len(sys.rows) > 1, len(sys.cols) > 1
    for (rid, cid, (r, c)), v in sys.A.items():
        nv = max([-e for e in r + c if e < 0], default=0)
        names = _var_names(nv)
        rp = (rid + " " if multi_r else "") + _names(r, names)
        cp = (cid + " " if multi_c else "") + _names(c, names)
        lines.append(f"entry row {rp} col {cp} = {sys.ring.fmt(v)}")
    for (rid, p), v in sys.t.items():
        names = _var_names(max([-e for e in p if e < 0], default=0))
        rp = (rid + " " if multi_r else "") + _names(p, names)
        lines.append(f"target row {rp} = {sys.ring.fmt(v)}")
    return "\n".join(lines) + "\n"
