"""Text formats for algebras, bases, conditions, families and set maps.

Every format allows ``#`` comments and blank lines. Printers emit a canonical
form, so ``format(parse(text))`` is stable under a second round trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .algebra import PresentedAlgebra, row_from_bits
from .base import Base
from .forcing.conditions import Condition, SParams


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.col = col


def _lines(text: str):
    """Yield ``(lineno, stripped content)`` for non-empty lines, comments removed."""
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body


def _header(lines: list, expected: tuple[str, ...]) -> str:
    if not lines:
        raise FormatError("empty file")
    no, body = lines[0]
    if body not in expected:
        raise FormatError(f"unknown header {body!r}, expected one of {', '.join(expected)}", no, 1)
    return body


def _ints(tokens, no: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError as e:
        raise FormatError(f"expected integers: {e}", no) from None


def read_text(path) -> str:
    return Path(path).read_text()


# ---------------------------------------------------------------------------
# algebras


def parse_algebra(text: str) -> PresentedAlgebra:
    lines = list(_lines(text))
    _header(lines, ("algebra v1",))
    n = None
    bits = []
    for no, body in lines[1:]:
        key, _, rest = body.partition(" ")
        rest = rest.strip()
        if key == "w":
            if n is not None:
                raise FormatError("repeated w line", no, 1)
            (n,) = _ints([rest], no)
        elif key == "f":
            if n is None:
                raise FormatError("f line before w line", no, 1)
            if len(rest) != n or any(c not in "01" for c in rest):
                raise FormatError(f"row {rest!r} is not a bitstring of length {n}", no, 3)
            bits.append(rest)
        else:
            raise FormatError(f"unknown key {key!r}", no, 1)
    if n is None:
        raise FormatError("missing w line")
    return PresentedAlgebra.from_rows(n, [row_from_bits(b) for b in bits])


def format_algebra(alg: PresentedAlgebra) -> str:
    out = ["algebra v1", f"w {alg.n}"]
    out += [f"f {b}" for b in alg.bitstrings()]
    return "\n".join(out) + "\n"


def algebra_notes(alg: PresentedAlgebra) -> list[str]:
    if alg.dropped_duplicates:
        return [f"dropped {alg.dropped_duplicates} duplicate row(s)"]
    return []


# ---------------------------------------------------------------------------
# bases and strings


def _string(tok: str, no: int) -> tuple:
    if tok == "-":
        return ()
    if not tok.isdigit():
        raise FormatError(f"bad string {tok!r} (digits or '-')", no)
    return tuple(int(c) for c in tok)


def format_string(s) -> str:
    return "".join(map(str, s)) or "-"


def parse_base(text: str) -> Base:
    lines = list(_lines(text))
    _header(lines, ("base v1",))
    depth = alphabet = chi = None
    A, eta = set(), {}
    for no, body in lines[1:]:
        toks = body.split()
        key = toks[0]
        if key == "depth":
            (depth,) = _ints(toks[1:], no)
        elif key == "alphabet":
            (alphabet,) = _ints(toks[1:], no)
        elif key == "chi":
            chi = tuple(_ints(toks[1:], no))
        elif key == "A":
            if len(toks) != 2:
                raise FormatError("expected 'A STRING'", no)
            A.add(_string(toks[1], no))
        elif key == "eta":
            if len(toks) != 3:
                raise FormatError("expected 'eta INDEX STRING'", no)
            (idx,) = _ints(toks[1:2], no)
            if idx in eta:
                raise FormatError(f"repeated eta index {idx}", no)
            eta[idx] = _string(toks[2], no)
        else:
            raise FormatError(f"unknown key {key!r}", no, 1)
    if depth is None or alphabet is None or chi is None:
        raise FormatError("depth, alphabet and chi lines are required")
    if alphabet > 10:
        raise FormatError("alphabets above 10 cannot be written with single digits")
    if sorted(eta) != list(range(len(eta))):
        raise FormatError("eta indices must be 0..L-1")
    try:
        return Base(depth, alphabet, chi, frozenset(A), tuple(eta[k] for k in range(len(eta))))
    except ValueError as e:
        raise FormatError(str(e)) from None


def format_base(b: Base) -> str:
    out = ["base v1", f"depth {b.depth}", f"alphabet {b.alphabet}", "chi " + " ".join(map(str, b.chi))]
    out += [f"A {format_string(a)}" for a in sorted(b.A, key=lambda s: (len(s), s))]
    out += [f"eta {k} {format_string(e)}" for k, e in enumerate(b.eta)]
    return "\n".join(out) + "\n"


def parse_strings(text: str) -> list[tuple]:
    """One string per line (used for the block and index strings of the interleaving)."""
    out = []
    for no, body in _lines(text):
        if len(body.split()) != 1:
            raise FormatError("expected one string per line", no)
        out.append(_string(body, no))
    return out


# ---------------------------------------------------------------------------
# conditions


@dataclass
class ConditionFile:
    params: SParams
    condition: Condition


_POINT = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def _points(text: str, no: int, offset: int) -> list[tuple]:
    pts = []
    pos = 0
    for m in _POINT.finditer(text):
        gap = text[pos : m.start()].strip()
        if gap:
            raise FormatError(f"unexpected {gap!r}", no, offset + pos + 1)
        pts.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
    if text[pos:].strip():
        raise FormatError(f"unexpected {text[pos:].strip()!r}", no, offset + pos + 1)
    return pts


def parse_condition(text: str) -> ConditionFile:
    """Parse a ``qcond v1`` / ``pcond v1`` file.

    Without a ``ucap`` line the cap is the size of ``u``.
    """
    lines = list(_lines(text))
    head = _header(lines, ("qcond v1", "pcond v1"))
    flavor = head[0]
    chi = ucap = w = u = None
    fs: dict = {}
    for no, body in lines[1:]:
        key, _, rest = body.partition(" ")
        if key == "chi":
            chi = tuple(_ints(rest.split(), no))
        elif key == "ucap":
            (ucap,) = _ints(rest.split(), no)
        elif key == "w":
            w = _ints(rest.split(), no)
        elif key == "u":
            u = _points(rest, no, len(key) + 1)
            for k in range(1, len(u)):
                if u[k] <= u[k - 1]:
                    raise FormatError(f"u is not in increasing grid order at {u[k]}", no)
        elif key == "f":
            if u is None:
                raise FormatError("f line before u line", no, 1)
            head_, sep, bits = rest.partition(":")
            if not sep:
                raise FormatError("expected 'f (i,xi): BITS'", no)
            pts = _points(head_, no, 2)
            if len(pts) != 1:
                raise FormatError("expected exactly one point before ':'", no)
            s = pts[0]
            bits = bits.strip()
            if s not in u:
                raise FormatError(f"point {s} is not in u", no)
            if s in fs:
                raise FormatError(f"repeated f line for {s}", no)
            if len(bits) != len(u) or any(c not in "01" for c in bits):
                raise FormatError(f"expected a bitstring of length {len(u)}", no)
            fs[s] = frozenset(t for t, c in zip(u, bits) if c == "1")
        else:
            raise FormatError(f"unknown key {key!r}", no, 1)
    if chi is None or w is None or u is None:
        raise FormatError("chi, w and u lines are required")
    missing = [s for s in u if s not in fs]
    if missing:
        raise FormatError(f"no f line for {missing[0]}")
    try:
        params = SParams(len(chi), chi, ucap if ucap is not None else max(1, len(u)))
    except ValueError as e:
        raise FormatError(str(e)) from None
    c = Condition(flavor, frozenset(w), tuple(u), tuple(fs[s] for s in u))
    return ConditionFile(params, c)


def format_point(s) -> str:
    return f"({s[0]},{s[1]})"


def format_condition(c: Condition, params: SParams, with_cap: bool = True) -> str:
    out = [f"{c.flavor}cond v1", "chi " + " ".join(map(str, params.chi))]
    if with_cap:
        out.append(f"ucap {params.ucap}")
    out.append("w" + "".join(f" {i}" for i in sorted(c.w)))
    out.append("u" + "".join(" " + format_point(s) for s in c.u))
    for s, g in zip(c.u, c.f):
        out.append(f"f {format_point(s)}: " + "".join("1" if t in g else "0" for t in c.u))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# families and set maps


def _element(tok: str):
    try:
        return int(tok)
    except ValueError:
        return tok


def parse_family(text: str) -> list[list]:
    """One member per line, elements separated by spaces; ``-`` is the empty member."""
    out = []
    for _, body in _lines(text):
        out.append([] if body == "-" else [_element(t) for t in body.split()])
    return out


def format_family(fam) -> str:
    return "".join((" ".join(map(str, m)) or "-") + "\n" for m in fam)


def parse_setmap(text: str) -> dict:
    out = {}
    for no, body in _lines(text):
        head, sep, rest = body.partition(":")
        if not sep or not head.strip():
            raise FormatError("expected 'y: e1 e2 ...'", no)
        y = _element(head.strip())
        if y in out:
            raise FormatError(f"repeated domain element {y!r}", no)
        out[y] = [_element(t) for t in rest.split()]
    return out


def format_setmap(m: dict) -> str:
    return "".join(f"{y}:" + "".join(f" {e}" for e in m[y]) + "\n" for y in sorted(m, key=lambda v: (isinstance(v, str), v)))
