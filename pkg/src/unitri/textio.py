"""Line-based text formats for diagrams, series and linking matrices.

Diagram blocks::

    diagram d            # name
    u a y1               # univalent vertex with its color
    t 0                  # trivalent vertex, slots 0 1 2 in cyclic order
    e a.0 0.0            # edge between two slots
    end

A series file has ``trunc N`` and ``colors ...`` header lines, an optional
``leg-ratio R`` line, optional inline diagram blocks and one term per line
such as ``-1/48 * w2^2 * theta``.  A lone ``1`` stands for the empty
monomial.  Comments start with ``#``.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .diagram import ColorSet, ConnectedDiagram, DiagramError, Monomial, RawDiagram, canonicalize
from .lmo import LinkingData
from .series import DiagramSeries


class ParseError(ValueError):
    """Malformed input, reported with its source and line number."""

    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield no, body.split()


def _slot(tok: str, source: str, no: int):
    vid, sep, slot = tok.rpartition(".")
    if not sep or not vid:
        raise ParseError(source, no, f"expected <id>.<slot>, got {tok!r}")
    try:
        return vid, int(slot)
    except ValueError:
        raise ParseError(source, no, f"slot must be an integer in {tok!r}") from None


class _Reader:
    """Shared state for diagram blocks inside diagram or series files."""

    def __init__(self, source: str, library: dict | None = None):
        self.source = source
        self.diagrams: dict = dict(library or {})
        self.current = None

    def feed(self, no: int, words: list[str]) -> bool:
        """Consume a diagram-block line; False if the line is not part of one."""
        head = words[0]
        if self.current is None:
            if head != "diagram":
                return False
            if len(words) != 2:
                raise ParseError(self.source, no, "expected: diagram <name>")
            self.current = (words[1], no, RawDiagram())
            return True
        name, start, raw = self.current
        if head == "u" and len(words) == 3:
            raw.uni.append((words[1], words[2]))
        elif head == "t" and len(words) == 2:
            raw.tri.append(words[1])
        elif head == "e" and len(words) == 3:
            raw.edges.append((_slot(words[1], self.source, no), _slot(words[2], self.source, no)))
        elif head == "end" and len(words) == 1:
            try:
                self.diagrams[name] = canonicalize(raw)
            except DiagramError as exc:
                raise ParseError(self.source, start, f"diagram {name}: {exc}") from None
            self.current = None
        else:
            raise ParseError(self.source, no, f"unexpected line in diagram {name}: {' '.join(words)}")
        return True

    def close(self):
        if self.current is not None:
            raise ParseError(self.source, self.current[1], f"diagram {self.current[0]} has no end")


def parse_diagrams(text: str, source: str = "<string>") -> dict[str, ConnectedDiagram]:
    reader = _Reader(source)
    for no, words in _lines(text):
        if not reader.feed(no, words):
            raise ParseError(source, no, f"expected a diagram block, got {words[0]!r}")
    reader.close()
    return reader.diagrams


def format_diagram(d: ConnectedDiagram, name: str) -> str:
    lines = [f"diagram {name}"]
    lines += [f"u {v} {c}" for v, c in d.uni_vertices]
    lines += [f"t {v}" for v, _ in d.tri_vertices]
    lines += [f"e {a}.{i} {b}.{j}" for (a, i), (b, j) in d.edges]
    lines.append("end")
    return "\n".join(lines) + "\n"


def _factor(tok: str, diagrams: dict, source: str, no: int):
    name, _, power = tok.partition("^")
    if name not in diagrams:
        raise ParseError(source, no, f"unknown diagram {name!r}")
    try:
        k = int(power) if power else 1
    except ValueError:
        raise ParseError(source, no, f"bad exponent in {tok!r}") from None
    if k < 0:
        raise ParseError(source, no, f"negative exponent in {tok!r}")
    return [diagrams[name]] * k


def parse_series(text: str, source: str = "<string>", library: dict | None = None) -> DiagramSeries:
    reader = _Reader(source, library)
    trunc = None
    colors = None
    ratio = None
    terms: list = []
    for no, words in _lines(text):
        if reader.feed(no, words):
            continue
        head = words[0]
        if head == "trunc":
            if len(words) != 2 or not words[1].isdigit():
                raise ParseError(source, no, "expected: trunc <N>")
            trunc = int(words[1])
        elif head == "colors":
            try:
                colors = ColorSet(words[1:])
            except DiagramError as exc:
                raise ParseError(source, no, str(exc)) from None
        elif head == "leg-ratio":
            try:
                ratio = Fraction(words[1])
            except (ValueError, IndexError, ZeroDivisionError):
                raise ParseError(source, no, "expected: leg-ratio <rational>") from None
        else:
            terms.append((no, " ".join(words)))
    reader.close()
    if trunc is None:
        raise ParseError(source, 1, "missing 'trunc <N>' header")
    colors = colors if colors is not None else ColorSet()
    acc: dict = {}
    for no, line in terms:
        parts = [p.strip() for p in line.split("*")]
        try:
            coeff = Fraction(parts[0])
        except (ValueError, ZeroDivisionError):
            raise ParseError(source, no, f"bad coefficient {parts[0]!r}") from None
        factors = []
        for tok in parts[1:]:
            if tok == "1":
                continue
            factors.extend(_factor(tok, reader.diagrams, source, no))
        m = Monomial(factors)
        acc[m] = acc.get(m, 0) + coeff
    try:
        return DiagramSeries(acc, colors, trunc, ratio)
    except DiagramError as exc:
        raise ParseError(source, 1, str(exc)) from None


def _names(diagrams, known: dict | None) -> dict:
    """Map each diagram to a name: known names first, then D1, D2, ... in key order."""
    by_key = {}
    for name, d in (known or {}).items():
        by_key.setdefault(d, name)
    taken = set(by_key.values())
    out = {}
    n = 0
    for d in sorted(diagrams):
        if d in by_key:
            out[d] = by_key[d]
            continue
        while True:
            n += 1
            if f"D{n}" not in taken:
                break
        out[d] = f"D{n}"
        taken.add(out[d])
    return out


def format_monomial(m: Monomial, names: dict) -> str:
    if m.is_one:
        return "1"
    parts = []
    for f, k in m.multiplicities():
        parts.append(names[f] + (f"^{k}" if k > 1 else ""))
    return " * ".join(parts)


def format_terms(s: DiagramSeries, names: dict) -> list[str]:
    return [f"{c} * {format_monomial(m, names)}" for m, c in s]


def format_series(s: DiagramSeries, known: dict | None = None, inline: bool = True) -> str:
    """Self-contained series text: header, diagram blocks, then terms."""
    names = _names(s.components(), known)
    lines = [f"trunc {s.trunc}", " ".join(["colors", *s.colors.colors])]
    if s.leg_ratio is not None:
        lines.append(f"leg-ratio {s.leg_ratio}")
    text = "\n".join(lines) + "\n"
    if inline:
        for d in sorted(names):
            text += format_diagram(d, names[d])
    return text + "".join(t + "\n" for t in format_terms(s, names))


def parse_matrix(text: str, source: str = "<string>") -> LinkingData:
    n = None
    colors = None
    rows: list = []
    struts: dict = {}
    for no, words in _lines(text):
        head = words[0]
        try:
            if head == "matrix":
                n = int(words[1])
            elif head == "colors":
                colors = words[1:]
            elif head == "r":
                struts[(words[1], words[2])] = Fraction(words[3])
            else:
                rows.append([Fraction(w) for w in words])
        except (ValueError, IndexError, ZeroDivisionError):
            raise ParseError(source, no, f"bad matrix line: {' '.join(words)}") from None
    if n is None:
        raise ParseError(source, 1, "missing 'matrix <n>' header")
    if len(rows) != n:
        raise ParseError(source, 1, f"expected {n} rows, got {len(rows)}")
    if colors is None:
        colors = [f"x{i + 1}" for i in range(n)]
    try:
        return LinkingData(colors, rows, struts)
    except ValueError as exc:
        raise ParseError(source, 1, str(exc)) from None


def format_matrix(L: LinkingData) -> str:
    lines = [f"matrix {L.dim}", "colors " + " ".join(L.colors)]
    lines += [" ".join(str(x) for x in row) for row in L.matrix]
    lines += [f"r {a} {b} {v}" for (a, b), v in sorted(L.struts.items())]
    return "\n".join(lines) + "\n"


def read_text(path) -> tuple[str, str]:
    p = Path(path)
    return p.read_text(encoding="utf-8"), str(p)
