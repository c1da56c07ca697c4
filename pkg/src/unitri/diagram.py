"""Colored vertex-oriented uni-trivalent diagrams and their canonical forms.

A diagram is stored on half-edges ("darts").  Vertex ``v`` owns the darts
``first[v] .. first[v] + valence - 1``; for a trivalent vertex the three
darts are listed in cyclic order, so rotating the triple gives the same
vertex while reversing it does not.  ``partner[d]`` is the other end of
the edge through dart ``d``.

Canonical forms come from rooted traversals: once a root dart is fixed the
cyclic orders determine a unique breadth-first labelling of a connected
diagram, so the lexicographically least serialization over all admissible
roots is a complete isomorphism invariant.  Root candidates are narrowed
with a dart-level colour refinement, which is itself invariant.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

_COLOR_RE = re.compile(r"^[^\s#|:,^*;\[\]{}()\"]+$")


class DiagramError(ValueError):
    """Raised for malformed or invalid diagram descriptions."""


def check_color(color: str) -> str:
    if not isinstance(color, str) or not _COLOR_RE.match(color):
        raise DiagramError(f"invalid color token {color!r}")
    return color


@dataclass(frozen=True)
class ColorSet:
    """Finite set of colors, kept in lexicographic order."""

    colors: tuple[str, ...] = ()

    def __init__(self, colors: Iterable[str] = ()):
        colors = tuple(colors)
        for c in colors:
            check_color(c)
        if len(set(colors)) != len(colors):
            raise DiagramError(f"duplicate colors in {colors}")
        object.__setattr__(self, "colors", tuple(sorted(colors)))

    def __iter__(self):
        return iter(self.colors)

    def __len__(self):
        return len(self.colors)

    def __contains__(self, c):
        return c in self.colors

    def __or__(self, other: "ColorSet") -> "ColorSet":
        return ColorSet(set(self.colors) | set(other.colors))

    def __sub__(self, other) -> "ColorSet":
        other = set(other)
        return ColorSet(c for c in self.colors if c not in other)

    def __repr__(self):
        return f"ColorSet({list(self.colors)})"


def _firsts(kinds: Sequence) -> list[int]:
    first = []
    n = 0
    for k in kinds:
        first.append(n)
        n += 1 if k is not None else 3
    return first


def _dart_vertices(kinds: Sequence, first: Sequence[int]) -> list[int]:
    dvert = []
    for v, k in enumerate(kinds):
        dvert.extend([v] * (1 if k is not None else 3))
    return dvert


def _rotation(kinds, first, dvert):
    """Successor of each dart in the cyclic order of its vertex."""
    nxt = []
    for d, v in enumerate(dvert):
        if kinds[v] is None:
            f = first[v]
            nxt.append(f + (d - f + 1) % 3)
        else:
            nxt.append(d)
    return nxt


def _root_candidates(kinds, first, partner, dvert) -> list[int]:
    nxt = _rotation(kinds, first, dvert)
    init = ["T" if kinds[v] is None else "L" + kinds[v] for v in dvert]
    ranks = {s: i for i, s in enumerate(sorted(set(init)))}
    lab = [ranks[s] for s in init]
    nclasses = len(ranks)
    while True:
        sig = [(lab[d], lab[partner[d]], lab[nxt[d]]) for d in range(len(lab))]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        lab = [ranks[s] for s in sig]
        if len(ranks) == nclasses:
            break
        nclasses = len(ranks)
    sizes = Counter(lab)
    best = min(sizes, key=lambda c: (sizes[c], c))
    return [d for d in range(len(lab)) if lab[d] == best]


def _traverse(kinds, first, partner, dvert, root):
    n = len(kinds)
    label = [-1] * n
    entry = [0] * n
    v0 = dvert[root]
    label[v0] = 0
    entry[v0] = root - first[v0]
    order = [v0]
    out = []
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        f = first[v]
        if kinds[v] is None:
            e = entry[v]
            darts = (f + e, f + (e + 1) % 3, f + (e + 2) % 3)
            rec = [(1, "")]
        else:
            darts = (f,)
            rec = [(0, kinds[v])]
        for d in darts:
            p = partner[d]
            w = dvert[p]
            if label[w] < 0:
                label[w] = len(order)
                entry[w] = p - first[w]
                order.append(w)
            off = (p - first[w] - entry[w]) % 3 if kinds[w] is None else 0
            rec.append(3 * label[w] + off)
        out.append(tuple(rec))
    return tuple(out), order, entry


def _canonical_form(kinds, first, partner, dvert):
    """Return (kinds, partner) of the canonical relabelling of a connected diagram."""
    best = None
    for r in _root_candidates(kinds, first, partner, dvert):
        ser, order, entry = _traverse(kinds, first, partner, dvert, r)
        if best is None or ser < best[0]:
            best = (ser, order, entry)
    ser, order, entry = best
    new_kinds = tuple(kinds[v] for v in order)
    new_first = _firsts(new_kinds)
    new_partner = []
    for rec in ser:
        for code in rec[1:]:
            lbl, off = divmod(code, 3)
            new_partner.append(new_first[lbl] + off)
    return new_kinds, tuple(new_partner)


def _encode_key(kinds, partner) -> bytes:
    first = _firsts(kinds)
    parts = []
    for v, k in enumerate(kinds):
        f = first[v]
        if k is None:
            parts.append("T%d,%d,%d" % (partner[f], partner[f + 1], partner[f + 2]))
        else:
            parts.append("L%s:%d" % (k, partner[f]))
    return "|".join(parts).encode()


def _check_connected(kinds, first, partner, dvert) -> bool:
    n = len(kinds)
    if n == 0:
        return False
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        deg = 1 if kinds[v] is not None else 3
        for d in range(first[v], first[v] + deg):
            w = dvert[partner[d]]
            if not seen[w]:
                seen[w] = True
                stack.append(w)
    return all(seen)


def components(kinds, partner) -> list["ConnectedDiagram"]:
    """Split a dart-encoded (possibly disconnected) diagram into canonical components."""
    first = _firsts(kinds)
    dvert = _dart_vertices(kinds, first)
    n = len(kinds)
    comp = [-1] * n
    out = []
    for s in range(n):
        if comp[s] >= 0:
            continue
        members = [s]
        comp[s] = s
        i = 0
        while i < len(members):
            v = members[i]
            i += 1
            deg = 1 if kinds[v] is not None else 3
            for d in range(first[v], first[v] + deg):
                w = dvert[partner[d]]
                if comp[w] < 0:
                    comp[w] = s
                    members.append(w)
        members.sort()
        index = {v: j for j, v in enumerate(members)}
        sub_kinds = [kinds[v] for v in members]
        sub_first = _firsts(sub_kinds)
        sub_partner = []
        for v in members:
            deg = 1 if kinds[v] is not None else 3
            for d in range(first[v], first[v] + deg):
                p = partner[d]
                w = dvert[p]
                sub_partner.append(sub_first[index[w]] + p - first[w])
        out.append(ConnectedDiagram._from_darts(sub_kinds, sub_partner))
    return out


@dataclass(frozen=True, eq=False)
class ConnectedDiagram:
    """A connected uni-trivalent diagram in canonical labelling.

    ``kinds[v]`` is the leg color of a univalent vertex and ``None`` for a
    trivalent one.  Instances compare and hash by ``key``.
    """

    kinds: tuple
    partner: tuple
    key: bytes = field(repr=False)

    @classmethod
    def _from_darts(cls, kinds, partner) -> "ConnectedDiagram":
        kinds = tuple(kinds)
        first = _firsts(kinds)
        dvert = _dart_vertices(kinds, first)
        ck, cp = _canonical_form(kinds, first, partner, dvert)
        return cls(ck, cp, _encode_key(ck, cp))

    def __eq__(self, other):
        return isinstance(other, ConnectedDiagram) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    @cached_property
    def first(self) -> tuple:
        return tuple(_firsts(self.kinds))

    @property
    def n_legs(self) -> int:
        return sum(1 for k in self.kinds if k is not None)

    @property
    def n_tri(self) -> int:
        return sum(1 for k in self.kinds if k is None)

    @property
    def degree(self) -> int:
        return (len(self.kinds)) // 2

    @cached_property
    def legs_by_color(self) -> dict:
        return dict(sorted(Counter(k for k in self.kinds if k is not None).items()))

    @property
    def is_strut(self) -> bool:
        return len(self.kinds) == 2 and self.n_tri == 0

    @property
    def is_same_color_strut(self) -> bool:
        return self.is_strut and self.kinds[0] == self.kinds[1]

    @property
    def uni_vertices(self) -> list[tuple[int, str]]:
        return [(v, k) for v, k in enumerate(self.kinds) if k is not None]

    @property
    def tri_vertices(self) -> list[tuple[int, tuple[int, int, int]]]:
        return [(v, (self.first[v], self.first[v] + 1, self.first[v] + 2))
                for v, k in enumerate(self.kinds) if k is None]

    @property
    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Edges as pairs of (vertex, slot), each listed once."""
        slot = []
        for v, k in enumerate(self.kinds):
            slot.extend((v, s) for s in range(1 if k is not None else 3))
        return [(slot[d], slot[p]) for d, p in enumerate(self.partner) if d <= p]

    def raw(self) -> "RawDiagram":
        return RawDiagram(
            uni=[(v, c) for v, c in self.uni_vertices],
            tri=[v for v, _ in self.tri_vertices],
            edges=self.edges,
        )

    def __repr__(self):
        return f"ConnectedDiagram({self.key.decode()})"


@dataclass
class RawDiagram:
    """A diagram as written by hand: vertex ids, colors and slot pairings.

    ``edges`` pairs ``(vertex_id, slot)`` half-edges; trivalent vertices have
    slots 0, 1, 2 in cyclic order and univalent vertices have slot 0.
    """

    uni: list = field(default_factory=list)
    tri: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    def to_darts(self, colors: ColorSet | None = None):
        kinds = []
        index = {}
        for vid, color in self.uni:
            if vid in index:
                raise DiagramError(f"duplicate vertex id {vid!r}")
            check_color(color)
            if colors is not None and color not in colors:
                raise DiagramError(f"unknown color {color!r}")
            index[vid] = len(kinds)
            kinds.append(color)
        for vid in self.tri:
            if vid in index:
                raise DiagramError(f"duplicate vertex id {vid!r}")
            index[vid] = len(kinds)
            kinds.append(None)
        if not kinds:
            raise DiagramError("empty diagram")
        first = _firsts(kinds)
        ndarts = first[-1] + (1 if kinds[-1] is not None else 3)
        partner = [-1] * ndarts

        def dart(end):
            vid, s = end
            if vid not in index:
                raise DiagramError(f"edge references unknown vertex {vid!r}")
            v = index[vid]
            deg = 1 if kinds[v] is not None else 3
            if not isinstance(s, int) or not 0 <= s < deg:
                raise DiagramError(f"bad slot {s!r} on vertex {vid!r}")
            return first[v] + s

        for a, b in self.edges:
            da, db = dart(a), dart(b)
            if da == db or partner[da] >= 0 or partner[db] >= 0:
                raise DiagramError(f"slot used twice in edge {a}-{b}")
            partner[da] = db
            partner[db] = da
        for d, p in enumerate(partner):
            if p < 0:
                dv = _dart_vertices(kinds, first)[d]
                vid = next(k for k, v in index.items() if v == dv)
                raise DiagramError(f"dangling slot {d - first[dv]} on vertex {vid!r}")
        return kinds, partner


def canonicalize(d, colors: ColorSet | None = None) -> ConnectedDiagram:
    """Validate a raw connected diagram and return it in canonical form."""
    if isinstance(d, ConnectedDiagram):
        return d
    kinds, partner = d.to_darts(colors)
    first = _firsts(kinds)
    dvert = _dart_vertices(kinds, first)
    if not _check_connected(kinds, first, partner, dvert):
        raise DiagramError("diagram is not connected")
    return ConnectedDiagram._from_darts(kinds, partner)


def degree(d: ConnectedDiagram) -> int:
    return d.degree


def is_strut(d: ConnectedDiagram) -> bool:
    return d.is_strut


def is_same_color_strut(d: ConnectedDiagram) -> bool:
    return d.is_same_color_strut


def legs_by_color(d: ConnectedDiagram) -> dict:
    return dict(d.legs_by_color)


def from_rotation(tri: dict, legs: dict | None = None) -> ConnectedDiagram:
    """Build a connected diagram from a rotation system on edge labels.

    ``tri`` maps each trivalent vertex to its three edge labels in cyclic
    (counterclockwise) order; ``legs`` maps each univalent vertex to
    ``(edge_label, color)``.  Every edge label must occur exactly twice.
    """
    legs = legs or {}
    ends: dict = {}
    for v, (e, _color) in legs.items():
        ends.setdefault(e, []).append((("u", v), 0))
    for v, labels in tri.items():
        if len(labels) != 3:
            raise DiagramError(f"trivalent vertex {v!r} needs 3 edges")
        for s, e in enumerate(labels):
            ends.setdefault(e, []).append((("t", v), s))
    edges = []
    for e, es in ends.items():
        if len(es) != 2:
            raise DiagramError(f"edge label {e!r} used {len(es)} times")
        edges.append(tuple(es))
    raw = RawDiagram(
        uni=[(("u", v), c) for v, (_e, c) in legs.items()],
        tri=[("t", v) for v in tri],
        edges=edges,
    )
    return canonicalize(raw)


def strut(a: str, b: str) -> ConnectedDiagram:
    return from_rotation({}, {0: ("e", a), 1: ("e", b)})


class Monomial:
    """Product (disjoint union) of connected diagrams; the empty product is 1."""

    __slots__ = ("factors", "_keys", "_hash")

    def __init__(self, factors: Iterable[ConnectedDiagram] = ()):
        self.factors = tuple(sorted(factors, key=lambda f: f.key))
        self._keys = tuple(f.key for f in self.factors)
        self._hash = hash(self._keys)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self._keys == other._keys

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._keys < other._keys

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.factors + other.factors)

    def __len__(self):
        return len(self.factors)

    def __getstate__(self):
        return self.factors

    def __setstate__(self, factors):
        Monomial.__init__(self, factors)

    @property
    def keys(self) -> tuple:
        return self._keys

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    @property
    def n_tri(self) -> int:
        return sum(f.n_tri for f in self.factors)

    @property
    def is_one(self) -> bool:
        return not self.factors

    @property
    def is_connected(self) -> bool:
        return len(self.factors) == 1

    def multiplicities(self) -> list[tuple[ConnectedDiagram, int]]:
        out: list = []
        for f in self.factors:
            if out and out[-1][0] == f:
                out[-1][1] += 1
            else:
                out.append([f, 1])
        return [(f, m) for f, m in out]

    def legs_by_color(self) -> Counter:
        c: Counter = Counter()
        for f in self.factors:
            c.update(f.legs_by_color)
        return c

    def has_strut(self) -> bool:
        return any(f.is_strut for f in self.factors)

    def colors(self) -> set:
        return {k for f in self.factors for k in f.kinds if k is not None}

    def __repr__(self):
        if not self.factors:
            return "Monomial(1)"
        return "Monomial(%s)" % " * ".join(f.key.decode() for f in self.factors)


ONE = Monomial()
