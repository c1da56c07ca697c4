"""Naive reference implementations used to cross-check the fast operators.

Nothing here touches canonical keys.  Graphs are plain dicts of edge-end
lists, gluing enumerates raw permutations, homeomorphic reduction merges
edge labels one leg pair at a time, and results are grouped by a
backtracking isomorphism search over vertex bijections and rotations.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, permutations, product

from .diagram import ColorSet, Monomial, components
from .series import DiagramSeries


class NaiveGraph:
    """Vertices map to (color or None, [edge labels in cyclic order])."""

    def __init__(self, verts: dict):
        self.verts = verts

    @classmethod
    def from_monomial(cls, m: Monomial, tag="") -> "NaiveGraph":
        verts = {}
        for i, f in enumerate(m.factors):
            first = f.first
            for v, k in enumerate(f.kinds):
                deg = 1 if k is not None else 3
                labels = []
                for d in range(first[v], first[v] + deg):
                    p = f.partner[d]
                    labels.append((tag, i, min(d, p), max(d, p)))
                verts[(tag, i, v)] = (k, labels)
        return cls(verts)

    def union(self, other: "NaiveGraph") -> "NaiveGraph":
        verts = dict(self.verts)
        verts.update(other.verts)
        return NaiveGraph(verts)

    def legs(self, colors=None):
        return sorted((v for v, (k, _) in self.verts.items()
                       if k is not None and (colors is None or k in colors)), key=repr)

    def edge_ends(self):
        ends: dict = {}
        for v, (_k, labels) in self.verts.items():
            for i, e in enumerate(labels):
                ends.setdefault(e, []).append((v, i))
        return ends

    def glue(self, pairs) -> "NaiveGraph | None":
        """Identify leg pairs one at a time; None if a vertex-free circle appears."""
        verts = {v: (k, list(ls)) for v, (k, ls) in self.verts.items()}
        for a, b in pairs:
            (ea,) = verts.pop(a)[1]
            (eb,) = verts.pop(b)[1]
            if ea == eb:
                return None
            for _k, labels in verts.values():
                for i, e in enumerate(labels):
                    if e == eb:
                        labels[i] = ea
        ends = Counter(e for _k, ls in verts.values() for e in ls)
        if any(n != 2 for n in ends.values()):
            return None
        return NaiveGraph(verts)

    def to_monomial(self) -> Monomial:
        order = sorted(self.verts, key=repr)
        kinds = [self.verts[v][0] for v in order]
        first = []
        n = 0
        for k in kinds:
            first.append(n)
            n += 1 if k is not None else 3
        where = {}
        for idx, v in enumerate(order):
            for i, e in enumerate(self.verts[v][1]):
                where.setdefault(e, []).append(first[idx] + i)
        partner = [0] * n
        for a, b in where.values():
            partner[a] = b
            partner[b] = a
        return Monomial(components(kinds, partner)) if kinds else Monomial()


def isomorphic(G: NaiveGraph, H: NaiveGraph) -> bool:
    """Exhaustive search for a color- and rotation-preserving isomorphism."""
    if len(G.verts) != len(H.verts):
        return False
    if Counter(k for k, _ in G.verts.values()) != Counter(k for k, _ in H.verts.values()):
        return False
    gends, hends = G.edge_ends(), H.edge_ends()
    # partner end of each (vertex, slot)
    gp = {}
    for a, b in gends.values():
        gp[a], gp[b] = b, a
    hp = {}
    for a, b in hends.values():
        hp[a], hp[b] = b, a
    # visit G vertices so that each new one is adjacent to a visited one when possible
    order = []
    seen = set()
    for s in sorted(G.verts, key=repr):
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for i in range(len(G.verts[v][1])):
                w = gp[(v, i)][0]
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    hverts = sorted(H.verts, key=repr)
    vmap: dict = {}
    rot: dict = {}
    used = set()

    def consistent(v):
        k, labels = G.verts[v]
        w = vmap[v]
        deg = len(labels)
        for i in range(deg):
            u, j = gp[(v, i)]
            if u not in vmap:
                continue
            img = (w, (i + rot[v]) % deg)
            du = len(G.verts[u][1])
            target = (vmap[u], (j + rot[u]) % du)
            if hp[img] != target:
                return False
        return True

    def rec(idx):
        if idx == len(order):
            return True
        v = order[idx]
        k, labels = G.verts[v]
        for w in hverts:
            if w in used or H.verts[w][0] != k:
                continue
            for r in range(len(labels)):
                vmap[v], rot[v] = w, r
                used.add(w)
                if consistent(v) and rec(idx + 1):
                    return True
                used.discard(w)
                del vmap[v], rot[v]
        return False

    return rec(0)


def group_by_isomorphism(graphs) -> list[list]:
    """Collect (graph, count) pairs into [representative, total] classes."""
    classes: list = []
    for G, n in graphs:
        for cls in classes:
            if isomorphic(cls[0], G):
                cls[1] += n
                break
        else:
            classes.append([G, n])
    return classes


def _per_color(legs_g, legs_h, G, H, inject):
    """Per-color lists of (g legs, all maps into h legs)."""
    colors = sorted({G.verts[v][0] for v in legs_g} | {H.verts[v][0] for v in legs_h})
    choices = []
    for c in colors:
        gl = [v for v in legs_g if G.verts[v][0] == c]
        hl = [v for v in legs_h if H.verts[v][0] == c]
        if len(gl) > len(hl) or (not inject and len(gl) != len(hl)):
            return None
        choices.append([list(zip(gl, img)) for img in permutations(hl, len(gl))])
    return choices


def naive_glue(g: Monomial, h: Monomial, X=None, inject=False) -> list[list]:
    """Raw enumeration of all leg bijections (or injections) for one monomial pair."""
    G = NaiveGraph.from_monomial(g, "g")
    H = NaiveGraph.from_monomial(h, "h")
    X = set(g.colors() | h.colors()) if X is None else set(X)
    choices = _per_color(G.legs(X), H.legs(X), G, H, inject)
    if choices is None:
        return []
    U = G.union(H)
    out = []
    for combo in product(*choices):
        pairs = [p for part in combo for p in part]
        glued = U.glue(pairs)
        if glued is None:
            raise ValueError("naive gluing produced a vertex-free circle")
        out.append((glued, 1))
    return group_by_isomorphism(out)


def _matchings(items):
    if not items:
        yield []
        return
    a, rest = items[0], items[1:]
    for j in range(len(rest)):
        for tail in _matchings(rest[:j] + rest[j + 1:]):
            yield [(a, rest[j])] + tail


def naive_close(m: Monomial) -> list[list]:
    G = NaiveGraph.from_monomial(m, "s")
    by_color: dict = {}
    for v in G.legs():
        by_color.setdefault(G.verts[v][0], []).append(v)
    if any(len(ls) % 2 for ls in by_color.values()):
        return []
    out = []
    for combo in product(*(list(_matchings(ls)) for _c, ls in sorted(by_color.items()))):
        pairs = [p for part in combo for p in part]
        out.append((G.glue(pairs), 1))
    return group_by_isomorphism(out)


def matches(classes: list[list], series: DiagramSeries, scale=1) -> bool:
    """True when the oracle classes and the series terms agree one to one."""
    terms = [(NaiveGraph.from_monomial(m, "r"), c) for m, c in series.terms.items()]
    if len(terms) != len(classes):
        return False
    for rep, n in classes:
        hits = [c for G, c in terms if isomorphic(rep, G)]
        if len(hits) != 1 or hits[0] != Fraction(n) * scale:
            return False
    return True


def naive_series_op(kind: str, s1: DiagramSeries, s2: DiagramSeries | None = None,
                    X=None, trunc: int | None = None) -> DiagramSeries:
    """Series-level operator built from the naive pair enumeration.

    Results are keyed by canonical monomials only after grouping, so the
    series can be compared directly with the fast operators.
    """
    acc: dict = {}
    if kind == "close":
        for m, c in s1.terms.items():
            for rep, n in naive_close(m):
                key = rep.to_monomial()
                if trunc is not None and key.degree > trunc:
                    continue
                acc[key] = acc.get(key, 0) + c * n
        return DiagramSeries(acc, ColorSet(), trunc or 0)
    inject = kind == "diff"
    if kind == "bracket":
        X = set(s1.colors.colors)
    elif X is None:
        X = set(s1.colors.colors)
    for m1, c1 in s1.terms.items():
        for m2, c2 in s2.terms.items():
            for rep, n in naive_glue(m1, m2, X, inject):
                key = rep.to_monomial()
                if trunc is not None and key.degree > trunc:
                    continue
                acc[key] = acc.get(key, 0) + c1 * c2 * n
    if kind == "bracket":
        colors = ColorSet()
    elif kind == "partial":
        colors = s1.colors - X
    else:
        colors = s1.colors
    return DiagramSeries(acc, colors, trunc or 0)


# delta route for the differential operator

OPEN_MARK = "~open"


def recolor(m: Monomial, changes: dict) -> Monomial:
    """Recolor legs given as {(factor index, vertex): new color}."""
    out = []
    for i, f in enumerate(m.factors):
        kinds = [changes.get((i, v), k) for v, k in enumerate(f.kinds)]
        out.extend(components(kinds, f.partner))
    return Monomial(out)


def open_legs(s: DiagramSeries) -> DiagramSeries:
    """Sum over all ways of marking a subset of legs as open (inert)."""
    opened_colors = ColorSet(list(s.colors.colors) + [c + OPEN_MARK for c in s.colors.colors])
    acc: dict = {}
    for m, c in s.terms.items():
        legs = [(i, v) for i, f in enumerate(m.factors) for v, k in enumerate(f.kinds) if k is not None]
        for r in range(len(legs) + 1):
            for subset in combinations(legs, r):
                changes = {iv: m.factors[iv[0]].kinds[iv[1]] + OPEN_MARK for iv in subset}
                key = recolor(m, changes)
                acc[key] = acc.get(key, 0) + c
    return DiagramSeries(acc, opened_colors, s.trunc, s.leg_ratio)


def fill_legs(s: DiagramSeries, colors: ColorSet) -> DiagramSeries:
    acc: dict = {}
    for m, c in s.terms.items():
        changes = {(i, v): k[: -len(OPEN_MARK)]
                   for i, f in enumerate(m.factors) for v, k in enumerate(f.kinds)
                   if k is not None and k.endswith(OPEN_MARK)}
        key = recolor(m, changes)
        acc[key] = acc.get(key, 0) + c
    return DiagramSeries(acc, colors, s.trunc)


def diff_op_delta(s1: DiagramSeries, s2: DiagramSeries, trunc: int | None = None) -> DiagramSeries:
    """Differential operator computed as a pairing against the opened right argument."""
    from .gluing import bracket_partial

    opened = open_legs(s2)
    left = DiagramSeries(s1.terms, opened.colors, s1.trunc, s1.leg_ratio)
    out = bracket_partial(left, opened, s1.colors.colors, trunc)
    return fill_legs(out, s1.colors)
