"""Pairing, partial pairing, self-closure and the diagrammatic differential operator.

All four operators reduce to one primitive: identify chosen pairs of legs
and homeomorphically reduce the resulting paths.  Leg ``a`` glued to leg
``b`` removes both univalent vertices and joins their neighbours by one
edge; when a neighbour is itself a glued leg (the far end of a strut) the
path is followed until it reaches a surviving dart.

Enumeration works per pair of monomials.  Identical non-strut components
on the left are visited in one order only and weighted by ``m!``; struts
are handled as typed matchings of the remaining legs and weighted by the
number of leg bijections that induce each matching.
"""

from __future__ import annotations

import logging
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, floor, prod

from .diagram import ONE, ColorSet, Monomial, _firsts, components
from .series import DiagramSeries, SeriesError, primitive_part

log = logging.getLogger(__name__)

WORKERS_ENV = "UNITRI_WORKERS"
_PARALLEL_MIN_PAIRS = 64


class GluingError(ValueError):
    """Raised when an operator's strut or finiteness precondition fails."""


def worker_count() -> int:
    """Worker processes for pair enumeration; ``UNITRI_WORKERS`` or all CPUs."""
    raw = os.environ.get(WORKERS_ENV, "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", WORKERS_ENV, raw)
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# monomial level


def _flatten(monomials):
    """Concatenate the factors of several monomials into one dart graph."""
    kinds: list = []
    partner: list = []
    factor_vertices = []
    for mono in monomials:
        per = []
        for f in mono.factors:
            voff = len(kinds)
            doff = len(partner)
            kinds.extend(f.kinds)
            partner.extend(p + doff for p in f.partner)
            per.append((f, voff))
        factor_vertices.append(per)
    return kinds, partner, factor_vertices


def _reduce(kinds, partner, glue_pairs) -> Monomial:
    """Join glued leg pairs, reduce the paths and split into canonical components."""
    if not glue_pairs:
        return Monomial(components(kinds, partner)) if kinds else ONE
    first = _firsts(kinds)
    mate = {}
    for a, b in glue_pairs:
        mate[a] = b
        mate[b] = a
    index = {}
    new_kinds = []
    for v, k in enumerate(kinds):
        if v not in mate:
            index[v] = len(new_kinds)
            new_kinds.append(k)
    new_first = _firsts(new_kinds)
    dvert = []
    for v, k in enumerate(kinds):
        dvert.extend([v] * (1 if k is not None else 3))
    visited = set()
    new_partner = []
    for v, k in enumerate(kinds):
        if v in mate:
            continue
        for d in range(first[v], first[v] + (1 if k is not None else 3)):
            p = partner[d]
            w = dvert[p]
            while w in mate:
                visited.add(w)
                m = mate[w]
                visited.add(m)
                p = partner[first[m]]
                w = dvert[p]
            new_partner.append(new_first[index[w]] + p - first[w])
    if len(visited) != len(mate):
        raise GluingError("gluing closed a strut cycle into a vertex-free circle")
    if not new_kinds:
        return ONE
    return Monomial(components(new_kinds, new_partner))


def _typed_pairings(legs, types):
    """Perfect matchings of ``legs`` [(vertex, color)] into pairs of the given
    color types (Counter of sorted color pairs).  Yields lists of
    ((vertex, color), (vertex, color)) with the pair ordered as its type."""
    if not legs:
        if not +types:
            yield []
        return
    (v, c), rest = legs[0], legs[1:]
    for t in sorted(types):
        if types[t] <= 0 or c not in t:
            continue
        other = t[1] if t[0] == c else t[0]
        for j, (w, cw) in enumerate(rest):
            if cw != other:
                continue
            types[t] -= 1
            pair = ((v, c), (w, cw)) if t[0] == c else ((w, cw), (v, c))
            for tail in _typed_pairings(rest[:j] + rest[j + 1:], types):
                yield [pair] + tail
            types[t] += 1


def _is_full(f, X) -> bool:
    return f.is_strut and f.kinds[0] in X and f.kinds[1] in X


def _enumerate_gluings(g: Monomial, h: Monomial, X: frozenset, inject: bool):
    """Yield (glue_pairs, weight) over the combined graph of g then h.

    With ``inject`` every X-leg of g goes to a distinct X-leg of h and the
    rest of h stays open; otherwise the X-legs must match exactly.
    """
    kinds, partner, fv = _flatten([g, h])
    gf, hf = fv
    hlegs: dict = {}
    for f, off in hf:
        for v, k in enumerate(f.kinds):
            if k is not None and k in X:
                hlegs.setdefault(k, []).append(off + v)

    instances = []       # non-strut g components with X legs
    half_struts: dict = {}  # (x, other) -> list of (x-leg vertex, other-leg vertex)
    full_struts: Counter = Counter()
    full_legs: dict = {}  # type -> list of (leg vertex a, leg vertex b) ordered as type
    prev_key = None
    for f, off in gf:
        xlegs = [(off + v, k) for v, k in enumerate(f.kinds) if k is not None and k in X]
        if not xlegs:
            prev_key = None
            continue
        if f.is_strut:
            (a, ca), (b, cb) = [(off + v, k) for v, k in enumerate(f.kinds)]
            if len(xlegs) == 2:
                t = tuple(sorted((ca, cb)))
                full_struts[t] += 1
                full_legs.setdefault(t, []).append((a, b) if ca == t[0] else (b, a))
            else:
                (xv, xc), = xlegs
                other = a if xv == b else b
                half_struts.setdefault((xc, kinds[other]), []).append(xv)
            prev_key = None
            continue
        same = prev_key == f.key
        instances.append((xlegs, same))
        prev_key = f.key

    weight = 1
    run = 1
    for _xl, same in instances:
        run = run + 1 if same else 1
        weight *= run
    for struts in half_struts.values():
        weight *= factorial(len(struts))
    for t, m in full_struts.items():
        weight *= factorial(m) * (2 ** m if t[0] == t[1] else 1)

    used = set()
    pairs: list = []
    firsts: list = []

    def remaining(color):
        return [v for v in hlegs.get(color, ()) if v not in used]

    def finish():
        # half struts: pick which h legs they cover
        items = sorted(half_struts.items())
        yield from half_rec(items, 0)

    def half_rec(items, i):
        if i == len(items):
            yield from full_phase()
            return
        (xc, _other), svs = items[i]
        for chosen in combinations(remaining(xc), len(svs)):
            for sv, hv in zip(svs, chosen):
                pairs.append((sv, hv))
                used.add(hv)
            yield from half_rec(items, i + 1)
            for hv in chosen:
                used.discard(hv)
            del pairs[len(pairs) - len(svs):]

    def full_phase():
        if not full_struts:
            if not inject and any(remaining(c) for c in hlegs):
                return
            yield list(pairs)
            return
        legs = sorted((v, c) for c in hlegs for v in remaining(c))
        counters = {t: 0 for t in full_struts}
        for matching in _typed_pairings(legs, Counter(full_struts)):
            extra = []
            for k in counters:
                counters[k] = 0
            for (pa, ca), (pb, cb) in matching:
                t = (ca, cb)
                sa, sb = full_legs[t][counters[t]]
                counters[t] += 1
                extra.append((sa, pa))
                extra.append((sb, pb))
            yield pairs + extra

    def comp_rec(i, j):
        if i == len(instances):
            yield from finish()
            return
        xlegs, same = instances[i]
        if j == len(xlegs):
            yield from comp_rec(i + 1, 0)
            return
        gv, color = xlegs[j]
        for hv in hlegs.get(color, ()):
            if hv in used:
                continue
            if j == 0 and same and hv <= firsts[i - 1]:
                continue
            used.add(hv)
            pairs.append((gv, hv))
            if j == 0:
                firsts.append(hv)
            yield from comp_rec(i, j + 1)
            if j == 0:
                firsts.pop()
            pairs.pop()
            used.discard(hv)

    for glue in comp_rec(0, 0):
        yield kinds, partner, glue, weight


def _sig(c: Counter) -> tuple:
    return tuple(sorted((k, n) for k, n in c.items() if n))


def _x_leg_counts(m: Monomial, X) -> Counter:
    c = m.legs_by_color()
    return Counter({k: n for k, n in c.items() if k in X})


def _check_struts(g: Monomial, h: Monomial, X, inject: bool):
    if inject:
        if g.has_strut() or h.has_strut():
            raise GluingError("the differential operator needs strutless arguments")
        return g, h
    full_g = any(_is_full(f, X) for f in g.factors)
    full_h = any(_is_full(f, X) for f in h.factors)
    if full_g and full_h:
        raise GluingError("struts with glued legs on both sides can close into circles")
    if full_h:
        return h, g
    return g, h


@lru_cache(maxsize=200_000)
def _glue_pair(g: Monomial, h: Monomial, X: frozenset, inject: bool) -> tuple:
    """All gluings of one monomial pair, as sorted ((Monomial, count), ...)."""
    cg, ch = _x_leg_counts(g, X), _x_leg_counts(h, X)
    if inject:
        if any(cg[c] > ch[c] for c in cg):
            return ()
    elif cg != ch:
        return ()
    g, h = _check_struts(g, h, X, inject)
    out: Counter = Counter()
    for kinds, partner, glue, weight in _enumerate_gluings(g, h, X, inject):
        out[_reduce(kinds, partner, glue)] += weight
    return tuple(sorted(out.items()))


def _closure_pairs(m: Monomial):
    kinds, partner, _ = _flatten([m])
    legs = [(v, k) for v, k in enumerate(kinds) if k is not None]
    types = Counter()
    counts = Counter(k for _v, k in legs)
    for c, n in counts.items():
        if n % 2:
            return kinds, partner, []
        types[(c, c)] = n // 2
    return kinds, partner, list(_typed_pairings(sorted(legs), types))


@lru_cache(maxsize=100_000)
def _close_monomial(m: Monomial) -> tuple:
    if m.has_strut():
        raise GluingError("self-closure needs strutless input")
    kinds, partner, matchings = _closure_pairs(m)
    out: Counter = Counter()
    for matching in matchings:
        glue = [(a, b) for (a, _ca), (b, _cb) in matching]
        out[_reduce(kinds, partner, glue)] += 1
    return tuple(sorted(out.items()))


def clear_caches():
    _glue_pair.cache_clear()
    _close_monomial.cache_clear()


# ---------------------------------------------------------------------------
# completeness bounds


def side_ratio(s: DiagramSeries, X) -> Fraction | None:
    """Bound on glued legs per unit of (trivalent + open legs); None if unbounded."""
    factors = s.components()
    if any(_is_full(f, X) for f in factors):
        return None
    rho = s.leg_ratio if s.leg_ratio is not None else Fraction(3)
    if any(f.is_strut and (f.kinds[0] in X) != (f.kinds[1] in X) for f in factors):
        rho = max(rho, Fraction(1))
    return rho


def required_degrees(D: int, rho_g, rho_h) -> tuple[int, int] | None:
    """Largest input degrees that can feed an output term of degree D."""
    need_g = need_h = 0
    for w_h in range(2 * D + 1):
        w_g = 2 * D - w_h
        bounds = [r * w for r, w in ((rho_h, w_h), (rho_g, w_g)) if r is not None]
        if not bounds:
            return None
        k = min(bounds)
        need_h = max(need_h, floor((k + w_h) / 2))
        need_g = max(need_g, floor((k + w_g) / 2))
    return need_g, need_h


def complete_degree(n_g: int, rho_g, n_h: int, rho_h, cap: int | None = None) -> int:
    D = 0
    while cap is None or D < cap:
        need = required_degrees(D + 1, rho_g, rho_h)
        if need is None or need[0] > n_g or need[1] > n_h:
            break
        D += 1
    return D


# ---------------------------------------------------------------------------
# series level


@dataclass
class GluingReport:
    left: Monomial
    right: Monomial
    bijections: int
    visited: int
    result: DiagramSeries
    elapsed: float


_pool = None


def _pair_task(args):
    m1, m2, X, inject = args
    return _glue_pair(m1, m2, X, inject)


def _run_pairs(tasks):
    global _pool
    n = worker_count()
    if n > 1 and len(tasks) >= _PARALLEL_MIN_PAIRS:
        if _pool is None:
            _pool = ProcessPoolExecutor(max_workers=n)
        return list(_pool.map(_pair_task, tasks, chunksize=max(1, len(tasks) // (4 * n))))
    return [_pair_task(t) for t in tasks]


def _open_weight(m: Monomial, X) -> int:
    """Trivalent vertices plus legs that stay unglued (colors outside X)."""
    return m.n_tri + sum(n for c, n in m.legs_by_color().items() if c not in X)


def _pairing(s1: DiagramSeries, s2: DiagramSeries, X: frozenset, out_colors: ColorSet,
             inject: bool, trunc: int | None) -> DiagramSeries:
    if s1.colors != s2.colors:
        raise SeriesError(f"color-set mismatch: {s1.colors} vs {s2.colors}")
    if any(f.is_same_color_strut and f.kinds[0] in X for f in s2.components()):
        raise GluingError("right argument contains a same-color strut on a glued color")
    if inject:
        if s1.has_struts() or s2.has_struts():
            raise GluingError("the differential operator needs strutless arguments")
    elif any(_is_full(f, X) for f in s1.components()) and any(_is_full(f, X) for f in s2.components()):
        raise GluingError("struts with glued legs on both sides can close into circles")
    rho_g, rho_h = side_ratio(s1, X), side_ratio(s2, X)
    D = complete_degree(s1.trunc, rho_g, s2.trunc, rho_h, cap=trunc)
    if trunc is not None and D < trunc:
        log.info("output complete only through degree %d (requested %d)", D, trunc)

    groups: dict = {}
    for m2, c2 in s2.terms.items():
        groups.setdefault(_sig(_x_leg_counts(m2, X)) if not inject else None, []).append(
            (m2, c2, _open_weight(m2, X)))
    tasks, coeffs = [], []
    for m1, c1 in sorted(s1.terms.items()):
        w1 = _open_weight(m1, X)
        sig = _x_leg_counts(m1, X)
        cands = groups.get(_sig(sig), ()) if not inject else groups.get(None, ())
        for m2, c2, w2 in sorted(cands, key=lambda t: t[0]):
            if inject:
                lc2 = m2.legs_by_color()
                if any(n > lc2[c] for c, n in sig.items()):
                    continue
                w2 = m2.n_tri + sum(lc2.values()) - sum(sig.values())
            if w1 + w2 > 2 * D:
                continue
            tasks.append((m1, m2, X, inject))
            coeffs.append(c1 * c2)
    terms: dict = {}
    for coeff, result in zip(coeffs, _run_pairs(tasks)):
        for m, n in result:
            terms[m] = terms.get(m, 0) + coeff * n
    return DiagramSeries(terms, out_colors, D)


def _as_set(X, colors: ColorSet) -> frozenset:
    X = frozenset(X)
    bad = X - set(colors.colors)
    if bad:
        raise SeriesError(f"glued colors {sorted(bad)} not in {colors}")
    return X


def bracket(s1: DiagramSeries, s2: DiagramSeries, trunc: int | None = None) -> DiagramSeries:
    """Full pairing: glue every leg of s1 to a same-colored leg of s2."""
    return _pairing(s1, s2, frozenset(s1.colors.colors), ColorSet(), False, trunc)


def bracket_partial(s1: DiagramSeries, s2: DiagramSeries, X, trunc: int | None = None) -> DiagramSeries:
    """Pairing restricted to colors in X; other legs pass through."""
    X = _as_set(X, s1.colors)
    return _pairing(s1, s2, X, s1.colors - X, False, trunc)


def diff_op(s1: DiagramSeries, s2: DiagramSeries, trunc: int | None = None) -> DiagramSeries:
    """Glue all legs of s1 injectively into legs of s2; leftover legs of s2 remain."""
    return _pairing(s1, s2, frozenset(s1.colors.colors), s1.colors, True, trunc)


def self_closure(s: DiagramSeries, trunc: int | None = None) -> DiagramSeries:
    """Sum over per-color perfect matchings of each monomial's own legs."""
    if s.has_struts():
        raise GluingError("self-closure needs strutless input")
    rho = s.leg_ratio if s.leg_ratio is not None else Fraction(3)
    D = 0
    while trunc is None or D < trunc:
        if floor((rho * 2 * (D + 1) + 2 * (D + 1)) / 2) > s.trunc:
            break
        D += 1
    terms: dict = {}
    for m, c in sorted(s.terms.items()):
        if m.n_tri > 2 * D:
            continue
        for out, n in _close_monomial(m):
            terms[out] = terms.get(out, 0) + c * n
    return DiagramSeries(terms, ColorSet(), D)


def bracket_c(s1, s2, trunc=None):
    return primitive_part(bracket(s1, s2, trunc))


def bracket_partial_c(s1, s2, X, trunc=None):
    return primitive_part(bracket_partial(s1, s2, X, trunc))


def self_closure_c(s, trunc=None):
    return primitive_part(self_closure(s, trunc))


def diff_op_c(s1, s2, trunc=None):
    return primitive_part(diff_op(s1, s2, trunc))


def glue_monomials(g: Monomial, h: Monomial, X=None) -> DiagramSeries:
    """Pair two monomials along the colors in X (default: all their colors)."""
    colors = g.colors() | h.colors()
    X = frozenset(colors if X is None else X)
    out_colors = ColorSet(colors - X)
    result = dict(_glue_pair(g, h, X, False))
    D = (_open_weight(g, X) + _open_weight(h, X)) // 2
    return DiagramSeries(result, out_colors, D)


def glue_report(g: Monomial, h: Monomial, X=None) -> GluingReport:
    t0 = time.perf_counter()
    colors = g.colors() | h.colors()
    X = frozenset(colors if X is None else X)
    cg, ch = _x_leg_counts(g, X), _x_leg_counts(h, X)
    visited = 0
    if cg == ch:
        a, b = _check_struts(g, h, X, False)
        visited = sum(1 for _ in _enumerate_gluings(a, b, X, False))
        bij = prod(factorial(n) for n in cg.values())
    else:
        bij = 0
    result = glue_monomials(g, h, X)
    return GluingReport(g, h, bij, visited, result, time.perf_counter() - t0)
