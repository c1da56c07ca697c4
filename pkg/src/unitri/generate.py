"""Reproducible random diagrams, primitive series and monomial-pair corpora."""

from __future__ import annotations

import random
from fractions import Fraction

from .diagram import ColorSet, ConnectedDiagram, Monomial, components
from .series import DiagramSeries

STRUT_POLICIES = ("allow", "forbid", "same_color_forbid")
MAX_VERTICES = 8
MAX_DENOMINATOR = 12


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def shapes(max_degree: int, max_vertices: int = MAX_VERTICES, allow_strut: bool = True,
           max_leg_ratio=None, min_legs: int = 0) -> list[tuple[int, int]]:
    """(trivalent, legs) counts that admit a connected diagram."""
    out = []
    for t in range(max_vertices + 1):
        for u in range(max_vertices + 1 - t):
            if (3 * t + u) % 2 or t + u == 0 or (t + u) // 2 > max_degree or u < min_legs:
                continue
            if t == 0:
                if u == 2 and allow_strut:
                    out.append((t, u))
                continue
            # connectivity needs at least V - 1 edges
            if u > t + 2:
                continue
            if max_leg_ratio is not None and u > max_leg_ratio * t:
                continue
            out.append((t, u))
    return out


def random_diagram(seed, n_tri: int, n_legs: int, colors, distinct_strut_colors=False,
                   attempts: int = 500) -> ConnectedDiagram:
    """Uniformly random dart pairing, retried until connected."""
    rng = _rng(seed)
    colors = list(colors)
    if not colors and n_legs:
        raise ValueError("legs need at least one color")
    for _ in range(attempts):
        kinds = [None] * n_tri + [rng.choice(colors) for _ in range(n_legs)]
        if n_tri == 0 and distinct_strut_colors:
            if len(colors) < 2:
                raise ValueError("a mixed-color strut needs two colors")
            kinds[0], kinds[1] = rng.sample(colors, 2)
        darts = list(range(3 * n_tri + n_legs))
        rng.shuffle(darts)
        partner = [0] * len(darts)
        for a, b in zip(darts[::2], darts[1::2]):
            partner[a], partner[b] = b, a
        comps = components(kinds, partner)
        if len(comps) == 1:
            return comps[0]
    raise ValueError(f"no connected diagram found for t={n_tri}, u={n_legs}")


def random_coefficient(rng: random.Random) -> Fraction:
    num = rng.choice([n for n in range(-6, 7) if n])
    return Fraction(num, rng.randint(1, MAX_DENOMINATOR))


def random_primitive(seed, trunc: int, colors, strut_policy: str = "forbid", n_terms: int = 3,
                     max_vertices: int = MAX_VERTICES, max_leg_ratio=None,
                     max_degree: int | None = None) -> DiagramSeries:
    """Random primitive series without constant term.

    ``max_degree`` caps the generated diagrams (default ``trunc``); the
    series itself is a polynomial, so ``trunc`` may exceed it.  The
    returned ``leg_ratio`` is the largest legs/trivalent ratio among the
    non-strut terms.
    """
    if strut_policy not in STRUT_POLICIES:
        raise ValueError(f"strut_policy must be one of {STRUT_POLICIES}")
    rng = _rng(seed)
    colors = ColorSet(colors)
    cap = trunc if max_degree is None else min(trunc, max_degree)
    allow = strut_policy == "allow" or (strut_policy == "same_color_forbid" and len(colors) > 1)
    pool = shapes(cap, max_vertices, allow, max_leg_ratio)
    if not colors.colors:
        pool = [(t, u) for t, u in pool if u == 0]
    terms: dict = {}
    ratio = Fraction(0)
    for _ in range(n_terms if pool else 0):
        t, u = rng.choice(pool)
        d = random_diagram(rng, t, u, colors.colors, strut_policy == "same_color_forbid")
        if t:
            ratio = max(ratio, Fraction(u, t))
        m = Monomial([d])
        if m not in terms:
            terms[m] = random_coefficient(rng)
    return DiagramSeries(terms, colors, trunc, leg_ratio=ratio)


def random_monomial(seed, colors, max_vertices: int, max_factors: int = 2,
                    allow_strut: bool = True) -> Monomial:
    rng = _rng(seed)
    factors = []
    budget = max_vertices
    for _ in range(rng.randint(1, max_factors)):
        pool = [(t, u) for t, u in shapes(budget, budget, allow_strut) if u]
        if not pool:
            break
        t, u = rng.choice(pool)
        factors.append(random_diagram(rng, t, u, colors))
        budget -= t + u
        if budget < 2:
            break
    return Monomial(factors)


def _n_vertices(m: Monomial) -> int:
    return sum(len(f.kinds) for f in m.factors)


def monomial_pair_corpus(seed, count: int, colors=("x", "y"), max_vertices: int = 12,
                         mode: str = "pair") -> list[tuple[Monomial, Monomial]]:
    """Distinct monomial pairs with matching legs and at most ``max_vertices`` in total.

    ``mode`` is ``pair`` (equal leg counts per color, struts on at most one
    side) or ``inject`` (left counts at most right counts, strutless).
    """
    rng = _rng(seed)
    pairs: list = []
    seen = set()
    tries = 0
    while len(pairs) < count:
        tries += 1
        if tries > 200 * count:
            raise RuntimeError("could not build the requested corpus")
        size_g = rng.randint(2, max_vertices - 2)
        g = random_monomial(rng, colors, size_g, allow_strut=mode == "pair")
        h = random_monomial(rng, colors, max_vertices - _n_vertices(g),
                            allow_strut=mode == "pair" and not g.has_strut())
        if not g.factors or not h.factors or _n_vertices(g) + _n_vertices(h) > max_vertices:
            continue
        lg, lh = g.legs_by_color(), h.legs_by_color()
        if mode == "pair" and lg != lh:
            continue
        if mode == "inject" and any(n > lh[c] for c, n in lg.items()):
            continue
        if (g, h) in seen:
            continue
        seen.add((g, h))
        pairs.append((g, h))
    return pairs
