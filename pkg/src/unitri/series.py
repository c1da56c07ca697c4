"""Truncated formal power series with diagram monomials and rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .diagram import ONE, ColorSet, ConnectedDiagram, DiagramError, Monomial


class SeriesError(ValueError):
    """Raised when a series operation's precondition fails."""


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class DiagramSeries:
    """Finite map ``Monomial -> Fraction``, complete through degree ``trunc``.

    ``leg_ratio`` is an optional upper bound on legs per trivalent vertex
    over every non-strut component that can occur in the untruncated
    series.  Gluing operators use it to decide how far their output is
    complete; when absent the universal bound 3 is assumed.
    """

    __slots__ = ("terms", "colors", "trunc", "leg_ratio")

    def __init__(self, terms: Mapping | Iterable = (), colors: ColorSet | Iterable[str] = (),
                 trunc: int = 0, leg_ratio=None):
        if not isinstance(colors, ColorSet):
            colors = ColorSet(colors)
        if trunc < 0:
            raise SeriesError("trunc must be non-negative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict = {}
        for m, c in items:
            if isinstance(m, ConnectedDiagram):
                m = Monomial([m])
            c = _q(c)
            if c == 0 or m.degree > trunc:
                continue
            bad = m.colors() - set(colors.colors)
            if bad:
                raise DiagramError(f"monomial uses colors {sorted(bad)} outside {colors}")
            clean[m] = clean.get(m, 0) + c
            if clean[m] == 0:
                del clean[m]
        self.terms = clean
        self.colors = colors
        self.trunc = trunc
        self.leg_ratio = None if leg_ratio is None else Fraction(leg_ratio)

    # construction helpers

    @classmethod
    def one(cls, colors=(), trunc: int = 0) -> "DiagramSeries":
        return cls({ONE: 1}, colors, trunc, leg_ratio=0)

    @classmethod
    def zero(cls, colors=(), trunc: int = 0) -> "DiagramSeries":
        return cls({}, colors, trunc, leg_ratio=0)

    @classmethod
    def monomial(cls, m, coeff=1, colors=(), trunc: int | None = None) -> "DiagramSeries":
        if isinstance(m, ConnectedDiagram):
            m = Monomial([m])
        if trunc is None:
            trunc = m.degree
        return cls({m: coeff}, colors, trunc)

    def _like(self, terms, trunc=None, colors=None, leg_ratio="same") -> "DiagramSeries":
        return DiagramSeries(terms, self.colors if colors is None else colors,
                             self.trunc if trunc is None else trunc,
                             self.leg_ratio if leg_ratio == "same" else leg_ratio)

    # inspection

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def coefficient(self, m) -> Fraction:
        if isinstance(m, ConnectedDiagram):
            m = Monomial([m])
        return self.terms.get(m, Fraction(0))

    @property
    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_primitive(self) -> bool:
        return all(m.is_connected for m in self.terms)

    def has_struts(self) -> bool:
        return any(m.has_strut() for m in self.terms)

    def has_same_color_struts(self) -> bool:
        return any(f.is_same_color_strut for m in self.terms for f in m.factors)

    def components(self) -> set:
        return {f for m in self.terms for f in m.factors}

    def degree_part(self, d: int) -> "DiagramSeries":
        return self._like({m: c for m, c in self.terms.items() if m.degree == d})

    def truncate(self, trunc: int) -> "DiagramSeries":
        return self._like(self.terms, trunc=min(trunc, self.trunc))

    def with_colors(self, colors) -> "DiagramSeries":
        return self._like(self.terms, colors=ColorSet(colors))

    def __eq__(self, other):
        if not isinstance(other, DiagramSeries):
            return NotImplemented
        return (self.terms == other.terms and self.trunc == other.trunc
                and self.colors == other.colors)

    def same_terms(self, other: "DiagramSeries") -> bool:
        """Compare coefficients only, through the smaller of the two truncations."""
        n = min(self.trunc, other.trunc)
        return self.truncate(n).terms == other.truncate(n).terms

    def __repr__(self):
        body = " + ".join(f"{c}*{m!r}" for m, c in self) or "0"
        return f"DiagramSeries[trunc={self.trunc}]({body})"

    # arithmetic

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1, other))

    def __neg__(self):
        return scale(-1, self)

    def __mul__(self, other):
        if isinstance(other, DiagramSeries):
            return multiply(self, other)
        return scale(other, self)

    def __rmul__(self, other):
        return scale(other, self)

    def __pow__(self, k: int):
        return power(self, k)


def _max_ratio(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


def _same_colors(s1: DiagramSeries, s2: DiagramSeries):
    if s1.colors != s2.colors:
        raise SeriesError(f"color-set mismatch: {s1.colors} vs {s2.colors}")


def add(s1: DiagramSeries, s2: DiagramSeries) -> DiagramSeries:
    _same_colors(s1, s2)
    terms = dict(s1.terms)
    for m, c in s2.terms.items():
        terms[m] = terms.get(m, 0) + c
    return DiagramSeries(terms, s1.colors, min(s1.trunc, s2.trunc),
                         _max_ratio(s1.leg_ratio, s2.leg_ratio))


def scale(q, s: DiagramSeries) -> DiagramSeries:
    q = _q(q)
    return s._like({m: q * c for m, c in s.terms.items()})


def multiply(s1: DiagramSeries, s2: DiagramSeries) -> DiagramSeries:
    _same_colors(s1, s2)
    n = min(s1.trunc, s2.trunc)
    by_degree: dict = {}
    for m, c in s2.terms.items():
        by_degree.setdefault(m.degree, []).append((m, c))
    terms: dict = {}
    for m1, c1 in s1.terms.items():
        d1 = m1.degree
        for d2, group in by_degree.items():
            if d1 + d2 > n:
                continue
            for m2, c2 in group:
                m = m1 * m2
                terms[m] = terms.get(m, 0) + c1 * c2
    return DiagramSeries(terms, s1.colors, n, _max_ratio(s1.leg_ratio, s2.leg_ratio))


def primitive_part(s: DiagramSeries) -> DiagramSeries:
    return s._like({m: c for m, c in s.terms.items() if m.is_connected})


def exp(p: DiagramSeries) -> DiagramSeries:
    """Exponential of a primitive series without constant term.

    The coefficient of ``prod u_i^k_i`` is ``prod r_i^k_i / k_i!``; the
    multisets are enumerated directly up to the truncation degree.
    """
    if p.constant_term != 0:
        raise SeriesError("exp needs a series with zero constant term")
    if not p.is_primitive():
        raise SeriesError("exp needs a primitive series (single connected factors)")
    gens = sorted(((m.factors[0], c) for m, c in p.terms.items()), key=lambda t: t[0].key)
    n = p.trunc
    terms: dict = {}

    def rec(i, budget, factors, coeff):
        if i == len(gens):
            terms[Monomial(factors)] = coeff
            return
        u, r = gens[i]
        d = u.degree
        k = 0
        term = Fraction(1)
        while k * d <= budget:
            rec(i + 1, budget - k * d, factors + [u] * k, coeff * term)
            k += 1
            term = term * r / k
        return

    rec(0, n, [], Fraction(1))
    ratio = p.leg_ratio
    return DiagramSeries(terms, p.colors, n, ratio)


def log(s: DiagramSeries) -> DiagramSeries:
    if s.constant_term != 1:
        raise SeriesError("log needs constant term exactly 1")
    x = add(s, scale(-1, DiagramSeries.one(s.colors, s.trunc)))
    x = s._like(x.terms)
    result = s._like({}, leg_ratio=s.leg_ratio)
    pw = DiagramSeries.one(s.colors, s.trunc)
    k = 1
    while True:
        pw = multiply(pw, x)
        if pw.is_zero():
            break
        result = add(result, scale(Fraction((-1) ** (k + 1), k), pw))
        k += 1
    return s._like(result.terms)


def power(s: DiagramSeries, k: int) -> DiagramSeries:
    if k < 0:
        if s.constant_term != 1:
            raise SeriesError("negative powers need constant term exactly 1")
        return exp(scale(k, log(s)))
    result = DiagramSeries.one(s.colors, s.trunc)
    result = s._like(result.terms)
    base = s
    while k:
        if k & 1:
            result = multiply(result, base)
        k >>= 1
        if k:
            base = multiply(base, base)
    return result
