"""Formal Gaussian integration and closed formulas for primitive LMO series.

Everything here is assembled from the gluing operators: wheels and the
unknot series Omega, linking-matrix algebra (exact inverse and signature),
the Gaussian pairing, eigenvalue normalization, and the lens-space and
Seifert-fibered formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd

from .catalog import strut, theta, wheel
from .diagram import ColorSet, Monomial
from .gluing import bracket_c, bracket_partial, required_degrees, side_ratio
from .series import DiagramSeries, SeriesError, add, exp, log, multiply, power, scale

__all__ = [
    "LmoError", "RouteMismatch", "wheel", "theta", "modified_bernoulli", "omega_series",
    "LinkingData", "invert_matrix", "signature", "gaussian_integrate", "normalize_lmo",
    "dedekind_symbol", "lens_space_primitive", "lens_space_routes", "SeifertInput",
    "seifert_primitive", "connect_sum", "is_group_like", "theta_series",
]

DEDEKIND_CONVENTION = "S(q/p) = 12 * sum_{k=1}^{p-1} ((k/p)) ((kq/p))"
BERNOULLI_CONVENTION = "sum_m b_2m x^2m = 1/2 log(sinh(x/2) / (x/2))"


class LmoError(ValueError):
    """Raised on invalid topological input (singular matrices, bad Seifert data)."""


class RouteMismatch(ArithmeticError):
    """The two lens-space computation routes disagree."""

    def __init__(self, message, difference: DiagramSeries):
        super().__init__(message)
        self.difference = difference


# ---------------------------------------------------------------------------
# univariate helpers for the Bernoulli generating function


def _mul_trunc(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a):
        if x:
            for j in range(n + 1 - i):
                out[i + j] += x * b[j]
    return out


def _log1p_trunc(g, n):
    """log(1 + g) for a coefficient list g with g[0] = 0."""
    out = [Fraction(0)] * (n + 1)
    pw = [Fraction(1)] + [Fraction(0)] * n
    for k in range(1, n + 1):
        pw = _mul_trunc(pw, g, n)
        for i in range(n + 1):
            out[i] += Fraction((-1) ** (k + 1), k) * pw[i]
    return out


@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # sinh(x/2)/(x/2) = sum_k x^{2k} / (4^k (2k+1)!)
    g = [Fraction(0)] * (n + 1)
    fact = 1
    for k in range(1, n // 2 + 1):
        fact *= (2 * k) * (2 * k + 1)
        g[2 * k] = Fraction(1, 4 ** k * fact)
    return tuple(c / 2 for c in _log1p_trunc(g, n))


def modified_bernoulli(m: int) -> Fraction:
    """Coefficient b_{2m} of x^{2m} in 1/2 log(sinh(x/2)/(x/2))."""
    if m < 1:
        raise ValueError(f"modified_bernoulli needs m >= 1, got {m}")
    return _bernoulli_table(2 * m)[2 * m]


def theta_series(coeff=1, trunc: int = 1) -> DiagramSeries:
    return DiagramSeries({Monomial([theta()]): coeff}, ColorSet(), trunc)


def omega_series(p: int = 1, color: str = "x", trunc: int = 2) -> DiagramSeries:
    """Omega_{x/p} = exp(sum_m b_{2m} p^{-2m} w_{2m}), truncated at ``trunc``."""
    if p == 0:
        raise LmoError("omega_series needs a nonzero p")
    if trunc < 0:
        raise SeriesError("trunc must be non-negative")
    p = Fraction(p)
    terms = {Monomial([wheel(2 * m, color)]): modified_bernoulli(m) / p ** (2 * m)
             for m in range(1, trunc // 2 + 1)}
    return exp(DiagramSeries(terms, ColorSet([color]), trunc, leg_ratio=1))


def is_group_like(s: DiagramSeries) -> bool:
    return s.constant_term == 1 and log(s).is_primitive()


# ---------------------------------------------------------------------------
# linking matrices


def _frac_matrix(rows) -> tuple:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class LinkingData:
    """Symmetric rational matrix indexed by surgery colors.

    ``struts`` holds optional extra strut coefficients r_ij keyed by color
    pairs; they are free parameters, not derived from the matrix.
    """

    colors: tuple
    matrix: tuple
    struts: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "colors", tuple(self.colors))
        object.__setattr__(self, "matrix", _frac_matrix(self.matrix))
        n = len(self.colors)
        if len(set(self.colors)) != n:
            raise LmoError("duplicate surgery colors")
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise LmoError(f"matrix must be {n}x{n} to match colors {list(self.colors)}")
        for i in range(n):
            for j in range(i):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise LmoError(f"matrix is not symmetric at ({i}, {j})")

    @property
    def dim(self) -> int:
        return len(self.colors)

    def entry(self, x: str, y: str) -> Fraction:
        return self.matrix[self.colors.index(x)][self.colors.index(y)]


def invert_matrix(L: LinkingData) -> LinkingData:
    """Exact Gauss-Jordan inverse; raises LmoError on a singular matrix."""
    n = L.dim
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(L.matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise LmoError("the linking matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return LinkingData(L.colors, [row[n:] for row in a], L.struts)


def signature(L: LinkingData) -> tuple[int, int]:
    """(e_plus, e_minus) by exact congruence diagonalization."""
    a = [list(row) for row in L.matrix]
    n = len(a)
    plus = minus = 0
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                a[i], a[j] = a[j], a[i]
                for row in a:
                    row[i], row[j] = row[j], row[i]
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    continue
                # add row/column j to row/column i; the new pivot is 2 a_ij
                a[i] = [x + y for x, y in zip(a[i], a[j])]
                for row in a:
                    row[i] += row[j]
        p = a[i][i]
        if p > 0:
            plus += 1
        else:
            minus += 1
        for k in range(i + 1, n):
            f = a[k][i] / p
            if f:
                a[k] = [x - f * y for x, y in zip(a[k], a[i])]
                for row in a:
                    row[k] -= f * row[i]
    return plus, minus


def strut_exponent(Linv: LinkingData, colors: ColorSet, trunc: int) -> DiagramSeries:
    """sum over ordered pairs (x, y) of -1/2 l^{xy} strut(x, y)."""
    terms: dict = {}
    for i, x in enumerate(Linv.colors):
        for j, y in enumerate(Linv.colors):
            c = -Fraction(1, 2) * Linv.matrix[i][j]
            m = Monomial([strut(x, y)])
            terms[m] = terms.get(m, 0) + c
    return DiagramSeries(terms, colors, trunc, leg_ratio=0)


def gaussian_integrate(C: DiagramSeries, L: LinkingData, trunc: int) -> DiagramSeries:
    """Pair exp of the inverse-linking struts against exp C along the surgery colors.

    ``C`` is a strutless primitive series; colors outside the surgery set
    pass through (the tangle variant).  The result is checked to be
    group-like.
    """
    X = frozenset(L.colors)
    if not X <= set(C.colors.colors):
        raise LmoError(f"surgery colors {sorted(X)} not all in {C.colors}")
    if not C.is_primitive() or C.constant_term != 0:
        raise SeriesError("gaussian_integrate needs a primitive C without constant term")
    if any(f.is_strut and (f.kinds[0] in X or f.kinds[1] in X) for f in C.components()):
        raise LmoError("C contains struts among the surgery colors")
    Linv = invert_matrix(L)
    rho_c = side_ratio(C, X)
    need = required_degrees(trunc, None, rho_c)
    n_s, n_c = need if need is not None else (trunc, C.trunc)
    S = strut_exponent(Linv, C.colors, n_s)
    eC = exp(C.truncate(min(C.trunc, n_c)))
    out = bracket_partial(exp(S), eC, X, trunc)
    if not is_group_like(out):
        raise ArithmeticError("Gaussian integral is not group-like")
    return out


def normalize_lmo(z0_L: DiagramSeries, z0_Uplus: DiagramSeries, z0_Uminus: DiagramSeries,
                  L: LinkingData) -> DiagramSeries:
    """Z0(U+)^{-e+} Z0(U-)^{-e-} Z0(L), with e+- the signature counts of L."""
    for name, s in (("z0_Uplus", z0_Uplus), ("z0_Uminus", z0_Uminus)):
        if s.constant_term != 1:
            raise SeriesError(f"{name} must have constant term 1")
    e_plus, e_minus = signature(L)
    out = z0_L
    if e_plus:
        out = multiply(power(z0_Uplus, -e_plus), out)
    if e_minus:
        out = multiply(power(z0_Uminus, -e_minus), out)
    return out


# ---------------------------------------------------------------------------
# closed formulas


def _sawtooth(x: Fraction) -> Fraction:
    if x.denominator == 1:
        return Fraction(0)
    return x - floor(x) - Fraction(1, 2)


def dedekind_symbol(q: int, p: int) -> Fraction:
    """S(q/p) as 12 times the classical Dedekind sum s(q, p)."""
    if p < 1:
        raise LmoError(f"dedekind_symbol needs p >= 1, got {p}")
    if gcd(p, q) != 1:
        raise LmoError(f"p={p} and q={q} are not coprime")
    s = sum((_sawtooth(Fraction(k, p)) * _sawtooth(Fraction(k * q, p)) for k in range(1, p)),
            Fraction(0))
    return 12 * s


def lens_space_routes(p: int, q: int, trunc: int) -> tuple[DiagramSeries, DiagramSeries]:
    """Both lens-space expressions: two brackets, and one bracket against Omega^{-1} Omega_{x/p}."""
    if p < 1:
        raise LmoError(f"lens space needs p >= 1, got {p}")
    if gcd(p, q) != 1:
        raise LmoError(f"p={p} and q={q} are not coprime")
    om = omega_series(1, "x", trunc)
    om_p = omega_series(p, "x", trunc)
    corr = theta_series(-dedekind_symbol(q, p) / 48, trunc)
    two = add(add(bracket_c(om, om_p, trunc), scale(-1, bracket_c(om, om, trunc))), corr)
    one = add(bracket_c(om, multiply(power(om, -1), om_p), trunc), corr)
    return two, one


def lens_space_primitive(p: int, q: int, trunc: int, check_routes: bool = False) -> DiagramSeries:
    """Primitive LMO series of the (p, q) lens space in the free diagram algebra.

    With ``check_routes`` the single-bracket form is computed as well and a
    RouteMismatch carrying the difference is raised when they disagree.
    """
    two, one = lens_space_routes(p, q, trunc)
    if check_routes:
        diff = add(two, scale(-1, one))
        if not diff.is_zero():
            raise RouteMismatch(f"lens routes disagree for p={p}, q={q} at trunc {trunc}", diff)
    return two


@dataclass(frozen=True)
class SeifertInput:
    """Seifert fibered space over the sphere: b and the (p_i, q_i) pairs.

    ``lambda_omega`` is the Casson-Walker value, supplied by the caller.
    """

    b: int
    pairs: tuple
    lambda_omega: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(p), int(q)) for p, q in self.pairs))
        object.__setattr__(self, "lambda_omega", Fraction(self.lambda_omega))
        if any(p == 0 for p, _q in self.pairs):
            raise LmoError("Seifert pairs need nonzero p_i")
        if self.e0 == 0:
            raise LmoError("Seifert input has e0 = 0")

    @property
    def e0(self) -> Fraction:
        return self.b + sum((Fraction(q, p) for p, q in self.pairs), Fraction(0))

    def theta_coefficient(self) -> Fraction:
        n = len(self.pairs)
        inv_sq = sum((Fraction(1, p * p) for p, _q in self.pairs), Fraction(0))
        return Fraction(1, 4) * (self.lambda_omega + (n - 2 - inv_sq) / (12 * self.e0))


def seifert_primitive(inp: SeifertInput, trunc: int) -> DiagramSeries:
    """Primitive LMO series of a Seifert fibered space with spherical base."""
    n = len(inp.pairs)
    colors = ColorSet(["x"])
    # the strut side has no trivalent vertices, so the right side needs degree 2*trunc
    need = 2 * trunc
    om = omega_series(1, "x", need)
    right = power(om, 2 - n)
    for p, _q in inp.pairs:
        right = multiply(right, omega_series(p, "x", need))
    left = exp(DiagramSeries({Monomial([strut("x", "x")]): Fraction(1, 2) / inp.e0},
                             colors, trunc, leg_ratio=0))
    om_t = omega_series(1, "x", trunc)
    out = add(bracket_c(left, right, trunc), scale(-1, bracket_c(om_t, om_t, trunc)))
    return add(out, theta_series(inp.theta_coefficient(), trunc))


def connect_sum(z1: DiagramSeries, z2: DiagramSeries) -> DiagramSeries:
    if not (z1.is_primitive() and z2.is_primitive()):
        raise SeriesError("connect_sum needs primitive series")
    return add(z1, z2)
