"""Randomized verification campaigns for the group-like identities.

Each trial draws primitive series B and C under the hypotheses of the
chosen identity, computes the operator once, and checks that the result
equals the exponential of its own primitive part.  Input truncations are
chosen so that every output coefficient through ``trunc`` is complete.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import strut
from .diagram import ColorSet, Monomial
from .generate import random_primitive
from .gluing import (bracket, bracket_partial, diff_op, required_degrees, self_closure,
                     side_ratio)
from .series import DiagramSeries, exp, primitive_part

CAMPAIGNS = ("main", "partial", "closure", "differential")


@dataclass
class VerifyConfig:
    seed: int = 0
    trunc: int = 3
    colors: tuple = ("x",)
    num_trials: int = 10
    which: str = "main"
    n_terms: int = 3
    max_redraws: int = 40

    def __post_init__(self):
        self.colors = tuple(ColorSet(self.colors).colors)
        if self.trunc < 1:
            raise ValueError("trunc must be at least 1")
        if self.num_trials < 1:
            raise ValueError("num_trials must be at least 1")
        if self.which not in CAMPAIGNS:
            raise ValueError(f"which must be one of {CAMPAIGNS}")
        if self.which == "partial" and len(self.colors) < 2:
            raise ValueError("the partial campaign needs at least two colors")


@dataclass
class Counterexample:
    B: DiagramSeries | None
    C: DiagramSeries
    monomial: Monomial
    lhs: Fraction
    rhs: Fraction

    @property
    def difference(self) -> Fraction:
        return self.lhs - self.rhs


@dataclass
class Trial:
    index: int
    seed: int
    passed: bool
    terms: int
    elapsed: float
    cross_checked: bool = False


@dataclass
class Report:
    config: VerifyConfig
    trials: list = field(default_factory=list)
    counterexample: Counterexample | None = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.trials) and all(t.passed for t in self.trials)

    def summary(self) -> str:
        ok = sum(t.passed for t in self.trials)
        line = (f"{self.config.which}: {ok}/{len(self.trials)} trials passed "
                f"(trunc {self.config.trunc}, colors {' '.join(self.config.colors)}, "
                f"{self.elapsed:.2f}s)")
        if self.counterexample:
            ce = self.counterexample
            line += f"\n  first counterexample at {ce.monomial!r}: {ce.lhs} != {ce.rhs}"
        return line


def _first_difference(lhs: DiagramSeries, rhs: DiagramSeries):
    for m in sorted(set(lhs.terms) | set(rhs.terms)):
        a, b = lhs.coefficient(m), rhs.coefficient(m)
        if a != b:
            return m, a, b
    return None


def _polynomial(s: DiagramSeries, trunc: int) -> DiagramSeries:
    """A generated primitive is a polynomial, so any truncation of it is exact."""
    return DiagramSeries(s.terms, s.colors, max(trunc, s.trunc), s.leg_ratio)


def _inputs(cfg: VerifyConfig, rng: random.Random, D: int):
    colors = cfg.colors
    which = cfg.which
    # a leg ratio of at most 1 keeps the exponential of C at degree <= 2D
    c_ratio = 1 if D >= 3 else 2
    if which == "closure":
        return None, random_primitive(rng, D, colors, "forbid", cfg.n_terms,
                                      max_leg_ratio=c_ratio)
    if which == "differential":
        B = random_primitive(rng, D, colors, "forbid", cfg.n_terms, max_leg_ratio=2)
        C = random_primitive(rng, D, colors, "forbid", cfg.n_terms, max_leg_ratio=c_ratio)
        return B, C
    B = random_primitive(rng, D, colors, "allow", cfg.n_terms)
    C = random_primitive(rng, D, colors, "forbid", cfg.n_terms, max_leg_ratio=c_ratio)
    return B, C


def _glued(cfg: VerifyConfig, rng: random.Random):
    if cfg.which != "partial":
        return frozenset(cfg.colors)
    k = rng.randint(1, len(cfg.colors) - 1)
    return frozenset(rng.sample(list(cfg.colors), k))


def run_trial(cfg: VerifyConfig, seed: int):
    """One trial; returns (lhs, rhs, B, C, cross) with ``cross`` the strut-route closure or None.

    Inputs whose result is only the constant term are redrawn (from the
    same generator, so trials stay reproducible) up to ``max_redraws`` times.
    """
    rng = random.Random(seed)
    for _ in range(cfg.max_redraws):
        out = _attempt(cfg, rng)
        if len(out[0]) > 1:
            return out
    return out


def _attempt(cfg: VerifyConfig, rng: random.Random):
    D = cfg.trunc
    B, C = _inputs(cfg, rng, D)
    X = _glued(cfg, rng)
    lhs, rhs, cross = check_identity(cfg.which, B, C, D, X)
    return lhs, rhs, B, C, cross


def check_identity(which: str, B: DiagramSeries | None, C: DiagramSeries, trunc: int, X=None):
    """Evaluate one identity on polynomial primitives B and C.

    Returns (operator result, exp of its primitive part, strut-route
    closure or None).  ``B`` is ignored for the closure identity.
    """
    if which not in CAMPAIGNS:
        raise ValueError(f"which must be one of {CAMPAIGNS}")
    D = trunc
    X = frozenset(C.colors.colors if X is None else X)
    cross = None
    if which == "closure":
        rho = C.leg_ratio if C.leg_ratio is not None else Fraction(3)
        need = int((rho * 2 * D + 2 * D) // 2)
        eC = exp(_polynomial(C, need).truncate(need))
        lhs = self_closure(eC, D)
        ng, _nh = required_degrees(D, None, side_ratio(eC, X))
        half = DiagramSeries({Monomial([strut(y, y)]): Fraction(1, 2) for y in C.colors.colors},
                             C.colors, ng, leg_ratio=0)
        cross = bracket(exp(half), eC, D)
    else:
        # the strut side may be unbounded; size both exponentials by the bound
        ng, nh = required_degrees(D, side_ratio(B, X), side_ratio(C, X))
        eB = exp(_polynomial(B, ng).truncate(ng))
        eC = exp(_polynomial(C, nh).truncate(nh))
        if which == "differential":
            lhs = diff_op(eB, eC, D)
        elif which == "partial":
            lhs = bracket_partial(eB, eC, X, D)
        else:
            lhs = bracket(eB, eC, D)
    if lhs.trunc != D:
        raise RuntimeError(f"output complete only through degree {lhs.trunc}, wanted {D}")
    return lhs, exp(primitive_part(lhs)), cross


def verify(cfg: VerifyConfig) -> Report:
    """Run the campaign; mathematical failures are recorded, never raised."""
    report = Report(cfg)
    t_all = time.perf_counter()
    for i in range(cfg.num_trials):
        seed = cfg.seed * 1_000_003 + i
        t0 = time.perf_counter()
        lhs, rhs, B, C, cross = run_trial(cfg, seed)
        ok = lhs == rhs and (cross is None or cross == lhs)
        report.trials.append(Trial(i, seed, ok, len(lhs), time.perf_counter() - t0,
                                   cross is not None))
        if not ok and report.counterexample is None:
            diff = _first_difference(lhs, rhs) or _first_difference(cross, lhs)
            report.counterexample = Counterexample(B, C, *diff)
    report.elapsed = time.perf_counter() - t_all
    return report
