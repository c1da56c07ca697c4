from fractions import Fraction

import pytest

from unitri.catalog import dumbbell, legged_circle, strut, wheel
from unitri.diagram import ColorSet, Monomial, canonicalize
from unitri.generate import monomial_pair_corpus, random_primitive
from unitri.oracle import NaiveGraph, isomorphic, naive_close, naive_glue
from unitri.series import DiagramSeries
from unitri.verify import VerifyConfig, check_identity, verify


def test_random_primitive_is_deterministic():
    a = random_primitive(42, 4, ["x", "y"], "allow", n_terms=5)
    b = random_primitive(42, 4, ["x", "y"], "allow", n_terms=5)
    assert a == b and a.leg_ratio == b.leg_ratio


def test_strut_policies():
    for seed in range(30):
        s = random_primitive(seed, 3, ["x", "y"], "forbid", n_terms=5)
        assert not s.has_struts()
        t = random_primitive(seed, 3, ["x", "y"], "same_color_forbid", n_terms=5)
        assert not t.has_same_color_struts()
        assert s.is_primitive() and s.constant_term == 0
    with pytest.raises(ValueError):
        random_primitive(0, 3, ["x"], "sometimes")


def test_generated_diagrams_validate():
    for seed in range(20):
        s = random_primitive(seed, 4, ["x", "y"], "allow", n_terms=4)
        for f in s.components():
            assert canonicalize(f.raw()) == f
            assert len(f.kinds) <= 8
        for c in s.terms.values():
            assert c.denominator <= 12


def test_pair_corpus_respects_limits():
    for g, h in monomial_pair_corpus(3, 40):
        assert g.legs_by_color() == h.legs_by_color()
        assert sum(len(f.kinds) for f in g.factors + h.factors) <= 12
        assert not (g.has_strut() and h.has_strut())


def test_naive_isomorphism_sanity():
    a = NaiveGraph.from_monomial(Monomial([wheel(4)]))
    b = NaiveGraph.from_monomial(Monomial([legged_circle(["x"] * 4, reversed_at={0})]))
    c = NaiveGraph.from_monomial(Monomial([legged_circle(["x"] * 4)]))
    assert isomorphic(a, c) and not isomorphic(a, b)
    (rep, n), = naive_close(Monomial([wheel(2)]))
    assert n == 1
    assert [k for _, k in naive_glue(Monomial([wheel(2)]), Monomial([wheel(2)]))] == [2]


def test_verify_config_validation():
    with pytest.raises(ValueError):
        VerifyConfig(trunc=0)
    with pytest.raises(ValueError):
        VerifyConfig(num_trials=0)
    with pytest.raises(ValueError):
        VerifyConfig(which="other")
    with pytest.raises(ValueError):
        VerifyConfig(which="partial", colors=("x",))


def test_hand_checkable_main_case():
    B = DiagramSeries({Monomial([strut("y", "y")]): Fraction(1, 2)}, ["y"], 2, 0)
    C = DiagramSeries({Monomial([wheel(2, "y")]): Fraction(1, 3)}, ["y"], 2, 1)
    lhs, rhs, _ = check_identity("main", B, C, 2)
    assert lhs == rhs and len(lhs) > 1
    zero = DiagramSeries({}, ["y"], 2, 0)
    lhs, rhs, _ = check_identity("main", zero, zero, 2)
    assert lhs.terms == rhs.terms == {Monomial(): 1}


def test_diffop_example_inputs_in_exponentials():
    B = DiagramSeries({Monomial([dumbbell("y1", "y2")]): 1}, ["y1", "y2"], 2, 1)
    C = DiagramSeries({Monomial([legged_circle(["y1", "y1", "y2", "y2"], reversed_at={1, 3})]): 1},
                      ["y1", "y2"], 4, 1)
    lhs, rhs, _ = check_identity("differential", B, C, 3)
    assert lhs == rhs
    # at degree 4 the glued term itself appears, with its square-free companions
    lhs, rhs, _ = check_identity("differential", B, C, 4)
    assert lhs == rhs and len(lhs) > 2


def test_verify_reports_and_counterexample():
    rep = verify(VerifyConfig(seed=1, trunc=2, colors=("x", "y"), num_trials=4, which="partial"))
    assert rep.passed and rep.counterexample is None and len(rep.trials) == 4
    assert "4/4" in rep.summary()


def test_verify_records_a_counterexample_for_a_broken_operator(monkeypatch):
    import unitri.verify as v
    real = v.bracket

    def skewed(s1, s2, trunc=None):
        out = real(s1, s2, trunc)
        return DiagramSeries({m: c * (2 if len(m) == 2 else 1) for m, c in out.terms.items()},
                             out.colors, out.trunc)

    monkeypatch.setattr(v, "bracket", skewed)
    rep = verify(VerifyConfig(seed=0, trunc=3, colors=("x",), num_trials=6, which="main"))
    assert not rep.passed
    ce = rep.counterexample
    assert ce is not None and ce.difference != 0
