from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsmp.algebra import char_poly, is_squarefree
from nsmp.classifier import (
    BIPARTITE,
    COMPOSITE_CYCLE,
    CYCLE,
    HESSENBERG,
    HOLLOW,
    ORDER_ONE,
    ORDER_THREE,
    ORDER_TWO,
    SIGNED_BLOCK,
    STAR,
    ZERO_BLOCK,
    Allow,
    RefutationBudget,
    Require,
    allows_nsmp,
    block_coincidence_refutation,
    classify,
    classify_all,
    construct_distinct_realization,
    find_refutation,
)
from nsmp.engine import check, verify_witness
from nsmp.errors import TooLargeError
from nsmp.patterns import (
    PatternTransform,
    SignPattern,
    apply_transform,
    parse_pattern,
    qualitative_member,
    sample_realization,
)

from strategies import sign_patterns

FAST = RefutationBudget(samples=60)


def pat(text: str) -> SignPattern:
    return parse_pattern(text)


def star(n: int, loops: str, arcs: str = "") -> SignPattern:
    """Star with centre 0; ``loops[k]`` is the loop of leaf k+1, arcs default to +."""
    arcs = arcs or "+" * (2 * (n - 1))
    rows = [["0"] * n for _ in range(n)]
    for k, v in enumerate(range(1, n)):
        rows[v][v] = loops[k]
        rows[0][v], rows[v][0] = arcs[2 * k], arcs[2 * k + 1]
    return pat("\n".join(" ".join(r) for r in rows))


# -- allows -----------------------------------------------------------------

def test_allows_examples():
    assert allows_nsmp(pat("0 +\n0 0")) is Allow.DOES_NOT_ALLOW
    assert allows_nsmp(pat("0")) is Allow.ALLOWS
    for n in (4, 5, 6):
        assert allows_nsmp(star(n, "+" * (n - 3) + "00")) is Allow.ALLOWS
        assert allows_nsmp(star(n, "+" * (n - 4) + "000")) is Allow.DOES_NOT_ALLOW


def test_construct_distinct_realization():
    A = construct_distinct_realization(pat("+ 0\n- +"))
    assert A[0, 0] != A[1, 1] and check(A).has_property
    assert construct_distinct_realization(pat("0 +\n0 0")) is None
    C = construct_distinct_realization(pat("0 + 0\n0 0 +\n+ 0 0"))
    assert is_squarefree(char_poly(C)) and qualitative_member(C, pat("0 + 0\n0 0 +\n+ 0 0"))


# -- the rule cascade -------------------------------------------------------

def test_intro_pattern_allows_not_requires():
    c = classify(pat("+ 0\n- +"))
    assert c.label == "AllowsNotRequires" and c.rule == ORDER_TWO
    A, X = c.witness
    assert A[0, 0] == A[1, 1] and verify_witness(A, X)


@pytest.mark.parametrize("text,rule,label", [
    ("0", ORDER_ONE, "Requires"),
    ("0 + -\n+ 0 +\n- - +", HOLLOW, "Requires"),
    ("+ + 0 0\n0 0 + 0\n0 0 + +\n- 0 0 0", CYCLE, "Requires"),
    ("0 + 0\n0 0 +\n0 0 0", COMPOSITE_CYCLE, "DoesNotAllow"),
    ("0 0 +\n+ 0 0\n- + 0", ORDER_THREE, "Requires"),
    ("0 + 0 0\n+ 0 - 0\n0 0 0 +\n+ 0 0 0", BIPARTITE, "AllowsNotRequires"),
])
def test_rule_examples(text, rule, label):
    c = classify(pat(text), FAST)
    assert c.label == label and c.rule == rule
    assert c.provenance[0] == COMPOSITE_CYCLE


def test_hessenberg_displays():
    for text in ["""0 + 0 0 0 0
                    + 0 + 0 0 0
                    + 0 0 + 0 0
                    + 0 0 0 + 0
                    + 0 0 0 0 +
                    + 0 0 0 0 0""",
                 """0 + 0 0 0 0
                    0 0 + 0 0 0
                    0 - 0 + 0 0
                    + 0 0 0 + 0
                    0 0 - 0 0 +
                    + - 0 0 0 0"""]:
        c = classify(pat(text))
        assert c.label == "Requires" and c.rule == HESSENBERG
        assert classify(pat(text).transpose()).rule == HESSENBERG


def test_star_rules():
    assert classify(star(4, "+-0")).label == "Requires"
    c = classify(star(4, "+++"))
    assert c.label == "AllowsNotRequires" and c.rule == STAR and verify_witness(*c.witness)
    c = classify(star(4, "+00", "++++-+"))
    assert c.label == "AllowsNotRequires" and verify_witness(*c.witness)
    assert classify(star(4, "+00", "++++++")).label == "Requires"
    # pigeonhole: seven leaf loop signs over three values
    for loops in ["++--000", "+-0+-0+", "+++++++"]:
        c = classify(star(8, loops))
        assert c.require is Require.DOES_NOT_REQUIRE


def test_order_three_exception_is_the_opposite_loopless_star():
    c = classify(pat("0 + +\n+ 0 0\n- 0 0"))
    assert c.label == "AllowsNotRequires" and c.rule == STAR


def test_zero_block_rule():
    # negative 3-cycle is sign-nonsingular and requires; bordered by a [0] block
    P = pat("0 + 0 +\n0 0 + 0\n- 0 0 +\n0 0 0 0")
    c = classify(P)
    assert c.label == "Requires" and c.rule == ZERO_BLOCK
    for s in range(30):
        assert check(sample_realization(P, s, 1 + s % 10)).has_property


def test_signed_block_rule():
    neg = pat("0 + 0 0\n0 0 + 0\n- 0 0 +\n0 0 0 +")
    assert classify(neg).label == "Requires" and classify(neg).rule == SIGNED_BLOCK
    pos = pat("0 + 0 0\n0 0 + 0\n+ 0 0 +\n0 0 0 +")
    c = classify(pos)
    assert c.label == "AllowsNotRequires" and c.rule == SIGNED_BLOCK
    assert verify_witness(*c.witness)


def test_hollow_plus_positive_block():
    c = classify(pat("+ - + 0\n+ 0 - 0\n+ + 0 0\n0 0 0 +"))
    assert c.label == "AllowsNotRequires" and verify_witness(*c.witness)


def test_unknown_is_reported_honestly():
    budget = RefutationBudget(samples=1, search_theorem_witness=False)
    # irreducible 4x4 pattern outside every structural class
    P = pat("+ + 0 0\n+ 0 + 0\n0 + + +\n+ 0 + 0")
    c = classify(P, budget)
    assert c.allow is Allow.ALLOWS
    assert c.require in (Require.UNKNOWN, Require.DOES_NOT_REQUIRE)
    if c.require is Require.UNKNOWN:
        assert c.label == "AllowsUnknownRequire" and c.witness is None


def test_find_refutation_and_block_coincidence():
    P = pat("+ 0\n- +")
    A, X = find_refutation(P, RefutationBudget(samples=50))
    assert verify_witness(A, X)
    A, X = block_coincidence_refutation(P, FAST)
    assert verify_witness(A, X) and qualitative_member(A, P)
    assert find_refutation(pat("+ 0\n- -"), FAST) is None


def test_budget_is_deterministic():
    P = pat("+ + 0 0 0\n0 0 + + +\n- - 0 0 0\n0 0 - 0 0\n0 0 0 - -")
    assert classify(P, RefutationBudget(seed=5)) == classify(P, RefutationBudget(seed=5))


# -- invariants -------------------------------------------------------------

@settings(max_examples=150, deadline=None)
@given(sign_patterns(max_n=3), st.data())
def test_classification_invariant_under_equivalence(P, data):
    n = P.n
    t = PatternTransform(tuple(data.draw(st.permutations(range(n)))),
                         tuple(data.draw(st.lists(st.sampled_from([1, -1]), min_size=n,
                                                  max_size=n))),
                         data.draw(st.booleans()), data.draw(st.booleans()))
    assert classify(P, FAST).label == classify(apply_transform(P, t), FAST).label


@settings(max_examples=150, deadline=None)
@given(sign_patterns(max_n=5))
def test_classification_invariants(P):
    c = classify(P, FAST)
    if c.require is Require.REQUIRES:
        assert c.allow is Allow.ALLOWS
    if c.allow is Allow.DOES_NOT_ALLOW:
        assert c.require is Require.DOES_NOT_REQUIRE
    if c.witness is not None:
        A, X = c.witness
        assert qualitative_member(A, P) and verify_witness(A, X)


# -- enumeration ------------------------------------------------------------

def test_classify_all_small():
    s1 = classify_all(1)
    assert s1.total_patterns == 3 and s1.label_counts() == {"Requires": 3}
    s2 = classify_all(2)
    assert s2.total_patterns == 81
    assert s2.label_counts() == {"Requires": 66, "AllowsNotRequires": 10, "DoesNotAllow": 5}
    o2 = classify_all(2, orbits_only=True)
    assert o2.label_counts() == s2.label_counts() and len(o2.records) == 16
    with pytest.raises(TooLargeError):
        classify_all(4)


def test_classify_all_parallel_matches_serial():
    a = classify_all(2, FAST)
    b = classify_all(2, FAST, jobs=2)
    assert [r.classification for r in a.records] == [r.classification for r in b.records]


def test_order_two_irreducible_all_require():
    for r in classify_all(2).records:
        P = r.pattern
        if P.entries[0][1] and P.entries[1][0]:
            assert r.classification.label == "Requires"
