"""Reference matrices, witnesses and patterns with their known verdicts.

Every fixture is replayed by :func:`verify_fixture`; the CLI ``fixtures``
subcommand and the acceptance suite both go through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .algebra import RationalMatrix, char_poly, is_squarefree, parse_matrix
from .classifier import Classification, RefutationBudget, classify
from .constructions import C52, FIG1_LEFT, FIG1_RIGHT, FIG2
from .engine import Outcome, Property, check, in_span, solution_space, verify_witness
from .patterns import SignPattern, parse_pattern, qualitative_member
from .templates import template_library


@dataclass(frozen=True)
class Fixture:
    """One replayable fact.

    ``outcome`` is the expected :class:`Outcome` of ``check(matrix, property)``;
    ``label`` the expected classification label of ``pattern``.  A
    ``witness`` must verify and lie in the computed solution space.
    """

    name: str
    matrix: RationalMatrix | None = None
    property: Property = Property.NSMP
    outcome: Outcome | None = None
    witness: RationalMatrix | None = None
    pattern: SignPattern | None = None
    label: str | None = None
    squarefree: bool | None = None


@dataclass(frozen=True)
class FixtureResult:
    name: str
    passed: bool
    detail: str


def _m(text: str) -> RationalMatrix:
    return parse_matrix(text)


def _c52_matrix(b: int) -> RationalMatrix:
    return RationalMatrix.from_rows([
        [1, 1, 0, 0, 0],
        [0, 0, 1, 1, 1],
        [-1, -1, 0, 0, 0],
        [0, 0, -1, 0, 0],
        [0, 0, 0, -1, -b],
    ])


INTRO_A = _m("1 0\n-3 2")
INTRO_PATTERN = parse_pattern("+ 0\n- +")
INTRO_B = _m("1 0\n-3 1")
INTRO_X = _m("0 4\n0 0")

# centre 0 with a looped leaf 1 and loopless leaves 2, 3 carrying opposite 2-cycles
STAR_TWO_A = _m("""
0 1 1 1
1 1 0 0
1 0 0 0
-1 0 0 0
""")
STAR_TWO_X = _m("""
0 0 0 0
0 0 0 0
0 0 -1 1
0 0 -1 1
""")

# centre 0, three leaves with unit loops and centre-column entries a, b, c
_A, _B, _C = 2, 3, -1
STAR_THREE_A = RationalMatrix.from_rows([
    [0, 1, 1, 1],
    [_A, 1, 0, 0],
    [_B, 0, 1, 0],
    [_C, 0, 0, 1],
])
STAR_THREE_X = RationalMatrix.from_rows([
    [0, 0, 0, 0],
    [0, 0, _C * _B, -_C * _B],
    [0, -_C * _A, 0, _C * _A],
    [0, _A * _B, -_A * _B, 0],
])

REPEATED_EIG_PATTERN = parse_pattern("0 + 0\n+ 0 +\n+ 0 0")
REPEATED_EIG_A = _m("0 1 0\n3 0 1\n2 0 0")

BIPARTITE_A1 = _m("""
0 1 0 0
2 0 -1 0
0 0 0 1
1 0 0 0
""")
BIPARTITE_X1 = _m("""
1 0 1 0
0 1 0 1
-1 0 -1 0
0 -1 0 -1
""")
BIPARTITE_A2 = _m("""
0 1 0 0
3 0 -1 0
0 1 0 1
1 0 0 0
""")
BIPARTITE_X2 = _m("""
-2 0 -4 0
0 -1 0 -1
1 0 2 0
0 1 0 1
""")

C52_X = _m("""
0 0 0 -1 1
0 0 0 0 0
0 0 0 -1 1
0 0 0 0 0
0 0 0 0 0
""")

HOLLOW_S = parse_pattern("+ - +\n+ 0 -\n+ + 0")
HOLLOW_S_PLUS = parse_pattern("""
+ - + 0
+ 0 - 0
+ + 0 0
0 0 0 +
""")

HESSENBERG_6A = parse_pattern("""
0 + 0 0 0 0
+ 0 + 0 0 0
+ 0 0 + 0 0
+ 0 0 0 + 0
+ 0 0 0 0 +
+ 0 0 0 0 0
""")
HESSENBERG_6B = parse_pattern("""
0 + 0 0 0 0
0 0 + 0 0 0
0 - 0 + 0 0
+ 0 0 0 + 0
0 0 - 0 0 +
+ - 0 0 0 0
""")

REQUIRES = "Requires"
ALLOWS_NOT = "AllowsNotRequires"
DOES_NOT_ALLOW = "DoesNotAllow"


@lru_cache(maxsize=None)
def fixture_set() -> tuple[Fixture, ...]:
    HAS, LACKS = Outcome.HAS_PROPERTY, Outcome.LACKS_PROPERTY
    fx = [
        Fixture("intro-A-nsmp", INTRO_A, outcome=HAS, pattern=INTRO_PATTERN),
        Fixture("intro-A-nssp", INTRO_A, Property.NSSP, outcome=HAS),
        Fixture("intro-B", INTRO_B, outcome=LACKS, witness=INTRO_X, pattern=INTRO_PATTERN),
        Fixture("star-two-loopless", STAR_TWO_A, outcome=LACKS, witness=STAR_TWO_X,
                pattern=SignPattern.of_matrix(STAR_TWO_A), label=ALLOWS_NOT),
        Fixture("star-three-loops", STAR_THREE_A, outcome=LACKS, witness=STAR_THREE_X,
                pattern=SignPattern.of_matrix(STAR_THREE_A), label=ALLOWS_NOT),
        Fixture("repeated-eigenvalue", REPEATED_EIG_A, outcome=HAS,
                pattern=REPEATED_EIG_PATTERN, label=REQUIRES, squarefree=False),
        Fixture("bipartite-A1", BIPARTITE_A1, outcome=LACKS, witness=BIPARTITE_X1,
                pattern=FIG1_LEFT, label=ALLOWS_NOT),
        Fixture("bipartite-A2", BIPARTITE_A2, outcome=LACKS, witness=BIPARTITE_X2,
                pattern=FIG1_RIGHT, label=ALLOWS_NOT),
        Fixture("bipartite-pendant", pattern=FIG2, label=ALLOWS_NOT),
        Fixture("c52-b2", _c52_matrix(2), outcome=HAS, pattern=C52, label=ALLOWS_NOT),
        Fixture("c52-b1", _c52_matrix(1), outcome=LACKS, witness=C52_X, pattern=C52),
        Fixture("hollow-S", pattern=HOLLOW_S, label=REQUIRES),
        Fixture("hollow-S-plus-block", pattern=HOLLOW_S_PLUS, label=ALLOWS_NOT),
        Fixture("hessenberg-6a", pattern=HESSENBERG_6A, label=REQUIRES),
        Fixture("hessenberg-6b", pattern=HESSENBERG_6B, label=REQUIRES),
    ]
    lib = template_library()
    for name, T in lib.requires_templates.items():
        for k, P in enumerate(T.fixed_signings()):
            fx.append(Fixture(f"template-{name}-{k}", pattern=P, label=REQUIRES))
    for name, T in lib.allows_templates.items():
        for k, P in enumerate(T.fixed_signings()):
            fx.append(Fixture(f"template-{name}-{k}", pattern=P, label=ALLOWS_NOT))
    return tuple(fx)


def verify_fixture(f: Fixture, budget: RefutationBudget | None = None) -> FixtureResult:
    problems: list[str] = []
    if f.matrix is not None:
        if f.pattern is not None and not qualitative_member(f.matrix, f.pattern):
            problems.append("matrix not in the qualitative class of the pattern")
        if f.outcome is not None:
            v = check(f.matrix, f.property)
            if v.outcome != f.outcome:
                problems.append(f"check gave {v.outcome.value}, expected {f.outcome.value}")
        if f.witness is not None:
            if not verify_witness(f.matrix, f.witness, f.property):
                problems.append("witness fails the defining equations")
            elif not in_span(f.witness, solution_space(f.matrix, f.property)):
                problems.append("witness outside the computed solution space")
        if f.squarefree is not None and is_squarefree(char_poly(f.matrix)) != f.squarefree:
            problems.append("squarefree test disagrees")
    if f.label is not None and f.pattern is not None:
        c: Classification = classify(f.pattern, budget)
        if c.label != f.label:
            problems.append(f"classified {c.label} ({c.rule}), expected {f.label}")
        elif c.witness is not None:
            A, X = c.witness
            if not verify_witness(A, X):
                problems.append("classifier witness fails verification")
    return FixtureResult(f.name, not problems, "; ".join(problems) or "ok")


def verify_all(budget: RefutationBudget | None = None) -> list[FixtureResult]:
    return [verify_fixture(f, budget) for f in fixture_set()]
