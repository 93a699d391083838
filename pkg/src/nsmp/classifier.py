"""Pattern-level verdicts: does a sign pattern allow / require the nSMP?

``allows_nsmp`` is exact for every pattern.  ``classify`` runs a fixed
cascade of structural rules; the first conclusive rule decides the
requirement verdict and randomized refutation is the last resort.  A rule
tag is recorded for every rule that fired.
"""

from __future__ import annotations

import enum
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import RationalMatrix, char_poly, determinant, is_squarefree
from .digraph import (
    ENUMERATION_LIMIT,
    has_intersecting_opposite_cycles,
    has_positive_simple_cycle,
    is_bipartite_underlying,
    is_sign_nonsingular,
    max_composite_cycle,
    recognize_cycle,
    recognize_hollow,
    recognize_proper_hessenberg,
    recognize_star,
    scc_decompose,
)
from .engine import (
    Property,
    attached_star_counterexample,
    check,
    star_counterexample,
    star_counterexample_leaves,
)
from .errors import TooLargeError
from .patterns import Sign, SignPattern, all_patterns, orbit_keys, sample_realization
from .rng import derive_seed
from .templates import matching_templates, template_library

# rule tags
COMPOSITE_CYCLE = "composite-cycle"
ORDER_ONE = "order-one"
HOLLOW = "hollow"
CYCLE = "cycle"
STAR = "star"
HESSENBERG = "hessenberg"
ORDER_TWO = "order-two"
ORDER_THREE = "order-three"
TEMPLATE = "template"
BIPARTITE = "bipartite"
ZERO_BLOCK = "reducible-zero-block"
SIGNED_BLOCK = "reducible-signed-block"
STAR_ATTACHMENT = "star-attachment"
RANDOM_WITNESS = "random-witness"
RANDOM_NONE = "random-no-witness"


class Allow(enum.Enum):
    ALLOWS = "Allows"
    DOES_NOT_ALLOW = "DoesNotAllow"


class Require(enum.Enum):
    REQUIRES = "Requires"
    DOES_NOT_REQUIRE = "DoesNotRequire"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class RefutationBudget:
    """How hard to look for a realization without the nSMP.

    Sample ``i`` uses seed ``derive_seed(seed, i)`` and magnitude bound
    ``1 + i % max_bound``, so small bounds (where integer coincidences
    such as equal entries are likely) recur throughout the search.
    """

    samples: int = 200
    seed: int = 0
    max_bound: int = 10
    search_theorem_witness: bool = True

    def realizations(self, P: SignPattern):
        for i in range(self.samples):
            yield sample_realization(P, derive_seed(self.seed, i), 1 + i % self.max_bound)


@dataclass(frozen=True)
class Classification:
    allow: Allow
    require: Require
    provenance: tuple[str, ...]
    witness: tuple[RationalMatrix, RationalMatrix] | None = None
    distinct_realization: RationalMatrix | None = None

    @property
    def label(self) -> str:
        if self.allow is Allow.DOES_NOT_ALLOW:
            return "DoesNotAllow"
        return {Require.REQUIRES: "Requires",
                Require.DOES_NOT_REQUIRE: "AllowsNotRequires",
                Require.UNKNOWN: "AllowsUnknownRequire"}[self.require]

    @property
    def rule(self) -> str:
        """Tag of the rule that decided the requirement verdict."""
        return self.provenance[-1]


def allows_nsmp(P: SignPattern) -> Allow:
    """Exact: allowed iff some composite cycle covers at least n - 1 vertices."""
    return Allow.ALLOWS if max_composite_cycle(P) >= P.n - 1 else Allow.DOES_NOT_ALLOW


def find_refutation(P: SignPattern, budget: RefutationBudget
                    ) -> tuple[RationalMatrix, RationalMatrix] | None:
    """First sampled realization lacking the nSMP, with its witness."""
    for A in budget.realizations(P):
        v = check(A, Property.NSMP)
        if not v.has_property:
            return A, v.witness
    return None


def _with_entry(A: RationalMatrix, i: int, j: int, value) -> RationalMatrix:
    flat = list(A.entries)
    flat[i * A.cols + j] = Fraction(value)
    return RationalMatrix(A.rows, A.cols, tuple(flat))


def block_coincidence_refutation(P: SignPattern, budget: RefutationBudget
                                 ) -> tuple[RationalMatrix, RationalMatrix] | None:
    """Refute a reducible pattern by forcing two diagonal blocks to share an eigenvalue.

    For each sampled realization and each 1x1 diagonal block with value
    ``lam``, one nonzero entry of another block is re-solved so that
    ``det(block - lam I) = 0``; the determinant is affine in any single entry.
    The result is kept if that entry keeps its prescribed sign.
    """
    dec = scc_decompose(P)
    if dec.is_irreducible:
        return None
    comps = dec.components
    singles = [c[0] for c in comps if len(c) == 1]
    for A in budget.realizations(P):
        for v in singles:
            lam = A[v, v]
            for comp in comps:
                if comp == (v,):
                    continue
                idx = list(comp)
                k = len(idx)
                shift = RationalMatrix.identity(k).scale(lam)
                for a in range(k):
                    for b in range(k):
                        i, j = idx[a], idx[b]
                        if not P.entries[i][j]:
                            continue
                        d0 = determinant(_with_entry(A, i, j, 0).principal_submatrix(idx) - shift)
                        d1 = determinant(_with_entry(A, i, j, 1).principal_submatrix(idx) - shift)
                        if d1 == d0:
                            continue
                        t = -d0 / (d1 - d0)
                        if Sign.of(t) != P.entries[i][j]:
                            continue
                        B = _with_entry(A, i, j, t)
                        verdict = check(B)
                        if not verdict.has_property:
                            return B, verdict.witness
    return None


def construct_distinct_realization(P: SignPattern, seed: int = 0, budget: int = 200,
                                   magnitude_bound: int = 10) -> RationalMatrix | None:
    """Realization with squarefree characteristic polynomial (hence with the nSMP)."""
    if allows_nsmp(P) is Allow.DOES_NOT_ALLOW:
        return None
    for i in range(budget):
        A = sample_realization(P, derive_seed(seed, i), magnitude_bound)
        if is_squarefree(char_poly(A)):
            return A
    return None


def star_requires(P: SignPattern) -> bool | None:
    """Requirement verdict for a star pattern; ``None`` if ``P`` is not a star."""
    ss = recognize_star(P)
    if ss is None:
        return None
    return star_counterexample_leaves(ss) is None


def _hessenberg_requires(P: SignPattern) -> bool:
    full = set(range(2, P.n + 1))
    for Q in (P, P.transpose()):
        lengths = recognize_proper_hessenberg(Q)
        if lengths is not None and full <= lengths:
            return True
    return False


def _pendant_block(P: SignPattern) -> tuple[int, SignPattern] | None:
    """A vertex with no arcs to the rest in one direction, and the pattern on the rest.

    Such a vertex makes ``P`` permutation similar to a superpattern of
    ``S (+) [w]`` with ``w`` its diagonal entry.
    """
    n = P.n
    if n < 2:
        return None
    E = P.entries
    for v in range(n):
        sink = not any(E[v][j] for j in range(n) if j != v)
        source = not any(E[i][v] for i in range(n) if i != v)
        if sink or source:
            rest = [i for i in range(n) if i != v]
            return v, P.principal(rest)
    return None


class _Cascade:
    def __init__(self, P: SignPattern, budget: RefutationBudget):
        self.P = P
        self.budget = budget
        self.tags: list[str] = []

    def done(self, require: Require, witness=None, distinct=None) -> Classification:
        return Classification(Allow.ALLOWS, require, tuple(self.tags), witness, distinct)

    def theorem_refutation(self) -> tuple[RationalMatrix, RationalMatrix] | None:
        if not self.budget.search_theorem_witness:
            return None
        return (attached_star_counterexample(self.P, self.budget.seed, self.budget.max_bound)
                or block_coincidence_refutation(self.P, self.budget)
                or find_refutation(self.P, self.budget))


def classify(P: SignPattern, budget: RefutationBudget | None = None) -> Classification:
    """Allow / require verdict for ``P`` with the rules that produced it."""
    budget = budget or RefutationBudget()
    n = P.n
    c = _Cascade(P, budget)

    c.tags.append(COMPOSITE_CYCLE)
    if allows_nsmp(P) is Allow.DOES_NOT_ALLOW:
        # every realization lacks the nSMP, so any one is a certificate
        A = sample_realization(P, derive_seed(budget.seed, 0), budget.max_bound)
        v = check(A)
        witness = None if v.has_property else (A, v.witness)
        return Classification(Allow.DOES_NOT_ALLOW, Require.DOES_NOT_REQUIRE,
                              tuple(c.tags), witness)

    if n == 1:
        c.tags.append(ORDER_ONE)
        return c.done(Require.REQUIRES)
    if recognize_hollow(P):
        c.tags.append(HOLLOW)
        return c.done(Require.REQUIRES)
    if recognize_cycle(P):
        c.tags.append(CYCLE)
        return c.done(Require.REQUIRES)

    ss = recognize_star(P)
    if ss is not None:
        c.tags.append(STAR)
        if star_counterexample_leaves(ss) is None:
            return c.done(Require.REQUIRES)
        return c.done(Require.DOES_NOT_REQUIRE, star_counterexample(P, budget.seed))

    if _hessenberg_requires(P):
        c.tags.append(HESSENBERG)
        return c.done(Require.REQUIRES)

    if n == 2:
        # irreducible 2x2 patterns are hollow; here P is reducible and allows
        c.tags.append(ORDER_TWO)
        if P.entries[0][0] != P.entries[1][1]:
            return c.done(Require.REQUIRES)
        return c.done(Require.DOES_NOT_REQUIRE, c.theorem_refutation())

    if n == 3:
        if scc_decompose(P).is_irreducible:
            c.tags.append(ORDER_THREE)
            return c.done(Require.REQUIRES)
        names = matching_templates(P)
        lib = template_library()
        # templates of one family may share fixed signings; the families are disjoint
        req = [k for k in names if k in lib.requires_templates]
        allow = [k for k in names if k in lib.allows_templates]
        if req and not allow:
            c.tags.append(f"{TEMPLATE}-{req[0]}")
            return c.done(Require.REQUIRES)
        if allow and not req:
            c.tags.append(f"{TEMPLATE}-{allow[0]}")
            return c.done(Require.DOES_NOT_REQUIRE, c.theorem_refutation())

    if n <= ENUMERATION_LIMIT and is_bipartite_underlying(P) and has_intersecting_opposite_cycles(P):
        mcc = max_composite_cycle(P)
        if (n % 2 == 0 and is_sign_nonsingular(P)) or mcc == n - 1:
            c.tags.append(BIPARTITE)
            return c.done(Require.DOES_NOT_REQUIRE, c.theorem_refutation())

    pendant = _pendant_block(P)
    if pendant is not None and n - 1 <= ENUMERATION_LIMIT:
        v, S = pendant
        w = P.entries[v][v]
        sub = classify(S, budget)
        if sub.require is not Require.UNKNOWN:
            if w == Sign.ZERO:
                c.tags.append(ZERO_BLOCK)
                ok = sub.require is Require.REQUIRES and is_sign_nonsingular(S)
            else:
                c.tags.append(SIGNED_BLOCK)
                oriented = S if w == Sign.PLUS else S.negate()
                ok = sub.require is Require.REQUIRES and not has_positive_simple_cycle(oriented)
            if ok:
                return c.done(Require.REQUIRES)
            return c.done(Require.DOES_NOT_REQUIRE, c.theorem_refutation())

    found = attached_star_counterexample(P, budget.seed, budget.max_bound)
    if found is not None:
        c.tags.append(STAR_ATTACHMENT)
        return c.done(Require.DOES_NOT_REQUIRE, found)
    found = find_refutation(P, budget)
    if found is not None:
        c.tags.append(RANDOM_WITNESS)
        return c.done(Require.DOES_NOT_REQUIRE, found)
    c.tags.append(RANDOM_NONE)
    return c.done(Require.UNKNOWN)


requires_nsmp = classify


# ---------------------------------------------------------------------------
# exhaustive small-order tables

@dataclass
class PatternRecord:
    pattern: SignPattern
    canonical: SignPattern
    classification: Classification
    orbit_size: int = 1


@dataclass
class EnumerationSummary:
    n: int
    orbits_only: bool
    records: list[PatternRecord] = field(default_factory=list)

    @property
    def total_patterns(self) -> int:
        return sum(r.orbit_size for r in self.records)

    def label_counts(self) -> Counter:
        out: Counter = Counter()
        for r in self.records:
            out[r.classification.label] += r.orbit_size
        return out

    def rule_counts(self) -> Counter:
        out: Counter = Counter()
        for r in self.records:
            out[r.classification.rule] += r.orbit_size
        return out

    def require_counts(self) -> Counter:
        out: Counter = Counter()
        for r in self.records:
            out[r.classification.require.value] += r.orbit_size
        return out


def orbit_partition(n: int) -> dict[tuple[int, ...], tuple[tuple[int, ...], int]]:
    """Map every pattern key of order ``n`` to (canonical key, orbit size)."""
    out: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
    for P in all_patterns(n):
        if P.key in out:
            continue
        orbit = orbit_keys(P)
        canon = min(orbit)
        for k in orbit:
            out[k] = (canon, len(orbit))
    return out


def _classify_key(args: tuple[int, tuple[int, ...], RefutationBudget]) -> Classification:
    n, key, budget = args
    return classify(SignPattern.from_key(n, key), budget)


def classify_all(n: int, budget: RefutationBudget | None = None,
                 orbits_only: bool = False, jobs: int = 1) -> EnumerationSummary:
    """Classify every pattern of order ``n`` (or one per orbit, with orbit sizes).

    With ``jobs > 1`` the work is spread over processes; record order is
    the same as in a serial run.
    """
    if n > 3:
        raise TooLargeError(n, 3, "classify_all")
    budget = budget or RefutationBudget()
    part = orbit_partition(n)
    if orbits_only:
        sizes = {canon: size for canon, size in part.values()}
        keys = sorted(sizes)
    else:
        keys = [P.key for P in all_patterns(n)]
    work = [(n, k, budget) for k in keys]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_classify_key, work, chunksize=256))
    else:
        results = [_classify_key(w) for w in work]
    summary = EnumerationSummary(n, orbits_only)
    for key, cl in zip(keys, results):
        P = SignPattern.from_key(n, key)
        if orbits_only:
            summary.records.append(PatternRecord(P, P, cl, sizes[key]))
        else:
            summary.records.append(PatternRecord(P, SignPattern.from_key(n, part[key][0]), cl))
    return summary
