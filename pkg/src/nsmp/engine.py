"""Exact decision procedure for the nSMP and nSSP of a rational matrix.

For a square ``A`` the unknown ``X`` is restricted to the zero positions
of ``A`` (so ``A o X = 0`` holds by construction).  The remaining
conditions are linear in those unknowns:

* ``(A X^T - X^T A)[p, q] = 0`` for every ``p, q`` (commutator rows), and
* ``tr(X^T A^k) = sum_ij X[i, j] (A^k)[i, j] = 0`` for ``0 <= k < n``
  (trace rows, nSMP only).

``A`` has the property iff that homogeneous system has only the zero solution.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    RationalMatrix,
    char_poly,
    nullspace,
    poly_gcd,
    rank,
    rank_mod_p,
)
from .digraph import StarStructure, recognize_star, scc_decompose
from .errors import DimensionMismatchError, NonSquareError, PatternMismatchError
from .patterns import Sign, SignPattern, sample_realization, sign_product


class Property(enum.Enum):
    NSMP = "nSMP"
    NSSP = "nSSP"

    @classmethod
    def parse(cls, text: str) -> Property:
        return {"nsmp": cls.NSMP, "nssp": cls.NSSP}[text.lower()]


class Outcome(enum.Enum):
    HAS_PROPERTY = "HasProperty"
    LACKS_PROPERTY = "LacksProperty"


@dataclass(frozen=True)
class NsmpSystem:
    n: int
    property: Property
    free_positions: tuple[tuple[int, int], ...]
    constraint_matrix: RationalMatrix

    def solution_to_matrix(self, values: Sequence[Fraction]) -> RationalMatrix:
        """Place a solution vector back into an ``n x n`` matrix (zeros off the free positions)."""
        flat = [Fraction(0)] * (self.n * self.n)
        for (i, j), v in zip(self.free_positions, values):
            flat[i * self.n + j] = Fraction(v)
        return RationalMatrix(self.n, self.n, tuple(flat))


@dataclass(frozen=True)
class NsmpVerdict:
    """Result of a check.

    For a direct :func:`check`, ``nullity`` is the dimension of the solution
    space and ``witness`` is a nonzero solution exactly when the property
    fails.  Verdicts combined from diagonal blocks carry neither.
    """

    property: Property
    outcome: Outcome
    witness: RationalMatrix | None = None
    nullity: int | None = None

    @property
    def has_property(self) -> bool:
        return self.outcome is Outcome.HAS_PROPERTY


@dataclass(frozen=True)
class BlockVerdict:
    blocks: tuple[tuple[int, ...], ...]
    block_verdicts: tuple[NsmpVerdict, ...]
    spectra_disjoint: bool
    combined: NsmpVerdict


def _require_square(A: RationalMatrix):
    if not A.is_square:
        raise NonSquareError(f"expected a square matrix, got {A.rows}x{A.cols}")


def _free_positions(A: RationalMatrix) -> list[tuple[int, int]]:
    n = A.rows
    return [(i, j) for i in range(n) for j in range(n) if not A.entries[i * n + j]]


def _matmul_lists(X: list[list], Y: list[list]) -> list[list]:
    cols = list(zip(*Y))
    return [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in X]


def _system_rows(M: list[list], free: Sequence[tuple[int, int]], with_trace: bool) -> list[list]:
    """Constraint rows over whatever number type ``M`` holds (ints or Fractions)."""
    n = len(M)
    zero = M[0][0] * 0
    index = {pos: k for k, pos in enumerate(free)}
    nvars = len(free)
    rows = [[zero] * nvars for _ in range(n * n)]
    for (i, j), k in index.items():
        # (A X^T)[p, i] picks up A[p, j] X[i, j]
        for p in range(n):
            a = M[p][j]
            if a:
                rows[p * n + i][k] += a
        # (X^T A)[j, q] picks up X[i, j] A[i, q]
        for q in range(n):
            a = M[i][q]
            if a:
                rows[j * n + q][k] -= a
    if with_trace:
        power = [[zero + (1 if r == c else 0) for c in range(n)] for r in range(n)]
        for k in range(n):
            if k:
                power = _matmul_lists(power, M)
            rows.append([power[i][j] for (i, j) in free])
    return rows


def assemble_system(A: RationalMatrix, property: Property = Property.NSMP) -> NsmpSystem:
    _require_square(A)
    n = A.rows
    free = _free_positions(A)
    rows = _system_rows(A.to_rows(), free, property is Property.NSMP)
    flat = tuple(Fraction(v) for r in rows for v in r)
    matrix = RationalMatrix(len(rows), len(free), flat)
    return NsmpSystem(n, property, tuple(free), matrix)


def check(A: RationalMatrix, property: Property = Property.NSMP) -> NsmpVerdict:
    """Decide the nSMP (or nSSP) of ``A`` exactly.

    A full-rank certificate modulo a prime settles the common case; whenever
    that certificate is absent the rational nullspace is computed exactly and
    its first basis vector becomes the witness.
    """
    _require_square(A)
    n = A.rows
    free = _free_positions(A)
    if not free:
        return NsmpVerdict(property, Outcome.HAS_PROPERTY, None, 0)
    int_rows, _ = A.integer_scaled()
    rows = _system_rows(int_rows, free, property is Property.NSMP)
    if rank_mod_p(rows, len(free)) == len(free):
        return NsmpVerdict(property, Outcome.HAS_PROPERTY, None, 0)
    system = RationalMatrix(len(rows), len(free), tuple(Fraction(v) for r in rows for v in r))
    basis = nullspace(system)
    if not basis:
        return NsmpVerdict(property, Outcome.HAS_PROPERTY, None, 0)
    first = basis[0].entries
    flat = [Fraction(0)] * (n * n)
    for (i, j), v in zip(free, first):
        flat[i * n + j] = v
    witness = RationalMatrix(n, n, tuple(flat))
    return NsmpVerdict(property, Outcome.LACKS_PROPERTY, witness, len(basis))


def verify_witness(A: RationalMatrix, X: RationalMatrix,
                   property: Property = Property.NSMP) -> bool:
    """Check the defining equations for ``X`` directly (no linear system involved)."""
    _require_square(A)
    if A.shape != X.shape:
        raise DimensionMismatchError(f"A is {A.shape}, X is {X.shape}")
    if X.is_zero():
        return False
    if not A.hadamard(X).is_zero():
        return False
    Xt = X.T
    if not (A @ Xt - Xt @ A).is_zero():
        return False
    if property is Property.NSMP:
        P = RationalMatrix.identity(A.rows)
        for k in range(A.rows):
            if k:
                P = P @ A
            if (Xt @ P).trace() != 0:
                return False
    return True


def in_span(v: RationalMatrix, basis: Sequence[RationalMatrix]) -> bool:
    """True iff the vectorization of ``v`` lies in the span of the vectorized ``basis``."""
    if not basis:
        return v.is_zero()
    cols = [b.entries for b in basis]
    M = RationalMatrix(len(cols[0]), len(cols), tuple(x for row in zip(*cols) for x in row))
    aug = RationalMatrix(M.rows, M.cols + 1,
                         tuple(x for row, extra in zip(zip(*cols), v.entries) for x in (*row, extra)))
    return rank(aug) == rank(M)


def solution_space(A: RationalMatrix, property: Property = Property.NSMP) -> list[RationalMatrix]:
    """Basis of all ``X`` satisfying the defining equations, as ``n x n`` matrices."""
    system = assemble_system(A, property)
    return [system.solution_to_matrix(b.entries) for b in nullspace(system.constraint_matrix)]


def check_via_blocks(A: RationalMatrix) -> BlockVerdict:
    """nSMP through the irreducible diagonal blocks: every block must have it and
    no two blocks may share an eigenvalue."""
    _require_square(A)
    dec = scc_decompose(SignPattern.of_matrix(A))
    comps = tuple(tuple(c) for c in dec.components)
    blocks = [A.principal_submatrix(c) for c in comps]
    verdicts = tuple(check(B, Property.NSMP) for B in blocks)
    polys = [char_poly(B) for B in blocks]
    disjoint = all(poly_gcd(p, q).is_constant() for p, q in itertools.combinations(polys, 2))
    ok = disjoint and all(v.has_property for v in verdicts)
    combined = NsmpVerdict(Property.NSMP, Outcome.HAS_PROPERTY if ok else Outcome.LACKS_PROPERTY,
                           None, 0 if ok else None)
    return BlockVerdict(comps, verdicts, disjoint, combined)


# ---------------------------------------------------------------------------
# star gadgets

def _pendant_gadget_witness(A: RationalMatrix, centre: int,
                            S: Sequence[int]) -> RationalMatrix | None:
    """Witness supported on the leaves ``S``, each joined only to ``centre`` by a 2-cycle.

    Two loopless leaves need 2-cycle products summing to zero; three leaves
    need equal loop values.  The leaves are normalized to ``A[centre, s] = 1``
    by a diagonal similarity, the template is placed, and the similarity is
    undone.
    """
    n = A.rows
    c = centre
    h = [A[c, s] * A[s, c] for s in S]
    if len(S) == 2:
        if A[S[0], S[0]] or A[S[1], S[1]] or h[0] + h[1] != 0:
            return None
        block = [[-1, 1], [-1, 1]]
    elif len(S) == 3:
        loops = {A[s, s] for s in S}
        if len(loops) != 1:
            return None
        a, b, cc = h
        block = [[0, cc * b, -cc * b], [-cc * a, 0, cc * a], [a * b, -a * b, 0]]
    else:
        raise ValueError("gadget needs 2 or 3 leaves")
    # d[s] = 1 / A[c, s]; X = D^{-1} X' D
    d = {s: 1 / A[c, s] for s in S}
    flat = [Fraction(0)] * (n * n)
    for a_idx, s in enumerate(S):
        for b_idx, t in enumerate(S):
            flat[s * n + t] = Fraction(block[a_idx][b_idx]) * d[t] / d[s]
    X = RationalMatrix(n, n, tuple(flat))
    return X if verify_witness(A, X, Property.NSMP) else None


def star_counterexample_leaves(ss: StarStructure) -> list[int] | None:
    """Leaves on which a star gadget refutes the nSMP, or ``None`` when none exist.

    Prefers three leaves with a common loop sign (zero included); otherwise
    two loopless leaves whose 2-cycles have opposite signs.
    """
    by_loop: dict[Sign, list[int]] = {}
    for v, lp in zip(ss.leaves, ss.leaf_loops):
        by_loop.setdefault(lp, []).append(v)
    for lp in (Sign.ZERO, Sign.PLUS, Sign.MINUS):
        if len(by_loop.get(lp, [])) >= 3:
            return by_loop[lp][:3]
    loopless = [(v, cs) for v, lp, cs in zip(ss.leaves, ss.leaf_loops, ss.leaf_cycle_signs)
                if lp == Sign.ZERO]
    for (u, su), (w, sw) in itertools.combinations(loopless, 2):
        if su != sw:
            return [u, w]
    return None


def star_witness(ss: StarStructure, A: RationalMatrix) -> RationalMatrix | None:
    """Build a nonzero nSMP witness for a star realization ``A``, if its shape admits one.

    Returns ``None`` when the star satisfies the requirement characterization
    or when the entries of ``A`` do not satisfy the gadget's equalities
    (equal loops on three leaves, or opposite 2-cycle products on two
    loopless leaves); :func:`star_counterexample` adjusts a realization so
    that they do.
    """
    _require_square(A)
    if recognize_star(SignPattern.of_matrix(A)) != ss:
        raise PatternMismatchError("matrix does not realize the given star structure")
    leaves = star_counterexample_leaves(ss)
    if leaves is None:
        return None
    return _pendant_gadget_witness(A, ss.centre, leaves)


def pendant_stars(P: SignPattern) -> list[StarStructure]:
    """Every centre with its pendant leaves: vertices whose only off-diagonal arcs form a 2-cycle with the centre."""
    n = P.n
    E = P.entries
    out = []
    for c in range(n):
        leaves = []
        for s in range(n):
            if s == c or not (E[c][s] and E[s][c]):
                continue
            if all(not E[s][t] and not E[t][s] for t in range(n) if t not in (s, c)):
                leaves.append(s)
        if len(leaves) >= 2:
            out.append(StarStructure(
                centre=c, centre_loop=E[c][c], leaves=tuple(leaves),
                leaf_loops=tuple(E[s][s] for s in leaves),
                leaf_cycle_signs=tuple(sign_product((E[c][s], E[s][c])) for s in leaves)))
    return out


def attached_star_counterexample(P: SignPattern, seed: int = 0, magnitude_bound: int = 10
                                 ) -> tuple[RationalMatrix, RationalMatrix] | None:
    """Star gadget on pendant leaves of an arbitrary pattern; the rest of ``P`` is untouched."""
    for ss in pendant_stars(P):
        leaves = star_counterexample_leaves(ss)
        if leaves is None:
            continue
        A = adjust_for_gadget(sample_realization(P, seed, magnitude_bound), ss.centre, leaves)
        X = _pendant_gadget_witness(A, ss.centre, leaves)
        if X is not None:
            return A, X
    return None


def adjust_for_gadget(A: RationalMatrix, centre: int, S: Sequence[int]) -> RationalMatrix:
    """Move ``A`` within its qualitative class so that the gadget on ``S`` applies."""
    n = A.rows
    flat = list(A.entries)
    c = centre
    if len(S) == 3:
        loop = A[S[0], S[0]]
        for s in S:
            flat[s * n + s] = loop
    else:
        u, w = S
        # A[w, c] chosen so that the two 2-cycle products cancel; sign is preserved
        flat[w * n + c] = -A[c, u] * A[u, c] / A[c, w]
    return RationalMatrix(n, n, tuple(flat))


def star_counterexample(P: SignPattern, seed: int = 0,
                        magnitude_bound: int = 10) -> tuple[RationalMatrix, RationalMatrix] | None:
    """A realization of the star pattern ``P`` without the nSMP, with its witness."""
    ss = recognize_star(P)
    if ss is None:
        raise PatternMismatchError("not a star sign pattern")
    leaves = star_counterexample_leaves(ss)
    if leaves is None:
        return None
    A = adjust_for_gadget(sample_realization(P, seed, magnitude_bound), ss.centre, leaves)
    X = star_witness(ss, A)
    return (A, X) if X is not None else None
