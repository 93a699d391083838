from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from nsmp.algebra import RationalMatrix
from nsmp.patterns import Sign, SignPattern

small_rationals = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
sparse_rationals = st.one_of(st.just(Fraction(0)), small_rationals)


@st.composite
def rational_matrices(draw, min_n: int = 1, max_n: int = 4, elements=sparse_rationals,
                      square: bool = True):
    r = draw(st.integers(min_n, max_n))
    c = r if square else draw(st.integers(min_n, max_n))
    flat = draw(st.lists(elements, min_size=r * c, max_size=r * c))
    return RationalMatrix(r, c, tuple(flat))


@st.composite
def sign_patterns(draw, min_n: int = 1, max_n: int = 4):
    n = draw(st.integers(min_n, max_n))
    flat = draw(st.lists(st.sampled_from(list(Sign)), min_size=n * n, max_size=n * n))
    return SignPattern.from_key(n, [int(s) for s in flat])
