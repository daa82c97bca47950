"""Hypothesis strategies for exact objects."""
from __future__ import annotations

from hypothesis import strategies as st

from hullcoh.polyform import PolyForm
from hullcoh.qkernel import QMatrix, QPoly, Rational
from hullcoh._kernels import subset_masks


@st.composite
def rationals(draw, bound: int = 9, max_den: int = 6):
    num = draw(st.integers(-bound, bound))
    den = draw(st.integers(1, max_den))
    return Rational(num, den)


@st.composite
def matrices(draw, max_rows: int = 5, max_cols: int = 5, rows: int | None = None, cols: int | None = None,
             sparse: bool = True):
    r = rows if rows is not None else draw(st.integers(1, max_rows))
    c = cols if cols is not None else draw(st.integers(1, max_cols))
    entry = st.one_of(st.just(Rational(0)), rationals()) if sparse else rationals()
    return QMatrix(r, c, [draw(entry) for _ in range(r * c)])


@st.composite
def polys(draw, nvars: int, max_degree: int = 3, max_terms: int = 4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        e = tuple(draw(st.integers(0, max_degree)) for _ in range(nvars))
        if sum(e) > max_degree:
            continue
        terms[e] = draw(rationals())
    return QPoly(nvars, terms)


@st.composite
def forms(draw, arity: int, degree: int, value_dim: int = 1, max_degree: int = 3):
    if degree > arity:
        return PolyForm(arity, degree, value_dim)
    masks = [int(m) for m in subset_masks(arity, degree)]
    chosen = draw(st.lists(st.sampled_from(masks), max_size=3, unique=True)) if masks else []
    terms = {m: tuple(draw(polys(arity, max_degree)) for _ in range(value_dim)) for m in chosen}
    return PolyForm(arity, degree, value_dim, terms)
