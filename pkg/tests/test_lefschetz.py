from itertools import combinations
from math import comb

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from hullcoh import fixtures
from hullcoh.liecomplex import (
    LieAlgebra, basis_cochain, cochain_wedge, cohomology, complex_from_presentation, invariant_subcomplex,
)
from hullcoh.lefschetz import (
    NotSymplectic, OddDimension, SymplecticCertificate, closed_invariant_two_forms, find_symplectic,
    hard_lefschetz_check, is_nondegenerate, wedge_power,
)
from hullcoh.qkernel import QMatrix, Rational
from oracles import ext_from_flat, ext_power, ext_wedge, to_sympy


def cx_of(name):
    return complex_from_presentation(fixtures.build(name).presentation)


def e(n, i, j, c=1):
    return basis_cochain(n, [i, j], c)


def add(*ws):
    return tuple(sum(x) for x in zip(*ws))


# -- closed invariant 2-forms --------------------------------------------------

def test_closed_forms_abelian():
    cx = invariant_subcomplex(LieAlgebra.abelian(4))
    assert len(closed_invariant_two_forms(cx)) == comb(4, 2)


def test_closed_forms_first_example():
    basis = closed_invariant_two_forms(cx_of("hyperbolic_k1"))
    assert len(basis) == 2
    span = QMatrix.from_rows(list(basis))
    # e1^e2 and e3^e4 (0-based: (0,1) and (2,3)) lie in the span
    for w in (e(4, 0, 1), e(4, 2, 3)):
        assert QMatrix.from_rows(list(basis) + [w]).rank == span.rank


def test_closed_forms_heisenberg():
    cx = cx_of("heisenberg")
    # every 2-cochain of the 3-dimensional Heisenberg algebra is closed; only two classes survive
    assert len(closed_invariant_two_forms(cx)) == 3
    assert cohomology(cx).betti[2] == 2


# -- nondegeneracy --------------------------------------------------------------

def test_standard_form_top_coefficient():
    omega = add(e(4, 0, 1), e(4, 2, 3))
    ok, top = is_nondegenerate(omega, 4)
    assert ok and top == 2
    ref = ext_power(ext_from_flat(4, 2, omega), 2)
    assert ref == {(0, 1, 2, 3): 2}


def test_degenerate_forms():
    assert not is_nondegenerate(e(4, 0, 1), 4)[0]
    # rank 2: a decomposable wedge of two 1-forms
    wedge = ext_wedge({(0,): 1, (1,): 2}, {(2,): 3, (3,): -1, (0,): 1})
    omega = tuple(Rational(wedge.get(I, 0)) for I in combinations(range(4), 2))
    assert not is_nondegenerate(omega, 4)[0]


def test_odd_dimension():
    with pytest.raises(OddDimension):
        is_nondegenerate(e(3, 0, 1), 3)
    with pytest.raises(OddDimension):
        find_symplectic(cx_of("sol"))


@given(st.lists(st.integers(-3, 3), min_size=15, max_size=15))
def test_top_power_matches_independent_wedge(coeffs):
    omega = tuple(Rational(c) for c in coeffs)
    top = wedge_power(6, omega, 3)
    ref = ext_power(ext_from_flat(6, 2, omega), 3)
    assert top[0] == ref.get((0, 1, 2, 3, 4, 5), 0)
    # and it is 3! times the Pfaffian: det of the skew matrix is the square of the Pfaffian
    S = sp.zeros(6)
    for (i, j), c in zip(combinations(range(6), 2), coeffs):
        S[i, j], S[j, i] = c, -c
    assert sp.Rational(int(top[0].numerator), int(top[0].denominator)) ** 2 == 36 * S.det()


# -- search ---------------------------------------------------------------------

def test_find_on_first_example():
    cert = find_symplectic(cx_of("hyperbolic_k1"))
    assert cert is not None and cert.top_coefficient != 0
    assert cert.found_by.startswith("enumeration")


def test_find_on_abelian():
    cert = find_symplectic(invariant_subcomplex(LieAlgebra.abelian(4)))
    assert cert is not None and cert.half_dim == 2


def test_find_records_denominator():
    cert = find_symplectic(cx_of("torus4"), seed=3)
    assert all((x * cert.denominator).denominator == 1 for x in cert.omega)


def _diagonal_torus_complex(weights):
    """Abelian Q^4 with T acting diagonally; a 2-cochain is invariant iff its weights multiply to 1."""
    ad = QMatrix(4, 4, [weights[i] if i == j else 0 for i in range(4) for j in range(4)])
    return invariant_subcomplex(LieAlgebra.abelian(4), None, [(ad, QMatrix.identity(1))])


def test_find_returns_none_without_invariant_forms():
    cx = _diagonal_torus_complex([1, 2, 3, Rational(1, 6)])
    assert closed_invariant_two_forms(cx) == []
    assert find_symplectic(cx) is None


def test_find_returns_none_when_all_forms_degenerate():
    cx = _diagonal_torus_complex([1, 1, 2, 3])
    assert len(closed_invariant_two_forms(cx)) == 1
    assert find_symplectic(cx, draws=50) is None


# -- hard Lefschetz -------------------------------------------------------------

def _certify(name, omega=None):
    cx = cx_of(name)
    report = cohomology(cx)
    if omega is None:
        cert = find_symplectic(cx)
    else:
        ok, top = is_nondegenerate(omega, cx.n)
        assert ok
        cert = SymplecticCertificate(tuple(Rational(x) for x in omega), cx.n // 2, top, 1, "given")
    return hard_lefschetz_check(cert, report), report


def test_hlp_first_example_with_stated_form():
    omega = add(e(4, 0, 1), e(4, 2, 3))
    cert, report = _certify("hyperbolic_k1", omega)
    assert cert.hlp
    lv = next(lv for lv in cert.levels if lv.k == 1)
    assert lv.matrix.shape == (2, 2) and lv.rank == 2
    # H^1 -> H^3 sends the first generator to (first) ^ e3 ^ e4 up to the class basis
    for z in report.representatives[1]:
        assert any(cochain_wedge(4, omega, 2, z, 1))


def test_hlp_second_example_with_stated_form():
    omega = add(e(6, 0, 1), e(6, 2, 3), e(6, 4, 5))
    cert, _ = _certify("hyperbolic_k2", omega)
    assert cert.hlp and [lv.k for lv in cert.levels] == [0, 1, 2, 3]


def test_hlp_torus():
    cert, _ = _certify("torus4")
    assert cert.hlp
    assert [lv.rank for lv in cert.levels] == [6, 4, 1]


def test_hlp_fails_for_kodaira_thurston():
    cert, _ = _certify("kodaira_thurston")
    assert cert.hlp is False
    assert cert.levels[0].isomorphism
    bad = [lv for lv in cert.levels if not lv.isomorphism]
    assert [lv.k for lv in bad] == [1]
    assert bad[0].matrix.shape == (3, 3) and bad[0].rank < 3


@pytest.mark.parametrize("name", ["hyperbolic_k1", "torus4", "kodaira_thurston"])
@pytest.mark.parametrize("scale", [Rational(-3), Rational(2, 7)])
def test_verdict_scaling_invariance(name, scale):
    base, _ = _certify(name)
    scaled, _ = _certify(name, tuple(x * scale for x in base.omega))
    assert scaled.hlp == base.hlp
    assert [lv.rank for lv in scaled.levels] == [lv.rank for lv in base.levels]


@pytest.mark.parametrize("name", ["hyperbolic_k1", "hyperbolic_k2", "torus4", "kodaira_thurston"])
def test_rank_duality(name):
    cert, _ = _certify(name)
    for lv in cert.levels:
        assert lv.rank == lv.pairing_rank
        if lv.matrix.rows and lv.matrix.cols:
            assert to_sympy(lv.matrix).rank() == lv.rank


def test_not_symplectic_inputs():
    cx = cx_of("hyperbolic_k1")
    report = cohomology(cx)
    degenerate = SymplecticCertificate(e(4, 0, 1), 2, Rational(1), 1, "given")
    with pytest.raises(NotSymplectic):
        hard_lefschetz_check(degenerate, report)
    # not invariant: e1^e3 is moved by the hyperbolic block
    moved = add(e(4, 0, 2), e(4, 1, 3))
    with pytest.raises(NotSymplectic):
        hard_lefschetz_check(SymplecticCertificate(moved, 2, Rational(1), 1, "given"), report)
    # not closed: on Kodaira-Thurston d(z^w) != 0
    kt = cohomology(cx_of("kodaira_thurston"))
    open_form = add(e(4, 2, 3), e(4, 0, 1))
    with pytest.raises(NotSymplectic):
        hard_lefschetz_check(SymplecticCertificate(open_form, 2, Rational(1), 1, "given"), kt)


def test_filiform_symplectic_but_not_lefschetz():
    # x1^x4 + x2^x3 is closed and nondegenerate on the filiform algebra
    omega = add(e(4, 0, 3), e(4, 1, 2))
    cert, _ = _certify("filiform4", omega)
    assert cert.hlp is False
