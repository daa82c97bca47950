import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from hullcoh.hull import (
    GroupElement, HullPresentation, InvalidPresentation, NotInSpan, NotUnipotent, PolyMatrix, RationalModule,
    exp_nilpotent, log_unipotent, maurer_cartan, pullback_form, sigma, theta, unipotent_inverse, validate,
)
from hullcoh.liecomplex import basis_cochain, complex_from_presentation
from hullcoh.polyform import DegreeMismatch, PolyForm
from hullcoh.qkernel import QMatrix, QPoly, Rational
from helpers import heisenberg_std, line_group, random_elems
from strategies import polys

E = QMatrix.unit


# -- validation ---------------------------------------------------------------

def test_validate_fixture_examples(built):
    assert validate(built("heisenberg").presentation).ok
    sol = built("sol").presentation
    assert sol.declared_rank == 3 == sol.n
    assert validate(sol).ok


def test_validate_rejects_non_nilpotent():
    h = HullPresentation(2, (QMatrix.identity(2),), (), (), None, None)
    rep = validate(h)
    assert not rep.ok and rep.first_failure().name == "u_basis nilpotent"
    with pytest.raises(InvalidPresentation):
        validate(h, raise_on_failure=True)


def test_validate_rejects_rank_mismatch(built):
    sol = built("sol").presentation
    bad = HullPresentation(sol.N, sol.u_basis, sol.t_generators, sol.gamma_generators, 4, sol.module,
                           sol.u_names, "bad")
    assert validate(bad).first_failure().name.startswith("full representation")


def test_validate_rejects_unclosed_bracket():
    h = HullPresentation(3, (E(3, 0, 1), E(3, 1, 2)), (), (), None, None)
    assert validate(h).first_failure().name == "bracket closure"


def test_validate_rejects_non_normalizing_t():
    X = E(3, 0, 2)
    S = QMatrix.from_rows([[0, 0, 1], [0, 1, 0], [1, 0, 0]])  # conjugates E_02 to E_20
    h = HullPresentation(3, (X,), (S,), (), None, None)
    assert not validate(h).ok


def test_validate_rejects_module_not_homomorphism():
    X, Y, Z = E(3, 0, 1), E(3, 1, 2), E(3, 0, 2)
    mod = RationalModule(3, (), (X, Y, QMatrix.zeros(3)))
    h = HullPresentation(3, (X, Y, Z), (), (), None, mod)
    assert validate(h).first_failure().name == "r is a Lie homomorphism"


def test_validate_rejects_incompatible_R(built):
    sol = built("sol_std").presentation
    mod = RationalModule(3, (QMatrix.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 1]]),), sol.module.r_basis)
    # r = 0 so any R is compatible on u; the gamma generator's image must still be invertible
    bad_gen = (("t", GroupElement(sol.gamma_generators[0][1].s, sol.gamma_generators[0][1].u, QMatrix.zeros(3))),)
    h = HullPresentation(sol.N, sol.u_basis, sol.t_generators, bad_gen, 3, mod)
    assert not validate(h).ok


def test_all_fixtures_validate(built):
    from conftest import FIXTURE_NAMES
    for name in FIXTURE_NAMES:
        assert validate(built(name).presentation).ok, name


# -- group law ----------------------------------------------------------------

def test_multiply_identity_and_inverse(built):
    h = built("sol").presentation
    rng = np.random.default_rng(1)
    for g in random_elems(h, rng, 10):
        assert h.multiply(h.identity(), g) == g
        e = h.multiply(g, h.inverse(g))
        assert e.s.is_identity() and e.u.is_identity()


@pytest.mark.parametrize("name", ["sol", "heisenberg", "hyperbolic_k1"])
def test_associativity_and_ambient_product(built, name):
    h = built(name).presentation
    rng = np.random.default_rng(2)
    for _ in range(15):
        a, b, c = random_elems(h, rng, 3)
        assert h.multiply(h.multiply(a, b), c) == h.multiply(a, h.multiply(b, c))
        assert h.multiply(a, b).ambient == a.ambient @ b.ambient


def test_word_matches_ambient_product(built):
    h = built("sol").presentation
    w = (("t", 1), ("v1", -1), ("t", -1), ("v2", 1))
    amb = QMatrix.identity(h.N)
    for name, e in w:
        g = h.generator(name).ambient
        amb = amb @ (g if e > 0 else g.inverse)
    assert h.word(w).ambient == amb


# -- exp / log ----------------------------------------------------------------

def test_log_examples():
    assert log_unipotent(QMatrix.identity(3)).is_zero()
    a = QPoly.var(0, 1) * 3 + 1
    m = PolyMatrix(2, 2, 1, [QPoly.constant(1, 1), a, QPoly.zero(1), QPoly.constant(1, 1)])
    expect = PolyMatrix(2, 2, 1, [QPoly.zero(1), a, QPoly.zero(1), QPoly.zero(1)])
    assert log_unipotent(m) == expect


def test_log_rejects_non_unipotent():
    with pytest.raises(NotUnipotent):
        log_unipotent(QMatrix.from_rows([[2, 0], [0, 1]]))
    with pytest.raises(NotUnipotent):
        exp_nilpotent(QMatrix.identity(2))


@st.composite
def unipotent_poly(draw, size=None, nvars=None, max_degree=2):
    n = size or draw(st.integers(1, 5))
    p = nvars if nvars is not None else draw(st.integers(0, 2))
    data = []
    for i in range(n):
        for j in range(n):
            if i == j:
                data.append(QPoly.constant(1, p))
            elif j > i:
                data.append(draw(polys(p, max_degree=max_degree, max_terms=3)))
            else:
                data.append(QPoly.zero(p))
    m = PolyMatrix(n, n, p, data)
    # conjugate by a fixed unimodular matrix so the input is not triangular
    if n > 1 and draw(st.booleans()):
        P = QMatrix.identity(n) + QMatrix.unit(n, n - 1, 0)
        m = P @ m @ P.inverse
    return m


@given(unipotent_poly())
def test_exp_log_roundtrip(m):
    x = log_unipotent(m)
    assert exp_nilpotent(x) == m
    assert log_unipotent(exp_nilpotent(x)) == x


@given(unipotent_poly(nvars=0))
def test_exp_matches_sympy_series(m):
    q = m.evaluate([])
    x = log_unipotent(q)
    xs = sp.Matrix(q.rows, q.cols, lambda i, j: sp.Rational(int(x[i, j].numerator), int(x[i, j].denominator)))
    ref = sp.zeros(q.rows)
    term = sp.eye(q.rows)
    for k in range(q.rows + 1):
        ref += term / sp.factorial(k)
        term = term * xs
    got = exp_nilpotent(x)
    assert all(sp.Rational(int(got[i, j].numerator), int(got[i, j].denominator)) == ref[i, j]
               for i in range(q.rows) for j in range(q.cols))


@given(unipotent_poly(size=4))
def test_unipotent_inverse(m):
    assert (m @ unipotent_inverse(m)) == PolyMatrix.identity(4, m.nvars)


# -- sigma --------------------------------------------------------------------

def test_sigma_zero_is_translation_part(built):
    h = built("sol").presentation
    g = h.word((("t", 1), ("v1", 1)))
    s0 = sigma(h, (g,))
    assert s0.nvars == 0 and s0.evaluate([]) == g.u


def test_sigma_one_on_the_line():
    h = line_group()
    X = h.u_basis[0]
    for n in (-3, 1, 4):
        g = h.word((("g", 1 if n > 0 else -1),) * abs(n))
        path = sigma(h, (h.identity(), g))
        t = QPoly.var(0, 1)
        # straight segment from e (t_1 = 0) to g (t_1 = 1)
        expect = PolyMatrix.combination([t * n], [X], 1)
        assert log_unipotent(path) == expect


def test_sigma_vertices(built):
    h = built("heisenberg").presentation
    rng = np.random.default_rng(3)
    g = random_elems(h, rng, 3)
    s = sigma(h, g)
    assert s.evaluate([0, 0]) == g[0].u
    assert s.evaluate([1, 0]) == g[1].u
    assert s.evaluate([0, 1]) == g[2].u


def _face(poly_mat, i):
    """Slot substitution on a sigma: vertex i deleted."""
    p = poly_mat.nvars
    if i >= 1:
        return poly_mat.set_zero(i - 1)
    q = p - 1
    us = [QPoly.var(j, q) for j in range(q)]
    first = QPoly.constant(1, q)
    for u in us:
        first = first - u
    return poly_mat.substitute([first] + us)


@pytest.mark.parametrize("name", ["heisenberg", "filiform4", "sol", "kodaira_thurston"])
def test_sigma_face_property(built, name):
    h = built(name).presentation
    rng = np.random.default_rng(4)
    for p in (1, 2, 3):
        for _ in range(4):
            g = random_elems(h, rng, p + 1, 4)
            s = sigma(h, g)
            for i in range(p + 1):
                assert _face(s, i) == sigma(h, g[:i] + g[i + 1:])


@pytest.mark.parametrize("name", ["heisenberg", "filiform4", "hyperbolic_k1"])
def test_sigma_equivariance(built, name):
    h = built(name).presentation
    rng = np.random.default_rng(5)
    for p in (0, 1, 2, 3):
        for _ in range(3):
            g = random_elems(h, rng, p + 1, 4)
            (x,) = random_elems(h, rng, 1, 4)
            moved = sigma(h, tuple(h.multiply(x, gi) for gi in g))
            assert moved == h.act(x, sigma(h, g))


def test_sigma_is_affine_for_abelian(built):
    h = built("torus4").presentation
    rng = np.random.default_rng(6)
    g = random_elems(h, rng, 3)
    s = sigma(h, g)
    assert log_unipotent(s).degree <= 1


# -- Maurer-Cartan and pullback -----------------------------------------------

def test_maurer_cartan_of_identity(built):
    h = built("heisenberg").presentation
    for c in maurer_cartan(h, PolyMatrix.identity(3, 2)):
        assert c.is_zero()


def test_maurer_cartan_of_reversed_segment():
    h = line_group()
    X = h.u_basis[0]
    t = QPoly.var(0, 1)
    m = exp_nilpotent(PolyMatrix.combination([1 - t], [X], 1))
    (c,) = maurer_cartan(h, m)
    assert c == -PolyForm.dt(1, 1)


def test_maurer_cartan_heisenberg_segment_degree(built):
    h = built("heisenberg").presentation
    a, b = h.generator("a"), h.generator("b")
    s = sigma(h, (a, b))
    for c in maurer_cartan(h, s):
        for (poly,) in c.terms.values():
            assert poly.degree <= 1


def test_maurer_cartan_rejects_foreign_direction(built):
    h = built("heisenberg").presentation
    t = QPoly.var(0, 1)
    m = exp_nilpotent(PolyMatrix.combination([t], [E(3, 1, 0)], 1))
    with pytest.raises(NotInSpan):
        maurer_cartan(h, m)


def test_pullback_examples():
    h = line_group()
    xstar = (Rational(1),)
    for n in (2, -1):
        v = h.word((("g", 1 if n > 0 else -1),) * abs(n))
        w = pullback_form(h, xstar, 1, (h.identity(), v))
        assert w == PolyForm.dt(1, 1).scale(n)
    assert pullback_form(h, (Rational(0),), 1, (h.identity(), h.generator("g"))).is_zero()


def test_pullback_degree_zero_twists_by_module():
    h = heisenberg_std()
    omega = (Rational(0), Rational(0), Rational(1))
    rng = np.random.default_rng(7)
    g0, g1 = random_elems(h, rng, 2)
    form = pullback_form(h, omega, 0, (g0, g1))
    m = sigma(h, (g0, g1))
    rho = h.module_action_u(m)
    expect = [sum((rho[i, j] * omega[j] for j in range(3)), QPoly.zero(1)) for i in range(3)]
    assert form == PolyForm.function(expect, 1)


# -- theta ----------------------------------------------------------------------

def test_theta_line_examples():
    h = line_group()
    for n in (-2, 1, 5):
        g = h.word((("g", 1 if n > 0 else -1),) * abs(n))
        assert theta(h, (Rational(1),), 1, (h.identity(), g)) == (n,)


def test_theta_degree_zero():
    h = heisenberg_std()
    omega = (Rational(0), Rational(0), Rational(1))
    g = h.word((("a", 1), ("b", 1)))
    assert theta(h, omega, 0, (g,)) == h.module_action(g).apply(omega)


def test_theta_degree_mismatch(built):
    h = built("heisenberg").presentation
    with pytest.raises(DegreeMismatch):
        theta(h, basis_cochain(3, [0]), 1, (h.identity(),))


def _alt_sum(h, omega, k, elems):
    acc = [Rational(0)] * h.value_dim
    for i in range(len(elems)):
        val = theta(h, omega, k, elems[:i] + elems[i + 1:])
        acc = [a + (-1) ** i * v for a, v in zip(acc, val)]
    return tuple(acc)


@pytest.mark.parametrize("name", ["heisenberg", "filiform4", "kodaira_thurston", "sol", "sol_std", "heis_std"])
def test_theta_is_a_cochain_map(built, name):
    h = heisenberg_std() if name == "heis_std" else built(name).presentation
    cx = complex_from_presentation(h)
    rng = np.random.default_rng(8)
    for k in range(min(cx.n, 2) + 1):
        for v in cx.bases[k]:
            omega = cx.to_full(k, v)
            elems = random_elems(h, rng, k + 2, 4)
            domega = cx.d_full(k, omega)
            lhs = theta(h, domega, k + 1, elems)
            assert lhs == _alt_sum(h, omega, k, elems)


def test_closed_forms_give_cocycles(built):
    h = built("heisenberg").presentation
    cx = complex_from_presentation(h)
    rng = np.random.default_rng(9)
    x_star = basis_cochain(3, [0])
    assert not any(cx.d_full(1, x_star))
    for _ in range(5):
        elems = random_elems(h, rng, 3)
        assert _alt_sum(h, x_star, 1, elems) == (0,)
