from math import comb

import pytest
from hypothesis import given, strategies as st

from hullcoh import fixtures
from hullcoh.liecomplex import exterior_action
from hullcoh.oracle import (
    NonCommuting, NotEquivariant, cone_differentials, koszul_betti, koszul_differentials, wang_betti,
)
from hullcoh.qkernel import QMatrix

M = QMatrix.from_rows
CAT = M([[2, 1], [1, 1]])


# -- Koszul -------------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_koszul_trivial(m):
    assert koszul_betti([QMatrix.identity(1)] * m) == tuple(comb(m, k) for k in range(m + 1))


def test_koszul_scalar_two():
    assert koszul_betti([M([[2]])]) == (0, 0)


def test_koszul_hyperbolic_operator():
    # one generator acting on Q^2 by the cat map: A - I is invertible
    assert koszul_betti([CAT]) == (0, 0)
    # both generators acting by the same hyperbolic matrix
    assert koszul_betti([CAT, CAT]) == (0, 0, 0)


def test_koszul_unipotent_module():
    # Z acting on Q^2 by a Jordan block: H^0 = H^1 = 1
    assert koszul_betti([M([[1, 1], [0, 1]])]) == (1, 1)


def test_koszul_non_commuting():
    with pytest.raises(NonCommuting):
        koszul_betti([M([[1, 1], [0, 1]]), M([[1, 0], [1, 1]])])


@given(st.integers(1, 4), st.integers(1, 2))
def test_koszul_d_squared_zero(m, dv):
    ops = [QMatrix.identity(dv).scale(i + 2) - QMatrix.identity(dv) for i in range(m)]
    if dv == 2:
        ops = [o + QMatrix.unit(2, 0, 1) for o in ops]
    ops = [o for o in ops if all(o @ p == p @ o for p in ops)]
    ds = koszul_differentials(ops, dv)
    for a, b in zip(ds, ds[1:]):
        assert (b @ a).is_zero()


# -- Wang ---------------------------------------------------------------------

@pytest.mark.parametrize("m", [1, 2, 3])
def test_wang_identity_is_torus(m):
    expect = tuple(comb(m + 1, k) for k in range(m + 2))
    assert wang_betti(QMatrix.identity(m)) == expect
    assert wang_betti(QMatrix.identity(m)) == koszul_betti([QMatrix.identity(1)] * (m + 1))


def test_wang_heisenberg():
    assert wang_betti(M([[1, 1], [0, 1]])) == (1, 2, 2, 1)


def test_wang_sol():
    assert wang_betti(CAT) == (1, 1, 1, 1)


def test_wang_sol_standard_module():
    B = QMatrix.block_diag(QMatrix.identity(1), CAT)
    assert wang_betti(CAT, [QMatrix.identity(3)] * 2, B) == (1, 3, 3, 1)


def test_wang_rejects_non_equivariant_module():
    # base acts unipotently but t does not intertwine it with A
    P = M([[1, 1], [0, 1]])
    with pytest.raises(NotEquivariant):
        wang_betti(QMatrix.identity(2), [P, QMatrix.identity(2)], M([[0, 1], [1, 0]]))


@pytest.mark.parametrize("name", ["heisenberg", "sol", "hyperbolic_k1", "hyperbolic_k2", "torus4", "kodaira_thurston"])
def test_wang_poincare_duality_on_fixtures(name):
    o = fixtures.build(name).oracle
    b = wang_betti(o.A, o.base_actions, o.t_action)
    assert b == b[::-1]
    assert b[0] == 1


def test_cone_d_squared_zero():
    A = QMatrix.block_diag(QMatrix.identity(1), CAT)
    m = A.rows
    ds = koszul_differentials([QMatrix.zeros(1)] * m, 1)
    Ainv = A.inverse
    f = [exterior_action(Ainv, k) - QMatrix.identity(comb(m, k)) for k in range(m + 1)]
    cone = cone_differentials(ds, f, [comb(m, k) for k in range(m + 1)])
    for a, b in zip(cone, cone[1:]):
        if a.rows and a.cols and b.rows and b.cols:
            assert (b @ a).is_zero()
