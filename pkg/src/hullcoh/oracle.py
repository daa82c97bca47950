"""Group cohomology of Z^m and of Z x|_A Z^m computed without any Lie theory.

H*(Z^m, V) is the cohomology of the Koszul complex of the commuting
operators P_i - 1.  For Z x|_A Z^m the generator t acts on the Koszul
complex and the answer is the cohomology of the mapping cone of T* - 1.

To make T* a chain map, V is first cut down to the joint generalized
1-eigenspace V_1 of the P_i (the other Fitting summand is acyclic: some
P_i - 1 is invertible on it).  On V_1 the operators N_i = log P_i are
nilpotent and depend linearly on the lattice vector, the Koszul complex of
the N_i has the same cohomology as that of the P_i - 1, and
T*(f)(x_1..x_k) = Q f(A^-1 x_1, ..., A^-1 x_k) commutes with d.
"""
from __future__ import annotations


from math import comb
from typing import Sequence

from ._kernels import insert_sign, mask_positions, subset_masks
from .hull import log_unipotent
from .liecomplex import exterior_action
from .qkernel import QMatrix, Rational, kernel_basis, solve, span_basis


class NonCommuting(ValueError):
    pass


class NotEquivariant(ValueError):
    pass


def koszul_differentials(ops: Sequence[QMatrix], dim: int | None = None) -> list:
    """d_k: V (x) wedge^k -> V (x) wedge^{k+1}, d(v (x) xi) = sum_i ops[i] v (x) e_i* ^ xi.

    Flat layout matches the cochain convention: index = mask_index * d_V + v.
    """
    m = len(ops)
    dv = ops[0].rows if ops else (dim or 1)
    out = []
    for k in range(m + 1):
        src = subset_masks(m, k)
        pos = mask_positions(m, k + 1)
        rows, cols = comb(m, k + 1) * dv, len(src) * dv
        D = [[Rational(0)] * cols for _ in range(rows)]
        for ci, mask in enumerate(src.tolist()):
            for i in range(m):
                if mask >> i & 1:
                    continue
                ro = int(pos[mask | (1 << i)])
                s = insert_sign(mask, i)
                op = ops[i]
                for a in range(dv):
                    for b in range(dv):
                        x = op[a, b]
                        if x:
                            D[ro * dv + a][ci * dv + b] += s * x
        out.append(QMatrix(rows, cols, [x for r in D for x in r]))
    return out


def _betti_from(diffs: Sequence[QMatrix], dims: Sequence[int]) -> tuple:
    ranks = [d.rank if d.rows and d.cols else 0 for d in diffs]
    return tuple(dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(len(dims)))


def _check_commuting(ops: Sequence[QMatrix]) -> None:
    for i in range(len(ops)):
        for j in range(i + 1, len(ops)):
            if ops[i] @ ops[j] != ops[j] @ ops[i]:
                raise NonCommuting(f"operators {i + 1} and {j + 1} do not commute")


def koszul_betti(actions: Sequence[QMatrix], dim: int | None = None) -> tuple:
    """dim H^k(Z^m, V) for k = 0..m, V given by the images of the standard generators."""
    for i, p in enumerate(actions):
        if p.rows != p.cols or p.det == 0:
            raise ValueError(f"action of generator {i + 1} is not invertible")
    _check_commuting(actions)
    dv = actions[0].rows if actions else (dim or 1)
    m = len(actions)
    phis = [p - QMatrix.identity(dv) for p in actions]
    diffs = koszul_differentials(phis, dv)
    return _betti_from(diffs, [comb(m, k) * dv for k in range(m + 1)])


def unipotent_part(actions: Sequence[QMatrix]) -> list:
    """Basis of the joint generalized 1-eigenspace of commuting operators."""
    if not actions:
        raise ValueError("need at least one operator")
    dv = actions[0].rows
    rows = []
    for p in actions:
        rows.extend(((p - QMatrix.identity(dv)) ** dv).tolist())
    return kernel_basis(QMatrix.from_rows(rows))


def _restrict(op: QMatrix, basis: list) -> QMatrix:
    """Matrix of op on an invariant subspace, in the given basis."""
    dv = op.rows
    if not basis:
        return QMatrix.zeros(0)
    Bm = QMatrix.from_columns(basis, dv)
    cols = [solve(Bm, op.apply(v)) for v in basis]
    return QMatrix.from_columns(cols, len(basis))


def cone_differentials(diffs: Sequence[QMatrix], f: Sequence[QMatrix], dims: Sequence[int]) -> list:
    """D(a, b) = (d a, f a - d b) on C^k (+) C^{k-1}."""
    top = len(dims) - 1
    out = []
    for k in range(top + 2):
        a_src = dims[k] if k <= top else 0
        b_src = dims[k - 1] if 1 <= k <= top + 1 else 0
        a_dst = dims[k + 1] if k + 1 <= top else 0
        b_dst = dims[k] if k <= top else 0
        rows, cols = a_dst + b_dst, a_src + b_src
        M = [[Rational(0)] * cols for _ in range(rows)]
        if a_dst and a_src:
            d = diffs[k]
            for i in range(a_dst):
                for j in range(a_src):
                    M[i][j] = d[i, j]
        if b_dst and a_src:
            for i in range(b_dst):
                for j in range(a_src):
                    M[a_dst + i][j] = f[k][i, j]
        if b_dst and b_src:
            d = diffs[k - 1]
            for i in range(b_dst):
                for j in range(b_src):
                    M[a_dst + i][a_src + j] = -d[i, j]
        out.append(QMatrix(rows, cols, [x for r in M for x in r]))
    return out


def wang_betti(A: QMatrix, base_actions: Sequence[QMatrix] | None = None,
               t_action: QMatrix | None = None) -> tuple:
    """dim H^k(Z x|_A Z^m, V) for k = 0..m+1.

    ``base_actions`` are the images of the standard generators of Z^m in
    GL(V), ``t_action`` the image of the Z generator (conjugating e_i to A e_i).
    Defaults give the trivial 1-dimensional module.
    """
    m = A.rows
    if A.det == 0:
        raise ValueError("A must be invertible")
    if base_actions is None:
        base_actions = [QMatrix.identity(t_action.rows if t_action is not None else 1)] * m
    base_actions = list(base_actions)
    if len(base_actions) != m:
        raise ValueError(f"need {m} base actions, got {len(base_actions)}")
    dv = base_actions[0].rows if base_actions else (t_action.rows if t_action is not None else 1)
    Q = t_action if t_action is not None else QMatrix.identity(dv)
    _check_commuting(base_actions)
    if m == 0:
        V1 = [tuple(Rational(int(i == j)) for j in range(dv)) for i in range(dv)]
    else:
        V1 = unipotent_part(base_actions)
    d1 = len(V1)
    # Q must preserve V_1
    if V1 and len(span_basis(V1 + [Q.apply(v) for v in V1], dv)) != d1:
        raise NotEquivariant("t does not preserve the unipotent part of V")
    if d1 == 0:
        return (0,) * (m + 2)
    Nops = [_restrict(log_unipotent(p), V1) for p in base_actions]
    Q1 = _restrict(Q, V1)
    dims = [comb(m, k) * d1 for k in range(m + 1)]
    diffs = koszul_differentials(Nops, d1)
    Ainv = A.inverse
    f = []
    for k in range(m + 1):
        E = exterior_action(Ainv, k)
        T = _kron_blocks(E, Q1)
        if k < m and diffs[k] @ T != _tstar_next(Ainv, Q1, k + 1) @ diffs[k]:
            raise NotEquivariant(f"T* does not commute with d in degree {k}: Q N(x) Q^-1 != N(A x)")
        f.append(T - QMatrix.identity(dims[k]))
    cone = cone_differentials(diffs, f, dims)
    cdims = [(dims[k] if k <= m else 0) + (dims[k - 1] if k >= 1 else 0) for k in range(m + 2)]
    return _betti_from(cone, cdims)


def _tstar_next(Ainv, Q1, k):
    return _kron_blocks(exterior_action(Ainv, k), Q1)


def _kron_blocks(E: QMatrix, Q: QMatrix) -> QMatrix:
    """Block matrix with (J, I) block E[J, I] * Q (layout mask-major, V-minor)."""
    m, dv = E.rows, Q.rows
    w = m * dv
    out = [Rational(0)] * (w * w)
    for J in range(m):
        for I in range(m):
            e = E[J, I]
            if not e:
                continue
            for a in range(dv):
                for b in range(dv):
                    x = Q[a, b]
                    if x:
                        out[(J * dv + a) * w + I * dv + b] = e * x
    return QMatrix(w, w, out)
