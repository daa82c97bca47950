"""Chevalley-Eilenberg cochains of a nilpotent Lie algebra, their T-invariant part, and cohomology.

Cochains of degree k with values in a d_V-dimensional module are flat
tuples of length C(n, k) * d_V: block ``idx`` holds the V-vector
``w(X_J)`` for the idx-th k-subset J in bitmask lexicographic order.

The differential is

    (d w)(X_j0..X_jk) = sum_a (-1)^a r(X_ja) w(.. ^ja ..)
                        + sum_{a<b} (-1)^{a+b} w([X_ja, X_jb], .. ^ja .. ^jb ..)

so for trivial V a 1-cochain satisfies (d xi)(X, Y) = -xi([X, Y]).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from ._kernels import ce_action_table, ce_bracket_table, mask_positions, subset_masks, wedge_table
from .qkernel import Inconsistent, QMatrix, Rational, kernel_basis, rref, solve, span_basis


class NotClosed(ValueError):
    pass


class NotNilpotent(ValueError):
    pass


class NotLieAlgebra(ValueError):
    pass


class NotPreserved(ValueError):
    pass


def _unit(n: int, i: int) -> tuple:
    return tuple(Rational(int(i == j)) for j in range(n))


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants ``c[i][j][k]`` with [X_i, X_j] = sum_k c[i][j][k] X_k."""
    dim: int
    c: tuple

    def __post_init__(self):
        n = self.dim
        c = tuple(tuple(tuple(Rational(x) for x in cij) for cij in ci) for ci in self.c)
        object.__setattr__(self, "c", c)
        if len(c) != n or any(len(ci) != n or any(len(cij) != n for cij in ci) for ci in c):
            raise NotLieAlgebra("structure constants must form an n x n x n array")
        for i in range(n):
            if any(c[i][i]):
                raise NotLieAlgebra(f"[X_{i + 1}, X_{i + 1}] != 0")
            for j in range(i + 1, n):
                if any(a + b for a, b in zip(c[i][j], c[j][i])):
                    raise NotLieAlgebra(f"structure constants not antisymmetric at ({i + 1}, {j + 1})")
        for i, j, k in combinations(range(n), 3):
            e = [_unit(n, t) for t in (i, j, k)]
            tot = [Rational(0)] * n
            for a, b, cc in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
                v = self.bracket(e[a], self.bracket(e[b], e[cc]))
                tot = [x + y for x, y in zip(tot, v)]
            if any(tot):
                raise NotLieAlgebra(f"Jacobi identity fails on (X_{i + 1}, X_{j + 1}, X_{k + 1})")

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebra":
        z = tuple(Rational(0) for _ in range(n))
        return cls(n, tuple(tuple(z for _ in range(n)) for _ in range(n)))

    def bracket(self, a: Sequence, b: Sequence) -> tuple:
        n = self.dim
        out = [Rational(0)] * n
        for i in range(n):
            if not a[i]:
                continue
            for j in range(n):
                if not b[j] or i == j:
                    continue
                f = a[i] * b[j]
                for k, x in enumerate(self.c[i][j]):
                    if x:
                        out[k] += f * x
        return tuple(out)

    @property
    def is_abelian(self) -> bool:
        return not any(any(cij) for ci in self.c for cij in ci)

    @cached_property
    def lower_central_series(self) -> list:
        """Bases of C^1 = u, C^2 = [u, u], ... ending with the zero space."""
        n = self.dim
        unit = [_unit(n, i) for i in range(n)]
        series = [span_basis(unit, n)]
        while series[-1]:
            prev = series[-1]
            gens = [self.bracket(e, v) for e in unit for v in prev]
            nxt = span_basis([g for g in gens if any(g)], n)
            if len(nxt) == len(prev):
                raise NotNilpotent("lower central series stabilizes at a nonzero ideal")
            series.append(nxt)
        return series

    @property
    def is_nilpotent(self) -> bool:
        try:
            self.lower_central_series
        except NotNilpotent:
            return False
        return True

    @cached_property
    def graded_basis(self) -> tuple:
        """(P, P^-1, weights) with the columns of P adapted to the lower central series.

        Column j lies in C^{w_j} and the columns of weight >= w span C^w.
        Standard basis vectors are used whenever they fit, so an adapted
        basis comes back unchanged.  Columns are sorted by weight.
        """
        n = self.dim
        series = self.lower_central_series
        unit = [_unit(n, i) for i in range(n)]
        chosen: list = []
        weights: list = []
        for w in range(len(series) - 1, 0, -1):
            level = series[w - 1]
            fits = [e for e in unit if len(span_basis(level + [e], n)) == len(level)]
            for cand in fits + list(level):
                if len(span_basis(chosen + [cand], n)) > len(chosen):
                    chosen.append(cand)
                    weights.append(w)
        lead = [next(i for i, x in enumerate(v) if x) for v in chosen]
        order = sorted(range(n), key=lambda j: (weights[j], lead[j]))
        P = QMatrix.from_columns([chosen[j] for j in order], n)
        return P, P.inverse, tuple(weights[j] for j in order)

    def change_basis(self, P: QMatrix) -> "LieAlgebra":
        """Structure constants in the basis given by the columns of P."""
        n = self.dim
        Pi = P.inverse
        cols = [P.col(j) for j in range(n)]
        return LieAlgebra(n, tuple(tuple(Pi.apply(self.bracket(cols[i], cols[j])) for j in range(n))
                                   for i in range(n)))


def lie_from_matrices(u_basis: Sequence[QMatrix]) -> LieAlgebra:
    """Structure constants of span(u_basis) under the matrix commutator."""
    n = len(u_basis)
    if n == 0:
        return LieAlgebra(0, ())
    flat = QMatrix.from_columns([x.flat() for x in u_basis])
    if flat.rank < n:
        raise NotClosed("u_basis is linearly dependent")
    c = []
    for i in range(n):
        row = []
        for j in range(n):
            try:
                row.append(solve(flat, u_basis[i].commutator(u_basis[j]).flat()))
            except Inconsistent:
                raise NotClosed(f"[X_{i + 1}, X_{j + 1}] is not in span(u_basis)") from None
        c.append(tuple(row))
    L = LieAlgebra(n, tuple(c))
    L.lower_central_series
    return L


# -- the complex -------------------------------------------------------------

def ce_differential(L: LieAlgebra, r_basis: Sequence[QMatrix] | None, k: int) -> QMatrix:
    """Matrix of d: (wedge^k u* (x) V) -> (wedge^{k+1} u* (x) V) in the bitmask basis.

    ``r_basis`` lists r(X_1)..r(X_n); None means the trivial 1-dimensional module.
    """
    n = L.dim
    if not 0 <= k <= n:
        raise ValueError(f"degree {k} outside 0..{n}")
    dv = r_basis[0].rows if r_basis else 1
    src, dst = comb(n, k) * dv, comb(n, k + 1) * dv
    if dst == 0:
        return QMatrix.zeros(0, src)
    D = [[Rational(0)] * src for _ in range(dst)]
    if r_basis and any(not r.is_zero() for r in r_basis):
        row, col, gen, sign = ce_action_table(n, k)
        for ro, co, g, s in zip(row.tolist(), col.tolist(), gen.tolist(), sign.tolist()):
            r = r_basis[g]
            for a in range(dv):
                for b in range(dv):
                    x = r[a, b]
                    if x:
                        D[ro * dv + a][co * dv + b] += s * x
    row, gi, gj, gm, col, sign = ce_bracket_table(n, k)
    c = L.c
    for ro, i, j, m, co, s in zip(row.tolist(), gi.tolist(), gj.tolist(), gm.tolist(), col.tolist(), sign.tolist()):
        x = c[i][j][m]
        if x:
            for v in range(dv):
                D[ro * dv + v][co * dv + v] += s * x
    return QMatrix(dst, src, [x for r in D for x in r])


def exterior_action(A: QMatrix, k: int) -> QMatrix:
    """Matrix of w -> w(A x_1, ..., A x_k) on wedge^k of the dual, bitmask basis.

    Entry (J, I) is the minor det A[I, J].
    """
    n = A.rows
    masks = [int(m) for m in subset_masks(n, k)]
    idx = [[i for i in range(n) if m >> i & 1] for m in masks]
    out = []
    for J in idx:
        for I in idx:
            if k == 0:
                out.append(Rational(1))
            else:
                out.append(QMatrix.from_rows([[A[i, j] for j in J] for i in I]).det)
    return QMatrix(len(masks), len(masks), out)


def cochain_action(ad: QMatrix, R: QMatrix, k: int) -> QMatrix:
    """(S . w)(x_1..x_k) = R w(Ad(S)^-1 x_1, ..., Ad(S)^-1 x_k) on wedge^k u* (x) V."""
    E = exterior_action(ad.inverse, k)
    dv = R.rows
    m = E.rows
    out = [Rational(0)] * (m * dv) ** 2
    width = m * dv
    for J in range(m):
        for I in range(m):
            e = E[J, I]
            if not e:
                continue
            for a in range(dv):
                for b in range(dv):
                    x = R[a, b]
                    if x:
                        out[(J * dv + a) * width + I * dv + b] = e * x
    return QMatrix(width, width, out)


class _Span:
    """Coordinates with respect to a fixed list of independent vectors."""

    def __init__(self, basis: Sequence[Sequence], dim: int):
        self.basis = [tuple(v) for v in basis]
        self.dim = dim
        if self.basis:
            _, self.piv = rref(QMatrix.from_rows(self.basis))
            sub = QMatrix.from_rows([[v[p] for v in self.basis] for p in self.piv])
            self.inv = sub.inverse
        else:
            self.piv, self.inv = [], None

    def coords(self, v: Sequence) -> tuple:
        if not self.basis:
            if any(v):
                raise Inconsistent("vector outside the zero subspace")
            return ()
        c = self.inv.apply([v[p] for p in self.piv])
        recon = [Rational(0)] * self.dim
        for ci, b in zip(c, self.basis):
            if ci:
                for t, x in enumerate(b):
                    if x:
                        recon[t] += ci * x
        if tuple(recon) != tuple(v):
            raise Inconsistent("vector outside the span")
        return c

    def expand(self, c: Sequence) -> tuple:
        out = [Rational(0)] * self.dim
        for ci, b in zip(c, self.basis):
            if ci:
                for t, x in enumerate(b):
                    if x:
                        out[t] += ci * x
        return tuple(out)


@dataclass
class CEComplex:
    """Invariant cochains (wedge^k u* (x) V)^T with the restricted differentials.

    ``bases[k]`` lists invariant cochains in full bitmask coordinates;
    ``diffs[k]`` is d_k in those bases (rows: degree k+1, columns: degree k).
    """
    lie: LieAlgebra
    value_dim: int
    bases: list
    diffs: list
    full_diffs: list = field(repr=False)

    @property
    def n(self) -> int:
        return self.lie.dim

    @property
    def dims(self) -> tuple:
        return tuple(len(b) for b in self.bases)

    @cached_property
    def spans(self) -> list:
        return [_Span(b, comb(self.n, k) * self.value_dim) for k, b in enumerate(self.bases)]

    def to_invariant(self, k: int, w: Sequence) -> tuple:
        """Coordinates of a full cochain in the invariant basis; NotPreserved if not invariant."""
        try:
            return self.spans[k].coords(tuple(Rational(x) for x in w))
        except Inconsistent:
            raise NotPreserved(f"degree-{k} cochain is not T-invariant") from None

    def to_full(self, k: int, c: Sequence) -> tuple:
        return self.spans[k].expand(c)

    def d_full(self, k: int, w: Sequence) -> tuple:
        if k >= self.n:
            return ()
        return self.full_diffs[k].apply(w)


def invariant_subcomplex(L: LieAlgebra, r_basis: Sequence[QMatrix] | None = None,
                         t_action: Sequence[tuple] = ()) -> CEComplex:
    """Joint fixed spaces of the generators and the differential restricted to them.

    ``t_action`` lists pairs (Ad(S_j) on u in coordinates, R_j on V).
    """
    n = L.dim
    dv = r_basis[0].rows if r_basis else 1
    full_diffs = [ce_differential(L, r_basis, k) for k in range(n + 1)]
    bases = []
    for k in range(n + 1):
        size = comb(n, k) * dv
        if not t_action:
            bases.append([tuple(Rational(int(i == j)) for j in range(size)) for i in range(size)])
            continue
        rows = []
        for ad, R in t_action:
            M = cochain_action(ad, R, k) - QMatrix.identity(size)
            rows.extend(M.tolist())
        bases.append(kernel_basis(QMatrix.from_rows(rows)) if size else [])
    cx = CEComplex(L, dv, bases, [], full_diffs)
    diffs = []
    for k in range(n + 1):
        if k == n:
            diffs.append(QMatrix.zeros(0, len(bases[k])))
            continue
        cols = []
        for v in bases[k]:
            img = full_diffs[k].apply(v)
            try:
                cols.append(cx.spans[k + 1].coords(img))
            except Inconsistent:
                raise NotPreserved(f"d maps an invariant {k}-cochain outside the invariant subspace") from None
        diffs.append(QMatrix.from_columns(cols, len(bases[k + 1])) if cols
                     else QMatrix.zeros(len(bases[k + 1]), 0))
    cx.diffs = diffs
    return cx


def complex_from_presentation(h) -> CEComplex:
    """The invariant complex of a validated HullPresentation."""
    L = h.lie
    mod = h.module
    t_action = [(h.t_action_on_u(s), R) for s, R in zip(h.t_generators, mod.R_gens)]
    return invariant_subcomplex(L, list(mod.r_basis), t_action)


# -- cohomology ----------------------------------------------------------------

@dataclass
class CohomologyReport:
    betti: tuple
    dims: tuple
    representatives: list          # per degree, cocycles in full bitmask coordinates
    rep_coords: list               # the same cocycles in invariant coordinates
    image_bases: list              # per degree, basis of im d_{k-1} in invariant coordinates
    complex: CEComplex = field(repr=False)

    @property
    def euler(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    @property
    def euler_chains(self) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.dims))

    def classify(self, k: int, z: Sequence) -> tuple:
        """Class of an invariant cocycle (invariant coordinates) in the representative basis."""
        reps, img = self.rep_coords[k], self.image_bases[k]
        cols = list(reps) + list(img)
        if not cols:
            if any(z):
                raise ValueError("nonzero vector in a zero cochain space")
            return ()
        x = solve(QMatrix.from_columns(cols, len(z)), z)
        return tuple(x[:len(reps)])

    def classify_full(self, k: int, w: Sequence) -> tuple:
        z = self.complex.to_invariant(k, w)
        if any(self.complex.diffs[k].apply(z)) if k < self.complex.n else False:
            raise ValueError(f"degree-{k} cochain is not closed")
        return self.classify(k, z)


def cohomology(cx: CEComplex) -> CohomologyReport:
    n = cx.n
    dims = cx.dims
    betti, reps, rep_coords, images = [], [], [], []
    for k in range(n + 1):
        ker = kernel_basis(cx.diffs[k]) if dims[k] else []
        if k > 0 and dims[k - 1] and dims[k]:
            prev = cx.diffs[k - 1]
            img = span_basis([prev.col(j) for j in range(prev.cols)], dims[k])
        else:
            img = []
        basis = list(img)
        chosen = []
        for v in ker:
            grown = span_basis(basis + [v], dims[k])
            if len(grown) > len(basis):
                basis = grown
                chosen.append(v)
        betti.append(len(chosen))
        rep_coords.append(chosen)
        reps.append([cx.to_full(k, v) for v in chosen])
        images.append(img)
    return CohomologyReport(tuple(betti), dims, reps, rep_coords, images, cx)


# -- products -----------------------------------------------------------------

def cochain_wedge(n: int, a: Sequence, ka: int, b: Sequence, kb: int) -> tuple:
    """Wedge of two scalar cochains in the bitmask basis."""
    out = [Rational(0)] * comb(n, ka + kb) if ka + kb <= n else []
    if not out:
        return tuple(out)
    ia, ib, io, sg = wedge_table(n, ka, kb)
    for x, y, o, s in zip(ia.tolist(), ib.tolist(), io.tolist(), sg.tolist()):
        if a[x] and b[y]:
            out[o] += s * a[x] * b[y]
    return tuple(out)


def basis_cochain(n: int, indices: Sequence[int], coeff=1) -> tuple:
    """coeff * xi_{i1} ^ ... ^ xi_{ik} (0-based, any order) as a flat cochain."""
    k = len(indices)
    if len(set(indices)) < k:
        return tuple(Rational(0) for _ in range(comb(n, k)))
    sign = 1
    idx = list(indices)
    for i in range(k):
        for j in range(i + 1, k):
            if idx[i] > idx[j]:
                sign = -sign
    mask = sum(1 << i for i in idx)
    out = [Rational(0)] * comb(n, k)
    out[int(mask_positions(n, k)[mask])] = Rational(coeff) * sign
    return tuple(out)


def format_cochain(n: int, k: int, w: Sequence, names: Sequence[str] | None = None,
                   value_dim: int = 1) -> str:
    """Readable form such as '-x^y + 2 y^z' (dual basis written with the u_basis names)."""
    names = names or [f"x{i + 1}" for i in range(n)]
    masks = subset_masks(n, k)
    parts = []
    for idx, m in enumerate(masks.tolist()):
        for v in range(value_dim):
            c = Rational(w[idx * value_dim + v])
            if not c:
                continue
            mono = "^".join(names[i] for i in range(n) if m >> i & 1) or "1"
            if value_dim > 1:
                mono += f"(x)v{v + 1}"
            mag = abs(c)
            coef = "" if mag == 1 and mono != "1" else (f"{mag} " if mono != "1" else f"{mag}")
            if mono == "1":
                body = coef
            else:
                body = f"{coef}{mono}"
            parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        s += f" {sgn} {body}"
    return s


# -- minimal model ------------------------------------------------------------

@dataclass
class MinimalModelReport:
    generators: list          # names, in LCS-adapted order
    weights: list
    generator_basis: list     # each generator's dual vector as a combination of the input basis
    differential: dict        # name -> cochain string
    differential_terms: dict  # name -> list of (coefficient, i, j) with i < j in generator order
    triangular: bool
    decomposable: bool
    notes: list

    @property
    def minimal(self) -> bool:
        return self.triangular and self.decomposable


def _cochain_of(tlist, n: int) -> tuple:
    w = [Rational(0)] * comb(n, 2)
    for c, i, j in tlist:
        w[int(mask_positions(n, 2)[(1 << i) | (1 << j)])] += c
    return tuple(w)


def minimal_model_report(L: LieAlgebra, names: Sequence[str] | None = None,
                         notes: Sequence[str] = ()) -> MinimalModelReport:
    """The exterior algebra on u* with its quadratic differential, in an LCS-adapted order."""
    n = L.dim
    names = list(names or [f"x{i + 1}" for i in range(n)])
    P, Pinv, weights = L.graded_basis
    M = L.change_basis(P)
    gen_names = []
    gen_basis = []
    for j in range(n):
        col = P.col(j)
        nz = [i for i, x in enumerate(col) if x]
        if len(nz) == 1 and col[nz[0]] == 1:
            gen_names.append(names[nz[0]])
        else:
            gen_names.append("(" + format_cochain(n, 1, col, names) + ")")
        # generator j is the j-th row of P^-1 as a functional on the input basis
        gen_basis.append(Pinv.row(j))
    diff, terms = {}, {}
    triangular = True
    for k in range(n):
        tlist = []
        for i in range(n):
            for j in range(i + 1, n):
                c = M.c[i][j][k]
                if c:
                    tlist.append((-c, i, j))
                    if i >= k or j >= k or weights[i] >= weights[k] or weights[j] >= weights[k]:
                        triangular = False
        diff[gen_names[k]] = format_cochain(n, 2, _cochain_of(tlist, n), gen_names)
        terms[gen_names[k]] = tlist
    # the quadratic formula must agree with the CE differential on each generator
    d1 = ce_differential(M, None, 1)
    decomposable = all(d1.col(k) == _cochain_of(terms[gen_names[k]], n) for k in range(n))
    return MinimalModelReport(gen_names, list(weights), gen_basis, diff, terms, triangular, decomposable,
                              list(notes))
