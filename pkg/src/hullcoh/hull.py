"""The split group G = T x| U in a faithful matrix model, and the maps sigma, psi-pullback, theta.

A group element g is stored as its pair (s, u) with ambient matrix
``u @ s``; it acts on U by ``alpha(g) x = u (s x s^-1)``, so alpha is a
homomorphism and alpha(g) e = u.

The polynomial simplex sigma(g_0..g_p)(t_1..t_p) is built by coning off
vertex g_0.  The cone is graded along the lower central series of u: in a
basis adapted to C^1 > C^2 > ..., the weight-w coordinates of log(face) are
homogenized to degree w in (t_1..t_p).  This keeps sigma polynomial on the
simplex (not just on the cube) and exact on every face; for abelian u it is
the affine simplex spanned by the vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from math import factorial
from typing import Sequence

from ._kernels import subset_masks
from .liecomplex import LieAlgebra, NotClosed, NotLieAlgebra, NotNilpotent, lie_from_matrices
from .polyform import DegreeMismatch, PolyForm, wedge
from .qkernel import QMatrix, QPoly, Rational, rref


class InvalidPresentation(ValueError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class NotUnipotent(ValueError):
    pass


class NotInU(ValueError):
    pass


class NotInSpan(ValueError):
    pass


# -- polynomial matrices ---------------------------------------------------

class PolyMatrix:
    """Dense matrix of QPoly entries in a common ring of ``nvars`` variables."""

    __slots__ = ("rows", "cols", "nvars", "_data")

    def __init__(self, rows: int, cols: int, nvars: int, data: Sequence[QPoly]):
        data = tuple(data)
        if len(data) != rows * cols:
            raise ValueError("wrong number of entries")
        self.rows, self.cols, self.nvars, self._data = rows, cols, nvars, data

    @classmethod
    def constant(cls, m: QMatrix, nvars: int) -> "PolyMatrix":
        return cls(m.rows, m.cols, nvars, [QPoly.constant(x, nvars) for x in m.flat()])

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        return cls.constant(QMatrix.identity(n), nvars)

    @classmethod
    def zeros(cls, rows: int, cols: int, nvars: int) -> "PolyMatrix":
        z = QPoly.zero(nvars)
        return cls(rows, cols, nvars, [z] * (rows * cols))

    @classmethod
    def combination(cls, coeffs: Sequence[QPoly], mats: Sequence[QMatrix], nvars: int) -> "PolyMatrix":
        """sum_i coeffs[i] * mats[i]."""
        r, c = mats[0].shape
        out = [QPoly.zero(nvars) for _ in range(r * c)]
        for p, m in zip(coeffs, mats):
            if p.is_zero():
                continue
            for idx, x in enumerate(m.flat()):
                if x:
                    out[idx] = out[idx] + p * x
        return cls(r, c, nvars, out)

    @property
    def shape(self):
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i * self.cols + j]

    def flat(self):
        return self._data

    def __add__(self, other):
        other = _as_poly(other, self.nvars)
        return PolyMatrix(self.rows, self.cols, self.nvars, [a + b for a, b in zip(self._data, other._data)])

    def __sub__(self, other):
        other = _as_poly(other, self.nvars)
        return PolyMatrix(self.rows, self.cols, self.nvars, [a - b for a, b in zip(self._data, other._data)])

    def __neg__(self):
        return PolyMatrix(self.rows, self.cols, self.nvars, [-a for a in self._data])

    def scale(self, c) -> "PolyMatrix":
        c = Rational(c)
        return PolyMatrix(self.rows, self.cols, self.nvars, [a * c for a in self._data])

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            out = []
            for i in range(self.rows):
                row = self._data[i * self.cols:(i + 1) * self.cols]
                for j in range(other.cols):
                    acc = QPoly.zero(self.nvars)
                    for k in range(self.cols):
                        b = other[k, j]
                        if b and row[k]:
                            acc = acc + row[k] * b
                    out.append(acc)
            return PolyMatrix(self.rows, other.cols, self.nvars, out)
        if isinstance(other, PolyMatrix):
            if self.cols != other.rows or self.nvars != other.nvars:
                raise ValueError("shape mismatch")
            out = []
            for i in range(self.rows):
                row = self._data[i * self.cols:(i + 1) * self.cols]
                nz = [(k, a) for k, a in enumerate(row) if a]
                for j in range(other.cols):
                    acc = QPoly.zero(self.nvars)
                    for k, a in nz:
                        b = other._data[k * other.cols + j]
                        if b:
                            acc = acc + a * b
                    out.append(acc)
            return PolyMatrix(self.rows, other.cols, self.nvars, out)
        return NotImplemented

    def __rmatmul__(self, other):
        if isinstance(other, QMatrix):
            return PolyMatrix.constant(other, self.nvars) @ self
        return NotImplemented

    def diff(self, i: int) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, self.nvars, [a.diff(i) for a in self._data])

    def set_zero(self, i: int) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, self.nvars - 1, [a.set_zero(i) for a in self._data])

    def substitute(self, values: Sequence[QPoly]) -> "PolyMatrix":
        nv = values[0].nvars if values else 0
        return PolyMatrix(self.rows, self.cols, nv, [a.substitute(values) for a in self._data])

    def evaluate(self, point) -> QMatrix:
        return QMatrix(self.rows, self.cols, [a.evaluate(point) for a in self._data])

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self._data)

    @property
    def degree(self) -> int:
        return max((a.degree for a in self._data), default=-1)

    def __eq__(self, other) -> bool:
        if isinstance(other, QMatrix):
            other = PolyMatrix.constant(other, self.nvars)
        return (isinstance(other, PolyMatrix) and self.shape == other.shape
                and self.nvars == other.nvars and self._data == other._data)

    def __hash__(self):
        return hash((self.rows, self.cols, self.nvars, self._data))

    def __repr__(self) -> str:
        return "PolyMatrix([" + "; ".join(
            ", ".join(repr(self[i, j]) for j in range(self.cols)) for i in range(self.rows)) + "])"


def _as_poly(m, nvars):
    if isinstance(m, QMatrix):
        return PolyMatrix.constant(m, nvars)
    return m


def _identity_like(m):
    if isinstance(m, PolyMatrix):
        return PolyMatrix.identity(m.rows, m.nvars)
    return QMatrix.identity(m.rows)


def _nilpotent(x) -> bool:
    n = x.rows
    p = x
    for _ in range(n - 1):
        p = p @ x
        if p.is_zero():
            return True
    return p.is_zero() if n > 1 else x.is_zero()


def exp_nilpotent(x):
    """sum_k x^k / k! for a nilpotent (polynomial) matrix; exact."""
    if x.rows != x.cols:
        raise NotUnipotent("exp needs a square matrix")
    n = x.rows
    if not _nilpotent(x):
        raise NotUnipotent("matrix is not nilpotent")
    out = _identity_like(x)
    term = out
    for k in range(1, n):
        term = term @ x
        if term.is_zero():
            break
        out = out + term.scale(Rational(1, factorial(k)))
    return out


def log_unipotent(m):
    """sum_{k>=1} (-1)^{k+1} (m - I)^k / k for a unipotent (polynomial) matrix; exact."""
    if m.rows != m.cols:
        raise NotUnipotent("log needs a square matrix")
    n = m.rows
    x = m - _identity_like(m)
    if not _nilpotent(x):
        raise NotUnipotent("matrix is not unipotent")
    out = x.scale(0)
    term = None
    for k in range(1, n):
        term = x if term is None else term @ x
        if term.is_zero():
            break
        out = out + term.scale(Rational((-1) ** (k + 1), k))
    return out


def unipotent_inverse(m):
    """Inverse of a unipotent matrix via the finite series sum (I - m)^k."""
    n = m.rows
    ident = _identity_like(m)
    x = ident - m
    out = ident
    term = ident
    for _ in range(1, n):
        term = term @ x
        if term.is_zero():
            break
        out = out + term
    return out


# -- group elements and modules ------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    """g = u s with s in T and u in U.

    ``s_module`` is the image of s in GL(V) when a module is attached.
    """
    s: QMatrix
    u: QMatrix
    s_module: QMatrix | None = None
    s_inv: QMatrix | None = field(default=None, compare=False, repr=False)

    @property
    def ambient(self) -> QMatrix:
        return self.u @ self.s

    @property
    def s_inverse(self) -> QMatrix:
        return self.s_inv if self.s_inv is not None else self.s.inverse


@dataclass(frozen=True)
class RationalModule:
    dim: int
    R_gens: tuple
    r_basis: tuple

    @classmethod
    def trivial(cls, n_u: int, n_t: int) -> "RationalModule":
        one = QMatrix.identity(1)
        zero = QMatrix.zeros(1)
        return cls(1, (one,) * n_t, (zero,) * n_u)

    @cached_property
    def is_nilpotent_trivial(self) -> bool:
        return all(r.is_zero() for r in self.r_basis)


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)


@dataclass(eq=False)
class HullPresentation:
    ambient_dim: int
    u_basis: tuple
    t_generators: tuple = ()
    gamma_generators: tuple = ()          # tuple of (name, GroupElement)
    declared_rank: int | None = None
    module: RationalModule | None = None
    u_names: tuple | None = None
    name: str = ""

    def __post_init__(self):
        self.u_basis = tuple(self.u_basis)
        self.t_generators = tuple(self.t_generators)
        self.gamma_generators = tuple(self.gamma_generators)
        if self.module is None:
            self.module = RationalModule.trivial(len(self.u_basis), len(self.t_generators))
        if self.u_names is None:
            self.u_names = tuple(f"x{i + 1}" for i in range(len(self.u_basis)))
        self._sigma_cache: dict = {}

    @property
    def n(self) -> int:
        return len(self.u_basis)

    @property
    def N(self) -> int:
        return self.ambient_dim

    @property
    def value_dim(self) -> int:
        return self.module.dim

    def identity(self) -> GroupElement:
        ident = QMatrix.identity(self.N)
        return GroupElement(ident, ident, QMatrix.identity(self.value_dim))

    def generator(self, name: str) -> GroupElement:
        for nm, g in self.gamma_generators:
            if nm == name:
                return g
        raise KeyError(name)

    # -- coordinates on u
    @cached_property
    def _coord_data(self):
        n, N = self.n, self.N
        if n == 0:
            return [], QMatrix.zeros(0)
        rows = [[self.u_basis[i].flat()[pos] for pos in range(N * N)] for i in range(n)]
        _, piv = rref(QMatrix.from_rows(rows))
        if len(piv) < n:
            raise InvalidPresentation("u_basis is linearly dependent")
        sub = QMatrix.from_rows([[rows[i][pos] for i in range(n)] for pos in piv])
        return piv, sub.inverse

    def coords(self, m: QMatrix) -> tuple:
        """Coordinates of m in u_basis; raises NotInSpan."""
        piv, inv = self._coord_data
        flat = m.flat()
        c = inv.apply([flat[p] for p in piv])
        recon = QMatrix.zeros(self.N)
        for ci, x in zip(c, self.u_basis):
            if ci:
                recon = recon + x.scale(ci)
        if recon != m:
            raise NotInSpan("matrix is not in span(u_basis)")
        return c

    def poly_coords(self, m: PolyMatrix, check: bool = True) -> list:
        piv, inv = self._coord_data
        flat = m.flat()
        picked = [flat[p] for p in piv]
        out = []
        for i in range(self.n):
            acc = QPoly.zero(m.nvars)
            for j, pj in enumerate(picked):
                a = inv[i, j]
                if a and pj:
                    acc = acc + pj * a
            out.append(acc)
        if check and PolyMatrix.combination(out, self.u_basis, m.nvars) != m:
            raise NotInSpan("polynomial matrix leaves span(u_basis)")
        return out

    def to_matrix(self, c: Sequence) -> QMatrix:
        out = QMatrix.zeros(self.N)
        for ci, x in zip(c, self.u_basis):
            if ci:
                out = out + x.scale(ci)
        return out

    @cached_property
    def lie(self) -> LieAlgebra:
        """Structure constants of span(u_basis); raises InvalidPresentation."""
        try:
            return lie_from_matrices(self.u_basis)
        except (NotClosed, NotNilpotent, NotLieAlgebra) as e:
            raise InvalidPresentation(str(e)) from None

    @property
    def structure_constants(self) -> tuple:
        return self.lie.c

    # -- group law
    def multiply(self, a: GroupElement, b: GroupElement, check: bool = True) -> GroupElement:
        """(s_a s_b, u_a (s_a u_b s_a^-1)); ``check`` verifies the new u is unipotent."""
        if a.s.is_identity():
            s, si, u = b.s, b.s_inverse, a.u @ b.u
        else:
            s, si = a.s @ b.s, b.s_inverse @ a.s_inverse
            u = a.u @ (a.s @ b.u @ a.s_inverse)
        if check and not _nilpotent(u - QMatrix.identity(self.N)):
            raise NotInU("product has non-unipotent translation part")
        sm = a.s_module @ b.s_module if a.s_module is not None and b.s_module is not None else None
        return GroupElement(s, u, sm, si)

    def inverse(self, g: GroupElement) -> GroupElement:
        si = g.s_inverse
        ui = unipotent_inverse(g.u)
        u = ui if g.s.is_identity() else si @ ui @ g.s
        sm = g.s_module.inverse if g.s_module is not None else None
        return GroupElement(si, u, sm, g.s)

    def word(self, letters: Sequence[tuple[str, int]]) -> GroupElement:
        """Product of generators; letters are (name, +1 or -1)."""
        g = self.identity()
        for name, e in letters:
            x = self.generator(name)
            g = self.multiply(g, x if e > 0 else self.inverse(x), check=False)
        return g

    def act(self, g: GroupElement, m):
        """alpha(g) applied to an element (or polynomial family) of U."""
        if g.s.is_identity():
            return g.u @ m
        return g.u @ (g.s @ m @ g.s_inverse)

    def module_action_u(self, m):
        """rho_V on U: exp(r(log m)), for a matrix or polynomial matrix."""
        mod = self.module
        if mod.is_nilpotent_trivial:
            return _identity_like_dim(m, mod.dim)
        y = log_unipotent(m)
        if isinstance(y, PolyMatrix):
            c = self.poly_coords(y)
            r = PolyMatrix.combination(c, mod.r_basis, y.nvars)
        else:
            c = self.coords(y)
            r = QMatrix.zeros(mod.dim)
            for ci, x in zip(c, mod.r_basis):
                if ci:
                    r = r + x.scale(ci)
        return exp_nilpotent(r)

    def module_action(self, g: GroupElement) -> QMatrix:
        """rho_V(g) = rho_V(u) R(s)."""
        if g.s_module is None:
            raise InvalidPresentation("group element carries no module image of its semisimple part")
        return self.module_action_u(g.u) @ g.s_module

    def t_action_on_u(self, s: QMatrix) -> QMatrix:
        """Matrix of X -> s X s^-1 on u in u_basis coordinates (columns = images)."""
        si = s.inverse
        return QMatrix.from_columns([self.coords(s @ x @ si) for x in self.u_basis], self.n)


def _identity_like_dim(m, d):
    if isinstance(m, PolyMatrix):
        return PolyMatrix.identity(d, m.nvars)
    return QMatrix.identity(d)


# -- validation ------------------------------------------------------------

def validate(h: HullPresentation, raise_on_failure: bool = False) -> ValidationReport:
    """Check every invariant of the presentation; the report names each identity tested."""
    rep = ValidationReport()
    N, n = h.N, h.n

    shapes_ok = all(x.shape == (N, N) for x in h.u_basis + h.t_generators)
    shapes_ok &= all(g.s.shape == (N, N) and g.u.shape == (N, N) for _, g in h.gamma_generators)
    rep.add("shapes", shapes_ok, f"all matrices are {N}x{N}" if shapes_ok else "matrix of wrong size")
    if not shapes_ok:
        return _finish(rep, raise_on_failure)

    bad = [i for i, x in enumerate(h.u_basis) if not x.is_nilpotent()]
    rep.add("u_basis nilpotent", not bad, f"X_{bad[0] + 1}^{N} != 0" if bad else "")
    try:
        h._coord_data
        indep = True
    except InvalidPresentation:
        indep = False
    rep.add("u_basis independent", indep)
    if bad or not indep:
        return _finish(rep, raise_on_failure)

    closed, detail = True, ""
    for i in range(n):
        for j in range(i + 1, n):
            try:
                h.coords(h.u_basis[i].commutator(h.u_basis[j]))
            except NotInSpan:
                closed, detail = False, f"[X_{i + 1}, X_{j + 1}] not in span"
                break
        if not closed:
            break
    rep.add("bracket closure", closed, detail)
    if not closed:
        return _finish(rep, raise_on_failure)
    try:
        h.lie
        rep.add("nilpotent Lie algebra", True)
    except InvalidPresentation as e:
        rep.add("nilpotent Lie algebra", False, e.detail)
        return _finish(rep, raise_on_failure)

    for j, s in enumerate(h.t_generators):
        if s.det == 0:
            rep.add(f"S_{j + 1} invertible", False, "singular")
            continue
        try:
            h.t_action_on_u(s)
            rep.add(f"S_{j + 1} normalizes u", True)
        except NotInSpan:
            rep.add(f"S_{j + 1} normalizes u", False, f"S_{j + 1} X S_{j + 1}^-1 leaves span(u_basis)")

    if h.declared_rank is not None:
        rep.add("full representation (dim U = rank)", h.declared_rank == n,
                f"dim U = {n}, declared rank = {h.declared_rank}")

    mod = h.module
    mod_ok = (len(mod.r_basis) == n and len(mod.R_gens) == len(h.t_generators)
              and all(r.shape == (mod.dim, mod.dim) for r in mod.r_basis + mod.R_gens))
    rep.add("module shapes", mod_ok, "" if mod_ok else "module needs one r per u_basis element and one R per t_generator")
    if mod_ok:
        badr = [i for i, r in enumerate(mod.r_basis) if not r.is_nilpotent()]
        rep.add("r(X_i) nilpotent", not badr, f"r(X_{badr[0] + 1}) not nilpotent" if badr else "")
        hom, detail = True, ""
        for i in range(n):
            for j in range(i + 1, n):
                lhs = mod.r_basis[i].commutator(mod.r_basis[j])
                rhs = QMatrix.zeros(mod.dim)
                for c, r in zip(h.structure_constants[i][j], mod.r_basis):
                    if c:
                        rhs = rhs + r.scale(c)
                if lhs != rhs:
                    hom, detail = False, f"r([X_{i + 1},X_{j + 1}]) != [r(X_{i + 1}), r(X_{j + 1})]"
        rep.add("r is a Lie homomorphism", hom, detail)
        for j, (s, R) in enumerate(zip(h.t_generators, mod.R_gens)):
            ok, why = _module_compatible(h, s, R)
            rep.add(f"R_{j + 1} compatible with S_{j + 1}", ok, why)

    for name, g in h.gamma_generators:
        if g.s.det == 0:
            rep.add(f"gamma {name}: s invertible", False, "singular")
            continue
        try:
            h.coords(log_unipotent(g.u))
            rep.add(f"gamma {name}: u in U", True)
        except (NotUnipotent, NotInSpan) as e:
            rep.add(f"gamma {name}: u in U", False, str(e))
        try:
            h.t_action_on_u(g.s)
            rep.add(f"gamma {name}: s normalizes u", True)
        except NotInSpan:
            rep.add(f"gamma {name}: s normalizes u", False, "s X s^-1 leaves span(u_basis)")
            continue
        if g.s_module is None:
            rep.add(f"gamma {name}: module image of s", False, "missing")
        elif mod_ok:
            ok, why = _module_compatible(h, g.s, g.s_module)
            rep.add(f"gamma {name}: module image of s", ok, why)
    return _finish(rep, raise_on_failure)


def _module_compatible(h, s, R):
    mod = h.module
    if R.shape != (mod.dim, mod.dim) or R.det == 0:
        return False, "module image must be an invertible dim(V) square matrix"
    Ri = R.inverse
    try:
        A = h.t_action_on_u(s)
    except NotInSpan:
        return False, "s does not normalize u"
    for i, r in enumerate(mod.r_basis):
        rhs = QMatrix.zeros(mod.dim)
        for c, rr in zip(A.col(i), mod.r_basis):
            if c:
                rhs = rhs + rr.scale(c)
        if R @ r @ Ri != rhs:
            return False, f"R r(X_{i + 1}) R^-1 != r(s X_{i + 1} s^-1)"
    return True, ""


def _finish(rep: ValidationReport, raise_on_failure: bool) -> ValidationReport:
    if raise_on_failure and not rep.ok:
        f = rep.first_failure()
        raise InvalidPresentation(f"{f.name}: {f.detail}".rstrip(": "))
    return rep


# -- sigma ----------------------------------------------------------------

def multiply(h: HullPresentation, a: GroupElement, b: GroupElement) -> GroupElement:
    return h.multiply(a, b)


def sigma(h: HullPresentation, elems: Sequence[GroupElement]) -> PolyMatrix:
    """The polynomial simplex in U with vertices alpha(g_i) e, in variables t_1..t_p."""
    elems = tuple(elems)
    p = len(elems) - 1
    if p < 0:
        raise ValueError("sigma needs at least one group element")
    g0 = elems[0]
    if p == 0:
        return PolyMatrix.constant(g0.u, 0)
    g0i = h.inverse(g0)
    rel = tuple(h.multiply(g0i, g, check=False) for g in elems[1:])
    return h.act(g0, _sigma_based(h, rel))


def _sigma_based(h: HullPresentation, rel: tuple) -> PolyMatrix:
    """sigma(e, h_1, ..., h_p), cached per presentation."""
    key = tuple((g.s, g.u) for g in rel)
    cache = h._sigma_cache
    hit = cache.get(key)
    if hit is not None:
        return hit
    p = len(rel)
    face = sigma(h, rel)                      # variables u_1..u_{p-1} = t_2..t_p
    y = h.poly_coords(log_unipotent(face), check=False)
    P, Pinv, weights = h.lie.graded_basis
    n = h.n
    s = QPoly.zero(p)
    for i in range(p):
        s = s + QPoly.var(i, p)
    spow = {0: QPoly.constant(1, p)}
    shift = list(range(1, p))
    lifted = []
    for j in range(n):
        zj = QPoly.zero(p - 1)
        for k in range(n):
            a = Pinv[j, k]
            if a and y[k]:
                zj = zj + y[k] * a
        w = weights[j]
        if zj.degree > w:
            raise NotUnipotent(f"face data of weight {w} has degree {zj.degree}; basis is not LCS-adapted")
        acc = QPoly.zero(p)
        for deg in range(zj.degree + 1):
            part = zj.homogeneous_part(deg)
            if part.is_zero():
                continue
            e = w - deg
            if e not in spow:
                spow[e] = s ** e
            acc = acc + part.embed(p, shift) * spow[e]
        lifted.append(acc)
    coords = []
    for i in range(n):
        acc = QPoly.zero(p)
        for j in range(n):
            a = P[i, j]
            if a and lifted[j]:
                acc = acc + lifted[j] * a
        coords.append(acc)
    out = exp_nilpotent(PolyMatrix.combination(coords, h.u_basis, p))
    cache[key] = out
    return out


# -- pullback of invariant forms ------------------------------------------

def maurer_cartan(h: HullPresentation, m: PolyMatrix) -> list:
    """Coefficient 1-forms c_i with m^-1 dm = sum_i c_i X_i."""
    p = m.nvars
    minv = unipotent_inverse(m)
    per_param = [h.poly_coords(minv @ m.diff(i)) for i in range(p)]
    return [PolyForm.from_one_forms([per_param[i][j] for i in range(p)]) if p else PolyForm.zero(0, 1)
            for j in range(h.n)]


def cochain_blocks(h: HullPresentation, omega: Sequence, k: int) -> dict:
    """Nonzero V-blocks of a cochain in the bitmask basis: mask -> vector."""
    dv = h.value_dim
    masks = subset_masks(h.n, k)
    if len(omega) != len(masks) * dv:
        raise ValueError(f"cochain has length {len(omega)}, expected {len(masks) * dv}")
    out = {}
    for idx, m in enumerate(masks):
        blk = tuple(Rational(x) for x in omega[idx * dv:(idx + 1) * dv])
        if any(blk):
            out[int(m)] = blk
    return out


def pullback_form(h: HullPresentation, omega: Sequence, k: int, elems: Sequence[GroupElement],
                  m: PolyMatrix | None = None) -> PolyForm:
    """sigma^* of the G-invariant V-valued form extending omega: rho_V(M) omega(mc, ..., mc)."""
    if m is None:
        m = sigma(h, elems)
    p = m.nvars
    dv = h.value_dim
    blocks = cochain_blocks(h, omega, k)
    if k > p or not blocks:
        return PolyForm(p, k, dv)
    if k == 0:
        vec = blocks.get(0, (Rational(0),) * dv)
        form = PolyForm.function([QPoly.constant(x, p) for x in vec], p)
    else:
        mc = maurer_cartan(h, m)
        cache: dict = {}

        def wedge_of(mask: int) -> PolyForm:
            if mask in cache:
                return cache[mask]
            low = (mask & -mask).bit_length() - 1
            rest = mask & (mask - 1)
            out = mc[low] if not rest else wedge(mc[low], wedge_of(rest))
            cache[mask] = out
            return out

        terms: dict = {}
        for mask, vec in blocks.items():
            wf = wedge_of(mask)
            for key, (c,) in wf.terms.items():
                add = tuple(c * x for x in vec)
                terms[key] = tuple(a + b for a, b in zip(terms[key], add)) if key in terms else add
        form = PolyForm(p, k, dv, terms)
    if h.module.is_nilpotent_trivial:
        return form
    return form.apply_matrix(h.module_action_u(m))


def theta(h: HullPresentation, omega: Sequence, k: int, elems: Sequence[GroupElement]) -> tuple:
    """Integral of the pulled-back form over the standard simplex."""
    p = len(elems) - 1
    if k != p:
        raise DegreeMismatch(f"theta of a {k}-cochain needs {k + 1} group elements, got {p + 1}")
    return pullback_form(h, omega, k, elems).integrate()
