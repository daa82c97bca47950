"""Polynomial differential forms on the standard simplex.

A form on Delta^p is written in the independent coordinates t_1..t_p, with
t_0 = 1 - (t_1 + ... + t_p) eliminated.  ``dt_1 ^ ... ^ dt_p`` is the
positive orientation and the i-th face is the one where the i-th barycentric
coordinate vanishes (vertex i deleted).  With these choices
``integrate(d w) == sum((-1)**i * integrate(restrict_face(w, i)))``.
"""
from __future__ import annotations


from math import factorial
from typing import Mapping, Sequence

from ._kernels import insert_sign, merge_sign, popcount
from .qkernel import QPoly, Rational


class ValueDimMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


def _vzero(poly_vec) -> bool:
    return all(p.is_zero() for p in poly_vec)


class PolyForm:
    """sum_S c_S(t) dt_S with V-valued polynomial coefficients.

    ``terms`` maps a bitmask S (bit j <-> dt_{j+1}) to a tuple of
    ``value_dim`` QPolys.  Zero coefficient vectors are dropped.  A form
    of degree above the arity exists only as zero.
    """

    __slots__ = ("arity", "degree", "value_dim", "terms")

    def __init__(self, arity: int, degree: int, value_dim: int = 1, terms: Mapping | None = None):
        if degree < 0 or (degree > arity and terms):
            raise ValueError(f"degree {degree} impossible on Delta^{arity}")
        self.arity = arity
        self.degree = degree
        self.value_dim = value_dim
        clean = {}
        for mask, vec in (terms or {}).items():
            vec = tuple(vec)
            if popcount(mask) != degree or mask >> arity:
                raise ValueError(f"mask {mask:b} is not a degree-{degree} index set on {arity} parameters")
            if len(vec) != value_dim:
                raise ValueError("coefficient vector has wrong length")
            if any(p.nvars != arity for p in vec):
                raise ValueError("coefficient polynomial has wrong variable count")
            if not _vzero(vec):
                clean[mask] = vec
        self.terms = clean

    # -- construction
    @classmethod
    def zero(cls, arity: int, degree: int = 0, value_dim: int = 1) -> "PolyForm":
        return cls(arity, degree, value_dim)

    @classmethod
    def function(cls, coeffs, arity: int) -> "PolyForm":
        """A 0-form from a QPoly (scalar) or a sequence of QPolys (vector)."""
        vec = (coeffs,) if isinstance(coeffs, QPoly) else tuple(coeffs)
        return cls(arity, 0, len(vec), {0: vec})

    @classmethod
    def dt(cls, i: int, arity: int) -> "PolyForm":
        """The 1-form dt_i (1-based, as in the coordinates t_1..t_p)."""
        if not 1 <= i <= arity:
            raise IndexError(f"dt_{i} does not exist on Delta^{arity}")
        return cls(arity, 1, 1, {1 << (i - 1): (QPoly.constant(1, arity),)})

    @classmethod
    def from_one_forms(cls, coeffs: Sequence[QPoly]) -> "PolyForm":
        """sum_i coeffs[i] dt_{i+1}, scalar-valued."""
        p = len(coeffs)
        return cls(p, 1, 1, {1 << i: (c,) for i, c in enumerate(coeffs)})

    # -- linear structure
    def _like(self, terms) -> "PolyForm":
        out = object.__new__(PolyForm)
        out.arity, out.degree, out.value_dim = self.arity, self.degree, self.value_dim
        out.terms = {m: v for m, v in terms.items() if not _vzero(v)}
        return out

    def _check_same(self, other: "PolyForm") -> None:
        if (self.arity, self.degree, self.value_dim) != (other.arity, other.degree, other.value_dim):
            raise ValueError("forms live in different spaces")

    def __add__(self, other: "PolyForm") -> "PolyForm":
        self._check_same(other)
        out = dict(self.terms)
        for m, v in other.terms.items():
            out[m] = tuple(a + b for a, b in zip(out[m], v)) if m in out else v
        return self._like(out)

    def __neg__(self) -> "PolyForm":
        return self._like({m: tuple(-p for p in v) for m, v in self.terms.items()})

    def __sub__(self, other: "PolyForm") -> "PolyForm":
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        c = Rational(c)
        return self._like({m: tuple(p * c for p in v) for m, v in self.terms.items()})

    def apply_matrix(self, mat) -> "PolyForm":
        """Act on the value space by a (polynomial) matrix: w -> M w."""
        rows, cols = mat.shape
        if cols != self.value_dim:
            raise ValueDimMismatch("matrix width differs from value dimension")
        out = {}
        for m, v in self.terms.items():
            nv = []
            for i in range(rows):
                acc = QPoly.zero(self.arity)
                for j in range(cols):
                    e = mat[i, j]
                    if v[j] and e:
                        acc = acc + (e * v[j] if isinstance(e, QPoly) else v[j] * e)
                nv.append(acc)
            out[m] = tuple(nv)
        res = self._like(out)
        res.value_dim = rows
        return res

    def components(self, idx: int) -> "PolyForm":
        """The scalar form given by one coordinate of the values."""
        out = {m: (v[idx],) for m, v in self.terms.items()}
        res = self._like(out)
        res.value_dim = 1
        return res

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyForm)
                and (self.arity, self.degree, self.value_dim) == (other.arity, other.degree, other.value_dim)
                and self.terms == other.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"PolyForm(0; arity={self.arity}, degree={self.degree})"
        parts = []
        for m in sorted(self.terms):
            dts = "^".join(f"dt{j + 1}" for j in range(self.arity) if m >> j & 1)
            coeff = self.terms[m]
            c = repr(coeff[0]) if self.value_dim == 1 else "(" + ", ".join(map(repr, coeff)) + ")"
            parts.append(f"({c}){' ' + dts if dts else ''}")
        return " + ".join(parts)

    # -- calculus
    def d(self) -> "PolyForm":
        """Exterior derivative."""
        out: dict = {}
        for m, v in self.terms.items():
            for i in range(self.arity):
                if m >> i & 1:
                    continue
                dv = tuple(p.diff(i) for p in v)
                if _vzero(dv):
                    continue
                sgn = insert_sign(m, i)
                key = m | (1 << i)
                if sgn < 0:
                    dv = tuple(-p for p in dv)
                out[key] = tuple(a + b for a, b in zip(out[key], dv)) if key in out else dv
        res = object.__new__(PolyForm)
        res.arity, res.degree, res.value_dim = self.arity, self.degree + 1, self.value_dim
        res.terms = {k: v for k, v in out.items() if not _vzero(v)}
        return res

    def restrict_face(self, i: int) -> "PolyForm":
        """Pull back along the i-th face inclusion Delta^{p-1} -> Delta^p."""
        p = self.arity
        if not 0 <= i <= p:
            raise IndexError(f"face {i} does not exist on Delta^{p}")
        if p == 0:
            raise ValueError("Delta^0 has no faces")
        q = p - 1
        deg = self.degree
        if deg > q:
            return _bare(q, deg, self.value_dim, {})
        out: dict = {}

        def acc(key, vec):
            if key in out:
                out[key] = tuple(a + b for a, b in zip(out[key], vec))
            else:
                out[key] = vec

        if i >= 1:
            j = i - 1  # 0-based variable set to zero
            low = (1 << j) - 1
            for m, v in self.terms.items():
                if m >> j & 1:
                    continue
                key = (m & low) | ((m >> (j + 1)) << j)
                acc(key, tuple(c.set_zero(j) for c in v))
        else:
            # t_1 = 1 - sum(u), t_{j+1} = u_j; dt_1 = -sum(du)
            one = QPoly.constant(1, q)
            us = [QPoly.var(j, q) for j in range(q)]
            first = one
            for u in us:
                first = first - u
            subs = [first] + us
            for m, v in self.terms.items():
                nv = tuple(c.substitute(subs) for c in v)
                rest = m >> 1
                if not m & 1:
                    acc(rest, nv)
                    continue
                for j in range(q):
                    if rest >> j & 1:
                        continue
                    s = -insert_sign(rest, j)
                    acc(rest | (1 << j), tuple(c * s for c in nv))
        return _bare(q, deg, self.value_dim, out)

    def integrate(self) -> tuple:
        """Exact integral over Delta^p, one Rational per value coordinate."""
        p = self.arity
        if self.degree != p:
            raise DegreeMismatch(f"cannot integrate a {self.degree}-form over Delta^{p}")
        vec = self.terms.get((1 << p) - 1)
        if vec is None:
            return (Rational(0),) * self.value_dim
        return tuple(integrate_poly(c) for c in vec)


def _bare(arity, degree, value_dim, terms) -> PolyForm:
    res = object.__new__(PolyForm)
    res.arity, res.degree, res.value_dim = arity, degree, value_dim
    res.terms = {k: v for k, v in terms.items() if not _vzero(v)}
    return res


def integrate_poly(c: QPoly) -> Rational:
    """Integral of c(t) dt_1...dt_p over {t >= 0, sum t <= 1} (Dirichlet formula)."""
    p = c.nvars
    total = Rational(0)
    for e, coef in c.terms.items():
        num = 1
        for a in e:
            num *= factorial(a)
        total += coef * Rational(num, factorial(p + sum(e)))
    return total


def d(w: PolyForm) -> PolyForm:
    return w.d()


def wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    """Graded-commutative product; at least one factor must be scalar-valued."""
    if a.arity != b.arity:
        raise ValueError("forms on different simplices")
    if a.value_dim != 1 and b.value_dim != 1:
        raise ValueDimMismatch("wedge of two vector-valued forms is undefined")
    deg = a.degree + b.degree
    vd = max(a.value_dim, b.value_dim)
    if deg > a.arity:
        return _bare(a.arity, deg, vd, {})
    out: dict = {}
    for ma, va in a.terms.items():
        for mb, vb in b.terms.items():
            if ma & mb:
                continue
            s = merge_sign(ma, mb)
            if a.value_dim == 1:
                c = va[0]
                vec = tuple(c * x for x in vb)
            else:
                c = vb[0]
                vec = tuple(x * c for x in va)
            if s < 0:
                vec = tuple(-x for x in vec)
            key = ma | mb
            out[key] = tuple(x + y for x, y in zip(out[key], vec)) if key in out else vec
    return _bare(a.arity, deg, vd, out)


def restrict_face(w: PolyForm, i: int) -> PolyForm:
    return w.restrict_face(i)


def integrate_simplex(w: PolyForm) -> tuple:
    return w.integrate()
