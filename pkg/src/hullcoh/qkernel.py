"""Exact arithmetic substrate: rationals, dense matrices over Q, polynomials over Q.

``Rational`` is gmpy2's ``mpq`` when gmpy2 is installed and
:class:`fractions.Fraction` otherwise; the two compare and hash alike.
Nothing in this module rounds.
"""
from __future__ import annotations

import fractions
from functools import cached_property
from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = fractions.Fraction
Vector = tuple  # tuple of Rational

__all__ = [
    "Rational", "QMatrix", "QPoly", "Inconsistent",
    "to_rational", "rational_str", "rref", "rank", "kernel_basis", "solve",
    "span_basis", "dot", "vec_add", "vec_scale", "vec_sub", "is_zero_vector",
]


class Inconsistent(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the image."""


def to_rational(x) -> Rational:
    """Coerce ``int``, ``Rational`` or a ``"p/q"`` string to a Rational."""
    if type(x) is Rational:
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, fractions.Fraction)):
        return Rational(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not a decimal-free rational: {x!r}")
        return Rational(s)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def rational_str(x: Rational) -> str:
    x = Rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- vectors ---------------------------------------------------------------

def dot(a: Sequence, b: Sequence) -> Rational:
    return sum((x * y for x, y in zip(a, b) if x and y), Rational(0))


def vec_add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_zero_vector(a: Sequence) -> bool:
    return not any(a)


# -- matrices --------------------------------------------------------------

class QMatrix:
    """Immutable dense matrix over Q (row-major)."""

    __slots__ = ("rows", "cols", "_data", "__dict__")

    def __init__(self, rows: int, cols: int, data: Iterable):
        data = tuple(x if type(x) is Rational else Rational(x) for x in data)
        if len(data) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(data)}")
        self.rows = rows
        self.cols = cols
        self._data = data

    @classmethod
    def _make(cls, rows: int, cols: int, data: tuple) -> "QMatrix":
        """Trusted constructor: ``data`` is already a tuple of Fractions."""
        out = object.__new__(cls)
        out.rows, out.cols, out._data = rows, cols, data
        return out

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "QMatrix":
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, 0, ())
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, (to_rational(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None) -> "QMatrix":
        if not cols:
            return cls(nrows or 0, 0, ())
        height = len(cols[0]) if nrows is None else nrows
        if any(len(c) != height for c in cols):
            raise ValueError("ragged columns")
        return cls(height, len(cols), (to_rational(c[i]) for i in range(height) for c in cols))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "QMatrix":
        cols = rows if cols is None else cols
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "QMatrix":
        """The matrix unit E_ij."""
        return cls(n, n, (1 if (a, b) == (i, j) else 0 for a in range(n) for b in range(n)))

    @classmethod
    def block_diag(cls, *blocks: "QMatrix") -> "QMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[Rational(0)] * m for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out)

    # access
    def __getitem__(self, ij):
        i, j = ij
        return self._data[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._data[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self._data[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[Rational]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def flat(self) -> tuple:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def T(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    # algebra
    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_shape(other)
        return QMatrix._make(self.rows, self.cols, tuple(a + b for a, b in zip(self._data, other._data)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_shape(other)
        return QMatrix._make(self.rows, self.cols, tuple(a - b for a, b in zip(self._data, other._data)))

    def __neg__(self) -> "QMatrix":
        return QMatrix._make(self.rows, self.cols, tuple(-a for a in self._data))

    def scale(self, c) -> "QMatrix":
        c = Rational(c)
        return QMatrix._make(self.rows, self.cols, tuple(c * a for a in self._data))

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = [[(k, b) for k, b in enumerate(other.col(j)) if b] for j in range(other.cols)]
            zero = Rational(0)
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    s = zero
                    for k, b in c:
                        a = r[k]
                        if a:
                            s += a * b
                    out.append(s)
            return QMatrix._make(self.rows, other.cols, tuple(out))
        return NotImplemented

    def apply(self, v: Sequence) -> tuple:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(k, x) for k, x in enumerate(v) if x]
        return tuple(sum((self._data[i * self.cols + k] * x for k, x in nz), Rational(0)) for i in range(self.rows))

    def __pow__(self, k: int) -> "QMatrix":
        if self.rows != self.cols or k < 0:
            raise ValueError("power needs a square matrix and k >= 0")
        out = QMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def commutator(self, other: "QMatrix") -> "QMatrix":
        return self @ other - other @ self

    def is_zero(self) -> bool:
        return not any(self._data)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        n = self.cols
        return all(x == (1 if i % (n + 1) == 0 else 0) for i, x in enumerate(self._data))

    def is_nilpotent(self) -> bool:
        return self.rows == self.cols and (self ** max(self.rows, 1)).is_zero()

    @cached_property
    def rank(self) -> int:
        return len(rref(self)[1])

    @cached_property
    def det(self) -> Rational:
        if self.rows != self.cols:
            raise ValueError("det of non-square matrix")
        m = [list(self.row(i)) for i in range(self.rows)]
        n = self.rows
        sign = 1
        d = Rational(1)
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c]), None)
            if p is None:
                return Rational(0)
            if p != c:
                m[c], m[p] = m[p], m[c]
                sign = -sign
            piv = m[c][c]
            d *= piv
            for r in range(c + 1, n):
                f = m[r][c]
                if f:
                    f /= piv
                    rr, rc = m[r], m[c]
                    for j in range(c, n):
                        if rc[j]:
                            rr[j] -= f * rc[j]
        return sign * d

    @cached_property
    def inverse(self) -> "QMatrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        aug = QMatrix.from_rows([list(self.row(i)) + [1 if i == j else 0 for j in range(n)] for i in range(n)])
        r, piv = rref(aug)
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return QMatrix.from_rows([r.row(i)[n:] for i in range(n)])

    def _check_shape(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(rational_str(x) for x in self.row(i)) for i in range(self.rows))
        return f"QMatrix([{body}])"

    def to_strings(self) -> list[list[str]]:
        return [[rational_str(x) for x in self.row(i)] for i in range(self.rows)]


def rref(m: QMatrix) -> tuple[QMatrix, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivot choice is the first nonzero entry scanning down each column.
    """
    a = [list(m.row(i)) for i in range(m.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        if r == m.rows:
            break
        p = next((i for i in range(r, m.rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        pr = [x * inv if x else x for x in a[r]]
        a[r] = pr
        nzc = [j for j in range(c, m.cols) if pr[j]]
        for i in range(m.rows):
            if i != r:
                f = a[i][c]
                if f:
                    ai = a[i]
                    for j in nzc:
                        ai[j] -= f * pr[j]
        pivots.append(c)
        r += 1
    return QMatrix(m.rows, m.cols, (x for row in a for x in row)), pivots


def rank(m: QMatrix) -> int:
    return m.rank


def kernel_basis(m: QMatrix) -> list[tuple]:
    """Basis of {v : m v = 0}, one vector per free column, in RREF-canonical form."""
    r, piv = rref(m)
    pivset = set(piv)
    basis = []
    for f in range(m.cols):
        if f in pivset:
            continue
        v = [Rational(0)] * m.cols
        v[f] = Rational(1)
        for i, pc in enumerate(piv):
            v[pc] = -r[i, f]
        basis.append(tuple(v))
    return basis


def solve(m: QMatrix, b: Sequence) -> tuple:
    """A particular solution of ``m x = b``; free variables are set to zero."""
    if len(b) != m.rows:
        raise ValueError("right-hand side length mismatch")
    aug = QMatrix.from_rows([list(m.row(i)) + [b[i]] for i in range(m.rows)])
    r, piv = rref(aug)
    if piv and piv[-1] == m.cols:
        raise Inconsistent("right-hand side is not in the image")
    x = [Rational(0)] * m.cols
    for i, pc in enumerate(piv):
        x[pc] = r[i, m.cols]
    return tuple(x)


def span_basis(vectors: Sequence[Sequence], dim: int) -> list[tuple]:
    """RREF basis of the span of ``vectors`` (each of length ``dim``)."""
    if not vectors:
        return []
    r, piv = rref(QMatrix.from_rows(vectors))
    return [r.row(i) for i in range(len(piv))]


# -- polynomials -----------------------------------------------------------

class QPoly:
    """Polynomial over Q in variables t_1..t_n (stored 0-based).

    ``terms`` maps exponent tuples (length ``nvars``) to nonzero Fractions.
    Treat instances as immutable.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        if terms:
            self.terms = {e: c for e, c in terms.items() if c}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "QPoly":
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c, nvars: int) -> "QPoly":
        c = Rational(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, i: int, nvars: int) -> "QPoly":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Rational(1)})

    @classmethod
    def zero(cls, nvars: int) -> "QPoly":
        return cls._raw(nvars, {})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def _coerce(self, other) -> "QPoly":
        if isinstance(other, QPoly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch {self.nvars} vs {other.nvars}")
            return other
        return QPoly.constant(other, self.nvars)

    def __add__(self, other) -> "QPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return QPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "QPoly":
        return QPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "QPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "QPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "QPoly":
        if not isinstance(other, QPoly):
            c = Rational(other)
            if not c:
                return QPoly.zero(self.nvars)
            return QPoly._raw(self.nvars, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return QPoly.zero(self.nvars)
        out: dict = {}
        get = out.get
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return QPoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QPoly":
        out = QPoly.constant(1, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def diff(self, i: int) -> "QPoly":
        """Partial derivative with respect to variable ``i`` (0-based)."""
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                out[ne] = c * k
        return QPoly._raw(self.nvars, out)

    def set_zero(self, i: int) -> "QPoly":
        """Substitute t_i = 0 and drop the variable (result has nvars - 1 variables)."""
        out = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                out[e[:i] + e[i + 1:]] = c
        return QPoly._raw(self.nvars - 1, out)

    def set_one(self, i: int) -> "QPoly":
        """Substitute t_i = 1 and drop the variable."""
        out: dict = {}
        for e, c in self.terms.items():
            ne = e[:i] + e[i + 1:]
            out[ne] = out.get(ne, 0) + c
        return QPoly(self.nvars - 1, out)

    def embed(self, nvars: int, positions: Sequence[int]) -> "QPoly":
        """Rename variable j to variable ``positions[j]`` in a ring with ``nvars`` variables."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * nvars
            for j, k in enumerate(e):
                if k:
                    ne[positions[j]] += k
            out[tuple(ne)] = c
        return QPoly._raw(nvars, out) if len(set(positions)) == len(positions) else QPoly(nvars, out)

    def substitute(self, values: Sequence["QPoly"]) -> "QPoly":
        """Compose: replace variable j by the polynomial ``values[j]``."""
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        target = values[0].nvars if values else 0
        out = QPoly.zero(target)
        powers: list[dict[int, QPoly]] = [{0: QPoly.constant(1, target)} for _ in values]

        def pw(j: int, k: int) -> QPoly:
            cache = powers[j]
            if k not in cache:
                cache[k] = pw(j, k - 1) * values[j]
            return cache[k]

        for e, c in self.terms.items():
            term = QPoly.constant(c, target)
            for j, k in enumerate(e):
                if k:
                    term = term * pw(j, k)
            out = out + term
        return out

    def homogeneous_part(self, d: int) -> "QPoly":
        return QPoly._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def evaluate(self, point: Sequence) -> Rational:
        s = Rational(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Rational(x) ** k
            s += t
        return s

    def constant_term(self) -> Rational:
        return self.terms.get((0,) * self.nvars, Rational(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Rational)):
            return self == QPoly.constant(other, self.nvars)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"t{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{rational_str(c)}*{mono}" if mono else rational_str(c))
        return " + ".join(parts)
