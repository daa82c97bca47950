"""Invariant symplectic forms and the hard Lefschetz property on the invariant cochain model."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import lcm
from typing import Sequence
import numpy as np

from .liecomplex import CEComplex, CohomologyReport, cochain_wedge
from .qkernel import QMatrix, Rational, kernel_basis


class OddDimension(ValueError):
    pass


class NotSymplectic(ValueError):
    pass


def _require_scalar(cx: CEComplex) -> None:
    if cx.value_dim != 1:
        raise ValueError("symplectic search needs the trivial module")


def closed_invariant_two_forms(cx: CEComplex) -> list:
    """Basis (full bitmask coordinates) of the closed invariant 2-cochains."""
    _require_scalar(cx)
    if cx.n < 2 or not cx.bases[2]:
        return []
    return [cx.to_full(2, v) for v in kernel_basis(cx.diffs[2])]


def wedge_power(n: int, omega: Sequence, k: int) -> tuple:
    """omega^k for a 2-cochain (omega^0 = 1)."""
    out: tuple = (Rational(1),)
    for i in range(k):
        out = cochain_wedge(n, out, 2 * i, omega, 2)
    return out


def is_nondegenerate(omega: Sequence, dim: int) -> tuple[bool, Rational]:
    """(omega^{dim/2} != 0, its single top coefficient)."""
    if dim % 2:
        raise OddDimension(f"dimension {dim} is odd")
    top = wedge_power(dim, omega, dim // 2)
    return top[0] != 0, top[0]


@dataclass
class LefschetzLevel:
    k: int
    source_degree: int
    target_degree: int
    matrix: QMatrix
    rank: int
    pairing_rank: int

    @property
    def square(self) -> bool:
        return self.matrix.rows == self.matrix.cols

    @property
    def isomorphism(self) -> bool:
        return self.square and self.rank == self.matrix.cols


@dataclass
class SymplecticCertificate:
    omega: tuple                   # full bitmask coordinates
    half_dim: int
    top_coefficient: Rational
    denominator: int               # omega * denominator has integer coefficients
    found_by: str
    levels: list = field(default_factory=list)
    hlp: bool | None = None


def _certificate(omega, n, how) -> SymplecticCertificate | None:
    ok, top = is_nondegenerate(omega, n)
    if not ok:
        return None
    den = 1
    for x in omega:
        den = lcm(den, Rational(x).denominator)
    return SymplecticCertificate(tuple(Rational(x) for x in omega), n // 2, top, den, how)


def _combine(basis, coeffs):
    out = [Rational(0)] * len(basis[0])
    for c, b in zip(coeffs, basis):
        if c:
            for i, x in enumerate(b):
                if x:
                    out[i] += c * x
    return tuple(out)


def find_symplectic(cx: CEComplex, seed: int = 0, height: int = 8, draws: int = 1000,
                    max_support: int = 3) -> SymplecticCertificate | None:
    """Search the closed invariant 2-forms for a nondegenerate one.

    First every combination with at most ``max_support`` coefficients in
    {+1, -1} (first nonzero coefficient +1), then ``draws`` seeded random
    rational combinations with numerators and denominators bounded by
    ``height``.  None means the search failed, not that no form exists.
    """
    _require_scalar(cx)
    n = cx.n
    if n % 2:
        raise OddDimension(f"dimension {n} is odd")
    basis = closed_invariant_two_forms(cx)
    if not basis:
        return None
    m = len(basis)
    for size in range(1, min(max_support, m) + 1):
        for idx in combinations(range(m), size):
            for signs in product((1, -1), repeat=size - 1):
                coeffs = [0] * m
                coeffs[idx[0]] = 1
                for i, s in zip(idx[1:], signs):
                    coeffs[i] = s
                cert = _certificate(_combine(basis, coeffs), n, f"enumeration {coeffs}")
                if cert:
                    return cert
    rng = np.random.default_rng(seed)
    for t in range(draws):
        nums = rng.integers(-height, height + 1, size=m)
        dens = rng.integers(1, height + 1, size=m)
        coeffs = [Rational(int(a), int(b)) for a, b in zip(nums, dens)]
        cert = _certificate(_combine(basis, coeffs), n, f"random draw {t + 1}")
        if cert:
            return cert
    return None


def hard_lefschetz_check(cert: SymplecticCertificate, report: CohomologyReport) -> SymplecticCertificate:
    """Fill in the matrices of [omega]^k : H^{n-k} -> H^{n+k} and the HLP verdict."""
    cx = report.complex
    dim = cx.n
    n = cert.half_dim
    if dim != 2 * n:
        raise NotSymplectic("half dimension does not match the Lie algebra")
    omega = cert.omega
    try:
        cx.to_invariant(2, omega)
    except ValueError:
        raise NotSymplectic("omega is not an invariant 2-cochain") from None
    if any(cx.d_full(2, omega)):
        raise NotSymplectic("omega is not closed")
    ok, top = is_nondegenerate(omega, dim)
    if not ok:
        raise NotSymplectic("omega^n vanishes")
    levels = []
    for k in range(n + 1):
        src, dst = n - k, n + k
        power = wedge_power(dim, omega, k)
        cols = []
        for z in report.representatives[src]:
            w = cochain_wedge(dim, power, 2 * k, z, src)
            cols.append(report.classify_full(dst, w))
        mat = QMatrix.from_columns(cols, report.betti[dst]) if cols else QMatrix.zeros(report.betti[dst], 0)
        # pairing (x, y) -> top coefficient of x ^ omega^k ^ y on H^{n-k}
        reps = report.representatives[src]
        pair = []
        for x in reps:
            xw = cochain_wedge(dim, x, src, power, 2 * k)
            pair.append([cochain_wedge(dim, xw, dst, y, src)[0] for y in reps])
        pr = QMatrix.from_rows(pair).rank if reps else 0
        levels.append(LefschetzLevel(k, src, dst, mat, mat.rank if cols and mat.rows else 0, pr))
    cert.levels = levels
    cert.hlp = all(lv.isomorphism for lv in levels)
    return cert
