"""Group cochains on tuples of group elements, the form-valued map psi, and integration iota.

Simplices of the universal cover are tuples (g_0, ..., g_p); the classifying
space is never built.  ``psi(omega)`` is a lazy evaluator: a tuple is first
translated to (e, g_0^-1 g_1, ..., g_0^-1 g_p), the form is computed there
(and cached), and the result is twisted back by rho_V(g_0).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence
import numpy as np

from .hull import GroupElement, HullPresentation, pullback_form, theta
from .liecomplex import CEComplex, complex_from_presentation
from .polyform import DegreeMismatch, PolyForm
from .qkernel import Rational


@dataclass(frozen=True)
class GroupTuple:
    """A simplex (g_0..g_p) together with its normalized translate."""
    base: GroupElement
    normalized: tuple

    @classmethod
    def of(cls, h: HullPresentation, elems: Sequence[GroupElement]) -> "GroupTuple":
        elems = tuple(elems)
        if not elems:
            raise ValueError("empty tuple")
        g0i = h.inverse(elems[0])
        norm = (h.identity(),) + tuple(h.multiply(g0i, g, check=False) for g in elems[1:])
        return cls(elems[0], norm)

    @property
    def dimension(self) -> int:
        return len(self.normalized) - 1

    def key(self) -> tuple:
        return tuple((g.s, g.u) for g in self.normalized[1:])


@dataclass(frozen=True)
class GroupCochain:
    """A V-valued function of (p+1)-tuples."""
    degree: int
    value_dim: int
    evaluator: Callable[[tuple], tuple]

    def __call__(self, elems: Sequence[GroupElement]) -> tuple:
        elems = tuple(elems)
        if len(elems) != self.degree + 1:
            raise DegreeMismatch(f"{self.degree}-cochain evaluated on {len(elems)} elements")
        return tuple(self.evaluator(elems))


def group_cochain_d(phi: GroupCochain) -> GroupCochain:
    """(d phi)(g_0..g_{p+1}) = sum_i (-1)^i phi(g_0..^g_i..g_{p+1})."""
    dv = phi.value_dim

    def ev(elems):
        acc = [Rational(0)] * dv
        for i in range(len(elems)):
            val = phi(elems[:i] + elems[i + 1:])
            sgn = -1 if i & 1 else 1
            acc = [a + sgn * v for a, v in zip(acc, val)]
        return tuple(acc)

    return GroupCochain(phi.degree + 1, dv, ev)


class PsiForm:
    """psi(omega): assigns to every simplex (g_0..g_p) a V-valued polynomial form."""

    def __init__(self, h: HullPresentation, omega: Sequence, degree: int):
        self.h = h
        self.omega = tuple(Rational(x) for x in omega)
        self.degree = degree
        self._cache: dict = {}

    def normalized_form(self, tup: GroupTuple) -> PolyForm:
        key = tup.key()
        hit = self._cache.get(key)
        if hit is None:
            hit = pullback_form(self.h, self.omega, self.degree, tup.normalized)
            self._cache[key] = hit
        return hit

    def __call__(self, elems: Sequence[GroupElement]) -> PolyForm:
        tup = GroupTuple.of(self.h, elems)
        form = self.normalized_form(tup)
        if tup.base.s.is_identity() and tup.base.u.is_identity():
            return form
        return form.apply_matrix(self.h.module_action(tup.base))


def psi(h: HullPresentation, omega: Sequence, degree: int) -> PsiForm:
    return PsiForm(h, omega, degree)


def iota(assignment: Callable[[tuple], PolyForm], elems: Sequence[GroupElement]) -> tuple:
    """Integrate the assigned form over the simplex of the tuple."""
    form = assignment(tuple(elems))
    if form.degree != form.arity:
        raise DegreeMismatch(f"a {form.degree}-form cannot be integrated over Delta^{form.arity}")
    return form.integrate()


def iota_psi(h: HullPresentation, omega: Sequence, degree: int) -> GroupCochain:
    """The group cochain iota(psi(omega))."""
    ps = psi(h, omega, degree)
    return GroupCochain(degree, h.value_dim, lambda elems: iota(ps, elems))


# -- sampling verification ------------------------------------------------------

Word = tuple  # of (generator name, +1 or -1)


def word_str(w: Word) -> str:
    if not w:
        return "e"
    return " ".join(name if e > 0 else f"{name}^-1" for name, e in w)


def random_word(rng: np.random.Generator, names: Sequence[str], max_len: int = 6) -> Word:
    length = int(rng.integers(0, max_len + 1))
    return tuple((names[int(rng.integers(len(names)))], 1 if rng.integers(2) else -1) for _ in range(length))


def _vec(v) -> list:
    return [str(Rational(x)) for x in v]


@dataclass
class DegreeResult:
    degree: int
    samples: int
    checks: dict = field(default_factory=dict)       # check name -> number of failures
    skipped: str = ""
    counterexamples: list = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(self.checks.values())


@dataclass
class VerificationReport:
    seed: int
    max_degree: int
    samples: int
    degrees: list

    @property
    def counterexample_count(self) -> int:
        return sum(d.failures for d in self.degrees)

    @property
    def ok(self) -> bool:
        return self.counterexample_count == 0


CHECKS = ("cochain_map", "diagram", "equivariance", "face_coherence")


def verify_cochain_map(h: HullPresentation, max_degree: int = 3, samples: int = 100, seed: int = 0,
                       complex: CEComplex | None = None,
                       differential: Callable[[int, Sequence], Sequence] | None = None,
                       max_word_length: int = 6, keep: int = 5) -> VerificationReport:
    """Sample random simplices and check the identities linking psi, iota, theta and d.

    Per degree k the checks are:

    * cochain_map: iota psi(d w) = d(iota psi w) on (k+2)-tuples;
    * diagram: iota psi(w) = theta(w) on (k+1)-tuples (theta is evaluated
      on the untranslated simplex, so the two routes are independent);
    * equivariance: theta(w)(g g_i) = rho_V(g) theta(w)(g_i);
    * face_coherence: the i-th face of psi(w) on a (k+2)-tuple equals
      psi(w) on the tuple with g_i deleted.

    ``differential(k, w)`` replaces the Chevalley-Eilenberg differential
    (used to show that a corrupted sign convention is detected).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    cx = complex if complex is not None else complex_from_presentation(h)
    n = cx.n
    if max_degree > n + 1:
        raise ValueError(f"max degree {max_degree} exceeds dim u + 1 = {n + 1}")
    diff = differential or cx.d_full
    names = [nm for nm, _ in h.gamma_generators]
    streams = np.random.SeedSequence(seed).spawn(max_degree + 1)
    results = []
    dv = h.value_dim
    for k in range(max_degree + 1):
        res = DegreeResult(k, samples, {c: 0 for c in CHECKS})
        results.append(res)
        if k > n:
            res.skipped = f"no cochains above degree {n}"
            continue
        if not cx.bases[k]:
            res.skipped = "no invariant cochains in this degree"
            continue
        if not names:
            res.skipped = "presentation has no group generators"
            continue
        rng = np.random.default_rng(streams[k])
        words_cache: dict = {}

        def elem(w: Word) -> GroupElement:
            if w not in words_cache:
                words_cache[w] = h.word(w)
            return words_cache[w]

        for _ in range(samples):
            coeffs = [int(x) for x in rng.integers(-3, 4, size=len(cx.bases[k]))]
            if not any(coeffs):
                coeffs[int(rng.integers(len(coeffs)))] = 1
            omega = cx.to_full(k, coeffs)
            words = [random_word(rng, names, max_word_length) for _ in range(k + 2)]
            shift = random_word(rng, names, max_word_length)
            elems = tuple(elem(w) for w in words)
            ps = psi(h, omega, k)

            def fail(check, detail):
                res.checks[check] += 1
                if len(res.counterexamples) < keep:
                    res.counterexamples.append({
                        "check": check,
                        "omega": _vec(omega),
                        "tuple": [word_str(w) for w in words],
                        **detail,
                    })

            # cochain map on k+2 elements
            domega = tuple(diff(k, omega)) if k < n else ()
            if k < n and any(domega):
                lhs = iota(psi(h, domega, k + 1), elems)
            else:
                lhs = (Rational(0),) * dv
            rhs = group_cochain_d(GroupCochain(k, dv, lambda e: iota(ps, e)))(elems)
            if tuple(lhs) != tuple(rhs):
                fail("cochain_map", {"lhs": _vec(lhs), "rhs": _vec(rhs)})

            # both routes to the group cochain, and equivariance, on the first k+1 elements
            sub = elems[:k + 1]
            a = iota(ps, sub)
            b = theta(h, omega, k, sub)
            if a != b:
                fail("diagram", {"lhs": _vec(a), "rhs": _vec(b)})
            g = elem(shift)
            moved = theta(h, omega, k, tuple(h.multiply(g, x, check=False) for x in sub))
            expect = h.module_action(g).apply(b)
            if moved != tuple(expect):
                fail("equivariance", {"shift": word_str(shift), "lhs": _vec(moved), "rhs": _vec(expect)})

            # faces of psi(w) on the (k+1)-simplex
            big = ps(elems)
            for i in range(k + 2):
                face = big.restrict_face(i)
                small = ps(elems[:i] + elems[i + 1:])
                if face != small:
                    fail("face_coherence", {"vertex": i, "lhs": repr(face), "rhs": repr(small)})
                    break
    return VerificationReport(seed, max_degree, samples, results)
