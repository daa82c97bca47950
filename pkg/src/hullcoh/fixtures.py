"""Builders for the shipped presentation files.

Each builder returns a :class:`PresentationFile`; ``write_all`` regenerates
the JSON corpus, and the test suite checks the corpus is in sync.

Abelian models put u = Q^n in the last column of an (n+1)x(n+1) matrix:
X_i = E_{i,n}, a lattice automorphism B acts as diag(B, 1).  For the
Z x|_A Z^m examples the generator t is the pair (diag(B, 1), I + E_{0,n})
with B = diag(1, A), and the remaining generators are unit translations.
"""
from __future__ import annotations

from pathlib import Path

from .hull import GroupElement, HullPresentation, RationalModule, exp_nilpotent
from .io import OracleSpec, PresentationFile, dumps
from .qkernel import QMatrix

CAT = QMatrix.from_rows([[2, 1], [1, 1]])
CAT2 = QMatrix.from_rows([[3, 2], [1, 1]])


def _ones(k: int) -> QMatrix:
    return QMatrix.identity(k)


def semidirect(name: str, A: QMatrix, module_R: QMatrix | None = None) -> PresentationFile:
    """Z x|_A Z^m inside the affine group of Q^{m+1}.

    ``module_R`` is the action on V of the semisimple part (V = Q^{m+1}
    with the u-action trivial); None means the trivial module.
    """
    m = A.rows
    n = m + 1
    N = n + 1
    B = QMatrix.block_diag(_ones(1), A)
    S = QMatrix.block_diag(B, _ones(1))
    X = [QMatrix.unit(N, i, n) for i in range(n)]
    ident = _ones(N)
    dv = module_R.rows if module_R is not None else 1
    R = module_R if module_R is not None else _ones(1)
    module = RationalModule(dv, (R,), (QMatrix.zeros(dv),) * n)
    gens = [("t", GroupElement(S, ident + X[0], R))]
    gens += [(f"v{i}", GroupElement(ident, ident + X[i], _ones(dv))) for i in range(1, n)]
    names = ("t",) + tuple(f"v{i}" for i in range(1, n))
    h = HullPresentation(N, tuple(X), (S,), tuple(gens), n, module, names, name)
    oracle = OracleSpec(A, (_ones(dv),) * m, R)
    return PresentationFile(h, oracle)


def torus(n: int) -> PresentationFile:
    N = n + 1
    X = [QMatrix.unit(N, i, n) for i in range(n)]
    ident = _ones(N)
    gens = tuple((f"e{i + 1}", GroupElement(ident, ident + X[i], _ones(1))) for i in range(n))
    h = HullPresentation(N, tuple(X), (), gens, n, None, tuple(f"e{i + 1}" for i in range(n)), f"torus{n}")
    oracle = OracleSpec(_ones(n - 1), (_ones(1),) * (n - 1), _ones(1))
    return PresentationFile(h, oracle)


def heisenberg() -> PresentationFile:
    """Upper unitriangular 3x3 matrices; Gamma is generated by exp X and exp Y."""
    E = QMatrix.unit
    X, Y, Z = E(3, 0, 1), E(3, 1, 2), E(3, 0, 2)
    ident = _ones(3)
    gens = (("a", GroupElement(ident, ident + X, _ones(1))), ("b", GroupElement(ident, ident + Y, _ones(1))))
    h = HullPresentation(3, (X, Y, Z), (), gens, 3, None, ("x", "y", "z"), "heisenberg")
    # Gamma = <a> x| <c, b> with a b a^-1 = c b
    oracle = OracleSpec(QMatrix.from_rows([[1, 1], [0, 1]]), (_ones(1),) * 2, _ones(1))
    return PresentationFile(h, oracle)


def kodaira_thurston() -> PresentationFile:
    """Heisenberg times Z in a 4x4 model: [x, y] = z, w central."""
    E = QMatrix.unit
    X, Y, Z, W = E(4, 0, 1), E(4, 1, 2), E(4, 0, 2), E(4, 0, 3)
    ident = _ones(4)
    gens = tuple((nm, GroupElement(ident, ident + M, _ones(1))) for nm, M in (("a", X), ("b", Y), ("c", W)))
    h = HullPresentation(4, (X, Y, Z, W), (), gens, 4, None, ("x", "y", "z", "w"), "kodaira_thurston")
    oracle = OracleSpec(QMatrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), (_ones(1),) * 3, _ones(1))
    return PresentationFile(h, oracle)


def filiform4() -> PresentationFile:
    """The 3-step filiform algebra [x1, x2] = x3, [x1, x3] = x4 (no oracle tag)."""
    E = QMatrix.unit
    X = E(4, 0, 1) + E(4, 1, 2) + E(4, 2, 3)
    Y = E(4, 2, 3)
    Z = X.commutator(Y)
    W = X.commutator(Z)
    ident = _ones(4)
    gens = (("a", GroupElement(ident, exp_nilpotent(X), _ones(1))),
            ("b", GroupElement(ident, exp_nilpotent(Y), _ones(1))))
    h = HullPresentation(4, (X, Y, Z, W), (), gens, 4, None, ("x1", "x2", "x3", "x4"), "filiform4")
    return PresentationFile(h, None)


def sol() -> PresentationFile:
    return semidirect("sol", CAT)


def sol_std() -> PresentationFile:
    """Sol with V = Q^3, the semisimple part acting through B and u acting trivially."""
    return semidirect("sol_std", CAT, QMatrix.block_diag(_ones(1), CAT))


def hyperbolic_k1() -> PresentationFile:
    return semidirect("hyperbolic_k1", QMatrix.block_diag(_ones(1), CAT))


def hyperbolic_k2() -> PresentationFile:
    return semidirect("hyperbolic_k2", QMatrix.block_diag(_ones(1), CAT, CAT2))


BUILDERS = {
    "heisenberg": heisenberg,
    "sol": sol,
    "sol_std": sol_std,
    "hyperbolic_k1": hyperbolic_k1,
    "hyperbolic_k2": hyperbolic_k2,
    "torus2": lambda: torus(2),
    "torus4": lambda: torus(4),
    "kodaira_thurston": kodaira_thurston,
    "filiform4": filiform4,
}


def build(name: str) -> PresentationFile:
    return BUILDERS[name]()


def write_all(directory: str | Path) -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    out = []
    for name, fn in BUILDERS.items():
        p = d / f"{name}.json"
        p.write_text(dumps(fn()))
        out.append(p)
    return out


if __name__ == "__main__":  # pragma: no cover
    import sys
    for p in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(p)
