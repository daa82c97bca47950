"""Small presentations and sampling helpers shared by the tests."""
from hullcoh.hull import GroupElement, HullPresentation, RationalModule
from hullcoh.qkernel import QMatrix
from hullcoh.simpclass import random_word

E = QMatrix.unit
I2 = QMatrix.identity(2)


def line_group():
    """Gamma = Z inside the unipotent 2x2 matrices."""
    X = E(2, 0, 1)
    return HullPresentation(2, (X,), (), (("g", GroupElement(I2, I2 + X, QMatrix.identity(1))),),
                            1, None, ("x",), "line")


def heisenberg_std():
    """Heisenberg acting on its defining 3-dimensional module."""
    X, Y, Z = E(3, 0, 1), E(3, 1, 2), E(3, 0, 2)
    I3 = QMatrix.identity(3)
    mod = RationalModule(3, (), (X, Y, Z))
    gens = (("a", GroupElement(I3, I3 + X, I3)), ("b", GroupElement(I3, I3 + Y, I3)))
    return HullPresentation(3, (X, Y, Z), (), gens, 3, mod, ("x", "y", "z"), "heis_std")


def random_elems(h, rng, count, max_len=5):
    names = [nm for nm, _ in h.gamma_generators]
    return tuple(h.word(random_word(rng, names, max_len)) for _ in range(count))
