"""Shared algebra fixtures for the test suite."""
from siltkit.fields import FieldSpec
from siltkit.algebra import path_algebra, quiver

F = FieldSpec.prime()


def linear_a2(fld=F):
    """Path algebra of 1 --a--> 2."""
    return path_algebra(quiver(["1", "2"], [("a", "1", "2")]), fld)


def linear_a3(fld=F):
    """Path algebra of 1 --a--> 2 --b--> 3 (hereditary)."""
    return path_algebra(
        quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3")]), fld)


def nine_dim(fld=F):
    """Three-vertex algebra with two parallel arrows and three zero relations."""
    q = quiver(["1", "2", "3"],
               [("al", "1", "2"), ("be", "2", "3"), ("ga", "2", "3"), ("de", "3", "1")],
               ["be*al", "al*de", "de*ga"])
    return path_algebra(q, fld)


def trunc_poly(fld=F):
    """K[x]/(x^3): one vertex, one loop, relation x*x*x."""
    q = quiver(["1"], [("x", "1", "1")], ["x*x*x"])
    return path_algebra(q, fld)
