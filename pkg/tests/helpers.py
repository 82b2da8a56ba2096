"""Small shared builders for the test suite."""
from ainfinity.algebra import AInftyAlgebra
from ainfinity.graded import GradedVectorSpace, MultilinearOp
from ainfinity.scalars import QQ


def dual_numbers_odd(field=QQ, cap=4):
    """k<x, y>/(all products of x, y), |x| = |y| = -1: a 3-dimensional
    algebra with mixed parities, a convenient base for random morphisms."""
    V = GradedVectorSpace([("1", 0), ("x", -1), ("y", -1)], field)
    m2 = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    return AInftyAlgebra(V, {2: MultilinearOp(V, V, 2, 0, m2)}, cap)


def acyclic_pair(field=QQ, cap=4):
    """1 in degree 0 plus u, v with dv = u, |u| = -1, |v| = 0; u and v
    multiply trivially with each other and with themselves."""
    V = GradedVectorSpace([("1", 0), ("u", -1), ("v", 0)], field)
    m1 = {(2,): {1: 1}}
    m2 = {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (0, 2): {2: 1}, (2, 0): {2: 1}}
    return AInftyAlgebra(V, {1: MultilinearOp(V, V, 1, -1, m1), 2: MultilinearOp(V, V, 2, 0, m2)}, cap)
