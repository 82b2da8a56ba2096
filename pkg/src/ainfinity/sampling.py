"""Seeded random data for property runs: graded maps, multilinear
operations, invertible degree-0 maps and random A-infinity morphisms.

All sampling goes through a random.Random instance, so a seed fixes the
output completely.
"""
from __future__ import annotations

import random

from .algebra import transport
from .graded import GradedMap, MultilinearOp, iter_tuples
from .scalars import SparseMatrix, rank


def make_rng(seed=None):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_scalar(rng, field, bound=2, nonzero=False):
    while True:
        c = field(rng.randint(-bound, bound))
        if c or not nonzero:
            return c


def random_graded_map(rng, source, target, degree, density=0.6, bound=2):
    entries = {}
    for i in range(source.dim):
        for j in target.basis_of_degree(source.degrees[i] + degree):
            if rng.random() < density:
                c = random_scalar(rng, source.field, bound)
                if c:
                    entries.setdefault(i, {})[j] = c
    return GradedMap(source, target, degree, entries)


def random_multilinear(rng, source, target, arity, degree, density=0.5, bound=2):
    table = {}
    totals = {d - degree for d in target.degree_set()}
    for key in iter_tuples((source,) * arity, totals):
        out_deg = source.tensor_degree(key) + degree
        for j in target.basis_of_degree(out_deg):
            if rng.random() < density:
                c = random_scalar(rng, source.field, bound)
                if c:
                    table.setdefault(key, {})[j] = c
    return MultilinearOp(source, target, arity, degree, table)


def random_invertible_map(rng, space, target=None, bound=2):
    """A random degree-0 isomorphism space -> target (same degree profile)."""
    target = space if target is None else target
    F = space.field
    entries = {}
    for d in sorted(space.degree_set()):
        src = space.basis_of_degree(d)
        tgt = target.basis_of_degree(d)
        if len(src) != len(tgt):
            raise ValueError("degree %d has different dimensions" % d)
        k = len(src)
        while True:
            rows = [[random_scalar(rng, F, bound) for _ in range(k)] for _ in range(k)]
            if rank(SparseMatrix.from_rows(rows, F)) == k:
                break
        for c, i in enumerate(src):
            for r, j in enumerate(tgt):
                if rows[r][c]:
                    entries.setdefault(i, {})[j] = rows[r][c]
    return GradedMap(space, target, 0, entries)


def random_gauge(rng, space, cap, first=None, density=0.5, bound=2):
    """Components {1: f_1, n: random degree n-1 map} for n <= cap."""
    f1 = random_invertible_map(rng, space, bound=bound) if first is None else first
    comps = {1: f1}
    for n in range(2, cap + 1):
        comps[n] = random_multilinear(rng, space, space, n, n - 1, density, bound)
    return comps


def random_morphism(rng, alg, cap=None, density=0.5, bound=2):
    """A valid A-infinity morphism out of `alg` with a random invertible f_1
    and random higher components; the target structure is transported so
    that the morphism relations hold exactly."""
    cap = alg.cap if cap is None else cap
    comps = random_gauge(rng, alg.space, cap, density=density, bound=bound)
    target, f = transport(alg, comps, cap=cap)
    return f


def random_chain(rng, alg, length, cap=None, density=0.5, bound=2):
    """`length` composable random morphisms starting at `alg`."""
    out = []
    src = alg
    for _ in range(length):
        f = random_morphism(rng, src, cap, density, bound)
        out.append(f)
        src = f.target
    return out


def random_order(rng, n):
    order = list(range(n))
    rng.shuffle(order)
    return order
