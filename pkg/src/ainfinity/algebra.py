"""A-infinity algebras and morphisms with exact checks.

Conventions: m_n has degree n-2 and

    sum_{r+s+t=n} (-1)^{rs+t} m_{r+t+1}(id^r x m_s x id^t) = 0.

A morphism f: (A, m) -> (B, m') has components f_n of degree n-1 and satisfies

    sum (-1)^{rs+t} f_{r+t+1}(id^r x m_s x id^t)
        = sum_{i_1+...+i_r=n} (-1)^{l(i_1..i_r)} m'_r(f_{i_1} x ... x f_{i_r})

with l = sum_{j<k} (i_k - 1) i_j.  Tensors of maps act with Koszul signs.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations

from .graded import (
    Composite, FunctionOp, GradedMap, Insert, LinComb, MultilinearOp, Op, SpaceMismatch, add_into,
    as_graded_map, power, zero_multilinear,
)
from .scalars import inverse as matrix_inverse

MAX_VIOLATIONS = 10


class NotInvertible(ValueError):
    pass


@dataclass
class CheckResult:
    name: str
    arity: int
    ok: bool
    violations: list = dc_field(default_factory=list)
    checked: int = 0

    def __bool__(self):
        return self.ok


def sign_l(parts):
    e = 0
    for k in range(len(parts)):
        for j in range(k):
            e += (parts[k] - 1) * parts[j]
    return -1 if e % 2 else 1


@lru_cache(maxsize=None)
def compositions(n):
    """Ordered tuples of positive integers summing to n."""
    if n == 0:
        return ((),)
    out = []
    for first in range(1, n + 1):
        for rest in compositions(n - first):
            out.append((first,) + rest)
    return tuple(out)


class AInftyAlgebra:
    def __init__(self, space, ops=None, cap=6):
        self.space = space
        self.cap = cap
        self.field = space.field
        self._ops = {}
        for n, m in (ops or {}).items():
            if not isinstance(m, MultilinearOp):
                m = MultilinearOp(space, space, n, n - 2, m)
            if m.arity != n or m.degree != n - 2:
                raise ValueError("m%d must have arity %d and degree %d" % (n, n, n - 2))
            if m.space != space or m.tgt != space:
                raise SpaceMismatch("m%d does not act on the algebra's space" % n)
            self._ops[n] = m
        self._zeros = {}

    def m(self, n):
        if n in self._ops:
            return self._ops[n]
        if n not in self._zeros:
            self._zeros[n] = zero_multilinear(self.space, self.space, n, n - 2)
        return self._zeros[n]

    def arities(self):
        return sorted(n for n, m in self._ops.items() if m.structure_constants())

    def differential(self):
        return as_graded_map(self.m(1))

    def is_dga(self):
        return all(n <= 2 for n in self.arities())

    def with_cap(self, cap):
        return AInftyAlgebra(self.space, self._ops, cap)

    def tables(self):
        return {n: self._ops[n].structure_constants() for n in self.arities()}

    def __repr__(self):
        return "AInftyAlgebra(dim %d, arities %s, cap %d)" % (self.space.dim, self.arities(), self.cap)


def dg_algebra(space, d=None, product=None, cap=6):
    """A dg-algebra as an A-infinity algebra with m_1 = d, m_2 = product."""
    ops = {}
    if d is not None:
        ops[1] = d if isinstance(d, MultilinearOp) else MultilinearOp(space, space, 1, -1, d)
    if product is not None:
        ops[2] = product
    return AInftyAlgebra(space, ops, cap)


class AInftyMorphism:
    def __init__(self, source, target, components=None, cap=None):
        self.source = source
        self.target = target
        self.cap = min(source.cap, target.cap) if cap is None else cap
        self._f = {}
        A, B = source.space, target.space
        for n, f in (components or {}).items():
            if isinstance(f, GradedMap):
                if f.src != A or f.tgt != B:
                    raise SpaceMismatch("f%d does not map the source space to the target space" % n)
                f = MultilinearOp(A, B, 1, f.degree, {(i,): v for i, v in f.entries.items()})
            elif not isinstance(f, MultilinearOp):
                f = MultilinearOp(A, B, n, n - 1, f)
            if f.space != A or f.tgt != B:
                raise SpaceMismatch("f%d does not map the source space to the target space" % n)
            if f.arity != n or f.degree != n - 1:
                raise ValueError("f%d must have arity %d and degree %d" % (n, n, n - 1))
            self._f[n] = f
        self._zeros = {}

    def f(self, n):
        if n in self._f:
            return self._f[n]
        if n not in self._zeros:
            self._zeros[n] = zero_multilinear(self.source.space, self.target.space, n, n - 1)
        return self._zeros[n]

    def first(self):
        return as_graded_map(self.f(1))

    def components(self):
        return dict(self._f)

    def __repr__(self):
        return "AInftyMorphism(dim %d -> dim %d, cap %d)" % (
            self.source.space.dim, self.target.space.dim, self.cap)


def identity_morphism(alg, cap=None):
    A = alg.space
    one = MultilinearOp(A, A, 1, 0, {(i,): {i: 1} for i in range(A.dim)})
    return AInftyMorphism(alg, alg, {1: one}, alg.cap if cap is None else cap)


def strict_morphism(source, target, f, cap=None):
    return AInftyMorphism(source, target, {1: f}, cap)


class PartitionSum(Op):
    """sum over i_1+...+i_r = n of (-1)^{l(i_1..i_r)} outer(r)(inner(i_1) x ... x inner(i_r)).

    Since l = sum_k (i_k - 1)(i_1 + ... + i_{k-1}), the sign is accumulated
    part by part, and partial tensors with equal prefixes are shared.
    `keep(r)` selects which numbers of parts contribute.
    """

    def __init__(self, inner, outer, n, source, mid, target, degree, keep=None):
        super().__init__((source,) * n, (target,), degree)
        self.inner = inner
        self.outer = outer
        self.n = n
        self.keep = keep
        self._mid = mid

    def _eval(self, key):
        n = self.n
        degs = self.source[0].degrees
        one = self.field.one
        levels = [dict() for _ in range(n + 1)]
        levels[0][()] = one
        prefix = 0
        for pos in range(n):
            cur = levels[pos]
            if cur:
                for i in range(1, n - pos + 1):
                    f = self.inner(i)
                    out = f(key[pos:pos + i])
                    if not out:
                        continue
                    neg = ((i - 1) * pos + f.degree * prefix) & 1
                    nxt = levels[pos + i]
                    for pre, c in cur.items():
                        for k2, c2 in out.items():
                            add_into(nxt, pre + k2, -(c * c2) if neg else c * c2)
            prefix += degs[key[pos]]
        acc = {}
        for mid, c in levels[n].items():
            r = len(mid)
            if self.keep is not None and not self.keep(r):
                continue
            for k, c2 in self.outer(r)(mid).items():
                add_into(acc, k, c * c2)
        return acc


def insertion(space, op, r, t):
    """id^r x op x id^t."""
    return Insert(op, (space,) * r, (space,) * t)


def associativity_op(alg, n):
    """The left-hand side of the arity-n higher associativity relation."""
    A = alg.space
    terms = []
    for s in range(1, n + 1):
        for r in range(n - s + 1):
            t = n - s - r
            outer, inner = alg.m(r + t + 1), alg.m(s)
            if outer.is_known_zero() or inner.is_known_zero():
                continue
            sign = -1 if (r * s + t) % 2 else 1
            terms.append((sign, Composite(outer, insertion(A, inner, r, t))))
    return LinComb(terms, (A,) * n, (A,), n - 3)


def check_higher_associativity(alg, n):
    op = associativity_op(alg, n)
    bad = []
    count = 0
    for k in op.keys():
        count += 1
        v = op(k)
        if v:
            bad.append((k, v))
            if len(bad) >= MAX_VIOLATIONS:
                break
    return CheckResult("higher associativity", n, not bad, bad, count)


def check_algebra(alg, cap=None):
    cap = alg.cap if cap is None else cap
    return [check_higher_associativity(alg, n) for n in range(1, cap + 1)]


def morphism_sides(f, n):
    A = f.source.space
    m = f.source
    lhs = []
    for s in range(1, n + 1):
        for r in range(n - s + 1):
            t = n - s - r
            outer, inner = f.f(r + t + 1), m.m(s)
            if outer.is_known_zero() or inner.is_known_zero():
                continue
            sign = -1 if (r * s + t) % 2 else 1
            lhs.append((sign, Composite(outer, insertion(A, inner, r, t))))
    rhs = PartitionSum(f.f, f.target.m, n, A, f.target.space, f.target.space, n - 2)
    return LinComb(lhs, (A,) * n, (f.target.space,), n - 2), rhs


def check_morphism(f, n):
    if f.f(1).space != f.source.space or f.f(1).tgt != f.target.space:
        raise SpaceMismatch("morphism components do not connect source to target")
    lhs, rhs = morphism_sides(f, n)
    diff = lhs.difference(rhs, limit=MAX_VIOLATIONS)
    return CheckResult("morphism relation", n, not diff, diff,
                       sum(1 for _ in lhs.keys()))


def check_morphism_upto(f, cap=None):
    cap = f.cap if cap is None else cap
    return [check_morphism(f, n) for n in range(1, cap + 1)]


def _composite_component(g, f, n):
    op = PartitionSum(f.f, g.f, n, f.source.space, f.target.space, g.target.space, n - 1)
    return MultilinearOp(f.source.space, g.target.space, n, n - 1, op=op)


def compose(f, g, cap=None):
    """g after f, for f: A -> A' and g: A' -> A''."""
    if f.target.space != g.source.space:
        raise SpaceMismatch("middle algebras differ")
    cap = min(f.cap, g.cap) if cap is None else cap
    comps = {n: _composite_component(g, f, n) for n in range(1, cap + 1)}
    return AInftyMorphism(f.source, g.target, comps, cap)


def morphisms_equal(f, g, cap=None):
    cap = min(f.cap, g.cap) if cap is None else cap
    return all(f.f(n).equals(g.f(n)) for n in range(1, cap + 1))


def invert_graded_map(f):
    if f.src.dim != f.tgt.dim:
        raise NotInvertible("source and target dimensions differ")
    try:
        Minv = matrix_inverse(f.matrix())
    except ValueError:
        raise NotInvertible("first component is singular") from None
    entries = {}
    for (r, c), v in Minv.entries.items():
        entries.setdefault(c, {})[r] = v
    return GradedMap(f.tgt, f.src, -f.degree, entries)


def invert(f, cap=None):
    """The two-sided inverse g of f.

    g_1 = f_1^{-1} and, for n > 1,
    g_n = -f_1^{-1} sum_{r > 1} (-1)^l f_r(g_{i_1} x ... x g_{i_r}),
    which is exactly the condition (f o g)_n = 0.
    """
    cap = f.cap if cap is None else cap
    g1 = invert_graded_map(f.first())
    B, A = f.target.space, f.source.space
    g = {1: MultilinearOp(B, A, 1, 0, {(i,): v for i, v in g1.entries.items()})}
    inv1 = g[1]
    for n in range(2, cap + 1):
        # only r > 1 contributes, so the not yet known g_n never enters
        rest = PartitionSum(lambda k: g.get(k) or zero_multilinear(B, A, k, k - 1), f.f, n,
                            B, A, B, n - 1, keep=lambda r: r > 1)
        op = -1 * Composite(inv1, rest)
        g[n] = MultilinearOp(B, A, n, n - 1, op=op).tabulated()
    return AInftyMorphism(f.target, f.source, g, cap)


def transport(alg, components, target_space=None, cap=None):
    """Push the structure of `alg` forward along a family f with f_1 invertible.

    Returns (alg', f) where alg' is the unique structure on the target space
    making f an A-infinity morphism alg -> alg'.
    """
    cap = alg.cap if cap is None else cap
    A = alg.space
    B = A if target_space is None else target_space
    fs = {}
    for n, c in components.items():
        if n > cap:
            continue
        if isinstance(c, GradedMap):
            c = MultilinearOp(A, B, 1, 0, {(i,): v for i, v in c.entries.items()})
        elif not isinstance(c, MultilinearOp):
            c = MultilinearOp(A, B, n, n - 1, c)
        fs[n] = c
    placeholder = AInftyAlgebra(B, {}, cap)
    f = AInftyMorphism(alg, placeholder, fs, cap)
    finv = invert_graded_map(f.first())
    finv_op = MultilinearOp(B, A, 1, 0, {(i,): v for i, v in finv.entries.items()})
    mprime = {}
    target = AInftyAlgebra(B, {}, cap)
    for n in range(1, cap + 1):
        f = AInftyMorphism(alg, target, fs, cap)
        lhs, _ = morphism_sides(f, n)
        rest = PartitionSum(f.f, target.m, n, A, B, B, n - 2, keep=lambda r, n=n: r < n)
        op = Composite(lhs - rest, power(finv_op, n))
        mprime[n] = MultilinearOp(B, B, n, n - 2, op=op).tabulated()
        target = AInftyAlgebra(B, mprime, cap)
    return target, AInftyMorphism(alg, target, fs, cap)


# shuffles ---------------------------------------------------------------

@lru_cache(maxsize=None)
def shuffles(p, q):
    """(p,q)-shuffles as tuples sigma with sigma[k] = image of k."""
    n = p + q
    out = []
    for first in combinations(range(n), p):
        rest = [k for k in range(n) if k not in first]
        out.append(tuple(first) + tuple(rest))
    return tuple(out)


def shuffle_sign(sigma, degrees):
    """sgn(sigma) * eps(sigma; x): each inverted pair contributes
    (-1)^{1 + |x_k||x_l|}."""
    e = 0
    n = len(sigma)
    for k in range(n):
        for l in range(k + 1, n):
            if sigma[k] > sigma[l]:
                e += 1 + degrees[k] * degrees[l]
    return -1 if e % 2 else 1


def shuffle_product(p, q, space):
    n = p + q
    sh = shuffles(p, q)
    F = space.field
    degs = space.degrees

    def fn(key):
        acc = {}
        for sigma in sh:
            out = [None] * n
            for k in range(n):
                out[sigma[k]] = key[k]
            add_into(acc, tuple(out), F(shuffle_sign(sigma, [degs[i] for i in key])))
        return acc

    return FunctionOp((space,) * n, (space,) * n, 0, fn)


def check_balanced(obj, n):
    if isinstance(obj, AInftyMorphism):
        op, space = obj.f(n), obj.source.space
    else:
        op, space = obj.m(n), obj.space
    bad = []
    count = 0
    for p in range(1, n):
        comp = Composite(op, shuffle_product(p, n - p, space))
        for k in comp.keys():
            count += 1
            v = comp(k)
            if v:
                bad.append(((p, n - p), k, v))
                if len(bad) >= MAX_VIOLATIONS:
                    return CheckResult("balanced", n, False, bad, count)
    return CheckResult("balanced", n, not bad, bad, count)
