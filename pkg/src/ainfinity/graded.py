"""Graded vector spaces, graded maps and a lazy operator algebra on tensors.

A basis tensor of V_1 x ... x V_n is a tuple of basis indices.  A tensor is a
dict {basis tuple: coefficient}.  Every operator is an Op: it takes a basis
tuple over its source slots and returns a tensor over its target slots,
memoizing the answer.  Tensor products of operators carry the Koszul sign

    (f x g)(v x w) = (-1)^{|v||g|} f(v) x g(w),

iterated from the left for more than two factors.
"""
from __future__ import annotations

from itertools import product

from .scalars import QQ


class ArityMismatch(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


class DegreeMismatch(ValueError):
    pass


class GradedVectorSpace:
    def __init__(self, basis, field=QQ):
        basis = [(str(n), int(d)) for n, d in basis]
        self.names = tuple(n for n, _ in basis)
        self.degrees = tuple(d for _, d in basis)
        self.field = field
        self._index = {n: i for i, n in enumerate(self.names)}
        if len(self._index) != len(self.names):
            raise ValueError("basis names must be unique")
        self._key = (self.names, self.degrees, field.name)
        self._suspension = None

    @property
    def dim(self):
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("unknown basis element %r" % name) from None

    def degree(self, i):
        return self.degrees[i]

    def basis_of_degree(self, d):
        return [i for i, e in enumerate(self.degrees) if e == d]

    def degree_set(self):
        return set(self.degrees)

    def tensor_degree(self, key):
        degs = self.degrees
        return sum(degs[i] for i in key)

    def with_field(self, field):
        return GradedVectorSpace(zip(self.names, self.degrees), field)

    def suspend(self):
        if self._suspension is None:
            self._suspension = GradedVectorSpace(
                [("s" + n, d + 1) for n, d in zip(self.names, self.degrees)], self.field)
        return self._suspension

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return "GradedVectorSpace(%s)" % ", ".join(
            "%s:%d" % nd for nd in zip(self.names, self.degrees))


def suspend(space):
    return space.suspend()


def alpha(n):
    """(-1)^{n(n-1)/2}."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


def add_into(acc, key, c):
    v = acc.get(key)
    s = c if v is None else v + c
    if s:
        acc[key] = s
    elif v is not None:
        del acc[key]


def _degree_sums(spaces):
    sums = {0}
    for s in spaces:
        sums = {a + d for a in sums for d in s.degree_set()}
    return sums


def iter_tuples(spaces, totals=None):
    """Basis tuples of the tensor product, optionally only those whose total
    degree lies in `totals`."""
    spaces = tuple(spaces)
    if totals is None:
        yield from product(*[range(s.dim) for s in spaces])
        return
    totals = set(totals)
    if not totals:
        return
    n = len(spaces)
    lo = [0] * (n + 1)
    hi = [0] * (n + 1)
    for k in range(n - 1, -1, -1):
        degs = spaces[k].degrees or (0,)
        lo[k] = lo[k + 1] + min(degs)
        hi[k] = hi[k + 1] + max(degs)
    tmin, tmax = min(totals), max(totals)
    prefix = []

    def rec(k, deg):
        if k == n:
            if deg in totals:
                yield tuple(prefix)
            return
        degs = spaces[k].degrees
        for i in range(len(degs)):
            d = deg + degs[i]
            if d + hi[k + 1] < tmin or d + lo[k + 1] > tmax:
                continue
            prefix.append(i)
            yield from rec(k + 1, d)
            prefix.pop()

    yield from rec(0, 0)


class Op:
    """A graded linear operator between tensor products of graded spaces."""

    def __init__(self, source, target, degree, field=None):
        self.source = tuple(source)
        self.target = tuple(target)
        self.degree = degree
        spaces = self.source + self.target
        self.field = field or (spaces[0].field if spaces else QQ)
        self._memo = {}

    def __call__(self, key):
        memo = self._memo
        r = memo.get(key)
        if r is None:
            r = self._eval(key)
            memo[key] = r
        return r

    def _eval(self, key):
        raise NotImplementedError

    def is_known_zero(self):
        return False

    def source_degree(self, key):
        return sum(s.degrees[i] for s, i in zip(self.source, key))

    def apply(self, tensor):
        acc = {}
        for k, c in tensor.items():
            for k2, c2 in self(k).items():
                add_into(acc, k2, c * c2)
        return acc

    def keys(self):
        """Source basis tuples on which the operator can be nonzero by degree."""
        outs = _degree_sums(self.target)
        return iter_tuples(self.source, {d - self.degree for d in outs})

    def table(self):
        t = {}
        for k in self.keys():
            v = self(k)
            if v:
                t[k] = v
        return t

    def difference(self, other, limit=None):
        """Basis tuples where the two operators differ, with residuals."""
        if self.source != other.source or self.target != other.target:
            raise SpaceMismatch("operators act between different spaces")
        out = []
        keys = set(self.keys())
        if other.degree != self.degree:
            keys |= set(other.keys())
        for k in sorted(keys):
            r = dict(self(k))
            for k2, c in other(k).items():
                add_into(r, k2, -c)
            if r:
                out.append((k, r))
                if limit is not None and len(out) >= limit:
                    break
        return out

    def equals(self, other):
        return not self.difference(other, limit=1)

    def is_zero(self):
        return all(not self(k) for k in self.keys())

    def __add__(self, other):
        return LinComb([(1, self), (1, other)])

    def __sub__(self, other):
        return LinComb([(1, self), (-1, other)])

    def __neg__(self):
        return LinComb([(-1, self)])

    def __rmul__(self, c):
        return LinComb([(c, self)])

    def __matmul__(self, other):
        return Composite(self, other)


class Identity(Op):
    def __init__(self, spaces, field=None):
        if isinstance(spaces, GradedVectorSpace):
            spaces = (spaces,)
        super().__init__(spaces, spaces, 0, field)
        self._one = self.field.one

    def __call__(self, key):
        return {key: self._one}


class Zero(Op):
    def __init__(self, source, target, degree):
        super().__init__(source, target, degree)

    def __call__(self, key):
        return {}

    def is_known_zero(self):
        return True


class Cached(Op):
    """Memoizing wrapper for an operator whose values are reused."""

    def __init__(self, op):
        super().__init__(op.source, op.target, op.degree, op.field)
        self.op = op

    def _eval(self, key):
        return self.op(key)


class FunctionOp(Op):
    """Wraps a python function basis tuple -> tensor."""

    def __init__(self, source, target, degree, fn):
        super().__init__(source, target, degree)
        self._fn = fn

    def _eval(self, key):
        return self._fn(key)


class LinComb(Op):
    def __init__(self, terms, source=None, target=None, degree=None):
        terms = [(c, op) for c, op in terms]
        if terms:
            op0 = terms[0][1]
            source, target, degree = op0.source, op0.target, op0.degree
        super().__init__(source, target, degree)
        F = self.field
        self.terms = []
        for c, op in terms:
            if op.source != self.source or op.target != self.target:
                raise SpaceMismatch("summands act between different spaces")
            if op.degree != self.degree:
                raise DegreeMismatch("summands of degrees %d and %d" % (self.degree, op.degree))
            c = F(c)
            if c and not op.is_known_zero():
                self.terms.append((c, op))

    def __call__(self, key):
        return self._eval(key)

    def _eval(self, key):
        acc = {}
        for c, op in self.terms:
            for k, v in op(key).items():
                add_into(acc, k, c * v)
        return acc


class Composite(Op):
    """outer after inner."""

    def __init__(self, outer, inner):
        if outer.source != inner.target:
            raise SpaceMismatch("cannot compose: %r then %r" % (inner.target, outer.source))
        super().__init__(inner.source, outer.target, outer.degree + inner.degree)
        self.outer = outer
        self.inner = inner

    def __call__(self, key):
        return self._eval(key)

    def _eval(self, key):
        acc = {}
        outer = self.outer
        for k, c in self.inner(key).items():
            for k2, c2 in outer(k).items():
                add_into(acc, k2, c * c2)
        return acc


def compose(*ops):
    """compose(f, g, h) = f after g after h."""
    out = ops[-1]
    for op in reversed(ops[:-1]):
        out = Composite(op, out)
    return out


class Tensor(Op):
    """Tensor product of operators with the Koszul sign."""

    def __init__(self, factors):
        factors = list(factors)
        source = tuple(s for f in factors for s in f.source)
        target = tuple(t for f in factors for t in f.target)
        super().__init__(source, target, sum(f.degree for f in factors))
        self.factors = factors
        self._plan = []
        a = 0
        last_odd = -1
        for k, f in enumerate(factors):
            b = a + len(f.source)
            self._plan.append((f, a, b, isinstance(f, Identity), f.degree & 1))
            if f.degree & 1:
                last_odd = k
            a = b
        self._last_odd = last_odd
        self._slotdeg = [s.degrees for s in source]

    def __call__(self, key):
        return self._eval(key)

    def _eval(self, key):
        neg = False
        prefix = 0
        sd = self._slotdeg
        last_odd = self._last_odd
        keys = [()]
        coefs = [None]
        for k, (f, a, b, ident, odd) in enumerate(self._plan):
            if odd and prefix & 1:
                neg = not neg
            chunk = key[a:b]
            if ident:
                keys = [x + chunk for x in keys]
            else:
                out = f(chunk)
                if not out:
                    return {}
                if len(out) == 1:
                    ((k2, c2),) = out.items()
                    keys = [x + k2 for x in keys]
                    coefs = [c2 if c is None else c * c2 for c in coefs]
                else:
                    nk, nc = [], []
                    for x, c in zip(keys, coefs):
                        for k2, c2 in out.items():
                            nk.append(x + k2)
                            nc.append(c2 if c is None else c * c2)
                    keys, coefs = nk, nc
            if k < last_odd:
                for p in range(a, b):
                    prefix += sd[p][key[p]]
        one = self.field.one
        acc = {}
        for x, c in zip(keys, coefs):
            if c is None:
                c = one
            add_into(acc, x, -c if neg else c)
        return acc


class Insert(Op):
    """id x op x id on the given left and right slots."""

    def __init__(self, op, left=(), right=()):
        left, right = tuple(left), tuple(right)
        super().__init__(left + op.source + right, left + op.target + right, op.degree)
        self.op = op
        self._r = len(left)
        self._s = len(op.source)
        self._odd = op.degree & 1
        self._slotdeg = [s.degrees for s in left]

    def __call__(self, key):
        return self._eval(key)

    def _eval(self, key):
        r, s = self._r, self._s
        out = self.op(key[r:r + s])
        if not out:
            return {}
        pre, post = key[:r], key[r + s:]
        neg = False
        if self._odd:
            sd = self._slotdeg
            neg = sum(sd[p][key[p]] for p in range(r)) & 1
        if neg:
            return {pre + k + post: -c for k, c in out.items()}
        return {pre + k + post: c for k, c in out.items()}


def tensor(*factors):
    return Tensor(factors)


def power(op, n):
    """op tensored with itself n times (the empty tensor is the unit)."""
    if n == 0:
        return Identity((), op.field)
    return Tensor([op] * n)


def identity_power(space, n):
    return Identity((space,) * n)


class GradedMap(Op):
    """Degree-r linear map A -> B with sparse entries {i: {j: c}}."""

    def __init__(self, source, target, degree, entries=None):
        super().__init__((source,), (target,), degree)
        self.src = source
        self.tgt = target
        F = self.field
        clean = {}
        for i, vec in (entries or {}).items():
            row = {}
            for j, c in vec.items():
                c = F(c)
                if not c:
                    continue
                if target.degrees[j] != source.degrees[i] + degree:
                    raise DegreeMismatch(
                        "%s (degree %d) cannot map to %s (degree %d) under a degree %d map"
                        % (source.names[i], source.degrees[i], target.names[j], target.degrees[j], degree))
                row[j] = c
            if row:
                clean[i] = row
        self.entries = clean
        self._out = {i: {(j,): c for j, c in row.items()} for i, row in clean.items()}

    def __call__(self, key):
        return self._out.get(key[0], {})

    def vector(self, i):
        return self.entries.get(i, {})

    def apply_vector(self, vec):
        acc = {}
        for i, c in vec.items():
            for j, v in self.entries.get(i, {}).items():
                add_into(acc, j, c * v)
        return acc

    def matrix(self):
        from .scalars import SparseMatrix
        e = {(j, i): c for i, row in self.entries.items() for j, c in row.items()}
        return SparseMatrix(self.tgt.dim, self.src.dim, e, self.field)

    def then(self, other):
        """other after self, as a GradedMap."""
        return as_graded_map(Composite(other, self))

    def __eq__(self, other):
        return (isinstance(other, GradedMap) and self.src == other.src and self.tgt == other.tgt
                and self.degree == other.degree and self.entries == other.entries)

    __hash__ = Op.__hash__

    def __repr__(self):
        return "GradedMap(%r -> %r, degree %d, %r)" % (self.src.names, self.tgt.names,
                                                      self.degree, self.entries)


def as_graded_map(op):
    """Tabulate a one-slot operator into a GradedMap."""
    if len(op.source) != 1 or len(op.target) != 1:
        raise ArityMismatch("need a map between single spaces")
    src, tgt = op.source[0], op.target[0]
    entries = {}
    for i in range(src.dim):
        out = op((i,))
        if out:
            entries[i] = {k[0]: c for k, c in out.items()}
    return GradedMap(src, tgt, op.degree, entries)


def identity_map(space):
    return GradedMap(space, space, 0, {i: {i: 1} for i in range(space.dim)})


def zero_map(source, target, degree):
    return GradedMap(source, target, degree, {})


class MultilinearOp(Op):
    """An n-ary operation A^{xn} -> B of a fixed degree.

    Either given by a table {basis tuple: {j: c}} or computed lazily from a
    tensor-valued operator `op` with one target slot.
    """

    def __init__(self, source, target, arity, degree, table=None, op=None):
        super().__init__((source,) * arity, (target,), degree)
        self.space = source
        self.tgt = target
        self.arity = arity
        self._op = op
        if op is not None:
            if op.source != self.source or op.target != self.target or op.degree != degree:
                raise SpaceMismatch("backing operator has the wrong shape")
            self._table = None
            return
        F = self.field
        clean = {}
        for key, vec in (table or {}).items():
            key = tuple(key)
            if len(key) != arity:
                raise ArityMismatch("entry %r has arity %d, expected %d" % (key, len(key), arity))
            d_in = source.tensor_degree(key)
            row = {}
            for j, c in vec.items():
                c = F(c)
                if not c:
                    continue
                if target.degrees[j] != d_in + degree:
                    raise DegreeMismatch(
                        "m%d(%s) -> %s violates degree %d"
                        % (arity, ",".join(source.names[i] for i in key), target.names[j], degree))
                row[j] = c
            if row:
                clean[key] = row
        self._table = clean

    def _eval(self, key):
        if self._op is not None:
            return self._op(key)
        row = self._table.get(key)
        if not row:
            return {}
        return {(j,): c for j, c in row.items()}

    def is_known_zero(self):
        return self._table is not None and not self._table

    def value(self, key):
        """Output as a vector {j: c}."""
        return {k[0]: c for k, c in self(key).items()}

    def structure_constants(self):
        if self._table is not None:
            return self._table
        self._table = {k: {kk[0]: c for kk, c in v.items()} for k, v in self.table().items()}
        self._op = None
        return self._table

    def tabulated(self):
        return MultilinearOp(self.space, self.tgt, self.arity, self.degree,
                             self.structure_constants())

    def __repr__(self):
        return "MultilinearOp(arity %d, degree %d, %d entries)" % (
            self.arity, self.degree, len(self.structure_constants()))


def as_multilinear(op, arity=None):
    if len(op.target) != 1:
        raise ArityMismatch("need one target slot")
    arity = len(op.source) if arity is None else arity
    src = op.source[0] if op.source else op.target[0]
    return MultilinearOp(src, op.target[0], arity, op.degree, op=op)


def zero_multilinear(source, target, arity, degree):
    return MultilinearOp(source, target, arity, degree, {})


def koszul_tensor_apply(maps, element):
    """Apply f_1 x ... x f_k to a basis tensor (tuple) or a tensor (dict)."""
    if isinstance(element, tuple):
        if len(element) != len(maps):
            raise ArityMismatch("%d maps for a tensor of length %d" % (len(maps), len(element)))
        return Tensor(maps)(element)
    return Tensor(maps).apply(element)


def koszul_compose_tensors(outer, inner):
    """(f_1 x ... x f_k) after (g_1 x ... x g_k) = sign * (f_1 g_1 x ... x f_k g_k).

    sign = (-1)^{sum_{a<b} |f_b||g_a|}.
    """
    if len(outer) != len(inner):
        raise ArityMismatch("tensor factors do not line up")
    e = 0
    for b, f in enumerate(outer):
        for g in inner[:b]:
            e += f.degree * g.degree
    sign = -1 if e % 2 else 1
    return sign, [Composite(f, g) for f, g in zip(outer, inner)]


def suspension_map(space):
    """s: A -> sA of degree +1."""
    sA = space.suspend()
    return GradedMap(space, sA, 1, {i: {i: 1} for i in range(space.dim)})


def desuspension_map(space):
    """s^{-1}: sA -> A of degree -1."""
    sA = space.suspend()
    return GradedMap(sA, space, -1, {i: {i: 1} for i in range(space.dim)})


def suspend_map(m):
    """b_n = s m_n (s^{-1})^{xn}, acting on sA."""
    n = m.arity
    s_out = suspension_map(m.tgt)
    desusp = desuspension_map(m.space)
    op = compose(s_out, m, power(desusp, n))
    b = MultilinearOp(m.space.suspend(), m.tgt.suspend(), n, m.degree - n + 1, op=op)
    return b.tabulated()


def unsuspend_map(b, source, target=None):
    """m_n = alpha_n s^{-1} b_n s^{xn}, where b acts on the suspensions of
    `source` and `target`."""
    target = source if target is None else target
    n = b.arity
    if b.space != source.suspend() or b.tgt != target.suspend():
        raise SpaceMismatch("b does not act on the suspended spaces")
    op = alpha(n) * compose(desuspension_map(target), b, power(suspension_map(source), n))
    return MultilinearOp(source, target, n, b.degree + n - 1, op=op).tabulated()
