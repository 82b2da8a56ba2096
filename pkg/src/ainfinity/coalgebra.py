"""The tensor coalgebra T^c(V) truncated at a weight cap, and the perturbation
lemma on it.

Words are tuples of basis indices of V (the empty word is the unit 1).  The
coproduct is deconcatenation.  Maps between truncated coalgebras are given
wordwise; all of the maps used here never raise weight, except a lifted
coderivation with a nonzero constant term.

For an A-infinity algebra (A, m) put b_n = s m_n (s^{-1})^{xn} on V = sA and
lift b_1 and b_{>=2} to coderivations d~ and t.  A retract (p, i, h) of
(A, m_1) lifts to P, I and

    H = sum_{r+t=n-1} id^r x shs^{-1} x (s ip s^{-1})^t    on weight n.

The perturbation lemma then gives

    H_t = sum_k (-Ht)^k H,   I_t = (id - H_t D) I,   P_t = P (id - D H_t),
    d_inf = sum_k P (-tH)^k t I,

with D = d~ + t, and the transferred structure is read off the weight-one
components through m'_n = alpha_n s^{-1} (d_inf)_n s^{xn}.
"""
from __future__ import annotations

from .algebra import AInftyAlgebra, AInftyMorphism
from .graded import (
    MultilinearOp, Tensor, FunctionOp, add_into, alpha, as_graded_map, compose,
    desuspension_map, iter_tuples, suspend_map, suspension_map,
)
from .transfer import TransferResult, degree_vanishing


class UnitViolation(ValueError):
    pass


class NotWeightDecreasing(ValueError):
    pass


def _add(a, b, c=1):
    out = dict(a)
    for k, v in b.items():
        add_into(out, k, c * v)
    return out


class TruncatedTensorCoalgebra:
    def __init__(self, space, cap):
        self.space = space
        self.cap = cap
        self.field = space.field

    def words(self, weight=None, degrees=None):
        weights = range(self.cap + 1) if weight is None else [weight]
        for w in weights:
            yield from iter_tuples((self.space,) * w, degrees)

    def degree(self, word):
        return self.space.tensor_degree(word)

    def counit(self, elem):
        return elem.get((), self.field.zero)

    def coproduct(self, elem):
        acc = {}
        for w, c in elem.items():
            for k in range(len(w) + 1):
                add_into(acc, (w[:k], w[k:]), c)
        return acc

    def reduced_coproduct(self, elem):
        acc = {}
        for w, c in elem.items():
            for k in range(1, len(w)):
                add_into(acc, (w[:k], w[k:]), c)
        return acc

    def iterated_coproduct(self, word, k):
        """Delta^{(k)}: all splittings of the word into k+1 consecutive pieces."""
        return _splittings(word, k + 1, allow_empty=True)

    def reduced_iterated_coproduct(self, word, k):
        """Reduced iterate: k+1 nonempty pieces."""
        return _splittings(word, k + 1, allow_empty=False)


def _splittings(word, parts, allow_empty):
    n = len(word)
    out = []

    def rec(start, left, acc):
        if left == 1:
            if allow_empty or start < n:
                out.append(tuple(acc) + (word[start:],))
            return
        lo = start if allow_empty else start + 1
        for cut in range(lo, n + 1):
            if not allow_empty and n - cut < left - 1:
                break
            acc.append(word[start:cut])
            rec(cut, left - 1, acc)
            acc.pop()

    rec(0, parts, [])
    return out


class CoalgebraMap:
    """A linear map T^c(V) -> T^c(W), given wordwise and memoized."""

    def __init__(self, source, target, degree, fn, first=None):
        self.source = source
        self.target = target
        self.degree = degree
        self._fn = fn
        self._first = first
        self._memo = {}

    def first(self, word):
        """The weight-one part of the image of a word."""
        if self._first is not None:
            return self._first(word)
        return {w: c for w, c in self(word).items() if len(w) == 1}

    def first_apply(self, elem):
        acc = {}
        for w, c in elem.items():
            for w2, c2 in self.first(w).items():
                add_into(acc, w2, c * c2)
        return acc

    def __call__(self, word):
        r = self._memo.get(word)
        if r is None:
            r = self._fn(word)
            self._memo[word] = r
        return r

    def apply(self, elem):
        acc = {}
        for w, c in elem.items():
            for w2, c2 in self(w).items():
                add_into(acc, w2, c * c2)
        return acc

    def then(self, other):
        """other after self."""
        return CoalgebraMap(self.source, other.target, self.degree + other.degree,
                            lambda w: other.apply(self(w)))

    def __matmul__(self, other):
        return other.then(self)

    def __add__(self, other):
        return CoalgebraMap(self.source, self.target, self.degree,
                            lambda w: _add(self(w), other(w)))

    def __sub__(self, other):
        return CoalgebraMap(self.source, self.target, self.degree,
                            lambda w: _add(self(w), other(w), -1))

    def __neg__(self):
        return CoalgebraMap(self.source, self.target, self.degree,
                            lambda w: {k: -c for k, c in self(w).items()})

    def block(self, word, weight):
        return {w: c for w, c in self(word).items() if len(w) == weight}

    def difference(self, other, words):
        out = []
        for w in words:
            r = _add(self(w), other(w), -1)
            if r:
                out.append((w, r))
        return out


def identity(coalg):
    one = coalg.field.one
    return CoalgebraMap(coalg, coalg, 0, lambda w: {w: one})


def zero_map(source, target, degree):
    return CoalgebraMap(source, target, degree, lambda w: {})


def tensor_apply(F, G, elem):
    """(F x G) on an element of T x T, with the Koszul sign (-1)^{|G||left|}."""
    acc = {}
    sp = F.source.space
    for (l, r), c in elem.items():
        sign = -1 if (G.degree * sp.tensor_degree(l)) % 2 else 1
        for l2, a in F(l).items():
            for r2, b in G(r).items():
                add_into(acc, (l2, r2), sign * c * a * b)
    return acc


def lift_to_coderivation(b, coalg, b0=None):
    """The coderivation with weight-one component sum_n b_n (plus a constant
    term b0, a vector of V, if given).

    d(v_1..v_n) = sum (-1)^{|b| |v_1..v_r|} v_1..v_r b_k(v_{r+1}..v_{r+k}) v_{r+k+1}..v_n
    """
    V = coalg.space
    degs = V.degrees
    cap = coalg.cap
    deg = None
    for n, op in b.items():
        if deg is None:
            deg = op.degree
        elif op.degree != deg:
            from .graded import DegreeMismatch
            raise DegreeMismatch("components of different degrees")
        if op.space != V or op.tgt != V:
            from .graded import SpaceMismatch
            raise SpaceMismatch("b_%d does not act on V" % n)
    if deg is None:
        deg = -1
    odd = deg & 1
    b0 = b0 or {}

    def fn(word):
        acc = {}
        n = len(word)
        prefix = [0] * (n + 1)
        for r in range(n):
            prefix[r + 1] = prefix[r] + degs[word[r]]
        for r in range(n + 1):
            neg = odd and prefix[r] & 1
            pre = word[:r]
            if b0 and n + 1 <= cap:
                for j, c in b0.items():
                    add_into(acc, pre + (j,) + word[r:], -c if neg else c)
            for k, op in b.items():
                if r + k > n:
                    continue
                for out, c in op(word[r:r + k]).items():
                    add_into(acc, pre + out + word[r + k:], -c if neg else c)
        return acc

    def first(word):
        n = len(word)
        out = {}
        op = b.get(n)
        if op is not None:
            out = dict(op(word))
        if n == 0 and b0:
            for j, c in b0.items():
                add_into(out, (j,), c)
        return out

    return CoalgebraMap(coalg, coalg, deg, fn, first)


def lift_to_morphism(phi, source, target, degree=0):
    """The coalgebra map with components phi_n: V^{xn} -> W,
    F(x) = sum phi_{i_1} x ... x phi_{i_r} over splittings of the word."""
    if 0 in phi:
        raise UnitViolation("phi must vanish on the unit")
    one = source.field.one
    cap = target.cap
    comps = sorted(phi.items())

    def fn(word):
        n = len(word)
        if n == 0:
            return {(): one}
        levels = [dict() for _ in range(n + 1)]
        levels[0][()] = one
        degs = source.space.degrees
        prefix = 0
        for pos in range(n):
            cur = levels[pos]
            if cur:
                for k, op in comps:
                    if pos + k > n:
                        break
                    out = op(word[pos:pos + k])
                    if not out:
                        continue
                    neg = (op.degree * prefix) & 1
                    nxt = levels[pos + k]
                    for pre, c in cur.items():
                        if len(pre) + 1 > cap:
                            continue
                        for o, c2 in out.items():
                            add_into(nxt, pre + o, -(c * c2) if neg else c * c2)
            prefix += degs[word[pos]]
        return levels[n]

    def first(word):
        op = phi.get(len(word))
        return dict(op(word)) if op is not None else {}

    return CoalgebraMap(source, target, degree, fn, first)


def suspended_retract_maps(retract):
    """shs^{-1}, s ip s^{-1}, sps^{-1}, sis^{-1} on the suspensions."""
    A, H = retract.space, retract.H
    sA, sH = A.suspend(), H.suspend()

    def conj(f, X, Y):
        return as_graded_map(compose(suspension_map(Y), f, desuspension_map(X)))

    return {
        "h": conj(retract.h, A, A),
        "ip": conj(retract.ip(), A, A),
        "p": conj(retract.p, A, H),
        "i": conj(retract.i, H, A),
        "sA": sA, "sH": sH,
    }


def homotopy_lift(h_s, ip_s, coalg):
    """H = sum_{r+t=n-1} id^r x h x (ip)^t on each weight n."""
    cache = {}

    def fn(word):
        n = len(word)
        if n == 0:
            return {}
        op = cache.get(n)
        if op is None:
            from .graded import Identity
            terms = []
            for r in range(n):
                factors = ([Identity((coalg.space,) * r)] if r else []) + [h_s] + [ip_s] * (n - 1 - r)
                terms.append(Tensor(factors))
            op = cache[n] = terms
        acc = {}
        for t in op:
            for k, c in t(word).items():
                add_into(acc, k, c)
        return acc

    return CoalgebraMap(coalg, coalg, h_s.degree, fn)


class Perturbation:
    def __init__(self, H_t, I_t, P_t, d_inf, D):
        self.H_t = H_t
        self.I_t = I_t
        self.P_t = P_t
        self.d_inf = d_inf
        self.D = D


def perturb(P, I, H, t, dtilde):
    """Apply the perturbation lemma to the lifted retract (P, I, H) of
    (T^c(sA), dtilde) and the perturbation t."""
    big = H.source

    def check_weight(word):
        for w in t(word):
            if len(w) >= len(word):
                raise NotWeightDecreasing("t raises or keeps the weight of a word of length %d" % len(word))

    def series_right(elem):
        """sum_k (-Ht)^k elem."""
        acc = dict(elem)
        term = elem
        while term:
            for w in term:
                check_weight(w)
            term = {k: -c for k, c in H.apply(t.apply(term)).items()}
            acc = _add(acc, term)
        return acc

    def series_left(elem):
        """sum_k (-tH)^k elem."""
        acc = dict(elem)
        term = elem
        while term:
            hterm = H.apply(term)
            for w in hterm:
                check_weight(w)
            term = {k: -c for k, c in t.apply(hterm).items()}
            acc = _add(acc, term)
        return acc

    def D_first(elem):
        return _add(dtilde.first_apply(elem), t.first_apply(elem))

    D = CoalgebraMap(big, big, t.degree, lambda w: _add(dtilde(w), t(w)),
                     lambda w: _add(dtilde.first(w), t.first(w)))
    H_t = CoalgebraMap(big, big, H.degree, lambda w: series_right(H(w)))
    I_t = CoalgebraMap(I.source, big, 0, lambda w: _add(I(w), H_t.apply(D.apply(I(w))), -1))
    P_t = CoalgebraMap(
        big, P.target, 0,
        lambda w: _add(P(w), P.apply(D.apply(H_t(w))), -1),
        lambda w: _add(P.first(w), P.first_apply(D_first(H_t(w))), -1))
    d_inf = CoalgebraMap(
        I.source, P.target, t.degree,
        lambda w: P.apply(series_left(t.apply(I(w)))),
        lambda w: P.first_apply(series_left(t.apply(I(w)))))
    return Perturbation(H_t, I_t, P_t, d_inf, D)


def coalgebra_setup(alg, retract, cap):
    """Suspended lifts of the algebra and the retract."""
    A, Hsp = retract.space, retract.H
    sA, sH = A.suspend(), Hsp.suspend()
    big = TruncatedTensorCoalgebra(sA, cap)
    small = TruncatedTensorCoalgebra(sH, cap)
    b = {n: suspend_map(alg.m(n)) for n in range(1, cap + 1) if not alg.m(n).is_known_zero()}
    b1 = {1: b[1]} if 1 in b else {}
    bt = {n: op for n, op in b.items() if n >= 2}
    dtilde = lift_to_coderivation(b1, big)
    t = lift_to_coderivation(bt, big)
    maps = suspended_retract_maps(retract)
    P = lift_to_morphism({1: _unary(maps["p"])}, big, small)
    I = lift_to_morphism({1: _unary(maps["i"])}, small, big)
    H = homotopy_lift(maps["h"], maps["ip"], big)
    return big, small, dtilde, t, P, I, H


def _unary(f):
    return MultilinearOp(f.src, f.tgt, 1, f.degree, {(i,): v for i, v in f.entries.items()})


def _read_off(F, source, target, n, degree):
    """alpha_n s^{-1} F_{n -> 1} s^{xn} as a lazy MultilinearOp source^n -> target."""
    s_pow = Tensor([suspension_map(source)] * n)
    a = alpha(n)

    def fn(key):
        acc = {}
        for word, c in s_pow(key).items():
            for out, c2 in F.first(word).items():
                add_into(acc, out, a * c * c2)
        return acc

    op = FunctionOp((source,) * n, (target,), degree, fn)
    return MultilinearOp(source, target, n, degree, op=op)


def oracle_transfer(alg, retract, cap=6):
    big, small, dtilde, t, P, I, H = coalgebra_setup(alg, retract, cap)
    pert = perturb(P, I, H, t, dtilde)
    A, Hs = retract.space, retract.H
    mprime, incl, proj, vanishing = {}, {}, {}, {}
    for n in range(1, cap + 1):
        if n >= 2:
            if degree_vanishing(Hs, n, n - 2):
                vanishing[n] = "vanishes for degree reasons"
            else:
                mprime[n] = _read_off(pert.d_inf, Hs, Hs, n, n - 2).tabulated()
        incl[n] = _read_off(pert.I_t, Hs, A, n, n - 1)
        proj[n] = _read_off(pert.P_t, A, Hs, n, n - 1)
    minimal = AInftyAlgebra(Hs, mprime, cap)
    base = alg.with_cap(cap)
    return TransferResult(
        minimal=minimal,
        inclusion=AInftyMorphism(minimal, base, incl, cap),
        projection=AInftyMorphism(base, minimal, proj, cap),
        retract=retract, cap=cap, method="perturbation lemma", vanishing=vanishing,
        operators={"perturbation": pert})


def transfer_difference(a, b, cap=None):
    """Per-arity differences between two transfer results, as
    {n: {"m": [...], "i": [...], "p": [...]}} (empty lists when equal)."""
    cap = min(a.cap, b.cap) if cap is None else cap
    out = {}
    for n in range(1, cap + 1):
        out[n] = {
            "m": a.m(n).difference(b.m(n)),
            "i": a.i(n).difference(b.i(n)),
            "p": a.p(n).difference(b.p(n)),
        }
    return out
