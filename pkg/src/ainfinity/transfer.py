"""Homotopy transfer of A-infinity structures along a deformation retract.

Operator families on tensor powers of A (all lazily evaluated):

    h_n   = sum_{r+t=n-1} id^r x h x (ip)^t
    nu_n  = sum_{r+t=n-2} (-1)^t id^r x nu x id^t
    d_n   = (-1)^{n-1} sum_{r+t=n-1} id^r x d x id^t
    m_j^n = sum_{r+j+t=n} (-1)^{rj+t} id^r x m_j x id^t

For a dg-algebra the transferred operations are m'_n = p lambda_n i^{xn}, with

    lambda_2 = nu,   lambda_n = sum_{k+l=n} (-1)^{k(l+1)} nu(h lambda_k x h lambda_l)

and the convention h lambda_1 = -id.  For a general A-infinity algebra

    chi_2 = m_2,  chi_n = m_n + sum_{j=1}^{n-2} (-1)^{n-j} chi_{n-j} h_{n-j} m_{j+1}^n

and m'_n = p chi_n i^{xn}.  The inclusion is i_n = -h lambda_n i^{xn} (resp.
-h chi_n i^{xn}) and the projection is p_n = (-1)^n sum_j p_j m_{n-j+1}^n h_n.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import (
    AInftyAlgebra, AInftyMorphism, check_higher_associativity, insertion,
)
from .graded import (
    Cached, Composite, Identity, LinComb, MultilinearOp, Op, Tensor, iter_tuples, power,
)


class NotADgAlgebra(ValueError):
    pass


class RetractMismatch(ValueError):
    pass


class FormalSymbolApplied(RuntimeError):
    pass


class _FormalLambda1(Op):
    """lambda_1 = -h^{-1} only makes sense inside h lambda_1 = -id."""

    def __init__(self, space):
        super().__init__((space,), (space,), -1)

    def __call__(self, key):
        raise FormalSymbolApplied("lambda_1 is formal; only h lambda_1 = -id may be evaluated")


@dataclass
class TransferResult:
    minimal: AInftyAlgebra
    inclusion: AInftyMorphism
    projection: AInftyMorphism
    retract: object
    cap: int
    method: str
    vanishing: dict = dc_field(default_factory=dict)
    operators: dict = dc_field(default_factory=dict)

    def m(self, n):
        return self.minimal.m(n)

    def i(self, n):
        return self.inclusion.f(n)

    def p(self, n):
        return self.projection.f(n)


class Families:
    """Cached operator families for one algebra and one retract."""

    def __init__(self, alg, retract):
        if alg.space != retract.space:
            raise RetractMismatch("retract is over a different space")
        d = alg.differential()
        if d.entries != retract.d.entries:
            raise RetractMismatch("retract differential differs from m_1")
        self.alg = alg
        self.r = retract
        self.A = retract.space
        self.ip = retract.ip()
        self._h = {}
        self._nu = {}
        self._d = {}
        self._m = {}
        self._lam = {}
        self._chi = {}

    @property
    def nu(self):
        return self.alg.m(2)

    def h_n(self, n):
        if n not in self._h:
            A, h, ip = self.A, self.r.h, self.ip
            terms = []
            for r in range(n):
                t = n - 1 - r
                factors = ([Identity((A,) * r)] if r else []) + [h] + [ip] * t
                terms.append((1, Tensor(factors)))
            self._h[n] = Cached(LinComb(terms))
        return self._h[n]

    def nu_n(self, n):
        if n not in self._nu:
            terms = []
            for r in range(n - 1):
                t = n - 2 - r
                terms.append((-1 if t % 2 else 1, insertion(self.A, self.nu, r, t)))
            self._nu[n] = LinComb(terms)
        return self._nu[n]

    def d_n(self, n):
        if n not in self._d:
            sign = -1 if (n - 1) % 2 else 1
            d = self.alg.m(1)
            self._d[n] = LinComb([(sign, insertion(self.A, d, r, n - 1 - r)) for r in range(n)])
        return self._d[n]

    def m_jn(self, j, n):
        if (j, n) not in self._m:
            terms = []
            for r in range(n - j + 1):
                t = n - j - r
                terms.append((-1 if (r * j + t) % 2 else 1, insertion(self.A, self.alg.m(j), r, t)))
            self._m[(j, n)] = LinComb(terms)
        return self._m[(j, n)]

    def hlambda(self, k):
        if k == 1:
            return -1 * Identity(self.A)
        return Composite(self.r.h, self.lam(k))

    def lam(self, n):
        if n == 1:
            return _FormalLambda1(self.A)
        if n not in self._lam:
            if n == 2:
                self._lam[n] = self.nu
            else:
                terms = []
                for k in range(1, n):
                    l = n - k
                    sign = -1 if (k * (l + 1)) % 2 else 1
                    terms.append((sign, Composite(self.nu, Tensor([self.hlambda(k), self.hlambda(l)]))))
                self._lam[n] = Cached(LinComb(terms))
        return self._lam[n]

    def chi_dga(self, n):
        key = ("dga", n)
        if key not in self._chi:
            if n == 2:
                self._chi[key] = self.nu
            else:
                sign = -1 if (n - 1) % 2 else 1
                self._chi[key] = Cached(sign * Composite(self.chi_dga(n - 1), Composite(self.h_n(n - 1), self.nu_n(n))))
        return self._chi[key]

    def chi(self, n):
        if n not in self._chi:
            if n == 2:
                self._chi[n] = self.alg.m(2)
            else:
                terms = [(1, self.alg.m(n))]
                for j in range(1, n - 1):
                    sign = -1 if (n - j) % 2 else 1
                    terms.append((sign, Composite(self.chi(n - j),
                                                  Composite(self.h_n(n - j), self.m_jn(j + 1, n)))))
                self._chi[n] = Cached(LinComb(terms))
        return self._chi[n]

    def phi(self, n):
        """sum_{j+l+k=n, 2<=l<=n-1} (-1)^{jl+k} lambda_{j+k+1}(id^j x lambda_l x id^k)."""
        terms = []
        for l in range(2, n):
            for j in range(n - l + 1):
                k = n - l - j
                sign = -1 if (j * l + k) % 2 else 1
                terms.append((sign, Composite(self.lam(j + k + 1), insertion(self.A, self.lam(l), j, k))))
        return LinComb(terms)


def lambda_op(n, retract, nu):
    """lambda_n for the dg-algebra with differential retract.d and product nu."""
    from .algebra import dg_algebra
    alg = dg_algebra(retract.space, _as_m1(retract), nu)
    return Families(alg, retract).lam(n)


def chi_dga(n, retract, nu):
    from .algebra import dg_algebra
    alg = dg_algebra(retract.space, _as_m1(retract), nu)
    return Families(alg, retract).chi_dga(n)


def phi_residual(n, retract, nu):
    from .algebra import dg_algebra
    alg = dg_algebra(retract.space, _as_m1(retract), nu)
    return Families(alg, retract).phi(n)


def _as_m1(retract):
    A = retract.space
    return MultilinearOp(A, A, 1, -1, {(i,): v for i, v in retract.d.entries.items()})


def degree_vanishing(space, n, degree):
    """True when no arity-n basis tensor can map into `space` under a degree
    `degree` operation."""
    totals = {d - degree for d in space.degree_set()}
    return next(iter(iter_tuples((space,) * n, totals)), None) is None


def _assemble(fam, cap, core, method):
    r = fam.r
    A, H = r.space, r.H
    i_op, p_op = r.i, r.p
    mprime, incl, proj, vanishing = {}, {}, {}, {}
    incl[1] = MultilinearOp(H, A, 1, 0, {(k,): v for k, v in r.i.entries.items()})
    proj[1] = MultilinearOp(A, H, 1, 0, {(k,): v for k, v in r.p.entries.items()})
    for n in range(2, cap + 1):
        ins = power(i_op, n)
        if degree_vanishing(H, n, n - 2):
            vanishing[n] = "vanishes for degree reasons"
        else:
            mprime[n] = MultilinearOp(H, H, n, n - 2, op=Composite(p_op, Composite(core(n), ins))).tabulated()
        incl[n] = MultilinearOp(H, A, n, n - 1, op=-1 * Composite(r.h, Composite(core(n), ins)))
        terms = []
        for j in range(1, n):
            terms.append((1, Composite(proj[j], Composite(fam.m_jn(n - j + 1, n), fam.h_n(n)))))
        sign = -1 if n % 2 else 1
        proj[n] = MultilinearOp(A, H, n, n - 1, op=sign * LinComb(terms))
    minimal = AInftyAlgebra(H, mprime, cap)
    operators = {n: core(n) for n in range(2, cap + 1)}
    return TransferResult(
        minimal=minimal,
        inclusion=AInftyMorphism(minimal, fam.alg.with_cap(cap), incl, cap),
        projection=AInftyMorphism(fam.alg.with_cap(cap), minimal, proj, cap),
        retract=r, cap=cap, method=method, vanishing=vanishing, operators=operators)


def transfer_dga(alg, retract, cap=6):
    if not alg.is_dga():
        raise NotADgAlgebra("operations of arity >= 3 are present")
    for n in (1, 2, 3):
        if not check_higher_associativity(alg, n):
            raise NotADgAlgebra("d is not a derivation or the product is not associative")
    fam = Families(alg, retract)
    return _assemble(fam, cap, fam.lam, "lambda")


def transfer_ainfty(alg, retract, cap=6):
    if not retract.verify():
        from .retract import NotARetract
        raise NotARetract("retract fails its invariants")
    fam = Families(alg, retract)
    return _assemble(fam, cap, fam.chi, "chi")


def transfer(alg, retract, cap=6):
    """transfer_dga for dg-algebras, transfer_ainfty otherwise."""
    if alg.is_dga():
        return transfer_dga(alg, retract, cap)
    return transfer_ainfty(alg, retract, cap)
