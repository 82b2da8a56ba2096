"""Operator identities used in the transfer proofs, as pairs (lhs, rhs) of
lazily evaluated operators.  Each identity holds iff lhs.equals(rhs).

All of them are stated for the families of `transfer.Families`: h_n, nu_n,
d_n and m_j^n on tensor powers of A.
"""
from __future__ import annotations

from .algebra import compositions
from .graded import Composite, Identity, LinComb, Tensor, Zero


def _sign(e):
    return -1 if e % 2 else 1


def _tensor(factors):
    factors = [f for f in factors if f is not None]
    return Tensor(factors)


def _ids(A, k):
    return Identity((A,) * k) if k else None


def _ips(fam, k):
    return Tensor([fam.ip] * k) if k else None


def _zero_like(op):
    return Zero(op.source, op.target, op.degree)


def nu_d(fam, n):
    """nu_n d_n + d_{n-1} nu_n = 0 for n >= 2."""
    lhs = LinComb([(1, Composite(fam.nu_n(n), fam.d_n(n))),
                   (1, Composite(fam.d_n(n - 1), fam.nu_n(n)))])
    return lhs, _zero_like(lhs)


def d_split(fam, i, j):
    """d_n = (-1)^i id^i x d_j + (-1)^j d_i x id^j for i + j = n."""
    A = fam.A
    rhs = LinComb([(_sign(i), Tensor([Identity((A,) * i), fam.d_n(j)])),
                   (_sign(j), Tensor([fam.d_n(i), Identity((A,) * j)]))])
    return fam.d_n(i + j), rhs


def tensor_homotopy(fam, n):
    """id^n - (ip)^n = (-1)^{n-1} (h_n d_n + d_n h_n)."""
    A = fam.A
    lhs = LinComb([(1, Identity((A,) * n)), (-1, Tensor([fam.ip] * n))])
    rhs = LinComb([(_sign(n - 1), Composite(fam.h_n(n), fam.d_n(n))),
                   (_sign(n - 1), Composite(fam.d_n(n), fam.h_n(n)))])
    return lhs, rhs


def nu_nu(fam, n):
    """nu_n nu_{n+1} = 0."""
    lhs = Composite(fam.nu_n(n), fam.nu_n(n + 1))
    return lhs, _zero_like(lhs)


def h_nu(fam, k, l, factors):
    """h_n nu_{n+1} F = ((-1)^l h_k nu_{k+1} x (ip)^l + id^k x h_l nu_{l+1}) F
    for n = k + l and F = f_1 x ... x f_{n+1} with every f_j equal to i or
    to h composed with some map."""
    n = k + l
    if len(factors) != n + 1:
        raise ValueError("need %d placeholder maps" % (n + 1))
    F = Tensor(factors)
    A = fam.A
    lhs = Composite(Composite(fam.h_n(n), fam.nu_n(n + 1)), F)
    hk = Composite(fam.h_n(k), fam.nu_n(k + 1))
    hl = Composite(fam.h_n(l), fam.nu_n(l + 1))
    inner = LinComb([(_sign(l), _tensor([hk, _ips(fam, l)])),
                     (1, _tensor([_ids(A, k), hl]))])
    return lhs, Composite(inner, F)


def technical_lemma(fam, n, j):
    """m_j^n m_1^n + sum_{i=1}^{j-1} m_i^{n-j+i} m_{j-i+1}^n = 0, 2 <= j <= n."""
    terms = [(1, Composite(fam.m_jn(j, n), fam.m_jn(1, n)))]
    for i in range(1, j):
        terms.append((1, Composite(fam.m_jn(i, n - j + i), fam.m_jn(j - i + 1, n))))
    lhs = LinComb(terms)
    return lhs, _zero_like(lhs)


def projection_split(fam, proj, parts):
    """(p_{j_1} x ... x p_{j_r}) nu_{n+1} h_{n+1}
        = (p_{j_1} x ... x p_{j_r}) sum_k (-1)^{j_{k+1}+...+j_r}
          id^{j_1+...+j_{k-1}} x nu_{j_k+1} h_{j_k+1} x (ip)^{j_{k+1}+...+j_r}
    with n = j_1 + ... + j_r and p_j the components of the projection."""
    A = fam.A
    n = sum(parts)
    P = Tensor([proj.f(j) for j in parts])
    lhs = Composite(P, Composite(fam.nu_n(n + 1), fam.h_n(n + 1)))
    terms = []
    for k, jk in enumerate(parts):
        before, after = sum(parts[:k]), sum(parts[k + 1:])
        mid = Composite(fam.nu_n(jk + 1), fam.h_n(jk + 1))
        terms.append((_sign(after), _tensor([_ids(A, before), mid, _ips(fam, after)])))
    return lhs, Composite(P, LinComb(terms))


def projection_split_infty(fam, proj, n, parts):
    """(p_{j_1} x ... x p_{j_r}) m_{n-j+1}^n h_n
        = (p_{j_1} x ... x p_{j_r}) sum_k (-1)^{(j_1+...+j_{k-1})(n-j+1) + j_{k+1}+...+j_r}
          id^{j_1+...+j_{k-1}} x m_{n-j+1}^{n-j+j_k} h_{n-j+j_k} x (ip)^{j_{k+1}+...+j_r}
    with j = j_1 + ... + j_r <= n."""
    A = fam.A
    j = sum(parts)
    s = n - j + 1
    P = Tensor([proj.f(q) for q in parts])
    lhs = Composite(P, Composite(fam.m_jn(s, n), fam.h_n(n)))
    terms = []
    for k, jk in enumerate(parts):
        before, after = sum(parts[:k]), sum(parts[k + 1:])
        mid = Composite(fam.m_jn(s, n - j + jk), fam.h_n(n - j + jk))
        terms.append((_sign(before * s + after), _tensor([_ids(A, before), mid, _ips(fam, after)])))
    return lhs, Composite(P, LinComb(terms))


def appendix_reindexing(fs, n, r1, r2):
    """sum_{k=r_1}^{n-r_2} sum_{i in C(k, r_1)} sum_{j in C(n-k, r_2)} f_i x f_j
        = sum_{i in C(n, r_1 + r_2)} f_i,
    where C(m, r) are the compositions of m into r positive parts and f_i
    stands for f_{i_1} x ... x f_{i_r}.  No signs: this is pure reindexing."""
    left = []
    for k in range(r1, n - r2 + 1):
        for i in compositions(k):
            if len(i) != r1:
                continue
            for jj in compositions(n - k):
                if len(jj) == r2:
                    left.append((1, Tensor([fs[a] for a in i + jj])))
    right = [(1, Tensor([fs[a] for a in c])) for c in compositions(n) if len(c) == r1 + r2]
    return LinComb(left), LinComb(right)
