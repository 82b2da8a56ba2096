"""Homology and deformation retracts of finite chain complexes.

For each degree n the complex is split as A_n = B_n + H_n + C_n, where B_n is
the image of d, C_n is a complement of the cycles, and H_n is spanned by cycle
representatives.  Then

    p: coordinates along H_n,   i: representative of a class,
    h: d(c) -> c on B_n, zero on H_n and C_n.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graded import (
    Composite, GradedMap, GradedVectorSpace, add_into, as_graded_map, identity_map,
)
from .scalars import SparseMatrix, inverse as matrix_inverse, kernel_basis


class NotADifferential(ValueError):
    pass


class NotARetract(ValueError):
    pass


def _maps_equal(f, g):
    return f.entries == g.entries


def _compose(*maps):
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = as_graded_map(Composite(f, out))
    return out


def _sub(f, g):
    entries = {i: dict(v) for i, v in f.entries.items()}
    for i, row in g.entries.items():
        tgt = entries.setdefault(i, {})
        for j, c in row.items():
            add_into(tgt, j, -c)
    return GradedMap(f.src, f.tgt, f.degree, entries)


def _add(f, g):
    entries = {i: dict(v) for i, v in f.entries.items()}
    for i, row in g.entries.items():
        tgt = entries.setdefault(i, {})
        for j, c in row.items():
            add_into(tgt, j, c)
    return GradedMap(f.src, f.tgt, f.degree, entries)


def check_differential(space, d):
    if d.degree != -1:
        raise NotADifferential("differential must have degree -1, got %d" % d.degree)
    if d.src != space or d.tgt != space:
        raise NotADifferential("differential does not act on the space")
    dd = as_graded_map(Composite(d, d))
    if dd.entries:
        i = min(dd.entries)
        raise NotADifferential("d^2 is nonzero on %s" % space.names[i])


def _block(d, src_idx, tgt_idx):
    """Matrix of d restricted to the given source and target index lists."""
    pos = {j: r for r, j in enumerate(tgt_idx)}
    e = {}
    for c, i in enumerate(src_idx):
        for j, v in d.vector(i).items():
            e[(pos[j], c)] = v
    return SparseMatrix(len(tgt_idx), len(src_idx), e, d.field)


class _Echelon:
    """Incrementally grown reduced basis; columns are positions in a list."""

    def __init__(self, field):
        self.F = field
        self.rows = []

    def reduce(self, v):
        v = list(v)
        for row, pc in self.rows:
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return v

    def add(self, v):
        r = self.reduce(v)
        pc = next((k for k, a in enumerate(r) if a), None)
        if pc is None:
            return None
        piv = r[pc]
        r = [a / piv for a in r]
        self.rows.append((r, pc))
        return r, pc


def _degree_blocks(space, order):
    rank = {i: k for k, i in enumerate(order)}
    blocks = {}
    for i in sorted(range(space.dim), key=lambda i: rank[i]):
        blocks.setdefault(space.degrees[i], []).append(i)
    return blocks


def _split(space, d, order=None):
    """Per degree: (indices, B vectors, representatives, C vectors), all in
    the coordinates of `indices`."""
    order = list(range(space.dim)) if order is None else list(order)
    if sorted(order) != list(range(space.dim)):
        raise ValueError("order must be a permutation of the basis")
    F = space.field
    blocks = _degree_blocks(space, order)
    out = {}
    comps = {}
    for n, idx in blocks.items():
        below = blocks.get(n - 1, [])
        D = _block(d, idx, below)
        Z = kernel_basis(D)
        ech = _Echelon(F)
        for z in Z:
            ech.add(z)
        C = []
        for k in range(len(idx)):
            e = [F.zero] * len(idx)
            e[k] = F.one
            if ech.add(e) is not None:
                C.append(e)
        comps[n] = (idx, Z, C, D)
    for n, (idx, Z, C, D) in comps.items():
        B = []
        if n + 1 in comps:
            idx_up, _, C_up, D_up = comps[n + 1]
            for c in C_up:
                B.append(D_up.apply(c))
        ech = _Echelon(F)
        for b in B:
            ech.add(b)
        reps = []
        for z in Z:
            r = ech.add(z)
            if r is not None:
                reps.append(r)
        out[n] = (idx, B, [r for r, _ in reps], [pc for _, pc in reps], C)
    return out


def _class_names(space, split):
    names = {}
    used = set()
    for n in sorted(split):
        idx, _, reps, pcs, _ = split[n]
        for k, (rep, pc) in enumerate(zip(reps, pcs)):
            name = "[%s]" % space.names[idx[pc]]
            while name in used:
                name += "'"
            used.add(name)
            names[(n, k)] = name
    return names


@dataclass
class HomologyResult:
    space: GradedVectorSpace
    representatives: list

    def betti(self):
        out = {}
        for d in self.space.degrees:
            out[d] = out.get(d, 0) + 1
        return out


def homology(space, d, order=None):
    check_differential(space, d)
    split = _split(space, d, order)
    names = _class_names(space, split)
    basis = []
    reps = []
    for n in sorted(split, reverse=True):
        idx, _, rs, _, _ = split[n]
        for k, r in enumerate(rs):
            basis.append((names[(n, k)], n))
            reps.append({idx[a]: c for a, c in enumerate(r) if c})
    return HomologyResult(GradedVectorSpace(basis, space.field), reps)


@dataclass
class DeformationRetract:
    space: GradedVectorSpace
    d: GradedMap
    H: GradedVectorSpace
    p: GradedMap
    i: GradedMap
    h: GradedMap

    def invariants(self):
        A, H = self.space, self.H
        p, i, h, d = self.p, self.i, self.h, self.d
        ip = _compose(i, p)
        lhs = _sub(identity_map(A), ip)
        rhs = _add(_compose(d, h), _compose(h, d))
        return {
            "pi = id": _maps_equal(_compose(p, i), identity_map(H)),
            "id - ip = dh + hd": _maps_equal(lhs, rhs),
            "di = 0 and pd = 0": not _compose(d, i).entries and not _compose(p, d).entries,
            "hh = 0": not _compose(h, h).entries,
            "ph = 0 and hi = 0": not _compose(p, h).entries and not _compose(h, i).entries,
        }

    def verify(self):
        return all(self.invariants().values())

    def ip(self):
        return _compose(self.i, self.p)


def build_retract(space, d, order=None):
    check_differential(space, d)
    F = space.field
    split = _split(space, d, order)
    hom = homology(space, d, order)
    H = hom.space
    p_e, i_e, h_e = {}, {}, {}
    hpos = {}
    k = 0
    for n in sorted(split, reverse=True):
        idx, _, rs, _, _ = split[n]
        for a in range(len(rs)):
            hpos[(n, a)] = k
            k += 1
    for n, (idx, B, reps, _, C) in split.items():
        cols = B + reps + C
        if not cols:
            continue
        M = SparseMatrix.from_rows([[col[r] for col in cols] for r in range(len(idx))], F)
        Minv = matrix_inverse(M).to_rows()
        nb, nh = len(B), len(reps)
        C_up = []
        idx_up = []
        if n + 1 in split:
            idx_up = split[n + 1][0]
            C_up = split[n + 1][4]
        for a, gi in enumerate(idx):
            coords = [Minv[r][a] for r in range(len(cols))]
            pv = {}
            for t in range(nh):
                if coords[nb + t]:
                    pv[hpos[(n, t)]] = coords[nb + t]
            if pv:
                p_e[gi] = pv
            hv = {}
            for t in range(nb):
                c = coords[t]
                if c:
                    for r, v in enumerate(C_up[t]):
                        if v:
                            add_into(hv, idx_up[r], c * v)
            if hv:
                h_e[gi] = hv
    for t, rep in enumerate(hom.representatives):
        i_e[t] = rep
    p = GradedMap(space, H, 0, p_e)
    i = GradedMap(H, space, 0, i_e)
    h = GradedMap(space, space, 1, h_e)
    return DeformationRetract(space, d, H, p, i, h)


def normalize_side_conditions(space, d, H, p, i, h):
    """Adjust h so that hh = ph = hi = 0, keeping id - ip = dh + hd.

    First h1 = (1 - ip) h (1 - ip) kills ph and hi, then h2 = h1 d h1 kills hh.
    """
    r = DeformationRetract(space, d, H, p, i, h)
    inv = r.invariants()
    if not (inv["pi = id"] and inv["id - ip = dh + hd"]):
        raise NotARetract("input is not a deformation retract")
    pi_c = _sub(identity_map(space), _compose(i, p))
    h1 = _compose(pi_c, h, pi_c)
    h2 = _compose(h1, d, h1)
    return DeformationRetract(space, d, H, p, i, h2)


def conjugate_retract(r, T):
    """Transport a retract along an automorphism T of the big space:
    d' = T d T^-1, p' = p T^-1, i' = T i, h' = T h T^-1.  When T is a chain
    map, d' = d and the result is another retract of the same complex."""
    from .algebra import invert_graded_map
    Tinv = invert_graded_map(T)
    d2 = _compose(T, r.d, Tinv)
    return DeformationRetract(r.space, d2, r.H, _compose(r.p, Tinv), _compose(T, r.i),
                              _compose(T, r.h, Tinv))
