"""Builders for the shipped example algebras.

The JSON files under data/ are produced by these builders (see
`write_fixture_files`) and are what the CLI loads by name.
"""
from __future__ import annotations

from importlib import resources
from itertools import combinations

from .algebra import AInftyAlgebra, transport
from .graded import GradedVectorSpace, MultilinearOp
from .scalars import QQ, field_from_tag

FIXTURES = {
    "trivial": "the ground field k with its unit",
    "poly_cubic_q": "k[x]/(x^3), |x| = 2, over Q",
    "poly_cubic_f3": "k[x]/(x^3), |x| = 2, over F_3",
    "massey": "exterior algebra on x, y, z of degree -1 with dz = xy",
    "upper_triangular": "2x2 upper-triangular matrices, all in degree 0",
    "torus": "exterior algebra on a, b of degree -1, zero differential",
    "massey_gauged": "an A-infinity algebra isomorphic to massey with nonzero m_3",
}

# fixtures (a) to (e) plus the A-infinity variant of (c)
DGA_FIXTURES = ["trivial", "poly_cubic_q", "poly_cubic_f3", "massey", "upper_triangular", "torus"]
ALL_FIXTURES = DGA_FIXTURES + ["massey_gauged"]

GAUGE_SEED = 11


def exterior_algebra(gens, degrees, differential=None, field=QQ, cap=6):
    """Free graded-commutative algebra on generators of odd degree.

    `differential` maps a generator index to {monomial tuple: coefficient}
    and is extended as a derivation.  Monomials are increasing tuples of
    generator positions.
    """
    differential = differential or {}
    k = len(gens)
    mons = [()]
    for size in range(1, k + 1):
        mons += list(combinations(range(k), size))
    name = lambda m: "".join(gens[g] for g in m) or "1"
    deg = lambda m: sum(degrees[g] for g in m)
    V = GradedVectorSpace([(name(m), deg(m)) for m in mons], field)
    idx = {m: i for i, m in enumerate(mons)}

    def mult(a, b):
        if set(a) & set(b):
            return None
        seq = list(a) + list(b)
        sign = 1
        for i in range(len(seq)):
            for j in range(len(seq) - 1 - i):
                if seq[j] > seq[j + 1]:
                    if degrees[seq[j]] % 2 and degrees[seq[j + 1]] % 2:
                        sign = -sign
                    seq[j], seq[j + 1] = seq[j + 1], seq[j]
        return sign, tuple(seq)

    m2 = {}
    for a in mons:
        for b in mons:
            r = mult(a, b)
            if r:
                m2[(idx[a], idx[b])] = {idx[r[1]]: r[0]}
    d = {}
    for a in mons:
        acc = {}
        for pos, g in enumerate(a):
            sgn = -1 if deg(a[:pos]) % 2 else 1
            for mon, c in differential.get(g, {}).items():
                left = mult(a[:pos], mon)
                if not left:
                    continue
                right = mult(left[1], a[pos + 1:])
                if not right:
                    continue
                j = idx[right[1]]
                acc[j] = acc.get(j, 0) + sgn * c * left[0] * right[0]
        acc = {j: c for j, c in acc.items() if c}
        if acc:
            d[(idx[a],)] = acc
    mops = {2: MultilinearOp(V, V, 2, 0, m2)}
    if d:
        mops[1] = MultilinearOp(V, V, 1, -1, d)
    return AInftyAlgebra(V, mops, cap)


def truncated_polynomial(degree, top, field=QQ, cap=6):
    """k[x]/(x^{top+1}) with |x| = degree and zero differential."""
    V = GradedVectorSpace([("1" if k == 0 else "x" if k == 1 else "x%d" % k, k * degree)
                           for k in range(top + 1)], field)
    m2 = {(a, b): {a + b: 1} for a in range(top + 1) for b in range(top + 1) if a + b <= top}
    return AInftyAlgebra(V, {2: MultilinearOp(V, V, 2, 0, m2)}, cap)


def upper_triangular(field=QQ, cap=6):
    """Basis e11, e12, e22 with matrix multiplication."""
    V = GradedVectorSpace([("e11", 0), ("e12", 0), ("e22", 0)], field)
    units = [(0, 0), (0, 1), (1, 1)]
    m2 = {}
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if j == k:
                m2[(a, b)] = {units.index((i, l)): 1}
    return AInftyAlgebra(V, {2: MultilinearOp(V, V, 2, 0, m2)}, cap)


def trivial_algebra(field=QQ, cap=6):
    V = GradedVectorSpace([("1", 0)], field)
    return AInftyAlgebra(V, {2: MultilinearOp(V, V, 2, 0, {(0, 0): {0: 1}})}, cap)


def massey_algebra(field=QQ, cap=6):
    return exterior_algebra("xyz", [-1, -1, -1], {2: {(0, 1): 1}}, field, cap)


def gauged_massey(field=QQ, cap=6, seed=GAUGE_SEED):
    """massey transported along a fixed strictly non-linear gauge f with f_1 = id.

    Only f_2 is nonzero, and it is supported on generators, which keeps the
    transported m_n sparse while making m_3 nonzero.
    """
    from .sampling import make_rng, random_scalar
    from .graded import identity_map
    alg = massey_algebra(field, cap)
    V = alg.space
    rng = make_rng(seed)
    gens = [V.index(g) for g in "xyz"]
    table = {}
    for a in gens:
        for b in gens:
            # degree -2 input, degree -1 output: a generator
            for j in gens:
                c = random_scalar(rng, field, 1)
                if c:
                    table.setdefault((a, b), {})[j] = c
    comps = {1: identity_map(V), 2: MultilinearOp(V, V, 2, 1, table)}
    target, _ = transport(alg, comps, cap=cap)
    return target


BUILDERS = {
    "trivial": lambda cap: trivial_algebra(QQ, cap),
    "poly_cubic_q": lambda cap: truncated_polynomial(2, 2, QQ, cap),
    "poly_cubic_f3": lambda cap: truncated_polynomial(2, 2, field_from_tag("Fp:3"), cap),
    "massey": lambda cap: massey_algebra(QQ, cap),
    "upper_triangular": lambda cap: upper_triangular(QQ, cap),
    "torus": lambda cap: exterior_algebra("ab", [-1, -1], None, QQ, cap),
    "massey_gauged": lambda cap: gauged_massey(QQ, cap),
}

COMMUTATIVE = {"trivial", "poly_cubic_q", "poly_cubic_f3", "massey", "torus"}


def fixture_path(name):
    if name not in FIXTURES:
        raise KeyError("unknown fixture %r; known: %s" % (name, ", ".join(FIXTURES)))
    return resources.files("ainfinity") / "data" / ("%s.json" % name)


def load_fixture(name, cap=None):
    from .io import parse_spec_text
    spec = parse_spec_text(fixture_path(name).read_text(encoding="utf-8"), str(fixture_path(name)))
    return spec.algebra(cap)


def load_fixture_spec(name):
    from .io import parse_spec_text
    return parse_spec_text(fixture_path(name).read_text(encoding="utf-8"), str(fixture_path(name)))


def write_fixture_files(directory, cap=6):
    """Regenerate the JSON fixture files from the builders."""
    from pathlib import Path
    from .io import AlgebraSpec, emit_spec
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, build in BUILDERS.items():
        alg = build(cap)
        spec = AlgebraSpec.from_algebra(
            alg, is_dga=alg.is_dga(), is_commutative_expected=name in COMMUTATIVE,
            description=FIXTURES[name])
        (out / ("%s.json" % name)).write_text(emit_spec(spec), encoding="utf-8")


def dg_fixture(name, cap=6):
    alg = load_fixture(name, cap)
    if not alg.is_dga():
        raise ValueError("%s is not a dg-algebra" % name)
    return alg

