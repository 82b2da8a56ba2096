import pytest
from hypothesis import given, strategies as st

from ainfinity.algebra import compositions
from ainfinity.fixtures import massey_algebra
from ainfinity.graded import (
    ArityMismatch, Composite, DegreeMismatch, GradedMap, GradedVectorSpace, Identity, LinComb,
    SpaceMismatch, Tensor, alpha, desuspension_map, identity_map, iter_tuples,
    koszul_compose_tensors, koszul_tensor_apply, power, suspend, suspend_map, suspension_map,
    unsuspend_map,
)
from ainfinity.sampling import make_rng, random_graded_map

# a small space with every parity and a few degrees
V = GradedVectorSpace([("a", 0), ("b", 1), ("c", -1), ("e", 2), ("f", 1)])


def test_id_tensor_d_picks_up_sign():
    S = GradedVectorSpace([("x", 1), ("y", 0), ("w", -1)])
    d = GradedMap(S, S, -1, {1: {2: 1}})
    out = koszul_tensor_apply([identity_map(S), d], (0, 1))
    assert out == {(0, 2): -1}


def test_even_maps_no_sign():
    f = GradedMap(V, V, 0, {1: {4: 2}})
    g = GradedMap(V, V, 0, {2: {2: 3}})
    assert koszul_tensor_apply([f, g], (1, 2)) == {(4, 2): 6}


def test_d_tensor_d_on_even_first_factor():
    S = GradedVectorSpace([("x", 2), ("x1", 1), ("y", 1), ("y1", 0)])
    d = GradedMap(S, S, -1, {0: {1: 1}, 2: {3: 1}})
    assert koszul_tensor_apply([d, d], (0, 2)) == {(1, 3): 1}


def test_wrong_arity_raises():
    with pytest.raises(ArityMismatch):
        koszul_tensor_apply([identity_map(V)], (0, 1))
    with pytest.raises(ArityMismatch):
        koszul_compose_tensors([identity_map(V)], [identity_map(V)] * 2)


def test_space_and_degree_mismatch():
    W = GradedVectorSpace([("z", 0)])
    with pytest.raises(SpaceMismatch):
        Composite(identity_map(W), identity_map(V))
    with pytest.raises(DegreeMismatch):
        GradedMap(V, V, 0, {0: {1: 1}})
    with pytest.raises(ValueError):
        GradedVectorSpace([("a", 0), ("a", 1)])


def _odd(rng, space):
    return random_graded_map(rng, space, space, rng.choice([-1, 1]), density=0.8)


def test_compose_sign_examples():
    rng = make_rng(1)
    f, g = _odd(rng, V), _odd(rng, V)
    I = identity_map(V)
    assert koszul_compose_tensors([I, I], [f, g])[0] == 1
    f2, g2 = random_graded_map(rng, V, V, 0), random_graded_map(rng, V, V, -1)
    fp = random_graded_map(rng, V, V, -1)
    assert koszul_compose_tensors([f2, g2], [fp, f2])[0] == -1


def test_three_odd_factors():
    rng = make_rng(2)
    outer = [_odd(rng, V) for _ in range(3)]
    inner = [_odd(rng, V) for _ in range(3)]
    sign, comps = koszul_compose_tensors(outer, inner)
    assert sign == -1
    lhs = Composite(Tensor(outer), Tensor(inner))
    assert lhs.equals(LinComb([(sign, Tensor(comps))]))


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_compose_sign_matches_elementwise(seed, k):
    rng = make_rng(seed)
    outer = [random_graded_map(rng, V, V, rng.randint(-2, 2)) for _ in range(k)]
    inner = [random_graded_map(rng, V, V, rng.randint(-2, 2)) for _ in range(k)]
    sign, comps = koszul_compose_tensors(outer, inner)
    lhs = Composite(Tensor(outer), Tensor(inner))
    for key in iter_tuples((V,) * k):
        expected = {kk: sign * c for kk, c in koszul_tensor_apply(comps, key).items()}
        assert lhs(key) == expected


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_tensor_output_degrees(seed, k):
    rng = make_rng(seed)
    maps = [random_graded_map(rng, V, V, rng.randint(-2, 2)) for _ in range(k)]
    total = sum(m.degree for m in maps)
    for key in iter_tuples((V,) * k):
        for out in koszul_tensor_apply(maps, key):
            assert V.tensor_degree(out) == V.tensor_degree(key) + total


@given(st.integers(0, 10 ** 6))
def test_multislot_factor_agrees_with_splitting(seed):
    # (f x g) x h computed as a two-slot factor or as three factors
    rng = make_rng(seed)
    f, g, h = (random_graded_map(rng, V, V, rng.randint(-1, 1)) for _ in range(3))
    assert Tensor([Tensor([f, g]), h]).equals(Tensor([f, g, h]))
    assert Tensor([f, Tensor([g, h])]).equals(Tensor([f, g, h]))


def test_suspend_shifts_degrees():
    S = GradedVectorSpace([("u", 0), ("v", -3)])
    assert suspend(S).degrees == (1, -2)
    assert suspension_map(S).degree == 1 and desuspension_map(S).degree == -1


def test_unsuspend_suspend_round_trip():
    alg = massey_algebra(cap=3)
    m2 = alg.m(2)
    b2 = suspend_map(m2)
    assert b2.degree == -1
    assert unsuspend_map(b2, alg.space).structure_constants() == m2.structure_constants()


@pytest.mark.parametrize("n", range(1, 7))
def test_alpha_bridge(n):
    S = GradedVectorSpace([("u", 0), ("v", -1)])
    sS = S.suspend()
    op = Composite(power(suspension_map(S), n), power(desuspension_map(S), n))
    assert op.equals(LinComb([(alpha(n), Identity((sS,) * n))]))
    if n == 3:
        assert alpha(3) == -1


def test_alpha_values():
    assert [alpha(n) for n in range(1, 7)] == [1, -1, -1, 1, 1, -1]


def test_compositions_counts():
    assert [len(compositions(n)) for n in range(1, 7)] == [1, 2, 4, 8, 16, 32]
