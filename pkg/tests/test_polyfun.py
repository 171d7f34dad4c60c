import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppforge.errors import InputError, NotBijectiveError
from ppforge.field import build_field
from ppforge.polyfun import (
    FuncTable,
    Poly,
    brute_inverse,
    collision,
    compose,
    compose_direct,
    compose_tables,
    interpolate,
    interpolate_lagrange,
    interpolate_transform,
    is_involution,
    is_permutation,
    to_table,
)
from ppforge.transform import group_dft

T_GF9 = 3  # the class of t in GF(9) with modulus t^2 + 1


def test_eval_examples(gf9):
    assert Poly.x(gf9)(5) == 5
    assert Poly.parse(gf9, "0,0,0,2")(T_GF9) == T_GF9
    assert Poly.constant(gf9, 7)(4) == 7
    assert Poly(gf9, [])(4) == 0


def test_reduction_to_canonical_form(gf9):
    assert Poly.monomial(gf9, 9) == Poly.x(gf9)
    assert Poly.monomial(gf9, 17).coeffs == (0, 1)  # 17 - 1 = 2 * 8
    assert Poly.monomial(gf9, 8).degree == 8
    assert Poly(gf9, [1, 0, 0]).coeffs == (1,)
    with pytest.raises(InputError):
        Poly(gf9, [9])


def test_interpolation_examples(gf9):
    assert interpolate(FuncTable.identity(gf9)) == Poly.x(gf9)
    assert interpolate(FuncTable(gf9, np.zeros(9, dtype=np.int64))).coeffs == ()
    assert interpolate(to_table(Poly.monomial(gf9, 9))) == Poly.x(gf9)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (2, 2), (3, 2), (5, 1), (2, 3), (7, 1), (5, 2)])
def test_roundtrip_every_function_of_small_fields(p, n):
    F = build_field(p, n)
    Q = F.order
    rng = np.random.default_rng(Q)
    samples = [rng.integers(0, Q, Q) for _ in range(30)]
    if Q <= 3:
        import itertools
        samples = [np.array(t) for t in itertools.product(range(Q), repeat=Q)]
    for images in samples:
        T = FuncTable(F, images)
        poly = interpolate_lagrange(T)
        assert poly.degree < Q
        fresh = Poly(F, poly.coeffs)  # drop the cached table
        assert np.array_equal(to_table(fresh).images, images)


def _naive_dft(F, a, sign):
    N = len(a)
    g = F.generator
    out = []
    for j in range(N):
        acc = 0
        for k in range(N):
            acc = F.add(acc, F.mul(int(a[k]), F.pow(g, (sign * j * k) % N)))
        out.append(acc)
    return np.array(out)


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2), (7, 2), (2, 5), (13, 1)])
def test_group_dft_matches_definition(p, n):
    F = build_field(p, n)
    rng = np.random.default_rng(7)
    a = rng.integers(0, F.order, F.order - 1)
    for sign in (1, -1):
        assert np.array_equal(group_dft(F, a, sign), _naive_dft(F, a, sign))


@pytest.mark.parametrize("p,n", [(3, 5), (2, 8), (17, 2), (7, 3)])
def test_transform_interpolation_agrees_with_lagrange(p, n):
    F = build_field(p, n)
    rng = np.random.default_rng(3)
    T = FuncTable(F, rng.integers(0, F.order, F.order))
    fast = interpolate_transform(T)
    assert fast == interpolate_lagrange(T)
    assert np.array_equal(to_table(Poly(F, fast.coeffs)).images, T.images)


def test_transform_at_largest_grid_field():
    F = build_field(7, 6)
    rng = np.random.default_rng(5)
    T = FuncTable(F, rng.integers(0, F.order, F.order))
    poly = interpolate(T)
    assert np.array_equal(to_table(Poly(F, poly.coeffs)).images, T.images)
    # spot-check a few coefficients against the Lagrange formula c_k = -sum f(a) a^(Q-1-k)
    xs = F.elements()
    for k in (1, 2, 1000, F.order - 2):
        ck = F.neg(F.sum(F.mul(T.images, F.pow(xs, F.order - 1 - k))))
        assert (poly.coeffs + (0,) * F.order)[k] == ck


def test_permutation_examples(gf9):
    assert is_permutation(FuncTable.identity(gf9))
    sq = to_table(Poly.monomial(gf9, 2))
    assert not is_permutation(sq)
    a, b = collision(sq)
    assert sq[a] == sq[b] and a != b
    assert is_permutation(to_table(Poly.monomial(gf9, 3)))


def test_brute_inverse_examples(gf9, gf3):
    ident = FuncTable.identity(gf9)
    assert brute_inverse(ident) == ident
    f = to_table(Poly.parse(gf9, "0,0,0,2"))
    assert brute_inverse(f) == f
    shift = to_table(Poly.parse(gf3, "1,1"))
    assert interpolate(brute_inverse(shift)).coeffs == (2, 1)
    with pytest.raises(NotBijectiveError) as exc:
        brute_inverse(to_table(Poly.monomial(gf9, 2)))
    assert len(exc.value.witness) == 2


def test_involution_examples(gf9, gf3):
    assert is_involution(FuncTable.identity(gf9))
    assert not is_involution(to_table(Poly.parse(gf3, "1,1")))
    assert is_involution(to_table(Poly.parse(gf9, "0,0,0,2")))


def test_compose_examples(gf9):
    x = Poly.x(gf9)
    f = Poly.parse(gf9, "4,0,7,1")
    assert compose(x, f) == f
    cube = Poly.monomial(gf9, 3)
    assert compose(cube, cube) == x
    g = Poly.parse(gf9, "0,0,0,2")
    g_inv = interpolate(brute_inverse(to_table(g)))
    assert compose(g, g_inv) == x


_GF27 = build_field(3, 3)
_poly27 = st.lists(st.integers(0, 26), max_size=12).map(lambda c: Poly(_GF27, c))


@settings(max_examples=60, deadline=None)
@given(_poly27, _poly27)
def test_compose_paths_agree(g, f):
    assert compose_direct(g, f) == compose_tables(g, f)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 26), min_size=27, max_size=27))
def test_interpolate_then_table_is_identity(images):
    T = FuncTable(_GF27, np.array(images))
    p = interpolate(T)
    assert np.array_equal(to_table(Poly(_GF27, p.coeffs)).images, T.images)


@settings(max_examples=40, deadline=None)
@given(st.permutations(list(range(27))))
def test_brute_inverse_is_two_sided(perm):
    T = FuncTable(_GF27, np.array(perm))
    inv = brute_inverse(T)
    assert np.array_equal(T.then(inv).images, np.arange(27))
    assert np.array_equal(inv.then(T).images, np.arange(27))


def test_func_table_json_roundtrip(gf9):
    T = to_table(Poly.parse(gf9, "1,2,3"))
    again = FuncTable.from_json(T.to_json())
    assert again == T


def test_field_mismatch(gf9, gf3):
    with pytest.raises(InputError):
        compose(Poly.x(gf9), Poly.x(gf3))
