import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ppforge.errors import CeilingExceeded, InputError
from ppforge.field import (
    TowerCtx,
    build_field,
    is_irreducible,
    parse_field_spec,
    primitive_root_of_unity,
    smallest_irreducible,
    subfield_elements,
    trace,
)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (2, 4), (3, 3), (7, 2)]


def _has_root(coeffs, p):
    return any(sum(c * a**i for i, c in enumerate(coeffs)) % p == 0 for a in range(p))


def test_prime_field_modulus_is_t():
    F = build_field(3, 1)
    assert F.modulus == (0, 1)
    assert F.order == 3


def test_default_quadratic_modulus_gf9():
    # oracle: first monic quadratic, low-degree-first, with no root in GF(3)
    first = next(
        [c0, c1, 1]
        for c0, c1 in itertools.product(range(3), repeat=2)
        if not _has_root([c0, c1, 1], 3)
    )
    assert first == [1, 0, 1]
    assert build_field(3, 2).modulus == tuple(first)


def test_reducible_modulus_rejected():
    with pytest.raises(InputError, match="reducible"):
        build_field(2, 2, modulus=[0, 1, 1])


def test_non_prime_characteristic_rejected():
    with pytest.raises(InputError):
        build_field(4, 1)


def test_ceiling():
    with pytest.raises(CeilingExceeded):
        build_field(2, 21)
    with pytest.raises(CeilingExceeded):
        build_field(3, 3, ceiling=20)


def test_ceiling_env(monkeypatch):
    monkeypatch.setenv("PPFORGE_CEILING", "10")
    with pytest.raises(CeilingExceeded):
        build_field(3, 3)


@pytest.mark.parametrize("p,n", [(2, 3), (2, 4), (3, 3), (5, 2)])
def test_smallest_irreducible_against_root_and_factor_search(p, n):
    # oracle for n <= 3: irreducible iff no root; n = 4 over GF(2) also needs x^2+x+1 checked
    def irreducible(c):
        if _has_root(c, p):
            return False
        if n == 4:
            # no quadratic factor: test divisibility by every monic irreducible quadratic
            for a, b in itertools.product(range(p), repeat=2):
                quad = [a, b, 1]
                if _has_root(quad, p):
                    continue
                rem = list(c)
                for k in range(len(rem) - 1, 1, -1):
                    coef = rem[k]
                    for i, qi in enumerate(quad):
                        rem[k - 2 + i] = (rem[k - 2 + i] - coef * qi) % p
                if not any(rem[:2]):
                    return False
        return True

    expected = next(
        tuple(low) + (1,) for low in itertools.product(range(p), repeat=n) if irreducible(list(low) + [1])
    )
    assert smallest_irreducible(p, n) == expected


def test_is_irreducible_examples():
    assert is_irreducible([1, 1, 0, 1], 2)
    assert not is_irreducible([1, 0, 0, 1], 2)  # (t+1)(t^2+t+1)
    assert not is_irreducible([0, 1, 1], 2)


def test_arithmetic_examples(gf9):
    t = 3
    assert gf9.inv(1) == 1
    assert gf9.mul(t, t) == 2
    for g in range(1, 9):
        assert gf9.pow(g, 8) == 1


def test_inv_zero(gf9):
    with pytest.raises(ZeroDivisionError):
        gf9.inv(0)


def test_frobenius_examples(gf9):
    t = 3
    assert gf9.frobenius(t, 0, 3) == t
    assert gf9.frobenius(t, 1, 3) == 6  # 2t
    xs = gf9.elements()
    assert np.array_equal(gf9.frobenius(xs, 2, 3), xs)
    with pytest.raises(InputError):
        gf9.frobenius(t, 1, 4)


def _schoolbook(F, a, b):
    # independent product: multiply digit polynomials, reduce by the modulus
    p, n = F.p, F.n
    da = [(a // p**i) % p for i in range(n)]
    db = [(b // p**i) % p for i in range(n)]
    prod = [0] * (2 * n)
    for i in range(n):
        for j in range(n):
            prod[i + j] += da[i] * db[j]
    for k in range(2 * n - 1, n - 1, -1):
        c = prod[k] % p
        for i in range(n + 1):
            prod[k - n + i] -= c * F.modulus[i]
    return sum((prod[i] % p) * p**i for i in range(n))


@pytest.mark.parametrize("p,n", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, n):
    F = build_field(p, n)
    xs = F.elements()
    a, b = np.meshgrid(xs, xs, indexing="ij")
    prod = F.mul(a, b)
    assert np.array_equal(prod, prod.T)
    expected = np.vectorize(lambda x, y: _schoolbook(F, int(x), int(y)))(a, b)
    assert np.array_equal(prod, expected)
    s = F.add(a, b)
    digits_sum = sum((((a // p**i) % p + (b // p**i) % p) % p) * p**i for i in range(n))
    assert np.array_equal(s, digits_sum)
    assert np.array_equal(F.add(xs, F.neg(xs)), np.zeros_like(xs))
    nz = xs[1:]
    assert np.all(F.mul(nz, F.inv(nz)) == 1)
    # distributivity over all triples
    c = xs[:, None, None]
    lhs = F.mul(c, F.add(a, b)[None])
    rhs = F.add(F.mul(c, a[None]), F.mul(c, b[None]))
    assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("p,n", [(2, 12), (3, 7), (5, 5), (3, 2), (2, 6)])
def test_frobenius_additive(p, n):
    F = build_field(p, n)
    rng = np.random.default_rng(1)
    if F.order <= 2**6:
        xs = F.elements()
        a, b = np.meshgrid(xs, xs, indexing="ij")
    else:
        a = rng.integers(0, F.order, 20000)
        b = rng.integers(0, F.order, 20000)
    lhs = F.frobenius(F.add(a, b), 1, p)
    rhs = F.add(F.frobenius(a, 1, p), F.frobenius(b, 1, p))
    assert np.array_equal(lhs, rhs)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80), st.integers(0, 200))
def test_field_laws_gf81(a, b, c, e):
    F = _GF81
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    naive = 1
    for _ in range(e):
        naive = F.mul(naive, a)
    assert F.pow(a, e) == naive


_GF81 = build_field(3, 4)


def test_field_sum_matches_repeated_add():
    F = build_field(3, 6)
    rng = np.random.default_rng(2)
    arr = rng.integers(0, F.order, size=(50, 40))
    acc = np.zeros(50, dtype=np.int64)
    for k in range(40):
        acc = F.add(acc, arr[:, k])
    assert np.array_equal(F.sum(arr, axis=1), acc)


def test_parse_field_spec():
    F = parse_field_spec("2^3:1,1,0,1")
    assert F.modulus == (1, 1, 0, 1)
    assert parse_field_spec("3^2").modulus == (1, 0, 1)
    assert parse_field_spec(F.spec) == F
    for bad in ("4^1", "x^2", "2^3:1,0,0,1"):
        with pytest.raises(InputError):
            parse_field_spec(bad)


def test_subfield_gf9(tower32):
    assert subfield_elements(tower32) == {0, 1, 2}


@pytest.mark.parametrize("q,d", [(3, 2), (4, 3), (9, 2), (5, 4), (2, 4)])
def test_subfield_size_and_members(q, d):
    T = TowerCtx(q, d)
    sub = subfield_elements(T)
    assert len(sub) == q and {0, 1} <= sub
    F = T.field
    for x in sub:
        assert F.pow(x, q) == x


def test_primitive_roots():
    assert primitive_root_of_unity(TowerCtx(3, 2)) == 2
    T = TowerCtx(5, 4)
    w = primitive_root_of_unity(T)
    F = T.field
    assert F.pow(w, 4) == 1 and F.pow(w, 2) != 1
    with pytest.raises(InputError):
        primitive_root_of_unity(TowerCtx(3, 3))


@pytest.mark.parametrize("q,d", [(3, 2), (5, 2), (5, 4), (7, 2), (7, 3), (4, 3), (9, 2)])
def test_root_of_unity_exact_order(q, d):
    T = TowerCtx(q, d)
    assert T.field.multiplicative_order(T.omega) == d
    assert T.in_subfield(T.omega)


def test_trace_examples(tower32):
    assert trace(tower32, 0) == 0
    assert trace(tower32, 1) == 2
    assert trace(tower32, 3) == 0
    T = TowerCtx(7, 3)
    assert trace(T, 1) == 3


@pytest.mark.parametrize("q,d", [(3, 2), (3, 3), (3, 4), (4, 2), (5, 2)])
def test_trace_linear_and_lands_in_subfield(q, d):
    T = TowerCtx(q, d)
    F = T.field
    xs = F.elements()
    tr = trace(T, xs)
    assert set(np.unique(tr).tolist()) == subfield_elements(T)
    sub = T.subfield
    rng = np.random.default_rng(0)
    x = rng.integers(0, F.order, 400)
    y = rng.integers(0, F.order, 400)
    for alpha in sub:
        for beta in sub:
            lhs = trace(T, F.add(F.mul(alpha, x), F.mul(beta, y)))
            rhs = F.add(F.mul(alpha, trace(T, x)), F.mul(beta, trace(T, y)))
            assert np.array_equal(lhs, rhs)


def test_tower_rejects_non_prime_power():
    with pytest.raises(InputError):
        TowerCtx(6, 2)
