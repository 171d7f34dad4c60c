"""Explicit finite fields GF(p^n) backed by exhaustive lookup tables.

An element of GF(p^n) is a plain integer in ``[0, p**n)``: base-p digit ``i``
is the coefficient of ``t**i`` in the polynomial basis over GF(p).  Every
arithmetic method accepts Python ints or integer numpy arrays and broadcasts;
scalar inputs come back as Python ints.

Multiplication goes through discrete log / antilog tables built once per
field, addition through a packed digit representation.
"""

from __future__ import annotations

import itertools
import os
from functools import cached_property
from math import gcd

import numpy as np
from sympy import factorint, isprime

from .errors import CeilingExceeded, InputError

DEFAULT_CEILING = 2**20


def exhaustive_ceiling(override=None):
    """Largest field order any exhaustive routine will touch."""
    if override is not None:
        return int(override)
    env = os.environ.get("PPFORGE_CEILING")
    return int(env) if env else DEFAULT_CEILING


def _unwrap(x):
    if isinstance(x, np.ndarray) and x.ndim == 0:
        return int(x)
    return x


# -- polynomials over the prime field, as coefficient lists low-degree-first --

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, b, p):
    """Remainder of a by monic-or-not b over GF(p)."""
    a = _trim(a)
    b = _trim(b)
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        a = _trim(a)
    return a


def is_irreducible(coeffs, p):
    """Irreducibility of a polynomial over GF(p) by trial division.

    Divides by every monic polynomial of degree 1..n//2; exhaustive, which
    is fine at the sizes this package handles.
    """
    f = _trim([c % p for c in coeffs])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    if f[0] == 0:
        return False
    for k in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=k):
            if not _pmod(f, list(low) + [1], p):
                return False
    return True


def smallest_irreducible(p, n):
    """Lexicographically smallest monic irreducible of degree n over GF(p).

    Coefficient sequences ``[c0, c1, ..., c_{n-1}, 1]`` are compared
    low-degree-first.
    """
    if n == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=n):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible polynomial of degree {n} over GF({p})")


class FieldCtx:
    """GF(p^n) with a fixed modulus.  Immutable after construction."""

    def __init__(self, p, n, modulus):
        self.p = p
        self.n = n
        self.modulus = tuple(modulus)
        self.order = p**n
        self._place = np.array([p**i for i in range(n)], dtype=np.int64)
        self._build_tables()

    # ---- construction ----

    def _digits_of(self, x):
        return [(x // p_i) % self.p for p_i in self._place.tolist()]

    def _index_of(self, digits):
        return sum(int(d) * int(pl) for d, pl in zip(digits, self._place))

    def _slow_mul(self, a, b):
        """Schoolbook product mod the modulus; used only while bootstrapping."""
        p, n = self.p, self.n
        da, db = self._digits_of(a), self._digits_of(b)
        prod = [0] * (2 * n - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c:
                for i in range(n):
                    prod[k - n + i] = (prod[k - n + i] - c * self.modulus[i]) % p
                prod[k] = 0
        return self._index_of(prod[:n])

    def _slow_pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _mul_matrix(self, c):
        # column i holds the digits of c * t^i
        cols = [self._digits_of(self._slow_mul(c, self.p**i)) for i in range(self.n)]
        return np.array(cols, dtype=np.int64).T

    def _build_tables(self):
        N = self.order - 1
        self.generator = self._find_generator()
        exp = np.zeros(max(N, 1), dtype=np.int64)
        exp[0] = 1
        filled = 1
        while filled < N:
            step = min(filled, N - filled)
            g_pow = self._slow_pow(self.generator, filled)
            block = exp[:step]
            digits = (block[:, None] // self._place) % self.p
            digits = (digits @ self._mul_matrix(g_pow).T) % self.p
            exp[filled:filled + step] = digits @ self._place
            filled += step
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:N]] = np.arange(N, dtype=np.int64)
        if N and len(np.unique(exp[:N])) != N:
            raise AssertionError("generator powers are not distinct")
        self.exp = exp
        self.log = log
        # packed digits: digit i lives in bit slot i, wide enough to sum several
        self._slot = 63 // self.n
        self._slot_cap = max(1, ((1 << self._slot) - 1) // max(self.p - 1, 1))
        self._packed = self._pack_all()

    def _find_generator(self):
        N = self.order - 1
        if N == 1:
            return 1
        primes = list(factorint(N))
        for g in range(1, self.order):
            if all(self._slow_pow(g, N // ell) != 1 for ell in primes):
                return g
        raise InputError("multiplicative group has no generator; modulus is reducible")

    def _pack_all(self):
        idx = np.arange(self.order, dtype=np.int64)
        packed = np.zeros(self.order, dtype=np.int64)
        for i, pl in enumerate(self._place):
            packed |= ((idx // pl) % self.p) << (self._slot * i)
        return packed

    def _unpack(self, packed):
        mask = (1 << self._slot) - 1
        out = np.zeros(np.shape(packed), dtype=np.int64)
        for i, pl in enumerate(self._place):
            out += (((packed >> (self._slot * i)) & mask) % self.p) * pl
        return out

    # ---- description ----

    @property
    def spec(self):
        """Round-trippable text form ``p^n:c0,...,cn``."""
        return f"{self.p}^{self.n}:" + ",".join(str(c) for c in self.modulus)

    def __repr__(self):
        return f"FieldCtx({self.spec})"

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and self.spec == other.spec

    def __hash__(self):
        return hash(self.spec)

    def elements(self):
        return np.arange(self.order, dtype=np.int64)

    def element(self, k):
        """Image of the integer k in the prime subfield."""
        return k % self.p

    def digits(self, a):
        return self._digits_of(int(a))

    # ---- arithmetic ----

    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return _unwrap(a ^ b)
        return _unwrap(self._unpack(self._packed[a] + self._packed[b]))

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return _unwrap(a)
        mask = (1 << self._slot) - 1
        packed = self._packed[a]
        out = np.zeros(a.shape, dtype=np.int64)
        for i, pl in enumerate(self._place):
            out += ((self.p - ((packed >> (self._slot * i)) & mask)) % self.p) * pl
        return _unwrap(out)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        N = self.order - 1
        out = self.exp[(self.log[a] + self.log[b]) % N]
        return _unwrap(np.where((a == 0) | (b == 0), 0, out))

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + self.spec)
        N = self.order - 1
        return _unwrap(self.exp[(-self.log[a]) % N])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        """a**e for a non-negative integer e (any size)."""
        if e < 0:
            return self.pow(self.inv(a), -e)
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return _unwrap(np.ones(a.shape, dtype=np.int64))
        N = self.order - 1
        out = self.exp[(self.log[a] * (e % N)) % N]
        return _unwrap(np.where(a == 0, 0, out))

    def scale_log(self, a, k):
        """a * g**k, k an integer array of log offsets (zero stays zero)."""
        a = np.asarray(a, dtype=np.int64)
        N = self.order - 1
        out = self.exp[(self.log[a] + k) % N]
        return np.where(a == 0, 0, out)

    def sum(self, a, axis=-1):
        """Field sum along an axis of an element array."""
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return _unwrap(np.bitwise_xor.reduce(a, axis=axis))
        a = np.moveaxis(a, axis, -1)
        acc = np.zeros(a.shape[:-1], dtype=np.int64)
        pending = 0
        for k in range(a.shape[-1]):
            acc = acc + self._packed[a[..., k]]
            pending += 1
            if pending == self._slot_cap:
                acc = self._packed[self._unpack(acc)]
                pending = 0
        return _unwrap(self._unpack(acc))

    def frobenius(self, a, j, s):
        """a ** (s ** j) where s is a power of the characteristic."""
        k = _prime_power_exponent(s, self.p)
        if k is None:
            raise InputError(f"{s} is not a power of {self.p}")
        if self.n % k:
            raise InputError(f"GF({s}) is not a subfield of GF({self.order})")
        N = self.order - 1
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[(self.log[a] * pow(s, j, N)) % N] if N > 1 else a
        return _unwrap(np.where(a == 0, 0, out))

    def multiplicative_order(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        N = self.order - 1
        return N // gcd(N, int(self.log[a]))


def _prime_power_exponent(s, p):
    k = 0
    while s > 1 and s % p == 0:
        s //= p
        k += 1
    return k if s == 1 and k > 0 else None


def build_field(p, n, modulus=None, ceiling=None):
    """Construct GF(p^n); with no modulus, use the smallest irreducible one."""
    if not isinstance(p, int) or not isprime(p):
        raise InputError(f"characteristic {p} is not prime")
    if n < 1:
        raise InputError("extension degree must be positive")
    limit = exhaustive_ceiling(ceiling)
    if p**n > limit:
        raise CeilingExceeded(f"GF({p}^{n}) has {p**n} elements, ceiling is {limit}")
    if modulus is None:
        modulus = smallest_irreducible(p, n)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise InputError(f"modulus must be monic of degree {n}")
        if not is_irreducible(modulus, p):
            raise InputError(f"modulus {list(modulus)} is reducible over GF({p})")
    return FieldCtx(p, n, modulus)


def parse_field_spec(text, ceiling=None):
    """Parse ``"p^n"`` or ``"p^n:c0,c1,...,cn"``."""
    head, _, tail = text.strip().partition(":")
    try:
        p_str, _, n_str = head.partition("^")
        p = int(p_str)
        n = int(n_str) if n_str else 1
        modulus = [int(c) for c in tail.split(",")] if tail else None
    except ValueError:
        raise InputError(f"cannot parse field spec {text!r}") from None
    return build_field(p, n, modulus, ceiling=ceiling)


class TowerCtx:
    """GF(q^d) as one flat field GF(p^(k*d)) with GF(q) found inside it."""

    def __init__(self, q, d, modulus=None, ceiling=None):
        factors = factorint(q)
        if len(factors) != 1:
            raise InputError(f"q = {q} is not a prime power")
        (p, k), = factors.items()
        if d < 1:
            raise InputError("d must be positive")
        self.q = q
        self.d = d
        self.k = k
        self.field = build_field(p, k * d, modulus, ceiling=ceiling)

    def __repr__(self):
        return f"TowerCtx(q={self.q}, d={self.d}, field={self.field.spec})"

    @cached_property
    def subfield(self):
        """Sorted array of the q elements with x**q == x (exhaustive scan)."""
        F = self.field
        xs = F.elements()
        members = xs[F.pow(xs, self.q) == xs]
        if len(members) != self.q:
            raise AssertionError(f"found {len(members)} subfield elements, expected {self.q}")
        return members

    @cached_property
    def subfield_generator(self):
        F = self.field
        for x in self.subfield.tolist():
            if x and F.multiplicative_order(x) == self.q - 1:
                return x
        raise AssertionError("subfield multiplicative group is not cyclic")

    @cached_property
    def omega(self):
        return primitive_root_of_unity(self)

    def in_subfield(self, x):
        return bool(self.field.pow(x, self.q) == x)


def subfield_elements(tower):
    return set(tower.subfield.tolist())


def primitive_root_of_unity(tower):
    """omega = g**((q-1)/d) for the least-index generator g of GF(q)*."""
    q, d = tower.q, tower.d
    if (q - 1) % d:
        raise InputError(f"d = {d} does not divide q - 1 = {q - 1}")
    F = tower.field
    w = F.pow(tower.subfield_generator, (q - 1) // d)
    if F.pow(w, d) != 1 or any(F.pow(w, e) == 1 for e in range(1, d)):
        raise AssertionError("root of unity has the wrong order")
    return w


def trace(tower, x):
    """Relative trace x + x^q + ... + x^(q^(d-1)) onto GF(q)."""
    F = tower.field
    x = np.asarray(x, dtype=np.int64)
    terms = np.stack([np.asarray(F.frobenius(x, i, tower.q)) for i in range(tower.d)], axis=-1)
    return F.sum(terms, axis=-1)
