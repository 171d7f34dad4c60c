"""Reduced polynomials and exhaustive function tables over a FieldCtx.

Every self-map of GF(Q) is induced by exactly one polynomial of degree < Q,
so ``Poly`` (coefficients reduced mod x^Q - x) and ``FuncTable`` (the list of
all Q images) are two encodings of the same object.  Conversions between them
are exact; comparisons between a closed-form result and a brute-force oracle
can therefore be done on either side.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import InputError, NotBijectiveError
from .field import FieldCtx, parse_field_spec
from .transform import group_dft

# Below this order tables are built by Horner and interpolation is Lagrange.
DIRECT_LIMIT = 256


def _check_same_field(a, b):
    if a != b:
        raise InputError(f"field mismatch: {a.spec} vs {b.spec}")


def _reduce(F, coeffs):
    Q = F.order
    coeffs = [int(c) for c in coeffs]
    if any(c < 0 or c >= Q for c in coeffs):
        raise InputError(f"coefficient outside GF({Q})")
    if len(coeffs) > Q:
        # x^k == x^(((k - 1) mod (Q - 1)) + 1) as functions for k >= 1
        folded = coeffs[:Q]
        for k in range(Q, len(coeffs)):
            if coeffs[k]:
                t = (k - 1) % (Q - 1) + 1
                folded[t] = F.add(folded[t], coeffs[k])
        coeffs = folded
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True, eq=False)
class Poly:
    """Polynomial over ``field``, coefficients low-degree-first, reduced."""

    field: FieldCtx
    coeffs: tuple
    _table: np.ndarray | None = dc_field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _reduce(self.field, self.coeffs))

    @classmethod
    def monomial(cls, F, k, c=1):
        return cls(F, (0,) * k + (c,))

    @classmethod
    def x(cls, F):
        return cls.monomial(F, 1)

    @classmethod
    def constant(cls, F, c):
        return cls(F, (c,))

    @classmethod
    def parse(cls, F, text):
        """Read the ``"c0,c1,c2,..."`` element-index format."""
        try:
            coeffs = [int(c) for c in text.replace(" ", "").split(",") if c != ""]
        except ValueError:
            raise InputError(f"cannot parse polynomial {text!r}") from None
        return cls(F, coeffs)

    def format(self):
        return ",".join(str(c) for c in self.coeffs) or "0"

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in reversed(list(enumerate(self.coeffs))):
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms)

    def __call__(self, x):
        return eval_poly(self, x)

    def to_table(self):
        return to_table(self)


@dataclass(frozen=True, eq=False)
class FuncTable:
    """A self-map of ``domain`` stored as its image sequence."""

    domain: FieldCtx
    images: np.ndarray

    def __post_init__(self):
        images = np.array(self.images, dtype=np.int64)
        if images.shape != (self.domain.order,):
            raise InputError(f"table needs {self.domain.order} images, got {images.shape}")
        if images.size and (images.min() < 0 or images.max() >= self.domain.order):
            raise InputError("image index out of range")
        images.flags.writeable = False
        object.__setattr__(self, "images", images)

    def __eq__(self, other):
        return (
            isinstance(other, FuncTable)
            and self.domain == other.domain
            and np.array_equal(self.images, other.images)
        )

    def __getitem__(self, x):
        return self.images[x]

    def then(self, g):
        """The table of g after self, i.e. g(self(x))."""
        _check_same_field(self.domain, g.domain)
        return FuncTable(self.domain, g.images[self.images])

    def to_json(self):
        return {"field": self.domain.spec, "images": self.images.tolist()}

    @classmethod
    def from_json(cls, obj, ceiling=None):
        return cls(parse_field_spec(obj["field"], ceiling=ceiling), obj["images"])

    @classmethod
    def identity(cls, F):
        return cls(F, F.elements())


def eval_poly(f, x):
    """Horner evaluation; x may be an element or an array of elements."""
    F = f.field
    x = np.asarray(x, dtype=np.int64)
    acc = np.zeros(x.shape, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = np.asarray(F.add(F.mul(acc, x), c))
    return int(acc) if acc.ndim == 0 else acc


def _table_by_transform(f):
    F = f.field
    Q = F.order
    N = Q - 1
    c = np.zeros(Q, dtype=np.int64)
    c[: len(f.coeffs)] = f.coeffs
    # on nonzero x, x^(Q-1) == x^0
    b = c[:N].copy()
    b[0] = F.add(c[0], c[N])
    values = group_dft(F, b, sign=1)
    table = np.zeros(Q, dtype=np.int64)
    table[0] = c[0]
    table[F.exp[:N]] = values
    return table


def to_table(f):
    if f._table is not None:
        return FuncTable(f.field, f._table)
    F = f.field
    if F.order <= DIRECT_LIMIT or f.degree < 16:
        images = eval_poly(f, F.elements())
    else:
        images = _table_by_transform(f)
    return FuncTable(F, images)


def interpolate_lagrange(T):
    """Reference interpolation through all Q points.

    Uses the Lagrange basis L_a(x) = 1 - (x - a)^(Q-1); expanding the power
    over GF(p) gives coefficient k of L_a as -a^(Q-1-k) for k >= 1.  O(Q^2).
    """
    F = T.domain
    Q = F.order
    xs = F.elements()
    ys = T.images
    coeffs = [int(ys[0])]
    for k in range(1, Q):
        terms = F.mul(ys, F.pow(xs, Q - 1 - k))
        coeffs.append(F.neg(F.sum(terms)))
    return Poly(F, coeffs)


def interpolate_transform(T):
    """Fast interpolation via one multiplicative-group transform."""
    F = T.domain
    Q = F.order
    N = Q - 1
    ys = T.images
    if Q == 2:
        return interpolate_lagrange(T)
    on_group = ys[F.exp[:N]]
    # c_k = -sum_{x != 0} f(x) x^(-k) for 1 <= k <= Q-2
    sums = group_dft(F, on_group, sign=-1)
    coeffs = np.zeros(Q, dtype=np.int64)
    coeffs[0] = ys[0]
    coeffs[1:N] = F.neg(sums[1:N])
    coeffs[N] = F.neg(F.add(ys[0], sums[0]))
    return Poly(F, coeffs.tolist())


def interpolate(T, method="auto"):
    if method == "auto":
        method = "lagrange" if T.domain.order <= DIRECT_LIMIT else "transform"
    if method == "lagrange":
        poly = interpolate_lagrange(T)
    elif method == "transform":
        poly = interpolate_transform(T)
    else:
        raise InputError(f"unknown interpolation method {method!r}")
    object.__setattr__(poly, "_table", T.images)
    return poly


def collision(T):
    """A pair (a, b), a < b, with T[a] == T[b]; None when T is injective."""
    images = T.images if isinstance(T, FuncTable) else np.asarray(T)
    order = np.argsort(images, kind="stable")
    ordered = images[order]
    hits = np.nonzero(ordered[1:] == ordered[:-1])[0]
    if not len(hits):
        return None
    a, b = order[hits[0]], order[hits[0] + 1]
    return (int(min(a, b)), int(max(a, b)))


def is_permutation(T):
    images = T.images
    return bool(np.array_equal(np.sort(images), np.arange(len(images))))


def brute_inverse(T):
    pair = collision(T)
    if pair is not None:
        raise NotBijectiveError(f"not a permutation: {pair[0]} and {pair[1]} share an image", witness=pair)
    inv = np.empty_like(T.images)
    inv[T.images] = np.arange(len(T.images))
    return FuncTable(T.domain, inv)


def is_involution(T):
    return bool(np.array_equal(T.images[T.images], np.arange(len(T.images))))


def _poly_mul(F, a, b):
    if not a or not b:
        return []
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    prods = F.mul(a[:, None], b[None, :])
    out = []
    for k in range(len(a) + len(b) - 1):
        i = np.arange(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1)
        out.append(F.sum(prods[i, k - i]))
    return out


def _poly_add(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [F.add(x, y) for x, y in zip(a, b)]


def compose_direct(g, f):
    """g(f(x)) by Horner substitution on coefficient lists."""
    _check_same_field(g.field, f.field)
    F = g.field
    acc = []
    for c in reversed(g.coeffs):
        acc = list(_reduce(F, _poly_mul(F, acc, f.coeffs)))
        acc = _poly_add(F, acc, [c])
    return Poly(F, acc)


def compose_tables(g, f):
    _check_same_field(g.field, f.field)
    return interpolate(to_table(f).then(to_table(g)))


def compose(g, f):
    """Reduced polynomial of g(f(x))."""
    _check_same_field(g.field, f.field)
    if max(g.degree, 0) * max(f.degree, 0) < g.field.order:
        return compose_direct(g, f)
    return compose_tables(g, f)
