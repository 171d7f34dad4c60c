"""The group of bijections of A that permute the fibers of a surjection phi.

A bijection f belongs to the group when phi(a) == phi(b) forces
phi(f(a)) == phi(f(b)) and the induced map pi_f on S is a bijection.  With
all fibers of size n/d the group has ((n/d)!)^d * d! elements; the bijections
with pi_f = id form a normal subgroup of order ((n/d)!)^d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .squares import MapTable
from .errors import CeilingExceeded, InputError

DEFAULT_GROUP_CEILING = 8


@dataclass(frozen=True)
class CompatibleBijection:
    f: tuple
    pi: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(x) for x in self.f))
        object.__setattr__(self, "pi", tuple(int(x) for x in self.pi))


@dataclass
class GroupCensus:
    phi: MapTable
    elements: list
    is_homomorphism: bool = False

    @property
    def n(self):
        return self.phi.dom_size

    @property
    def d(self):
        return self.phi.cod_size

    @property
    def order(self):
        return len(self.elements)

    @property
    def base(self):
        identity = tuple(range(self.d))
        return [e for e in self.elements if e.pi == identity]

    @property
    def base_order(self):
        return len(self.base)

    def summary(self):
        equal = len(set(np.bincount(self.phi.images, minlength=self.d).tolist())) == 1
        expected = wreath_order(self.n, self.d) if equal else None
        return {
            "n": self.n,
            "d": self.d,
            "order": self.order,
            "base_order": self.base_order,
            "wreath_order": expected,
            "match": None if expected is None else expected == self.order,
            "is_homomorphism": self.is_homomorphism,
        }


@dataclass
class Report:
    ok: bool
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)


def wreath_order(n, d):
    """((n/d)!)^d * d!, the order of S_{n/d} wr S_d."""
    if d < 1 or n < 1 or n % d:
        raise InputError(f"d = {d} does not divide n = {n}")
    return factorial(n // d) ** d * factorial(d)


def induced_pi(f, phi):
    """pi with pi(phi(a)) == phi(f(a)), or None when no such map exists."""
    pi = [-1] * phi.cod_size
    for a, fa in enumerate(f):
        s, t = int(phi.images[a]), int(phi.images[fa])
        if pi[s] == -1:
            pi[s] = t
        elif pi[s] != t:
            return None
    return tuple(pi)


def is_cyclic_quotient(phi):
    """Whether phi is a homomorphism Z_n -> Z_d (addition mod n, mod d)."""
    n, d = phi.dom_size, phi.cod_size
    if n % d:
        return False
    img = phi.images
    a = np.arange(n)
    lhs = img[(a[:, None] + a[None, :]) % n]
    rhs = (img[:, None] + img[None, :]) % d
    return bool(np.array_equal(lhs, rhs))


def enumerate_G_phi(phi, ceiling=DEFAULT_GROUP_CEILING, strict=False):
    """Every phi-compatible bijection, built fiber by fiber.

    For each fiber-size-preserving pi on S, take every choice of bijections
    C_i -> C_pi(i) between fibers.  With ``strict`` the map phi must also be
    a homomorphism of cyclic groups Z_n -> Z_d.
    """
    n, d = phi.dom_size, phi.cod_size
    if n > ceiling:
        raise CeilingExceeded(f"|A| = {n} exceeds the group ceiling {ceiling}")
    if not phi.is_surjective():
        raise InputError("phi must be surjective")
    homomorphic = is_cyclic_quotient(phi)
    if strict and not homomorphic:
        raise InputError("phi is not a homomorphism Z_n -> Z_d")
    fibers = [list(c.tolist()) for c in phi.fibers()]
    sizes = [len(c) for c in fibers]
    elements = []
    for pi in itertools.permutations(range(d)):
        if any(sizes[i] != sizes[pi[i]] for i in range(d)):
            continue
        choices = [list(itertools.permutations(fibers[pi[i]])) for i in range(d)]
        for pick in itertools.product(*choices):
            f = [0] * n
            for i in range(d):
                for a, b in zip(fibers[i], pick[i]):
                    f[a] = b
            elements.append(CompatibleBijection(f, pi))
    return GroupCensus(phi, elements, homomorphic)


def compose_elements(g, f, phi):
    """g after f, with table and pi both checked."""
    table = tuple(g.f[x] for x in f.f)
    pi = tuple(g.pi[s] for s in f.pi)
    if induced_pi(f.f, phi) != f.pi or induced_pi(g.f, phi) != g.pi:
        raise InputError("element does not belong to the group of this phi")
    if induced_pi(table, phi) != pi:
        raise AssertionError("pi of a composite differs from the composite of the pis")
    return CompatibleBijection(table, pi)


def inverse_element(f):
    inv = [0] * len(f.f)
    for a, b in enumerate(f.f):
        inv[b] = a
    pinv = [0] * len(f.pi)
    for s, t in enumerate(f.pi):
        pinv[t] = s
    return CompatibleBijection(inv, pinv)


def _codes(tables, n):
    return np.asarray(tables, dtype=np.int64) @ (n ** np.arange(n, dtype=np.int64))


def _table_array(elements, n):
    return np.array([e.f for e in elements], dtype=np.int64).reshape(len(elements), n)


def verify_group_axioms(census):
    """Closure, identity and inverses over the full element list."""
    n = census.n
    G = _table_array(census.elements, n)
    codes = _codes(G, n)
    members = set(codes.tolist())
    violations = []
    identity_ok = int(_codes([list(range(n))], n)[0]) in members
    if not identity_ok:
        violations.append({"axiom": "identity"})
    inv = np.argsort(G, axis=1)
    inverse_missing = [i for i, c in enumerate(_codes(inv, n).tolist()) if c not in members]
    if inverse_missing:
        violations.append({"axiom": "inverse", "witness": list(census.elements[inverse_missing[0]].f)})
    closure_ok = True
    for i in range(len(G)):
        composite = G[:, G[i]]  # row j: g_j o f_i
        miss = np.nonzero(~np.isin(_codes(composite, n), codes))[0]
        if len(miss):
            j = int(miss[0])
            violations.append({
                "axiom": "closure",
                "witness": [list(census.elements[j].f), list(census.elements[i].f)],
            })
            closure_ok = False
            break
    checks = {
        "closure": closure_ok,
        "identity": identity_ok,
        "inverses": not inverse_missing,
    }
    return Report(all(checks.values()), checks, violations)


def verify_base_normal(census):
    """K = {f : pi_f = id} is a normal subgroup of the expected size."""
    n, d = census.n, census.d
    G = _table_array(census.elements, n)
    base = census.base
    K = _table_array(base, n)
    k_codes = _codes(K, n)
    violations = []
    closed = True
    for i in range(len(K)):
        if not np.all(np.isin(_codes(K[:, K[i]], n), k_codes)):
            closed = False
            violations.append({"check": "subgroup", "witness": list(base[i].f)})
            break
    G_inv = np.argsort(G, axis=1)
    normal = True
    for gi in range(len(G)):
        # g o k o g^-1, applied as x -> g[k[g_inv[x]]]
        conj = G[gi][K[:, G_inv[gi]]]
        miss = np.nonzero(~np.isin(_codes(conj, n), k_codes))[0]
        if len(miss):
            normal = False
            violations.append({
                "check": "normal",
                "witness": [list(census.elements[gi].f), list(base[int(miss[0])].f)],
            })
            break
    equal = n % d == 0 and len(set(np.bincount(census.phi.images, minlength=d).tolist())) == 1
    checks = {"subgroup": closed, "normal": normal}
    if equal:
        checks["base_order"] = len(K) == factorial(n // d) ** d
        checks["quotient_order"] = len(G) == len(K) * factorial(d)
    return Report(all(checks.values()), checks, violations)


def residue_phi(n, d):
    """a -> a mod d, the default equal-fiber surjection."""
    if d < 1 or n % d:
        raise InputError(f"d = {d} does not divide n = {n}")
    return MapTable(np.arange(n) % d, d)
