"""Commutative squares of maps between finite sets.

Carriers are integer ranges ``[0, size)`` and maps are ``MapTable`` image
arrays, so field instances plug in by passing element indices.  A square

    A --f--> A
    |phi     |psi
    v        v
    S --h--> S'

commutes when ``psi[f[a]] == h[phi[a]]`` for every a.  This module decides
bijectivity of f from such squares, builds the induced right-hand projection,
inverts f from several squares at once, and dualizes squares.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagramError, InputError, NotBijectiveError, VerificationError
from .field import exhaustive_ceiling


@dataclass(frozen=True, eq=False)
class MapTable:
    images: np.ndarray
    cod_size: int

    def __post_init__(self):
        images = np.array(self.images, dtype=np.int64).reshape(-1)
        if images.size and (images.min() < 0 or images.max() >= self.cod_size):
            raise InputError(f"image entry outside [0, {self.cod_size})")
        images.flags.writeable = False
        object.__setattr__(self, "images", images)
        object.__setattr__(self, "cod_size", int(self.cod_size))

    @classmethod
    def identity(cls, n):
        return cls(np.arange(n), n)

    @classmethod
    def of(cls, images, cod_size=None):
        images = list(images)
        return cls(images, cod_size if cod_size is not None else (max(images) + 1 if images else 0))

    @property
    def dom_size(self):
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __getitem__(self, a):
        return self.images[a]

    def __eq__(self, other):
        return (
            isinstance(other, MapTable)
            and self.cod_size == other.cod_size
            and np.array_equal(self.images, other.images)
        )

    def __repr__(self):
        return f"MapTable({self.images.tolist()}, cod_size={self.cod_size})"

    def then(self, g):
        """g after self."""
        if g.dom_size != self.cod_size:
            raise InputError("composition of maps with mismatched carriers")
        return MapTable(g.images[self.images], g.cod_size)

    def is_injective(self):
        return len(np.unique(self.images)) == self.dom_size

    def is_surjective(self):
        return len(np.unique(self.images)) == self.cod_size

    def is_bijective(self):
        return self.dom_size == self.cod_size and self.is_injective()

    def collision(self):
        order = np.argsort(self.images, kind="stable")
        ordered = self.images[order]
        hits = np.nonzero(ordered[1:] == ordered[:-1])[0]
        if not len(hits):
            return None
        a, b = order[hits[0]], order[hits[0] + 1]
        return (int(min(a, b)), int(max(a, b)))

    def missed(self):
        """Some codomain point with no preimage, or None."""
        hit = np.zeros(self.cod_size, dtype=bool)
        hit[self.images] = True
        gaps = np.nonzero(~hit)[0]
        return int(gaps[0]) if len(gaps) else None

    def inverse(self):
        if not self.is_bijective():
            raise NotBijectiveError("map is not a bijection", witness=self.collision())
        inv = np.empty(self.dom_size, dtype=np.int64)
        inv[self.images] = np.arange(self.dom_size)
        return MapTable(inv, self.dom_size)

    def fibers(self):
        """Preimage lists indexed by codomain point."""
        order = np.argsort(self.images, kind="stable")
        bounds = np.searchsorted(self.images[order], np.arange(self.cod_size + 1))
        return [order[bounds[s]:bounds[s + 1]] for s in range(self.cod_size)]


def _check_surjective(m, name):
    gap = m.missed()
    if gap is not None:
        raise DiagramError(f"{name} is not surjective: {gap} has no preimage", witness=gap)


def commute_witness(f, phi, psi, h):
    """First a with psi(f(a)) != h(phi(a)), or None."""
    bad = np.nonzero(psi.images[f.images] != h.images[phi.images])[0]
    return int(bad[0]) if len(bad) else None


@dataclass(frozen=True, eq=False)
class Diagram:
    f: MapTable
    phi: MapTable
    psi: MapTable
    h: MapTable

    def __post_init__(self):
        n = self.f.dom_size
        if self.f.cod_size != n:
            raise InputError("f must map A to itself")
        if self.phi.dom_size != n or self.psi.dom_size != n:
            raise InputError("projections must be defined on A")
        if self.h.dom_size != self.phi.cod_size or self.h.cod_size != self.psi.cod_size:
            raise InputError("h must map the codomain of phi to the codomain of psi")

    @property
    def S(self):
        return self.phi.cod_size

    def commutes(self):
        return commute_witness(self.f, self.phi, self.psi, self.h) is None

    def validate(self):
        if self.phi.cod_size != self.psi.cod_size:
            raise DiagramError("the two bottom carriers differ in size")
        _check_surjective(self.phi, "phi")
        _check_surjective(self.psi, "psi")
        a = commute_witness(self.f, self.phi, self.psi, self.h)
        if a is not None:
            raise DiagramError(f"diagram does not commute at a = {a}", witness=a)

    def to_json(self):
        return {
            "f": self.f.images.tolist(),
            "phi": self.phi.images.tolist(),
            "psi": self.psi.images.tolist(),
            "h": self.h.images.tolist(),
            "S": self.S,
        }

    @classmethod
    def from_json(cls, obj):
        n, S = len(obj["f"]), int(obj["S"])
        return cls(
            MapTable(obj["f"], n),
            MapTable(obj["phi"], S),
            MapTable(obj["psi"], S),
            MapTable(obj["h"], S),
        )


def fiber_collision(f, phi):
    """A pair a != b in one fiber of phi with f(a) == f(b), or None."""
    key = phi.images * f.cod_size + f.images
    order = np.argsort(key, kind="stable")
    ordered = key[order]
    hits = np.nonzero(ordered[1:] == ordered[:-1])[0]
    if not len(hits):
        return None
    return (int(order[hits[0]]), int(order[hits[0] + 1]))


def square_criterion(d):
    """Bijectivity of f decided through the square.

    True iff h is a bijection and f is injective on every fiber of phi.
    The result is cross-checked against a direct bijectivity test of f.
    """
    d.validate()
    verdict = d.h.is_bijective() and fiber_collision(d.f, d.phi) is None
    direct = d.f.is_bijective()
    if verdict != direct:
        raise VerificationError(
            f"square verdict {verdict} disagrees with direct bijectivity {direct}",
            witness=d.to_json(),
        )
    return verdict


def induced_psi(f, phi, h):
    """The unique surjection psi with psi o f == h o phi.

    Requires f and h bijective and phi surjective; psi sends every point of
    f(phi^-1(s)) to h(s).
    """
    if not f.is_bijective():
        raise NotBijectiveError(
            "f is not a bijection, so images of fibers may overlap", witness=f.collision()
        )
    _check_surjective(phi, "phi")
    if not h.is_bijective():
        raise NotBijectiveError("h is not a bijection", witness=h.collision())
    psi = np.empty(f.dom_size, dtype=np.int64)
    psi[f.images] = h.images[phi.images]
    psi = MapTable(psi, h.cod_size)
    if commute_witness(f, phi, psi, h) is not None or not psi.is_surjective():
        raise VerificationError("constructed psi fails to commute or is not surjective")
    return psi


def joint_map(maps):
    """a -> (m_1(a), ..., m_t(a)) as a mixed-radix index, first factor most significant."""
    sizes = tuple(m.cod_size for m in maps)
    idx = np.ravel_multi_index(tuple(m.images for m in maps), sizes)
    return MapTable(idx, math.prod(sizes))


def left_inverse(joint):
    """Table on the joint codomain sending joint(a) back to a; -1 off the image."""
    pair = joint.collision()
    if pair is not None:
        raise NotBijectiveError("joint projection is not injective", witness=pair)
    out = np.full(joint.cod_size, -1, dtype=np.int64)
    out[joint.images] = np.arange(joint.dom_size)
    return out


@dataclass(frozen=True, eq=False)
class MultiDiagram:
    """t squares sharing f, with a recombiner from joint phi-tuples back to A.

    ``recombiner`` has one entry per mixed-radix index of S_1 x ... x S_t;
    entries off the joint image of phi may be -1.
    """

    f: MapTable
    phis: tuple
    psis: tuple
    hs: tuple
    recombiner: np.ndarray

    def __post_init__(self):
        t = len(self.phis)
        if not t or len(self.psis) != t or len(self.hs) != t:
            raise InputError("need the same positive number of phi, psi and h maps")
        for name in ("phis", "psis", "hs"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        rec = np.array(self.recombiner, dtype=np.int64).reshape(-1)
        size = math.prod(m.cod_size for m in self.phis)
        if rec.shape != (size,):
            raise InputError(f"recombiner needs {size} entries, got {rec.size}")
        rec.flags.writeable = False
        object.__setattr__(self, "recombiner", rec)

    @property
    def t(self):
        return len(self.phis)

    def diagram(self, i):
        return Diagram(self.f, self.phis[i], self.psis[i], self.hs[i])

    def validate(self):
        for i in range(self.t):
            try:
                self.diagram(i).validate()
            except DiagramError as exc:
                raise DiagramError(f"square {i}: {exc}", witness=exc.witness) from None
        joint = joint_map(self.phis).images
        back = self.recombiner[joint]
        bad = np.nonzero(back != np.arange(self.f.dom_size))[0]
        if len(bad):
            a = int(bad[0])
            raise DiagramError(f"recombiner does not recover a = {a} from its phi-tuple", witness=a)

    def to_json(self):
        return {
            "f": self.f.images.tolist(),
            "phi": [m.images.tolist() for m in self.phis],
            "psi": [m.images.tolist() for m in self.psis],
            "h": [m.images.tolist() for m in self.hs],
            "S": [m.cod_size for m in self.phis],
            "recombiner": self.recombiner.tolist(),
        }

    @classmethod
    def from_json(cls, obj):
        n = len(obj["f"])
        sizes = [int(s) for s in obj["S"]]
        return cls(
            MapTable(obj["f"], n),
            [MapTable(m, s) for m, s in zip(obj["phi"], sizes)],
            [MapTable(m, s) for m, s in zip(obj["psi"], sizes)],
            [MapTable(m, s) for m, s in zip(obj["h"], sizes)],
            obj["recombiner"],
        )


def _cross_validate(f, inverse, ceiling=None):
    if f.dom_size > exhaustive_ceiling(ceiling):
        return
    oracle = f.inverse()
    if inverse != oracle:
        a = int(np.nonzero(inverse.images != oracle.images)[0][0])
        raise VerificationError(f"inverse disagrees with brute force at {a}", witness=a)


def multi_diagram_inverse(md, ceiling=None):
    """f^-1(x) = F(h_1^-1(psi_1(x)), ..., h_t^-1(psi_t(x)))."""
    md.validate()
    h_invs = []
    for i, h in enumerate(md.hs):
        if not h.is_bijective():
            raise NotBijectiveError(
                f"h_{i} is not a bijection, so f is not one either",
                witness=h.collision(),
                index=i,
            )
        h_invs.append(h.inverse())
    if not md.f.is_bijective():
        raise NotBijectiveError("f is not a bijection", witness=md.f.collision())
    pulled = [psi.then(h_inv) for psi, h_inv in zip(md.psis, h_invs)]
    idx = joint_map(pulled).images
    images = md.recombiner[idx]
    if np.any(images < 0):
        raise DiagramError("recombiner undefined on a needed tuple")
    result = MapTable(images, md.f.dom_size)
    _cross_validate(md.f, result, ceiling)
    return result


def generalized_inverse(phis, psis, h, f=None, ceiling=None):
    """f^-1 = phi^-1 o (h restricted to phi(A))^-1 o psi for joint projections.

    ``phis`` and ``psis`` are sequences of projections out of A whose joint
    maps are injective; ``h`` maps the joint phi-codomain to the joint
    psi-codomain.  When f is supplied the square is checked and the result
    compared against brute-force inversion.
    """
    phi = joint_map(phis)
    psi = joint_map(psis)
    if h.dom_size != phi.cod_size or h.cod_size != psi.cod_size:
        raise InputError("h must map the joint phi-codomain to the joint psi-codomain")
    phi_back = left_inverse(phi)
    psi_pair = psi.collision()
    if psi_pair is not None:
        raise NotBijectiveError("joint psi is not injective", witness=psi_pair)
    if f is not None:
        a = commute_witness(f, phi, psi, h)
        if a is not None:
            raise DiagramError(f"square does not commute at a = {a}", witness=a)
    restricted = h.images[phi.images]
    order = np.argsort(restricted, kind="stable")
    ordered = restricted[order]
    hits = np.nonzero(ordered[1:] == ordered[:-1])[0]
    if len(hits):
        a, b = int(order[hits[0]]), int(order[hits[0] + 1])
        raise NotBijectiveError(
            "h is not injective on phi(A), so f is not a bijection",
            witness=(int(phi.images[a]), int(phi.images[b])),
        )
    h_back = np.full(h.cod_size, -1, dtype=np.int64)
    h_back[restricted] = phi.images
    tuples = h_back[psi.images]
    if np.any(tuples < 0):
        x = int(np.nonzero(tuples < 0)[0][0])
        raise NotBijectiveError(f"psi({x}) is not in h(phi(A))", witness=x)
    result = MapTable(phi_back[tuples], phi.dom_size)
    if f is not None:
        _cross_validate(f, result, ceiling)
    return result


def dual_diagram(d):
    """The square for f^-1: projections swapped, bottom map inverted."""
    d.validate()
    if not d.f.is_bijective():
        raise NotBijectiveError("f is not a bijection", witness=d.f.collision())
    if not d.h.is_bijective():
        raise NotBijectiveError("h is not a bijection", witness=d.h.collision())
    dual = Diagram(d.f.inverse(), d.psi, d.phi, d.h.inverse())
    a = commute_witness(dual.f, dual.phi, dual.psi, dual.h)
    if a is not None:
        raise VerificationError(f"dual square fails to commute at {a}", witness=a)
    return dual
