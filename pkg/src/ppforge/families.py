"""Permutation polynomial families over GF(q^d) built from q-linear projections.

Two projections do the work:

* the twisted traces ``A_i(x) = sum_t w^(i*t) x^(q^(d-1-t))`` for a primitive
  d-th root of unity w in GF(q), whose images B_i are GF(q)-lines;
* the relative trace ``Tr(x)`` together with ``x^q - x``.

Each family comes with a bijectivity predicate, a closed-form inverse, and
the commuting squares that justify both.  All closed forms are checked
against exhaustive tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

from .squares import Diagram, MapTable, MultiDiagram
from .errors import InputError, NotBijectiveError, VerificationError
from .field import TowerCtx, trace
from .polyfun import FuncTable, Poly, brute_inverse, collision, interpolate, is_involution


@dataclass
class Report:
    ok: bool
    checks: dict = field(default_factory=dict)
    findings: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def _first_mismatch(a, b):
    bad = np.nonzero(np.asarray(a) != np.asarray(b))[0]
    return int(bad[0]) if len(bad) else None


# ---------------------------------------------------------------- A_i basis

class AiBasis:
    """The d projections A_0..A_{d-1} over a tower with d | q - 1.

    Construction verifies the power law A_i^q = w^i A_i, the line structure
    of every image B_i, and x = (1/d) sum_i w^i A_i(x), all exhaustively.
    """

    def __init__(self, tower):
        self.tower = tower
        self.omega = tower.omega
        F = tower.field
        q, d = tower.q, tower.d
        xs = F.elements()
        frobs = np.stack([F.frobenius(xs, s, q) for s in range(d)])
        tables = []
        for i in range(d):
            terms = np.stack([
                F.mul(F.pow(self.omega, i * t), frobs[d - 1 - t]) for t in range(d)
            ], axis=-1)
            tables.append(F.sum(terms, axis=-1))
        self.tables = np.stack(tables)
        self.tables.flags.writeable = False
        self.lines = [np.unique(t) for t in self.tables]
        self.reps = [int(t[np.nonzero(t)[0][0]]) for t in self.tables]
        for name, rep in (
            ("power law", check_power_law(self)),
            ("line structure", check_lines(self)),
            ("reconstruction", check_ai_reconstruction(self)),
        ):
            if not rep.ok:
                raise VerificationError(f"A_i basis fails the {name}", witness=rep.findings)

    @property
    def d(self):
        return self.tower.d

    @cached_property
    def polys(self):
        F = self.tower.field
        q, d = self.tower.q, self.d
        out = []
        for i in range(d):
            coeffs = [0] * (q ** (d - 1) + 1)
            for t in range(d):
                coeffs[q ** (d - 1 - t)] = F.pow(self.omega, i * t)
            out.append(Poly(F, coeffs))
        return out


def build_basis(tower):
    return AiBasis(tower)


def check_power_law(basis):
    """A_i(x)^q == w^i A_i(x) for all x and i."""
    F = basis.tower.field
    findings = []
    for i, table in enumerate(basis.tables):
        lhs = F.pow(table, basis.tower.q)
        rhs = F.mul(F.pow(basis.omega, i), table)
        x = _first_mismatch(lhs, rhs)
        if x is not None:
            findings.append({"i": i, "x": x})
    return Report(not findings, {"power_law": not findings}, findings)


def check_lines(basis):
    """Each B_i is {0} together with y_i * GF(q)^*, so |B_i| = q."""
    F = basis.tower.field
    sub = basis.tower.subfield
    findings = []
    for i, (line, y) in enumerate(zip(basis.lines, basis.reps)):
        expected = np.unique(F.mul(y, sub))
        if not np.array_equal(line, expected) or len(line) != basis.tower.q:
            findings.append({"i": i, "size": int(len(line))})
            continue
        scaled = np.unique(F.mul(sub[:, None], line[None, :]))
        if not np.array_equal(scaled, line):
            findings.append({"i": i, "closed": False})
    return Report(not findings, {"lines": not findings}, findings)


def check_ai_reconstruction(basis):
    """x == (1/d) sum_i w^i A_i(x) over the whole field."""
    F = basis.tower.field
    d = basis.d
    terms = np.stack([F.mul(F.pow(basis.omega, i), basis.tables[i]) for i in range(d)], axis=-1)
    rebuilt = F.mul(F.inv(F.element(d)), F.sum(terms, axis=-1))
    x = _first_mismatch(rebuilt, F.elements())
    return Report(x is None, {"ai_reconstruction": x is None}, [] if x is None else [{"x": x}])


def check_composition_law(basis, m):
    """Which constant makes A_j(A_i(x)^m) = c * A_i(x)^m when j = i*m mod d.

    Two candidates are tested pointwise: c = d and c = d * w^(-j).  When
    j != i*m mod d the composite must vanish.  The report records, per (i, j),
    which candidates held.
    """
    F = basis.tower.field
    q, d = basis.tower.q, basis.d
    dd = F.element(d)
    findings = []
    laws = {}
    for i in range(d):
        power = F.pow(basis.tables[i], m)
        frob = np.stack([F.frobenius(power, s, q) for s in range(d)])
        for j in range(d):
            terms = np.stack([
                F.mul(F.pow(basis.omega, j * t), frob[d - 1 - t]) for t in range(d)
            ], axis=-1)
            composite = F.sum(terms, axis=-1)
            if (j - i * m) % d:
                ok = not np.any(composite)
                laws[(i, j)] = "zero" if ok else "none"
                if not ok:
                    findings.append({"i": i, "j": j, "law": "zero"})
                continue
            stated = bool(np.array_equal(composite, F.mul(dd, power)))
            twisted = bool(np.array_equal(
                composite, F.mul(F.mul(dd, F.pow(basis.omega, (-j) % d)), power)
            ))
            laws[(i, j)] = (
                "both" if stated and twisted
                else "stated" if stated
                else "twisted" if twisted
                else "none"
            )
            if not twisted:
                findings.append({"i": i, "j": j, "law": laws[(i, j)]})
    checks = {
        "zero_law": all(v == "zero" for (i, j), v in laws.items() if (j - i * m) % d),
        "twisted_law": all(v in ("both", "twisted") for (i, j), v in laws.items() if not (j - i * m) % d),
        "stated_law": all(v in ("both", "stated") for (i, j), v in laws.items() if not (j - i * m) % d),
    }
    ok = checks["zero_law"] and checks["twisted_law"]
    rep = Report(ok, checks, findings)
    rep.laws = {f"{i},{j}": v for (i, j), v in sorted(laws.items())}
    return rep


def reconstruction_identities(tower):
    """Both recovery identities, exhaustively.

    * x == (1/d) sum_i w^i A_i(x)   (only when d | q - 1)
    * d*x == Tr(x) - sum_{j=1}^{d-1} j (x^q - x)^(q^(d-1-j))
    """
    F = tower.field
    q, d = tower.q, tower.d
    xs = F.elements()
    checks = {}
    findings = []
    if (q - 1) % d == 0:
        rep = check_ai_reconstruction(AiBasis(tower))
        checks.update(rep.checks)
        findings.extend(rep.findings)
    diff = F.sub(F.frobenius(xs, 1, q), xs)
    rhs = trace(tower, xs)
    for j in range(1, d):
        rhs = F.sub(rhs, F.mul(F.element(j), F.frobenius(diff, d - 1 - j, q)))
    x = _first_mismatch(F.mul(F.element(d), xs), rhs)
    checks["trace_reconstruction"] = x is None
    if x is not None:
        findings.append({"identity": "trace", "x": x})
    return Report(all(checks.values()), checks, findings)


# ------------------------------------------------------- sum of A_i powers

@dataclass(frozen=True)
class AiSumParams:
    tower: TowerCtx
    u: tuple
    m: tuple

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(int(x) for x in self.u))
        object.__setattr__(self, "m", tuple(int(x) for x in self.m))
        d = self.tower.d
        if d < 2:
            raise InputError("d must be at least 2")
        if (self.tower.q - 1) % d:
            raise InputError(f"d = {d} must divide q - 1 = {self.tower.q - 1}")
        if len(self.u) != d or len(self.m) != d:
            raise InputError(f"need exactly {d} coefficients and exponents")
        if any(k < 1 for k in self.m):
            raise InputError("exponents must be positive")
        if not all(self.tower.in_subfield(x) for x in self.u):
            raise InputError("coefficients must lie in GF(q)")

    @property
    def targets(self):
        """j(i) = i * m_i mod d."""
        d = self.tower.d
        return tuple(i * mi % d for i, mi in enumerate(self.m))

    @property
    def modulus(self):
        return self.tower.d * (self.tower.q - 1)

    def exponents(self):
        """r_i with m_i r_i == 1 mod d(q-1), or None where no such r_i exists."""
        return tuple(
            pow(mi, -1, self.modulus) if math.gcd(mi, self.modulus) == 1 else None
            for mi in self.m
        )


@dataclass
class PPVerdict:
    is_pp: bool
    conditions: dict
    exhaustive: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.is_pp


_BASES = {}


def basis_for(tower):
    key = (tower.q, tower.d, tower.field.spec)
    if key not in _BASES:
        _BASES[key] = AiBasis(tower)
    return _BASES[key]


def ai_sum_table(params, basis=None):
    basis = basis or basis_for(params.tower)
    F = params.tower.field
    terms = np.stack([
        F.mul(ui, F.pow(basis.tables[i], mi)) for i, (ui, mi) in enumerate(zip(params.u, params.m))
    ], axis=-1)
    return FuncTable(F, F.sum(terms, axis=-1))


def ai_sum_conditions(params):
    d, q = params.tower.d, params.tower.q
    return {
        "complete_residues": sorted(params.targets) == list(range(d)),
        "u_nonzero": all(params.u),
        "gcd_m_q_minus_1": math.gcd(math.prod(params.m), q - 1) == 1,
    }


def ai_sum_is_pp(params, basis=None):
    conditions = ai_sum_conditions(params)
    table = ai_sum_table(params, basis)
    pair = collision(table)
    return PPVerdict(all(conditions.values()), conditions, pair is None, pair)


def ai_sum_build(params, basis=None):
    return interpolate(ai_sum_table(params, basis))


def _line_inverse(F, line, c, m, r):
    """Inverse of a -> c a^m on a line, as a lookup from image to preimage.

    Uses a -> c^-r b^r when r is known, exhaustive search over the line
    otherwise.
    """
    if r is not None:
        return lambda b: F.mul(F.pow(F.inv(c), r), F.pow(b, r))
    images = F.mul(c, F.pow(line, m))
    lookup = np.zeros(F.order, dtype=np.int64)
    if len(np.unique(images)) != len(line):
        raise NotBijectiveError("line map is not injective")
    lookup[images] = line
    return lambda b: lookup[np.asarray(b, dtype=np.int64)]


def line_constants(params):
    """c_i = d * u_i * w^(-j(i)) for each i."""
    F = params.tower.field
    d = params.tower.d
    w = params.tower.omega
    return [
        F.mul(F.element(d), F.mul(ui, F.pow(w, (-j) % d)))
        for ui, j in zip(params.u, params.targets)
    ]


def ai_sum_inverse_table(params, basis=None):
    basis = basis or basis_for(params.tower)
    verdict = ai_sum_is_pp(params, basis)
    if not verdict.is_pp:
        raise NotBijectiveError(
            f"parameters fail {[k for k, v in verdict.conditions.items() if not v]}",
            witness=verdict.witness,
        )
    F = params.tower.field
    d = params.tower.d
    w = params.tower.omega
    terms = []
    for i, (c, j, mi, ri) in enumerate(zip(line_constants(params), params.targets, params.m, params.exponents())):
        undo = _line_inverse(F, basis.lines[i], c, mi, ri)
        terms.append(F.mul(F.pow(w, i), undo(basis.tables[j])))
    total = F.sum(np.stack(terms, axis=-1), axis=-1)
    return FuncTable(F, F.mul(F.inv(F.element(d)), total))


def ai_sum_inverse(params, basis=None, verify=True):
    """Closed-form inverse (1/d) sum_i w^i (d u_i w^-j)^(-r_i) A_j(x)^(r_i)."""
    table = ai_sum_inverse_table(params, basis)
    if verify:
        _verify_inverse(ai_sum_table(params, basis), table)
    return interpolate(table)


def _verify_inverse(f_table, inv_table):
    oracle = brute_inverse(f_table)
    x = _first_mismatch(oracle.images, inv_table.images)
    if x is not None:
        raise VerificationError(f"closed-form inverse differs from brute force at {x}", witness=x)


# ------------------------------------------------------------- involutions

def involution_condition(tower, u):
    """u_i * w^i takes the same value for every i."""
    F = tower.field
    w = tower.omega
    vals = {F.mul(int(ui), F.pow(w, i)) for i, ui in enumerate(u)}
    return len(vals) == 1 and 0 not in vals


def ai_involution_table(tower, u, basis=None):
    q, d = tower.q, tower.d
    return ai_sum_table(AiSumParams(tower, u, (q**d - 2,) * d), basis)


def ai_involution(tower, u, basis=None):
    """sum_i u_i A_i(x)^(q^d - 2), required to satisfy the involution condition."""
    if not involution_condition(tower, u):
        raise InputError("u_i * w^i must be the same nonzero value for every i")
    table = ai_involution_table(tower, u, basis)
    if not is_involution(table):
        raise VerificationError("constructed polynomial is not an involution")
    return interpolate(table)


def involution_census(tower, basis=None):
    """Count involutions among all u in (GF(q)^*)^d, split by the condition."""
    sub = [int(x) for x in tower.subfield if x]
    counts = {"with_condition": 0, "without_condition": 0, "condition_not_involution": 0}
    for u in product(sub, repeat=tower.d):
        inv = is_involution(ai_involution_table(tower, u, basis))
        cond = involution_condition(tower, u)
        if inv and cond:
            counts["with_condition"] += 1
        elif inv:
            counts["without_condition"] += 1
        elif cond:
            counts["condition_not_involution"] += 1
    return counts


# --------------------------------------------------------- trace-based PPs

@dataclass(frozen=True)
class TraceParams:
    tower: TowerCtx
    u1: int
    u2: int
    m: int

    def __post_init__(self):
        t = self.tower
        if math.gcd(t.q, t.d) != 1:
            raise InputError(f"gcd(q, d) = gcd({t.q}, {t.d}) must be 1")
        if self.m < 1:
            raise InputError("m must be positive")
        for name in ("u1", "u2"):
            v = getattr(self, name)
            if not v or not t.in_subfield(v):
                raise InputError(f"{name} must be a nonzero element of GF(q)")

    @property
    def r(self):
        q = self.tower.q
        return pow(self.m, -1, q - 1) if math.gcd(self.m, q - 1) == 1 else None


def _diff(tower, xs):
    F = tower.field
    return F.sub(F.frobenius(xs, 1, tower.q), xs)


def _weighted_frobenius_sum(tower, xs):
    """sum_{i=1}^{d-1} i * x^(q^(d-1-i))."""
    F = tower.field
    q, d = tower.q, tower.d
    out = np.zeros(np.shape(xs), dtype=np.int64)
    for i in range(1, d):
        out = F.add(out, F.mul(F.element(i), F.frobenius(xs, d - 1 - i, q)))
    return np.asarray(out)


def trace_table(params):
    tower = params.tower
    F = tower.field
    xs = F.elements()
    tr = trace(tower, xs)
    vals = F.add(F.mul(params.u1, _diff(tower, xs)), F.mul(params.u2, F.pow(tr, params.m)))
    return FuncTable(F, vals)


def trace_is_pp(params):
    q = params.tower.q
    conditions = {"gcd_m_q_minus_1": math.gcd(params.m, q - 1) == 1}
    pair = collision(trace_table(params))
    return PPVerdict(conditions["gcd_m_q_minus_1"], conditions, pair is None, pair)


def trace_build(params):
    return interpolate(trace_table(params))


def trace_inverse_table(params):
    verdict = trace_is_pp(params)
    if not verdict.is_pp:
        raise NotBijectiveError(f"gcd({params.m}, q - 1) != 1", witness=verdict.witness)
    tower = params.tower
    F = tower.field
    d = tower.d
    xs = F.elements()
    tr = trace(tower, xs)
    inv_d = F.inv(F.element(d))
    inv_du1 = F.inv(F.mul(F.element(d), params.u1))
    lead = F.mul(inv_d, F.pow(F.inv(F.mul(params.u2, F.element(d))), params.r))
    # (d-1)/(2 d u1) written as (d(d-1)/2) / (d^2 u1), exact in every characteristic
    mid = F.mul(F.element(d * (d - 1) // 2), F.inv(F.mul(F.element(d * d), params.u1)))
    vals = F.add(F.mul(lead, F.pow(tr, params.r)), F.mul(mid, tr))
    vals = F.sub(vals, F.mul(inv_du1, _weighted_frobenius_sum(tower, xs)))
    return FuncTable(F, vals)


def trace_inverse(params, verify=True):
    """(1/d)(u2 d)^-r Tr^r + (d-1)/(2 d u1) Tr - (1/(d u1)) sum_i i x^(q^(d-1-i))."""
    table = trace_inverse_table(params)
    if verify:
        _verify_inverse(trace_table(params), table)
    return interpolate(table)


# ----------------------------------------------------------------- squares

def _labels(values):
    labels = np.unique(values)
    return labels, np.searchsorted(labels, values)


def field_square(f_images, phi_vals, psi_vals, h):
    """A Diagram over GF(Q) with bottom carriers relabeled to 0..|S|-1.

    ``h`` maps an array of phi-values (field elements) to psi-values.
    """
    f_images = np.asarray(f_images)
    Q = len(f_images)
    s_labels, phi_idx = _labels(phi_vals)
    t_labels, psi_idx = _labels(psi_vals)
    h_vals = np.asarray(h(s_labels), dtype=np.int64)
    pos = np.searchsorted(t_labels, h_vals)
    pos = np.minimum(pos, len(t_labels) - 1)
    if not np.array_equal(t_labels[pos], h_vals):
        raise VerificationError("bottom map leaves the psi image")
    return Diagram(
        MapTable(f_images, Q),
        MapTable(phi_idx, len(s_labels)),
        MapTable(psi_idx, len(t_labels)),
        MapTable(pos, len(t_labels)),
    )


def ai_sum_squares(params, basis=None):
    """One square per i: A_i on the left, A_j(i) on the right."""
    basis = basis or basis_for(params.tower)
    F = params.tower.field
    f = ai_sum_table(params, basis).images
    out = []
    for i, (c, j, mi) in enumerate(zip(line_constants(params), params.targets, params.m)):
        out.append(field_square(
            f, basis.tables[i], basis.tables[j],
            lambda a, c=c, mi=mi: F.mul(c, F.pow(a, mi)),
        ))
    return out


def trace_squares(params):
    """Squares (Tr, Tr, d u2 a^m) and (x^q - x, x^q - x, u1 (b^q - b))."""
    tower = params.tower
    F = tower.field
    xs = F.elements()
    f = trace_table(params).images
    tr = trace(tower, xs)
    diff = _diff(tower, xs)
    scale = F.mul(F.element(tower.d), params.u2)
    return [
        field_square(f, tr, tr, lambda a: F.mul(scale, F.pow(a, params.m))),
        field_square(f, diff, diff, lambda b: F.mul(params.u1, _diff(tower, b))),
    ]


def _recombiner(phi_vals, combine):
    """Table of combine() over every tuple of bottom labels, mixed-radix order."""
    labels = [np.unique(v) for v in phi_vals]
    grids = np.meshgrid(*labels, indexing="ij")
    flat = [g.reshape(-1) for g in grids]
    return combine(*flat)


def ai_sum_multidiagram(params, basis=None):
    """The d squares with recombiner F(b) = (1/d) sum_i w^i b_i."""
    basis = basis or basis_for(params.tower)
    F = params.tower.field
    d = params.tower.d
    w = params.tower.omega
    squares = ai_sum_squares(params, basis)
    inv_d = F.inv(F.element(d))

    def combine(*bs):
        terms = np.stack([F.mul(F.pow(w, i), b) for i, b in enumerate(bs)], axis=-1)
        return F.mul(inv_d, F.sum(terms, axis=-1))

    rec = _recombiner(list(basis.tables), combine)
    sq0 = squares[0]
    return MultiDiagram(
        sq0.f, [s.phi for s in squares], [s.psi for s in squares], [s.h for s in squares], rec
    )


def trace_multidiagram(params):
    """Trace and x^q - x squares with recombiner F(s, z) = (s - L(z)) / d."""
    tower = params.tower
    F = tower.field
    xs = F.elements()
    squares = trace_squares(params)
    inv_d = F.inv(F.element(tower.d))

    def combine(s, z):
        return F.mul(inv_d, F.sub(s, _weighted_frobenius_sum(tower, z)))

    rec = _recombiner([trace(tower, xs), _diff(tower, xs)], combine)
    sq0 = squares[0]
    return MultiDiagram(
        sq0.f, [s.phi for s in squares], [s.psi for s in squares], [s.h for s in squares], rec
    )
