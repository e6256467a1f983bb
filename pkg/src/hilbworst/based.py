"""Moduli of based algebras and the correspondence with the chart equations.

A based algebra of dimension n+1 is a commutative associative unital algebra
with a fixed basis v_0, ..., v_n in which v_0 is the unit; it is recorded by
its structure constants s(i,j,k) via v_i * v_j = sum_k s(i,j,k) v_k.  The
moduli space is cut out by four polynomial families: symmetry of the
constants, the two unit-row normalizations, and the associator coefficients
(``associator_coeff``), mirrors of the quadrics of :mod:`.ideal` with the
index 0 included.

``structure_to_params`` / ``params_to_structure`` are the ring homomorphisms
that project the structure constants onto the deformation parameters and
embed them back; the projection eliminates the unit rows outright and sends
the k=0 column to the (normalized) diagonal quadric sums.  The composite is
the identity on every parameter, and both maps respect the two ideals,
certified generator by generator in ``verify_structure_correspondence``:
degree-2 images reduce against the generator span, the k=0 images against
the cubic certificate machinery, and the embedded generators reduce to
associator combinations modulo the substitution ideal of the unit and
symmetry relations (a zero reduction under ``reduce_unit_sym`` is an exact
witness of membership in that sub-ideal).

Multiplication tables (``MulTable``) hold rational or symbolic entries and
answer exact associativity queries; ``table_from_point`` converts a rational
point of the parameter space into the table of the corresponding fiber
algebra, using the sign convention of the universal family (structure
constants are the negated parameters).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .ideal import (
    IdealPresentation,
    _Dedup,
    diagonal_sum,
    ideal_generators,
    membership,
)
from .poly import Poly, PolyRing
from .taylor import pair


class MalformedTableError(ValueError):
    """A multiplication table violating symmetry or the unit rows."""


@lru_cache(maxsize=None)
def associator_coeff(n: int, i: int, j: int, k: int, l: int) -> Poly:
    """Coefficient of v_l in (v_j v_i) v_k - v_j (v_i v_k) for the generic
    structure constants: sum over lam of s(i,j,lam) s(k,lam,l) -
    s(i,k,lam) s(j,lam,l), indices from 0 to n."""
    ring = PolyRing.get(n)
    total = ring.zero()
    for lam in range(n + 1):
        total = total + ring.s(i, j, lam) * ring.s(k, lam, l)
        total = total - ring.s(i, k, lam) * ring.s(j, lam, l)
    return total


@lru_cache(maxsize=None)
def based_ideal_generators(n: int) -> IdealPresentation:
    """The four defining families: s(i,j,k)-s(j,i,k) for i < j; the unit
    rows s(0,i,i)-1 and s(0,i,j) for i != j; and the associator coefficients
    for j != k (deduplicated across the antisymmetry in j, k)."""
    if n < 3:
        raise ValueError(f"ambient n must be >= 3, got {n}")
    ring = PolyRing.get(n)
    dd = _Dedup()
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            for k in range(n + 1):
                dd.add(ring.s(i, j, k) - ring.s(j, i, k), f"sym({i},{j}|{k})")
    for i in range(n + 1):
        dd.add(ring.s(0, i, i) - ring.one(), f"unit({i})")
    for i in range(n + 1):
        for j in range(n + 1):
            if i != j:
                dd.add(ring.s(0, i, j), f"unit0({i}|{j})")
    for i in range(n + 1):
        for j in range(n + 1):
            for k in range(n + 1):
                for l in range(n + 1):
                    if j != k:
                        dd.add(
                            associator_coeff(n, i, j, k, l),
                            f"assoc({i},{j},{k}|{l})",
                        )
    return IdealPresentation(
        n=n,
        flavor="based_algebra",
        generators=tuple(dd.gens),
        labels=tuple(dd.labels),
        dropped_zero=dd.dropped_zero,
        dropped_duplicate=dd.dropped_duplicate,
    )


# -- multiplication tables -------------------------------------------------------


class MulTable:
    """Structure constants of an (n+1)-dimensional based algebra.

    Entries are stored for 1 <= i <= j <= n and 0 <= k <= n; the unit rows
    are implied.  Values may be Fractions or Polys (for symbolic tables).
    """

    def __init__(self, n: int, entries: dict):
        self.n = n
        self.entries = {}
        for (i, j, k), v in entries.items():
            if not (1 <= i <= self.n and 1 <= j <= self.n and 0 <= k <= self.n):
                raise MalformedTableError(f"entry index ({i},{j},{k}) out of range")
            key = pair(i, j) + (k,)
            if key in self.entries and self.entries[key] != v:
                raise MalformedTableError(
                    f"conflicting symmetric entries at {key}"
                )
            if v.is_zero if isinstance(v, Poly) else v == 0:
                continue
            self.entries[key] = v

    def value(self, i: int, j: int, k: int):
        """s(i,j,k) with the unit rows and symmetry applied."""
        if not (0 <= i <= self.n and 0 <= j <= self.n and 0 <= k <= self.n):
            raise MalformedTableError(f"index ({i},{j},{k}) out of range")
        if i == 0 or j == 0:
            other = j if i == 0 else i
            return Fraction(1) if other == k else Fraction(0)
        return self.entries.get(pair(i, j) + (k,), Fraction(0))

    @classmethod
    def square_zero(cls, n: int) -> "MulTable":
        return cls(n, {})

    @classmethod
    def generic(cls, n: int) -> "MulTable":
        """Symbolic table with one canonical s-variable per stored entry."""
        ring = PolyRing.get(n)
        entries = {
            (i, j, k): ring.s(i, j, k)
            for i in range(1, n + 1)
            for j in range(i, n + 1)
            for k in range(n + 1)
        }
        return cls(n, entries)

    @classmethod
    def from_full(cls, n: int, full: dict) -> "MulTable":
        """Build from a full (i,j,k) -> value map, checking the symmetry and
        unit-row constraints on the provided entries."""
        entries = {}
        for (i, j, k), v in full.items():
            v = Fraction(v) if not isinstance(v, Poly) else v
            if i == 0 or j == 0:
                other = j if i == 0 else i
                expected = Fraction(1) if other == k else Fraction(0)
                if v != expected:
                    raise MalformedTableError(
                        f"unit row violated at ({i},{j},{k})={v}"
                    )
                continue
            sym_key = (j, i, k)
            if sym_key in full and full[sym_key] != v:
                raise MalformedTableError(
                    f"symmetry violated at ({i},{j},{k})"
                )
            entries[(i, j, k)] = v
        return cls(n, entries)

    def as_full_dict(self) -> dict:
        return {
            (i, j, k): self.value(i, j, k)
            for i in range(self.n + 1)
            for j in range(self.n + 1)
            for k in range(self.n + 1)
        }


def associativity_residual(table: MulTable) -> dict:
    """Per index triple, the coordinates of (v_j v_i) v_k - v_j (v_i v_k);
    the table is associative iff every residual vector vanishes."""
    n = table.n
    out = {}
    for i in range(n + 1):
        for j in range(n + 1):
            for k in range(n + 1):
                vec = []
                for l in range(n + 1):
                    acc = None
                    for lam in range(n + 1):
                        term = table.value(i, j, lam) * table.value(
                            k, lam, l
                        ) - table.value(i, k, lam) * table.value(j, lam, l)
                        acc = term if acc is None else acc + term
                    vec.append(acc)
                out[(i, j, k)] = tuple(vec)
    return out


def is_associative(table: MulTable) -> bool:
    return all(
        all((v.is_zero if isinstance(v, Poly) else v == 0) for v in vec)
        for vec in associativity_residual(table).values()
    )


# -- the two ring homomorphisms -----------------------------------------------------


def _pi_value(n: int, i: int, j: int, k: int) -> Poly:
    ring = PolyRing.get(n)
    if (i == 0 and j != k) or (j == 0 and i != k):
        return ring.zero()
    if (i == 0 and j == k) or (j == 0 and i == k):
        return ring.one()
    if k == 0:
        return diagonal_sum(n, i, j) * Fraction(-1, n - 1)
    return ring.t(i, j, k)


@lru_cache(maxsize=None)
def _pi_table(n: int) -> dict:
    ring = PolyRing.get(n)
    return {v: _pi_value(n, v[1], v[2], v[3]) for v in ring.s_variables()}


def structure_to_params(p: Poly, n: int) -> Poly:
    """Projection of a structure-constant polynomial onto the deformation
    parameters: unit rows go to their constants, the k=0 column to the
    normalized diagonal quadric sums, everything else to t(i,j,k)."""
    if p.degree("x"):
        raise ValueError("projection acts on pure structure-constant polynomials")
    return p.substitute(_pi_table(n))


def params_to_structure(p: Poly, n: int) -> Poly:
    """Section of the projection: t(i,j,k) -> s(i,j,k)."""
    if p.degree("x") or p.degree("s"):
        raise ValueError("embedding acts on pure parameter polynomials")
    ring = PolyRing.get(n)
    sub = {v: ring.s(v[1], v[2], v[3]) for v in ring.t_variables()}
    return p.substitute(sub)


@lru_cache(maxsize=None)
def _unit_sym_table(n: int) -> dict:
    """Substitution witnessing the sub-ideal of unit and symmetry relations:
    kernel of this map is exactly that sub-ideal."""
    ring = PolyRing.get(n)
    sub = {}
    for v in ring.s_variables():
        _, i, j, k = v
        if i == 0 or j == 0:
            other = j if i == 0 else i
            sub[v] = ring.one() if other == k else ring.zero()
        elif i > j:
            sub[v] = ring.s(j, i, k)
    return sub


def reduce_unit_sym(p: Poly, n: int) -> Poly:
    """Canonical form modulo the unit and symmetry relations; a zero result
    is an exact witness of membership in the sub-ideal they generate."""
    return p.substitute(_unit_sym_table(n))


# -- certified correspondence ---------------------------------------------------------


@lru_cache(maxsize=None)
def _reduced_assoc_span(n: int):
    """Span of the reduced associator coefficients with positive indices,
    used to certify embedded generators modulo the substitution sub-ideal."""
    from .ideal import _new_span

    span = _new_span(n)
    tags = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                for l in range(n + 1):
                    g = reduce_unit_sym(associator_coeff(n, i, j, k, l), n)
                    tag = (i, j, k, l)
                    if span.insert(g.terms_dict(), tag=tag):
                        tags[tag] = g
    return span, tags


@dataclass
class CorrespondenceReport:
    """Generator-by-generator certification of the two inclusions."""

    n: int
    pi_zero: int = 0  # generators mapped to exactly zero by the projection
    pi_degree2: int = 0  # certified by a degree-2 span certificate
    pi_degree3: int = 0  # certified by a cubic certificate
    iota_count: int = 0  # embedded generators certified
    section_ok: bool = False  # projection . embedding == identity
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.section_ok and not self.failures


def verify_structure_correspondence(n: int) -> CorrespondenceReport:
    """Certify both inclusions of the correspondence between the based
    moduli ideal and the chart ideal, plus the section property."""
    report = CorrespondenceReport(n=n)
    ring = PolyRing.get(n)
    chart = ideal_generators(n)

    report.section_ok = all(
        structure_to_params(params_to_structure(ring.var_poly(v), n), n)
        == ring.var_poly(v)
        for v in ring.t_variables()
    )

    based = based_ideal_generators(n)
    for g, lab in zip(based.generators, based.labels):
        img = structure_to_params(g, n)
        if img.is_zero:
            report.pi_zero += 1
            continue
        d = img.degree("t")
        cert = membership(img, chart)
        if not cert.member:
            report.failures.append(("projection", lab))
        elif d == 2:
            report.pi_degree2 += 1
        else:
            report.pi_degree3 += 1

    span, _ = _reduced_assoc_span(n)
    for g, lab in zip(chart.generators, chart.labels):
        emb = reduce_unit_sym(params_to_structure(g, n), n)
        residual, _ = span.reduce(emb.terms_dict())
        if residual:
            report.failures.append(("embedding", lab))
        else:
            report.iota_count += 1
    return report


# -- points and tables -----------------------------------------------------------------


def t_assignment(n: int, tvals: dict) -> dict:
    """Full variable assignment from a sparse (i,j,k) -> rational map."""
    ring = PolyRing.get(n)
    full = {v: Fraction(0) for v in ring.t_variables()}
    for (i, j, k), val in tvals.items():
        full[ring.t_var(i, j, k)] = Fraction(val)
    return full


def table_from_point(tvals: dict, n: int) -> MulTable:
    """Multiplication table of the fiber algebra at a parameter point, in
    the family's sign convention: s(i,j,k) = -t(i,j,k) for positive k and
    s(i,j,0) = -sum_k q(i,j,k|k)(t)/(n-1)."""
    assignment = t_assignment(n, tvals)
    ring = PolyRing.get(n)
    entries = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(1, n + 1):
                entries[(i, j, k)] = -assignment[ring.t_var(i, j, k)]
            const = diagonal_sum(n, i, j).evaluate(assignment)
            entries[(i, j, 0)] = -Fraction(const, n - 1)
    return MulTable(n, entries)


def table_to_json_dict(table: MulTable) -> dict:
    return {
        "n": table.n,
        "s": [
            [i, j, k, str(table.value(i, j, k))]
            for i in range(table.n + 1)
            for j in range(table.n + 1)
            for k in range(table.n + 1)
        ],
    }
