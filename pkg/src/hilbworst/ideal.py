"""Local equations of the Hilbert scheme chart and exact ideal membership.

The deformation parameters t(i,j,k) carry a family of quadratic forms
(``obstruction_quadric``) that is antisymmetric in its middle index pair and
satisfies a cyclic three-term identity.  Two index-restricted families of
these quadrics generate the ideal cutting out the chart of the Hilbert
scheme of n+1 points around its most degenerate point; a second, equivalent
presentation swaps the roles of the first two lower indices in the
difference family.

Because the ideal is generated in t-degree 2 and every query made in this
package is homogeneous of t-degree at most 3, membership is decided by exact
linear algebra: degree-2 queries are reduced against the span of the
generators, degree-3 queries against the span of all products
(variable * generator).  Both spans split into small independent blocks
under the torus multidegree, which keeps the eliminations fast, and both
track certificates so that every positive answer comes with explicit
rational (resp. linear-form) multipliers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .linalg import BlockedSpan
from .poly import (
    Poly,
    PolyRing,
    mono_degree,
    mono_multidegree,
    mono_sort_key,
)

FLAVORS = ("hilbert", "miniversal", "based_algebra")


class UnsupportedDegreeError(ValueError):
    """Membership query outside the homogeneous degrees handled exactly."""


class CertificateError(RuntimeError):
    """A certificate required by the theory could not be found."""


@lru_cache(maxsize=None)
def obstruction_quadric(n: int, i: int, j: int, k: int, l: int) -> Poly:
    """Quadratic form in the deformation parameters t(i,j,k) whose vanishing
    is the condition for lifting first-order deformations to second order.

    Antisymmetric in (j, k); the sum over the cyclic rotations of (i, j, k)
    vanishes identically.
    """
    ring = PolyRing.get(n)
    for idx in (i, j, k, l):
        if not 1 <= idx <= n:
            raise ValueError(f"index {idx} out of range 1..{n}")
    total = ring.zero()
    for lam in range(1, n + 1):
        total = total + ring.t(i, j, lam) * ring.t(k, lam, l)
        total = total - ring.t(i, k, lam) * ring.t(j, lam, l)
    return total


def cyclic_sum(n: int, i: int, j: int, k: int, l: int) -> Poly:
    """The symbolic sum over cyclic rotations of (i, j, k); contract: zero."""
    return (
        obstruction_quadric(n, i, j, k, l)
        + obstruction_quadric(n, j, k, i, l)
        + obstruction_quadric(n, k, i, j, l)
    )


def diagonal_sum(n: int, i: int, j: int) -> Poly:
    """Sum over lam of the quadrics with repeated trailing index lam.

    Symmetric in (i, j) as an exact polynomial identity; appears (divided by
    n-1) as the constant tail of the universal family generators.
    """
    ring = PolyRing.get(n)
    total = ring.zero()
    for lam in range(1, n + 1):
        total = total + obstruction_quadric(n, i, j, lam, lam)
    return total


@dataclass(frozen=True)
class IdealPresentation:
    """Ordered generator list with provenance labels and dedup metadata."""

    n: int
    flavor: str
    generators: tuple
    labels: tuple = ()
    dropped_zero: int = 0
    dropped_duplicate: int = 0

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")

    def __len__(self):
        return len(self.generators)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "flavor": self.flavor,
            "generators": [g.text() for g in self.generators],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


class _Dedup:
    """Collects generators, dropping zeros and exact duplicates/negations."""

    def __init__(self):
        self.gens: list = []
        self.labels: list = []
        self.seen: dict = {}
        self.dropped_zero = 0
        self.dropped_duplicate = 0

    def add(self, g: Poly, label: str):
        if g.is_zero:
            self.dropped_zero += 1
            return
        if g in self.seen or (-g) in self.seen:
            self.dropped_duplicate += 1
            return
        self.seen[g] = len(self.gens)
        self.gens.append(g)
        self.labels.append(label)


def _substitute_diagonal_zero(g: Poly, n: int) -> Poly:
    ring = PolyRing.get(n)
    return g.substitute({ring.t_var(i, i, i): 0 for i in range(1, n + 1)})


def set_diagonal_zero(p: Poly) -> Poly:
    """Substitute t(i,i,i) -> 0 for all i (miniversal restriction)."""
    return _substitute_diagonal_zero(p, p.n)


@lru_cache(maxsize=None)
def ideal_generators(n: int, flavor: str = "hilbert") -> IdealPresentation:
    """The two index families of quadric generators, deduplicated in a fixed
    enumeration order.

    flavor "hilbert": quadrics q(i,j,k|l) for j,k,l distinct, and differences
    q(i,j,k|k) - q(i,j,l|l) for j != k, j != l.  flavor "miniversal": the
    same generators with t(i,i,i) set to 0.
    """
    if n < 3:
        raise ValueError(f"ambient n must be >= 3, got {n}")
    if flavor not in ("hilbert", "miniversal"):
        raise ValueError(f"unsupported flavor {flavor!r}")
    dd = _Dedup()
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    if j != k and k != l and j != l:
                        dd.add(
                            obstruction_quadric(n, i, j, k, l),
                            f"q({i},{j},{k}|{l})",
                        )
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    if j != k and j != l:
                        dd.add(
                            obstruction_quadric(n, i, j, k, k)
                            - obstruction_quadric(n, i, j, l, l),
                            f"q({i},{j},{k}|{k})-q({i},{j},{l}|{l})",
                        )
    pres = IdealPresentation(
        n=n,
        flavor="hilbert",
        generators=tuple(dd.gens),
        labels=tuple(dd.labels),
        dropped_zero=dd.dropped_zero,
        dropped_duplicate=dd.dropped_duplicate,
    )
    if flavor == "hilbert":
        return pres
    mini = _Dedup()
    for g, lab in zip(pres.generators, pres.labels):
        mini.add(_substitute_diagonal_zero(g, n), lab)
    return IdealPresentation(
        n=n,
        flavor="miniversal",
        generators=tuple(mini.gens),
        labels=tuple(mini.labels),
        dropped_zero=pres.dropped_zero + mini.dropped_zero,
        dropped_duplicate=pres.dropped_duplicate + mini.dropped_duplicate,
    )


@lru_cache(maxsize=None)
def alternate_generators(n: int) -> IdealPresentation:
    """Equivalent presentation with the difference family q(i,j,k|k) -
    q(j,i,l|l), j != k, i != l; spans the same degree-2 space."""
    if n < 3:
        raise ValueError(f"ambient n must be >= 3, got {n}")
    dd = _Dedup()
    rng = range(1, n + 1)
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    if j != k and k != l and j != l:
                        dd.add(
                            obstruction_quadric(n, i, j, k, l),
                            f"q({i},{j},{k}|{l})",
                        )
    for i in rng:
        for j in rng:
            for k in rng:
                for l in rng:
                    if j != k and i != l:
                        dd.add(
                            obstruction_quadric(n, i, j, k, k)
                            - obstruction_quadric(n, j, i, l, l),
                            f"q({i},{j},{k}|{k})-q({j},{i},{l}|{l})",
                        )
    return IdealPresentation(
        n=n,
        flavor="hilbert",
        generators=tuple(dd.gens),
        labels=tuple(dd.labels),
        dropped_zero=dd.dropped_zero,
        dropped_duplicate=dd.dropped_duplicate,
    )


# -- membership ----------------------------------------------------------------


def _block_key_factory(n: int):
    def block_of_key(mono):
        return (mono_degree(mono, "t"), mono_multidegree(mono, n))

    return block_of_key


def _new_span(n: int) -> BlockedSpan:
    return BlockedSpan(_block_key_factory(n), track=True, keysort=mono_sort_key)


def _require_quadratic_presentation(pres: IdealPresentation):
    for g in pres.generators:
        if not (g.is_homogeneous("t") and g.degree("t") == 2 and not g.degree("s")):
            raise UnsupportedDegreeError(
                "membership requires a presentation generated by homogeneous "
                "quadrics in the deformation parameters"
            )


@lru_cache(maxsize=None)
def _degree2_span(pres: IdealPresentation) -> BlockedSpan:
    _require_quadratic_presentation(pres)
    span = _new_span(pres.n)
    for idx, g in enumerate(pres.generators):
        span.insert(g.terms_dict(), tag=idx)
    return span


@lru_cache(maxsize=None)
def _degree3_span(pres: IdealPresentation) -> BlockedSpan:
    _require_quadratic_presentation(pres)
    ring = PolyRing.get(pres.n)
    span = _new_span(pres.n)
    for idx, g in enumerate(pres.generators):
        for v in ring.t_variables():
            span.insert((g * ring.var_poly(v)).terms_dict(), tag=(v, idx))
    return span


@dataclass
class Membership:
    """Outcome of an exact membership test.

    For members, ``multipliers`` maps generator index -> Poly multiplier
    (a constant for degree-2 queries, a linear form for degree-3 ones), so
    that query == sum(multipliers[i] * generators[i]).  For non-members,
    ``residual`` is the nonzero normal form against the span, which is the
    proof of failure of the linear system.
    """

    member: bool
    degree: int
    multipliers: dict = field(default_factory=dict)
    residual: Poly | None = None

    def verify(self, p: Poly, pres: IdealPresentation) -> bool:
        if not self.member:
            return False
        acc = PolyRing.get(pres.n).zero()
        for idx, mult in self.multipliers.items():
            acc = acc + mult * pres.generators[idx]
        return acc == p


def _require_pure_t(p: Poly):
    if p.degree("x") or p.degree("s"):
        raise UnsupportedDegreeError(
            "membership queries must involve deformation parameters only"
        )


def membership(p: Poly, pres: IdealPresentation) -> Membership:
    """Decide whether p lies in the ideal, with an explicit certificate.

    p must be homogeneous in the t-variables.  Degrees 0 and 1 are decided
    trivially (only 0 belongs); degree 2 is reduced against the generator
    span, degree 3 against the span of variable*generator products.  Other
    degrees raise UnsupportedDegreeError.
    """
    if p.n != pres.n:
        raise ValueError("ambient n mismatch between query and presentation")
    _require_pure_t(p)
    if p.is_zero:
        return Membership(member=True, degree=0)
    if not p.is_homogeneous("t"):
        raise UnsupportedDegreeError("membership queries must be homogeneous")
    d = p.degree("t")
    if d < 2:
        return Membership(member=False, degree=d, residual=p)
    if d == 2:
        residual, used = _degree2_span(pres).reduce(p.terms_dict())
        if residual:
            return Membership(
                member=False, degree=2, residual=Poly(p.n, residual)
            )
        ring = PolyRing.get(p.n)
        mults = {idx: ring.const(c) for idx, c in sorted(used.items())}
        return Membership(member=True, degree=2, multipliers=mults)
    if d == 3:
        residual, used = _degree3_span(pres).reduce(p.terms_dict())
        if residual:
            return Membership(
                member=False, degree=3, residual=Poly(p.n, residual)
            )
        ring = PolyRing.get(p.n)
        mults: dict = {}
        for (v, idx), c in used.items():
            mults[idx] = mults.get(idx, ring.zero()) + ring.var_poly(v) * c
        return Membership(
            member=True,
            degree=3,
            multipliers={i: m for i, m in sorted(mults.items())},
        )
    raise UnsupportedDegreeError(f"membership not supported in t-degree {d}")


def normal_form(p: Poly, n: int, flavor: str = "hilbert") -> Poly:
    """Canonical representative of a homogeneous quadric modulo the ideal:
    the reduction against the fixed echelon basis of the degree-2 span."""
    if p.is_zero:
        return p
    _require_pure_t(p)
    if not (p.is_homogeneous("t") and p.degree("t") == 2):
        raise UnsupportedDegreeError("normal form defined for quadrics only")
    pres = ideal_generators(n, flavor)
    residual, _ = _degree2_span(pres).reduce(p.terms_dict())
    return Poly(p.n, residual)


def degree2_rank(pres: IdealPresentation) -> int:
    """Dimension of the degree-2 span; len(pres) minus this counts the
    linear dependencies kept in the presentation."""
    return _degree2_span(pres).rank


def span_equal_degree2(
    a: IdealPresentation, b: IdealPresentation, certificates: bool = False
):
    """Mutual containment of the degree-2 spans of two presentations.

    Returns (equal, certs) where certs, when requested, holds the two lists
    of Membership certificates (a's generators in span(b) and vice versa).
    """
    certs_ab = []
    certs_ba = []
    for g in a.generators:
        m = membership(g, b)
        if not m.member:
            return False, None
        if certificates:
            certs_ab.append(m)
    for g in b.generators:
        m = membership(g, a)
        if not m.member:
            return False, None
        if certificates:
            certs_ba.append(m)
    return True, (certs_ab, certs_ba) if certificates else None


def evaluate_generators(pres: IdealPresentation, assignment: dict) -> list:
    """Evaluate every generator at a (t-variable -> rational) assignment."""
    ring = PolyRing.get(pres.n)
    full = {v: Fraction(0) for v in ring.t_variables()}
    full.update(assignment)
    return [g.evaluate(full) for g in pres.generators]


def vanishes_at(pres: IdealPresentation, assignment: dict) -> bool:
    return all(v == 0 for v in evaluate_generators(pres, assignment))
