"""Order-by-order lifting of the generators and syzygies of the squared
maximal ideal, leading to the universal family over the Hilbert scheme chart.

The zeroth-order data is the two-step complex from :mod:`.taylor`.  The
first-order perturbation sends e[l,m] to the generic linear form
sum_lam t(l,m,lam) x_lam; the syzygies lift at first order exactly
(``first_order_residual``).  At second order the generators acquire
quadratic tails c[l,m] in the deformation parameters; comparing coefficients
of the x-variables produces the defining constraint system of the chart
(``second_order_obstruction``) together with the tails, which are stored in
the lam-free symmetric form sum_k q(l,m,k|k)/(n-1).

With those tails the perturbed composite vanishes modulo the constraint
ideal: its t-degree-2 part lies in the degree-2 span and its t-degree-3 part
is a cubic with an explicit linear-form certificate (``syzygy_certificate``,
``flatness_residual``).  Disjoint-pair wedges lift trivially to all orders
and the composite vanishes identically there (``koszul_full_residual``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ideal import (
    CertificateError,
    IdealPresentation,
    Membership,
    _Dedup,
    diagonal_sum,
    ideal_generators,
    membership,
    set_diagonal_zero,
)
from .poly import Poly, PolyRing
from .taylor import (
    FreeModElt,
    basis_pairs,
    e_elt,
    is_koszul,
    nonkoszul_triple,
    pair,
    pair_product,
    r_symbol,
    wedge_elt,
    wedge_symbols,
    zero_elt,
)


@dataclass(frozen=True)
class PerturbedMap:
    """Images of basis symbols, graded by order in the deformation
    parameters; ``orders[d]`` maps symbols to their t-degree-d piece."""

    orders: tuple

    def order(self, d: int) -> dict:
        return self.orders[d] if d < len(self.orders) else {}

    def image(self, sym):
        parts = [o[sym] for o in self.orders if sym in o]
        total = parts[0]
        for p in parts[1:]:
            total = total + p
        return total


# -- generator perturbations -------------------------------------------------


def f1_image(n: int, l: int, m: int) -> Poly:
    """First-order image of e[l,m]: sum over lam of t(l,m,lam) x_lam."""
    ring = PolyRing.get(n)
    total = ring.zero()
    for lam in range(1, n + 1):
        total = total + ring.t(l, m, lam) * ring.x(lam)
    return total


def quadratic_tail(n: int, l: int, m: int) -> Poly:
    """Second-order image of e[l,m]: sum_k q(l,m,k|k)/(n-1)."""
    return diagonal_sum(n, l, m) * Fraction(1, n - 1)


@lru_cache(maxsize=None)
def build_f(n: int) -> PerturbedMap:
    """Full perturbed generator map: orders 0, 1 and 2 on every e[i,j]."""
    if n < 3:
        raise ValueError(f"ambient n must be >= 3, got {n}")
    f0 = {(("e",) + p): pair_product(n, p) for p in basis_pairs(n)}
    f1 = {(("e",) + p): f1_image(n, *p) for p in basis_pairs(n)}
    f2 = {(("e",) + p): quadratic_tail(n, *p) for p in basis_pairs(n)}
    return PerturbedMap(orders=(f0, f1, f2))


def apply_images(images: dict, elt: FreeModElt) -> Poly:
    """Module-linear application of a symbol -> Poly table."""
    total = PolyRing.get(elt.n).zero()
    for sym, c in elt.terms():
        total = total + c * images[sym]
    return total


# -- syzygy perturbations ------------------------------------------------------


def r1_oriented(n: int, i: int, j: int, k: int) -> FreeModElt:
    """First-order lift on the oriented wedge e[i,j]^e[i,k], j != k:
    sum over lam of t(i,j,lam) e[k,lam] - t(i,k,lam) e[j,lam]."""
    if j == k:
        raise ValueError("oriented wedge requires j != k")
    ring = PolyRing.get(n)
    total = zero_elt(n)
    for lam in range(1, n + 1):
        total = total + e_elt(n, k, lam, coeff=ring.t(i, j, lam))
        total = total - e_elt(n, j, lam, coeff=ring.t(i, k, lam))
    return total


def r1_symbol(n: int, sym) -> FreeModElt:
    """First-order lift on a canonical wedge symbol: the trivial Koszul lift
    on disjoint pairs, the shared-index formula otherwise."""
    _, p, q = sym
    if is_koszul(sym):
        return e_elt(n, *p, coeff=-f1_image(n, *q)) + e_elt(
            n, *q, coeff=f1_image(n, *p)
        )
    return r1_oriented(n, *nonkoszul_triple(sym))


@lru_cache(maxsize=None)
def build_r(n: int) -> PerturbedMap:
    """Perturbed syzygy map: order 0 is the divided Koszul relation, order 1
    the lift above.  No higher orders exist for degree reasons."""
    if n < 3:
        raise ValueError(f"ambient n must be >= 3, got {n}")
    r0 = {}
    r1 = {}
    for sym in wedge_symbols(n):
        r0[sym] = r_symbol(n, sym[1], sym[2])
        r1[sym] = r1_symbol(n, sym)
    return PerturbedMap(orders=(r0, r1))


# -- residual computations -------------------------------------------------------


def first_order_residual(n: int) -> dict:
    """f0.r1 + f1.r0 on every wedge symbol; contract: identically zero."""
    f = build_f(n)
    r = build_r(n)
    out = {}
    for sym in wedge_symbols(n):
        out[sym] = apply_images(f.order(0), r.order(1)[sym]) + apply_images(
            f.order(1), r.order(0)[sym]
        )
    return out


@dataclass(frozen=True)
class ObstructionSystem:
    """Constraints and tails produced by the second-order lifting step."""

    equations: IdealPresentation
    tails: dict
    candidates: dict  # pair -> tuple of (label, candidate Poly)


@lru_cache(maxsize=None)
def second_order_obstruction(n: int) -> ObstructionSystem:
    """Expand (f1.r1 + f2.r0) = 0 on each shared-index wedge with unknown
    quadratic tails and compare x-coefficients.

    Coefficients away from the two special indices must vanish outright;
    the two special coefficients determine the tails, and equating the
    candidate expressions for one tail across wedges yields the difference
    constraints.  The collected system spans the same degree-2 space as the
    generator presentation."""
    f = build_f(n)
    r = build_r(n)
    ring = PolyRing.get(n)
    dd = _Dedup()
    candidates: dict = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                w = wedge_elt(n, (i, j), (i, k))
                sym = next(iter(w.symbols()))
                sign = w.coefficient(sym).constant_value()
                prod = apply_images(f.order(1), r.order(1)[sym]) * sign
                by_x = prod.split_by_x()
                for l in range(1, n + 1):
                    coeff = by_x.get(((ring.x_var(l), 1),), ring.zero())
                    if l == k:
                        candidates.setdefault(pair(i, j), []).append(
                            (f"wedge({i};{j},{k})", coeff)
                        )
                    elif l == j:
                        candidates.setdefault(pair(i, k), []).append(
                            (f"wedge({i};{j},{k})", -coeff)
                        )
                    else:
                        dd.add(coeff, f"vanish({i};{j},{k}|{l})")
    tails = {}
    for pr in basis_pairs(n):
        cands = candidates.get(pr, [])
        for (lab_a, a), (lab_b, b) in zip(cands, cands[1:]):
            dd.add(a - b, f"match[{lab_a}~{lab_b}]@e[{pr[0]},{pr[1]}]")
        tails[pr] = quadratic_tail(n, *pr)
    equations = IdealPresentation(
        n=n,
        flavor="hilbert",
        generators=tuple(dd.gens),
        labels=tuple(dd.labels),
        dropped_zero=dd.dropped_zero,
        dropped_duplicate=dd.dropped_duplicate,
    )
    return ObstructionSystem(
        equations=equations,
        tails=tails,
        candidates={p: tuple(c) for p, c in candidates.items()},
    )


# -- the universal family ----------------------------------------------------------


def family_generator(n: int, i: int, j: int, flavor: str = "hilbert") -> Poly:
    """x_i x_j + sum_k t(i,j,k) x_k + sum_k q(i,j,k|k)/(n-1)."""
    g = pair_product(n, pair(i, j)) + f1_image(n, *pair(i, j)) + quadratic_tail(
        n, *pair(i, j)
    )
    if flavor == "miniversal":
        g = set_diagonal_zero(g)
    elif flavor != "hilbert":
        raise ValueError(f"unsupported flavor {flavor!r}")
    return g


def universal_family(n: int, flavor: str = "hilbert") -> tuple:
    """One generator per pair i <= j, in pair order."""
    if n < 3:
        raise ValueError(f"ambient n must be >= 3, got {n}")
    return tuple(family_generator(n, i, j, flavor) for i, j in basis_pairs(n))


# -- the cubic syzygy --------------------------------------------------------------


def syzygy_cubic(n: int, i: int, j: int, k: int) -> Poly:
    """sum over l, lam of t(i,j,l) q(k,l,lam|lam) - t(i,k,l) q(j,l,lam|lam);
    a cubic that lies in the ideal for every j != k."""
    if j == k:
        raise ValueError("requires j != k")
    ring = PolyRing.get(n)
    total = ring.zero()
    for l in range(1, n + 1):
        total = total + ring.t(i, j, l) * diagonal_sum(n, k, l)
        total = total - ring.t(i, k, l) * diagonal_sum(n, j, l)
    return total


def syzygy_certificate(n: int, i: int, j: int, k: int) -> Membership:
    """Explicit linear-form multipliers writing the cubic in terms of the
    generators; absence would contradict flatness and raises."""
    cert = membership(syzygy_cubic(n, i, j, k), ideal_generators(n))
    if not cert.member:
        raise CertificateError(
            f"no degree-3 certificate for the cubic at ({i},{j},{k}), n={n}"
        )
    return cert


# -- flatness of the full family ----------------------------------------------------


@dataclass
class WedgeFlatness:
    sym: tuple
    low_orders_zero: bool
    degree2: dict  # x-variable index -> Membership
    degree3: Membership

    @property
    def ok(self) -> bool:
        return (
            self.low_orders_zero
            and all(m.member for m in self.degree2.values())
            and self.degree3.member
        )


@dataclass
class FlatnessReport:
    n: int
    wedges: dict

    @property
    def ok(self) -> bool:
        return all(w.ok for w in self.wedges.values())


def flatness_residual(n: int) -> FlatnessReport:
    """Certify (f0+f1+f2)(r0+r1) on every shared-index wedge: orders 0 and 1
    vanish identically, the t-degree-2 part splits into x-coefficients lying
    in the degree-2 span, and the t-degree-3 part is x-free and carries a
    cubic certificate."""
    f = build_f(n)
    r = build_r(n)
    pres = ideal_generators(n)
    ring = PolyRing.get(n)
    wedges = {}
    for sym in wedge_symbols(n):
        if is_koszul(sym):
            continue
        pieces = {d: ring.zero() for d in range(4)}
        for df in range(3):
            for dr in range(2):
                p = apply_images(f.order(df), r.order(dr)[sym])
                pieces[df + dr] = pieces[df + dr] + p
        low_zero = pieces[0].is_zero and pieces[1].is_zero
        deg2 = {}
        for xmono, coeff in pieces[2].split_by_x().items():
            if not xmono:
                raise AssertionError("unexpected x-free t-degree-2 part")
            deg2[xmono[0][0][1]] = membership(coeff, pres)
        if pieces[3].degree("x"):
            raise AssertionError("t-degree-3 part should be x-free")
        deg3 = membership(pieces[3], pres)
        wedges[sym] = WedgeFlatness(
            sym=sym, low_orders_zero=low_zero, degree2=deg2, degree3=deg3
        )
    report = FlatnessReport(n=n, wedges=wedges)
    if not report.ok:
        raise CertificateError(f"flatness certification failed at n={n}")
    return report


def koszul_full_residual(n: int) -> dict:
    """Composite of the full perturbed maps on disjoint-pair wedges, using
    the trivial lift extended with the second-order tails:
    r_hat(e_p ^ e_q) = -f_hat(e_q) e_p + f_hat(e_p) e_q minus its order-0
    part plus the divided relation; vanishes identically at every order."""
    f = build_f(n)
    out = {}
    for sym in wedge_symbols(n):
        if not is_koszul(sym):
            continue
        _, p, q = sym
        fp = f.image(("e",) + p)
        fq = f.image(("e",) + q)
        r_hat = e_elt(n, *p, coeff=-fq) + e_elt(n, *q, coeff=fp)
        full_f = {sym2: f.image(sym2) for sym2 in (("e",) + p, ("e",) + q)}
        out[sym] = apply_images(full_f, r_hat)
    return out
