"""Two-step Taylor complex of the squared maximal ideal and its tangent data.

The ideal generated by all products x_i*x_j has one generator per unordered
pair (i, j); the free module on symbols e[i,j] surjects onto it via
``f_map``.  Its syzygies are the image of ``r_map`` on wedge symbols
e[i,j]^e[k,l]: the Koszul relation between the two generators, divided by
the variables the two pairs share.

Module elements (``FreeModElt``) carry polynomial coefficients on three
separate basis namespaces, which never mix:

    e[i,j]           module generators (e[i,j] = e[j,i])
    e[i,j]^e[k,l]    wedge symbols in the syzygy module
    e[i,j]v[k,l]     exterior-square symbols of the resolution used by the
                     derivation-algebra route (NOT the same thing: the map r
                     is not the Koszul differential there)

Both wedge namespaces are antisymmetric with self-wedge zero; symbols are
stored with the smaller pair first.

The homomorphisms from the ideal to its (n+1)-dimensional quotient algebra
are spanned by the maps sending the generator with index pair {i,j} to x_k
(``tangent_hom_*``); ranks of these spans give the tangent-space dimension
counts of the surrounding Hilbert scheme chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import EchelonSpan
from .poly import Poly, PolyRing, X_KIND, mono_text

E_NS, WEDGE_NS, CURLY_NS = "e", "w", "c"


def pair(a: int, b: int) -> tuple:
    return (a, b) if a <= b else (b, a)


def basis_pairs(n: int) -> list:
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def wedge_symbol(ns: str, p: tuple, q: tuple):
    """Canonical (symbol, sign) of an antisymmetric pair; sign 0 if p == q."""
    if p == q:
        return None, 0
    if p < q:
        return (ns, p, q), 1
    return (ns, q, p), -1


def wedge_symbols(n: int, ns: str = WEDGE_NS) -> list:
    ps = basis_pairs(n)
    return [(ns, ps[a], ps[b]) for a in range(len(ps)) for b in range(a + 1, len(ps))]


def is_koszul(sym) -> bool:
    """True when the two index pairs of a wedge symbol are disjoint."""
    _, p, q = sym
    return not (set(p) & set(q))


def nonkoszul_triple(sym) -> tuple:
    """Oriented (i, j, k) with sym == e[i,j]^e[i,k]; requires a common index."""
    _, p, q = sym
    common = set(p) & set(q)
    if not common:
        raise ValueError(f"{sym} is a disjoint (Koszul) wedge")
    i = min(common)
    j = p[1] if p[0] == i else p[0]
    k = q[1] if q[0] == i else q[0]
    return i, j, k


class FreeModElt:
    """Free-module element: polynomial coefficients on basis symbols."""

    __slots__ = ("n", "_coef")

    def __init__(self, n: int, coef: dict | None = None):
        self.n = n
        self._coef = {s: c for s, c in (coef or {}).items() if not c.is_zero}

    @property
    def is_zero(self) -> bool:
        return not self._coef

    def coefficient(self, sym) -> Poly:
        return self._coef.get(sym, PolyRing.get(self.n).zero())

    def symbols(self):
        return self._coef.keys()

    def terms(self):
        for s in sorted(self._coef):
            yield s, self._coef[s]

    def __add__(self, other: "FreeModElt") -> "FreeModElt":
        if self.n != other.n:
            raise ValueError("ambient n mismatch")
        out = dict(self._coef)
        for s, c in other._coef.items():
            nc = out.get(s)
            nc = c if nc is None else nc + c
            if nc.is_zero:
                out.pop(s, None)
            else:
                out[s] = nc
        return FreeModElt(self.n, out)

    def __neg__(self) -> "FreeModElt":
        return FreeModElt(self.n, {s: -c for s, c in self._coef.items()})

    def __sub__(self, other: "FreeModElt") -> "FreeModElt":
        return self + (-other)

    def scale(self, factor) -> "FreeModElt":
        """Multiply every coefficient by a Poly or rational."""
        return FreeModElt(self.n, {s: c * factor for s, c in self._coef.items()})

    def __eq__(self, other):
        return (
            isinstance(other, FreeModElt)
            and self.n == other.n
            and self._coef == other._coef
        )

    def __hash__(self):
        return hash((self.n, tuple(sorted(self._coef.items(), key=lambda t: t[0]))))

    @staticmethod
    def _sym_text(sym) -> str:
        if sym[0] == E_NS:
            return f"e[{sym[1]},{sym[2]}]"
        (_, (a, b), (c, d)) = sym
        if sym[0] == WEDGE_NS:
            return f"e[{a},{b}]^e[{c},{d}]"
        return f"e[{a},{b}]v[{c},{d}]"

    def text(self) -> str:
        if not self._coef:
            return "0"
        pieces = []
        for sym, poly in self.terms():
            name = self._sym_text(sym)
            for m, c in poly.terms():
                body = mono_text(m)
                part = f"({c})"
                if body:
                    part += f" * {body}"
                pieces.append(f"{part} * {name}")
        return " + ".join(pieces)

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"FreeModElt[n={self.n}]({self.text()})"


def zero_elt(n: int) -> FreeModElt:
    return FreeModElt(n, {})


def e_elt(n: int, i: int, j: int, coeff=1) -> FreeModElt:
    c = coeff if isinstance(coeff, Poly) else PolyRing.get(n).const(coeff)
    return FreeModElt(n, {(E_NS, *pair(i, j)): c})


def wedge_elt(n: int, p: tuple, q: tuple, coeff=1, ns: str = WEDGE_NS) -> FreeModElt:
    """Oriented wedge e_p ^ e_q (or e_p v e_q), canonicalized with sign."""
    sym, sign = wedge_symbol(ns, pair(*p), pair(*q))
    if sign == 0:
        return zero_elt(n)
    c = coeff if isinstance(coeff, Poly) else PolyRing.get(n).const(coeff)
    return FreeModElt(n, {sym: c * sign})


# -- the complex ----------------------------------------------------------------


def pair_product(n: int, p: tuple) -> Poly:
    ring = PolyRing.get(n)
    return ring.x(p[0]) * ring.x(p[1])


def _pair_product_divided(n: int, p: tuple, common: set) -> Poly:
    """x_a * x_b with one factor removed for each index in `common`."""
    ring = PolyRing.get(n)
    exps: dict = {}
    for a in p:
        exps[a] = exps.get(a, 0) + 1
    for a in common:
        exps[a] -= 1
    out = ring.one()
    for a, e in sorted(exps.items()):
        for _ in range(e):
            out = out * ring.x(a)
    return out


def f_map(elt: FreeModElt) -> Poly:
    """Module-linear map e[i,j] -> x_i * x_j."""
    total = PolyRing.get(elt.n).zero()
    for sym, c in elt.terms():
        if sym[0] != E_NS:
            raise ValueError(f"f_map expects e-symbols, got {sym}")
        total = total + c * pair_product(elt.n, (sym[1], sym[2]))
    return total


@lru_cache(maxsize=None)
def r_symbol(n: int, p: tuple, q: tuple) -> FreeModElt:
    """Image of the canonical wedge e_p ^ e_q: the Koszul relation between
    the two generators divided by their common variables."""
    common = set(p) & set(q)
    coeff_p = -_pair_product_divided(n, q, common)
    coeff_q = _pair_product_divided(n, p, common)
    return e_elt(n, *p, coeff=coeff_p) + e_elt(n, *q, coeff=coeff_q)


def r_map(elt: FreeModElt) -> FreeModElt:
    total = zero_elt(elt.n)
    for sym, c in elt.terms():
        if sym[0] != WEDGE_NS:
            raise ValueError(f"r_map expects wedge symbols, got {sym}")
        total = total + r_symbol(elt.n, sym[1], sym[2]).scale(c)
    return total


def r_oriented(n: int, p: tuple, q: tuple) -> FreeModElt:
    """r on an oriented wedge given by two index pairs (sign-correct)."""
    sym, sign = wedge_symbol(WEDGE_NS, pair(*p), pair(*q))
    if sign == 0:
        return zero_elt(n)
    return r_symbol(n, sym[1], sym[2]).scale(Fraction(sign))


def koszul_differential(elt: FreeModElt) -> FreeModElt:
    """Differential on the exterior-square namespace:
    e_p v e_q -> f_p * e_q - f_q * e_p."""
    total = zero_elt(elt.n)
    for sym, c in elt.terms():
        if sym[0] != CURLY_NS:
            raise ValueError(f"expected exterior-square symbols, got {sym}")
        _, p, q = sym
        term = e_elt(elt.n, *q, coeff=pair_product(elt.n, p)) - e_elt(
            elt.n, *p, coeff=pair_product(elt.n, q)
        )
        total = total + term.scale(c)
    return total


# -- the quotient algebra --------------------------------------------------------


def reduce_mod_squares(p: Poly) -> Poly:
    """Canonical representative in the quotient by all x_i*x_j: drop every
    term of x-degree >= 2.  Coefficients may involve t- or s-variables."""
    kept = {
        m: c
        for m, c in p.terms_dict().items()
        if sum(e for v, e in m if v[0] == X_KIND) < 2
    }
    return Poly(p.n, kept)


@dataclass(frozen=True)
class QuotientElt:
    """Element of the (n+1)-dimensional quotient algebra, stored as its
    canonical representative in the span of 1, x_1, ..., x_n."""

    rep: Poly

    def __post_init__(self):
        if self.rep.degree("x") >= 2:
            raise ValueError("representative not reduced")

    @staticmethod
    def from_poly(p: Poly) -> "QuotientElt":
        return QuotientElt(reduce_mod_squares(p))

    @property
    def is_zero(self) -> bool:
        return self.rep.is_zero

    def __add__(self, other: "QuotientElt") -> "QuotientElt":
        return QuotientElt(self.rep + other.rep)

    def __sub__(self, other: "QuotientElt") -> "QuotientElt":
        return QuotientElt(self.rep - other.rep)

    def components(self) -> dict:
        """Coordinates in the basis {0: 1, b: x_b}."""
        out: dict = {}
        for m, c in self.rep.terms():
            if not m:
                out[0] = out.get(0, Fraction(0)) + c
            else:
                xs = [v for v, e in m if v[0] == X_KIND for _ in range(e)]
                if len(xs) == 1 and len(m) == 1 and m[0][1] == 1:
                    out[xs[0][1]] = out.get(xs[0][1], Fraction(0)) + c
                else:
                    raise ValueError("non-scalar coordinates requested")
        return out


# -- tangent homomorphisms --------------------------------------------------------


def tangent_hom_value(n: int, i: int, j: int, k: int, gen_pair: tuple) -> Poly:
    """Value of the hom sending the generator with index pair {i,j} to x_k:
    x_k on that generator, 0 on every other."""
    ring = PolyRing.get(n)
    for idx in (i, j, k):
        if not 1 <= idx <= n:
            raise ValueError(f"index {idx} out of range 1..{n}")
    if pair(*gen_pair) == pair(i, j):
        return ring.x(k)
    return ring.zero()


def tangent_hom_apply(n: int, ijk: tuple, elt: FreeModElt) -> QuotientElt:
    """Module-linear extension of a tangent hom, landing in the quotient."""
    i, j, k = ijk
    total = PolyRing.get(n).zero()
    for sym, c in elt.terms():
        if sym[0] != E_NS:
            raise ValueError("tangent homs act on e-symbols")
        total = total + c * tangent_hom_value(n, i, j, k, (sym[1], sym[2]))
    return QuotientElt.from_poly(total)


def _hom_vector(n: int, ijk: tuple) -> dict:
    """A tangent hom as a vector over keys (generator pair, quotient coord)."""
    i, j, k = ijk
    vec: dict = {}
    for gp in basis_pairs(n):
        val = tangent_hom_apply(n, (i, j, k), e_elt(n, *gp))
        for b, c in val.components().items():
            vec[(gp, b)] = c
    return vec


def derivation_image_vector(n: int, i: int) -> dict:
    """Restriction of d/dx_i to the ideal generators, as the same kind of
    vector: the pair {i,j} goes to x_j for j != i and the pair {i,i} to
    2*x_i."""
    ring = PolyRing.get(n)
    vec: dict = {}
    for gp in basis_pairs(n):
        q = QuotientElt.from_poly(pair_product(n, gp).derivative(ring.x_var(i)))
        for b, c in q.components().items():
            vec[(gp, b)] = c
    return vec


def hom_basis_indices(n: int) -> list:
    return [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(i, n + 1)
        for k in range(1, n + 1)
    ]


@dataclass(frozen=True)
class TangentDims:
    hom_dim: int
    t1_dim: int


def tangent_dims(n: int) -> TangentDims:
    """Dimension of the hom space and of its quotient by the derivation
    images, computed by exact rank and cross-checked against the closed
    formulas n^2(n+1)/2 and (n+2)n(n-1)/2."""
    span = EchelonSpan()
    for ijk in hom_basis_indices(n):
        span.insert(_hom_vector(n, ijk))
    hom_rank = span.rank
    der = EchelonSpan()
    for i in range(1, n + 1):
        der.insert(derivation_image_vector(n, i))
    t1_rank = hom_rank - der.rank
    if hom_rank != n * n * (n + 1) // 2:
        raise AssertionError(f"hom rank {hom_rank} != n^2(n+1)/2 at n={n}")
    if t1_rank != (n + 2) * n * (n - 1) // 2:
        raise AssertionError(f"t1 rank {t1_rank} != (n+2)n(n-1)/2 at n={n}")
    return TangentDims(hom_dim=hom_rank, t1_dim=t1_rank)


# -- degree bound for the obstruction module --------------------------------------


def linear_syzygy_residual(n: int, i: int, j: int, k: int, l: int) -> FreeModElt:
    """x_l * r(e_ij ^ e_ik) - x_k * r(e_ij ^ e_il) + x_j * r(e_ik ^ e_il);
    identically zero for distinct j, k, l."""
    ring = PolyRing.get(n)
    return (
        r_oriented(n, (i, j), (i, k)).scale(ring.x(l))
        - r_oriented(n, (i, j), (i, l)).scale(ring.x(k))
        + r_oriented(n, (i, k), (i, l)).scale(ring.x(j))
    )


def obstruction_degree_check(n: int) -> dict:
    """Sweep the linear syzygies over all i and distinct j, k, l.

    Their vanishing bounds the degrees of the obstruction module from below
    (no homogeneous piece below degree -2)."""
    checked = 0
    failures = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    if j == k or j == l or k == l:
                        continue
                    checked += 1
                    if not linear_syzygy_residual(n, i, j, k, l).is_zero:
                        failures.append((i, j, k, l))
    return {"checked": checked, "failures": failures, "ok": not failures}
