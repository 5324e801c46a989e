"""OVI(R) morphisms as pivoted matrices, and finite matrix groups U, U_lam, B, B^C.

Matrices are tuples of rows of ring elements.  For left R-modules the matrix
of ``g o f`` has entries ``sum_l f[l][j] * g[i][l]`` (the ``f`` coefficient is
the left factor); over commutative rings this is the ordinary product.
"""

import itertools
import json
import random
from dataclasses import dataclass

from .errors import ResourceCapError
from .oi_cat import OIMorphism, markings
from .ring_core import RingSpec, UnsupportedVariantError

__all__ = [
    "OviMorphism", "mat_compose", "enumerate_hom_ovi", "count_hom_ovi", "standard_morphism",
    "factor_unique", "FiniteMatrixGroup", "GroupConstructionError", "build_group",
    "unitriangular_index", "induction_dims", "MAX_N", "MAX_RING", "MAX_ELEMENTS",
]

MAX_N = 5
MAX_RING = 4
MAX_ELEMENTS = 20000
FULL_CHECK = 256
TABLE_LIMIT = 1024


def mat_compose(ring, g, f):
    """Matrix of ``g o f`` (g is m x n, f is n x d)."""
    n = len(f)
    d = len(f[0]) if f else 0
    zero = ring.zero
    out = []
    for row in g:
        new = []
        for j in range(d):
            acc = zero
            for l in range(n):
                x = f[l][j]
                if x != zero and row[l] != zero:
                    acc = ring.add(acc, ring.mul(x, row[l]))
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def _pivots(ring, rows, n, d):
    alpha = []
    for j in range(d):
        nz = [i for i in range(n) if rows[i][j] != ring.zero]
        if not nz or rows[nz[-1]][j] != ring.one:
            raise ValueError(f"column {j + 1} has no unit pivot")
        alpha.append(nz[-1] + 1)
    if any(a >= b for a, b in zip(alpha, alpha[1:])):
        raise ValueError(f"pivot rows {alpha} are not strictly increasing")
    return tuple(alpha)


@dataclass(frozen=True)
class OviMorphism:
    """A morphism R^d -> R^n: column j has 1 in row alpha_j, zeros below."""
    ring: RingSpec
    n: int
    d: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.n or any(len(r) != self.d for r in rows):
            raise ValueError(f"matrix shape does not match {self.n}x{self.d}")
        object.__setattr__(self, "alpha", _pivots(self.ring, rows, self.n, self.d))

    @property
    def f0(self):
        return OIMorphism(self.d, self.n, self.alpha)

    def column(self, j):
        return tuple(self.rows[i][j] for i in range(self.n))

    def compose_after(self, g: "OviMorphism"):
        """``g o self``."""
        if g.d != self.n:
            raise ValueError("size mismatch")
        return OviMorphism(self.ring, g.n, self.d, mat_compose(self.ring, g.rows, self.rows))

    def is_standard(self):
        return all(x == self.ring.zero for i, row in enumerate(self.rows)
                   for j, x in enumerate(row) if i + 1 != self.alpha[j])


def _require_finite(ring):
    if not ring.is_finite:
        raise UnsupportedVariantError("hom-sets over a free additive ring are infinite")


def count_hom_ovi(ring, d, n):
    _require_finite(ring)
    q = ring.size
    return sum(q ** sum(a - 1 for a in alpha) for alpha in markings(n, d))


def enumerate_hom_ovi(ring, d, n, alpha=None):
    """All morphisms R^d -> R^n, grouped by pivot tuple (lex), then entries (lex)."""
    _require_finite(ring)
    elts = ring.enumerate()
    out = []
    for al in ([tuple(alpha)] if alpha is not None else markings(n, d)):
        free = [(i, j) for j, a in enumerate(al) for i in range(a - 1)]
        for vals in itertools.product(elts, repeat=len(free)):
            rows = [[ring.zero] * d for _ in range(n)]
            for j, a in enumerate(al):
                rows[a - 1][j] = ring.one
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            out.append(OviMorphism(ring, n, d, rows))
    return out


def standard_morphism(ring, f0: OIMorphism):
    rows = [[ring.zero] * f0.source for _ in range(f0.target)]
    for j, a in enumerate(f0.image):
        rows[a - 1][j] = ring.one
    return OviMorphism(ring, f0.target, f0.source, rows)


def factor_unique(phi: OviMorphism):
    """phi = psi o f with f standard and psi in U_n(R).

    f is forced.  psi is determined modulo U_{n,alpha}; the returned psi has
    column alpha_j equal to column j of phi and identity columns elsewhere.
    """
    ring, n = phi.ring, phi.n
    f = standard_morphism(ring, phi.f0)
    psi = [[ring.one if i == k else ring.zero for k in range(n)] for i in range(n)]
    for j, a in enumerate(phi.alpha):
        for i in range(n):
            psi[i][a - 1] = phi.rows[i][j]
    psi = tuple(tuple(r) for r in psi)
    assert mat_compose(ring, psi, f.rows) == phi.rows
    return psi, f


# -- finite matrix groups -----------------------------------------------------------

class GroupConstructionError(ValueError):
    pass


class FiniteMatrixGroup:
    """Elements are n x n matrices; ``mul(a, b)`` is the index of ``a o b``."""

    def __init__(self, ring, n, elements, label="", check=True):
        self.ring = ring
        self.n = n
        self.elements = [tuple(tuple(r) for r in e) for e in elements]
        self.label = label
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise GroupConstructionError("duplicate elements")
        ident = tuple(tuple(ring.one if i == j else ring.zero for j in range(n)) for i in range(n))
        if ident not in self.index:
            raise GroupConstructionError("identity matrix missing")
        self.identity = self.index[ident]
        self._table = None
        self._inv = None
        if check:
            self.verify()

    def __len__(self):
        return len(self.elements)

    @property
    def order(self):
        return len(self.elements)

    def _mul_mats(self, a, b):
        return mat_compose(self.ring, a, b)

    def mul(self, a, b):
        if self._table is not None:
            return self._table[a][b]
        prod = self._mul_mats(self.elements[a], self.elements[b])
        try:
            return self.index[prod]
        except KeyError:
            raise GroupConstructionError("set is not closed under multiplication") from None

    def table(self):
        """Full multiplication table (materialized on first use, capped)."""
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise ResourceCapError(f"multiplication table of {self.order} elements exceeds "
                                       f"{TABLE_LIMIT}", self.order, TABLE_LIMIT)
            self._table = [[self.mul(a, b) for b in range(self.order)] for a in range(self.order)]
        return self._table

    def inverse(self, a):
        if self._inv is None:
            self._inv = [self.index[self._inverse_matrix(e)] for e in self.elements]
        return self._inv[a]

    def _inverse_matrix(self, g):
        # back-substitution for upper-triangular g with unit diagonal entries
        ring, n = self.ring, self.n
        inv_diag = []
        for i in range(n):
            u = g[i][i]
            v = next((v for v in ring.enumerate() if ring.mul(u, v) == ring.one
                      and ring.mul(v, u) == ring.one), None)
            if v is None:
                raise GroupConstructionError("diagonal entry is not a unit")
            inv_diag.append(v)
        h = [[ring.zero] * n for _ in range(n)]
        for j in range(n):
            for i in range(n - 1, -1, -1):
                acc = ring.one if i == j else ring.zero
                for l in range(i + 1, n):
                    if h[l][j] != ring.zero and g[i][l] != ring.zero:
                        acc = ring.sub(acc, ring.mul(h[l][j], g[i][l]))
                h[i][j] = ring.mul(acc, inv_diag[i])
        return tuple(tuple(r) for r in h)

    def verify(self, seed=0):
        """Closure, identity and inverses.  Exhaustive up to 256 elements, sampled above."""
        N = self.order
        e = self.identity
        if N <= FULL_CHECK:
            tab = self.table()
            for a in range(N):
                if tab[a][e] != a or tab[e][a] != a:
                    raise GroupConstructionError("identity law fails")
                if e not in tab[a]:
                    raise GroupConstructionError(f"element {a} has no inverse")
            return True
        rng = random.Random(seed)
        for _ in range(2000):
            self.mul(rng.randrange(N), rng.randrange(N))
        for a in range(N):
            b = self.inverse(a)
            if self.mul(a, b) != e or self.mul(b, a) != e:
                raise GroupConstructionError(f"element {a} has no inverse")
        return True

    def commutator_subgroup(self):
        """Subgroup generated by all commutators (closure by breadth-first products)."""
        comms = {self.mul(self.mul(a, b), self.mul(self.inverse(a), self.inverse(b)))
                 for a in range(self.order) for b in range(self.order)}
        sub = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for c in comms:
                    y = self.mul(x, c)
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(sub)

    def to_json(self, with_table=True):
        obj = {"label": self.label, "n": self.n, "ring": self.ring.to_json(),
               "elements": [[list(r) for r in e] for e in self.elements],
               "identity": self.identity}
        if with_table and self.order <= TABLE_LIMIT:
            obj["table"] = self.table()
        return obj

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj):
        ring = RingSpec.from_json(obj["ring"])
        g = cls(ring, obj["n"], [tuple(tuple(ring.coerce(x) if not isinstance(x, list)
                                            else tuple(x) for x in r) for r in e)
                                 for e in obj["elements"]], obj.get("label", ""), check=False)
        if "table" in obj:
            g._table = obj["table"]
        g.verify()
        return g


def _upper_positions(n, skip_cols=()):
    return [(i, j) for i in range(n) for j in range(i + 1, n) if j + 1 not in skip_cols]


def build_group(ring, family, n, marks=(), C=None):
    """``family`` is one of U, U_marked, B, B_C.

    ``marks`` (1-based) are the fixed basis vectors for U_marked; ``C`` is a
    list of unit indices closed under multiplication for B_C.
    """
    _require_finite(ring)
    if n < 1 or n > MAX_N:
        raise ResourceCapError(f"n={n} outside 1..{MAX_N}", n, MAX_N)
    if ring.size > MAX_RING:
        raise ResourceCapError(f"|R|={ring.size} exceeds {MAX_RING}", ring.size, MAX_RING)
    elts = ring.enumerate()
    if family in ("U", "U_marked"):
        diag_choices = [tuple([ring.one] * n)]
        skip = tuple(marks) if family == "U_marked" else ()
        if any(not 1 <= m <= n for m in skip) or list(skip) != sorted(set(skip)):
            raise GroupConstructionError(f"marks {skip} are not an increasing tuple in [{n}]")
    elif family in ("B", "B_C"):
        units = ring.units()
        diag_choices = list(itertools.product(units, repeat=n))
        skip = ()
        if family == "B_C":
            if not ring.is_commutative():
                raise UnsupportedVariantError("B^C needs a commutative ring (determinants)")
            C = sorted(set(C or ()))
            if not C or any(c not in units for c in C):
                raise GroupConstructionError("C must be a nonempty set of units")
            if any(ring.mul(a, b) not in C for a in C for b in C):
                raise GroupConstructionError("C is not closed under multiplication")

            def det_ok(diag):
                det = ring.one
                for x in diag:
                    det = ring.mul(det, x)
                return det in C
            diag_choices = [dg for dg in diag_choices if det_ok(dg)]
    else:
        raise ValueError(f"unknown family {family!r}")
    pos = _upper_positions(n, skip)
    total = len(diag_choices) * len(elts) ** len(pos)
    if total > MAX_ELEMENTS:
        raise ResourceCapError(f"group would have {total} elements (cap {MAX_ELEMENTS})",
                               total, MAX_ELEMENTS)
    elements = []
    for diag in diag_choices:
        for vals in itertools.product(elts, repeat=len(pos)):
            m = [[ring.zero] * n for _ in range(n)]
            for i, x in enumerate(diag):
                m[i][i] = x
            for (i, j), v in zip(pos, vals):
                m[i][j] = v
            elements.append(m)
    label = family if family != "U_marked" else f"U_marked{tuple(marks)}"
    return FiniteMatrixGroup(ring, n, elements, f"{label}_{n}({ring.label()})")


def unitriangular_index(q, lam):
    """[U_n : U_{n,lam}] = q^{sum (lam_j - 1)}."""
    return q ** sum(a - 1 for a in lam)


def induction_dims(ring_or_q, d, n, dims):
    """sum over markings lam of [n] of [U_n : U_{n,lam}] * dims[lam]."""
    q = ring_or_q if isinstance(ring_or_q, int) else ring_or_q.size
    total = 0
    for lam in markings(n, d):
        if lam not in dims:
            raise KeyError(f"no dimension for marking {lam}")
        total += unitriangular_index(q, lam) * dims[lam]
    return total
