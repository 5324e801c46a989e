"""Monomials of OVI hom-sets over a ring with free additive group, E-operators,
the two initial-term maps, and the Higman word order.

A monomial in ``Lambda_{n,alpha}`` is the n x d matrix of an OVI morphism
R^d -> R^n with pivot rows ``alpha``.  Ring elements are integer tuples in the
basis fixed by the ``RingSpec``; every order below that looks at coordinates
uses that basis as given.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ResourceCapError
from .exact_linalg import QQ, Domain
from .oi_cat import OIdObject, enumerate_hom_oid, markings
from .ring_core import RingSpec, UnsupportedVariantError, in_positive_cone

__all__ = [
    "SPADE", "Monomial", "FormalSum", "StratumError", "MixedPivotError",
    "in_stratum", "apply_E", "fin_alpha", "fin_var", "s_prime", "psi", "HigmanWord",
    "letter_leq", "leq_word", "leq_monomial", "enumerate_positive_monomials",
    "MAX_TARGET_ROWS", "random_stratum_sum",
]

MAX_TARGET_ROWS = 6


class StratumError(ValueError):
    pass


class MixedPivotError(ValueError):
    pass


class _Spade:
    __slots__ = ()

    def __repr__(self):
        return "SPADE"

    def __reduce__(self):
        return "SPADE"


SPADE = _Spade()


def _require_free(ring):
    if ring.is_finite:
        raise UnsupportedVariantError("positivity needs a ring with free additive group")


@dataclass(frozen=True)
class Monomial:
    """Matrix (tuple of n rows of d ring elements) with pivots ``alpha``."""
    ring: RingSpec = field(compare=False, repr=False)
    n: int
    alpha: tuple
    rows: tuple

    def __post_init__(self):
        ring = self.ring
        rows = tuple(tuple(ring.coerce(x) for x in r) for r in self.rows)
        alpha = tuple(self.alpha)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "alpha", alpha)
        OIdObject(self.n, alpha)
        if len(rows) != self.n or any(len(r) != len(alpha) for r in rows):
            raise ValueError(f"matrix is not {self.n}x{len(alpha)}")
        for j, a in enumerate(alpha):
            if rows[a - 1][j] != ring.one:
                raise ValueError(f"pivot ({a}, {j + 1}) is not 1")
            if any(rows[i][j] != ring.zero for i in range(a, self.n)):
                raise ValueError(f"column {j + 1} is nonzero below its pivot")

    @property
    def d(self):
        return len(self.alpha)

    @classmethod
    def build(cls, ring, n, alpha, entries=None):
        """``entries`` maps 1-based (i, j) with i < alpha_j to ring elements."""
        d = len(alpha)
        rows = [[ring.zero] * d for _ in range(n)]
        for j, a in enumerate(alpha):
            rows[a - 1][j] = ring.one
        for (i, j), v in (entries or {}).items():
            if not 1 <= i < alpha[j - 1]:
                raise ValueError(f"({i}, {j}) is not above the pivot of column {j}")
            rows[i - 1][j - 1] = ring.coerce(v)
        return cls(ring, n, tuple(alpha), rows)

    def entry(self, i, j):
        return self.rows[i - 1][j - 1]

    def free_positions(self):
        """(i, j), 1-based, with i < alpha_j; column-major."""
        return [(i, j + 1) for j, a in enumerate(self.alpha) for i in range(1, a)]

    def times(self, other):
        """Monoid product with a second element of the same Lambda_{n,alpha}:
        exponents add off the pivots, pivot factors are shared."""
        if (other.n, other.alpha) != (self.n, self.alpha):
            raise MixedPivotError("monomials live in different Lambda_{n,alpha}")
        ring = self.ring
        rows = [list(r) for r in self.rows]
        for i, j in self.free_positions():
            rows[i - 1][j - 1] = ring.add(self.entry(i, j), other.entry(i, j))
        return Monomial(ring, self.n, self.alpha, rows)

    def to_json(self):
        return {"n": self.n, "alpha": list(self.alpha),
                "matrix": [[list(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, ring, obj):
        return cls(ring, obj["n"], tuple(obj["alpha"]),
                   [[tuple(x) if isinstance(x, list) else x for x in row] for row in obj["matrix"]])


class FormalSum:
    """Finite linear combination of monomials sharing (n, d)."""

    def __init__(self, terms=None, domain: Domain = QQ):
        self.domain = domain
        self.terms = {}
        shape = None
        for mono, c in (terms.items() if isinstance(terms, dict) else (terms or [])):
            if shape is None:
                shape = (mono.n, mono.d)
            elif (mono.n, mono.d) != shape:
                raise ValueError("monomials in a formal sum must share (n, d)")
            c = domain.add(self.terms.get(mono, 0), domain.convert(c))
            if c:
                self.terms[mono] = c
            else:
                self.terms.pop(mono, None)

    @classmethod
    def single(cls, mono, coeff=1, domain=QQ):
        return cls({mono: coeff}, domain)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __add__(self, other):
        return FormalSum(list(self.terms.items()) + list(other.terms.items()), self.domain)

    def scale(self, c):
        return FormalSum({m: v * c for m, v in self.terms.items()}, self.domain)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def alphas(self):
        return {m.alpha for m in self.terms}

    def common_alpha(self):
        al = self.alphas()
        if len(al) > 1:
            raise MixedPivotError(f"terms have several pivot tuples: {sorted(al)}")
        return next(iter(al)) if al else None

    def by_alpha(self):
        out = {}
        for m, c in self.terms.items():
            out.setdefault(m.alpha, {})[m] = c
        return {a: FormalSum(t, self.domain) for a, t in out.items()}

    def __repr__(self):
        parts = [f"{c}*{m.rows}" for m, c in sorted(self.terms.items(), key=lambda t: t[0].rows)]
        return "FormalSum(" + " + ".join(parts) + ")"


# -- strata and E-operators ------------------------------------------------------

def _alpha_k(alpha, k):
    return 0 if k == 0 else alpha[k - 1]


def in_stratum(tau: Monomial, k):
    """Every entry in a row i >= alpha_k lies in the positive cone (alpha_0 = 0)."""
    _require_free(tau.ring)
    if not 0 <= k <= tau.d:
        raise ValueError(f"k={k} outside 0..{tau.d}")
    lo = _alpha_k(tau.alpha, k)
    return all(in_positive_cone(tau.ring, x)
               for i, row in enumerate(tau.rows, start=1) if i >= lo for x in row)


def _apply_E_mono(tau, i, j, r):
    ring = tau.ring
    a = tau.alpha[j - 1]
    rows = [list(row) for row in tau.rows]
    src = tau.rows[a - 1]
    for c in range(tau.d):
        if src[c] != ring.zero:
            rows[i - 1][c] = ring.add(rows[i - 1][c], ring.mul(src[c], r))
    return Monomial(ring, tau.n, tau.alpha, rows)


def apply_E(i, j, r, x: FormalSum):
    """Left-compose every monomial with E_{i,alpha_j}^r (e_{alpha_j} -> r e_i + e_{alpha_j})."""
    alpha = x.common_alpha()
    if alpha is None:
        return FormalSum(domain=x.domain)
    if not 1 <= j <= len(alpha):
        raise ValueError(f"j={j} outside 1..{len(alpha)}")
    if not 1 <= i < alpha[j - 1]:
        raise ValueError(f"need 1 <= i < alpha_j = {alpha[j - 1]}, got i={i}")
    ring = next(iter(x.terms)).ring
    r = ring.coerce(r)
    return FormalSum({_apply_E_mono(m, i, j, r): c for m, c in x.terms.items()}, x.domain)


# -- initial terms ----------------------------------------------------------------

def fin_alpha(f):
    """Component at the lexicographically largest pivot tuple.

    ``f`` is a FormalSum (split by pivot tuple) or a dict alpha -> FormalSum.
    Returns ``(alpha0, component)``; the zero element gives ``(None, 0)``.
    """
    parts = f.by_alpha() if isinstance(f, FormalSum) else {a: s for a, s in f.items() if s}
    domain = f.domain if isinstance(f, FormalSum) else QQ
    if not parts:
        return None, FormalSum(domain=domain)
    a0 = max(parts)
    return a0, parts[a0]


def s_prime(alpha, k):
    """S'_{n,alpha,k}: positions (i, j) with k+1 <= j <= d and
    max(alpha_k, 1) <= i < alpha_{k+1}, sorted by (i, j)."""
    d = len(alpha)
    if k >= d:
        return []
    lo = max(_alpha_k(alpha, k), 1)
    hi = alpha[k]
    return [(i, j) for i in range(lo, hi) for j in range(k + 1, d + 1) if i < alpha[j - 1]]


def _sprime_key(tau, positions):
    return tuple(c for (i, j) in positions for c in tau.entry(i, j))


def fin_var(x: FormalSum, k):
    """Keep the terms whose S'-exponents are largest in the lex order of
    flattened coordinates.  ``fin_var(0) = 0``."""
    if not x:
        return FormalSum(domain=x.domain)
    alpha = x.common_alpha()
    for m in x.terms:
        if not in_stratum(m, k):
            raise StratumError(f"monomial {m.rows} is not in stratum k={k}")
    positions = s_prime(alpha, k)
    best = max(_sprime_key(m, positions) for m in x.terms)
    return FormalSum({m: c for m, c in x.terms.items() if _sprime_key(m, positions) == best},
                     x.domain)


# -- Higman words ---------------------------------------------------------------

@dataclass(frozen=True)
class HigmanWord:
    letters: tuple  # each letter: tuple of d items, each SPADE or an integer tuple

    def __len__(self):
        return len(self.letters)

    def to_json(self):
        return [["spade" if x is SPADE else list(x) for x in letter] for letter in self.letters]

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(tuple(SPADE if x == "spade" else tuple(x) for x in letter)
                         for letter in obj))


def psi(tau: Monomial) -> HigmanWord:
    if not in_stratum(tau, 0):
        raise StratumError("psi is only defined on monomials with all entries nonnegative")
    zero = tau.ring.zero
    letters = []
    for i in range(1, tau.n + 1):
        letter = []
        for j, a in enumerate(tau.alpha, start=1):
            if i < a:
                letter.append(tau.entry(i, j))
            elif i == a:
                letter.append(SPADE)
            else:
                letter.append(zero)
        letters.append(tuple(letter))
    return HigmanWord(tuple(letters))


def letter_leq(a, b):
    for x, y in zip(a, b):
        if x is SPADE or y is SPADE:
            if x is not y:
                return False
        elif any(p > q for p, q in zip(x, y)):
            return False
    return True


def leq_word(w: HigmanWord, w2: HigmanWord):
    """Subword embedding with letterwise comparison.  Greedy earliest matching
    is optimal because matching a letter as early as possible never removes
    options for the remaining letters."""
    it = iter(w2.letters)
    return all(any(letter_leq(a, b) for b in it) for a in w.letters)


def leq_monomial(tau: Monomial, tau2: Monomial):
    """tau <= tau2 iff some OI(d) map iota has tau2 - iota_*(tau) nonnegative
    on the region above the pivots of tau2."""
    if tau.d != tau2.d:
        return False
    if tau2.n > MAX_TARGET_ROWS:
        raise ResourceCapError(f"n'={tau2.n} exceeds the embedding search cap {MAX_TARGET_ROWS}",
                               tau2.n, MAX_TARGET_ROWS)
    ring = tau.ring
    for m in (tau, tau2):
        if not in_stratum(m, 0):
            raise StratumError("the order is defined on nonnegative monomials only")
    src, tgt = OIdObject(tau.n, tau.alpha), OIdObject(tau2.n, tau2.alpha)
    if tau.n > tau2.n:
        return False
    free = tau2.free_positions()
    for iota in enumerate_hom_oid(src, tgt):
        pushed = {}
        for i, j in tau.free_positions():
            pushed[iota(i), j] = tau.entry(i, j)
        if all(in_positive_cone(ring, ring.sub(tau2.entry(i, j), pushed.get((i, j), ring.zero)))
               for i, j in free):
            return True
    return False


def enumerate_positive_monomials(ring, n_max, d, coord_max):
    """All monomials with n <= n_max, d columns and coordinates in [0, coord_max]."""
    _require_free(ring)
    values = list(itertools.product(range(coord_max + 1), repeat=ring.rank))
    out = []
    for n in range(max(d, 1), n_max + 1):
        for alpha in markings(n, d):
            probe = Monomial.build(ring, n, alpha)
            pos = probe.free_positions()
            for vals in itertools.product(values, repeat=len(pos)):
                out.append(Monomial.build(ring, n, alpha, dict(zip(pos, vals))))
    return out


def random_stratum_sum(ring, n, alpha, k, rng, terms=4, spread=3, domain=QQ):
    """Random element of k[Lambda_{n,alpha,k+}] (helper for randomized checks)."""
    lo = _alpha_k(alpha, k)
    probe = Monomial.build(ring, n, alpha)
    out = []
    for _ in range(terms):
        entries = {}
        for i, j in probe.free_positions():
            if i >= lo:
                entries[i, j] = tuple(rng.randint(0, spread) for _ in range(ring.rank))
            else:
                entries[i, j] = tuple(rng.randint(-spread, spread) for _ in range(ring.rank))
        out.append((Monomial.build(ring, n, alpha, entries), Fraction(rng.randint(-5, 5))))
    return FormalSum(out, domain)
