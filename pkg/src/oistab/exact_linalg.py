"""
Exact sparse linear algebra over QQ, GF(p) and ZZ.

Nothing here uses floating point.  Rank over QQ is computed by fraction-free
elimination on integer rows (each row is kept primitive, i.e. divided by the
gcd of its entries); rank over GF(p) by ordinary modular elimination.  Over ZZ
use :func:`snf`.
"""

import os
import tempfile
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

__all__ = [
    "Domain", "QQ", "ZZ", "GF", "parse_domain", "SparseMatrix", "ChainComplex",
    "ComplexIntegrityError", "UnsupportedDomainError",
    "rank", "kernel_basis", "rref", "SpanSolver", "snf", "homology_dims",
    "homology_groups_integral", "write_triplets", "read_triplets", "format_scalar",
]


class UnsupportedDomainError(TypeError):
    pass


class ComplexIntegrityError(ValueError):
    def __init__(self, degree, message):
        super().__init__(f"degree {degree}: {message}")
        self.degree = degree


@dataclass(frozen=True)
class Domain:
    kind: str  # "QQ" | "ZZ" | "GF"
    p: int = 0

    @property
    def is_field(self):
        return self.kind != "ZZ"

    def convert(self, x):
        if self.kind == "QQ":
            return Fraction(x)
        if self.kind == "ZZ":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if self.kind == "QQ":
            return 1 / Fraction(x)
        if self.kind == "GF":
            return pow(x, -1, self.p)
        raise UnsupportedDomainError("ZZ is not a field")

    def add(self, x, y):
        s = x + y
        return s % self.p if self.kind == "GF" else s

    def mul(self, x, y):
        s = x * y
        return s % self.p if self.kind == "GF" else s

    def __str__(self):
        return f"GF({self.p})" if self.kind == "GF" else self.kind


QQ = Domain("QQ")
ZZ = Domain("ZZ")


def GF(p):
    return Domain("GF", p)


def parse_domain(text):
    """``q``/``QQ`` -> QQ, ``z`` -> ZZ, ``f2``/``fp:5``/``GF(5)`` -> GF(p)."""
    t = text.strip().lower()
    if t in ("q", "qq", "rational"):
        return QQ
    if t in ("z", "zz", "integer"):
        return ZZ
    for prefix in ("fp:", "gf(", "f"):
        if t.startswith(prefix):
            digits = t[len(prefix):].rstrip(")")
            if digits.isdigit():
                return GF(int(digits))
    raise ValueError(f"unknown coefficient domain {text!r}")


def format_scalar(x):
    if isinstance(x, Fraction) and x.denominator != 1:
        return f"{x.numerator}/{x.denominator}"
    return str(int(x))


class SparseMatrix:
    """A matrix stored as ``{(row, col): value}`` with no explicit zeros."""

    __slots__ = ("nrows", "ncols", "entries", "domain")

    def __init__(self, nrows, ncols, entries=None, domain=QQ):
        self.nrows = nrows
        self.ncols = ncols
        self.domain = domain
        clean = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (r, c), v in items:
                if not (0 <= r < nrows and 0 <= c < ncols):
                    raise IndexError(f"entry ({r}, {c}) outside {nrows}x{ncols}")
                if (r, c) in clean:
                    raise ValueError(f"duplicate entry ({r}, {c})")
                v = domain.convert(v)
                if v:
                    clean[r, c] = v
        self.entries = clean

    @classmethod
    def from_dense(cls, rows, domain=QQ, ncols=None):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(nrows, ncols, {(i, j): v for i, row in enumerate(rows)
                                  for j, v in enumerate(row) if v}, domain)

    @classmethod
    def identity(cls, n, domain=QQ):
        return cls(n, n, {(i, i): 1 for i in range(n)}, domain)

    @classmethod
    def from_columns(cls, columns, nrows, domain=QQ):
        """Build from a list of ``{row: value}`` column dicts."""
        return cls(nrows, len(columns),
                   {(r, j): v for j, col in enumerate(columns) for r, v in col.items()}, domain)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self):
        return len(self.entries)

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz}, {self.domain})"

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __getitem__(self, key):
        return self.entries.get(key, 0)

    def is_zero(self):
        return not self.entries

    def to_dense(self):
        out = [[self.domain.convert(0)] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def to_domain(self, domain):
        return SparseMatrix(self.nrows, self.ncols, self.entries, domain)

    def transpose(self):
        m = SparseMatrix(self.ncols, self.nrows, domain=self.domain)
        m.entries = {(c, r): v for (r, c), v in self.entries.items()}
        return m

    def row_dicts(self):
        rows = [dict() for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def column_dicts(self):
        cols = [dict() for _ in range(self.ncols)]
        for (r, c), v in self.entries.items():
            cols[c][r] = v
        return cols

    def __matmul__(self, other):
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        dom = self.domain
        rows_b = other.row_dicts()
        acc = {}
        for (i, k), a in self.entries.items():
            for j, b in rows_b[k].items():
                acc[i, j] = acc.get((i, j), 0) + a * b
        m = SparseMatrix(self.nrows, other.ncols, domain=dom)
        if dom.kind == "GF":
            m.entries = {k: v % dom.p for k, v in acc.items() if v % dom.p}
        else:
            m.entries = {k: v for k, v in acc.items() if v}
        return m

    def apply(self, vec):
        """Multiply by a sparse vector ``{col: value}``; returns ``{row: value}``."""
        out = {}
        cols = self.column_dicts()
        for c, x in vec.items():
            for r, v in cols[c].items():
                out[r] = out.get(r, 0) + v * x
        return _clean(out, self.domain)

    def permuted(self, row_perm, col_perm):
        """Entry (r, c) moves to (row_perm[r], col_perm[c])."""
        m = SparseMatrix(self.nrows, self.ncols, domain=self.domain)
        m.entries = {(row_perm[r], col_perm[c]): v for (r, c), v in self.entries.items()}
        return m


def _clean(vec, domain):
    if domain.kind == "GF":
        return {k: v % domain.p for k, v in vec.items() if v % domain.p}
    return {k: v for k, v in vec.items() if v}


# -- rank ---------------------------------------------------------------------

def _primitive_int_row(row):
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {c: int(v * den) for c, v in row.items()}
    g = 0
    for v in ints.values():
        g = gcd(g, v)
    if g > 1:
        ints = {c: v // g for c, v in ints.items()}
    return ints


def _eliminate_fraction_free(row, prow, col):
    a, b = prow[col], row[col]
    g = gcd(a, b)
    a, b = a // g, b // g
    out = {c: a * v for c, v in row.items()}
    for c, v in prow.items():
        w = out.get(c, 0) - b * v
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _eliminate_mod(row, prow, col, p):
    b = row[col]
    out = dict(row)
    for c, v in prow.items():
        w = (out.get(c, 0) - b * v) % p
        if w:
            out[c] = w
        else:
            out.pop(c, None)
    return out


def _echelon_pivots(rows, domain):
    """Incremental structured elimination; returns ``{pivot_col: row}``.

    Rows are processed shortest first.  A new row is reduced against the
    oldest matching pivot until it either vanishes or has no pivot column,
    at which point its sparsest column (by global column count) becomes a new
    pivot.  Reducing with the oldest pivot only introduces columns of younger
    pivots, so the loop terminates.
    """
    if domain.kind == "QQ":
        rows = [_primitive_int_row(r) for r in rows if r]
    else:
        rows = [dict(r) for r in rows if r]
    colcount = Counter(c for r in rows for c in r)
    pivots = {}
    stamp = 0
    p = domain.p
    for row in sorted(rows, key=len):
        while row:
            best = None
            for c in row:
                entry = pivots.get(c)
                if entry is not None and (best is None or entry[0] < best[0]):
                    best = (entry[0], c, entry[1])
            if best is None:
                col = min(row, key=lambda c: (colcount[c], c))
                if domain.kind == "GF":
                    inv = pow(row[col], -1, p)
                    row = {c: v * inv % p for c, v in row.items()}
                pivots[col] = (stamp, row)
                stamp += 1
                break
            _, col, prow = best
            if domain.kind == "GF":
                row = _eliminate_mod(row, prow, col, p)
            else:
                row = _eliminate_fraction_free(row, prow, col)
    return {c: r for c, (_, r) in pivots.items()}


def rank(m: SparseMatrix) -> int:
    if not m.domain.is_field:
        raise UnsupportedDomainError("rank over ZZ is not supported; use snf")
    if m.nrows <= m.ncols:
        rows = m.row_dicts()
    else:
        rows = m.column_dicts()
    return len(_echelon_pivots(rows, m.domain))


# -- reduced row echelon form, kernels, spans ----------------------------------

def _scale(vec, s, domain):
    return _clean({k: v * s for k, v in vec.items()}, domain)


def _axpy(y, a, x, domain):
    """Return y + a*x for sparse dict vectors."""
    out = dict(y)
    for k, v in x.items():
        out[k] = out.get(k, 0) + a * v
    return _clean(out, domain)


def rref(rows, domain):
    """Fully reduced row echelon form of a list of sparse row dicts.

    Returns ``{pivot_col: row}`` with each row having a 1 in its pivot column
    and zeros in every other pivot column.  The pivot of a row is its smallest
    surviving column, so the result depends only on the input order.
    """
    if not domain.is_field:
        raise UnsupportedDomainError("rref needs a field")
    piv = {}
    for row in rows:
        row = _clean({k: domain.convert(v) for k, v in row.items()}, domain)
        for c in [c for c in row if c in piv]:
            if c in row:
                row = _axpy(row, -row[c], piv[c], domain)
        if not row:
            continue
        col = min(row)
        row = _scale(row, domain.inv(row[col]), domain)
        for c, other in piv.items():
            if col in other:
                piv[c] = _axpy(other, -other[col], row, domain)
        piv[col] = row
    return piv


def kernel_basis(m: SparseMatrix):
    """Basis of the right null space, one vector per free column (ascending)."""
    if not m.domain.is_field:
        raise UnsupportedDomainError("kernel_basis needs a field")
    dom = m.domain
    piv = rref(m.row_dicts(), dom)
    basis = []
    for f in range(m.ncols):
        if f in piv:
            continue
        vec = {f: dom.convert(1)}
        for pc, row in piv.items():
            if f in row:
                vec[pc] = dom.convert(-row[f])
        basis.append(_clean(vec, dom))
    return basis


class SpanSolver:
    """Incrementally built span with coordinate recovery.

    ``add(v)`` returns the index assigned to ``v`` if it enlarges the span and
    ``None`` otherwise.  ``coordinates(v)`` writes ``v`` in terms of the
    accepted vectors, or returns ``None`` if ``v`` is outside the span.
    """

    def __init__(self, domain):
        if not domain.is_field:
            raise UnsupportedDomainError("SpanSolver needs a field")
        self.domain = domain
        self.rows = {}    # pivot col -> echelon vector
        self.combo = {}   # pivot col -> {accepted index: coeff}
        self.count = 0

    def __len__(self):
        return self.count

    def _reduce(self, vec):
        dom = self.domain
        vec = _clean({k: dom.convert(v) for k, v in vec.items()}, dom)
        combo = {}
        for c in sorted(c for c in vec if c in self.rows):
            a = vec.get(c)
            if not a:
                continue
            vec = _axpy(vec, -a, self.rows[c], dom)
            combo = _axpy(combo, a, self.combo[c], dom)
        # back-substitution keeps rows reduced, so one pass is enough
        return vec, combo

    def add(self, vec):
        dom = self.domain
        rest, combo = self._reduce(vec)
        if not rest:
            return None
        idx = self.count
        self.count += 1
        col = min(rest)
        s = dom.inv(rest[col])
        row = _scale(rest, s, dom)
        # rest = vec - sum(combo), so row = s*(e_idx - combo)
        new_combo = _scale(_axpy({idx: dom.convert(1)}, dom.convert(-1), combo, dom), s, dom)
        for c in list(self.rows):
            other = self.rows[c]
            if col in other:
                a = other[col]
                self.rows[c] = _axpy(other, -a, row, dom)
                self.combo[c] = _axpy(self.combo[c], -a, new_combo, dom)
        self.rows[col] = row
        self.combo[col] = new_combo
        return idx

    def coordinates(self, vec):
        rest, combo = self._reduce(vec)
        if rest:
            return None
        return combo

    def contains(self, vec):
        rest, _ = self._reduce(vec)
        return not rest


# -- Smith normal form ---------------------------------------------------------

def snf(m: SparseMatrix, transforms=True):
    """Smith normal form over ZZ.

    Returns ``(diag, U, V)`` with ``U @ m @ V`` diagonal, ``diag`` the
    min(rows, cols) diagonal entries (nonnegative, each dividing the next), and
    U, V unimodular (dense lists of lists; ``None`` if ``transforms`` is off).
    Dense iterated-gcd reduction: entry growth is the scaling limit.
    """
    if m.domain.kind not in ("ZZ", "QQ"):
        raise UnsupportedDomainError("snf works over ZZ")
    r, c = m.nrows, m.ncols
    A = [[int(x) for x in row] for row in m.to_dense()]
    U = [[int(i == j) for j in range(r)] for i in range(r)] if transforms else None
    V = [[int(i == j) for j in range(c)] for i in range(c)] if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        if U is not None:
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            row = A[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    dirty = dirty or A[i][t] != 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    dirty = dirty or A[t][j] != 0
            if dirty:
                # move the smallest remainder in row/column t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, r) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, c) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, r) for j in range(t + 1, c)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            if U is not None:
                U[t] = [-a for a in U[t]]
        t += 1
    diag = [A[i][i] for i in range(min(r, c))]
    return diag, U, V


# -- chain complexes -----------------------------------------------------------

@dataclass
class ChainComplex:
    """``differentials[k-1]`` is d_k : C_k -> C_{k-1}, for k = 1..top."""
    dims: list
    differentials: list
    domain: Domain = QQ
    meta: dict = field(default_factory=dict)

    @property
    def top(self):
        return len(self.dims) - 1

    def d(self, k):
        if 1 <= k <= len(self.differentials):
            return self.differentials[k - 1]
        return None

    def check(self):
        if len(self.differentials) != self.top:
            raise ComplexIntegrityError(self.top, "need one differential per positive degree")
        for k in range(1, self.top + 1):
            dk = self.d(k)
            if dk.ncols != self.dims[k] or dk.nrows != self.dims[k - 1]:
                raise ComplexIntegrityError(k, f"d_{k} has shape {dk.shape}, expected "
                                               f"({self.dims[k - 1]}, {self.dims[k]})")
        for k in range(1, self.top):
            if not (self.d(k) @ self.d(k + 1)).is_zero():
                raise ComplexIntegrityError(k, f"d_{k} o d_{k + 1} != 0")
        return self


def homology_dims(c: ChainComplex):
    """h_k = dim_k - rank d_k - rank d_{k+1}; out-of-range differentials count as 0."""
    if not c.domain.is_field:
        raise UnsupportedDomainError("homology_dims needs a field; use homology_groups_integral")
    c.check()
    ranks = [0] + [rank(c.d(k)) for k in range(1, c.top + 1)] + [0]
    return [c.dims[k] - ranks[k] - ranks[k + 1] for k in range(c.top + 1)]


def homology_groups_integral(c: ChainComplex):
    """Per degree ``(free_rank, torsion_divisors)`` from SNF of the differentials."""
    if c.domain.kind != "ZZ":
        raise UnsupportedDomainError("integral homology needs a ZZ complex")
    c.check()
    divisors = [[]] + [[x for x in snf(c.d(k), transforms=False)[0] if x]
                       for k in range(1, c.top + 1)] + [[]]
    out = []
    for k in range(c.top + 1):
        free = c.dims[k] - len(divisors[k]) - len(divisors[k + 1])
        out.append((free, [x for x in divisors[k + 1] if x > 1]))
    return out


# -- triplet files -------------------------------------------------------------

def write_triplets(m: SparseMatrix, path):
    """Write ``rows cols nnz`` then one ``r c value`` line per entry (atomic)."""
    lines = [f"{m.nrows} {m.ncols} {m.nnz}"]
    for (r, c) in sorted(m.entries):
        lines.append(f"{r} {c} {format_scalar(m.entries[r, c])}")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    with os.fdopen(fd, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_triplets(path, domain=QQ):
    with open(path) as fh:
        header = fh.readline().split()
        nrows, ncols, nnz = (int(x) for x in header)
        entries = {}
        for line in fh:
            if not line.strip():
                continue
            r, c, v = line.split()
            entries[int(r), int(c)] = Fraction(v)
    if len(entries) != nnz:
        raise ValueError(f"{path}: header says {nnz} entries, found {len(entries)}")
    return SparseMatrix(nrows, ncols, entries, domain)
