"""Chain complexes and homology for unitriangular Lie algebras and finite groups.

Lie side: the Chevalley-Eilenberg (Koszul) complex of u_n(R) for R with free
additive group, and induced maps along OI morphisms.  Group side: the
normalized bar complex of a finite group with coefficients in a module, and
a minimal-resolution backend for p-groups over F_p.  Also the inversion-number
table that Dwyer's theorem identifies with dim H_i(U_n(Z), Q).
"""

import itertools
import random
from dataclasses import dataclass, field
from math import comb

from .errors import ResourceCapError
from .exact_linalg import (QQ, ZZ, ChainComplex, Domain, SparseMatrix, SpanSolver,
                           homology_dims, homology_groups_integral, kernel_basis)
from .oi_cat import TabulatedOIModule, enumerate_hom
from .ovi_cat import FiniteMatrixGroup
from .resolution import minimal_resolution_ranks
from .ring_core import UnsupportedVariantError

__all__ = [
    "ENGINE_VERSION", "KOSZUL_CAP", "BAR_CAP", "LieAlgebraPresentation", "JacobiError",
    "koszul_complex", "lie_homology", "inversion_numbers", "inversion_numbers_product",
    "inversion_numbers_recurrence", "GroupPresentation", "bar_complex", "group_homology",
    "frattini_rank", "induced_oi_maps", "homology_basis",
]

ENGINE_VERSION = "1"
KOSZUL_CAP = 200_000
BAR_CAP = 500_000


class JacobiError(AssertionError):
    pass


def _insert_sign(z, rest):
    """Sign and sorted tuple of z ^ (sorted rest); (0, None) if z in rest."""
    below = 0
    for x in rest:
        if x == z:
            return 0, None
        if x < z:
            below += 1
    out = rest[:below] + (z,) + rest[below:]
    return (-1 if below % 2 else 1), out


def _sort_sign(seq):
    """Sign of the permutation sorting ``seq`` (distinct entries) and the sorted tuple."""
    seq = list(seq)
    sign = 1
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


class LieAlgebraPresentation:
    """u_n(R) with basis E_ij (x) b_a, i < j, for a basis b_a of R.

    ``labels[k] = (i, j, a)``; the default order is lexicographic, ``order``
    may give any permutation of that list.
    """

    def __init__(self, ring, n, order=None, check=True):
        if ring.is_finite:
            raise UnsupportedVariantError("Koszul complexes are built over free additive rings")
        self.ring, self.n = ring, n
        lam = ring.rank
        labels = [(i, j, a) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                  for a in range(lam)]
        if order is not None:
            if sorted(order) != labels:
                raise ValueError("order must be a permutation of the basis labels")
            labels = list(order)
        self.labels = labels
        self.index = {lab: k for k, lab in enumerate(labels)}
        self.bracket = {}
        for x, (i, j, a) in enumerate(labels):
            for y, (k, l, c) in enumerate(labels):
                out = {}
                if j == k:
                    for e, g in enumerate(ring.structure[a][c]):
                        if g:
                            z = self.index[i, l, e]
                            out[z] = out.get(z, 0) + g
                if l == i:
                    for e, g in enumerate(ring.structure[c][a]):
                        if g:
                            z = self.index[k, j, e]
                            out[z] = out.get(z, 0) - g
                out = {z: v for z, v in out.items() if v}
                if out:
                    self.bracket[x, y] = out
        if check:
            self.check()

    @property
    def dim(self):
        return len(self.labels)

    def br(self, x, y):
        return self.bracket.get((x, y), {})

    def br_vec(self, u, v):
        out = {}
        for x, s in u.items():
            for y, t in v.items():
                for z, c in self.br(x, y).items():
                    out[z] = out.get(z, 0) + s * t * c
        return {z: c for z, c in out.items() if c}

    def check(self):
        """Antisymmetry and Jacobi on every basis pair/triple."""
        N = self.dim
        for x in range(N):
            if self.br(x, x):
                raise JacobiError(f"[x,x] != 0 for {self.labels[x]}")
            for y in range(x + 1, N):
                a, b = self.br(x, y), self.br(y, x)
                if {z: -c for z, c in a.items()} != b:
                    raise JacobiError(f"antisymmetry fails for {self.labels[x]}, {self.labels[y]}")
        for x, y, z in itertools.combinations(range(N), 3):
            tot = {}
            for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
                for t, c in self.br_vec({u: 1}, self.br(v, w)).items():
                    tot[t] = tot.get(t, 0) + c
            if any(tot.values()):
                raise JacobiError(f"Jacobi fails on {self.labels[x]}, {self.labels[y]}, "
                                  f"{self.labels[z]}")
        return True


def _koszul_differential(lie, k, index_km1, basis_k, domain):
    """d_k on the standard basis of Lambda^k."""
    entries = {}
    for col, S in enumerate(basis_k):
        for p in range(k):
            for q in range(p + 1, k):
                br = lie.br(S[p], S[q])
                if not br:
                    continue
                sign = -1 if (p + q) % 2 else 1  # (-1)^{(p+1)+(q+1)}
                rest = S[:p] + S[p + 1:q] + S[q + 1:]
                for z, c in br.items():
                    s, tup = _insert_sign(z, rest)
                    if s:
                        key = (index_km1[tup], col)
                        entries[key] = entries.get(key, 0) + sign * s * c
    return SparseMatrix(len(index_km1), len(basis_k),
                        {k_: v for k_, v in entries.items() if v}, domain)


def koszul_complex(ring, n, top_degree=None, domain: Domain = QQ, order=None, lie=None):
    """Chevalley-Eilenberg complex of u_n(R) in degrees 0..top_degree."""
    lie = lie or LieAlgebraPresentation(ring, n, order)
    N = lie.dim
    top = N if top_degree is None else min(top_degree, N)
    for k in range(top + 1):
        if comb(N, k) > KOSZUL_CAP:
            raise ResourceCapError(f"dim Lambda^{k} = C({N},{k}) = {comb(N, k)} exceeds "
                                   f"{KOSZUL_CAP}", comb(N, k), KOSZUL_CAP)
    bases = [list(itertools.combinations(range(N), k)) for k in range(top + 1)]
    indices = [{t: i for i, t in enumerate(b)} for b in bases]
    diffs = [_koszul_differential(lie, k, indices[k - 1], bases[k], domain)
             for k in range(1, top + 1)]
    cx = ChainComplex([len(b) for b in bases], diffs, domain,
                      {"family": "lie", "n": n, "ring": ring.label()})
    cx.check()
    cx.meta["bases"] = bases
    return cx


def lie_homology(ring, n, i_max, domain: Domain = QQ, order=None):
    """dim H_i(u_n(R) (x) k) for i = 0..i_max (zero past the top exterior power)."""
    N = n * (n - 1) // 2 * ring.rank
    cx = koszul_complex(ring, n, i_max + 1, domain, order)
    h = homology_dims(cx)
    return (h + [0] * (i_max + 1))[:i_max + 1] if N < i_max + 1 else h[:i_max + 1]


# -- inversion numbers -------------------------------------------------------------

def inversion_numbers_product(i_max, n_max):
    """Coefficients of prod_{k=1}^{n} (1 + q + ... + q^{k-1}), truncated at q^{i_max}."""
    table = [[0] * (n_max + 1) for _ in range(i_max + 1)]
    poly = [1] + [0] * i_max
    table[0][0] = 1
    for n in range(1, n_max + 1):
        new = [0] * (i_max + 1)
        for e, c in enumerate(poly):
            if c:
                for s in range(min(n - 1, i_max - e) + 1):
                    new[e + s] += c
        poly = new
        for i in range(i_max + 1):
            table[i][n] = poly[i]
    return table


def inversion_numbers_recurrence(i_max, n_max):
    """I(i,n) - I(i,n-1) = sum_{j<i} I(j,n-1) for n > i; for n <= i, placing the
    largest letter contributes I(i-s, n-1) for 0 <= s <= n-1."""
    I = [[0] * (n_max + 1) for _ in range(i_max + 1)]
    I[0][0] = 1
    for n in range(1, n_max + 1):
        for i in range(i_max + 1):
            if n > i:
                I[i][n] = I[i][n - 1] + sum(I[j][n - 1] for j in range(i))
            else:
                I[i][n] = sum(I[i - s][n - 1] for s in range(n) if i - s >= 0)
    return I


def inversion_numbers(i_max, n_max):
    """Table ``I[i][n]`` computed two ways and cross-checked."""
    a = inversion_numbers_product(i_max, n_max)
    b = inversion_numbers_recurrence(i_max, n_max)
    if a != b:
        bad = next((i, n) for i in range(i_max + 1) for n in range(n_max + 1) if a[i][n] != b[i][n])
        raise AssertionError(f"inversion oracles disagree at (i, n) = {bad}")
    return a


# -- finite groups -------------------------------------------------------------------

@dataclass
class GroupPresentation:
    """Multiplication table plus an optional left module.

    ``module[g]`` is the (dense, square) matrix of g acting on k^m; ``None``
    means the trivial one-dimensional module.
    """
    table: list
    identity: int
    module: list = None
    label: str = ""
    order_primes: tuple = field(default=())

    @classmethod
    def from_group(cls, G: FiniteMatrixGroup, module=None):
        return cls(G.table(), G.identity, module, G.label)

    @classmethod
    def cyclic(cls, m):
        return cls([[(a + b) % m for b in range(m)] for a in range(m)], 0, None, f"Z/{m}")

    @property
    def order(self):
        return len(self.table)

    @property
    def module_dim(self):
        return 1 if self.module is None else len(self.module[0])

    def inverse(self, g):
        return self.table[g].index(self.identity)

    def check_module(self, samples=200, seed=0):
        if self.module is None:
            return True
        rng = random.Random(seed)
        m = self.module_dim
        for _ in range(samples):
            a, b = rng.randrange(self.order), rng.randrange(self.order)
            A, B, C = self.module[a], self.module[b], self.module[self.table[a][b]]
            AB = [[sum(A[i][k] * B[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
            if AB != [list(r) for r in C]:
                raise ValueError(f"module matrices do not respect the product of {a} and {b}")
        return True


def _bar_dim(gp, k):
    return gp.module_dim * (gp.order - 1) ** k


def bar_complex(gp: GroupPresentation, top_degree, domain: Domain = QQ):
    """Normalized bar complex M (x)_G B(G) in degrees 0..top_degree.

    Basis of degree k: (module basis v, tuple of k non-identity elements).
    M is made a right module by m.g = g^{-1} m, and
    d(m[g1|...|gk]) = m.g1 [g2|...] + sum_i (-1)^i m[..|g_i g_{i+1}|..] + (-1)^k m[g1|...|g_{k-1}].
    """
    gp.check_module()
    for k in range(top_degree + 1):
        if (gp.order - 1) ** k > BAR_CAP:
            raise ResourceCapError(
                f"bar degree {k} has (|G|-1)^{k} = {(gp.order - 1) ** k} tuples, cap {BAR_CAP}; "
                f"lower the degree or use the minimal-resolution backend",
                (gp.order - 1) ** k, BAR_CAP)
    e = gp.identity
    nonid = [g for g in range(gp.order) if g != e]
    pos = {g: i for i, g in enumerate(nonid)}
    q = len(nonid)
    m = gp.module_dim
    table = gp.table
    right = None
    if gp.module is not None:
        right = [gp.module[gp.inverse(g)] for g in range(gp.order)]

    def code(tup):
        c = 0
        for g in tup:
            c = c * q + pos[g]
        return c

    diffs = []
    for k in range(1, top_degree + 1):
        entries = {}

        def put(row_tuple, v, coeff, col):
            key = (code(row_tuple) * m + v, col)
            entries[key] = entries.get(key, 0) + coeff

        for tup in itertools.product(nonid, repeat=k):
            base = code(tup)
            for v in range(m):
                col = base * m + v
                # first face: act on the coefficient
                if right is None:
                    put(tup[1:], v, 1, col)
                else:
                    mat = right[tup[0]]
                    for w in range(m):
                        if mat[w][v]:
                            put(tup[1:], w, mat[w][v], col)
                for i in range(k - 1):
                    g = table[tup[i]][tup[i + 1]]
                    if g != e:
                        put(tup[:i] + (g,) + tup[i + 2:], v, -1 if (i + 1) % 2 else 1, col)
                put(tup[:-1], v, -1 if k % 2 else 1, col)
        diffs.append(SparseMatrix(m * q ** (k - 1), m * q ** k,
                                  {key: c for key, c in entries.items() if c}, domain))
    cx = ChainComplex([m * q ** k for k in range(top_degree + 1)], diffs, domain,
                      {"family": "bar", "group": gp.label})
    cx.check()
    return cx


def _is_p_group(order, p):
    while order % p == 0:
        order //= p
    return order == 1


def group_homology(gp: GroupPresentation, i_max, domain: Domain = QQ, backend="auto"):
    """dim H_i(G, M) for i <= i_max over a field, or (rank, torsion) over ZZ.

    ``backend``: ``bar``, ``minres`` (trivial F_p coefficients, p-groups only)
    or ``auto`` (bar when it fits under the cap, else minres when possible).
    Returns ``(values, backend_used)``.
    """
    fits = (gp.order - 1) ** (i_max + 1) <= BAR_CAP
    minres_ok = (domain.kind == "GF" and gp.module is None and _is_p_group(gp.order, domain.p))
    if backend == "auto":
        backend = "bar" if fits or not minres_ok else "minres"
    if backend == "minres":
        if not minres_ok:
            raise ValueError("minimal-resolution backend needs trivial F_p coefficients "
                             "and a p-group")
        return minimal_resolution_ranks(gp.table, gp.identity, domain.p, i_max), "minres"
    cx = bar_complex(gp, i_max + 1, domain)
    if domain.kind == "ZZ":
        return homology_groups_integral(cx)[:i_max + 1], "bar"
    return homology_dims(cx)[:i_max + 1], "bar"


def frattini_rank(G: FiniteMatrixGroup, p):
    """log_p |G / G^p [G, G]| by brute force; equals dim H_1(G, F_p) for a p-group."""
    comm = set(G.commutator_subgroup())
    gens = set(comm)
    for g in range(G.order):
        x = G.identity
        for _ in range(p):
            x = G.mul(x, g)
        gens.add(x)
    sub, frontier = set(gens) | {G.identity}, list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.mul(x, s)
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    quotient = G.order // len(sub)
    r = 0
    while quotient > 1:
        if quotient % p:
            raise ValueError("quotient is not a p-group")
        quotient //= p
        r += 1
    return r


# -- induced maps on Lie homology ---------------------------------------------------

def homology_basis(cx, i):
    """(solver, representative indices, number of boundary vectors) for H_i.

    Boundary columns of d_{i+1} go in first; cycle basis vectors that are new
    modulo the span so far become the homology representatives.
    """
    dom = cx.domain
    solver = SpanSolver(dom)
    d_out = cx.d(i + 1)
    if d_out is not None:
        for col in d_out.column_dicts():
            solver.add(col)
    d_in = cx.d(i)
    cycles = ([{c: dom.convert(1)} for c in range(cx.dims[i])] if d_in is None
              else kernel_basis(d_in))
    reps, vecs = [], []
    for z in cycles:
        idx = solver.add(z)
        if idx is not None:
            reps.append(idx)
            vecs.append(z)
    return solver, reps, vecs


def _chain_map(lie_src, lie_tgt, f, basis_src, index_tgt, vec):
    """Image of a degree-i chain under E_ij -> E_f(i)f(j)."""
    out = {}
    for col, c in vec.items():
        labels = [lie_src.labels[x] for x in basis_src[col]]
        imgs = [lie_tgt.index[f(a), f(b), e] for (a, b, e) in labels]
        s, tup = _sort_sign(imgs)
        r = index_tgt[tup]
        out[r] = out.get(r, 0) + s * c
    return {k: v for k, v in out.items() if v}


def induced_oi_maps(ring, i, n_max, domain: Domain = QQ, order_fn=None):
    """TabulatedOIModule [n] -> H_i(u_n(R) (x) k) with maps induced by OI morphisms."""
    lies, cxs, hb = [], [], []
    for n in range(n_max + 1):
        order = order_fn(n) if order_fn else None
        lie = LieAlgebraPresentation(ring, n, order)
        cx = koszul_complex(ring, n, i + 1, domain, lie=lie)
        lies.append(lie)
        cxs.append(cx)
        hb.append(homology_basis(cx, i) if i <= cx.top else (SpanSolver(domain), [], []))
    dims = [len(h[1]) for h in hb]
    mats = {}
    for n in range(n_max + 1):
        for m in range(n, n_max + 1):
            if dims[n] == 0 or dims[m] == 0:
                for f in enumerate_hom(n, m):
                    mats[f] = SparseMatrix(dims[m], dims[n], {}, domain)
                continue
            basis_src = cxs[n].meta["bases"][i] if i <= cxs[n].top else []
            index_tgt = {t: r for r, t in enumerate(cxs[m].meta["bases"][i])}
            solver, reps, _ = hb[m]
            rep_pos = {idx: r for r, idx in enumerate(reps)}
            for f in enumerate_hom(n, m):
                ent = {}
                for col, z in enumerate(hb[n][2]):
                    img = _chain_map(lies[n], lies[m], f, basis_src, index_tgt, z)
                    coords = solver.coordinates(img)
                    if coords is None:
                        raise AssertionError(f"image of a cycle under {f.image} is not a cycle")
                    for idx, c in coords.items():
                        if idx in rep_pos:
                            ent[rep_pos[idx], col] = c
                mats[f] = SparseMatrix(dims[m], dims[n], ent, domain)
    return TabulatedOIModule(dims, mats, domain,
                             {"module": f"H_{i}(u_n({ring.label()}))", "window": [0, n_max]})
