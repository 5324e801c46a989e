"""The categories OI and OI(d), dimension-level functor calculus, and
finitely tabulated OI-modules.

Sets are the skeleton ``[n] = {1, ..., n}``; a morphism ``[n] -> [m]`` is
stored by its strictly increasing image tuple.
"""

import itertools
import json
import os
import random
from dataclasses import dataclass
from math import comb, prod

from .exact_linalg import QQ, SparseMatrix, parse_domain, rank, read_triplets, write_triplets

__all__ = [
    "OIMorphism", "OIdObject", "compose", "identity", "enumerate_hom", "count_hom",
    "markings", "split_oid", "merge_oid", "enumerate_hom_oid", "count_hom_oid",
    "kan_dims", "shift_dims", "delta_dims", "check_shift_decomposition",
    "random_dim_table", "TabulatedOIModule", "principal_projective", "fg_witness",
    "FunctorialityError", "WindowError",
]


class WindowError(ValueError):
    """A dimension table does not cover the requested range."""


class FunctorialityError(AssertionError):
    pass


@dataclass(frozen=True, order=True)
class OIMorphism:
    source: int
    target: int
    image: tuple

    def __post_init__(self):
        img = tuple(self.image)
        object.__setattr__(self, "image", img)
        if len(img) != self.source:
            raise ValueError(f"image {img} has length {len(img)}, expected {self.source}")
        if self.source > self.target:
            raise ValueError(f"no injection [{self.source}] -> [{self.target}]")
        if any(not 1 <= v <= self.target for v in img):
            raise ValueError(f"image {img} leaves [1..{self.target}]")
        if any(a >= b for a, b in zip(img, img[1:])):
            raise ValueError(f"image {img} is not strictly increasing")

    def __call__(self, x):
        return self.image[x - 1]

    def is_identity(self):
        return self.source == self.target

    def to_json(self):
        return {"source": self.source, "target": self.target, "image": list(self.image)}


def identity(n):
    return OIMorphism(n, n, tuple(range(1, n + 1)))


def compose(g: OIMorphism, f: OIMorphism) -> OIMorphism:
    """``g o f``; requires target(f) == source(g)."""
    if f.target != g.source:
        raise ValueError(f"cannot compose [{f.source}]->[{f.target}] with "
                         f"[{g.source}]->[{g.target}]")
    return OIMorphism(f.source, g.target, tuple(g(x) for x in f.image))


def enumerate_hom(n, m):
    """All morphisms ``[n] -> [m]`` in lexicographic order of image tuples."""
    if n < 0 or m < 0:
        raise ValueError("sizes must be nonnegative")
    if n > m:
        return []
    return [OIMorphism(n, m, img) for img in itertools.combinations(range(1, m + 1), n)]


def count_hom(n, m):
    return comb(m, n) if 0 <= n <= m else 0


# -- OI(d) ----------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class OIdObject:
    n: int
    marks: tuple

    def __post_init__(self):
        marks = tuple(self.marks)
        object.__setattr__(self, "marks", marks)
        if len(marks) > self.n:
            raise ValueError(f"{len(marks)} marks do not fit in [{self.n}]")
        if any(not 1 <= v <= self.n for v in marks):
            raise ValueError(f"marks {marks} leave [1..{self.n}]")
        if any(a >= b for a, b in zip(marks, marks[1:])):
            raise ValueError(f"marks {marks} are not strictly increasing")

    @property
    def d(self):
        return len(self.marks)


def markings(n, d):
    """Increasing d-tuples in [n], lexicographic."""
    return list(itertools.combinations(range(1, n + 1), d))


def split_oid(obj: OIdObject):
    """Gap sizes (|S_1|, ..., |S_{d+1}|) between consecutive marks."""
    bounds = (0,) + obj.marks + (obj.n + 1,)
    return tuple(b - a - 1 for a, b in zip(bounds, bounds[1:]))


def merge_oid(sizes) -> OIdObject:
    sizes = tuple(sizes)
    if not sizes or any(s < 0 for s in sizes):
        raise ValueError(f"need a nonempty tuple of nonnegative sizes, got {sizes}")
    marks, pos = [], 0
    for s in sizes[:-1]:
        pos += s + 1
        marks.append(pos)
    return OIdObject(sum(sizes) + len(sizes) - 1, tuple(marks))


def enumerate_hom_oid(src: OIdObject, tgt: OIdObject):
    """OI morphisms ``f`` with ``f(src.marks[i]) == tgt.marks[i]`` for all i."""
    if src.d != tgt.d:
        raise ValueError("objects carry different numbers of marks")
    # choose each gap block of src inside the matching gap block of tgt
    sb, tb = (0,) + src.marks + (src.n + 1,), (0,) + tgt.marks + (tgt.n + 1,)
    blocks = []
    for i in range(src.d + 1):
        lo, hi = tb[i] + 1, tb[i + 1]
        blocks.append(list(itertools.combinations(range(lo, hi), sb[i + 1] - sb[i] - 1)))
    out = []
    for choice in itertools.product(*blocks):
        img = []
        for i, part in enumerate(choice):
            img.extend(part)
            if i < src.d:
                img.append(tgt.marks[i])
        out.append(OIMorphism(src.n, tgt.n, tuple(img)))
    return sorted(out)


def count_hom_oid(src: OIdObject, tgt: OIdObject):
    return prod(comb(t, s) for s, t in zip(split_oid(src), split_oid(tgt)))


# -- dimension tables ------------------------------------------------------------
#
# An OI(d) dimension table is a dict {(n, marks): dim}.

def _lookup(table, n, lam):
    try:
        return table[n, tuple(lam)]
    except KeyError:
        raise WindowError(f"dimension table has no entry for n={n}, marks={tuple(lam)}") from None


def kan_dims(table, d, N):
    """Phi_!(M)_n = sum over markings lam of [n] of dim M_{n,lam}, for n = 0..N."""
    return [sum(_lookup(table, n, lam) for lam in markings(n, d)) for n in range(N + 1)]


def shift_dims(table, d, N):
    """Sigma(M)_{n,lam} = M_{n+1,lam}, for n = 0..N (needs entries up to N+1)."""
    return {(n, lam): _lookup(table, n + 1, lam)
            for n in range(N + 1) for lam in markings(n, d)}


def delta_dims(table, d, N):
    """Delta(M)_{n,lam} = M_{n+1, lam + (n+1,)}; an OI(d-1) table.  Zero for d = 0."""
    if d == 0:
        return {}
    return {(n, lam): _lookup(table, n + 1, lam + (n + 1,))
            for n in range(N + 1) for lam in markings(n, d - 1)}


def check_shift_decomposition(table, d, N):
    """dim Sigma(Phi_! M)_n == dim Phi_!(Sigma M)_n + dim Phi_!(Delta M)_n for n <= N."""
    lhs = kan_dims(table, d, N + 1)[1:]
    sig = kan_dims(shift_dims(table, d, N), d, N)
    dl = kan_dims(delta_dims(table, d, N), d - 1, N) if d > 0 else [0] * (N + 1)
    return all(a == b + c for a, b, c in zip(lhs, sig, dl))


def random_dim_table(d, N, rng=None, max_dim=5):
    rng = rng or random.Random()
    return {(n, lam): rng.randint(0, max_dim) for n in range(N + 1) for lam in markings(n, d)}


# -- tabulated OI-modules --------------------------------------------------------

class TabulatedOIModule:
    """An OI-module restricted to degrees 0..N.

    ``matrices[f]`` is the matrix of ``M(f): M_n -> M_m`` for ``f: [n] -> [m]``
    (shape dims[m] x dims[n]).  Missing identities are filled in.
    """

    def __init__(self, dims, matrices, domain=QQ, meta=None):
        self.dims = list(dims)
        self.domain = domain
        self.meta = dict(meta or {})
        self.matrices = dict(matrices)
        for f, mat in self.matrices.items():
            if f.target > self.N:
                raise WindowError(f"morphism {f.image} targets degree {f.target} > {self.N}")
            if mat.shape != (self.dims[f.target], self.dims[f.source]):
                raise ValueError(f"matrix for {f} has shape {mat.shape}, expected "
                                 f"({self.dims[f.target]}, {self.dims[f.source]})")
        for n in range(self.N + 1):
            self.matrices.setdefault(identity(n), SparseMatrix.identity(self.dims[n], domain))

    @property
    def N(self):
        return len(self.dims) - 1

    def matrix(self, f):
        try:
            return self.matrices[f]
        except KeyError:
            raise WindowError(f"no matrix recorded for morphism {f}") from None

    def composable_pairs(self):
        for a in range(self.N + 1):
            for b in range(a, self.N + 1):
                for c in range(b, self.N + 1):
                    for f in enumerate_hom(a, b):
                        for g in enumerate_hom(b, c):
                            yield g, f

    def check_functoriality(self, samples=None, seed=0):
        """Assert M(g o f) = M(g) M(f) on all (or ``samples`` random) pairs.

        Returns the number of pairs checked.
        """
        for n in range(self.N + 1):
            if self.matrix(identity(n)) != SparseMatrix.identity(self.dims[n], self.domain):
                raise FunctorialityError(f"identity of [{n}] does not act as the identity")
        pairs = list(self.composable_pairs())
        if samples is not None and samples < len(pairs):
            pairs = random.Random(seed).sample(pairs, samples)
        for g, f in pairs:
            if self.matrix(compose(g, f)) != self.matrix(g) @ self.matrix(f):
                raise FunctorialityError(f"M({g.image} o {f.image}) != M(g) M(f)")
        return len(pairs)

    # serialization: manifest.json plus one triplet file per morphism

    def save(self, directory):
        os.makedirs(directory, exist_ok=True)
        entries = []
        for f in sorted(self.matrices):
            name = f"m_{f.source}_{f.target}_{'-'.join(map(str, f.image)) or 'e'}.tri"
            write_triplets(self.matrices[f], os.path.join(directory, name))
            entries.append({**f.to_json(), "file": name})
        manifest = {"window": [0, self.N], "dims": self.dims, "domain": str(self.domain),
                    "meta": self.meta, "morphisms": entries}
        tmp = os.path.join(directory, ".manifest.json.tmp")
        with open(tmp, "w") as fh:
            json.dump(manifest, fh, indent=1, sort_keys=True)
        os.replace(tmp, os.path.join(directory, "manifest.json"))

    @classmethod
    def load(cls, directory):
        with open(os.path.join(directory, "manifest.json")) as fh:
            manifest = json.load(fh)
        domain = parse_domain(manifest["domain"])
        mats = {}
        for e in manifest["morphisms"]:
            f = OIMorphism(e["source"], e["target"], tuple(e["image"]))
            mats[f] = read_triplets(os.path.join(directory, e["file"]), domain)
        return cls(manifest["dims"], mats, domain, manifest.get("meta"))


def principal_projective(k, N, domain=QQ):
    """P_k = k[Hom([k], -)] on degrees 0..N, basis of each degree in lex order."""
    bases = [enumerate_hom(k, n) for n in range(N + 1)]
    index = [{h: i for i, h in enumerate(b)} for b in bases]
    mats = {}
    for n in range(N + 1):
        for m in range(n, N + 1):
            for f in enumerate_hom(n, m):
                ent = {(index[m][compose(f, h)], j): 1 for j, h in enumerate(bases[n])}
                mats[f] = SparseMatrix(len(bases[m]), len(bases[n]), ent, domain)
    return TabulatedOIModule([len(b) for b in bases], mats, domain, {"module": f"P_{k}"})


def fg_witness(M: TabulatedOIModule, D, N=None):
    """For each n <= N: do the images of M_k (k <= D) under all OI maps span M_n?

    Only a finite-window statement; it says nothing about degrees past N.
    """
    N = M.N if N is None else N
    if N > M.N:
        raise WindowError(f"module is tabulated up to {M.N}, asked for {N}")
    out = []
    for n in range(N + 1):
        if M.dims[n] == 0:
            out.append(True)
            continue
        cols = []
        for k in range(min(D, n) + 1):
            for f in enumerate_hom(k, n):
                cols.extend(M.matrix(f).column_dicts())
        span = SparseMatrix.from_columns(cols, M.dims[n], M.domain)
        out.append(rank(span) == M.dims[n])
    return out
