"""Minimal free resolutions of F_p over F_p[G] for finite p-groups.

For a p-group the augmentation ideal I is the Jacobson radical of F_p[G], so
a resolution whose generators at each stage are lifted from K / I K (K the
current kernel) is minimal and its ranks are b_k = dim H_k(G, F_p).  Vectors
in F_p[G]^r are dense numpy rows indexed by (generator, group element).
"""

import numpy as np

__all__ = ["rref_mod_p", "rank_mod_p", "left_nullspace_mod_p", "generating_set",
           "minimal_resolution_ranks"]


def rref_mod_p(A, p):
    """Row-reduce a copy of ``A`` over F_p.  Returns (R, pivot_columns)."""
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank_mod_p(A, p):
    if A.size == 0:
        return 0
    return len(rref_mod_p(A, p)[1])


def left_nullspace_mod_p(A, p):
    """Basis (as rows) of {x : x A = 0} over F_p."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape[1] == 0:
        return np.eye(n, dtype=np.int64)
    R, piv = rref_mod_p(A.T, p)
    free = [c for c in range(n) if c not in set(piv)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for r, pc in enumerate(piv):
            basis[t, pc] = (-R[r, f]) % p
    return basis


def generating_set(table, identity):
    """Greedy generating set: add the first element outside the subgroup so far."""
    N = len(table)
    gens, sub = [], {identity}
    while len(sub) < N:
        g = next(x for x in range(N) if x not in sub)
        gens.append(g)
        frontier = list(sub)
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = table[x][s]
                    if y not in sub:
                        sub.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


def _act(vectors, perm, rank, order):
    """Left-multiply rows of F_p[G]^rank vectors by a group element."""
    out = np.zeros_like(vectors)
    for j in range(rank):
        out[:, j * order + perm] = vectors[:, j * order:(j + 1) * order]
    return out


def minimal_resolution_ranks(table, identity, p, top):
    """Ranks b_0..b_top of the minimal resolution, i.e. dim H_k(G, F_p).

    ``table[a][b]`` is the index of the product a*b.  The group must be a
    p-group; this is checked through the order.
    """
    order = len(table)
    q = order
    while q % p == 0:
        q //= p
    if q != 1:
        raise ValueError(f"group of order {order} is not a {p}-group")
    left = [np.array(table[g], dtype=np.int64) for g in range(order)]
    gens = generating_set(table, identity)
    ranks = [1]
    # kernel of the augmentation: spanned by h - 1
    K = np.zeros((order - 1, order), dtype=np.int64)
    for t, h in enumerate(x for x in range(order) if x != identity):
        K[t, h] = 1
        K[t, identity] = p - 1
    for _ in range(top):
        b = ranks[-1]
        if K.shape[0] == 0:
            ranks.append(0)
            K = np.zeros((0, 0), dtype=np.int64)
            continue
        IK = np.concatenate([(_act(K, left[s], b, order) - K) % p for s in gens])
        R, piv = rref_mod_p(IK, p)
        R, piv = list(R), list(piv)
        new = []
        for w in K:
            if R:
                w = (w - w[piv] @ np.array(R)) % p
            nz = np.nonzero(w)[0]
            if nz.size == 0:
                continue
            new.append(w)  # still in K: differs from a row of K by elements of K
            c = int(nz[0])
            w = (w * pow(int(w[c]), -1, p)) % p
            R = [(row - row[c] * w) % p for row in R]
            R.append(w)
            piv.append(c)
        nb = len(new)
        ranks.append(nb)
        if nb == 0:
            K = np.zeros((0, 0), dtype=np.int64)
            continue
        W = np.array(new, dtype=np.int64)
        # images of (generator j, element g) -> g . w_j, row index j * order + g
        D = np.zeros((nb * order, b * order), dtype=np.int64)
        for g in range(order):
            moved = _act(W, left[g], b, order)
            D[np.arange(nb) * order + g] = moved
        K = left_nullspace_mod_p(D, p)
    return ranks
