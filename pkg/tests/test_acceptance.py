"""Acceptance criteria 1-10, one test each.

Every test records a PASS/FAIL line shown in the pytest terminal summary;
running this file directly prints the same lines.
"""

import random
import sys
import time

import pytest

from oistab.exact_linalg import GF, QQ, ZZ
from oistab.homology_engine import (GroupPresentation, frattini_rank, group_homology,
                                    induced_oi_maps, inversion_numbers_product,
                                    inversion_numbers_recurrence, lie_homology)
from oistab.oi_cat import (check_shift_decomposition, fg_witness, markings,
                           random_dim_table)
from oistab.ovi_cat import (build_group, count_hom_ovi, enumerate_hom_ovi,
                            factor_unique, induction_dims, mat_compose)
from oistab.ring_core import builtin
from oistab.stability import degree_report
from oistab.wpo_order import enumerate_positive_monomials

try:
    from conftest import record
except ImportError:  # pragma: no cover
    def record(number, ok, detail=""):
        return ok

F2, F3, Z, Zi = builtin("F2"), builtin("F3"), builtin("Z"), builtin("Zi")


def _report(number, ok, detail):
    record(number, ok, detail)
    assert ok, detail


def test_criterion_01_koszul_matches_inversion_numbers():
    t0 = time.time()
    I = inversion_numbers_product(3, 6)
    bad = []
    for n in range(1, 7):
        top = min(3, n * (n - 1) // 2)
        h = lie_homology(Z, n, top, QQ)
        want = [I[i][n] for i in range(top + 1)]
        if h[:top + 1] != want:
            bad.append((n, h, want))
    dt = time.time() - t0
    _report(1, not bad and dt < 300, f"n<=6, i<=3; mismatches={bad}; {dt:.1f}s")


def test_criterion_02_inversion_routes_agree():
    P = inversion_numbers_product(6, 14)
    R = inversion_numbers_recurrence(6, 14)
    ok = P == R
    ok = ok and all(P[0][n] == 1 for n in range(1, 15))
    ok = ok and all(P[1][n] == n - 1 for n in range(1, 15))
    _report(2, ok, "product == recurrence for i<=6, n<=14; I(0,n)=1; I(1,n)=n-1")


def test_criterion_03_degree_report():
    rep = degree_report(4, 14, source="inversion")
    bad = []
    for i, r in rep.items():
        fit = r["fit"]
        if not (fit.fit and fit.degree == i and fit.onset <= i + 1
                and all(fit(n) == inversion_numbers_product(i, n)[i][n]
                        for n in range(fit.onset, 15))):
            bad.append(i)
    _report(3, not bad and len(rep) == 5, f"degrees/onsets "
            f"{[(i, r['fit'].degree, r['fit'].onset) for i, r in rep.items()]}")


def test_criterion_04_finite_group_goldens():
    t0 = time.time()
    checks = {}
    z2 = GroupPresentation.cyclic(2)
    checks["Z/2 over F2"] = group_homology(z2, 6, GF(2), "bar")[0] == [1] * 7
    # rational homology vanishes in positive degrees; degree bound set by bar size
    for fam_ring, n, top in ((F2, 2, 6), (F2, 3, 3), (F3, 3, 2)):
        G = build_group(fam_ring, "U", n)
        vals, _ = group_homology(GroupPresentation.from_group(G), top, QQ, "bar")
        checks[f"U{n}({fam_ring.label()}) over Q, i<={top}"] = vals == [1] + [0] * top
    for R, p in ((F2, 2), (F3, 3)):
        G = build_group(R, "U", 3)
        vals, _ = group_homology(GroupPresentation.from_group(G), 1, GF(p), "bar")
        checks[f"H1 U3(F{p})"] = vals[1] == 2 == frattini_rank(G, p)
    integral = group_homology(z2, 3, ZZ, "bar")[0]
    checks["H_*(Z/2,Z)"] = integral == [(1, []), (0, [2]), (0, []), (0, [2])]
    dt = time.time() - t0
    bad = [k for k, v in checks.items() if not v]
    _report(4, not bad and dt < 600, f"failed={bad}; {dt:.1f}s")


def test_criterion_05_split_summand_inequality():
    dims = {}
    for n in (2, 3, 4):
        gp = GroupPresentation.from_group(build_group(F2, "U", n))
        dims[n] = group_homology(gp, 3, GF(2), "minres")[0]
        if n < 4:
            assert group_homology(gp, 3, GF(2), "bar")[0] == dims[n]
    ok = all(dims[n][i] <= dims[n + 1][i] for n in (2, 3) for i in range(4))
    _report(5, ok, f"dim H_i(U_n(F2),F2), i<=3: {dims}")


def _factorization_exhaustive(ring, d, n):
    """Orbits of U_n on Hom(R^d, R^n) are indexed by standard morphisms: every
    phi lies in exactly one orbit U_n f, and factor_unique finds that f."""
    mats = enumerate_hom_ovi(ring, d, n)
    U = build_group(ring, "U", n)
    owner = {}
    for al in markings(n, d):
        f = next(m for m in mats if m.alpha == al and m.is_standard())
        orbit = {mat_compose(ring, U.elements[u], f.rows) for u in range(U.order)}
        for rows in orbit:
            if rows in owner:
                return False
            owner[rows] = f.rows
    if len(owner) != len(mats):
        return False
    for phi in mats:
        psi, f = factor_unique(phi)
        if mat_compose(ring, psi, f.rows) != phi.rows or owner[phi.rows] != f.rows:
            return False
    return True


def test_criterion_06_ovi_hom_sets():
    counts_ok = all(len(enumerate_hom_ovi(R, d, n)) == count_hom_ovi(R, d, n)
                    == sum(R.size ** sum(a - 1 for a in al) for al in markings(n, d))
                    for R in (F2, F3) for d in (1, 2) for n in range(d, 5))
    fact_ok = all(_factorization_exhaustive(F2, d, n) for d in (1, 2) for n in range(d, 4))
    _report(6, counts_ok and fact_ok, f"counts={counts_ok}, factorization={fact_ok}")


def test_criterion_07_kan_and_shift():
    ind_ok = all(induction_dims(R, d, n, {al: 1 for al in markings(n, d)})
                 == len(enumerate_hom_ovi(R, d, n))
                 for R in (F2, F3) for d in (1, 2) for n in range(d, 5))
    rng = random.Random(7)
    shift_ok = True
    for _ in range(100):
        d, N = rng.randint(0, 2), rng.randint(0, 6)
        shift_ok = shift_ok and check_shift_decomposition(random_dim_table(d, N + 1, rng), d, N)
    _report(7, ind_ok and shift_ok, f"induction={ind_ok}, shift (100 tables)={shift_ok}")


def test_criterion_08_higman_embedding():
    from oistab.cli import embed_check
    t0 = time.time()
    results = {R.label(): embed_check(R, 3, 2, 2) for R in (Z, Zi)}
    ok = all(s["ok"] for s in results.values())
    sizes = {k: [v["elements"] for v in s["per_d"].values()] for k, s in results.items()}
    _report(8, ok, f"set sizes per d {sizes}; {time.time() - t0:.1f}s")


def test_criterion_09_fin_E_commutation():
    from oistab.cli import fin_commutation_check
    s = fin_commutation_check([Z, Zi], 1000, seed=2024)
    _report(9, s["cases"] == 1000 and s["failures"] == 0,
            f"{s['cases']} cases, {s['failures']} failures")


def test_criterion_10_fg_witness():
    M = induced_oi_maps(Z, 1, 7, QQ)
    wit = fg_witness(M, 2, 7)
    pairs = M.check_functoriality()
    _report(10, all(wit) and pairs > 0, f"dims={[M.dims[n] for n in range(8)]}, "
            f"witness={wit}, composable pairs checked={pairs}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
