"""Command-line front end.

Exit codes: 0 success, 1 validation failure or bad input, 2 resource cap
refusal, 64 usage error.
"""

import argparse
import csv
import io
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .errors import ResourceCapError
from .exact_linalg import ZZ, format_scalar, homology_dims, parse_domain

EXIT_OK, EXIT_INVALID, EXIT_CAP, EXIT_USAGE = 0, 1, 2, 64
CSV_HEADER = ["family", "ring", "n", "i", "coeff", "value"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_list(text):
    """``3``, ``2-5`` or ``2,3,7``."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _tuple(text):
    text = text.strip()
    return tuple(int(x) for x in text.split(",")) if text else ()


def _ring(text):
    from .ring_core import load_ring
    return load_ring(text)


def _torsion_string(free, torsion):
    parts = []
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append(f"Z^{free}")
    parts.extend(f"Z/{d}" for d in torsion)
    return "+".join(parts) or "0"


def _emit_rows(rows, fmt, out):
    rows = sorted(rows, key=lambda r: (r[0], r[1], r[2], r[3], r[4]))
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(rows)
    elif fmt == "json":
        json.dump([dict(zip(CSV_HEADER, r)) for r in rows], out, indent=1)
        out.write("\n")
    else:
        by_n = {}
        for r in rows:
            by_n.setdefault(r[2], []).append(str(r[5]))
        if len(by_n) == 1:
            out.write(",".join(next(iter(by_n.values()))) + "\n")
        else:
            for n, vals in by_n.items():
                out.write(f"n={n} {','.join(vals)}\n")


def _emit_json(obj, out):
    json.dump(obj, out, indent=1, sort_keys=True)
    out.write("\n")


# -- task workers (module level so they can be sent to worker processes) -------------

def _lie_task(ring_text, n, i_max, coeff, cache_dir):
    from .cache import Cache, cache_key
    from .homology_engine import koszul_complex
    ring = _ring(ring_text)
    dom = parse_domain(coeff)
    top = i_max + 1
    cx = None
    if cache_dir:
        cache = Cache(cache_dir)
        key = cache_key(ring, "koszul", n, top, dom)
        cx = cache.get_complex(key)
    if cx is None:
        cx = koszul_complex(ring, n, top, dom)
        if cache_dir:
            cache.put_complex(key, cx)
    h = homology_dims(cx)
    h = (h + [0] * (i_max + 1))[:i_max + 1]
    return [("lie", ring.label(), n, i, str(dom), h[i]) for i in range(i_max + 1)]


def _group_task(ring_text, family, n, marks, C, i_max, coeff, backend, cache_dir):
    from .cache import Cache, cache_key
    from .homology_engine import GroupPresentation, group_homology
    from .ovi_cat import build_group
    ring = _ring(ring_text)
    dom = parse_domain(coeff)
    label = family if family != "U_marked" else f"U_marked{marks}"
    key = cache_key(ring, label, n, i_max, dom, extra={"backend": backend, "C": C})
    if cache_dir:
        hit = Cache(cache_dir).get_json(key)
        if hit is not None:
            return [tuple(r) for r in hit]
    G = build_group(ring, family, n, marks=marks, C=C)
    vals, used = group_homology(GroupPresentation.from_group(G), i_max, dom, backend)
    rows = []
    for i, v in enumerate(vals):
        value = _torsion_string(*v) if dom == ZZ else v
        rows.append((label, ring.label(), n, i, str(dom), value))
    if cache_dir:
        Cache(cache_dir).put_json(key, [list(r) for r in rows])
    return rows


def _run_tasks(fn, tasks, jobs):
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(fn, *zip(*tasks)))
    else:
        results = [fn(*t) for t in tasks]
    return [row for res in results for row in res]


# -- subcommand handlers ------------------------------------------------------------

def cmd_ring_check(a, out):
    from .ring_core import in_positive_cone, validate
    ring = _ring(a.ring)
    rep = validate(ring)
    obj = {"ring": ring.label(), "kind": ring.kind, "checks": rep.checks, "ok": rep.ok}
    if a.cone is not None:
        obj["in_positive_cone"] = in_positive_cone(ring, ring.coerce(json.loads(a.cone)))
    _emit_json(obj, out)
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_oi_count(a, out):
    from .oi_cat import count_hom, enumerate_hom
    obj = {"n": a.n, "m": a.m, "count": count_hom(a.n, a.m)}
    if a.list:
        obj["morphisms"] = [list(f.image) for f in enumerate_hom(a.n, a.m)]
    _emit_json(obj, out)
    return EXIT_OK


def cmd_oi_split(a, out):
    from .oi_cat import OIdObject, merge_oid, split_oid
    if a.sizes is not None:
        obj = merge_oid(_tuple(a.sizes))
        _emit_json({"sizes": list(_tuple(a.sizes)), "n": obj.n, "marks": list(obj.marks)}, out)
    else:
        if a.n is None:
            raise UsageError("oi split needs --n/--marks or --sizes")
        obj = OIdObject(a.n, _tuple(a.marks))
        _emit_json({"n": obj.n, "marks": list(obj.marks), "sizes": list(split_oid(obj))}, out)
    return EXIT_OK


def cmd_ovi_homcount(a, out):
    from .oi_cat import markings
    from .ovi_cat import count_hom_ovi, enumerate_hom_ovi
    ring = _ring(a.ring)
    q = ring.size
    per = {",".join(map(str, al)): q ** sum(x - 1 for x in al) for al in markings(a.n, a.d)}
    obj = {"ring": ring.label(), "d": a.d, "n": a.n, "formula": count_hom_ovi(ring, a.d, a.n),
           "per_alpha": per}
    if a.enumerate:
        obj["enumerated"] = len(enumerate_hom_ovi(ring, a.d, a.n))
    _emit_json(obj, out)
    return EXIT_OK if not a.enumerate or obj["enumerated"] == obj["formula"] else EXIT_INVALID


def cmd_ovi_factor(a, out):
    from .ovi_cat import OviMorphism, factor_unique
    ring = _ring(a.ring)
    rows = [[ring.coerce(json.loads(x)) if x.strip().startswith("[") else ring.coerce(int(x))
             for x in r.split(",")] for r in a.matrix.split(";")]
    phi = OviMorphism(ring, len(rows), len(rows[0]), rows)
    psi, f = factor_unique(phi)
    _emit_json({"alpha": list(phi.alpha), "psi": [list(r) for r in psi],
                "f": [list(r) for r in f.rows]}, out)
    return EXIT_OK


def cmd_group_build(a, out):
    from .ovi_cat import build_group
    ring = _ring(a.ring)
    G = build_group(ring, a.family, a.n, marks=_tuple(a.marks), C=list(_tuple(a.C)) or None)
    obj = G.to_json()
    if a.output:
        with open(a.output, "w") as fh:
            json.dump(obj, fh, separators=(",", ":"))
        _emit_json({"label": G.label, "order": G.order, "output": a.output}, out)
    else:
        _emit_json({"label": G.label, "order": G.order, "identity": G.identity,
                    "elements": obj["elements"]}, out)
    return EXIT_OK


def cmd_group_homology(a, out):
    ns = _int_list(a.n)
    tasks = [(a.ring, a.family, n, _tuple(a.marks), list(_tuple(a.C)) or None, a.i_max, a.coeff,
              a.backend, a.cache_dir) for n in ns]
    _emit_rows(_run_tasks(_group_task, tasks, a.jobs), a.format, out)
    return EXIT_OK


def cmd_lie_homology(a, out):
    tasks = [(a.ring, n, a.i_max, a.coeff, a.cache_dir) for n in _int_list(a.n)]
    _emit_rows(_run_tasks(_lie_task, tasks, a.jobs), a.format, out)
    return EXIT_OK


def cmd_lie_oi_module(a, out):
    from .homology_engine import induced_oi_maps
    from .oi_cat import fg_witness
    ring = _ring(a.ring)
    M = induced_oi_maps(ring, a.i, a.n_max, parse_domain(a.coeff))
    checked = M.check_functoriality(samples=a.samples, seed=a.seed)
    obj = {"module": M.meta["module"], "window": [0, M.N], "dims": M.dims,
           "functoriality_pairs_checked": checked}
    ok = True
    if a.fg_degree is not None:
        wit = fg_witness(M, a.fg_degree, M.N)
        obj["fg_witness"] = {"D": a.fg_degree, "per_degree": wit}
        ok = all(wit)
    if a.output:
        M.save(a.output)
        obj["output"] = a.output
    _emit_json(obj, out)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_inversions(a, out):
    from .homology_engine import inversion_numbers
    I = inversion_numbers(a.i_max, a.n_max)
    rows = [("inversion", "Z", n, i, "QQ", I[i][n])
            for n in range(1, a.n_max + 1) for i in range(a.i_max + 1)]
    _emit_rows(rows, a.format, out)
    return EXIT_OK


def cmd_stability_fit(a, out):
    from .stability import DimSeq, detect_polynomial, read_dimension_csv
    if a.csv:
        seqs = read_dimension_csv(a.csv)
    elif a.values:
        seqs = {("values",): DimSeq(a.start, _tuple(a.values), "command line")}
    else:
        raise UsageError("stability fit needs --csv or --values")
    res = []
    for key in sorted(seqs):
        fit = detect_polynomial(seqs[key], a.min_margin)
        res.append({"key": list(key), **fit.to_json()})
    _emit_json(res, out)
    return EXIT_OK


def cmd_stability_report(a, out):
    from .stability import degree_report
    ring = _ring(a.ring) if a.ring else None
    rep = degree_report(a.i_max, a.n_max, a.source, ring, a.min_margin)
    obj = {str(i): {**r["fit"].to_json(), "expected_degree": r["expected_degree"], "ok": r["ok"]}
           for i, r in rep.items()}
    _emit_json({"source": a.source, "window": [1, a.n_max], "report": obj}, out)
    return EXIT_INVALID if any(r["ok"] is False for r in rep.values()) else EXIT_OK


def _load_monomial(ring, text):
    from .wpo_order import Monomial
    obj = json.loads(open(text).read() if not text.lstrip().startswith("{") else text)
    return Monomial.from_json(ring, obj)


def cmd_wpo_leq(a, out):
    from .wpo_order import leq_monomial, leq_word, psi
    ring = _ring(a.ring)
    t1, t2 = _load_monomial(ring, a.a), _load_monomial(ring, a.b)
    lm = leq_monomial(t1, t2)
    lw = leq_word(psi(t1), psi(t2))
    _emit_json({"leq_monomial": lm, "leq_word": lw, "psi_a": psi(t1).to_json(),
                "psi_b": psi(t2).to_json(), "basis": "ring basis as given"}, out)
    return EXIT_OK if lm == lw else EXIT_INVALID


def embed_check(ring, n_max, d_max, coord_max):
    """Exhaustive equivalence and order-axiom check; returns a summary dict."""
    from .wpo_order import enumerate_positive_monomials, leq_monomial, leq_word, psi
    summary = {"ring": ring.label(), "n_max": n_max, "d_max": d_max, "coord_max": coord_max,
               "per_d": {}}
    ok = True
    for d in range(1, d_max + 1):
        S = enumerate_positive_monomials(ring, n_max, d, coord_max)
        words = [psi(t) for t in S]
        N = len(S)
        up = [0] * N
        mismatches = 0
        for x in range(N):
            for y in range(N):
                lm = leq_monomial(S[x], S[y])
                if lm != leq_word(words[x], words[y]):
                    mismatches += 1
                if lm:
                    up[x] |= 1 << y
        reflexive = all(up[x] >> x & 1 for x in range(N))
        antisym = all(not (up[y] >> x & 1) for x in range(N) for y in range(N)
                      if x != y and up[x] >> y & 1)
        trans = True
        for x in range(N):
            m, y = up[x], 0
            while m:
                if m & 1 and up[y] & ~up[x]:
                    trans = False
                    break
                m >>= 1
                y += 1
            if not trans:
                break
        injective = len(set(words)) == N
        good = mismatches == 0 and reflexive and antisym and trans and injective
        ok = ok and good
        summary["per_d"][str(d)] = {"elements": N, "pairs": N * N, "mismatches": mismatches,
                                    "reflexive": reflexive, "antisymmetric": antisym,
                                    "transitive": trans, "psi_injective": injective}
    summary["ok"] = ok
    return summary


def cmd_wpo_embed_check(a, out):
    s = embed_check(_ring(a.ring), a.n_max, a.d_max, a.coord_max)
    _emit_json(s, out)
    return EXIT_OK if s["ok"] else EXIT_INVALID


def fin_commutation_check(rings, cases, seed, d_max=2, n_max=4):
    """Randomized check of fin_var(E(x)) == E(fin_var(x)) for j <= k."""
    from .oi_cat import markings
    from .wpo_order import apply_E, fin_var, random_stratum_sum
    rng = random.Random(seed)
    failures, done = [], 0
    while done < cases:
        ring = rng.choice(rings)
        d = rng.randint(1, d_max)
        n = rng.randint(d, n_max)
        alpha = rng.choice(markings(n, d))
        k = rng.randint(1, d)
        j = rng.randint(1, k)
        if alpha[j - 1] == 1:
            continue
        i = rng.randint(1, alpha[j - 1] - 1)
        r = tuple(rng.randint(-3, 3) for _ in range(ring.rank))
        x = random_stratum_sum(ring, n, alpha, k, rng, terms=rng.randint(0, 5))
        lhs, rhs = fin_var(apply_E(i, j, r, x), k), apply_E(i, j, r, fin_var(x, k))
        if lhs != rhs:
            failures.append({"ring": ring.label(), "n": n, "alpha": list(alpha), "k": k,
                             "i": i, "j": j, "r": list(r)})
        done += 1
    return {"cases": done, "failures": len(failures), "examples": failures[:5], "seed": seed}


def cmd_wpo_fin_demo(a, out):
    rings = [_ring(t) for t in a.ring]
    s = fin_commutation_check(rings, a.cases, a.seed)
    _emit_json(s, out)
    return EXIT_OK if s["failures"] == 0 else EXIT_INVALID


# -- parser ----------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="oistab", description="OI/OVI combinatorics and homology of unitriangular "
                                           "groups and Lie algebras.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt="json"):
        sp.add_argument("--format", choices=["csv", "json", "text"], default=fmt)
        sp.add_argument("--cache-dir", default=None)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--output", default=None)

    ring = top.add_parser("ring").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = ring.add_parser("check")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--cone", default=None, help="element (JSON) to test for positivity")
    common(sp)
    sp.set_defaults(fn=cmd_ring_check)

    oi = top.add_parser("oi").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = oi.add_parser("count")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--list", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_oi_count)
    sp = oi.add_parser("split")
    sp.add_argument("--n", type=int)
    sp.add_argument("--marks", default="")
    sp.add_argument("--sizes", default=None)
    common(sp)
    sp.set_defaults(fn=cmd_oi_split)

    ovi = top.add_parser("ovi").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = ovi.add_parser("homcount")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--enumerate", action="store_true")
    common(sp)
    sp.set_defaults(fn=cmd_ovi_homcount)
    sp = ovi.add_parser("factor")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--matrix", required=True, help="rows separated by ';', entries by ','")
    common(sp)
    sp.set_defaults(fn=cmd_ovi_factor)

    grp = top.add_parser("group").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    for name, fn in (("build", cmd_group_build), ("homology", cmd_group_homology)):
        sp = grp.add_parser(name)
        sp.add_argument("--family", choices=["U", "U_marked", "B", "B_C"], required=True)
        sp.add_argument("--ring", required=True)
        sp.add_argument("--n", required=True, type=str if name == "homology" else int)
        sp.add_argument("--marks", default="")
        sp.add_argument("--C", default="")
        if name == "homology":
            sp.add_argument("--i-max", type=int, required=True)
            sp.add_argument("--coeff", default="q")
            sp.add_argument("--backend", choices=["auto", "bar", "minres"], default="auto")
        common(sp, "text" if name == "homology" else "json")
        sp.set_defaults(fn=fn)

    lie = top.add_parser("lie").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = lie.add_parser("homology")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--n", required=True)
    sp.add_argument("--i-max", type=int, required=True)
    sp.add_argument("--coeff", default="q")
    common(sp, "text")
    sp.set_defaults(fn=cmd_lie_homology)
    sp = lie.add_parser("oi-module")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--coeff", default="q")
    sp.add_argument("--fg-degree", type=int, default=None)
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(fn=cmd_lie_oi_module)

    sp = top.add_parser("inversions")
    sp.add_argument("--i-max", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    common(sp, "csv")
    sp.set_defaults(fn=cmd_inversions)

    st = top.add_parser("stability").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = st.add_parser("fit")
    sp.add_argument("--csv", default=None)
    sp.add_argument("--values", default=None)
    sp.add_argument("--start", type=int, default=1)
    sp.add_argument("--min-margin", type=int, default=2)
    common(sp)
    sp.set_defaults(fn=cmd_stability_fit)
    sp = st.add_parser("degree-report")
    sp.add_argument("--i-max", type=int, required=True)
    sp.add_argument("--n-max", type=int, required=True)
    sp.add_argument("--source", choices=["inversion", "koszul"], default="inversion")
    sp.add_argument("--ring", default=None)
    sp.add_argument("--min-margin", type=int, default=2)
    common(sp)
    sp.set_defaults(fn=cmd_stability_report)

    wpo = top.add_parser("wpo").add_subparsers(dest="sub", required=True, parser_class=_Parser)
    sp = wpo.add_parser("leq")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--a", required=True, help="monomial JSON or path")
    sp.add_argument("--b", required=True, help="monomial JSON or path")
    common(sp)
    sp.set_defaults(fn=cmd_wpo_leq)
    sp = wpo.add_parser("embed-check")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--n-max", type=int, default=3)
    sp.add_argument("--d-max", type=int, default=2)
    sp.add_argument("--coord-max", type=int, default=2)
    common(sp)
    sp.set_defaults(fn=cmd_wpo_embed_check)
    sp = wpo.add_parser("fin-demo")
    sp.add_argument("--ring", action="append", required=True)
    sp.add_argument("--cases", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    common(sp)
    sp.set_defaults(fn=cmd_wpo_fin_demo)
    return p


def run(argv=None, stdout=None):
    """Parse ``argv`` and dispatch; returns the exit code."""
    from .exact_linalg import ComplexIntegrityError
    from .ring_core import RingStructureError, UnsupportedVariantError
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    for name in ("n_max", "i_max", "jobs"):
        v = getattr(args, name, None)
        if v is not None and v < 0:
            print(f"oistab: --{name.replace('_', '-')} must be nonnegative", file=sys.stderr)
            return EXIT_USAGE
    buf = io.StringIO()
    try:
        code = args.fn(args, buf)
    except UsageError as exc:
        print(f"oistab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        print(f"oistab: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (RingStructureError, UnsupportedVariantError, ComplexIntegrityError,
            ValueError, KeyError, OSError, AssertionError) as exc:
        print(f"oistab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = buf.getvalue()
    if getattr(args, "output", None) and args.fn not in (cmd_group_build, cmd_lie_oi_module):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
