"""Eventual-polynomiality detection on finite windows of dimension sequences."""

import csv
from dataclasses import dataclass, field
from fractions import Fraction

from .exact_linalg import format_scalar

__all__ = ["DimSeq", "PolyFit", "NoFitWithinWindow", "detect_polynomial", "degree_report",
           "read_dimension_csv", "finite_differences"]


@dataclass(frozen=True)
class DimSeq:
    start: int
    values: tuple
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise ValueError("dimension sequences are nonnegative")

    @property
    def end(self):
        return self.start + len(self.values) - 1

    def at(self, n):
        return self.values[n - self.start]


@dataclass(frozen=True)
class PolyFit:
    """f(n) = sum_k newton[k] * C(n - onset, k), valid on onset..end."""
    degree: int
    newton: tuple
    onset: int
    margin: int
    end: int
    provenance: str = ""

    fit = True

    def __call__(self, n):
        return sum(c * _gbinom(n - self.onset, k) for k, c in enumerate(self.newton))

    def power_coefficients(self):
        """Coefficients of f in the monomial basis 1, n, n^2, ..."""
        out = [Fraction(0)] * (self.degree + 1)
        for k, c in enumerate(self.newton):
            # C(n - o, k) = prod_{t<k} (n - o - t) / k!
            poly = [Fraction(1)]
            for t in range(k):
                shift = -(self.onset + t)
                poly = [Fraction(0)] + poly
                for e in range(len(poly) - 1):
                    poly[e] += shift * poly[e + 1]
            fact = 1
            for t in range(2, k + 1):
                fact *= t
            for e, a in enumerate(poly):
                out[e] += c * a / fact
        return out

    def formula(self):
        terms = []
        for e, c in reversed(list(enumerate(self.power_coefficients()))):
            if not c:
                continue
            mono = "" if e == 0 else ("n" if e == 1 else f"n^{e}")
            coef = format_scalar(c)
            if mono and c == 1:
                coef = ""
            elif mono and c == -1:
                coef = "-"
            elif mono:
                coef += "*"
            terms.append(coef + mono)
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def to_json(self):
        return {"fit": True, "degree": self.degree, "onset": self.onset, "window_end": self.end,
                "margin": self.margin, "newton": [format_scalar(c) for c in self.newton],
                "coefficients": [format_scalar(c) for c in self.power_coefficients()],
                "formula": self.formula(), "provenance": self.provenance}


def _gbinom(x, k):
    num = Fraction(1)
    for t in range(k):
        num *= x - t
    for t in range(2, k + 1):
        num /= t
    return num


@dataclass(frozen=True)
class NoFitWithinWindow:
    start: int
    end: int
    min_margin: int
    provenance: str = ""
    fit: bool = field(default=False, init=False)

    def to_json(self):
        return {"fit": False, "window": [self.start, self.end], "min_margin": self.min_margin,
                "provenance": self.provenance}


def finite_differences(values, order):
    vals = list(values)
    for _ in range(order):
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return vals


def detect_polynomial(s: DimSeq, min_margin=2):
    """Smallest degree first, then earliest onset, such that the (deg+1)-th
    differences vanish from the onset to the end of the window and at least
    deg + 1 + min_margin points lie in that range."""
    if len(s.values) < 3:
        raise ValueError("need at least three values")
    L = len(s.values)
    deg = 0
    while deg + 1 + min_margin <= L:
        for off in range(0, L - deg - min_margin):
            tail = s.values[off:]
            if all(v == 0 for v in finite_differences(tail, deg + 1)):
                newton = tuple(Fraction(finite_differences(tail, k)[0]) for k in range(deg + 1))
                return PolyFit(deg, newton, s.start + off, len(tail) - deg - 1, s.end, s.provenance)
        deg += 1
    return NoFitWithinWindow(s.start, s.end, min_margin, s.provenance)


def degree_report(i_max, n_max, source="inversion", ring=None, min_margin=2):
    """Per i <= i_max: (fit, expected_degree, ok) on the sequence n = 1..n_max.

    ``source`` is ``inversion`` (generating-function oracle) or ``koszul``
    (Lie algebra homology over Q, feasible only for small n_max).
    """
    from .homology_engine import inversion_numbers, lie_homology
    if source == "inversion":
        table = inversion_numbers(i_max, n_max)
        seqs = {i: [table[i][n] for n in range(1, n_max + 1)] for i in range(i_max + 1)}
    elif source == "koszul":
        from .ring_core import builtin
        ring = ring or builtin("Z")
        rows = [lie_homology(ring, n, i_max) for n in range(1, n_max + 1)]
        seqs = {i: [r[i] for r in rows] for i in range(i_max + 1)}
    else:
        raise ValueError(f"unknown source {source!r}")
    report = {}
    for i, vals in seqs.items():
        fit = detect_polynomial(DimSeq(1, vals, f"{source}:i={i}"), min_margin)
        ok = fit.fit and fit.degree == i if source == "inversion" else None
        report[i] = {"fit": fit, "expected_degree": i if source == "inversion" else None, "ok": ok}
    return report


def read_dimension_csv(path):
    """Group rows of a ``family,ring,n,i,coeff,value`` CSV into DimSeqs keyed by
    (family, ring, coeff, i).  Sequences must be contiguous in n."""
    groups = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"family", "ring", "n", "i", "coeff", "value"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        for row in reader:
            key = (row["family"], row["ring"], row["coeff"], int(row["i"]))
            try:
                val = int(row["value"])
            except ValueError:
                raise ValueError(f"{path}: value {row['value']!r} is not a dimension") from None
            groups.setdefault(key, {})[int(row["n"])] = val
    out = {}
    for key, pts in groups.items():
        ns = sorted(pts)
        if ns != list(range(ns[0], ns[-1] + 1)):
            raise ValueError(f"{path}: sequence {key} is not contiguous in n")
        out[key] = DimSeq(ns[0], [pts[n] for n in ns], f"{path}:{key}")
    return out
