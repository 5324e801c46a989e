from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oistab.stability import (DimSeq, NoFitWithinWindow, PolyFit, degree_report,
                              detect_polynomial, finite_differences, read_dimension_csv)


def test_inversion_degree_two_formula():
    seq = DimSeq(1, [0, 0, 2, 5, 9, 14, 20, 27])
    fit = detect_polynomial(seq)
    assert isinstance(fit, PolyFit)
    assert (fit.degree, fit.onset, fit.margin) == (2, 2, 4)
    assert fit.formula() == "1/2*n^2 - 1/2*n - 1"
    assert fit.power_coefficients() == [-1, Fraction(-1, 2), Fraction(1, 2)]


def test_constant_and_linear():
    assert detect_polynomial(DimSeq(0, [3, 3, 3])).formula() == "3"
    fit = detect_polynomial(DimSeq(1, [0, 1, 2, 3, 4]))
    assert (fit.degree, fit.onset, fit.formula()) == (1, 1, "n - 1")


def test_no_fit():
    res = detect_polynomial(DimSeq(0, [1, 2, 4, 8, 16]))
    assert isinstance(res, NoFitWithinWindow) and not res.fit
    assert res.to_json()["window"] == [0, 4]


def test_margin_is_respected():
    res = detect_polynomial(DimSeq(0, [5, 1, 2, 3, 4]), min_margin=2)
    assert (res.degree, res.onset, res.margin) == (1, 1, 2)
    assert detect_polynomial(DimSeq(0, [5, 1, 2, 3, 4]), min_margin=3).fit is False


def test_short_sequence_rejected():
    with pytest.raises(ValueError):
        detect_polynomial(DimSeq(0, [1, 2]))
    with pytest.raises(ValueError):
        DimSeq(0, [1, -1, 2])


@given(st.integers(0, 3), st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(0, 50), max_size=4), st.integers(0, 4))
@settings(max_examples=300, deadline=None)
def test_fit_reproduces_eventually_polynomial(deg, newton, junk, extra):
    newton = newton[:deg + 1]
    newton[0] += 200  # keep values nonnegative
    length = deg + 3 + extra
    vals = []
    for t in range(length):
        v, b = 0, 1
        for k, c in enumerate(newton):
            v += c * b
            b = b * (t - k) // (k + 1)
        vals.append(v)
    if any(v < 0 for v in vals):
        return
    seq = DimSeq(1, list(junk) + vals)
    fit = detect_polynomial(seq)
    assert fit.fit and fit.degree <= deg
    assert fit.onset <= 1 + len(junk) or fit.degree < deg
    for n in range(fit.onset, seq.end + 1):
        assert fit(n) == seq.at(n)
    assert fit.margin == seq.end - fit.onset + 1 - fit.degree - 1 >= 2


def test_finite_differences():
    assert finite_differences([1, 4, 9, 16], 2) == [2, 2]


def test_degree_report_inversion_and_koszul():
    rep = degree_report(4, 14)
    assert all(r["ok"] for r in rep.values())
    assert [rep[i]["fit"].onset for i in range(5)] == [1, 1, 2, 3, 4]
    kos = degree_report(1, 5, source="koszul")
    assert kos[1]["fit"].formula() == "n - 1"
    with pytest.raises(ValueError):
        degree_report(1, 5, source="tea leaves")


def test_read_csv(tmp_path):
    path = tmp_path / "d.csv"
    rows = ["family,ring,n,i,coeff,value"]
    rows += [f"lie,Z,{n},1,QQ,{n - 1}" for n in range(1, 7)]
    path.write_text("\n".join(rows) + "\n")
    seqs = read_dimension_csv(path)
    (key, seq), = seqs.items()
    assert key == ("lie", "Z", "QQ", 1) and seq.values == (0, 1, 2, 3, 4, 5)

    path.write_text("family,ring,n,i,coeff,value\nU,F2,2,1,ZZ,Z/2\n")
    with pytest.raises(ValueError):
        read_dimension_csv(path)
    path.write_text("family,ring,n,i,coeff,value\nU,F2,2,1,QQ,1\nU,F2,4,1,QQ,1\n")
    with pytest.raises(ValueError):
        read_dimension_csv(path)
    path.write_text("family,n,value\n")
    with pytest.raises(ValueError):
        read_dimension_csv(path)
