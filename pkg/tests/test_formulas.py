from fractions import Fraction

import pytest

from desarrange import formulas, oracle
from desarrange.formulas import (
    BivarPoly, PoleError, distribution_polynomials, evaluate_formula,
    fix_egf, good_t_points, peak_egf, right_valley_egf, rval_polynomials,
    specialization_checks,
)
from desarrange.patterns import catalan, fine, jacobsthal
from desarrange.series import Poly, exp_series

from reference_tables import DERANGEMENT_NUMBERS, STAT_TABLES


def test_evaluate_formula_examples():
    assert evaluate_formula("des", t=2, order=4).egf_coeff(4) == 3 * 2 + 5 * 4 + 8
    got = evaluate_formula("derangement_egf", order=5)
    assert got.egf_coeffs() == DERANGEMENT_NUMBERS[:6]
    with pytest.raises(ValueError):
        evaluate_formula("no_such_formula", order=3)
    with pytest.raises(ValueError):
        evaluate_formula("des", order=3)  # missing t


def test_poles():
    # t = 1 is a removable singularity of the written formulas: the series
    # build signals it as a pole, and rows recover the limit instead
    with pytest.raises(PoleError):
        evaluate_formula("eulerian", t=1, order=3)
    with pytest.raises(PoleError):
        evaluate_formula("des", t=Fraction(1, 2), order=3)
    with pytest.raises(PoleError):
        evaluate_formula("pk", t=0, order=3)
    with pytest.raises(PoleError):
        evaluate_formula("joint_pix_des", t=2, s=2, order=3)
    eul = distribution_polynomials("eulerian", 3).rows
    assert [eul[n](1) for n in range(4)] == [1, 1, 2, 6]


def test_good_t_points_skip_poles():
    pts = good_t_points("joint_pix_des", 4, order=3, s=Fraction(3))
    ts = [t for t, _ in pts]
    assert Fraction(3) not in ts and len(ts) == 4


def test_statistic_tables_match_reference():
    for tag, table in STAT_TABLES.items():
        rows = distribution_polynomials(tag, 9).rows
        for n, coeffs in table.items():
            assert rows[n] == Poly(coeffs), (tag, n)


def test_eulerian_rows():
    import math
    rows = distribution_polynomials("eulerian", 5).rows
    assert rows[4] == Poly([1, 11, 11, 1])
    for n in range(6):
        assert sum(rows[n].coeffs, Fraction(0)) == math.factorial(n)


def test_rval_rows():
    rows = rval_polynomials(6).rows
    assert rows[0] == Poly([1])
    joint = oracle.distribution(5, ["rval"], "desarrangements")
    assert {k: Fraction(v) for k, v in joint.items()} == \
        {k: c for k, c in enumerate(rows[5].coeffs) if c}


def test_ogf_formulas_match_sequences():
    cat = evaluate_formula("catalan_ogf", order=10)
    assert [int(c) for c in cat.coeffs] == [catalan(n) for n in range(11)]
    f = evaluate_formula("fine_ogf", order=11)
    assert [int(c) for c in f.coeffs] == [fine(n) for n in range(12)]
    fs = evaluate_formula("fine_shifted_ogf", order=10)
    assert [int(c) for c in fs.coeffs] == [fine(n + 1) for n in range(11)]
    js = evaluate_formula("jacobsthal_shifted_ogf", order=11)
    assert [int(c) for c in js.coeffs] == [1] + [jacobsthal(n - 1) for n in range(1, 12)]


def test_joint_tables_small_rows():
    pkdes = distribution_polynomials("joint_pk_des", 4).rows
    assert pkdes[2] == BivarPoly({(0, 1): 1})       # the single desarrangement 21
    assert pkdes[4] == BivarPoly({(0, 1): 3, (1, 2): 5, (0, 3): 1})
    pixdes = distribution_polynomials("joint_pix_des", 3).rows
    # S_2: 12 has pix 2, 21 has pix 0 and one descent
    assert pixdes[2] == BivarPoly({(2, 0): 1, (0, 1): 1})


def test_joint_pk_des_against_oracle():
    rows = distribution_polynomials("joint_pk_des", 6).rows
    for n in range(7):
        brute = oracle.distribution(n, ["pk", "des"], "desarrangements")
        assert rows[n].entries == {k: Fraction(v) for k, v in brute.items()}


def test_bivar_substitutions():
    bp = BivarPoly({(0, 1): 3, (1, 2): 5, (1, 3): 1})
    assert bp.substitute_s(1) == Poly([0, 3, 5, 1])
    assert bp.substitute_s(0) == Poly([0, 3])
    assert bp.substitute_t(1) == Poly([3, 6])
    assert bp.total() == 9
    with pytest.raises(ValueError):
        BivarPoly({(0, 0): Fraction(1, 2)}).int_entries()


def test_specialization_checks_pass():
    results = specialization_checks(6)
    assert all(r.ok for r in results), [r for r in results if not r.ok]
    names = [r.name for r in results]
    assert "joint_pix_des at t=1 equals fix rows" in names


def test_pd_identity_series():
    for t in (2, 3):
        val = evaluate_formula("val", t=t, order=8)
        assert exp_series(1, 8) * val == peak_egf(t, 8)


def test_rval_egf_against_oracle():
    for t in (2, 3):
        ser = right_valley_egf(t, 6)
        for n in range(7):
            brute = oracle.distribution(n, ["rval"], "all")
            want = sum(Fraction(t) ** k * v for k, v in brute.items())
            assert ser.egf_coeff(n) == want


def test_fix_egf_against_oracle():
    for s in (2, 5):
        ser = fix_egf(s, 6)
        for n in range(7):
            brute = oracle.distribution(n, ["fix"], "all")
            want = sum(Fraction(s) ** k * v for k, v in brute.items())
            assert ser.egf_coeff(n) == want


def test_distribution_table_exports():
    table = distribution_polynomials("des", 4)
    csv_text = table.to_csv()
    assert csv_text.splitlines()[0] == "n,coefficients"
    assert "4,0,3,5,1" in csv_text
    js = table.to_json()
    assert js["tag"] == "des" and js["rows"]["4"] == ["0", "3", "5", "1"]
    joint = distribution_polynomials("joint_pk_des", 3)
    assert joint.to_csv().splitlines()[0] == "n,s_exp,t_exp,count"
    assert joint.to_json()["rows"]["2"] == [[0, 1, 1]]


def test_arity_zero_rejects_distribution():
    with pytest.raises(ValueError):
        distribution_polynomials("catalan_ogf", 3)


def test_row_sums():
    import math
    from reference_tables import DERANGEMENT_NUMBERS as D
    for tag, klass in formulas.ROW_SUPPORT.items():
        rows = distribution_polynomials(tag, 7).rows
        for n in range(8):
            want = D[n] if klass == "desarrangements" else math.factorial(n)
            row = rows[n]
            total = row.total() if isinstance(row, BivarPoly) \
                else sum(row.coeffs, Fraction(0))
            assert total == want, (tag, n)
