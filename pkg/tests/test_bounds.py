from fractions import Fraction
from math import isqrt

import pytest

from frobsurf.bounds import (CSV_HEADER, compare, figure_csv,
                             harris_genus_bound, homma_bound, main_bound,
                             serre_weil_bound, stohr_voloch_bound,
                             stohr_voloch_plotted_variant,
                             weierstrass_divisor_degree)
from frobsurf.errors import BadDegree


def test_main_bound_values():
    assert main_bound(6, 2, 5) == (Fraction(18), 18)
    assert main_bound(4, 2, 3) == (Fraction(8), 8)
    exact, floor = main_bound(11, 5, 9)
    assert exact == Fraction(143, 2) and floor == 71


def test_main_bound_errors():
    with pytest.raises(BadDegree):
        main_bound(6, 1, 5)
    with pytest.raises(BadDegree):
        main_bound(0, 2, 5)


def test_homma_values():
    assert homma_bound(6, 5) == 26
    assert homma_bound(11, 9) == 91
    assert homma_bound(1, 7) == 1


def test_stohr_voloch_values():
    assert stohr_voloch_bound(11, 9, 17, 1, 2) == 76
    assert stohr_voloch_bound(6, 5, 4, 1, 2) == 22
    # genus 1 collapses the genus term
    for delta, q in [(4, 3), (5, 7)]:
        assert stohr_voloch_bound(delta, q, 1, 1, 2) == (delta * (q + 3)) // 3


def test_plotted_variant_differs_on_genus_term():
    text = Fraction(2 * 3 * (17 - 1) + 11 * (9 + 3), 3)
    plotted = stohr_voloch_plotted_variant(11, 9, 17)
    assert plotted - text == Fraction(2 * (17 - 1))


def test_serre_weil_values():
    assert serre_weil_bound(0, 7) == 8
    assert serre_weil_bound(4, 5) == 22
    assert serre_weil_bound(17, 9) == 112


def test_harris_values():
    assert harris_genus_bound(11, 5) == (15, 17)
    assert harris_genus_bound(6, 2) == (4, 4)
    # branch boundary at delta = d(d-1) + 1
    branched, unbranched = harris_genus_bound(3, 2)
    assert branched == unbranched == 0
    # plane-curve fallback: branched value is the plane genus
    branched, _ = harris_genus_bound(4, 5)
    assert branched == (4 - 1) * (4 - 2) // 2


def test_weierstrass_divisor_degree():
    assert weierstrass_divisor_degree((0, 1, 2, 3), 0, 3) == 0
    assert weierstrass_divisor_degree((0, 1, 2, 3), 1, 4) == 16
    assert weierstrass_divisor_degree((0, 1, 2, 4), 1, 5) == 20


def test_compare_reference_point():
    r = compare(11, 5, 9)
    assert r.main_floor == 71 and r.stohr_voloch == 76 and r.serre_weil == 112
    assert r.genus_bound == 17 and r.genus_bound_branched == 15
    assert any("rounded-up reading gives 72" in n for n in r.notes)


def test_compare_tie():
    r = compare(2, 2, 5)
    assert r.main_floor == 6 and r.homma == 6


def test_compare_homma_wins_for_large_surface_degree():
    r = compare(6, 9, 9)
    assert r.main_floor == 51 and r.homma == 46
    assert r.homma < r.main_floor


def test_monotonicity_in_delta_and_q():
    for q in (3, 5, 9):
        for d in (2, 4):
            prev = None
            for delta in range(1, q + 1):
                r = compare(delta, d, q)
                vals = (r.main_floor, r.homma, r.serre_weil)
                if prev is not None:
                    assert all(a >= b for a, b in zip(vals, prev))
                prev = vals
    for delta, d in [(4, 2), (6, 3)]:
        prev = None
        for q in (3, 5, 7, 9, 13):
            exact, floor = main_bound(delta, d, q)
            if prev is not None:
                assert floor >= prev
            prev = floor


def test_floor_consistency():
    for delta in range(1, 14):
        for d in (2, 3, 5):
            for q in (2, 3, 5, 9, 13):
                exact, floor = main_bound(delta, d, q)
                assert floor == exact.numerator // exact.denominator
                assert 0 <= exact - floor < 1


def _independent_csv(q, d):
    """Straight-line recomputation with Fractions only (oracle for figure_csv)."""
    rows = [CSV_HEADER]
    for delta in range(1, q + 1):
        eps = (-delta) % d
        pi = (Fraction(delta, 2) * (Fraction(delta, d) + d - 4) + 1
              - Fraction(eps, 2) * (d - eps - 1 + Fraction(eps, d)))
        g = int(pi)
        main = Fraction(delta * (d + q - 1), 2)
        main_floor = main.numerator // main.denominator
        homma = q * (delta - 1) + 1
        sv_val = Fraction(2 * 3 * (g - 1) + delta * (q + 3), 3)
        sv = sv_val.numerator // sv_val.denominator
        sw = q + 1 + g * isqrt(4 * q)
        vals = {"main": main_floor, "homma": homma, "sv": sv, "serre_weil": sw}
        best = min(vals.values())
        winner = "+".join(k for k in ("main", "homma", "sv", "serre_weil")
                          if vals[k] == best)
        rows.append(f"{delta},{main.numerator}/{main.denominator},{main_floor},"
                    f"{homma},{sv},{sw},{winner}")
    return "\n".join(rows) + "\n"


@pytest.mark.parametrize("q,d", [(9, 5), (13, 4)])
def test_figure_csv_matches_independent_recomputation(q, d):
    assert figure_csv(q, d) == _independent_csv(q, d)
