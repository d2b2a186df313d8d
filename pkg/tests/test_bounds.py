import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from nonresidues import bounds as bd

from table1_data import P0_EXPONENTS, TABLE1


# Expected values frozen from an independent 60-digit mpmath evaluation of
# the closed forms (see compute_g_highprec for the >= 100-bit path).
def test_totient_factor_f_values():
    assert bd.totient_factor_f(3.8) == pytest.approx(0.0058248342, abs=5e-4)
    assert bd.totient_factor_f(2.0) == pytest.approx(-0.77162089, abs=5e-4)
    assert 0.999 < bd.totient_factor_f(1e12) < 1.0


def test_totient_factor_f_domain():
    with pytest.raises(ValueError):
        bd.totient_factor_f(1.0)
    with pytest.raises(ValueError):
        bd.totient_factor_f(0.5)


def test_totient_factor_f_monotone_beyond_threshold():
    xs = [3.8 + 0.1 * k for k in range(200)] + [1e3, 1e6, 1e9]
    vals = [bd.totient_factor_f(x) for x in xs]
    assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_compute_xstar_values():
    assert bd.compute_xstar(1, 1e7) == pytest.approx(24.103215, abs=0.01)
    assert bd.compute_xstar(3, 1e7) == pytest.approx(2.6205565, abs=0.01)
    assert bd.compute_xstar(3, 1e7) < 3.8  # the dash at that grid point


def test_compute_xstar_diverges_like_p_quarter():
    # ratio X*(1, p) / p^(1/4) tends to a positive constant
    r1 = bd.compute_xstar(1, 1e12) / 1e3
    r2 = bd.compute_xstar(1, 1e20) / 1e5
    assert r2 == pytest.approx(math.pi / 3 / math.sqrt(2 * math.e), rel=0.05)
    assert abs(r2 - r1) < 0.05


def test_compute_g_table_anchors():
    assert bd.compute_g(1, 1e7).g == pytest.approx(1.530, abs=1e-3)
    assert bd.compute_g(2, 1e8).g == pytest.approx(2.070, abs=1e-3)
    assert bd.compute_g(5, 1e15).g == pytest.approx(6.469, abs=1e-3)
    assert bd.compute_g(8, 1e30).g == pytest.approx(2.745, abs=1e-3)


def test_compute_g_invalid_point_reports_conditions():
    res = bd.compute_g(3, 1e7)
    assert not res.valid
    assert res.failed_conditions == (bd.COND_XSTAR,)
    assert res.xstar == pytest.approx(2.6205565, abs=1e-3)
    # f(X*) < 0 there, so no g can be reported
    assert res.g is None and res.bound is None


def test_compute_g_small_p_fails_log_condition():
    res = bd.compute_g(1, 100.0)
    assert not res.valid
    assert bd.COND_LOGP_EXP in res.failed_conditions


def test_compute_g_trailing_factor_exceeds_one():
    # numerator > 1 and denominator < 1 force g above (pi/3)sqrt(2e) n/(n+1)
    for n in (1, 2, 3, 5, 8):
        for e in (10, 15, 20, 35):
            res = bd.compute_g(n, 10.0**e)
            if not res.valid:
                continue
            floor = math.pi / 3 * math.sqrt(2 * math.e) * n / (n + 1)
            assert res.g > floor


def test_compute_bound_values():
    assert bd.compute_bound(1, 1e7, 1.530) == pytest.approx(1386.8, abs=0.5)
    assert bd.compute_bound(1, math.e**4, 1.0) == pytest.approx(10.873127, abs=1e-3)
    with pytest.raises(ValueError):
        bd.compute_bound(1, 1e7, 0.0)
    with pytest.raises(ValueError):
        bd.compute_bound(1, 1e7, -1.0)


def test_reference_validity():
    assert bd.reference_validity(1, 1e7) == (True, ())
    ok, failed = bd.reference_validity(4, 1e10)
    assert not ok and bd.COND_P0_EXP8N in failed
    ok, failed = bd.reference_validity(1, 1e6)
    assert not ok and bd.COND_P0_MIN in failed


def test_make_table_matches_published_values():
    n0s = list(range(1, 9))
    p0s = [10.0**e for e in P0_EXPONENTS]
    table = bd.make_table(n0s, p0s)
    for row in table:
        for cell in row:
            expected = TABLE1[cell.n0][P0_EXPONENTS.index(round(math.log10(cell.p0)))]
            if expected is None:
                assert cell.g is None, f"expected dash at {cell}"
                assert cell.failed_conditions
            else:
                assert cell.g == pytest.approx(expected, abs=1e-3), cell


def test_table_renderings():
    table = bd.make_table([1], [1e7])
    text = bd.render_table_text(table)
    assert "1.530" in text  # rounded up, as published
    csv = bd.render_table_csv(table)
    assert csv.splitlines()[0] == "n0,1e7"
    assert csv.splitlines()[1] == "1,1.530"
    obj = bd.table_to_json_obj(table)
    assert obj[0]["n0"] == 1 and obj[0]["g"] == pytest.approx(1.5294789, abs=1e-6)
    dash = bd.make_table([3], [1e7])
    assert bd.render_table_csv(dash).splitlines()[1] == "3,-"


def test_monotonicity_scan_small_grid():
    rep = bd.monotonicity_scan([1, 2, 3], [1e7, 1e8, 1e9])
    assert rep.ok
    assert rep.valid_points == 8  # (3, 1e7) is invalid
    single = bd.monotonicity_scan([1], [1e7])
    assert single.ok and single.pairs_checked == 0


def test_burgess_params_example():
    bp = bd.burgess_params(1, 1e7)
    assert bp.a == pytest.approx(math.e / 2, rel=1e-12)
    assert bp.b == 0.25
    assert bp.h == 22 and bp.r == 4
    assert bp.identity_error < 1e-9


def test_burgess_params_exact_log():
    bp = bd.burgess_params(2, math.e**12)
    assert bp.b == pytest.approx(1 / 3, rel=1e-12)
    assert bp.r == 4


def test_burgess_params_identity_grid():
    for n in range(1, 13):
        for e in (7, 9, 12, 20, 35):
            bp = bd.burgess_params(n, 10.0**e)
            assert bp.identity_error < 1e-9
            assert 0 < bp.b < 0.5
            assert 1 <= bp.r <= 9 * bp.h


def test_burgess_params_too_small_p():
    with pytest.raises(ValueError):
        bd.burgess_params(1, 2.0)  # floor(B log p) = 0


def test_highprec_cross_check_on_table_grid():
    # double-precision path agrees with the independent >=100-bit path
    for n0 in range(1, 9):
        for e in P0_EXPONENTS:
            res = bd.compute_g(n0, 10.0**e)
            if res.g is None:
                continue
            hp = bd.compute_g_highprec(n0, mpmath.mpf(10) ** e)
            assert hp is not None
            assert abs(res.g - float(hp)) / float(hp) < 1e-12


@given(
    st.floats(min_value=3.8, max_value=1e9),
    st.floats(min_value=0.0, max_value=1e6),
)
def test_totient_factor_f_monotone_property(x, delta):
    assert bd.totient_factor_f(x) <= bd.totient_factor_f(x + delta) + 1e-15


@given(st.integers(min_value=1, max_value=12), st.floats(min_value=10.0, max_value=80.0))
def test_f_at_xstar_in_unit_interval_when_valid(n, logp):
    p = math.exp(logp)
    res = bd.compute_g(n, p)
    if res.valid:
        assert res.f_at_xstar is not None
        assert 0 < res.f_at_xstar < 1


def test_input_validation():
    with pytest.raises(ValueError):
        bd.compute_g(0, 1e7)
    with pytest.raises(ValueError):
        bd.compute_g(1, 1.0)
    with pytest.raises(ValueError):
        bd.compute_xstar(2, 0.5)
