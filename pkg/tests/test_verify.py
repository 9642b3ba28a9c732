"""Ground-truth computations and per-theorem checks on small instances,
plus the closed-form evaluators."""

from types import SimpleNamespace

import pytest

import reesfiber.blowup as bl
import reesfiber.groebner as gb
import reesfiber.pfaffian as pf
import reesfiber.polyring as pr
import reesfiber.verify as vf


@pytest.fixture(scope="module")
def inst35():
    return bl.build_instance(3, 5, seed=42)


@pytest.fixture(scope="module")
def inst45():
    return bl.build_instance(4, 5, seed=42)


@pytest.fixture(scope="module")
def inst55():
    return bl.build_instance(5, 5, seed=42)


@pytest.fixture(scope="module")
def report35(inst35):
    return vf.run_checks(inst35)


def test_rees_elimination_two_variable_fixture():
    # two generators x1, x2: the only relation is x2*T1 - x1*T2
    S = pr.ring(
        32003, [("x", ("x1", "x2"), (1, 0)), ("T", ("T1", "T2"), (0, 1))]
    )
    fake = SimpleNamespace(
        S=S,
        n=2,
        g=[S.var("x1"), S.var("x2")],
        presentation=SimpleNamespace(generator_degree=1),
    )
    J = vf.rees_by_elimination(fake)
    assert [str(q) for q in J.gens] == ["x2*T1 + 32002*x1*T2"]


def test_linear_type_case(inst55):
    ctx = vf.VerificationContext(inst55)
    ctx.budget = ctx.new_budget()
    assert gb.ideal_equal(ctx.J, inst55.L)
    assert ctx.IX.is_zero_ideal()


def test_rees_strictly_bigger_than_symmetric(inst35):
    ctx = vf.VerificationContext(inst35)
    ctx.budget = ctx.new_budget()
    witness = None
    for q in inst35.minors_B:
        if not gb.normal_form(q.map_to(inst35.S), inst35.L).is_zero():
            witness = q
            break
    assert witness is not None  # a minor of B outside the symmetric ideal
    assert gb.normal_form(witness.map_to(inst35.S), ctx.J).is_zero()


def test_fiber_generated_in_expected_degree(inst35, inst45):
    ctx = vf.VerificationContext(inst35)
    ctx.budget = ctx.new_budget()
    degs = {q.homogeneous_degree() for q in ctx.IX.gens}
    assert degs == {3}  # degree d for the odd case
    ctx45 = vf.VerificationContext(inst45)
    ctx45.budget = ctx45.new_budget()
    assert [q.homogeneous_degree() for q in ctx45.IX.gens] == [3]  # d - 1


def test_gd_check_passes_generic(inst35):
    ok, cert = bl.satisfies_gd(inst35.presentation)
    assert ok
    assert [c["i"] for c in cert] == [1, 2]


def test_gd_check_fails_degenerate():
    # all entries multiples of x1: every minor ideal has height <= 1
    R = bl.base_ring(3)
    x1 = R.var("x1")
    zero = R.zero()
    rows = [[zero] * 5 for _ in range(5)]
    coef = 1
    for i in range(5):
        for j in range(i + 1, 5):
            e = x1.scale(coef)
            coef += 1
            rows[i][j] = e
            rows[j][i] = -e
    pres = bl.AlternatingPresentation(3, 5, 32003, pf.PolyMatrix(R, rows))
    ok, cert = bl.satisfies_gd(pres)
    assert not ok
    violated = [c for c in cert if c["height"] < c["required"]]
    assert violated


def test_run_checks_all_pass(report35):
    assert report35.all_pass()
    assert [r.status for r in report35.records] == ["pass"] * len(report35.records)
    names = [r.name for r in report35.records]
    assert names == list(vf.CHECK_ORDER)


def test_multiplicity_values(report35, inst45):
    rec = {r.name: r for r in report35.records}["multiplicity"]
    assert rec.certificate["multiplicity"] == 4
    assert rec.certificate["dim"] == 3
    rep45 = vf.run_checks(inst45, selection=["multiplicity"])
    rec45 = rep45.records[0]
    assert rec45.status == "pass"
    assert rec45.certificate["multiplicity"] == 3


def test_expected_multiplicity_formula():
    assert vf.expected_multiplicity(3, 5) == 4
    assert vf.expected_multiplicity(4, 5) == 3
    assert vf.expected_multiplicity(4, 7) == 13
    assert vf.expected_multiplicity(3, 7) == 9
    assert vf.expected_multiplicity(5, 5) == 1
    for d in (3, 4, 5):
        for n in (5, 7, 9):
            if d <= n:
                assert vf.expected_multiplicity(d, n) == vf.multiplicity_by_monomial_count(d, n)


def test_annihilator_bound_values():
    assert vf.annihilator_exponent_bound(3, 5) == 1
    assert vf.annihilator_exponent_bound(4, 5) == 1
    assert vf.annihilator_exponent_bound(4, 7) == 2
    assert vf.annihilator_exponent_bound(5, 7) == 1


def test_annihilator_minimal_exponents(report35, inst45, inst55):
    rec = {r.name: r for r in report35.records}["annihilator"]
    assert rec.certificate["minimal_exponent"] == 1
    rep = vf.run_checks(inst45, selection=["annihilator"])
    assert rep.records[0].certificate["minimal_exponent"] == 1
    # linear type: the Rees ideal is already inside L
    rep55 = vf.run_checks(inst55, selection=["annihilator"])
    assert rep55.records[0].certificate["minimal_exponent"] == 0


def test_closed_form_series_35():
    # (1 + 3z)/(1-z)^3 - z, coefficients 1, 5, 15, 31, ...
    from math import comb

    got = vf.fiber_series_closed_form(3, 5, 6)
    want = [comb(k + 2, 2) + 3 * comb(k + 1, 2) for k in range(7)]
    want[1] -= 1
    assert got == want
    assert got[:3] == [1, 5, 15]


def test_closed_form_series_45():
    # (1 + z + z^2)/(1-z)^4 = (1 - z^3)/(1-z)^5: a cubic hypersurface
    from math import comb

    got = vf.fiber_series_closed_form(4, 5, 8)
    want = [comb(k + 4, 4) - comb(k + 1, 4) for k in range(9)]
    assert got == want


def test_closed_form_series_negative_exponents_cancel():
    # 2d < n: transient negative-degree terms must cancel
    got = vf.fiber_series_closed_form(3, 7, 6)
    assert got[0] == 1
    assert all(c >= 0 for c in got)


def test_closed_form_rejects_bad_shape():
    with pytest.raises(ValueError):
        vf.fiber_series_closed_form(5, 5, 4)


def test_hilbert_series_check(report35):
    rec = {r.name: r for r in report35.records}["hilbert_series"]
    assert rec.status == "pass"
    assert rec.certificate["series_groebner"][:3] == [1, 5, 15]
    assert rec.certificate["height_of_minors"] == 2


def test_hilbert_series_skipped_at_linear_type(inst55):
    rep = vf.run_checks(inst55, selection=["hilbert"])
    assert rep.records[0].status == "skipped"


def test_residual_multiplicity(report35, inst45):
    rec = {r.name: r for r in report35.records}["residual_multiplicity"]
    assert rec.status == "pass"
    assert rec.certificate["multiplicity"] == 4
    assert rec.certificate["dim"] == 1
    rep45 = vf.run_checks(inst45, selection=["residual"])
    assert rep45.records[0].certificate["multiplicity"] == 3


def test_degenerate_combination_detected(inst35):
    # repeating one combination drops the colon height below d - 1
    R = inst35.R
    I = gb.ideal(R, inst35.g)
    f = inst35.g[0]
    Jp = gb.ideal_quotient(gb.ideal(R, [f, f]), I)
    assert gb.dim_height(Jp)[1] != inst35.d - 1


def test_timeout_status(inst45):
    rep = vf.run_checks(inst45, selection=["main"], budget_pairs=3)
    statuses = {r.status for r in rep.records}
    assert statuses == {"timeout"}
    assert rep.all_pass()  # timeouts are not failures


def test_gd_failure_skips_downstream():
    R = bl.base_ring(3)
    x1 = R.var("x1")
    zero = R.zero()
    rows = [[zero] * 5 for _ in range(5)]
    coef = 1
    for i in range(5):
        for j in range(i + 1, 5):
            e = x1.scale(coef)
            coef += 1
            rows[i][j] = e
            rows[j][i] = -e
    pres = bl.AlternatingPresentation(3, 5, 32003, pf.PolyMatrix(R, rows))
    # height-3 fails too, so derive_instance cannot run; exercise the
    # report plumbing directly on the gd record
    ok, cert = bl.satisfies_gd(pres)
    assert not ok


def test_report_json_shape(report35):
    doc = report35.as_dict()
    assert doc["format"] == 1
    assert doc["all_pass"] is True
    assert {r["name"] for r in doc["checks"]} == set(vf.CHECK_ORDER)
    text = report35.to_json()
    assert text.endswith("\n")


def test_select_checks():
    assert vf.select_checks(None) == vf.CHECK_ORDER
    assert vf.select_checks(["multiplicity"]) == ("multiplicity",)
    assert set(vf.select_checks(["main"])) == set(vf.CHECK_GROUPS["main"])
    with pytest.raises(ValueError):
        vf.select_checks(["nope"])
