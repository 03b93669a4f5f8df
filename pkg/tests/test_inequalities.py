from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from semirad import campaign as cp
from semirad import ensembles as en
from semirad import inequalities as iq
from semirad import radii as rd
from semirad import semihilbert as sh
from semirad.errors import BadParameter, DimensionMismatch, NoAAdjoint

from conftest import contexts

CID = iq.CheckId
I2 = sh.make_context(np.eye(2))
E1 = np.diag([1.0, 0.0]).astype(complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]])
J = np.array([[0, 1], [0, 0]], dtype=complex)


# -- catalog -----------------------------------------------------------------------------

def test_catalog_is_complete_and_ordered():
    checks = iq.list_checks()
    assert len(checks) == 21
    assert [c.id for c in checks] == list(CID)
    assert all(c.description and c.signature for c in checks)


def test_catalog_examples():
    assert iq.check_info("TH1_UPPER").signature == "(ctx, B, C)"
    assert iq.check_info(CID.PROP_RANKONE).parameter_domain == "alpha in C\\{0}"
    assert iq.check_info(CID.TH4_LOWER).parameter_domain == "alpha in [0, 1]"


# -- worked examples ---------------------------------------------------------------------

def test_th1_lower_diagonal_example():
    r = iq.evaluate(CID.TH1_LOWER, I2, E1, E1)
    assert r.lhs == pytest.approx(2, abs=1e-12)
    assert r.rhs == pytest.approx(2, abs=1e-12)
    assert abs(r.slack) <= 1e-12 and r.passed


@given(contexts(max_dim=4))
@settings(max_examples=20)
def test_eq5_holds_on_random_pairs(drawn):
    ctx, seed = drawn
    B, C = en.random_pair(ctx, en.OperandKind.GENERIC_A_COMPATIBLE, seed)
    r = iq.evaluate(CID.EQ5, ctx, B, C)
    assert r.passed
    assert r.slack <= r.certified_gap + 1e-7 * max(1, r.lhs, r.rhs)


def test_prop_rankone_equality_branch():
    T = sh.rank_one_a(I2, [1, 0])
    r = iq.evaluate(CID.PROP_RANKONE, I2, T, params={"alpha": 3})
    assert r.passed
    eq = r.part("equality[0]")
    assert eq.lhs == pytest.approx(2) and eq.rhs == pytest.approx(2)
    assert r.part("upper[0]").rhs == 2


def test_prop_rankone_without_equality_branch():
    T = sh.rank_one_a(I2, [1, 0])
    r = iq.evaluate(CID.PROP_RANKONE, I2, T, params={"alpha": 0.5})
    names = [p.name for p in r.parts]
    assert names == ["lower[0]", "upper[0]"]
    assert r.passed


def test_th4_lower_at_alpha_one_compares_w_with_we():
    rng = np.random.default_rng(3)
    B, C = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)) for _ in range(2))
    ctx = sh.make_context(np.eye(3))
    r = iq.evaluate(CID.TH4_LOWER, ctx, B, C, {"alpha": 1})
    assert r.part("plus[0]").lhs == pytest.approx(rd.numerical_radius(B).value ** 2, rel=1e-12)
    assert r.part("plus[0]").rhs == pytest.approx(rd.euclidean_radius(B, C).value ** 2, rel=1e-12)
    assert r.passed


@given(contexts(max_dim=4), st.sampled_from([0.0, 1.0]))
@settings(max_examples=20)
def test_th4_upper_endpoints(drawn, alpha):
    ctx, seed = drawn
    B, C = en.random_pair(ctx, en.OperandKind.GENERIC_A_COMPATIBLE, seed)
    r = iq.evaluate(CID.TH4_UPPER, ctx, B, C, {"alpha": alpha})
    expected = rd.a_numerical_radius(ctx, B).value ** 2 + rd.a_numerical_radius(ctx, C).value ** 2
    for name in ("TH4_UPPER_MINUS[0]", "TH4_UPPER_PLUS[0]"):
        assert r.part(name).rhs == pytest.approx(expected, rel=1e-7)
    assert r.passed


def test_th4_upper_plus_variant_fails_where_minus_holds():
    ctx = I2
    B, C = np.eye(2), -np.eye(2)
    r = iq.evaluate(CID.TH4_UPPER, ctx, B, C, {"alpha": 0.5})
    minus, plus = r.part("TH4_UPPER_MINUS[0]"), r.part("TH4_UPPER_PLUS[0]")
    assert minus.lhs == pytest.approx(2) and minus.rhs == pytest.approx(2)
    assert minus.passed
    assert plus.rhs == pytest.approx(0, abs=1e-12) and not plus.passed
    # the informational variant does not decide the verdict
    assert r.passed and r.binding == "TH4_UPPER_MINUS[0]"


def test_remark_equality_forces_balance():
    # Pauli pair: w_e^2 = 1 = w(B^2 + C^2)/2, and w(B+C) = w(B-C)
    r = iq.evaluate(CID.REMARK_CHAIN, I2, SX, SY)
    p = r.part("equality_forces_balance")
    assert p.lhs == pytest.approx(0, abs=1e-9)
    assert r.passed


def test_remark_equality_part_absent_when_lower_bound_is_strict():
    r = iq.evaluate(CID.REMARK_CHAIN, I2, E1, E1)
    with pytest.raises(KeyError):
        r.part("equality_forces_balance")
    assert r.part("pcor_lower_vs_half_re_pm_im").relation == "info"


def test_sandwich_on_jordan_block():
    r = iq.evaluate(CID.SANDWICH, I2, J)
    assert r.part("upper").slack == pytest.approx(0, abs=1e-8)
    assert r.passed


# -- Bohr ----------------------------------------------------------------------------------

def test_bohr_examples():
    r = iq.evaluate(CID.BOHR_SCALAR, None, params={"a": [1, 2, 3], "r": 2})
    assert r.lhs == 36 and r.rhs == 42 and r.passed
    assert r.flags == {"equality_case": False}
    r = iq.evaluate(CID.BOHR_SCALAR, None, params={"a": [2, 2, 2], "r": 3.5})
    assert r.flags == {"equality_case": True}
    assert r.part("equality_case").passed
    r = iq.evaluate(CID.BOHR_SCALAR, None, params={"a": [1, 5], "r": 1})
    assert r.slack == 0 and r.passed


@given(st.lists(st.floats(0, 100), min_size=1, max_size=8), st.floats(1, 8))
def test_bohr_never_fails(a, r):
    assert iq.evaluate(CID.BOHR_SCALAR, None, params={"a": a, "r": r}).passed


def test_bohr_parameter_errors():
    for params in ({}, {"a": [], "r": 2}, {"a": [-1], "r": 2}, {"a": [1], "r": 0.5}):
        with pytest.raises(BadParameter):
            iq.evaluate(CID.BOHR_SCALAR, None, params=params)


# -- errors -----------------------------------------------------------------------------------

def test_zero_alpha_rejected():
    T = sh.rank_one_a(I2, [1, 0])
    with pytest.raises(BadParameter):
        iq.evaluate(CID.PROP_RANKONE, I2, T, params={"alpha": 0})
    with pytest.raises(BadParameter):
        iq.evaluate(CID.TH3, I2, E1, E1, {"alphas": [1, 0]})


@pytest.mark.parametrize("alpha", [-0.1, 1.5, 0.5j])
def test_th4_alpha_outside_unit_interval_rejected(alpha):
    with pytest.raises(BadParameter):
        iq.evaluate(CID.TH4_LOWER, I2, E1, E1, {"alpha": alpha})


def test_operand_errors():
    ctx = sh.make_context(np.diag([1.0, 0.0]))
    with pytest.raises(NoAAdjoint):
        iq.evaluate(CID.TH1_UPPER, ctx, J, E1)
    with pytest.raises(BadParameter):
        iq.evaluate(CID.TH2, I2, E1)
    with pytest.raises(BadParameter):
        iq.evaluate(CID.SANDWICH, None, E1)
    with pytest.raises(BadParameter):
        iq.evaluate(CID.COR_SELFADJ_LOWER, I2, J, E1)
    with pytest.raises(BadParameter):
        iq.evaluate(CID.PROP_RANKONE, I2, 2 * E1, params={"alpha": 2})
    with pytest.raises(DimensionMismatch):
        iq.evaluate(CID.TH2, I2, np.eye(3), np.eye(3))


def test_parse_complex_forms():
    assert iq.parse_complex("1,2") == 1 + 2j
    assert iq.parse_complex("1+2i") == 1 + 2j
    assert iq.parse_complex([0, -1]) == -1j
    assert iq.parse_complex(3) == 3
    with pytest.raises(BadParameter):
        iq.parse_complex("1,2,3")


def test_report_serialization():
    r = iq.evaluate(CID.PROP_RANKONE, I2, sh.rank_one_a(I2, [1, 0]), params={"alpha": 1 + 1j})
    d = r.to_dict()
    assert d["check"] == "PROP_RANKONE" and d["pass"] is True
    assert d["params"]["alpha"] == [1.0, 1.0]
    assert {"lhs", "rhs", "slack", "certified_gap", "binding", "parts"} <= set(d)


# -- interval arithmetic -----------------------------------------------------------------------

finite = st.floats(-50, 50)


@st.composite
def intervals(draw, nonneg=False):
    lo = draw(st.floats(0, 50) if nonneg else finite)
    hi = lo + draw(st.floats(0, 10))
    t = draw(st.floats(0, 1))
    return iq.Est(lo + t * (hi - lo), lo, hi), lo + draw(st.floats(0, 1)) * (hi - lo)


@given(intervals(), intervals(), intervals(nonneg=True))
def test_interval_operations_contain_the_truth(x, y, z):
    (X, x0), (Y, y0), (Z, z0) = x, y, z
    slop = 1e-9
    cases = [(X + Y, x0 + y0), (X - Y, x0 - y0), (X * Y, x0 * y0), (abs(X), abs(x0)),
             (Z ** 2, z0 ** 2), (Z.sqrt(), math.sqrt(z0)), (iq.emax(X, Y), max(x0, y0)),
             (iq.emin(X, Y), min(x0, y0)), (2 * X, 2 * x0)]
    if Z.lo > 0:
        cases.append((X / Z, x0 / z0))
    for est, truth in cases:
        assert est.lo - slop * (1 + abs(truth)) <= truth <= est.hi + slop * (1 + abs(truth))
        assert est.lo - slop * (1 + abs(est.v)) <= est.v <= est.hi + slop * (1 + abs(est.v))


def test_gap_enters_only_through_the_computed_direction():
    # lhs is a lower estimate of a sup: its gap can only help the smaller side
    lhs = iq.Est(1.0, 1.0, 1.5)
    part = iq.Part("p", "<=", lhs, 0.8)
    rep = iq._judge(part, 0.0)
    assert rep.certified_gap == 0.0 and not rep.passed
    part = iq.Part("p", "<=", 0.9, iq.Est(0.8, 0.8, 0.95))
    rep = iq._judge(part, 0.0)
    assert rep.certified_gap == pytest.approx(0.15) and rep.passed


# -- soundness sweep ---------------------------------------------------------------------------

SWEEP = cp.CampaignConfig(dims=(2, 3, 4), trials_per_cell=1, buzano_samples=300)


@given(st.sampled_from(SWEEP.dims), st.sampled_from(cp.RANK_MODES), st.integers(0, 10_000))
@settings(max_examples=25)
def test_every_check_passes_on_generated_instances(dim, mode, trial):
    inst = cp.build_instance(SWEEP, dim, mode, trial)
    ev = iq.Evaluator(inst.ctx)
    for check in CID:
        B, C, params = cp.check_inputs(inst, check)
        r = iq.evaluate(check, inst.ctx, B, C, params, evaluator=ev)
        assert r.passed, (check, r.binding, r.slack, r.certified_gap)
        if check is CID.TH1_LOWER:
            assert r.part("refines_half_w_of_sum_of_squares").passed
        if check is CID.TH1_UPPER:
            assert r.part("refined_by_norms").passed
