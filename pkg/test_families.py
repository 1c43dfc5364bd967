from itertools import product

import pytest

from ncycle_pp.criteria import FailureKind, check_ncycle
from ncycle_pp.errors import ParseError, PreconditionError
from ncycle_pp.families.high_index import (family_char3, family_even_q, family_v_trinomial, frobenius_norm_check,
                                           generic_phi_families, h_poly, single_check, v_trinomial_congruences)
from ncycle_pp.families.low_index import (BinomialParams, TrinomialParams, index2_binomial, index3_trinomial,
                                          trinomial_displayed_coefficients)
from ncycle_pp.field import make_field, subgroup
from ncycle_pp.permpoly import (IndexForm, SparsePoly, cycle_structure, format_poly, h_values, index_to_sparse,
                                is_n_cycle_oracle, to_table)
from ncycle_pp.planner import FamilyPlanner


def _oracle(form, n, ctx):
    table, bijective = to_table(form, ctx)
    return bijective and is_n_cycle_oracle(table, n)


def _f_text(form, ctx):
    return format_poly(index_to_sparse(form, ctx))


# ---- g 为单项式的判据 ----

def test_single_check_trivial():
    ctx = make_field(7)
    assert single_check(IndexForm(r=1, s=3, hcoeffs=(1, 0)), 1, 1, ctx)


def test_single_check_binomial_gf7():
    ctx = make_field(7)
    # h(x) = 6x + 3，h(1) = 2, h(-1) = 4，立方都是 1
    assert single_check(IndexForm(r=1, s=3, hcoeffs=(3, 6)), 1, 1, ctx)
    verdict = single_check(IndexForm(r=1, s=3, hcoeffs=(0, 3)), 1, 1, ctx)
    assert verdict.failure_kind is FailureKind.PRECONDITION
    assert verdict.witness == 1


def test_frobenius_norm_check_gf8():
    ctx = make_field(2, 3)
    verdict, form = frobenius_norm_check(SparsePoly.build([(0, 1)], ctx), ctx)
    assert verdict
    assert (form.r, form.s, form.ell) == (2, 1, 7)
    assert _oracle(form, 3, ctx)
    with pytest.raises(PreconditionError):
        frobenius_norm_check(SparsePoly.build([(0, 1)], make_field(2, 4)), make_field(2, 4))


def test_generic_phi_variants():
    gf16 = make_field(2, 4)
    verdict, form = generic_phi_families(SparsePoly.build([], gf16), 1, "B", gf16)
    assert verdict
    assert form.hcoeffs == (1, 0, 0, 0, 0)

    gf729 = make_field(3, 6)
    verdict, form = generic_phi_families(SparsePoly.build([(0, 1), (4, 1)], gf729), 9, "A", gf729)
    assert verdict
    assert form.hcoeffs == family_char3(3, gf729)[0].hcoeffs

    # 5a 不被 q+1 = 9 整除
    gf64 = make_field(2, 6)
    verdict, _ = generic_phi_families(SparsePoly.build([(1, 1)], gf64), 1, "B", gf64)
    assert not verdict
    assert verdict.witness is not None

    with pytest.raises(PreconditionError):
        generic_phi_families(SparsePoly.build([(1, 1)], gf16), 2, "A", gf16)
    with pytest.raises(PreconditionError):
        generic_phi_families(SparsePoly.build([(1, 1)], gf16), 1, "C", gf16)


# ---- 高指标族 ----

def test_char3_family():
    ctx = make_field(3, 6)
    form, verdict = family_char3(3, ctx)
    assert verdict
    assert (form.r, form.s, form.ell) == (1, 26, 28)
    assert format_poly(h_poly(form, ctx)) == "x^20 + x^16 + x^4 + 1"
    assert _f_text(form, ctx) == "x^521 + x^417 + x^105 + x"
    assert check_ncycle(form, 3, ctx)
    assert _oracle(form, 3, ctx)


def test_char3_family_rejects_q9():
    with pytest.raises(PreconditionError) as info:
        family_char3(9, make_field(3, 6))
    assert "1+3q+2q^2" in info.value.condition
    with pytest.raises(PreconditionError):
        family_char3(4, make_field(2, 12))


@pytest.mark.parametrize("a,expected", [(26, "x^2458 + x^1639 + x"), (13, "x^3277 + x^820 + x")])
def test_even_q_examples(a, expected):
    ctx = make_field(2, 12)
    form, verdict = family_even_q(64, a, ctx)
    assert verdict
    assert _f_text(form, ctx) == expected
    table, bijective = to_table(form, ctx)
    assert bijective and is_n_cycle_oracle(table, 3)
    assert set(cycle_structure(table).counts) <= {1, 3}


def test_even_q_small_and_rejections():
    ctx = make_field(2, 4)
    form, _ = family_even_q(4, 1, ctx)
    assert format_poly(h_poly(form, ctx)) == "x^4 + x + 1"
    assert _oracle(form, 3, ctx)
    with pytest.raises(PreconditionError) as info:
        family_even_q(64, 1, make_field(2, 12))
    assert info.value.condition == "5a≡0 mod q+1"
    with pytest.raises(PreconditionError):
        family_even_q(9, 2, make_field(3, 4))


@pytest.mark.parametrize("a,v,h_text,f_text", [
    (35, 61, "x^35 + x^5 + 1", "x^2206 + x^316 + x"),
    (25, 16, "x^50 + x^25 + 1", "x^3151 + x^1576 + x"),
])
def test_v_trinomial_examples(a, v, h_text, f_text):
    ctx = make_field(2, 12)
    form, verdict = family_v_trinomial(64, a, v, ctx)
    assert verdict
    assert format_poly(h_poly(form, ctx)) == h_text
    assert _f_text(form, ctx) == f_text
    assert _oracle(form, 3, ctx)


def test_v_trinomial_companion_congruences():
    assert all(v_trinomial_congruences(64, 35, 61).values())
    checks = v_trinomial_congruences(64, 25, 16)
    # 670 ≡ 20 mod 65，但乘积条件仍成立
    assert not checks["av+v^2+v-2≡0"]
    assert checks["v^3≡1"] and checks["a(q-1)≡v-1"]


def test_v_trinomial_rejects_bad_v():
    with pytest.raises(PreconditionError) as info:
        family_v_trinomial(64, 35, 60, make_field(2, 12))
    assert "v^3≡1" in info.value.condition


# ---- 低指标族 ----

def test_index2_binomial_gf7_example():
    ctx = make_field(7)
    verdict, form = index2_binomial(BinomialParams(a=2, b=4, r=1, n=3), ctx)
    assert verdict
    assert _f_text(form, ctx) == "6*x^4 + 3*x"
    table, _ = to_table(form, ctx)
    assert cycle_structure(table).counts == {1: 1, 3: 2}


def test_index2_needs_odd_q():
    with pytest.raises(PreconditionError):
        index2_binomial(BinomialParams(a=1, b=1, r=1, n=2), make_field(2, 4))


def test_index2_early_failures():
    # 失败结论为假值，仍须原样返回
    ctx = make_field(7)
    verdict, _ = index2_binomial(BinomialParams(a=0, b=1, r=1, n=3), ctx)
    assert not verdict and verdict.failure_kind == FailureKind.H_VANISHES
    assert verdict.witness == 1
    verdict, _ = index2_binomial(BinomialParams(a=1, b=1, r=3, n=3), ctx)
    assert not verdict and verdict.failure_kind == FailureKind.NOT_PERMUTATION
    verdict, _ = index2_binomial(BinomialParams(a=1, b=1, r=2, n=3), ctx)
    assert not verdict and verdict.failure_kind == FailureKind.CONGRUENCE


def test_index3_early_failures():
    ctx = make_field(13)
    verdict, _ = index3_trinomial(TrinomialParams(a=1, b=1, c=1, r=4, n=3), ctx)
    assert not verdict and verdict.failure_kind == FailureKind.NOT_PERMUTATION
    assert not _oracle(IndexForm(r=4, s=4, hcoeffs=(1, 0, 0)), 3, ctx)
    verdict, _ = index3_trinomial(TrinomialParams(a=1, b=0, c=1, r=1, n=3), ctx)
    assert not verdict and verdict.failure_kind == FailureKind.H_VANISHES


def _index2_matches_oracle(q, n):
    ctx = make_field(q)
    for a, b in product(range(q), repeat=2):
        for r in range(1, q):
            verdict, form = index2_binomial(BinomialParams(a=a, b=b, r=r, n=n), ctx)
            assert verdict.passed == _oracle(form, n, ctx), (a, b, r)


@pytest.mark.parametrize("q", [7, 11])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_index2_matches_oracle(q, n):
    _index2_matches_oracle(q, n)


@pytest.mark.slow
@pytest.mark.parametrize("q", [13, 19])
@pytest.mark.parametrize("n", [2, 3, 4])
def test_index2_matches_oracle_larger(q, n):
    _index2_matches_oracle(q, n)


def test_trinomial_displayed_coefficients_nodes():
    ctx = make_field(7)
    w = subgroup(3, ctx).omega
    for a, b, c in [(1, 0, 0), (1, 2, 3), (6, 5, 4)]:
        coeffs = trinomial_displayed_coefficients(a, b, c, w, ctx)
        # h(1) = a, h(w) = c, h(w^2) = b
        assert h_values(IndexForm(r=1, s=2, hcoeffs=coeffs), ctx) == (a, c, b)


def _index3_matches_oracle(q):
    ctx = make_field(q)
    for a, b, c in product(range(1, q), repeat=3):
        for r in range(1, q):
            verdict, form = index3_trinomial(TrinomialParams(a=a, b=b, c=c, r=r, n=3), ctx)
            assert verdict.passed == _oracle(form, 3, ctx), (a, b, c, r)


def test_index3_matches_oracle_gf7():
    _index3_matches_oracle(7)


@pytest.mark.slow
def test_index3_matches_oracle_gf13():
    _index3_matches_oracle(13)


def test_index3_other_n_is_sufficient():
    ctx = make_field(13)
    for a, b, c in product([1, 3, 9, 12], repeat=3):
        for n in (2, 4):
            verdict, form = index3_trinomial(TrinomialParams(a=a, b=b, c=c, r=1, n=n), ctx)
            if verdict:
                assert _oracle(form, n, ctx)


def test_index3_unit_product():
    # h(1)·h(ω)·h(ω^2) = 1 且 g 为旋转时，判定与 oracle 一致
    ctx = make_field(7)
    hits = 0
    for a, b in product(range(1, 7), repeat=2):
        c = ctx.inv(ctx.mul(a, b))
        verdict, form = index3_trinomial(TrinomialParams(a=a, b=b, c=c, r=1, n=3), ctx)
        assert verdict.passed == _oracle(form, 3, ctx)
        hits += verdict.passed
    assert hits > 0


# ---- 提升族与调度器 ----

def test_lift_even_q_gf256():
    result = FamilyPlanner().execute("lift-even-q", {"q": "4", "a": "1"})
    assert result.ctx.q == 256 and result.base_ctx.q == 16
    assert result.verdict
    assert _oracle(result.form, 3, result.ctx)


@pytest.mark.slow
def test_lift_char3_gf3_18():
    result = FamilyPlanner().execute("lift-char3", {})
    assert result.ctx.q == 3 ** 18
    assert not result.ctx.has_tables
    assert result.form.ell == 728
    assert result.verdict


def test_planner_dispatch():
    planner = FamilyPlanner()
    with pytest.raises(ParseError):
        planner.select("no-such-family")
    with pytest.raises(ParseError):
        planner.execute("even-q-tri", {"q": "4", "a": "1", "z": "2"})
    with pytest.raises(ParseError):
        planner.execute("even-q-tri", {"q": "4", "a": "one"})
    text = planner.describe()
    for name in ("char3-quad", "even-q-tri", "v-tri", "idx2-binomial", "idx3-trinomial", "lift-char3", "lift-even-q"):
        assert name in text


def test_v_tri_family_notes_companions():
    result = FamilyPlanner().execute("v-tri", {"q": "64", "a": "25", "v": "16"})
    assert result.verdict
    assert any("av+v^2+v-2" in note for note in result.notes)
