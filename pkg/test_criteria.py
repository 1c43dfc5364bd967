import math
from itertools import product

import pytest

from ncycle_pp.constructor import vandermonde_solve
from ncycle_pp.criteria import (CriterionVerdict, FailureKind, check_ncycle, check_permutation, induced_g,
                                induced_g_indices, necessary_g_ncycle, permutation_verdict, phi, phi_values,
                                subgroup_reduction_check)
from ncycle_pp.errors import HVanishesError, PreconditionError
from ncycle_pp.field import make_field, subgroup
from ncycle_pp.permpoly import (IndexForm, PiecewiseForm, cycle_structure, is_n_cycle_oracle, piecewise_table,
                                to_table)


def _oracle(form, n, ctx):
    table, bijective = to_table(form, ctx)
    return bijective and is_n_cycle_oracle(table, n)


def _forms(ctx, s, values_from=None):
    ell = ctx.order // s
    values_from = values_from or range(1, ctx.q)
    for r in range(1, ctx.q):
        if math.gcd(r, s) != 1:
            continue
        for values in product(values_from, repeat=ell):
            yield IndexForm(r=r, s=s, hcoeffs=vandermonde_solve(values, ctx, ell))


def test_binomial_gf7_triple_cycle():
    ctx = make_field(7)
    form = IndexForm(r=1, s=3, hcoeffs=(3, 6))
    assert induced_g_indices(form, ctx) == [0, 1]
    assert induced_g(form, ctx) == (1, 6)
    verdict = check_ncycle(form, 3, ctx)
    assert verdict.passed and bool(verdict)
    assert verdict.describe() == "PASS"
    assert phi_values(form, 3, ctx) == (1, 1)
    assert phi(6, form, 3, ctx) == 1


def test_binomial_gf7_not_involution():
    ctx = make_field(7)
    verdict = check_ncycle(IndexForm(r=1, s=3, hcoeffs=(3, 6)), 2, ctx)
    assert not verdict
    assert verdict.failure_kind is FailureKind.PHI_WITNESS
    assert verdict.witness == 1
    assert verdict.describe().startswith("FAIL[phi-witness] witness=1")


def test_failure_order():
    gf7, gf13 = make_field(7), make_field(13)
    assert check_ncycle(IndexForm(r=3, s=3, hcoeffs=(1, 1)), 3, gf7).failure_kind is FailureKind.NOT_PERMUTATION
    assert check_ncycle(IndexForm(r=3, s=4, hcoeffs=(1, 0, 0)), 3, gf13).failure_kind is FailureKind.CONGRUENCE
    # h(x) = 6x + 1 在 1 处为零
    verdict = check_ncycle(IndexForm(r=1, s=3, hcoeffs=(1, 6)), 3, gf7)
    assert verdict.failure_kind is FailureKind.H_VANISHES
    assert verdict.witness == 1


def test_phi_requires_congruence():
    with pytest.raises(PreconditionError):
        phi_values(IndexForm(r=3, s=4, hcoeffs=(1, 0, 0)), 3, make_field(13))


def test_induced_g_raises_when_h_vanishes():
    with pytest.raises(HVanishesError) as info:
        induced_g_indices(IndexForm(r=1, s=3, hcoeffs=(1, 6)), make_field(7))
    assert info.value.witness == 1


def test_monomials_identity_is_every_n():
    ctx = make_field(13)
    form = IndexForm(r=1, s=12, hcoeffs=(1,))
    for n in range(1, 6):
        assert check_ncycle(form, n, ctx)


def test_criterion_without_tables(monkeypatch):
    from ncycle_pp.config import config
    tabled = make_field(13)
    forms = list(_forms(tabled, 4, values_from=[1, 5, 8, 12]))[:200]
    expected = [(check_ncycle(f, 2, tabled).passed, induced_g_indices(f, tabled)) for f in forms]
    monkeypatch.setattr(config, "table_limit", 1)
    plain = make_field(13)
    assert not plain.has_tables
    assert [(check_ncycle(f, 2, plain).passed, induced_g_indices(f, plain)) for f in forms] == expected


def test_permutation_verdict_matches_bijectivity():
    ctx = make_field(13)
    for form in _forms(ctx, 4):
        _, bijective = to_table(form, ctx)
        assert check_permutation(form, ctx) == bijective
    verdict = permutation_verdict(IndexForm(r=1, s=4, hcoeffs=vandermonde_solve([1, 1, 1], ctx, 3)), ctx)
    assert verdict == CriterionVerdict.ok()


def test_necessary_condition_on_hits():
    ctx = make_field(13)
    for form in _forms(ctx, 4, values_from=[1, 2, 3, 5, 12]):
        if check_ncycle(form, 2, ctx):
            assert necessary_g_ncycle(form, 2, ctx)


def test_subgroup_reduction_matches_oracle():
    ctx = make_field(13)
    mu4 = subgroup(4, ctx).elements
    for form in _forms(ctx, 3, values_from=mu4):
        for n in (2, 3, 4):
            assert subgroup_reduction_check(form, n, ctx).passed == _oracle(form, n, ctx)


def test_subgroup_reduction_preconditions():
    ctx = make_field(13)
    # s = 4 与 ell = 3 互素，但 2 不在 μ_3 中
    form = IndexForm(r=1, s=4, hcoeffs=vandermonde_solve([1, 2, 1], ctx, 3))
    assert subgroup_reduction_check(form, 2, ctx).failure_kind is FailureKind.SUBGROUP_ESCAPE
    form = IndexForm(r=1, s=6, hcoeffs=(1, 0))
    assert subgroup_reduction_check(form, 2, ctx).failure_kind is FailureKind.PRECONDITION


def _oracle_order(r, values, sub, ctx):
    """由 μ_ℓ 上的取值直接建表；不是置换时返回 None，否则返回最小阶"""
    table = piecewise_table(PiecewiseForm(r=r, branches=tuple(zip(sub.elements, values))), ctx)
    if not table.bijective:
        return None
    return math.lcm(*cycle_structure(table).lengths())


@pytest.mark.slow
@pytest.mark.parametrize("q,s", [(7, 2), (7, 3), (13, 3), (13, 4)])
def test_criterion_equals_oracle_exhaustive(q, s):
    ctx = make_field(q)
    ell = ctx.order // s
    sub = subgroup(ell, ctx)
    count = 0
    for r in range(1, q):
        if math.gcd(r, s) != 1:
            continue
        for values in product(range(1, q), repeat=ell):
            form = IndexForm(r=r, s=s, hcoeffs=vandermonde_solve(values, ctx, ell))
            order = _oracle_order(r, values, sub, ctx)
            for n in (2, 3, 4):
                assert check_ncycle(form, n, ctx).passed == (order is not None and n % order == 0)
                count += 1
    assert count == 3 * sum(1 for r in range(1, q) if math.gcd(r, s) == 1) * (q - 1) ** ell
