from itertools import product

import numpy as np
import pytest

from ncycle_pp.constructor import (GSpec, check_solution_congruences, construction_agrees, cyclotomic_construct,
                                   cyclotomic_identity, enumerate_mvecs, enumerate_sigmas, frobenius_counterexample,
                                   frobenius_lift_check, frobenius_lift_form, lift_subfield, small_field_table,
                                   vandermonde_solve)
from ncycle_pp.criteria import FailureKind, check_ncycle, induced_g_indices
from ncycle_pp.errors import FieldError, ParseError, PreconditionError
from ncycle_pp.families.high_index import family_even_q, family_v_trinomial
from ncycle_pp.field import make_field
from ncycle_pp.permpoly import (Conjugate, IndexForm, PermTable, Power, SparsePoly, cycle_structure, derive, h_values,
                                is_n_cycle_oracle, to_table)


def _oracle(form, n, ctx):
    table, bijective = to_table(form, ctx)
    return bijective and is_n_cycle_oracle(table, n)


def test_gspec_parse_and_validation():
    spec = GSpec.parse("1,2,0", "0,1,0")
    assert spec.sigma == (1, 2, 0) and spec.mvec == (0, 1, 0)
    assert spec.a(0, 1) == 1 and spec.a(0, 2) == 2 and spec.a(0, 3) == 0
    assert spec.period_divides(3) and not spec.period_divides(2)
    assert GSpec.parse("0,1").mvec == (0, 0)
    assert GSpec(sigma=(0, 1), mvec=(5, 7)).normalised(4).mvec == (1, 3)
    with pytest.raises(ParseError):
        GSpec.parse("0,0,1")
    with pytest.raises(ParseError):
        GSpec.parse("0,1", "1")
    with pytest.raises(ParseError):
        GSpec.parse("a,b")


def test_solution_congruences():
    assert check_solution_congruences(GSpec.identity((0, 0, 0)), 1, 5, 7)
    assert check_solution_congruences(GSpec.identity((1, 0, 1)), 1, 2, 2)
    assert check_solution_congruences(GSpec.identity((1, 1, 1)), 1, 3, 3)
    assert not check_solution_congruences(GSpec.identity((1, 0, 0)), 1, 2, 4)
    with pytest.raises(PreconditionError):
        check_solution_congruences(GSpec.parse("1,2,0"), 1, 2, 4)


def test_vandermonde_reproduces_values():
    ctx = make_field(13)
    rng = np.random.default_rng(3)
    for ell in (1, 2, 3, 4, 6, 12):
        values = [int(v) for v in rng.integers(0, 13, size=ell)]
        form = IndexForm(r=1, s=12 // ell, hcoeffs=vandermonde_solve(values, ctx, ell))
        assert list(h_values(form, ctx)) == values
    with pytest.raises(FieldError):
        vandermonde_solve([1, 2], ctx, 3)


def test_identity_construction_is_x():
    ctx = make_field(7)
    result = cyclotomic_identity((0, 0, 0), 1, 2, ctx)
    assert result.valid
    assert result.form.hcoeffs == (1, 0, 0)
    assert result.metadata["beta"] == 3 and result.metadata["modulus"] == [0, 1]


def test_negating_one_coset_is_involution():
    ctx = make_field(7)
    result = cyclotomic_construct(GSpec.identity((1, 0, 0)), 1, 2, ctx)
    assert h_values(result.form, ctx) == (6, 1, 1)
    assert result.valid
    table, _ = to_table(result.form, ctx)
    assert table.images.tolist() == [0, 6, 2, 3, 4, 5, 1]
    assert is_n_cycle_oracle(table, 2)


def test_identity_construction_triple_cycle_gf7():
    ctx = make_field(7)
    result = cyclotomic_identity((0, 1), 1, 3, ctx)
    assert result.valid
    assert check_ncycle(result.form, 3, ctx)
    table, _ = to_table(result.form, ctx)
    # 平方剩余陪集 {1, 2, 4} 保持不动
    assert table.images[[1, 2, 4]].tolist() == [1, 2, 4]
    assert cycle_structure(table).counts == {1: 4, 3: 1}


def test_identity_involutions_gf13():
    ctx = make_field(13)
    for mvec in product(range(4), repeat=3):
        result = cyclotomic_identity(mvec, 1, 2, ctx)
        admissible = all(m in (0, 2) for m in mvec)
        assert result.valid == admissible
        assert _oracle(result.form, 2, ctx) == admissible


def test_rotation_construction_gf13():
    ctx = make_field(13)
    valid_count = 0
    for mvec in product(range(4), repeat=3):
        spec = GSpec(sigma=(1, 2, 0), mvec=mvec)
        result = cyclotomic_construct(spec, 1, 3, ctx)
        assert induced_g_indices(result.form, ctx) == [1, 2, 0]
        assert result.valid == _oracle(result.form, 3, ctx)
        assert construction_agrees(result, 3, ctx)
        valid_count += result.valid
    assert valid_count > 0


def test_construct_rejects_bad_ell():
    with pytest.raises(FieldError):
        cyclotomic_construct(GSpec.identity((0, 0, 0, 0)), 1, 2, make_field(7))


def test_enumerators():
    assert list(enumerate_sigmas(3, 2)) == [(0, 1, 2), (0, 2, 1), (1, 0, 2), (2, 1, 0)]
    assert list(enumerate_sigmas(3, 3)) == [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    assert len(list(enumerate_mvecs(3, 4))) == 64


@pytest.mark.slow
@pytest.mark.parametrize("q,s", [(7, 2), (13, 4)])
@pytest.mark.parametrize("n", [2, 3])
def test_construction_iff_exhaustive(q, s, n):
    ctx = make_field(q)
    ell = ctx.order // s
    for sigma in enumerate_sigmas(ell, n):
        for mvec in enumerate_mvecs(ell, s):
            for r in range(1, q):
                result = cyclotomic_construct(GSpec(sigma=sigma, mvec=mvec), r, n, ctx)
                assert _oracle(result.form, n, ctx) == result.valid
                assert check_solution_congruences(GSpec(sigma=sigma, mvec=mvec), r, n, s) == result.valid


# ---- 子域提升 ----

def _lift_agrees(h, r, m, n, base, ext):
    result = lift_subfield(h, r=r, m=m, n=n, base_ctx=base, ext_ctx=ext)
    big_s = (ext.q - 1) // (base.q - 1)
    if pow(r, n, big_s) != 1 % big_s:
        assert not result.valid
        return
    small = small_field_table(h, r, m, base)
    small_ok = small.bijective and is_n_cycle_oracle(small, n)
    assert result.small_field_passed == small_ok
    assert _oracle(result.form, n, ext) == small_ok == result.valid


def test_frobenius_involution_lift():
    base, ext = make_field(2, 2), make_field(2, 4)
    h = SparsePoly.build([(0, 1)], base)
    result = lift_subfield(h, r=4, m=2, n=2, base_ctx=base, ext_ctx=ext)
    assert result.valid
    table, _ = to_table(result.form, ext)
    frob, _ = to_table(SparsePoly.build([(4, 1)], ext), ext)
    assert table == frob


def test_lift_degenerate_base_gf2():
    base, ext = make_field(2), make_field(2, 3)
    h = SparsePoly.build([(0, 1)], base)
    for n in (2, 3):
        for r in range(1, 8):
            _lift_agrees(h, r, 3, n, base, ext)


@pytest.mark.parametrize("n", [2, 3])
def test_lift_full_enumeration_gf4(n):
    base, ext = make_field(2, 2), make_field(2, 4)
    for coeffs in product(range(4), repeat=3):
        h = SparsePoly.build(list(enumerate(coeffs)), base)
        for r in range(1, 16):
            _lift_agrees(h, r, 2, n, base, ext)


@pytest.mark.parametrize("n", [2, 3])
def test_lift_sampled_gf8(n):
    base, ext = make_field(2, 3), make_field(2, 6)
    rng = np.random.default_rng(8 + n)
    for _ in range(60):
        h = SparsePoly.build([(k, int(c)) for k, c in enumerate(rng.integers(0, 8, size=7))], base)
        for r in (1, 8, 9, 55):
            _lift_agrees(h, r, 2, n, base, ext)


def test_lift_rejects_wrong_extension():
    with pytest.raises(FieldError):
        lift_subfield(SparsePoly.build([(0, 1)], make_field(2, 2)), 1, 3, 2, make_field(2, 2), make_field(2, 4))


def test_lift_flags_gcd_violation():
    base, ext = make_field(3), make_field(3, 2)
    result = lift_subfield(SparsePoly.build([(0, 1)], base), r=1, m=2, n=2, base_ctx=base, ext_ctx=ext)
    assert not result.valid
    assert any("gcd" in reason for reason in result.reasons)


# ---- Frobenius 型提升 ----

def test_frobenius_lift_inverse_map():
    ctx = make_field(2, 2)
    # q = 2, n = 2, ell = 3, h(y) = y^2 = y^-1
    h = SparsePoly.build([(2, 1)], ctx)
    assert frobenius_lift_check(h, 2, ctx)
    form = frobenius_lift_form(h, 2, ctx)
    assert (form.r, form.s, form.ell) == (2, 1, 3)
    assert _oracle(form, 2, ctx)


def test_frobenius_lift_precondition_witness():
    ctx = make_field(2, 4)
    verdict = frobenius_lift_check(SparsePoly.build([(0, ctx.beta)], ctx), 2, ctx)
    assert verdict.failure_kind is FailureKind.PRECONDITION
    assert verdict.witness == 1


def test_frobenius_counterexample_escapes():
    ctx = make_field(2, 4)
    # c 属于 GF(4)*，前提成立，但 c^2 != 1
    c = ctx.pow(ctx.beta, 5)
    assert ctx.pow(c, 3) == 1 and ctx.pow(c, 2) != 1
    h = frobenius_counterexample(c, 2, ctx)
    verdict = frobenius_lift_check(h, 2, ctx)
    assert verdict.failure_kind is FailureKind.SUBGROUP_ESCAPE
    assert not _oracle(frobenius_lift_form(h, 2, ctx), 2, ctx)


def test_frobenius_lift_needs_subfield():
    with pytest.raises(PreconditionError):
        frobenius_lift_form(SparsePoly.build([(0, 1)], make_field(2, 3)), 2, make_field(2, 3))


# ---- 三循环在幂与共轭下封闭 ----

def _three_cycle_instance(rng, ctx):
    """μ_65 上随机取若干个不相交的三循环作为 sigma，每个轨道上 m 之和 ≡ 0 (mod 63)"""
    ell, s = 65, 63
    order = [int(i) for i in rng.permutation(ell)]
    k = int(rng.integers(1, ell // 3 + 1))
    sigma = list(range(ell))
    mvec = [int(m) for m in rng.choice([0, 21, 42], size=ell)]
    for t in range(k):
        a, b, c = order[3 * t:3 * t + 3]
        sigma[a], sigma[b], sigma[c] = b, c, a
        mvec[a], mvec[b] = int(rng.integers(s)), int(rng.integers(s))
        mvec[c] = (-mvec[a] - mvec[b]) % s
    result = cyclotomic_construct(GSpec(tuple(sigma), tuple(mvec)), 1, 3, ctx)
    assert induced_g_indices(result.form, ctx) == sigma
    return result


@pytest.mark.slow
def test_triple_cycles_closed_under_transforms():
    ctx = make_field(2, 12)
    rng = np.random.default_rng(12)
    forms = [family_even_q(64, a, ctx)[0] for a in (13, 26)]
    forms += [family_v_trinomial(64, a, v, ctx)[0] for a, v in [(35, 61), (25, 16)]]
    for i in range(96):
        if i % 3 == 0:
            result = cyclotomic_identity([int(m) for m in rng.choice([0, 21, 42], size=65)], 1, 3, ctx)
        else:
            result = _three_cycle_instance(rng, ctx)
        assert result.valid, result.reasons
        forms.append(result.form)
    assert len(forms) == 100

    for form in forms:
        table, bijective = to_table(form, ctx)
        assert bijective and is_n_cycle_oracle(table, 3)
        assert is_n_cycle_oracle(derive(table, Power(2)), 3)
        g = PermTable.from_images(rng.permutation(ctx.q))
        conj = derive(table, Conjugate(g))
        assert is_n_cycle_oracle(conj, 3)
        assert cycle_structure(conj) == cycle_structure(table)
