"""高指标族：g 为单项式时的三循环判据及其显式构造"""
import math
from typing import Dict, List, Tuple

from ncycle_pp.criteria import CriterionVerdict, FailureKind, first_zero
from ncycle_pp.errors import PreconditionError
from ncycle_pp.families.base_family import BaseFamily, FamilyResult
from ncycle_pp.field import FieldCtx, FieldElement, prime_power, subgroup
from ncycle_pp.permpoly import IndexForm, SparsePoly, format_poly, h_values


def h_poly(form: IndexForm, ctx: FieldCtx) -> SparsePoly:
    return SparsePoly.build(form.h_terms(), ctx)


def eval_h(f: IndexForm, z: FieldElement, ctx: FieldCtx) -> FieldElement:
    """h(z) = Σ h_k z^k，z 可以不在 μ_ℓ 内"""
    acc = 0
    for k, c in f.h_terms():
        acc = ctx.add(acc, ctx.mul(c, ctx.pow(z, k)))
    return acc


def single_check(f: IndexForm, a: FieldElement, v: int, ctx: FieldCtx) -> CriterionVerdict:
    """g(y) = a·y^v 时 f 为三循环当且仅当 y^{(r^3-1)/s}·h(y)^{r^2}·h(a y^v)^r·h(a^{v+1} y^{v^2}) = 1"""
    f.validate(ctx)
    r, s, ell = f.r, f.s, f.ell
    if math.gcd(r, s) != 1:
        return CriterionVerdict.fail(FailureKind.PRECONDITION, detail=f"gcd(r, s) = {math.gcd(r, s)}")
    if pow(r, 3, s) != 1 % s:
        return CriterionVerdict.fail(FailureKind.PRECONDITION, detail="r^3 != 1 mod s")
    if pow(v, 3, ell) != 1 % ell:
        return CriterionVerdict.fail(FailureKind.PRECONDITION, detail=f"v^3 != 1 mod ell={ell}")
    if a == 0 or ctx.pow(a, v * v + v + 1) != 1:
        return CriterionVerdict.fail(FailureKind.PRECONDITION, detail="a^(v^2+v+1) != 1")
    sub = subgroup(ell, ctx)
    hv = h_values(f, ctx)
    for i, (y, hy) in enumerate(zip(sub.elements, hv)):
        if hy == 0 or ctx.pow(hy, s) != ctx.mul(a, ctx.pow(y, v - r)):
            return CriterionVerdict.fail(FailureKind.PRECONDITION, witness=y,
                                         detail=f"h(y)^s != a*y^(v-r) at omega^{i}")
    lead = ((pow(r, 3, s * ctx.order) - 1) // s) % ctx.order
    a_next = ctx.pow(a, v + 1)
    for i, (y, hy) in enumerate(zip(sub.elements, hv)):
        val = ctx.mul(ctx.pow(y, lead), ctx.pow(hy, r * r))
        val = ctx.mul(val, ctx.pow(eval_h(f, ctx.mul(a, ctx.pow(y, v)), ctx), r))
        val = ctx.mul(val, eval_h(f, ctx.mul(a_next, ctx.pow(y, v * v)), ctx))
        if val != 1:
            return CriterionVerdict.fail(FailureKind.PHI_WITNESS, witness=y, detail=f"product at omega^{i} = {val}")
    return CriterionVerdict.ok()


def frobenius_norm_check(h: SparsePoly, ctx: FieldCtx) -> Tuple[CriterionVerdict, IndexForm]:
    """GF(q^3) 上 x^q·h(x^{q-1})：在 h(y)^{q-1} = 1 下为三循环当且仅当 h(y)h(y^q)h(y^{q^2}) = 1"""
    if ctx.m % 3:
        raise PreconditionError(f"{ctx} is not a cubic extension", condition="3 | m")
    q = ctx.p ** (ctx.m // 3)
    ell = q * q + q + 1
    hcoeffs = [0] * ell
    for e, c in h.terms:
        hcoeffs[e % ell] = ctx.add(hcoeffs[e % ell], c)
    form = IndexForm(r=q, s=q - 1, hcoeffs=tuple(hcoeffs))
    return single_check(form, 1, q, ctx), form


def _frobenius_poly(phi: SparsePoly, big_q: int, ell: int, ctx: FieldCtx) -> List[Tuple[int, FieldElement]]:
    """φ(x)^Q 的各项，指数约化到 mod ℓ"""
    return [((e * big_q) % ell, ctx.pow(c, big_q)) for e, c in phi.terms]


def _product_check(f: IndexForm, v: int, ctx: FieldCtx) -> CriterionVerdict:
    """μ_ℓ 上 h(x)·h(x^v)·h(x^{v^2}) = 1；v = 1 即 h(x)^3 = 1"""
    sub = subgroup(f.ell, ctx)
    hv = h_values(f, ctx)
    zero = first_zero(hv)
    if zero is not None:
        return CriterionVerdict.fail(FailureKind.H_VANISHES, witness=sub.elements[zero],
                                     detail=f"h vanishes at omega^{zero}")
    for i, hy in enumerate(hv):
        val = ctx.mul(ctx.mul(hy, hv[(i * v) % f.ell]), hv[(i * v * v) % f.ell])
        if val != 1:
            return CriterionVerdict.fail(FailureKind.PHI_WITNESS, witness=sub.elements[i],
                                         detail=f"h(x)h(x^v)h(x^v^2) = {val} at omega^{i}")
    return CriterionVerdict.ok()


def _quadratic_frame(ctx: FieldCtx) -> int:
    if ctx.m % 2:
        raise PreconditionError(f"{ctx} is not a quadratic extension", condition="2 | m")
    return ctx.p ** (ctx.m // 2)


def generic_phi_families(phi: SparsePoly, v: int, variant: str, ctx: FieldCtx) -> Tuple[CriterionVerdict, IndexForm]:
    """variant A: h = φ + φ^Q·x^{1-v}；variant B: h = φ + φ^Q + 1；f = x·h(x^{Q-1}) over GF(Q^2)"""
    big_q = _quadratic_frame(ctx)
    ell = big_q + 1
    variant = variant.upper()
    own = [(e % ell, c) for e, c in phi.terms]
    conj = _frobenius_poly(phi, big_q, ell, ctx)
    if variant == "A":
        if pow(v, 3, ell) != 1 % ell:
            raise PreconditionError(f"v^3 != 1 mod {ell}", condition="v^3≡1 mod Q+1")
        shift = (1 - v) % ell
        terms = own + [((e + shift) % ell, c) for e, c in conj]
    elif variant == "B":
        v = 1
        terms = own + conj + [(0, 1)]
    else:
        raise PreconditionError(f"unknown variant {variant!r}", condition="variant in {A, B}")
    hcoeffs = [0] * ell
    for e, c in terms:
        hcoeffs[e] = ctx.add(hcoeffs[e], c)
    form = IndexForm(r=1, s=big_q - 1, hcoeffs=tuple(hcoeffs))
    return _product_check(form, v, ctx), form


def _binomial_exponents(exps: List[int], ell: int, ctx: FieldCtx) -> IndexForm:
    hcoeffs = [0] * ell
    for e in exps:
        hcoeffs[e % ell] = ctx.add(hcoeffs[e % ell], 1)
    return IndexForm(r=1, s=ctx.order // ell, hcoeffs=tuple(hcoeffs))


def _emit(form: IndexForm, v: int, ctx: FieldCtx, label: str) -> CriterionVerdict:
    verdict = _product_check(form, v, ctx)
    if not verdict:
        raise PreconditionError(f"{label}: product condition fails ({verdict.describe()})",
                                condition="product", witness=verdict.witness)
    return verdict


def family_char3(q: int, ctx: FieldCtx) -> Tuple[IndexForm, CriterionVerdict]:
    """h = 1 + x^{1+q} + x^{1-q^2} + x^{-q^2-q}（指数 mod q^3+1），f = x·h(x^{q^3-1}) over GF(q^6)"""
    p, _ = prime_power(q)
    if p != 3:
        raise PreconditionError(f"q={q} is not a power of 3", condition="char 3")
    ell = q ** 3 + 1
    if (1 + 3 * q + 2 * q * q) % ell:
        raise PreconditionError(f"1 + 3q + 2q^2 != 0 mod q^3+1 for q={q}", condition="1+3q+2q^2≡0 mod q^3+1")
    if ctx.q != q ** 6:
        raise PreconditionError(f"{ctx} is not GF({q}^6)", condition="field")
    form = _binomial_exponents([0, 1 + q, 1 - q * q, -q * q - q], ell, ctx)
    # g(x) = x^v with v = q^2 on μ_{q^3+1}
    return form, _emit(form, q * q, ctx, "char3-quad")


def family_even_q(q: int, a: int, ctx: FieldCtx) -> Tuple[IndexForm, CriterionVerdict]:
    """h = x^a + x^{aq} + 1（指数 mod q+1），f = x·h(x^{q-1}) over GF(q^2)"""
    p, _ = prime_power(q)
    if p != 2:
        raise PreconditionError(f"q={q} is not even", condition="q even")
    if (5 * a) % (q + 1):
        raise PreconditionError(f"5a = {5 * a} != 0 mod {q + 1}", condition="5a≡0 mod q+1")
    if ctx.q != q * q:
        raise PreconditionError(f"{ctx} is not GF({q}^2)", condition="field")
    form = _binomial_exponents([a, a * q, 0], q + 1, ctx)
    return form, _emit(form, 1, ctx, "even-q-tri")


# 决定性前提；其余三条同余只是充分条件，失败时记入 notes
V_TRI_REQUIRED = ("v^3≡1", "a(q-1)≡v-1")


def v_trinomial_congruences(q: int, a: int, v: int) -> Dict[str, bool]:
    m = q + 1
    return {
        "v^3≡1": pow(v, 3, m) == 1 % m,
        "a(q-1)≡v-1": (a * (q - 1) - (v - 1)) % m == 0,
        "a(1+v+v^2)≡0": (a * (1 + v + v * v)) % m == 0,
        "a+v-v^2+av^2-av≡0": (a + v - v * v + a * v * v - a * v) % m == 0,
        "av+v^2+v-2≡0": (a * v + v * v + v - 2) % m == 0,
    }


def family_v_trinomial(q: int, a: int, v: int, ctx: FieldCtx) -> Tuple[IndexForm, CriterionVerdict]:
    """h = x^a + 1 + x^{1-v}（指数 mod q+1），f = x·h(x^{q-1}) over GF(q^2)"""
    p, _ = prime_power(q)
    if p != 2:
        raise PreconditionError(f"q={q} is not even", condition="q even")
    checks = v_trinomial_congruences(q, a, v)
    failing = [name for name in V_TRI_REQUIRED if not checks[name]]
    if failing:
        raise PreconditionError(f"congruences fail mod {q + 1}: {', '.join(failing)}",
                                condition="; ".join(failing))
    if ctx.q != q * q:
        raise PreconditionError(f"{ctx} is not GF({q}^2)", condition="field")
    form = _binomial_exponents([a, 0, 1 - v], q + 1, ctx)
    return form, _emit(form, v % (q + 1), ctx, "v-tri")


# x^313 版本与 x·h(x^26) 的展开不一致，两者都交给 oracle
CHAR3_PRINTED_POLY = "x^521 + x^313 + x^105 + x"


class Char3QuadFamily(BaseFamily):
    params = {"q": "power of 3 with 1+3q+2q^2 ≡ 0 mod q^3+1 (default 3)"}

    def __init__(self):
        super().__init__("char3-quad", "x·h(x^{q^3-1}) with a four-term h over GF(q^6)")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        q = self.int_param(params, "q", 3)
        ctx = self.field_for(q, 6)
        form, verdict = family_char3(q, ctx)
        self.logger.info(f"h = {format_poly(h_poly(form, ctx))}")
        return FamilyResult(family=self.name, form=form, ctx=ctx, verdict=verdict, params={"q": q},
                            notes=[f"printed variant: {CHAR3_PRINTED_POLY}"])


class EvenQTrinomialFamily(BaseFamily):
    params = {"q": "even prime power", "a": "integer with 5a ≡ 0 mod q+1"}

    def __init__(self):
        super().__init__("even-q-tri", "x·h(x^{q-1}) with h = x^a + x^{aq} + 1 over GF(q^2)")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        q, a = self.int_param(params, "q"), self.int_param(params, "a")
        ctx = self.field_for(q, 2)
        form, verdict = family_even_q(q, a, ctx)
        return FamilyResult(family=self.name, form=form, ctx=ctx, verdict=verdict, params={"q": q, "a": a})


class VTrinomialFamily(BaseFamily):
    params = {"q": "even prime power", "a": "integer", "v": "integer with v^3 ≡ 1 mod q+1"}

    def __init__(self):
        super().__init__("v-tri", "x·h(x^{q-1}) with h = x^a + 1 + x^{1-v} over GF(q^2)")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        q, a, v = (self.int_param(params, k) for k in ("q", "a", "v"))
        ctx = self.field_for(q, 2)
        form, verdict = family_v_trinomial(q, a, v, ctx)
        notes = [f"companion congruence {name} fails; product condition holds"
                 for name, ok in v_trinomial_congruences(q, a, v).items() if not ok]
        for note in notes:
            self.logger.warning(note)
        return FamilyResult(family=self.name, form=form, ctx=ctx, verdict=verdict,
                            params={"q": q, "a": a, "v": v}, notes=notes)

