"""低指标族：ℓ = 2 的二项式与 ℓ = 3 的三项式"""
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from ncycle_pp.constructor import vandermonde_solve
from ncycle_pp.criteria import CriterionVerdict, FailureKind, first_zero, induced_g_indices
from ncycle_pp.errors import FieldError, ParseError, PreconditionError
from ncycle_pp.families.base_family import BaseFamily, FamilyResult
from ncycle_pp.field import FieldCtx, FieldElement, make_field, parse_element, prime_power, subgroup
from ncycle_pp.permpoly import IndexForm, h_values


@dataclass(frozen=True)
class BinomialParams:
    """h(1) = a, h(-1) = b"""
    a: FieldElement
    b: FieldElement
    r: int
    n: int


@dataclass(frozen=True)
class TrinomialParams:
    """h(1) = a, h(ω) = b, h(ω^2) = c"""
    a: FieldElement
    b: FieldElement
    c: FieldElement
    r: int
    n: int


def _exp_sum(r: int, terms: List[int], order: int) -> int:
    return sum(pow(r, k, order) for k in terms) % order


def _power_free_checks(f: IndexForm, n: int, ctx: FieldCtx) -> Optional[CriterionVerdict]:
    """gcd、同余与 h 非零；返回失败结论或 None"""
    if math.gcd(f.r, f.s) != 1:
        return CriterionVerdict.fail(FailureKind.NOT_PERMUTATION, detail=f"gcd(r, s) = {math.gcd(f.r, f.s)}")
    if pow(f.r, n, f.s) != 1 % f.s:
        return CriterionVerdict.fail(FailureKind.CONGRUENCE, detail=f"r^n mod s = {pow(f.r, n, f.s)}")
    zero = first_zero(h_values(f, ctx))
    if zero is not None:
        return CriterionVerdict.fail(FailureKind.H_VANISHES, witness=subgroup(f.ell, ctx).elements[zero],
                                     detail=f"h vanishes at omega^{zero}")
    return None


def _lead(r: int, n: int, s: int, order: int) -> int:
    """(r^n - 1)/s mod (q-1)"""
    return ((pow(r, n, s * order) - 1) // s) % order


# ---- ℓ = 2 ----

def binomial_form(p: BinomialParams, ctx: FieldCtx) -> IndexForm:
    """f = ((a-b)/2)·x^{(q-1)/2 + r} + ((a+b)/2)·x^r"""
    if ctx.p == 2:
        raise PreconditionError(f"{ctx} has even order", condition="q odd")
    half = ctx.inv(ctx.constant(2))
    return IndexForm(r=p.r, s=ctx.order // 2,
                     hcoeffs=(ctx.mul(ctx.add(p.a, p.b), half), ctx.mul(ctx.sub(p.a, p.b), half)))


def index2_binomial(p: BinomialParams, ctx: FieldCtx) -> Tuple[CriterionVerdict, IndexForm]:
    """按诱导映射在 μ_2 上是恒等还是对换选取分支"""
    form = binomial_form(p, ctx)
    failure = _power_free_checks(form, p.n, ctx)
    if failure is not None:
        return failure, form
    order, r, n = ctx.order, p.r, p.n
    sign = ctx.pow(ctx.neg(1), _lead(r, n, form.s, 2))
    g = induced_g_indices(form, ctx)
    if g == [0, 1]:
        e = _exp_sum(r, list(range(n)), order)
        lhs, rhs = ctx.pow(p.a, e), ctx.mul(sign, ctx.pow(p.b, e))
        branch = "identity"
    elif g == [1, 0]:
        if n % 2:
            return CriterionVerdict.fail(FailureKind.G_NOT_N_CYCLE, detail="g swaps ±1 and n is odd"), form
        odd = _exp_sum(r, [2 * k - 1 for k in range(1, n // 2 + 1)], order)
        even = _exp_sum(r, [2 * k - 2 for k in range(1, n // 2 + 1)], order)
        lhs = ctx.mul(ctx.pow(p.a, odd), ctx.pow(p.b, even))
        rhs = ctx.mul(sign, ctx.mul(ctx.pow(p.a, even), ctx.pow(p.b, odd)))
        branch = "swap"
    else:
        return CriterionVerdict.fail(FailureKind.NOT_PERMUTATION, detail="g is not a bijection of mu_2"), form
    if lhs != 1:
        return CriterionVerdict.fail(FailureKind.PHI_WITNESS, witness=1, detail=f"{branch} branch: phi(1) = {lhs}"), form
    if rhs != 1:
        return CriterionVerdict.fail(FailureKind.PHI_WITNESS, witness=ctx.neg(1),
                                     detail=f"{branch} branch: phi(-1) = {rhs}"), form
    return CriterionVerdict.ok(detail=f"{branch} branch"), form


# ---- ℓ = 3 ----

def trinomial_displayed_coefficients(a: FieldElement, b: FieldElement, c: FieldElement,
                                     w: FieldElement, ctx: FieldCtx) -> Tuple[FieldElement, FieldElement, FieldElement]:
    """插值公式的系数 (h_0, h_1, h_2)，w 为三次单位根；结果满足 h(1)=a, h(w)=c, h(w^2)=b"""
    one = 1
    w2 = ctx.mul(w, w)
    w3 = ctx.mul(w2, w)
    wm1 = ctx.sub(w, one)
    wp1 = ctx.add(w, one)
    base = ctx.mul(wm1, wm1)
    denominators = [ctx.mul(base, wp1), ctx.mul(ctx.mul(base, w), wp1), ctx.mul(base, w)]
    if any(d == 0 for d in denominators):
        raise FieldError("interpolation denominator vanishes; w is not a primitive cube root of unity")
    num2 = ctx.add(ctx.sub(ctx.sub(b, c), ctx.mul(a, w2)), ctx.mul(b, w2))
    num1 = ctx.sub(ctx.add(c, ctx.mul(a, w)), ctx.mul(b, wp1))
    num0 = ctx.sub(ctx.add(c, ctx.mul(a, w3)), ctx.mul(b, ctx.mul(w, wp1)))
    return (ctx.div(num0, denominators[0]), ctx.div(num1, denominators[1]), ctx.div(num2, denominators[2]))


def trinomial_form(p: TrinomialParams, ctx: FieldCtx) -> IndexForm:
    if ctx.order % 3:
        raise PreconditionError(f"3 does not divide q-1 = {ctx.order}", condition="q≡1 mod 3")
    omega = subgroup(3, ctx).omega
    # 在 ω^2 处取插值公式，使 h(ω) = b, h(ω^2) = c
    coeffs = trinomial_displayed_coefficients(p.a, p.b, p.c, ctx.mul(omega, omega), ctx)
    if coeffs != vandermonde_solve([p.a, p.b, p.c], ctx, 3):
        raise FieldError("displayed interpolation disagrees with Lagrange interpolation")
    return IndexForm(r=p.r, s=ctx.order // 3, hcoeffs=coeffs)


def _three_term(x: FieldElement, y: FieldElement, z: FieldElement, ex: int, ey: int, ez: int,
                ctx: FieldCtx) -> FieldElement:
    return ctx.mul(ctx.mul(ctx.pow(x, ex), ctx.pow(y, ey)), ctx.pow(z, ez))


def index3_trinomial(p: TrinomialParams, ctx: FieldCtx) -> Tuple[CriterionVerdict, IndexForm]:
    """n = 3 时按 g 的类型（恒等、两种三循环）给出充要判定；其余 n 仅在 g 为恒等时判定"""
    form = trinomial_form(p, ctx)
    failure = _power_free_checks(form, p.n, ctx)
    if failure is not None:
        return failure, form
    order, r, n = ctx.order, p.r, p.n
    sub = subgroup(3, ctx)
    lead = _lead(r, n, form.s, order)
    w1, w2 = ctx.pow(sub.omega, lead), ctx.pow(sub.omega, 2 * lead)
    g = induced_g_indices(form, ctx)
    a, b, c = p.a, p.b, p.c
    if g == [0, 1, 2]:
        e = _exp_sum(r, list(range(n)), order)
        values = [ctx.pow(a, e), ctx.mul(w1, ctx.pow(b, e)), ctx.mul(w2, ctx.pow(c, e))]
        branch = "identity"
    elif n != 3:
        return CriterionVerdict.fail(FailureKind.PRECONDITION,
                                     detail=f"g = {g} is not the identity on mu_3"), form
    else:
        r2, r1 = pow(r, 2, order), r % order
        if g == [1, 2, 0]:
            values = [_three_term(a, b, c, r2, r1, 1, ctx),
                      ctx.mul(w1, _three_term(b, c, a, r2, r1, 1, ctx)),
                      ctx.mul(w2, _three_term(c, a, b, r2, r1, 1, ctx))]
            branch = "rotation"
        elif g == [2, 0, 1]:
            values = [_three_term(a, c, b, r2, r1, 1, ctx),
                      ctx.mul(w1, _three_term(b, a, c, r2, r1, 1, ctx)),
                      ctx.mul(w2, _three_term(c, b, a, r2, r1, 1, ctx))]
            branch = "opposite rotation"
        elif sorted(g) == [0, 1, 2]:
            return CriterionVerdict.fail(FailureKind.G_NOT_N_CYCLE, detail=f"g = {g} is a transposition"), form
        else:
            return CriterionVerdict.fail(FailureKind.NOT_PERMUTATION, detail=f"g = {g} is not a bijection"), form
    for i, val in enumerate(values):
        if val != 1:
            return CriterionVerdict.fail(FailureKind.PHI_WITNESS, witness=sub.elements[i],
                                         detail=f"{branch} branch: phi(omega^{i}) = {val}"), form
    return CriterionVerdict.ok(detail=f"{branch} branch"), form


class _ElementFamily(BaseFamily):
    def context(self, params: Dict[str, str]) -> FieldCtx:
        p, k = prime_power(self.int_param(params, "q"))
        return make_field(p, k)

    def element(self, params: Dict[str, str], key: str, ctx: FieldCtx) -> FieldElement:
        if key not in params:
            raise ParseError(f"missing parameter {key}")
        return parse_element(params[key], ctx)


class Index2BinomialFamily(_ElementFamily):
    params = {"q": "odd prime power", "a": "h(1)", "b": "h(-1)", "r": "exponent (default 1)", "n": "cycle order (default 3)"}

    def __init__(self):
        super().__init__("idx2-binomial", "((a-b)/2) x^{(q-1)/2+r} + ((a+b)/2) x^r")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        ctx = self.context(params)
        bp = BinomialParams(a=self.element(params, "a", ctx), b=self.element(params, "b", ctx),
                            r=self.int_param(params, "r", 1), n=self.int_param(params, "n", 3))
        verdict, form = index2_binomial(bp, ctx)
        self.logger.info(f"{ctx} a={bp.a} b={bp.b} r={bp.r} n={bp.n}: {verdict.describe()}")
        return FamilyResult(family=self.name, form=form, ctx=ctx, verdict=verdict, n=bp.n,
                            params={"a": bp.a, "b": bp.b, "r": bp.r})


class Index3TrinomialFamily(_ElementFamily):
    params = {"q": "prime power with q ≡ 1 mod 3", "a": "h(1)", "b": "h(omega)", "c": "h(omega^2)",
              "r": "exponent (default 1)", "n": "cycle order (default 3)"}

    def __init__(self):
        super().__init__("idx3-trinomial", "x^r h(x^{(q-1)/3}) with h interpolating (a, b, c) on mu_3")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        ctx = self.context(params)
        tp = TrinomialParams(a=self.element(params, "a", ctx), b=self.element(params, "b", ctx),
                             c=self.element(params, "c", ctx), r=self.int_param(params, "r", 1),
                             n=self.int_param(params, "n", 3))
        verdict, form = index3_trinomial(tp, ctx)
        self.logger.info(f"{ctx} a={tp.a} b={tp.b} c={tp.c} r={tp.r} n={tp.n}: {verdict.describe()}")
        notes = [] if tp.n == 3 else ["general n: sufficient condition only"]
        return FamilyResult(family=self.name, form=form, ctx=ctx, verdict=verdict, n=tp.n,
                            params={"a": tp.a, "b": tp.b, "c": tp.c, "r": tp.r}, notes=notes)
