"""构造：分圆 Vandermonde 构造、子域提升、Frobenius 型提升"""
import math
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from ncycle_pp.criteria import CriterionVerdict, FailureKind, check_ncycle
from ncycle_pp.errors import FieldError, ParseError, PreconditionError
from ncycle_pp.field import FieldCtx, FieldElement, subfield_embedding, subgroup
from ncycle_pp.permpoly import (
    IndexForm,
    PermTable,
    SparsePoly,
    evaluate_array,
    h_values,
    is_n_cycle_oracle,
)


@dataclass(frozen=True)
class GSpec:
    """μ_ℓ 上的目标映射 g(ω^i) = ω^{sigma(i)} 以及整数向量 mvec"""
    sigma: Tuple[int, ...]
    mvec: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ParseError(f"sigma {list(self.sigma)} is not a permutation of 0..{len(self.sigma) - 1}")
        if len(self.mvec) != len(self.sigma):
            raise ParseError(f"mvec has length {len(self.mvec)}, expected {len(self.sigma)}")

    @classmethod
    def parse(cls, sigma_text: str, mvec_text: Optional[str] = None) -> "GSpec":
        try:
            sigma = tuple(int(v) for v in sigma_text.split(",") if v.strip())
            mvec = (tuple(int(v) for v in mvec_text.split(",") if v.strip())
                    if mvec_text else (0,) * len(sigma))
        except ValueError:
            raise ParseError(f"bad GSpec text: sigma={sigma_text!r} mvec={mvec_text!r}") from None
        return cls(sigma=sigma, mvec=mvec)

    @classmethod
    def identity(cls, mvec: Sequence[int]) -> "GSpec":
        return cls(sigma=tuple(range(len(mvec))), mvec=tuple(mvec))

    @property
    def ell(self) -> int:
        return len(self.sigma)

    def a(self, i: int, j: int) -> int:
        """a_{(i,j)} = sigma^j(i)"""
        for _ in range(j):
            i = self.sigma[i]
        return i

    def period_divides(self, n: int) -> bool:
        return all(self.a(i, n) == i for i in range(self.ell))

    def normalised(self, s: int) -> "GSpec":
        return GSpec(sigma=self.sigma, mvec=tuple(m % s for m in self.mvec))


@dataclass
class ConstructionResult:
    form: IndexForm
    valid: bool
    reasons: List[str] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)


def check_solution_congruences(spec: GSpec, r: int, n: int, s: int) -> bool:
    """r^n ≡ 1 (mod s) 且对每个 i，Σ_k r^{n-k-1}·m_{sigma^k(i)} ≡ 0 (mod s)"""
    if not spec.period_divides(n):
        raise PreconditionError(f"sigma^{n} is not the identity", condition="sigma^n=id")
    if pow(r, n, s) != 1 % s:
        return False
    for i in range(spec.ell):
        total = sum(pow(r, n - k - 1, s) * spec.mvec[spec.a(i, k)] for k in range(n))
        if total % s:
            return False
    return True


def vandermonde_solve(values: Sequence[FieldElement], ctx: FieldCtx, ell: Optional[int] = None) -> Tuple[FieldElement, ...]:
    """求次数 < ℓ 的 h 使 h(ω^i) = values[i]：h_k = ℓ^{-1}·Σ_i values[i]·ω^{-ik}"""
    ell = ell or len(values)
    if len(values) != ell:
        raise FieldError(f"{len(values)} values for {ell} nodes")
    nodes = subgroup(ell, ctx).elements
    ell_inv = ctx.inv(ctx.constant(ell))
    coeffs = []
    for k in range(ell):
        acc = 0
        for i, v in enumerate(values):
            if v:
                acc = ctx.add(acc, ctx.mul(v, nodes[(-i * k) % ell]))
        coeffs.append(ctx.mul(acc, ell_inv))
    return tuple(coeffs)


def cyclotomic_construct(spec: GSpec, r: int, n: int, ctx: FieldCtx) -> ConstructionResult:
    """按 B_i = β^{ℓ·m_i + sigma(i) - i·r} 插值得到 h，使诱导映射 g 恰为 sigma"""
    ell = spec.ell
    if ell < 1 or ctx.order % ell:
        raise FieldError(f"ell={ell} does not divide q-1={ctx.order}")
    s = ctx.order // ell
    spec = spec.normalised(s)
    targets = [
        ctx.pow(ctx.beta, (ell * spec.mvec[i] + spec.sigma[i] - i * r) % ctx.order)
        for i in range(ell)
    ]
    form = IndexForm(r=r, s=s, hcoeffs=vandermonde_solve(targets, ctx, ell))
    residual = [i for i, (got, want) in enumerate(zip(h_values(form, ctx), targets)) if got != want]
    if residual:
        raise FieldError(f"interpolation residual nonzero at nodes {residual}")

    reasons = []
    if math.gcd(r, s) != 1:
        reasons.append(f"gcd(r, s) = {math.gcd(r, s)}")
    if not check_solution_congruences(spec, r, n, s):
        reasons.append("solution congruences fail")
    if reasons:
        logger.debug(f"cyclotomic_construct sigma={list(spec.sigma)} mvec={list(spec.mvec)} r={r}: {reasons}")
    return ConstructionResult(
        form=form,
        valid=not reasons,
        reasons=reasons,
        metadata={"modulus": list(ctx.modulus), "beta": ctx.beta, "sigma": list(spec.sigma), "mvec": list(spec.mvec)},
    )


def cyclotomic_identity(mvec: Sequence[int], r: int, n: int, ctx: FieldCtx) -> ConstructionResult:
    """sigma 取恒等时的构造：B_i = β^{ℓ·m_i + i(1-r)}"""
    return cyclotomic_construct(GSpec.identity(mvec), r, n, ctx)


def enumerate_sigmas(ell: int, n: int) -> Iterator[Tuple[int, ...]]:
    """字典序列出所有 sigma^n = id 的排列"""
    for perm in permutations(range(ell)):
        spec = GSpec(sigma=perm, mvec=(0,) * ell)
        if spec.period_divides(n):
            yield perm


def enumerate_mvecs(ell: int, s: int) -> Iterator[Tuple[int, ...]]:
    return product(range(s), repeat=ell)


# ---- 子域提升 ----

@dataclass
class LiftResult:
    form: IndexForm
    valid: bool
    small_field_passed: bool
    reasons: List[str] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)


def small_field_table(h: SparsePoly, r: int, m: int, ctx: FieldCtx) -> PermTable:
    """GF(q) 上 x^r·h(x)^m 的取值表"""
    xs = ctx.elements()
    hx = evaluate_array(h, xs, ctx)
    images = ctx.mul_array(ctx.pow_array(xs, r), ctx.pow_array(hx, m))
    return PermTable.from_images(images)


def lift_subfield(h: SparsePoly, r: int, m: int, n: int, base_ctx: FieldCtx, ext_ctx: FieldCtx) -> LiftResult:
    """f(x) = x^r·h(x^{(q^m-1)/(q-1)}) over GF(q^m)；f 为 n-循环当且仅当 x^r·h(x)^m 在 GF(q) 上是"""
    q = base_ctx.q
    if ext_ctx.p != base_ctx.p or ext_ctx.q != q ** m:
        raise FieldError(f"{ext_ctx} is not the degree-{m} extension of {base_ctx}")
    big_s = (ext_ctx.q - 1) // (q - 1)
    reasons = []
    if math.gcd(q - 1, m) != 1:
        reasons.append(f"gcd(q-1, m) = {math.gcd(q - 1, m)}")
    if pow(r, n, big_s) != 1 % big_s:
        reasons.append(f"r^n mod (q^m-1)/(q-1) = {pow(r, n, big_s)}")

    table = small_field_table(h, r, m, base_ctx)
    small_passed = table.bijective and is_n_cycle_oracle(table, n)
    if not small_passed:
        reasons.append(f"x^r h(x)^m is not {n}-cycle on {base_ctx}")

    embed = subfield_embedding(base_ctx, ext_ctx)
    ell = q - 1
    hcoeffs = [0] * ell
    for e, c in h.terms:
        hcoeffs[e % ell] = ext_ctx.add(hcoeffs[e % ell], embed[c])
    form = IndexForm(r=r, s=big_s, hcoeffs=tuple(hcoeffs))
    logger.info(f"lifted to {ext_ctx}: r={r}, s={big_s}, ell={ell}, small-field {n}-cycle={small_passed}")
    return LiftResult(
        form=form,
        valid=not reasons,
        small_field_passed=small_passed,
        reasons=reasons,
        metadata={"base_field": str(base_ctx), "base_modulus": list(base_ctx.modulus),
                  "modulus": list(ext_ctx.modulus), "beta": ext_ctx.beta},
    )


# ---- Frobenius 型提升 ----

def _base_order(n: int, ctx: FieldCtx) -> int:
    if n < 1 or ctx.m % n:
        raise PreconditionError(f"{ctx} is not an extension of degree {n}", condition="n | m")
    return ctx.p ** (ctx.m // n)


def frobenius_lift_form(h: SparsePoly, n: int, ctx: FieldCtx) -> IndexForm:
    """x^q·h(x^{q-1}) over GF(q^n)，h 约化到 mod (x^ℓ - 1)"""
    q = _base_order(n, ctx)
    ell = (ctx.q - 1) // (q - 1)
    hcoeffs = [0] * ell
    for e, c in h.terms:
        hcoeffs[e % ell] = ctx.add(hcoeffs[e % ell], c)
    return IndexForm(r=q, s=q - 1, hcoeffs=tuple(hcoeffs))


def frobenius_lift_check(h: SparsePoly, n: int, ctx: FieldCtx) -> CriterionVerdict:
    """在 h(y)^{q-1} = y^{1-q} 的前提下，x^q·h(x^{q-1}) 是 n-循环当且仅当 h(μ_ℓ) ⊆ μ_ℓ"""
    form = frobenius_lift_form(h, n, ctx)
    q = form.r
    sub = subgroup(form.ell, ctx)
    hv = h_values(form, ctx)
    for i, (y, v) in enumerate(zip(sub.elements, hv)):
        if v == 0 or ctx.pow(v, q - 1) != ctx.pow(y, 1 - q):
            logger.warning(f"frobenius lift precondition fails at omega^{i}")
            return CriterionVerdict.fail(FailureKind.PRECONDITION, witness=y,
                                         detail=f"h(y)^(q-1) != y^(1-q) at omega^{i}")
    for i, (y, v) in enumerate(zip(sub.elements, hv)):
        if not sub.contains(v):
            return CriterionVerdict.fail(FailureKind.SUBGROUP_ESCAPE, witness=y,
                                         detail=f"h(omega^{i}) = {v} not in mu_{form.ell}")
    return CriterionVerdict.ok(detail=f"x^{q} h(x^{q - 1}) is {n}-cycle on {ctx}")


def frobenius_counterexample(c: FieldElement, n: int, ctx: FieldCtx) -> SparsePoly:
    """h(y) = c·y^{ℓ-1}：满足前提，c^n ≠ 1 时像逃出 μ_ℓ"""
    q = _base_order(n, ctx)
    ell = (ctx.q - 1) // (q - 1)
    return SparsePoly.build([(ell - 1, c)], ctx)


def construction_agrees(result: ConstructionResult, n: int, ctx: FieldCtx) -> bool:
    """构造标记与 φ 判据一致"""
    return check_ncycle(result.form, n, ctx).passed == result.valid
