"""x^r·h(x^s) 的解析判据

所有判据以 CriterionVerdict 返回“否”的结论，只有输入不合法时才抛异常。
μ_ℓ 上的点统一用下标 i 表示 ω^i，诱导映射 g 也以下标排列给出。
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger

from ncycle_pp.errors import FieldError, HVanishesError, PreconditionError
from ncycle_pp.field import FieldCtx, FieldElement, subgroup
from ncycle_pp.permpoly import IndexForm, h_values


class FailureKind(str, Enum):
    NOT_PERMUTATION = "not-permutation"
    CONGRUENCE = "congruence"
    PHI_WITNESS = "phi-witness"
    H_VANISHES = "h-vanishes"
    PRECONDITION = "precondition"
    SUBGROUP_ESCAPE = "subgroup-escape"
    G_NOT_N_CYCLE = "g-not-n-cycle"


@dataclass(frozen=True)
class CriterionVerdict:
    passed: bool
    failure_kind: Optional[FailureKind] = None
    witness: Optional[FieldElement] = None
    detail: str = ""

    @classmethod
    def ok(cls, detail: str = "") -> "CriterionVerdict":
        return cls(passed=True, detail=detail)

    @classmethod
    def fail(cls, kind: FailureKind, witness: Optional[FieldElement] = None, detail: str = "") -> "CriterionVerdict":
        return cls(passed=False, failure_kind=kind, witness=witness, detail=detail)

    def __bool__(self) -> bool:
        return self.passed

    def describe(self) -> str:
        if self.passed:
            return "PASS" + (f" ({self.detail})" if self.detail else "")
        text = f"FAIL[{self.failure_kind.value}]"
        if self.witness is not None:
            text += f" witness={self.witness}"
        return text + (f": {self.detail}" if self.detail else "")


def first_zero(hv) -> Optional[int]:
    for i, v in enumerate(hv):
        if v == 0:
            return i
    return None


def induced_g_indices(f: IndexForm, ctx: FieldCtx) -> List[int]:
    """g(ω^i) = ω^{j}，返回 j 的列表"""
    hv = h_values(f, ctx)
    sub = subgroup(f.ell, ctx)
    zero = first_zero(hv)
    if zero is not None:
        raise HVanishesError(f"h vanishes at omega^{zero}", witness=sub.elements[zero])
    ell = f.ell
    if ctx.has_tables:
        # h_i = β^L 时 h_i^s = ω^{L mod ℓ}
        logs = ctx.log_table[np.array(hv, dtype=np.int64)]
        return [int(j) for j in (np.arange(ell, dtype=np.int64) * (f.r % ell) + logs) % ell]
    images = []
    for i, v in enumerate(hv):
        y = ctx.pow(v, f.s)
        if not sub.contains(y):
            raise FieldError(f"h(omega^{i})^s = {y} escapes mu_{ell}")
        images.append((i * f.r + sub.index_of(y)) % ell)
    return images


def induced_g(f: IndexForm, ctx: FieldCtx) -> Tuple[FieldElement, ...]:
    """g(x) = x^r·h(x)^s 在 ω^0, …, ω^{ℓ-1} 上的像"""
    sub = subgroup(f.ell, ctx)
    return tuple(sub.elements[j] for j in induced_g_indices(f, ctx))


def permutation_verdict(f: IndexForm, ctx: FieldCtx) -> CriterionVerdict:
    f.validate(ctx)
    d = math.gcd(f.r, f.s)
    if d != 1:
        return CriterionVerdict.fail(FailureKind.NOT_PERMUTATION, detail=f"gcd(r, s) = {d}")
    try:
        g = induced_g_indices(f, ctx)
    except HVanishesError as e:
        return CriterionVerdict.fail(FailureKind.H_VANISHES, witness=e.witness, detail=e.msg)
    seen = {}
    sub = subgroup(f.ell, ctx)
    for i, j in enumerate(g):
        if j in seen:
            return CriterionVerdict.fail(
                FailureKind.NOT_PERMUTATION, witness=sub.elements[i],
                detail=f"g(omega^{seen[j]}) = g(omega^{i})")
        seen[j] = i
    return CriterionVerdict.ok()


def check_permutation(f: IndexForm, ctx: FieldCtx) -> bool:
    return permutation_verdict(f, ctx).passed


def _leading_exponent(r: int, n: int, s: int, order: int) -> int:
    """(r^n - 1)/s mod (q-1)，要求 r^n ≡ 1 (mod s)"""
    big = pow(r, n, s * order)
    return ((big - 1) // s) % order


def phi_values(f: IndexForm, n: int, ctx: FieldCtx) -> Tuple[FieldElement, ...]:
    """φ(ω^i)，i = 0, …, ℓ-1"""
    f.validate(ctx)
    if pow(f.r, n, f.s) != 1 % f.s:
        raise PreconditionError(f"r^n = {f.r}^{n} is not 1 mod s={f.s}", condition="r^n≡1 mod s")
    g = induced_g_indices(f, ctx)
    hv = h_values(f, ctx)
    order, ell = ctx.order, f.ell
    lead = _leading_exponent(f.r, n, f.s, order)
    weights = [pow(f.r, n - k - 1, order) for k in range(n)]
    if ctx.has_tables:
        gmap = np.array(g, dtype=np.int64)
        logs_h = ctx.log_table[np.array(hv, dtype=np.int64)]
        idx = np.arange(ell, dtype=np.int64)
        acc = (f.s * idx % order) * lead % order
        cur = idx
        for w in weights:
            acc = (acc + logs_h[cur] * w) % order
            cur = gmap[cur]
        return tuple(int(v) for v in ctx.exp_table[acc])
    sub = subgroup(ell, ctx)
    out = []
    for i in range(ell):
        val = ctx.pow(sub.elements[i], lead)
        cur = i
        for w in weights:
            val = ctx.mul(val, ctx.pow(hv[cur], w))
            cur = g[cur]
        out.append(val)
    return tuple(out)


def phi(y: FieldElement, f: IndexForm, n: int, ctx: FieldCtx) -> FieldElement:
    """φ(y) = y^{(r^n-1)/s}·Π h(g^{(i)}(y))^{r^{n-i-1}}"""
    return phi_values(f, n, ctx)[subgroup(f.ell, ctx).index_of(y)]


def check_ncycle(f: IndexForm, n: int, ctx: FieldCtx) -> CriterionVerdict:
    """f^{(n)}(x) = x·φ(x^s)，所以 f 是 n-循环当且仅当 r^n ≡ 1 (mod s) 且 φ ≡ 1"""
    f.validate(ctx)
    d = math.gcd(f.r, f.s)
    if d != 1:
        return CriterionVerdict.fail(FailureKind.NOT_PERMUTATION, detail=f"gcd(r, s) = {d}")
    if pow(f.r, n, f.s) != 1 % f.s:
        return CriterionVerdict.fail(
            FailureKind.CONGRUENCE, detail=f"r^n mod s = {pow(f.r, n, f.s)}")
    try:
        values = phi_values(f, n, ctx)
    except HVanishesError as e:
        return CriterionVerdict.fail(FailureKind.H_VANISHES, witness=e.witness, detail=e.msg)
    sub = subgroup(f.ell, ctx)
    for i, v in enumerate(values):
        if v != 1:
            return CriterionVerdict.fail(
                FailureKind.PHI_WITNESS, witness=sub.elements[i], detail=f"phi(omega^{i}) = {v}")
    return CriterionVerdict.ok()


def _g_power_is_identity(g: List[int], n: int) -> bool:
    cur = list(range(len(g)))
    for _ in range(n):
        cur = [g[j] for j in cur]
    return cur == list(range(len(g)))


def necessary_g_ncycle(f: IndexForm, n: int, ctx: FieldCtx) -> bool:
    """g 在 μ_ℓ 上 n 次复合为恒等映射；f 为 n-循环的必要条件"""
    f.validate(ctx)
    return _g_power_is_identity(induced_g_indices(f, ctx), n)


def subgroup_reduction_check(f: IndexForm, n: int, ctx: FieldCtx) -> CriterionVerdict:
    """gcd(s, ℓ) = 1 且 h(μ_ℓ) ⊆ μ_ℓ 时，f 是 n-循环当且仅当 g 在 μ_ℓ 上是 n-循环"""
    f.validate(ctx)
    d = math.gcd(f.r, f.s)
    if d != 1:
        return CriterionVerdict.fail(FailureKind.NOT_PERMUTATION, detail=f"gcd(r, s) = {d}")
    if pow(f.r, n, f.s) != 1 % f.s:
        return CriterionVerdict.fail(FailureKind.CONGRUENCE, detail=f"r^n mod s = {pow(f.r, n, f.s)}")
    if math.gcd(f.s, f.ell) != 1:
        return CriterionVerdict.fail(FailureKind.PRECONDITION, detail=f"gcd(s, ell) = {math.gcd(f.s, f.ell)}")
    sub = subgroup(f.ell, ctx)
    for i, v in enumerate(h_values(f, ctx)):
        if not sub.contains(v):
            return CriterionVerdict.fail(
                FailureKind.SUBGROUP_ESCAPE, witness=sub.elements[i], detail=f"h(omega^{i}) = {v}")
    if not necessary_g_ncycle(f, n, ctx):
        logger.debug(f"induced g is not {n}-cycle on mu_{f.ell}")
        return CriterionVerdict.fail(FailureKind.G_NOT_N_CYCLE)
    return CriterionVerdict.ok()
