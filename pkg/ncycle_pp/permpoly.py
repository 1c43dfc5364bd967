"""f(x) = x^r·h(x^s) 的各种表示、求值、置换表与循环分解"""
import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from ncycle_pp.config import config
from ncycle_pp.errors import FieldError, NotBijectiveError, ParseError, PreconditionError
from ncycle_pp.field import FieldCtx, FieldElement, subgroup


@dataclass(frozen=True)
class SparsePoly:
    """稀疏多项式，terms 为 (指数, 系数) 且指数严格递增、系数非零"""
    terms: Tuple[Tuple[int, FieldElement], ...] = ()

    @classmethod
    def build(cls, terms: Sequence[Tuple[int, FieldElement]], ctx: FieldCtx) -> "SparsePoly":
        """合并同次项并去掉零系数"""
        merged: Dict[int, FieldElement] = {}
        for e, c in terms:
            if e < 0:
                raise ParseError(f"negative exponent {e}")
            merged[e] = ctx.add(merged.get(e, 0), c)
        return cls(tuple((e, c) for e, c in sorted(merged.items()) if c != 0))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def exponents(self) -> List[int]:
        return [e for e, _ in self.terms]


@dataclass(frozen=True)
class IndexForm:
    """x^r·h(x^s)，hcoeffs 是 h mod (x^ℓ - 1) 的系数，低次在前"""
    r: int
    s: int
    hcoeffs: Tuple[FieldElement, ...]

    @property
    def ell(self) -> int:
        return len(self.hcoeffs)

    def validate(self, ctx: FieldCtx) -> "IndexForm":
        if self.r < 1:
            raise PreconditionError(f"r={self.r} must be positive", condition="r>=1")
        if self.s < 1 or self.s * self.ell != ctx.order:
            raise PreconditionError(
                f"s*ell = {self.s}*{self.ell} != q-1 = {ctx.order}", condition="s*ell=q-1")
        return self

    def h_terms(self) -> List[Tuple[int, FieldElement]]:
        return [(k, c) for k, c in enumerate(self.hcoeffs) if c != 0]


@dataclass(frozen=True)
class PiecewiseForm:
    """x ↦ h(α_i)·x^r（x^s = α_i），0 ↦ 0；branches 按 ω^0, ω^1, … 排列"""
    r: int
    branches: Tuple[Tuple[FieldElement, FieldElement], ...]

    @property
    def ell(self) -> int:
        return len(self.branches)


@dataclass(frozen=True, eq=False)
class PermTable:
    """images[x] = f(x)；bijective 标记 images 是否为 [0, q-1] 的排列"""
    images: np.ndarray
    bijective: bool

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "PermTable":
        images = np.asarray(images, dtype=np.int64)
        q = len(images)
        bijective = bool(q and images.min() >= 0 and images.max() < q
                         and np.all(np.bincount(images, minlength=q) == 1))
        return cls(images=images, bijective=bijective)

    @classmethod
    def identity(cls, q: int) -> "PermTable":
        return cls(images=np.arange(q, dtype=np.int64), bijective=True)

    @property
    def q(self) -> int:
        return len(self.images)

    def __eq__(self, other) -> bool:
        return isinstance(other, PermTable) and np.array_equal(self.images, other.images)

    __hash__ = None

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.images, np.arange(self.q)))


@dataclass(frozen=True)
class CycleStructure:
    counts: Dict[int, int]

    def total(self) -> int:
        return sum(length * mult for length, mult in self.counts.items())

    def lengths(self) -> List[int]:
        return sorted(self.counts)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}: {self.counts[k]}" for k in sorted(self.counts)) + "}"


Polynomial = Union[SparsePoly, IndexForm]


# ---- h 在 μ_ℓ 上的取值 ----

@lru_cache(maxsize=4096)
def _h_values_cached(f: IndexForm, ctx: FieldCtx) -> Tuple[FieldElement, ...]:
    sub = subgroup(f.ell, ctx)
    terms = f.h_terms()
    if ctx.has_tables and terms:
        ks = np.array([k for k, _ in terms], dtype=np.int64)
        cs = np.array([c for _, c in terms], dtype=np.int64)
        nodes = np.array(sub.elements, dtype=np.int64)
        powers = nodes[(np.arange(f.ell, dtype=np.int64)[:, None] * ks[None, :]) % f.ell]
        prods = ctx.mul_array(powers, np.broadcast_to(cs, powers.shape))
        acc = np.zeros(f.ell, dtype=np.int64)
        for col in range(len(terms)):
            acc = ctx.add_array(acc, prods[:, col])
        return tuple(int(v) for v in acc)
    values = []
    for i in range(f.ell):
        acc = 0
        for k, c in terms:
            acc = ctx.add(acc, ctx.mul(c, sub.elements[(i * k) % f.ell]))
        values.append(acc)
    return tuple(values)


def h_values(f: IndexForm, ctx: FieldCtx) -> Tuple[FieldElement, ...]:
    """(h(ω^0), …, h(ω^{ℓ-1}))"""
    f.validate(ctx)
    return _h_values_cached(f, ctx)


# ---- 求值 ----

def _eval_sparse(f: SparsePoly, x: FieldElement, ctx: FieldCtx) -> FieldElement:
    acc = 0
    for e, c in f.terms:
        acc = ctx.add(acc, ctx.mul(c, ctx.pow(x, e)))
    return acc


def evaluate(f: Polynomial, x: FieldElement, ctx: FieldCtx) -> FieldElement:
    if isinstance(f, SparsePoly):
        return _eval_sparse(f, x, ctx)
    if x == 0:
        return 0
    hv = h_values(f, ctx)
    sub = subgroup(f.ell, ctx)
    y = ctx.pow(x, f.s)
    return ctx.mul(ctx.pow(x, f.r), hv[sub.index_of(y)])


def evaluate_array(f: Polynomial, xs: np.ndarray, ctx: FieldCtx) -> np.ndarray:
    """批量求值，要求域带有对数表"""
    if not ctx.has_tables:
        raise FieldError(f"{ctx} exceeds table_limit={config.table_limit}; no exhaustive evaluation")
    xs = np.asarray(xs, dtype=np.int64)
    logs = ctx.log_table[xs]
    n = ctx.order
    if isinstance(f, SparsePoly):
        acc = np.zeros(xs.shape, dtype=np.int64)
        for e, c in f.terms:
            if e == 0:
                term = np.full(xs.shape, c, dtype=np.int64)
            else:
                term = ctx.exp_table[(logs * (e % n) + ctx.log_table[c]) % n]
                term = np.where(xs == 0, 0, term)
            acc = ctx.add_array(acc, term)
        return acc
    hv = np.array(h_values(f, ctx), dtype=np.int64)
    return _branch_images(f.r, hv, xs, logs, ctx)


def _branch_images(r: int, multipliers: np.ndarray, xs: np.ndarray, logs: np.ndarray,
                   ctx: FieldCtx) -> np.ndarray:
    n = ctx.order
    mult = multipliers[logs % len(multipliers)]
    out = ctx.exp_table[(ctx.log_table[mult] + logs * (r % n)) % n]
    return np.where((xs == 0) | (mult == 0), 0, out)


def piecewise_table(pw: PiecewiseForm, ctx: FieldCtx) -> PermTable:
    """直接由 μ_ℓ 上的 ℓ 个乘子查表建表，不经过 h 的系数"""
    if not ctx.has_tables:
        raise FieldError(f"{ctx} exceeds table_limit={config.table_limit}; no exhaustive evaluation")
    if ctx.order % pw.ell:
        raise PreconditionError(f"ell={pw.ell} does not divide q-1={ctx.order}", condition="ell | q-1")
    xs = ctx.elements()
    multipliers = np.array([m for _, m in pw.branches], dtype=np.int64)
    return PermTable.from_images(_branch_images(pw.r, multipliers, xs, ctx.log_table[xs], ctx))


def to_table(f: Polynomial, ctx: FieldCtx, workers: int = 1) -> Tuple[PermTable, bool]:
    """对全部 q 个元素求值，分块可并行"""
    chunk = max(1, config.chunk_size)
    bounds = [(lo, min(ctx.q, lo + chunk)) for lo in range(0, ctx.q, chunk)]

    def run(span: Tuple[int, int]) -> np.ndarray:
        return evaluate_array(f, np.arange(span[0], span[1], dtype=np.int64), ctx)

    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(span) for span in bounds]
    table = PermTable.from_images(np.concatenate(parts))
    logger.debug(f"to_table over {ctx}: {len(bounds)} chunks, bijective={table.bijective}")
    return table, table.bijective


# ---- 分段形式 ----

def index_to_piecewise(f: IndexForm, ctx: FieldCtx) -> PiecewiseForm:
    sub = subgroup(f.ell, ctx)
    return PiecewiseForm(r=f.r, branches=tuple(zip(sub.elements, h_values(f, ctx))))


def evaluate_piecewise(pw: PiecewiseForm, x: FieldElement, ctx: FieldCtx) -> FieldElement:
    if x == 0:
        return 0
    s = ctx.order // pw.ell
    alpha = ctx.pow(x, s)
    for node, multiplier in pw.branches:
        if node == alpha:
            return ctx.mul(multiplier, ctx.pow(x, pw.r))
    raise FieldError(f"x^s={alpha} matches no branch")


# ---- 循环结构 ----

def _require_bijective(t: PermTable) -> None:
    if not t.bijective:
        raise NotBijectiveError("permutation table required, got a non-bijective map")


def _iter_cycles(t: PermTable) -> Iterator[List[int]]:
    images = t.images.tolist()
    seen = bytearray(len(images))
    for start in range(len(images)):
        if seen[start]:
            continue
        cycle = []
        x = start
        while not seen[x]:
            seen[x] = 1
            cycle.append(x)
            x = images[x]
        yield cycle


def cycles(t: PermTable) -> List[List[int]]:
    _require_bijective(t)
    return list(_iter_cycles(t))


def cycle_structure(t: PermTable) -> CycleStructure:
    _require_bijective(t)
    counts: Dict[int, int] = {}
    for cycle in _iter_cycles(t):
        counts[len(cycle)] = counts.get(len(cycle), 0) + 1
    return CycleStructure(counts=counts)


def min_order(t: PermTable) -> int:
    """所有循环长度的最小公倍数"""
    return math.lcm(*cycle_structure(t).lengths())


def is_fundamentally_n_cycle(t: PermTable, n: int) -> bool:
    return min_order(t) == n


def fixed_points(t: PermTable) -> np.ndarray:
    return np.flatnonzero(t.images == np.arange(t.q))


def inverse_table(t: PermTable) -> PermTable:
    _require_bijective(t)
    inv = np.empty_like(t.images)
    inv[t.images] = np.arange(t.q, dtype=np.int64)
    return PermTable(images=inv, bijective=True)


def compose(f: PermTable, g: PermTable) -> PermTable:
    """(f∘g)(x) = f(g(x))"""
    return PermTable(images=f.images[g.images], bijective=f.bijective and g.bijective)


def functional_power(t: PermTable, k: int) -> PermTable:
    """k 次复合；双射时按循环跳步，k 可为负"""
    if not t.bijective:
        if k <= 0:
            raise NotBijectiveError(f"power {k} of a non-bijective map is undefined")
        result, base = np.arange(t.q, dtype=np.int64), t.images
        while k:
            if k & 1:
                result = base[result]
            base = base[base]
            k >>= 1
        return PermTable(images=result, bijective=False)
    order, starts, lengths = [], [], []
    for cycle in _iter_cycles(t):
        starts.extend([len(order)] * len(cycle))
        lengths.extend([len(cycle)] * len(cycle))
        order.extend(cycle)
    order = np.array(order, dtype=np.int64)
    starts = np.array(starts, dtype=np.int64)
    lengths = np.array(lengths, dtype=np.int64)
    pos = np.arange(t.q, dtype=np.int64) - starts
    out = np.empty_like(order)
    out[order] = order[starts + (pos + k) % lengths]
    return PermTable(images=out, bijective=True)


def is_n_cycle_oracle(t: PermTable, n: int) -> bool:
    """每个循环长度整除 n；遇到第一个反例即返回"""
    _require_bijective(t)
    if n < 1:
        raise PreconditionError(f"n={n} must be >= 1", condition="n>=1")
    for cycle in _iter_cycles(t):
        if n % len(cycle):
            return False
    return True


# ---- 变换 ----

@dataclass(frozen=True)
class Power:
    k: int


@dataclass(frozen=True, eq=False)
class Conjugate:
    g: PermTable


@dataclass(frozen=True, eq=False)
class ComposeWith:
    g: PermTable


Transform = Union[Power, Conjugate, ComposeWith]


def derive(t: PermTable, transform: Transform) -> PermTable:
    if isinstance(transform, Power):
        return functional_power(t, transform.k)
    g = transform.g
    _require_bijective(g)
    if isinstance(transform, Conjugate):
        return PermTable(images=g.images[t.images[inverse_table(g).images]], bijective=t.bijective)
    if not np.array_equal(t.images[g.images], g.images[t.images]):
        raise PreconditionError("f and g do not commute", condition="f∘g=g∘f")
    return compose(t, g)


# ---- 文本形式与表示转换 ----

_TERM = re.compile(r"^(?:(\d+)\*?)?(x(?:\^(\d+))?)?$")


def parse_poly(text: str, ctx: FieldCtx) -> SparsePoly:
    """解析 "C*x^E + x^E + x + C" 形式的多项式"""
    cleaned = re.sub(r"\s+", "", text or "")
    if not cleaned:
        raise ParseError("empty polynomial text")
    terms = []
    for piece in cleaned.split("+"):
        match = _TERM.match(piece)
        if not piece or not match or (match.group(1) is None and match.group(2) is None):
            raise ParseError(f"bad polynomial term: {piece!r}")
        coeff_text, var, exp_text = match.groups()
        coeff = int(coeff_text) if coeff_text is not None else 1
        if not 0 <= coeff < ctx.q:
            raise ParseError(f"coefficient {coeff} outside [0, {ctx.q - 1}]")
        if var is None:
            exp = 0
        else:
            exp = int(exp_text) if exp_text is not None else 1
        terms.append((exp, coeff))
    return SparsePoly.build(terms, ctx)


def format_poly(f: SparsePoly) -> str:
    if f.is_zero:
        return "0"
    parts = []
    for e, c in reversed(f.terms):
        if e == 0:
            parts.append(str(c))
            continue
        mono = "x" if e == 1 else f"x^{e}"
        parts.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(parts)


def sparse_to_index(f: SparsePoly, ctx: FieldCtx) -> IndexForm:
    """规范指标分解：指数约化到 [1, q-1]，r 取最低次，s = gcd(指数差, q-1)"""
    if f.is_zero:
        raise PreconditionError("zero polynomial has no index form", condition="f≠0")
    if f.terms[0][0] == 0:
        raise PreconditionError("constant term present; f(0) != 0", condition="no-constant-term")
    n = ctx.order
    reduced = SparsePoly.build([((e - 1) % n + 1, c) for e, c in f.terms], ctx)
    if reduced.is_zero:
        raise PreconditionError("polynomial vanishes on GF(q)*", condition="f≠0")
    r = reduced.terms[0][0]
    s = n
    for e, _ in reduced.terms[1:]:
        s = math.gcd(s, e - r)
    ell = n // s
    hcoeffs = [0] * ell
    for e, c in reduced.terms:
        hcoeffs[(e - r) // s] = c
    return IndexForm(r=r, s=s, hcoeffs=tuple(hcoeffs))


def index_to_sparse(f: IndexForm, ctx: FieldCtx) -> SparsePoly:
    return SparsePoly.build([(f.r + f.s * k, c) for k, c in f.h_terms()], ctx)


def as_index_form(f: Polynomial, ctx: FieldCtx) -> Optional[IndexForm]:
    """IndexForm 原样返回；SparsePoly 尝试分解，失败返回 None"""
    if isinstance(f, IndexForm):
        return f
    try:
        return sparse_to_index(f, ctx)
    except PreconditionError:
        return None
