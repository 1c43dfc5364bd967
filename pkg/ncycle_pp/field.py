"""GF(p^m) 上的精确算术。

元素一律用规范整数编码表示：系数向量 coords（多项式基，低次在前）
对应整数 e = Σ coords[i]·p^i，0 编码加法单位元。

q 不超过 config.table_limit 的域会建立 numpy 对数/反对数表，
批量运算（*_array）走查表；更大的域（例如 GF(3^18)）
退回 sympy.polys.galoistools 的多项式算术，只支持标量运算。
"""
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from sympy import factorint, isprime, primefactors
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_pow_mod, gf_rem

from ncycle_pp.config import config
from ncycle_pp.errors import FieldError, ParseError

FieldElement = int


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """GF(p^m) 的不可变描述：特征、次数、不可约模多项式、本原元"""
    p: int
    m: int
    modulus: Tuple[int, ...]  # 低次在前，长度 m+1，首一
    beta: FieldElement
    q: int
    exp_table: Optional[np.ndarray] = field(default=None, repr=False)
    log_table: Optional[np.ndarray] = field(default=None, repr=False)

    def __str__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    @property
    def has_tables(self) -> bool:
        return self.exp_table is not None

    @property
    def order(self) -> int:
        """乘法群的阶 q-1"""
        return self.q - 1

    # ---- 编码 ----
    def encode(self, coords: Sequence[int]) -> FieldElement:
        e, place = 0, 1
        for c in coords:
            e += (int(c) % self.p) * place
            place *= self.p
        return e

    def decode(self, e: FieldElement) -> Tuple[int, ...]:
        if not 0 <= e < self.q:
            raise FieldError(f"encoding {e} outside [0, {self.q - 1}] for {self}")
        coords = []
        for _ in range(self.m):
            e, c = divmod(e, self.p)
            coords.append(c)
        return tuple(coords)

    def decode_array(self, es: np.ndarray) -> np.ndarray:
        places = self.p ** np.arange(self.m, dtype=np.int64)
        return (np.asarray(es, dtype=np.int64)[:, None] // places) % self.p

    def encode_array(self, coords: np.ndarray) -> np.ndarray:
        places = self.p ** np.arange(self.m, dtype=np.int64)
        return (np.asarray(coords, dtype=np.int64) % self.p) @ places

    # ---- 与 sympy 稠密表示互转（高次在前） ----
    def _dense(self, e: FieldElement) -> List[int]:
        coords = list(self.decode(e))
        while coords and coords[-1] == 0:
            coords.pop()
        return coords[::-1]

    def _from_dense(self, dense: Sequence[int]) -> FieldElement:
        return self.encode([int(c) for c in reversed(dense)])

    @property
    def _modulus_dense(self) -> List[int]:
        return list(reversed(self.modulus))

    # ---- 标量运算 ----
    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if self.p == 2:
            return a ^ b
        res, place = 0, 1
        while a or b:
            a, da = divmod(a, self.p)
            b, db = divmod(b, self.p)
            res += ((da + db) % self.p) * place
            place *= self.p
        return res

    def neg(self, a: FieldElement) -> FieldElement:
        if self.p == 2:
            return a
        res, place = 0, 1
        while a:
            a, da = divmod(a, self.p)
            res += ((-da) % self.p) * place
            place *= self.p
        return res

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.add(a, self.neg(b))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return int(self.exp_table[(int(self.log_table[a]) + int(self.log_table[b])) % self.order])
        prod = gf_rem(gf_mul(self._dense(a), self._dense(b), self.p, ZZ), self._modulus_dense, self.p, ZZ)
        return self._from_dense(prod)

    def pow(self, x: FieldElement, k: int) -> FieldElement:
        if x == 0:
            if k < 0:
                raise FieldError("negative power of zero")
            return 1 if k == 0 else 0
        k %= self.order
        if self.has_tables:
            return int(self.exp_table[(int(self.log_table[x]) * k) % self.order])
        return self._from_dense(gf_pow_mod(self._dense(x), k, self._modulus_dense, self.p, ZZ))

    def inv(self, x: FieldElement) -> FieldElement:
        if x == 0:
            raise FieldError("zero has no inverse")
        return self.pow(x, -1)

    def div(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return self.mul(a, self.inv(b))

    def frobenius(self, x: FieldElement) -> FieldElement:
        return self.pow(x, self.p)

    def element_order(self, x: FieldElement) -> int:
        """非零元的乘法阶"""
        if x == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.order
        for t, mult in factorint(n).items():
            for _ in range(mult):
                if self.pow(x, n // t) == 1:
                    n //= t
                else:
                    break
        return n

    def log(self, x: FieldElement) -> int:
        """以 β 为底的离散对数，仅查表域可用"""
        if not self.has_tables:
            raise FieldError(f"{self} has no log table")
        if x == 0:
            raise FieldError("log of zero")
        return int(self.log_table[x])

    def constant(self, c: int) -> FieldElement:
        """整数 c 在素子域中的像"""
        return c % self.p

    # ---- 批量运算（需查表） ----
    def _require_tables(self) -> None:
        if not self.has_tables:
            raise FieldError(f"{self} exceeds table_limit={config.table_limit}; vectorised arithmetic unavailable")

    def add_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor(a, b)
        res = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        place = 1
        for _ in range(self.m):
            res += (((a // place) % self.p + (b // place) % self.p) % self.p) * place
            place *= self.p
        return res

    def mul_array(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self._require_tables()
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp_table[(self.log_table[a] + self.log_table[b]) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def pow_array(self, xs: np.ndarray, k: int) -> np.ndarray:
        self._require_tables()
        xs = np.asarray(xs, dtype=np.int64)
        out = self.exp_table[(self.log_table[xs] * (k % self.order)) % self.order]
        if k > 0:
            zero_image = 0
        elif k == 0:
            zero_image = 1
        elif np.any(xs == 0):
            raise FieldError("negative power of zero")
        else:
            zero_image = 0
        return np.where(xs == 0, zero_image, out)

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)


def is_prime(p: int) -> bool:
    return bool(isprime(p))


def prime_power(q: int) -> Tuple[int, int]:
    """把 q 拆成 (p, k)，q = p^k"""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    factors = factorint(q)
    if len(factors) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return int(p), int(k)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """模多项式（低次在前）在 Z_p 上是否不可约"""
    dense = [int(c) % p for c in reversed(modulus)]
    while dense and dense[0] == 0:
        dense.pop(0)
    if len(dense) < 2:
        return False
    return bool(gf_irreducible_p(dense, p, ZZ))


def default_modulus(p: int, m: int) -> Tuple[int, ...]:
    """字典序最小（低次系数优先比较）的 m 次首一不可约多项式"""
    # m > 1 时常数项为 0 必可约，直接从 1 开始
    for c0 in range(0 if m == 1 else 1, p):
        for rest in product(range(p), repeat=m - 1):
            candidate = (c0,) + rest + (1,)
            if is_irreducible(candidate, p):
                return candidate
    raise FieldError(f"no irreducible polynomial of degree {m} over Z_{p}")


def find_primitive(ctx: FieldCtx) -> FieldElement:
    """编码最小的乘法群生成元"""
    n = ctx.order
    cofactors = [n // t for t in primefactors(n)]
    for e in range(1, ctx.q):
        if all(ctx.pow(e, c) != 1 for c in cofactors):
            return e
    raise FieldError(f"no primitive element found in {ctx}")  # 不会发生


def _mul_matrix(ctx: FieldCtx, c: FieldElement) -> np.ndarray:
    """乘以 c 的 Z_p-线性映射，行 j 为 c·x^j 的坐标"""
    rows = [ctx.decode(ctx.mul(c, ctx.p ** j)) for j in range(ctx.m)]
    return np.array(rows, dtype=np.int64)


def _build_tables(ctx: FieldCtx, block: int = 1024) -> Tuple[np.ndarray, np.ndarray]:
    n = ctx.order
    block = max(1, min(n, block))
    first = [1]
    for _ in range(block - 1):
        first.append(ctx.mul(first[-1], ctx.beta))
    coords = ctx.decode_array(np.array(first, dtype=np.int64))
    step = _mul_matrix(ctx, ctx.pow(ctx.beta, block))
    chunks = []
    for _ in range(0, n, block):
        chunks.append(coords)
        coords = (coords @ step) % ctx.p
    exp_table = ctx.encode_array(np.concatenate(chunks)[:n])
    log_table = np.full(ctx.q, -1, dtype=np.int64)
    log_table[exp_table] = np.arange(n, dtype=np.int64)
    if np.count_nonzero(log_table[1:] < 0):
        raise FieldError(f"beta={ctx.beta} does not generate {ctx}^*")
    return exp_table, log_table


@lru_cache(maxsize=64)
def _make_field_cached(p: int, m: int, modulus: Optional[Tuple[int, ...]], table_limit: int) -> FieldCtx:
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1:
        raise FieldError(f"extension degree {m} must be >= 1")
    if modulus is None:
        modulus = default_modulus(p, m)
    else:
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise FieldError(f"modulus {list(modulus)} is not monic of degree {m}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {list(modulus)} is reducible over Z_{p}")
    ctx = FieldCtx(p=p, m=m, modulus=modulus, beta=0, q=p ** m)
    ctx = replace(ctx, beta=find_primitive(ctx))
    if ctx.q <= table_limit:
        exp_table, log_table = _build_tables(ctx)
        ctx = replace(ctx, exp_table=exp_table, log_table=log_table)
    logger.debug(f"Built {ctx}: modulus={list(ctx.modulus)}, beta={ctx.beta}, tables={ctx.has_tables}")
    return ctx


def make_field(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None) -> FieldCtx:
    """构造 GF(p^m)，校验模多项式不可约并找出本原元"""
    key = tuple(modulus) if modulus is not None else None
    return _make_field_cached(int(p), int(m), key, config.table_limit)


def field_pow(x: FieldElement, k: int, ctx: FieldCtx) -> FieldElement:
    return ctx.pow(x, k)


@dataclass(frozen=True, eq=False)
class Subgroup:
    """μ_ℓ = <ω>，ω = β^s，元素按 ω^0, ω^1, … 排列"""
    ell: int
    s: int
    omega: FieldElement
    elements: Tuple[FieldElement, ...]
    index: Dict[FieldElement, int] = field(repr=False)

    def index_of(self, y: FieldElement) -> int:
        try:
            return self.index[y]
        except KeyError:
            raise FieldError(f"{y} is not in mu_{self.ell}") from None

    def contains(self, y: FieldElement) -> bool:
        return y in self.index


@lru_cache(maxsize=256)
def subgroup(ell: int, ctx: FieldCtx) -> Subgroup:
    if ell < 1 or ctx.order % ell:
        raise FieldError(f"{ell} does not divide q-1={ctx.order}")
    s = ctx.order // ell
    omega = ctx.pow(ctx.beta, s)
    elements = [1]
    for _ in range(ell - 1):
        elements.append(ctx.mul(elements[-1], omega))
    return Subgroup(ell=ell, s=s, omega=omega, elements=tuple(elements),
                    index={y: i for i, y in enumerate(elements)})


def unity_subgroup(ell: int, ctx: FieldCtx) -> Tuple[FieldElement, ...]:
    """ℓ 次单位根 (ω^0, …, ω^{ℓ-1})"""
    return subgroup(ell, ctx).elements


def subfield_embedding(base: FieldCtx, ext: FieldCtx) -> List[FieldElement]:
    """GF(q) → GF(q^k) 的嵌入：在扩域里找 base 模多项式的根 θ，按坐标展开"""
    if base.p != ext.p or ext.m % base.m:
        raise FieldError(f"{base} is not a subfield of {ext}")
    if base.m == 1:
        return list(range(base.p))
    gamma = ext.pow(ext.beta, ext.order // base.order)
    theta, cur = None, 1
    for _ in range(base.order):
        acc, power = 0, 1
        for c in base.modulus:
            acc = ext.add(acc, ext.mul(ext.constant(c), power))
            power = ext.mul(power, cur)
        if acc == 0:
            theta = cur
            break
        cur = ext.mul(cur, gamma)
    if theta is None:
        raise FieldError(f"modulus of {base} has no root in {ext}")
    powers = [1]
    for _ in range(base.m - 1):
        powers.append(ext.mul(powers[-1], theta))
    image = []
    for e in range(base.q):
        acc = 0
        for c, pw in zip(base.decode(e), powers):
            if c:
                acc = ext.add(acc, ext.mul(ext.constant(c), pw))
        image.append(acc)
    return image


def parse_element(text: str, ctx: FieldCtx) -> FieldElement:
    try:
        e = int(text.strip())
    except ValueError:
        raise ParseError(f"bad element encoding: {text!r}") from None
    if not 0 <= e < ctx.q:
        raise ParseError(f"element {e} outside [0, {ctx.q - 1}]")
    return e


def parse_field(text: str, modulus_text: Optional[str] = None) -> FieldCtx:
    """解析 "p^m" 或 "p"，可选模多项式 "c0,c1,...,1"（低次在前）"""
    text = text.strip().replace(" ", "")
    try:
        if "^" in text:
            p_text, m_text = text.split("^", 1)
            p, m = int(p_text), int(m_text)
        else:
            p, m = int(text), 1
    except ValueError:
        raise ParseError(f"bad field text: {text!r} (expected p^m)") from None
    modulus = None
    if modulus_text:
        try:
            modulus = [int(c) for c in modulus_text.split(",") if c.strip()]
        except ValueError:
            raise ParseError(f"bad modulus text: {modulus_text!r}") from None
    return make_field(p, m, modulus)


def field_text(ctx: FieldCtx) -> str:
    return f"{ctx.p}^{ctx.m}" if ctx.m > 1 else str(ctx.p)
