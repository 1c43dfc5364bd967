"""验证、构造、族调度与穷举搜索：CLI 各子命令背后的执行层

每个 run_* 返回记录对象，由 main 负责按格式输出。q 不超过 table_limit 时
所有 n-循环结论都经过完整 oracle，否则退回 μ_ℓ 上的 φ 判据，并在记录里注明模式。
"""
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import islice, product
from typing import Dict, Iterator, List, Optional, Tuple

from loguru import logger
from pydantic import BaseModel
from sympy import divisors, factorint

from ncycle_pp.config import config
from ncycle_pp.constructor import GSpec, construction_agrees, cyclotomic_construct, vandermonde_solve
from ncycle_pp.criteria import CriterionVerdict, FailureKind, check_ncycle, permutation_verdict
from ncycle_pp.errors import BudgetExceededError, FieldError, NotBijectiveError, PreconditionError
from ncycle_pp.families.high_index import CHAR3_PRINTED_POLY
from ncycle_pp.field import FieldCtx, field_text
from ncycle_pp.permpoly import (IndexForm, Polynomial, SparsePoly, as_index_form, cycle_structure, fixed_points,
                                format_poly, index_to_sparse, is_fundamentally_n_cycle, is_n_cycle_oracle,
                                min_order, parse_poly, to_table)
from ncycle_pp.planner import FamilyPlanner
from ncycle_pp.records import (CriterionRecord, IndexFormRecord, InfoRecord, NoteRecord, OracleRecord,
                               ResultRecord, SummaryRecord, cycles_dict, field_fields)


def _criterion(form: IndexForm, n: int, ctx: FieldCtx) -> CriterionVerdict:
    try:
        return check_ncycle(form, n, ctx)
    except PreconditionError as e:
        return CriterionVerdict.fail(FailureKind.PRECONDITION, witness=e.witness, detail=e.msg)


def verify_form(f: Polynomial, n: int, ctx: FieldCtx, workers: int = 1,
                family: Optional[str] = None, params: Optional[Dict[str, object]] = None,
                notes: Optional[List[str]] = None) -> ResultRecord:
    """对 f 跑判据与 oracle，汇总成一条记录"""
    if n < 1:
        raise PreconditionError(f"n={n} must be >= 1", condition="n>=1")
    form = as_index_form(f, ctx)
    sparse = f if isinstance(f, SparsePoly) else index_to_sparse(f, ctx)
    verdict = _criterion(form, n, ctx) if form is not None else None
    notes = list(notes or [])
    cycles, order = None, None

    if ctx.has_tables:
        table, bijective = to_table(form if form is not None else sparse, ctx, workers=workers)
        passed = bijective and is_n_cycle_oracle(table, n)
        if bijective:
            cycles, order = cycles_dict(cycle_structure(table)), min_order(table)
        else:
            notes.append("not a permutation")
        oracle = OracleRecord(mode="full", passed=passed)
    else:
        if form is None:
            raise FieldError(f"{ctx} is too large for the oracle and the polynomial has no index form")
        bijective = permutation_verdict(form, ctx).passed
        if not bijective:
            notes.append("not a permutation")
        oracle = OracleRecord(mode="subgroup", passed=verdict.passed)
        logger.info(f"{ctx} exceeds table_limit={config.table_limit}; verified on mu_{form.ell} only")

    if verdict is not None and ctx.has_tables and verdict.passed != oracle.passed:
        logger.error(f"criterion and oracle disagree on {format_poly(sparse)}: {verdict.describe()}")

    return ResultRecord(
        **field_fields(ctx),
        poly=format_poly(sparse),
        index_form=IndexFormRecord.from_form(form) if form is not None else None,
        n=n,
        is_permutation=bijective,
        criterion=CriterionRecord.from_verdict(verdict) if verdict is not None else None,
        oracle=oracle,
        cycles=cycles,
        min_order=order,
        family=family,
        params=dict(params or {}),
        notes=notes,
    )


def run_verify(ctx: FieldCtx, poly_text: str, n: int, workers: int = 1) -> ResultRecord:
    poly = parse_poly(poly_text, ctx)
    logger.info(f"verify {format_poly(poly)} over GF({field_text(ctx)}), n={n}")
    return verify_form(poly, n, ctx, workers=workers)


def run_cycles(ctx: FieldCtx, poly_text: str, n: Optional[int] = None, workers: int = 1) -> List[BaseModel]:
    """循环结构报告；未给 n 时取最小阶"""
    poly = parse_poly(poly_text, ctx)
    if not ctx.has_tables:
        raise FieldError(f"{ctx} exceeds table_limit={config.table_limit}; cycle structure needs the full table")
    table, bijective = to_table(poly, ctx, workers=workers)
    if not bijective:
        raise NotBijectiveError(f"{format_poly(poly)} is not a permutation of GF({field_text(ctx)})")
    order = min_order(table)
    n = n or order
    record = verify_form(poly, n, ctx, workers=workers)
    note = NoteRecord(
        message=f"fixed points: {len(fixed_points(table))}, fundamentally {n}-cycle: "
                f"{is_fundamentally_n_cycle(table, n)}",
        data={"fixed_points": len(fixed_points(table)), "fundamental": is_fundamentally_n_cycle(table, n)},
    )
    return [record, note]


def run_construct(ctx: FieldCtx, sigma_text: str, mvec_text: Optional[str], r: int, n: int,
                  workers: int = 1) -> List[BaseModel]:
    """按 (sigma, mvec) 构造 h，然后交给 oracle"""
    spec = GSpec.parse(sigma_text, mvec_text)
    result = cyclotomic_construct(spec, r, n, ctx)
    notes = [f"construction flagged {'valid' if result.valid else 'invalid'}"] + result.reasons
    record = verify_form(result.form, n, ctx, workers=workers,
                         params={"sigma": list(spec.sigma), "mvec": result.metadata["mvec"], "r": r},
                         notes=notes)
    agrees = construction_agrees(result, n, ctx)
    if not agrees:
        logger.error(f"construction flag valid={result.valid} disagrees with the criterion")
    note = NoteRecord(message=f"construction valid={result.valid}, criterion agrees={agrees}",
                      data={"valid": result.valid, "reasons": result.reasons, **result.metadata})
    return [record, note]


def _char3_note(ctx: FieldCtx) -> NoteRecord:
    """两个版本的 GF(3^6) 示例都交给 oracle"""
    derived = verify_form(parse_poly("x^521 + x^417 + x^105 + x", ctx), 3, ctx)
    printed = verify_form(parse_poly(CHAR3_PRINTED_POLY, ctx), 3, ctx)
    if derived.passed != printed.passed:
        logger.warning(f"printed example {CHAR3_PRINTED_POLY} differs from x·h(x^26) = {derived.poly}")
    return NoteRecord(
        message=f"x·h(x^26) = {derived.poly}: triple-cycle={derived.passed}; "
                f"printed {printed.poly}: triple-cycle={printed.passed}",
        data={"derived": derived.poly, "derived_passed": derived.passed,
              "printed": printed.poly, "printed_passed": printed.passed},
    )


def run_family(planner: FamilyPlanner, name: str, params: Dict[str, str], workers: int = 1) -> List[BaseModel]:
    result = planner.execute(name, params)
    notes = [f"family verdict: {result.verdict.describe()}"] + result.notes
    if result.base_ctx is not None:
        notes.append(f"base field GF({field_text(result.base_ctx)})")
    record = verify_form(result.form, result.n, result.ctx, workers=workers,
                         family=name, params=result.params, notes=notes)
    records: List[BaseModel] = [record]
    if name == "char3-quad" and result.params.get("q") == 3:
        records.append(_char3_note(result.ctx))
    return records


def run_info(ctx: FieldCtx) -> InfoRecord:
    return InfoRecord(
        field=field_text(ctx),
        q=ctx.q,
        modulus=list(ctx.modulus),
        beta=ctx.beta,
        tables=ctx.has_tables,
        order_factors={str(p): e for p, e in sorted(factorint(ctx.order).items())},
        subgroup_orders=[int(d) for d in divisors(ctx.order)],
    )


# ---- 穷举搜索 ----

def admissible_r(s: int, n: int, r_range: Tuple[int, int]) -> List[int]:
    """gcd(r, s) = 1 且 r^n ≡ 1 (mod s)"""
    lo, hi = r_range
    return [r for r in range(lo, hi + 1) if math.gcd(r, s) == 1 and pow(r, n, s) == 1 % s]


def _sweep_r(ctx: FieldCtx, ell: int, s: int, n: int, r: int, limit: int) -> Tuple[int, List[ResultRecord]]:
    """按 h 值的字典序扫描前 limit 个候选"""
    hits = []
    evaluated = 0
    for values in islice(product(range(1, ctx.q), repeat=ell), limit):
        evaluated += 1
        form = IndexForm(r=r, s=s, hcoeffs=vandermonde_solve(values, ctx, ell))
        if not _criterion(form, n, ctx).passed:
            continue
        record = verify_form(form, n, ctx, params={"h_values": list(values)})
        if record.passed:
            hits.append(record)
        else:
            logger.error(f"oracle rejects criterion hit r={r} h={list(values)}")
    logger.debug(f"r={r}: {evaluated} candidates, {len(hits)} hits")
    return evaluated, hits


def run_search(ctx: FieldCtx, ell: int, n: int, r_range: Optional[Tuple[int, int]] = None,
               budget: Optional[int] = None, workers: int = 1) -> Iterator[BaseModel]:
    """扫描 (r, h 在 μ_ℓ 上的取值)，产出 oracle 复核过的 n-循环记录，最后给出汇总

    预算按候选数计，按字典序截断；预算不足时产出汇总后抛 BudgetExceededError。
    """
    if ell < 1 or ctx.order % ell:
        raise FieldError(f"ell={ell} does not divide q-1={ctx.order}")
    if n < 1:
        raise PreconditionError(f"n={n} must be >= 1", condition="n>=1")
    s = ctx.order // ell
    r_range = r_range or (1, ctx.order)
    if not 1 <= r_range[0] <= r_range[1]:
        raise PreconditionError(f"bad r range {r_range[0]}..{r_range[1]}", condition="1<=A<=B")
    budget = config.budget if budget is None else budget

    per_r = (ctx.q - 1) ** ell
    plan = []
    remaining = budget
    rs = admissible_r(s, n, r_range)
    for r in rs:
        if remaining <= 0:
            break
        limit = min(per_r, remaining)
        plan.append((r, limit))
        remaining -= limit
    complete = sum(limit for _, limit in plan) == per_r * len(rs)
    logger.info(f"search GF({field_text(ctx)}) ell={ell} s={s} n={n}: {len(rs)} admissible r, "
                f"{per_r} candidates each, budget {budget}")

    def run(item: Tuple[int, int]) -> Tuple[int, List[ResultRecord]]:
        return _sweep_r(ctx, ell, s, n, *item)

    evaluated = hits = 0
    if workers > 1 and len(plan) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for count, found in pool.map(run, plan):
                evaluated += count
                hits += len(found)
                yield from found
    else:
        for item in plan:
            count, found = run(item)
            evaluated += count
            hits += len(found)
            yield from found

    yield SummaryRecord(command="search", evaluated=evaluated, hits=hits, complete=complete)
    if not complete:
        raise BudgetExceededError(f"budget {budget} exhausted after {evaluated} candidates",
                                  evaluated=evaluated, hits=hits)
