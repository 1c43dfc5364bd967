"""把小域上的三循环族提升到扩域"""
from typing import Dict

from ncycle_pp.constructor import lift_subfield
from ncycle_pp.criteria import CriterionVerdict, FailureKind, check_ncycle
from ncycle_pp.errors import PreconditionError
from ncycle_pp.families.base_family import BaseFamily, FamilyResult
from ncycle_pp.field import prime_power
from ncycle_pp.permpoly import SparsePoly


def _char3_exponents(q: int):
    big = q ** 6 - 1
    e1 = ((1 + q) * (q ** 3 - 1) + 2 * q ** 6 - 2) // 3
    e2 = ((1 - q * q) * (q ** 3 - 1) + 2 * q ** 6 - 2) // 3
    e3 = ((-q * q - q) * (q ** 3 - 1)) // 3
    return [0, e1 % big, e2 % big, e3 % big]


def lifted_families(which: str, params: Dict[str, int]) -> FamilyResult:
    """lift-even-q: GF(q^2) → GF(q^4)；lift-char3: GF(q^6) → GF(q^18)"""
    q = params["q"]
    p, k = prime_power(q)
    if which == "lift-even-q":
        if p != 2:
            raise PreconditionError(f"q={q} is not even", condition="q even")
        a = params["a"]
        if (5 * a) % (q + 1):
            raise PreconditionError(f"5a = {5 * a} != 0 mod {q + 1}", condition="5a≡0 mod q+1")
        base_degree, m = 2, 2
        exps = [a * (q - 1), a * q * (q - 1), 0]
    elif which == "lift-char3":
        if p != 3:
            raise PreconditionError(f"q={q} is not a power of 3", condition="char 3")
        if (1 + 3 * q + 2 * q * q) % (q ** 3 + 1):
            raise PreconditionError(f"1 + 3q + 2q^2 != 0 mod q^3+1 for q={q}", condition="1+3q+2q^2≡0 mod q^3+1")
        base_degree, m = 6, 3
        exps = _char3_exponents(q)
    else:
        raise PreconditionError(f"unknown lifted family {which!r}", condition="family")

    base_ctx = BaseFamily.field_for(q, base_degree)
    ext_ctx = BaseFamily.field_for(q, base_degree * m)
    h = SparsePoly.build([(e, 1) for e in exps], base_ctx)
    lifted = lift_subfield(h, r=1, m=m, n=3, base_ctx=base_ctx, ext_ctx=ext_ctx)
    if lifted.valid:
        verdict = check_ncycle(lifted.form, 3, ext_ctx)
    else:
        verdict = CriterionVerdict.fail(FailureKind.PRECONDITION, detail="; ".join(lifted.reasons))
    notes = [f"base field {base_ctx}: x h(x)^{m} triple-cycle = {lifted.small_field_passed}"]
    return FamilyResult(family=which, form=lifted.form, ctx=ext_ctx, verdict=verdict,
                        params=dict(params), notes=notes, base_ctx=base_ctx)


class LiftEvenQFamily(BaseFamily):
    params = {"q": "even prime power", "a": "integer with 5a ≡ 0 mod q+1"}

    def __init__(self):
        super().__init__("lift-even-q", "x·h(x^{q^2+1}) over GF(q^4), h = x^{a(q-1)} + x^{aq(q-1)} + 1")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        values = {"q": self.int_param(params, "q"), "a": self.int_param(params, "a")}
        return lifted_families(self.name, values)


class LiftChar3Family(BaseFamily):
    params = {"q": "power of 3 with 1+3q+2q^2 ≡ 0 mod q^3+1 (default 3)"}

    def __init__(self):
        super().__init__("lift-char3", "x·h(x^{(q^18-1)/(q^6-1)}) over GF(q^18)")

    def build(self, params: Dict[str, str]) -> FamilyResult:
        self.check_params(params)
        result = lifted_families(self.name, {"q": self.int_param(params, "q", 3)})
        self.logger.info(f"{result.ctx}: ell={result.form.ell}, s={result.form.s}, criterion {result.verdict.describe()}")
        return result
