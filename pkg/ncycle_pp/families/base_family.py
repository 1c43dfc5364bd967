from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from loguru import logger

from ncycle_pp.criteria import CriterionVerdict
from ncycle_pp.errors import ParseError
from ncycle_pp.field import FieldCtx, make_field, prime_power
from ncycle_pp.permpoly import IndexForm


@dataclass
class FamilyResult:
    """一个族实例：构造出的 f、所在的域、族自身的判定"""
    family: str
    form: IndexForm
    ctx: FieldCtx
    verdict: CriterionVerdict
    n: int = 3
    params: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    base_ctx: Optional[FieldCtx] = None


class BaseFamily(ABC):
    """族基类，封装参数读取与日志"""
    # 参数名 -> 说明，供 CLI 帮助与校验使用
    params: Dict[str, str] = {}

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description
        self.logger = logger.bind(family=name)

    @abstractmethod
    def build(self, params: Dict[str, str]) -> FamilyResult:
        """根据 --param 参数构造族实例"""
        pass

    def check_params(self, params: Dict[str, str]) -> None:
        unknown = set(params) - set(self.params)
        if unknown:
            raise ParseError(f"unknown parameter(s) for {self.name}: {', '.join(sorted(unknown))}")

    @staticmethod
    def int_param(params: Dict[str, str], key: str, default: Optional[int] = None) -> int:
        raw = params.get(key)
        if raw is None:
            if default is None:
                raise ParseError(f"missing parameter {key}")
            return default
        try:
            return int(raw)
        except ValueError:
            raise ParseError(f"parameter {key}={raw!r} is not an integer") from None

    @staticmethod
    def field_for(q: int, degree: int) -> FieldCtx:
        """GF(q^degree)"""
        p, k = prime_power(q)
        return make_field(p, k * degree)
