"""异常类型：所有错误都从 NCycleError 派生，CLI 据此映射退出码"""
from typing import Optional


class NCycleError(Exception):
    """库内异常基类"""

    def __init__(self, msg: str):
        super().__init__(msg)
        self.msg = msg


class FieldError(NCycleError):
    """有限域构造或规模错误"""


class ParseError(NCycleError):
    """文本输入（多项式、域、GSpec、参数）无法解析"""


class NotBijectiveError(NCycleError):
    """需要置换表但输入不是双射"""


class HVanishesError(NCycleError):
    """h 在 μ_ℓ 上取零"""

    def __init__(self, msg: str, witness: int):
        super().__init__(msg)
        self.witness = witness


class PreconditionError(NCycleError):
    """定理或族的前提条件不成立"""

    def __init__(self, msg: str, condition: str = "", witness: Optional[int] = None):
        super().__init__(msg)
        self.condition = condition
        self.witness = witness


class BudgetExceededError(NCycleError):
    """搜索预算耗尽，结果不完整"""

    def __init__(self, msg: str, evaluated: int, hits: int):
        super().__init__(msg)
        self.evaluated = evaluated
        self.hits = hits
