from typing import Dict, List, Optional

from loguru import logger

from ncycle_pp.config import config
from ncycle_pp.errors import ParseError
from ncycle_pp.families import BaseFamily, FamilyResult, all_families


class FamilyPlanner:
    """族调度器，按名称选择族并执行构造"""
    def __init__(self, families: Optional[List[BaseFamily]] = None):
        self.families = families if families is not None else all_families()
        self.family_map = {family.name: family for family in self.families}
        self.logger = logger.bind(planner="FamilyPlanner")

    def select(self, name: str) -> BaseFamily:
        """根据名称选择族"""
        family = self.family_map.get(name)
        if family is None:
            known = ", ".join(sorted(self.family_map))
            raise ParseError(f"unknown family {name!r}; known families: {known}")
        return family

    def execute(self, name: str, params: Dict[str, str]) -> FamilyResult:
        """执行一个族的构造并返回族自身的判定"""
        family = self.select(name)
        self.logger.info(f"构造族 {name}: {params}")
        result = family.build(params)
        if result.verdict.passed:
            self.logger.info(f"{name} 判据通过")
        else:
            self.logger.warning(f"{name} 判据失败: {result.verdict.describe()}")
        return result

    def describe(self) -> str:
        """列出所有族及其参数"""
        lines = []
        for family in self.families:
            module = config.family_names.get(family.name, "?")
            lines.append(f"{family.name} [{module}]: {family.description}")
            lines.extend(f"    {key}: {text}" for key, text in family.params.items())
        return "\n".join(lines)
