from .base_family import BaseFamily, FamilyResult
from .high_index import Char3QuadFamily, EvenQTrinomialFamily, VTrinomialFamily
from .lifted import LiftChar3Family, LiftEvenQFamily
from .low_index import Index2BinomialFamily, Index3TrinomialFamily


def all_families():
    return [
        Char3QuadFamily(),
        EvenQTrinomialFamily(),
        VTrinomialFamily(),
        Index2BinomialFamily(),
        Index3TrinomialFamily(),
        LiftChar3Family(),
        LiftEvenQFamily(),
    ]


__all__ = ['BaseFamily', 'FamilyResult', 'all_families']
