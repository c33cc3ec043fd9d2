# -*- coding: utf-8 -*-
"""
代价结构、代价映射与最小代价攻击

代价结构是带格序的交换幺半群：数值代价取 (有理数, +, ≤, 0)，
符号代价取有限格，⊕ 为最小上界（或格文件显式给出的条目）。
"""

import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, TypeAlias

from core.exceptions import ConfigError, NonChannelAtomError, UnsatisfiableError
from core.logger import logger
from apps.analysis.lattice import FiniteLattice, LatticeReport
from apps.analysis.lattice import validate_lattice as _validate_finite
from apps.analysis.logic import Chan, Formula, atoms
from apps.analysis.solver import Attack, ModelEnumerator, enumerate_attacks
from apps.analysis.translate import ConstraintSystem

CostValue: TypeAlias = Fraction | str

_NUMBER = re.compile(r"^[0-9]+(\.[0-9]+)?([eE][+-]?[0-9]+)?$")


class CostStructure(ABC):
    """代价结构接口"""

    kind: str

    @abstractmethod
    def bottom(self) -> CostValue: ...

    @abstractmethod
    def combine(self, a: CostValue, b: CostValue) -> CostValue: ...

    @abstractmethod
    def leq(self, a: CostValue, b: CostValue) -> bool: ...

    @abstractmethod
    def parse(self, text: str) -> CostValue: ...

    @abstractmethod
    def format(self, value: CostValue) -> str: ...

    def lt(self, a: CostValue, b: CostValue) -> bool:
        return a != b and self.leq(a, b)

    def fold(self, values: Iterable[CostValue]) -> CostValue:
        total = self.bottom()
        for value in values:
            total = self.combine(total, value)
        return total


class NumericCost(CostStructure):
    """精确有理数代价"""

    kind = "numeric"

    def bottom(self) -> Fraction:
        return Fraction(0)

    def combine(self, a: CostValue, b: CostValue) -> Fraction:
        return Fraction(a) + Fraction(b)

    def leq(self, a: CostValue, b: CostValue) -> bool:
        return Fraction(a) <= Fraction(b)

    def parse(self, text: str) -> Fraction:
        """接受整数、小数与科学计数法，精确解析"""
        text = text.strip()
        if not _NUMBER.match(text):
            raise ValueError(f"not a nonnegative number: {text!r}")
        return Fraction(text)

    def format(self, value: CostValue) -> str:
        value = Fraction(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"


class SymbolicCost(CostStructure):
    """有限格上的符号代价"""

    kind = "symbolic"

    def __init__(self, lattice: FiniteLattice) -> None:
        self.lattice = lattice

    def bottom(self) -> str:
        if self.lattice.bottom is None:
            raise ConfigError("cost lattice has no bottom")
        return self.lattice.bottom

    def combine(self, a: CostValue, b: CostValue) -> str:
        return self.lattice.combine(str(a), str(b))

    def leq(self, a: CostValue, b: CostValue) -> bool:
        return self.lattice.leq(str(a), str(b))

    def parse(self, text: str) -> str:
        text = text.strip()
        if text not in self.lattice.elements:
            raise ValueError(f"not a lattice element: {text!r}")
        return text

    def format(self, value: CostValue) -> str:
        return str(value)


@dataclass(frozen=True)
class CostMap:
    """名字到代价的全映射，未列出的名字取默认值"""
    structure: CostStructure
    values: Mapping[str, CostValue]
    default: CostValue

    def cost(self, name: str) -> CostValue:
        return self.values.get(name, self.default)

    def scaled(self, factor: Fraction) -> "CostMap":
        """数值代价整体乘以正有理数"""
        return CostMap(
            self.structure,
            {name: Fraction(value) * factor for name, value in self.values.items()},
            Fraction(self.default) * factor,
        )


@dataclass(frozen=True)
class PricedAttack:
    attack: Attack
    cost: CostValue


def validate_lattice(s: CostStructure | FiniteLattice) -> LatticeReport:
    """检查符号代价结构的格公理与幺半群公理"""
    lattice = s.lattice if isinstance(s, SymbolicCost) else s
    if not isinstance(lattice, FiniteLattice):
        raise ConfigError("validate_lattice expects a symbolic cost structure")
    return _validate_finite(lattice)


def parse_cost_map(text: str, structure: CostStructure, source: Optional[str] = None) -> CostMap:
    """
    解析代价映射文件：`default = <value>` 与 `name = <value>` 行

    Raises:
        ConfigError: 缺少默认值、重复条目或非法取值
    """
    values: dict[str, CostValue] = {}
    default: Optional[CostValue] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name = name.strip()
        if not sep or not name:
            raise ConfigError(f"expected 'name = value' but found {line!r}", source, lineno)
        try:
            parsed = structure.parse(value)
        except ValueError as exc:
            raise ConfigError(str(exc), source, lineno) from exc
        if name == "default":
            default = parsed
        elif name in values:
            raise ConfigError(f"duplicate cost for {name!r}", source, lineno)
        else:
            values[name] = parsed
    if default is None:
        raise ConfigError("cost map declares no default", source)
    return CostMap(structure, values, default)


def cost_of(attack: Iterable[str], m: CostMap) -> CostValue:
    """攻击代价：逐信道代价的 ⊕ 折叠，空攻击为 ⊥"""
    return m.structure.fold(m.cost(name) for name in sorted(attack))


def _admit(minima: list[PricedAttack], candidate: PricedAttack, structure: CostStructure) -> list[PricedAttack]:
    # 保持反链：被严格支配的候选丢弃，被候选严格支配的旧项移除
    if any(structure.lt(entry.cost, candidate.cost) for entry in minima):
        return minima
    if any(entry.attack == candidate.attack for entry in minima):
        return minima
    kept = [entry for entry in minima if not structure.lt(candidate.cost, entry.cost)]
    kept.append(candidate)
    return kept


def _prune(minima: list[PricedAttack]) -> list[PricedAttack]:
    # 代价相同时，严格包含另一个极小攻击的攻击不保留
    kept = [
        entry for entry in minima
        if not any(other.attack < entry.attack for other in minima)
    ]
    return sorted(kept, key=lambda entry: sorted(entry.attack))


def minimal_attacks(sys: ConstraintSystem, m: CostMap) -> list[PricedAttack]:
    """
    求全部代价极小的攻击

    逐个求解模型并阻断已见攻击的全部超集（⊕ 外延，超集代价不会更小）；
    代价收紧以与当前极小反链比较的方式实现。

    Args:
        sys: 约束系统 P⇔l
        m: 代价映射

    Returns:
        list[PricedAttack]: 代价构成反链，攻击互不相同

    Raises:
        UnsatisfiableError: 标签不可达
    """
    minima: list[PricedAttack] = []
    iterations = 0
    for _, found in enumerate_attacks(sys, minimal_only=True):
        iterations += 1
        minima = _admit(minima, PricedAttack(found, cost_of(found, m)), m.structure)
    if not iterations:
        raise UnsatisfiableError(f"label {sys.query} is unreachable")
    result = _prune(minima)
    logger.info(f"标签 {sys.query} 检查了 {iterations} 个攻击，得到 {len(result)} 个最小代价攻击")
    return result


def minimal_models_of_formula(f: Formula, m: CostMap) -> list[PricedAttack]:
    """
    只含信道文字的公式的最小代价模型，攻击取为真的信道

    Raises:
        NonChannelAtomError: 公式含非信道文字
        UnsatisfiableError: 公式不可满足
    """
    for lit in atoms(f):
        if not isinstance(lit, Chan):
            raise NonChannelAtomError(lit)
    enumerator = ModelEnumerator(f)
    minima: list[PricedAttack] = []
    seen = 0
    while (model := enumerator.next()) is not None:
        seen += 1
        found = frozenset(lit.name for lit, value in model.items() if value)
        minima = _admit(minima, PricedAttack(found, cost_of(found, m)), m.structure)
        # 超集的代价不小于 found，阻断为真信道的全部超集
        enumerator.block(model, [lit for lit, value in model.items() if value])
    if not seen:
        raise UnsatisfiableError("formula is unsatisfiable")
    return _prune(minima)


__all__ = [
    "CostValue",
    "CostStructure",
    "NumericCost",
    "SymbolicCost",
    "CostMap",
    "PricedAttack",
    "validate_lattice",
    "parse_cost_map",
    "cost_of",
    "minimal_attacks",
    "minimal_models_of_formula",
]
