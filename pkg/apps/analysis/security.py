# -*- coding: utf-8 -*-
"""
安全格、级别映射与保护倒置检查

级别映射把代价区域压缩为安全级别；标签 l 通过检查当且仅当
security(l) ⊑ ⊓{level(cost(a)) | a 为 l 的最小代价攻击}。
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal, Mapping, Optional

from core.exceptions import ConfigError, UnknownLabelError, UnsatisfiableError
from core.logger import logger
from apps.calculus.ast import Process, labels
from apps.analysis.cost import (
    CostMap,
    CostStructure,
    CostValue,
    NumericCost,
    PricedAttack,
    SymbolicCost,
    minimal_attacks,
)
from apps.analysis.lattice import FiniteLattice
from apps.analysis.translate import ConstraintSystem, build_system


@dataclass(frozen=True)
class NumericLevelMap:
    """
    数值代价的区域划分：第一个下界为 0，最后一个区域向上无界

    每个区域为 (下界, 级别, 是否开下界)；from 行给出闭下界，above 行给出开下界。
    """
    lattice: FiniteLattice
    regions: tuple[tuple[Fraction, str, bool], ...]

    def level(self, k: CostValue) -> str:
        value = Fraction(k)
        result = self.regions[0][1]
        for threshold, sigma, strict in self.regions:
            if value < threshold or (strict and value == threshold):
                break
            result = sigma
        return result

    def threshold_for(self, required: str) -> Optional[Fraction]:
        """级别不低于 required 的最低区域下界"""
        for threshold, sigma, _ in self.regions:
            if self.lattice.leq(required, sigma):
                return threshold
        return None


@dataclass(frozen=True)
class SymbolicLevelMap:
    """符号代价到安全级别的全表"""
    lattice: FiniteLattice
    table: Mapping[str, str]

    def level(self, k: CostValue) -> str:
        return self.table[str(k)]

    def threshold_for(self, required: str) -> Optional[Fraction]:
        return None


LevelMap = NumericLevelMap | SymbolicLevelMap


@dataclass(frozen=True)
class SecurityMap:
    """标签到安全级别的部分映射"""
    lattice: FiniteLattice
    levels: Mapping[int, str]


@dataclass(frozen=True)
class LabelReport:
    label: int
    verdict: Literal["pass", "inversion"]
    required: str
    deployed: Optional[str] = None
    unreachable: bool = False
    minimal: tuple[PricedAttack, ...] = ()
    gap: Optional[Fraction] = None


@dataclass(frozen=True)
class ArchitectureReport:
    entries: tuple[LabelReport, ...] = field(default_factory=tuple)

    @property
    def inversions(self) -> list[LabelReport]:
        return [entry for entry in self.entries if entry.verdict == "inversion"]


def level(k: CostValue, lm: LevelMap) -> str:
    """代价所在区域的安全级别"""
    return lm.level(k)


def _deployed(minima: Iterable[PricedAttack], lm: LevelMap) -> str:
    return lm.lattice.meet_all(level(entry.cost, lm) for entry in minima)


def deployed_protection(sys: ConstraintSystem, m: CostMap, lm: LevelMap) -> str:
    """
    部署的保护级别：全部最小代价攻击级别的最大下界

    Raises:
        UnsatisfiableError: 标签不可达
    """
    return _deployed(minimal_attacks(sys, m), lm)


def check_architecture(
    p: Process,
    queries: Iterable[int],
    m: CostMap,
    lm: LevelMap,
    sm: SecurityMap,
) -> ArchitectureReport:
    """
    检查每个查询标签是否存在保护倒置

    Args:
        p: 进程
        queries: 查询标签
        m: 代价映射
        lm: 级别映射
        sm: 安全映射

    Returns:
        ArchitectureReport: 按标签排序的逐项结论

    Raises:
        UnknownLabelError: 标签不在进程中
        ConfigError: 安全映射未给出该标签的级别
    """
    known = set(labels(p))
    entries: list[LabelReport] = []
    for label in sorted(set(queries)):
        if label not in known:
            raise UnknownLabelError(label)
        if label not in sm.levels:
            raise ConfigError(f"no security level for label {label}")
        required = sm.levels[label]
        try:
            minima = minimal_attacks(build_system(p, label), m)
        except UnsatisfiableError:
            logger.warning(f"标签 {label} 不可达，检查视为通过")
            entries.append(LabelReport(label=label, verdict="pass", required=required, unreachable=True))
            continue

        deployed = _deployed(minima, lm)
        if sm.lattice.leq(required, deployed):
            entries.append(LabelReport(label, "pass", required, deployed, minimal=tuple(minima)))
            continue

        gap: Optional[Fraction] = None
        threshold = lm.threshold_for(required)
        if isinstance(m.structure, NumericCost) and threshold is not None:
            gap = threshold - min(Fraction(entry.cost) for entry in minima)
        logger.warning(f"标签 {label} 存在保护倒置：要求 {required}，实际 {deployed}")
        entries.append(LabelReport(label, "inversion", required, deployed, minimal=tuple(minima), gap=gap))
    return ArchitectureReport(tuple(entries))


def _lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _element(lattice: FiniteLattice, name: str, source: Optional[str], lineno: int) -> str:
    if name not in lattice.elements:
        raise ConfigError(f"unknown security level {name!r}", source, lineno)
    return name


_REGION = re.compile(r"^(from|above)\s+(\S+)\s*:\s*(\S+)$")
_ENTRY = re.compile(r"^cost\s+(\S+)\s*:\s*(\S+)$")
_LABEL = re.compile(r"^label\s+([0-9]+)\s*:\s*(\S+)$")


def parse_level_map(
    text: str,
    structure: CostStructure,
    lattice: FiniteLattice,
    source: Optional[str] = None,
) -> LevelMap:
    """
    解析级别映射文件

    数值代价使用 `from <下界> : <级别>`（k ≥ 下界）或 `above <下界> : <级别>`（k > 下界）行，
    第一行必须是 `from 0`；符号代价使用 `cost <元素> : <级别>` 行，必须覆盖全部元素。两者都必须单调。

    Raises:
        ConfigError: 格式错误、区域未覆盖代价集合或映射不单调
    """
    if isinstance(structure, NumericCost):
        regions: list[tuple[Fraction, str, bool]] = []
        for lineno, line in _lines(text):
            match = _REGION.match(line)
            if not match:
                raise ConfigError(f"expected 'from|above <value> : <level>' but found {line!r}", source, lineno)
            try:
                threshold = structure.parse(match.group(2))
            except ValueError as exc:
                raise ConfigError(str(exc), source, lineno) from exc
            strict = match.group(1) == "above"
            sigma = _element(lattice, match.group(3), source, lineno)
            # (下界, 开闭) 按字典序严格递增，同一下界上 from 在 above 之前
            if regions and (threshold, strict) <= regions[-1][::2]:
                raise ConfigError("region thresholds must increase strictly", source, lineno)
            if regions and not lattice.leq(regions[-1][1], sigma):
                raise ConfigError(f"level map is not monotone at {match.group(2)}", source, lineno)
            regions.append((threshold, sigma, strict))
        if not regions or regions[0][0] != 0 or regions[0][2]:
            raise ConfigError("regions must start with 'from 0'", source)
        return NumericLevelMap(lattice, tuple(regions))

    if not isinstance(structure, SymbolicCost):
        raise ConfigError(f"unsupported cost structure {type(structure).__name__}", source)
    costs = structure.lattice
    table: dict[str, str] = {}
    for lineno, line in _lines(text):
        match = _ENTRY.match(line)
        if not match:
            raise ConfigError(f"expected 'cost <element> : <level>' but found {line!r}", source, lineno)
        if match.group(1) not in costs.elements:
            raise ConfigError(f"unknown cost element {match.group(1)!r}", source, lineno)
        table[match.group(1)] = _element(lattice, match.group(2), source, lineno)
    missing = [k for k in costs.elements if k not in table]
    if missing:
        raise ConfigError(f"level map misses cost elements: {', '.join(missing)}", source)
    for a in costs.elements:
        for b in costs.elements:
            if costs.leq(a, b) and not lattice.leq(table[a], table[b]):
                raise ConfigError(f"level map is not monotone: {a} ⊑ {b}", source)
    return SymbolicLevelMap(lattice, table)


def parse_security_map(text: str, lattice: FiniteLattice, source: Optional[str] = None) -> SecurityMap:
    """解析 `label <int> : <level>` 行"""
    levels: dict[int, str] = {}
    for lineno, line in _lines(text):
        match = _LABEL.match(line)
        if not match:
            raise ConfigError(f"expected 'label <int> : <level>' but found {line!r}", source, lineno)
        levels[int(match.group(1))] = _element(lattice, match.group(2), source, lineno)
    return SecurityMap(lattice, levels)


__all__ = [
    "NumericLevelMap",
    "SymbolicLevelMap",
    "LevelMap",
    "SecurityMap",
    "LabelReport",
    "ArchitectureReport",
    "level",
    "deployed_protection",
    "check_architecture",
    "parse_level_map",
    "parse_security_map",
]
