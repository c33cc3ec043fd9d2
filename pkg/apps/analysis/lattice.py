# -*- coding: utf-8 -*-
"""
有限格：代价结构与安全格共用

文件格式（UTF-8，逐行，# 开始注释）::

    elements: cheap, cpu, enrg, expensive
    bottom: cheap
    top: expensive
    leq: cheap < cpu < expensive
    plus: cpu + enrg = expensive

leq 给出覆盖关系，序为其自反传递闭包；plus 条目显式给出 ⊕，未列出的组合取最小上界。
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional

from core.exceptions import ConfigError


@dataclass(frozen=True)
class LatticeReport:
    """格公理检查报告，只记录第一个违规"""
    violation: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.violation is None


@dataclass(frozen=True)
class FiniteLattice:
    elements: tuple[str, ...]
    order: frozenset[tuple[str, str]]
    bottom: Optional[str] = None
    top: Optional[str] = None
    plus: Mapping[tuple[str, str], str] = field(default_factory=dict)

    @classmethod
    def from_relations(
        cls,
        elements: Iterable[str],
        leq: Iterable[tuple[str, str]],
        bottom: Optional[str] = None,
        top: Optional[str] = None,
        plus: Optional[Mapping[tuple[str, str], str]] = None,
    ) -> "FiniteLattice":
        """由覆盖关系计算自反传递闭包"""
        carrier = tuple(dict.fromkeys(elements))
        order = {(e, e) for e in carrier} | set(leq)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(list(order), repeat=2):
                if b == c and (a, d) not in order:
                    order.add((a, d))
                    changed = True
        return cls(carrier, frozenset(order), bottom, top, dict(plus or {}))

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    def lt(self, a: str, b: str) -> bool:
        return a != b and self.leq(a, b)

    def _least(self, candidates: list[str]) -> list[str]:
        return [c for c in candidates if all(self.leq(c, other) for other in candidates)]

    def _greatest(self, candidates: list[str]) -> list[str]:
        return [c for c in candidates if all(self.leq(other, c) for other in candidates)]

    def lub_candidates(self, a: str, b: str) -> list[str]:
        upper = [e for e in self.elements if self.leq(a, e) and self.leq(b, e)]
        return self._least(upper)

    def glb_candidates(self, a: str, b: str) -> list[str]:
        lower = [e for e in self.elements if self.leq(e, a) and self.leq(e, b)]
        return self._greatest(lower)

    def join(self, a: str, b: str) -> str:
        candidates = self.lub_candidates(a, b)
        if len(candidates) != 1:
            raise ConfigError(f"lub missing: {a}, {b}")
        return candidates[0]

    def meet(self, a: str, b: str) -> str:
        candidates = self.glb_candidates(a, b)
        if len(candidates) != 1:
            raise ConfigError(f"glb missing: {a}, {b}")
        return candidates[0]

    def combine(self, a: str, b: str) -> str:
        """⊕：显式条目优先，否则取最小上界"""
        if (a, b) in self.plus:
            return self.plus[(a, b)]
        if (b, a) in self.plus:
            return self.plus[(b, a)]
        return self.join(a, b)

    def meet_all(self, values: Iterable[str]) -> str:
        result: Optional[str] = None
        for value in values:
            result = value if result is None else self.meet(result, value)
        if result is None:
            if self.top is None:
                raise ConfigError("empty meet without a top element")
            return self.top
        return result


def validate_lattice(lattice: FiniteLattice) -> LatticeReport:
    """
    在有限载体上穷举检查：偏序、最小上界与最大下界的存在唯一性、⊥ 与 ⊤、
    ⊥ 为 ⊕ 的单位元、⊕ 的交换律结合律、扩张性、单调性、⊕ 等于最小上界

    Args:
        lattice: 待检查的格

    Returns:
        LatticeReport: 第一个违规项
    """
    elements = lattice.elements
    pairs = list(product(elements, repeat=2))

    for a, b in pairs:
        if a != b and lattice.leq(a, b) and lattice.leq(b, a):
            return LatticeReport(f"order not antisymmetric: {a}, {b}")

    for a, b in pairs:
        lubs = lattice.lub_candidates(a, b)
        if len(lubs) != 1:
            return LatticeReport(f"lub missing: {a}, {b}")
        if len(lattice.glb_candidates(a, b)) != 1:
            return LatticeReport(f"glb missing: {a}, {b}")

    if lattice.bottom is None or lattice.bottom not in elements:
        return LatticeReport("bottom missing")
    if not all(lattice.leq(lattice.bottom, e) for e in elements):
        return LatticeReport(f"bottom not least: {lattice.bottom}")
    if lattice.top is not None and not all(lattice.leq(e, lattice.top) for e in elements):
        return LatticeReport(f"top not greatest: {lattice.top}")

    for k in elements:
        if lattice.combine(k, lattice.bottom) != k or lattice.combine(lattice.bottom, k) != k:
            return LatticeReport(f"⊥ not identity: {k}")

    for a, b in pairs:
        if lattice.combine(a, b) not in elements:
            return LatticeReport(f"⊕ leaves the carrier: {a}, {b}")
        if lattice.combine(a, b) != lattice.combine(b, a):
            return LatticeReport(f"⊕ not commutative: {a}, {b}")
    for a, b, c in product(elements, repeat=3):
        if lattice.combine(lattice.combine(a, b), c) != lattice.combine(a, lattice.combine(b, c)):
            return LatticeReport(f"⊕ not associative: {a}, {b}, {c}")

    for a, b in pairs:
        total = lattice.combine(a, b)
        if not (lattice.leq(a, total) and lattice.leq(b, total)):
            return LatticeReport(f"⊕ not extensive: {a}, {b}")
    for a, b, c in product(elements, repeat=3):
        if lattice.leq(a, b) and not lattice.leq(lattice.combine(a, c), lattice.combine(b, c)):
            return LatticeReport(f"⊕ not monotone: {a} ⊑ {b} with {c}")

    for a, b in pairs:
        if lattice.combine(a, b) != lattice.join(a, b):
            return LatticeReport(f"⊕ differs from lub: {a}, {b}")
    return LatticeReport()


def _split(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def parse_lattice(text: str, source: Optional[str] = None) -> FiniteLattice:
    """
    解析格文件

    Raises:
        ConfigError: 未知指令、未声明的元素或缺少 elements/bottom
    """
    elements: list[str] = []
    leq: list[tuple[str, str]] = []
    plus: dict[tuple[str, str], str] = {}
    bottom: Optional[str] = None
    top: Optional[str] = None

    def known(name: str, lineno: int) -> str:
        if name not in elements:
            raise ConfigError(f"undeclared lattice element {name!r}", source, lineno)
        return name

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise ConfigError(f"expected 'key: value' but found {line!r}", source, lineno)
        key, value = key.strip(), value.strip()
        if key == "elements":
            elements.extend(_split(value))
        elif key == "bottom":
            bottom = known(value, lineno)
        elif key == "top":
            top = known(value, lineno)
        elif key == "leq":
            chain = [known(part.strip(), lineno) for part in value.split("<")]
            if len(chain) < 2:
                raise ConfigError(f"leq needs at least two elements: {value!r}", source, lineno)
            leq.extend(zip(chain, chain[1:]))
        elif key == "plus":
            lhs, eq, result = value.partition("=")
            operands = [part.strip() for part in lhs.split("+")]
            if not eq or len(operands) != 2:
                raise ConfigError(f"expected 'x + y = z' but found {value!r}", source, lineno)
            plus[(known(operands[0], lineno), known(operands[1], lineno))] = known(result.strip(), lineno)
        else:
            raise ConfigError(f"unknown lattice directive {key!r}", source, lineno)

    if not elements:
        raise ConfigError("lattice declares no elements", source)
    if bottom is None:
        raise ConfigError("lattice declares no bottom", source)
    return FiniteLattice.from_relations(elements, leq, bottom, top, plus)


__all__ = ["LatticeReport", "FiniteLattice", "validate_lattice", "parse_lattice"]
