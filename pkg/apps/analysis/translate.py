# -*- coding: utf-8 -*-
"""
从进程到流约束的翻译、规范化与攻击者增广

每条规则 φ ⇝ p 表示：若 φ 成立则可得信道 p、输入变量 p 被绑定或到达标签 p。
"""

from dataclasses import dataclass
from typing import Iterable, Mapping

from core.exceptions import UnknownLabelError
from core.logger import logger
from apps.calculus.ast import (
    Bind,
    Binder,
    Guard,
    Input,
    Nil,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    names,
)
from apps.analysis.logic import (
    TT,
    And,
    Atom,
    Chan,
    Formula,
    Guess,
    Iff,
    InVar,
    Lab,
    Literal,
    Or,
    atoms,
    conj,
    disj,
    neg,
    occurrences,
)


@dataclass(frozen=True)
class FlowRule:
    """流约束 antecedent ⇝ consequent"""
    antecedent: Formula
    consequent: Literal


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """
    增广后的约束系统 P⇔l

    rules 中每个结论恰好一条规则，规则读作双蕴含；Lab(query) 为事实。
    """
    rules: Mapping[Literal, FlowRule]
    query: int
    universe: frozenset[str]

    @property
    def fact(self) -> Formula:
        return Atom(Lab(self.query))

    def guesses(self) -> list[Guess]:
        return [Guess(name) for name in sorted(self.universe)]

    def formula(self) -> Formula:
        """整个系统的合取公式"""
        parts: list[Formula] = [
            Iff(rule.antecedent, Atom(rule.consequent)) for rule in self.rules.values()
        ]
        parts.append(self.fact)
        return And(tuple(parts))


def hp(b: Binder) -> Formula:
    """绑定器被满足的假设：∀ 取合取，∃ 取析取"""
    if isinstance(b, Input):
        return Atom(Chan(b.channel))
    parts = [hp(sub) for sub in b.subs]
    return conj(*parts) if b.guard is Guard.FORALL else disj(*parts)


def th(phi: Formula, b: Binder) -> list[FlowRule]:
    """输入变量的绑定规则 (φ ∧ c) ⇝ x"""
    if isinstance(b, Input):
        return [FlowRule(conj(phi, Atom(Chan(b.channel))), InVar(b.var))]
    rules: list[FlowRule] = []
    for sub in b.subs:
        rules.extend(th(phi, sub))
    return rules


def translate(p: Process, phi: Formula = TT) -> list[FlowRule]:
    """
    把进程翻译为流约束列表

    限制与复制在翻译中被忽略；初始假设为 tt。

    Args:
        p: 良构进程
        phi: 当前假设

    Returns:
        list[FlowRule]: 按源码顺序排列的规则
    """
    if isinstance(p, Nil):
        return []
    if isinstance(p, (Restrict, Repl)):
        return translate(p.body, phi)
    if isinstance(p, Par):
        return translate(p.left, phi) + translate(p.right, phi)
    if isinstance(p, Bind):
        return (
            [FlowRule(phi, Lab(p.label))]
            + th(phi, p.binder)
            + translate(p.body, conj(phi, hp(p.binder)))
        )
    if isinstance(p, Output):
        return (
            [FlowRule(phi, Lab(p.label)), FlowRule(phi, Chan(p.channel))]
            + translate(p.body, phi)
        )
    x = Atom(InVar(p.scrutinee))
    return (
        [FlowRule(phi, Lab(p.label))]
        + translate(p.then, conj(phi, x))
        + translate(p.else_, conj(phi, neg(x)))
    )


def literal_count(rules: Iterable[FlowRule]) -> int:
    """约束规模：前件的原子出现次数加上结论"""
    return sum(occurrences(rule.antecedent) + 1 for rule in rules)


def normalize(rules: Iterable[FlowRule]) -> dict[Literal, FlowRule]:
    """同一结论的多条规则按源码顺序合并为析取"""
    grouped: dict[Literal, list[Formula]] = {}
    for rule in rules:
        grouped.setdefault(rule.consequent, []).append(rule.antecedent)
    return {
        consequent: FlowRule(antecedents[0] if len(antecedents) == 1 else disj(*antecedents), consequent)
        for consequent, antecedents in grouped.items()
    }


def _channels(rules: Mapping[Literal, FlowRule]) -> set[str]:
    found: set[str] = set()
    for consequent, rule in rules.items():
        if isinstance(consequent, Chan):
            found.add(consequent.name)
        found |= {lit.name for lit in atoms(rule.antecedent) if isinstance(lit, Chan)}
    return found


def augment(
    rules: Iterable[FlowRule] | Mapping[Literal, FlowRule],
    query: int,
    universe: Iterable[str] | None = None,
) -> ConstraintSystem:
    """
    攻击者增广：信道规则前件变为 g_c ∨ φ，无规则的信道得到 g_c ⇝ c

    Args:
        rules: 规范化后的规则映射（也接受未规范化的列表）
        query: 查询标签
        universe: 名字全集，缺省为规则中出现的信道

    Raises:
        UnknownLabelError: 查询标签不在进程中
    """
    normalized = dict(rules) if isinstance(rules, Mapping) else normalize(rules)
    if Lab(query) not in normalized:
        raise UnknownLabelError(query)
    names_ = frozenset(universe) if universe is not None else frozenset(_channels(normalized))

    augmented: dict[Literal, FlowRule] = {}
    for consequent, rule in normalized.items():
        if isinstance(consequent, Chan):
            rest = rule.antecedent.args if isinstance(rule.antecedent, Or) else (rule.antecedent,)
            rule = FlowRule(Or((Atom(Guess(consequent.name)),) + tuple(rest)), consequent)
        augmented[consequent] = rule
    for name in sorted(names_):
        if Chan(name) not in augmented:
            augmented[Chan(name)] = FlowRule(Atom(Guess(name)), Chan(name))

    logger.debug(f"增广完成：查询标签 {query}，{len(augmented)} 条双蕴含，{len(names_)} 个名字")
    return ConstraintSystem(rules=augmented, query=query, universe=names_)


def build_system(p: Process, query: int) -> ConstraintSystem:
    """翻译、规范化并增广，名字全集取 names(p)"""
    rules = translate(p)
    logger.debug(f"翻译得到 {len(rules)} 条流约束，规模 {literal_count(rules)}")
    return augment(normalize(rules), query, names(p))


def implication_view(sys: ConstraintSystem) -> dict[Literal, FlowRule]:
    """
    蕴含视图 P⇒l：删去猜测析取项，仅由猜测定义的信道不再有规则
    """
    view: dict[Literal, FlowRule] = {}
    for consequent, rule in sys.rules.items():
        antecedent = rule.antecedent
        if isinstance(consequent, Chan):
            guess = Atom(Guess(consequent.name))
            args = antecedent.args if isinstance(antecedent, Or) else (antecedent,)
            rest = tuple(arg for arg in args if arg != guess)
            if not rest:
                continue
            antecedent = rest[0] if len(rest) == 1 else Or(rest)
        view[consequent] = FlowRule(antecedent, consequent)
    return view


__all__ = [
    "FlowRule",
    "ConstraintSystem",
    "hp",
    "th",
    "translate",
    "literal_count",
    "normalize",
    "augment",
    "build_system",
    "implication_view",
]
