# -*- coding: utf-8 -*-
"""
攻击树合成

对蕴含视图 P⇒l 做反向链接，得到只含信道文字的公式 ⟦l⟧；其语法树即攻击树。
目标环境 D 沿递归路径局部传递，不在分支之间共享。
"""

from dataclasses import dataclass
from typing import Literal as Kind, Mapping, Optional

from graphviz import Digraph

from core.exceptions import MissingRuleError, NonChannelAtomError
from core.logger import logger
from apps.analysis.logic import (
    FF,
    TT,
    And,
    Atom,
    Chan,
    Ff,
    Formula,
    Iff,
    Implies,
    InVar,
    Lab,
    Literal,
    Not,
    Or,
    Tt,
    conj,
    disj,
    nnf,
)
from apps.analysis.translate import FlowRule

# 目标环境中的带符号信道文字：(名字, 是否为正)
GoalEnv = frozenset[tuple[str, bool]]


class _Synthesizer:
    def __init__(self, rules: Mapping[Literal, FlowRule]) -> None:
        self.rules = rules

    def unfold(self, f: Formula, env: GoalEnv, positive: bool = True) -> Formula:
        """⟦f⟧(D)；positive 为假时展开 ⟦¬f⟧(D)"""
        if isinstance(f, Tt):
            return TT if positive else FF
        if isinstance(f, Ff):
            return FF if positive else TT
        if isinstance(f, Not):
            return self.unfold(f.arg, env, not positive)
        if isinstance(f, And):
            parts = [self.unfold(arg, env, positive) for arg in f.args]
            return conj(*parts) if positive else disj(*parts)
        if isinstance(f, Or):
            parts = [self.unfold(arg, env, positive) for arg in f.args]
            return disj(*parts) if positive else conj(*parts)
        if isinstance(f, (Implies, Iff)):
            return self.unfold(nnf(f), env, positive)
        lit = f.lit
        if isinstance(lit, Chan):
            return self.channel(lit, env, positive)
        if isinstance(lit, InVar):
            rule = self.rules.get(lit)
            if rule is None:
                raise MissingRuleError(lit)
            return self.unfold(rule.antecedent, env, positive)
        raise NonChannelAtomError(lit)

    def channel(self, lit: Chan, env: GoalEnv, positive: bool) -> Formula:
        leaf: Formula = Atom(lit) if positive else Not(Atom(lit))
        rule = self.rules.get(lit)
        goal = (lit.name, positive)
        if rule is None or goal in env:
            return leaf
        rest = self.unfold(rule.antecedent, env | {goal}, positive)
        # Pone-c: c ∨ ⟦φ⟧；Tolle-c: ¬c ∧ ⟦¬φ⟧
        return disj(leaf, rest) if positive else conj(leaf, rest)


def synthesize(rules: Mapping[Literal, FlowRule], query: int) -> Formula:
    """
    由蕴含视图合成 ⟦query⟧

    Args:
        rules: implication_view 的结果
        query: 查询标签

    Returns:
        Formula: 只含信道文字，常量已折叠

    Raises:
        MissingRuleError: 查询标签或输入变量没有定义规则
    """
    rule = rules.get(Lab(query))
    if rule is None:
        raise MissingRuleError(Lab(query))
    result = _Synthesizer(rules).unfold(rule.antecedent, frozenset())
    logger.debug(f"标签 {query} 的攻击树公式合成完成")
    return result


@dataclass(frozen=True)
class TreeNode:
    """攻击树节点：and/or 内部节点，leaf 叶子，true/false 仅作为常量根"""
    kind: Kind["and", "or", "leaf", "true", "false"]
    children: tuple["TreeNode", ...] = ()
    name: Optional[str] = None
    negated: bool = False


def parse_tree(f: Formula) -> TreeNode:
    """
    把否定范式的信道公式转为语法树，同类节点展平、常量折叠

    Raises:
        NonChannelAtomError: 出现非信道文字
    """
    folded = _fold(f)
    if isinstance(folded, Tt):
        return TreeNode("true")
    if isinstance(folded, Ff):
        return TreeNode("false")
    return _node(folded)


def _fold(f: Formula) -> Formula:
    if isinstance(f, And):
        return conj(*(_fold(arg) for arg in f.args))
    if isinstance(f, Or):
        return disj(*(_fold(arg) for arg in f.args))
    if isinstance(f, (Implies, Iff)):
        return _fold(nnf(f))
    if isinstance(f, Not) and not isinstance(f.arg, Atom):
        return _fold(nnf(f))
    return f


def _node(f: Formula) -> TreeNode:
    if isinstance(f, And):
        return TreeNode("and", tuple(_node(arg) for arg in f.args))
    if isinstance(f, Or):
        return TreeNode("or", tuple(_node(arg) for arg in f.args))
    negated = isinstance(f, Not)
    target = f.arg if isinstance(f, Not) else f
    if not isinstance(target, Atom) or not isinstance(target.lit, Chan):
        raise NonChannelAtomError(target.lit if isinstance(target, Atom) else target)
    return TreeNode("leaf", name=target.lit.name, negated=negated)


def to_dot(t: TreeNode, title: str) -> str:
    """
    输出 DOT 有向图；节点编号为先序序号

    Args:
        t: 攻击树
        title: 图标题

    Returns:
        str: DOT 源文本
    """
    dot = Digraph(name="attack_tree", comment=title)
    dot.attr(label=title, labelloc="t")
    counter = 0

    def visit(node: TreeNode) -> str:
        nonlocal counter
        node_id = f"n{counter}"
        counter += 1
        if node.kind in ("and", "or"):
            dot.node(node_id, label=node.kind.upper(), shape="circle")
            for child in node.children:
                dot.edge(node_id, visit(child))
        elif node.kind == "leaf":
            text = f"NOT {node.name}" if node.negated else str(node.name)
            dot.node(node_id, label=text, shape="box")
        else:
            dot.node(node_id, label=node.kind.upper(), shape="plaintext")
        return node_id

    visit(t)
    return dot.source


__all__ = ["GoalEnv", "synthesize", "TreeNode", "parse_tree", "to_dot"]
