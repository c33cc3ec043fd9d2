# -*- coding: utf-8 -*-
"""
值传递质量演算的抽象语法

进程、绑定器与项均为不可变的数据类，结构相等即语法相等。
"""

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, TypeAlias, Union

# 信道/常量名、输入变量、项变量共享同一词法类
IDENTIFIER = re.compile(r"^[a-zA-Z_][a-zA-Z0-9_']*$")

# 具体语法的保留字，不能用作名字或变量
KEYWORDS = frozenset({"new", "case", "of", "some", "else", "end", "forall", "exists"})

Name: TypeAlias = str
InVarId: TypeAlias = str
TermVarId: TypeAlias = str
LabelId: TypeAlias = int


class Guard(str, Enum):
    """质量守卫"""
    FORALL = "forall"
    EXISTS = "exists"


@dataclass(frozen=True)
class Input:
    """简单输入 c?x"""
    channel: Name
    var: InVarId


@dataclass(frozen=True)
class Quality:
    """质量绑定器 &q(b1, ..., bn)"""
    guard: Guard
    subs: tuple["Binder", ...]


Binder: TypeAlias = Union[Input, Quality]


@dataclass(frozen=True)
class Const:
    name: Name


@dataclass(frozen=True)
class Var:
    name: TermVarId


Term: TypeAlias = Union[Const, Var]


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Restrict:
    name: Name
    body: "Process"


@dataclass(frozen=True)
class Par:
    left: "Process"
    right: "Process"


@dataclass(frozen=True)
class Bind:
    label: LabelId
    binder: Binder
    body: "Process"


@dataclass(frozen=True)
class Output:
    label: LabelId
    channel: Name
    payload: Term
    body: "Process"


@dataclass(frozen=True)
class Repl:
    body: "Process"


@dataclass(frozen=True)
class Case:
    label: LabelId
    scrutinee: InVarId
    yvar: TermVarId
    then: "Process"
    else_: "Process"


Process: TypeAlias = Union[Nil, Restrict, Par, Bind, Output, Repl, Case]


@dataclass(frozen=True)
class ValidationReport:
    """良构性校验报告"""
    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations


def inputs(b: Binder) -> Iterator[Input]:
    """按从左到右顺序列出绑定器中的简单输入"""
    if isinstance(b, Input):
        yield b
    else:
        for sub in b.subs:
            yield from inputs(sub)


def children(p: Process) -> tuple[Process, ...]:
    if isinstance(p, (Restrict, Repl, Bind, Output)):
        return (p.body,)
    if isinstance(p, Par):
        return (p.left, p.right)
    if isinstance(p, Case):
        return (p.then, p.else_)
    return ()


def labels(p: Process) -> list[LabelId]:
    """按先序列出全部标签（含重复）"""
    found: list[LabelId] = []
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, (Bind, Output, Case)):
            found.append(node.label)
        stack.extend(reversed(children(node)))
    return found


def _binder_names(b: Binder) -> set[Name]:
    return {i.channel for i in inputs(b)}


def _term_names(t: Term) -> set[Name]:
    return {t.name} if isinstance(t, Const) else set()


def names(p: Process) -> set[Name]:
    """
    进程中出现的全部名字（无论是否受限）

    Args:
        p: 进程

    Returns:
        set[Name]: 名字集合
    """
    if isinstance(p, Restrict):
        return {p.name} | names(p.body)
    if isinstance(p, Bind):
        return _binder_names(p.binder) | names(p.body)
    if isinstance(p, Output):
        return {p.channel} | _term_names(p.payload) | names(p.body)
    result: set[Name] = set()
    for child in children(p):
        result |= names(child)
    return result


def free_names(p: Process) -> set[Name]:
    """不在同名限制之下出现的名字"""
    if isinstance(p, Restrict):
        return free_names(p.body) - {p.name}
    if isinstance(p, Bind):
        return _binder_names(p.binder) | free_names(p.body)
    if isinstance(p, Output):
        return {p.channel} | _term_names(p.payload) | free_names(p.body)
    result: set[Name] = set()
    for child in children(p):
        result |= free_names(child)
    return result


def validate(p: Process) -> ValidationReport:
    """
    校验标签唯一、变量恰好绑定一次以及进程封闭

    Args:
        p: 顶层进程

    Returns:
        ValidationReport: 违规项为数据而非异常
    """
    violations: list[str] = []
    seen_labels: set[LabelId] = set()
    bound_x: set[InVarId] = set()
    bound_y: set[TermVarId] = set()

    def check_name(kind: str, text: str) -> None:
        if not IDENTIFIER.match(text) or text in KEYWORDS:
            violations.append(f"malformed {kind} {text!r}")

    def visit(node: Process, xs: frozenset[InVarId], ys: frozenset[TermVarId]) -> None:
        if isinstance(node, (Bind, Output, Case)):
            if node.label <= 0:
                violations.append(f"label {node.label} is not positive")
            elif node.label in seen_labels:
                violations.append(f"duplicate label {node.label}")
            seen_labels.add(node.label)

        if isinstance(node, Restrict):
            check_name("name", node.name)
            visit(node.body, xs, ys)
        elif isinstance(node, Bind):
            introduced: list[InVarId] = []
            for leaf in inputs(node.binder):
                check_name("name", leaf.channel)
                check_name("variable", leaf.var)
                if leaf.var in bound_x:
                    violations.append(f"variable {leaf.var} bound more than once")
                bound_x.add(leaf.var)
                introduced.append(leaf.var)
            _check_quality(node.binder, violations)
            visit(node.body, xs | frozenset(introduced), ys)
        elif isinstance(node, Output):
            check_name("name", node.channel)
            if isinstance(node.payload, Var):
                if node.payload.name not in ys:
                    violations.append(f"unbound variable {node.payload.name}")
            else:
                check_name("name", node.payload.name)
                if node.payload.name in ys:
                    violations.append(f"constant {node.payload.name} shadows a case variable")
            visit(node.body, xs, ys)
        elif isinstance(node, Case):
            if node.scrutinee not in xs:
                violations.append(f"unbound variable {node.scrutinee}")
            check_name("variable", node.yvar)
            if node.yvar in bound_y:
                violations.append(f"variable {node.yvar} bound more than once")
            bound_y.add(node.yvar)
            visit(node.then, xs, ys | {node.yvar})
            visit(node.else_, xs, ys)
        else:
            for child in children(node):
                visit(child, xs, ys)

    visit(p, frozenset(), frozenset())
    return ValidationReport(violations=tuple(violations))


def _check_quality(b: Binder, violations: list[str]) -> None:
    if isinstance(b, Quality):
        if not b.subs:
            violations.append("quality binder without sub-binders")
        for sub in b.subs:
            _check_quality(sub, violations)


def strip(p: Process) -> Process:
    """删除全部限制与复制结构"""
    if isinstance(p, (Restrict, Repl)):
        return strip(p.body)
    if isinstance(p, Par):
        return Par(strip(p.left), strip(p.right))
    if isinstance(p, Bind):
        return Bind(p.label, p.binder, strip(p.body))
    if isinstance(p, Output):
        return Output(p.label, p.channel, p.payload, strip(p.body))
    if isinstance(p, Case):
        return Case(p.label, p.scrutinee, p.yvar, strip(p.then), strip(p.else_))
    return p


__all__ = [
    "IDENTIFIER", "KEYWORDS", "Name", "InVarId", "TermVarId", "LabelId",
    "Guard", "Input", "Quality", "Binder", "Const", "Var", "Term",
    "Nil", "Restrict", "Par", "Bind", "Output", "Repl", "Case", "Process",
    "ValidationReport", "inputs", "children", "labels", "names", "free_names",
    "validate", "strip",
]
