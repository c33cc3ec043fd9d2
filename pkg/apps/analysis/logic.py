# -*- coding: utf-8 -*-
"""
四类文字上的命题公式

文字：信道 chan:c、猜测 guess:c、输入变量 var:x、标签 lab:l。
"""

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, TypeAlias, Union

from core.exceptions import DomainTooLargeError, MissingLiteralError


@dataclass(frozen=True, order=True)
class Chan:
    name: str

    def __str__(self) -> str:
        return f"chan:{self.name}"


@dataclass(frozen=True, order=True)
class Guess:
    name: str

    def __str__(self) -> str:
        return f"guess:{self.name}"


@dataclass(frozen=True, order=True)
class InVar:
    name: str

    def __str__(self) -> str:
        return f"var:{self.name}"


@dataclass(frozen=True, order=True)
class Lab:
    label: int

    def __str__(self) -> str:
        return f"lab:{self.label}"


Literal: TypeAlias = Union[Chan, Guess, InVar, Lab]

_KIND_ORDER = {Chan: 0, Lab: 1, InVar: 2, Guess: 3}


def literal_key(lit: Literal) -> tuple:
    """固定的文字顺序：按类别再按名字，猜测文字排最后"""
    if isinstance(lit, Lab):
        return (_KIND_ORDER[Lab], f"{lit.label:012d}")
    return (_KIND_ORDER[type(lit)], lit.name)


@dataclass(frozen=True)
class Tt:
    pass


@dataclass(frozen=True)
class Ff:
    pass


@dataclass(frozen=True)
class Atom:
    lit: Literal


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Iff:
    lhs: "Formula"
    rhs: "Formula"


Formula: TypeAlias = Union[Tt, Ff, Atom, Not, And, Or, Implies, Iff]
Assignment: TypeAlias = Mapping[Literal, bool]

TT = Tt()
FF = Ff()


def atom(lit: Literal) -> Atom:
    return Atom(lit)


def conj(*parts: Formula) -> Formula:
    """
    合取的智能构造：展平、消去 tt、ff 吸收、去重

    Args:
        parts: 合取项

    Returns:
        Formula: 单个合取项时返回其本身，空合取为 tt
    """
    args: list[Formula] = []
    for part in parts:
        if isinstance(part, Ff):
            return FF
        if isinstance(part, Tt):
            continue
        for item in (part.args if isinstance(part, And) else (part,)):
            if item not in args:
                args.append(item)
    if not args:
        return TT
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*parts: Formula) -> Formula:
    """析取的智能构造，与 conj 对偶"""
    args: list[Formula] = []
    for part in parts:
        if isinstance(part, Tt):
            return TT
        if isinstance(part, Ff):
            continue
        for item in (part.args if isinstance(part, Or) else (part,)):
            if item not in args:
                args.append(item)
    if not args:
        return FF
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def neg(f: Formula) -> Formula:
    """否定，并折叠常量与双重否定"""
    if isinstance(f, Tt):
        return FF
    if isinstance(f, Ff):
        return TT
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def evaluate(f: Formula, a: Assignment) -> bool:
    """
    经典语义求值

    Raises:
        MissingLiteralError: 赋值未覆盖 f 的某个文字
    """
    if isinstance(f, Tt):
        return True
    if isinstance(f, Ff):
        return False
    if isinstance(f, Atom):
        if f.lit not in a:
            raise MissingLiteralError(f.lit)
        return bool(a[f.lit])
    if isinstance(f, Not):
        return not evaluate(f.arg, a)
    if isinstance(f, And):
        return all(evaluate(arg, a) for arg in f.args)
    if isinstance(f, Or):
        return any(evaluate(arg, a) for arg in f.args)
    if isinstance(f, Implies):
        return (not evaluate(f.lhs, a)) or evaluate(f.rhs, a)
    return evaluate(f.lhs, a) == evaluate(f.rhs, a)


def nnf(f: Formula) -> Formula:
    """否定范式：否定只出现在原子上，消去蕴含与双蕴含"""
    return _nnf(f, positive=True)


def _nnf(f: Formula, positive: bool) -> Formula:
    if isinstance(f, Tt):
        return TT if positive else FF
    if isinstance(f, Ff):
        return FF if positive else TT
    if isinstance(f, Atom):
        return f if positive else Not(f)
    if isinstance(f, Not):
        return _nnf(f.arg, not positive)
    if isinstance(f, And):
        args = tuple(_nnf(arg, positive) for arg in f.args)
        return And(args) if positive else Or(args)
    if isinstance(f, Or):
        args = tuple(_nnf(arg, positive) for arg in f.args)
        return Or(args) if positive else And(args)
    if isinstance(f, Implies):
        return _nnf(Or((Not(f.lhs), f.rhs)), positive)
    both = And((f.lhs, f.rhs))
    neither = And((Not(f.lhs), Not(f.rhs)))
    return _nnf(Or((both, neither)), positive)


def atoms(f: Formula) -> set[Literal]:
    """公式中出现的文字集合"""
    found: set[Literal] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            found.add(node.lit)
        elif isinstance(node, Not):
            stack.append(node.arg)
        elif isinstance(node, (And, Or)):
            stack.extend(node.args)
        elif isinstance(node, (Implies, Iff)):
            stack.extend((node.lhs, node.rhs))
    return found


def occurrences(f: Formula) -> int:
    """原子出现次数（计重复），用于约束规模"""
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Not):
        return occurrences(f.arg)
    if isinstance(f, (And, Or)):
        return sum(occurrences(arg) for arg in f.args)
    if isinstance(f, (Implies, Iff)):
        return occurrences(f.lhs) + occurrences(f.rhs)
    return 0


def assignments(domain: Iterable[Literal]) -> Iterable[dict[Literal, bool]]:
    """按固定顺序枚举给定文字集合上的全部赋值"""
    ordered = sorted(set(domain), key=literal_key)
    for values in product((False, True), repeat=len(ordered)):
        yield dict(zip(ordered, values))


def equivalent(f: Formula, g: Formula, cap: int = 24) -> bool:
    """
    在两公式原子并集上穷举判定逻辑等价

    Raises:
        DomainTooLargeError: 原子数超过 cap
    """
    domain = atoms(f) | atoms(g)
    if len(domain) > cap:
        raise DomainTooLargeError(len(domain), cap)
    return all(evaluate(f, a) == evaluate(g, a) for a in assignments(domain))


def to_prefix(f: Formula) -> str:
    """JSON 输出使用的规范前缀形式"""
    if isinstance(f, Tt):
        return "true"
    if isinstance(f, Ff):
        return "false"
    if isinstance(f, Atom):
        return str(f.lit)
    if isinstance(f, Not):
        return f"(not {to_prefix(f.arg)})"
    if isinstance(f, And):
        return f"(and {' '.join(to_prefix(arg) for arg in f.args)})"
    if isinstance(f, Or):
        return f"(or {' '.join(to_prefix(arg) for arg in f.args)})"
    if isinstance(f, Implies):
        return f"(implies {to_prefix(f.lhs)} {to_prefix(f.rhs)})"
    return f"(iff {to_prefix(f.lhs)} {to_prefix(f.rhs)})"


def _literal_text(lit: Literal) -> str:
    if isinstance(lit, Chan):
        return lit.name
    if isinstance(lit, Guess):
        return f"g_{lit.name}"
    if isinstance(lit, Lab):
        return f"lab{lit.label}"
    return f"x:{lit.name}"


_PRECEDENCE = {Iff: 1, Implies: 2, Or: 3, And: 4}


def render(f: Formula, parent: int = 0) -> str:
    """中缀 ASCII 形式：~ 否定，& 合取，| 析取，-> 蕴含，<-> 双蕴含"""
    if isinstance(f, Tt):
        return "tt"
    if isinstance(f, Ff):
        return "ff"
    if isinstance(f, Atom):
        return _literal_text(f.lit)
    if isinstance(f, Not):
        return f"~{render(f.arg, 5)}"
    level = _PRECEDENCE[type(f)]
    if isinstance(f, And):
        text = " & ".join(render(arg, level) for arg in f.args)
    elif isinstance(f, Or):
        text = " | ".join(render(arg, level) for arg in f.args)
    elif isinstance(f, Implies):
        text = f"{render(f.lhs, level + 1)} -> {render(f.rhs, level)}"
    else:
        text = f"{render(f.lhs, level + 1)} <-> {render(f.rhs, level + 1)}"
    return f"({text})" if level <= parent else text


__all__ = [
    "Chan", "Guess", "InVar", "Lab", "Literal", "literal_key",
    "Tt", "Ff", "Atom", "Not", "And", "Or", "Implies", "Iff", "Formula", "Assignment",
    "TT", "FF", "atom", "conj", "disj", "neg",
    "evaluate", "nnf", "atoms", "occurrences", "assignments", "equivalent",
    "to_prefix", "render",
]
