# -*- coding: utf-8 -*-
"""
命题可满足性、基于阻断子句的全部模型枚举与攻击提取

编码采用 Tseitin 全等价形式；判定过程为带单元传播（双观察文字）的 DPLL，
按固定顺序决策，先取假值。
"""

from collections import defaultdict
from typing import Callable, Iterable, Iterator, Mapping, Optional, TypeAlias

from core.logger import logger
from apps.analysis.logic import (
    And,
    Atom,
    Ff,
    Formula,
    Guess,
    Iff,
    Implies,
    Literal,
    Not,
    Or,
    Tt,
    atoms,
    evaluate,
    literal_key,
    nnf,
)
from apps.analysis.translate import ConstraintSystem

Model: TypeAlias = dict[Literal, bool]
Attack: TypeAlias = frozenset[str]

_Code: TypeAlias = int | bool


def _negate(code: _Code) -> _Code:
    return (not code) if isinstance(code, bool) else -code


class _Encoder:
    """把公式编码为子句集，原始文字占用最小的变量编号"""

    def __init__(self, originals: list[Literal]) -> None:
        self.literals = list(originals)
        self.var_of: dict[Literal, int] = {lit: index + 1 for index, lit in enumerate(originals)}
        self.num_vars = len(originals)
        self.clauses: list[list[int]] = []
        self.cache: dict[Formula, _Code] = {}
        self.unsat = False

    def fresh(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def add(self, clause: list[int]) -> None:
        unique = list(dict.fromkeys(clause))
        if any(-lit in unique for lit in unique):
            return
        if not unique:
            self.unsat = True
        self.clauses.append(unique)

    def encode(self, f: Formula) -> _Code:
        if isinstance(f, Tt):
            return True
        if isinstance(f, Ff):
            return False
        if isinstance(f, Atom):
            return self.var_of[f.lit]
        if isinstance(f, Not):
            return _negate(self.encode(f.arg))
        if f in self.cache:
            return self.cache[f]
        code = self._encode_compound(f)
        self.cache[f] = code
        return code

    def _encode_compound(self, f: Formula) -> _Code:
        if isinstance(f, Implies):
            return self.encode(Or((Not(f.lhs), f.rhs)))
        if isinstance(f, Iff):
            a, b = self.encode(f.lhs), self.encode(f.rhs)
            if isinstance(a, bool):
                return b if a else _negate(b)
            if isinstance(b, bool):
                return a if b else _negate(a)
            if a == b:
                return True
            if a == -b:
                return False
            t = self.fresh()
            self.add([-t, -a, b])
            self.add([-t, a, -b])
            self.add([t, a, b])
            self.add([t, -a, -b])
            return t

        conjunctive = isinstance(f, And)
        absorbing = not conjunctive
        parts: list[int] = []
        for arg in f.args:
            code = self.encode(arg)
            if isinstance(code, bool):
                if code is absorbing:
                    return absorbing
                continue
            if code not in parts:
                parts.append(code)
        if not parts:
            return conjunctive
        if len(parts) == 1:
            return parts[0]
        t = self.fresh()
        if conjunctive:
            for q in parts:
                self.add([-t, q])
            self.add([t] + [-q for q in parts])
        else:
            for q in parts:
                self.add([t, -q])
            self.add([-t] + parts)
        return t

    def require(self, f: Formula) -> None:
        """断言 f 成立；顶层合取与双蕴含直接展开为子句"""
        if isinstance(f, And):
            for arg in f.args:
                self.require(arg)
            return
        if isinstance(f, Iff):
            a, b = self.encode(f.lhs), self.encode(f.rhs)
            if isinstance(a, bool) and isinstance(b, bool):
                if a != b:
                    self.add([])
            elif isinstance(a, bool):
                self.add([b if a else -b])
            elif isinstance(b, bool):
                self.add([a if b else -a])
            else:
                self.add([-a, b])
                self.add([a, -b])
            return
        code = self.encode(f)
        if code is False:
            self.add([])
        elif code is not True:
            self.add([code])


class _Dpll:
    """按时间顺序回溯的 DPLL，单元传播采用双观察文字"""

    def __init__(self, num_vars: int, clauses: Iterable[list[int]]) -> None:
        self.num_vars = num_vars
        self.clauses: list[list[int]] = []
        self.units: list[int] = []
        self.watches: dict[int, list[int]] = defaultdict(list)
        self.empty = False
        self.values: list[Optional[bool]] = [None] * (num_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        for clause in clauses:
            self.add_clause(clause)

    def add_clause(self, clause: list[int]) -> None:
        if not clause:
            self.empty = True
            return
        if len(clause) == 1:
            self.units.append(clause[0])
            return
        index = len(self.clauses)
        self.clauses.append(list(clause))
        self.watches[clause[0]].append(index)
        self.watches[clause[1]].append(index)

    def value(self, lit: int) -> Optional[bool]:
        v = self.values[abs(lit)]
        if v is None:
            return None
        return v if lit > 0 else not v

    def assign(self, lit: int) -> None:
        self.values[abs(lit)] = lit > 0
        self.trail.append(lit)

    def propagate(self) -> bool:
        """单元传播；出现冲突时返回 False"""
        while self.qhead < len(self.trail):
            false_lit = -self.trail[self.qhead]
            self.qhead += 1
            watching = self.watches[false_lit]
            i = 0
            while i < len(watching):
                index = watching[i]
                clause = self.clauses[index]
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                if self.value(clause[0]) is True:
                    i += 1
                    continue
                moved = False
                for k in range(2, len(clause)):
                    if self.value(clause[k]) is not False:
                        clause[1], clause[k] = clause[k], clause[1]
                        self.watches[clause[1]].append(index)
                        watching[i] = watching[-1]
                        watching.pop()
                        moved = True
                        break
                if moved:
                    continue
                if self.value(clause[0]) is False:
                    return False
                self.assign(clause[0])
                i += 1
        return True

    def cancel(self, level: int) -> None:
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            self.values[abs(lit)] = None
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def next_unassigned(self) -> Optional[int]:
        for var in range(1, self.num_vars + 1):
            if self.values[var] is None:
                return var
        return None

    def solve(self) -> Optional[list[Optional[bool]]]:
        if self.empty:
            return None
        self.values = [None] * (self.num_vars + 1)
        self.trail, self.trail_lim, self.qhead = [], [], 0
        for unit in self.units:
            current = self.value(unit)
            if current is False:
                return None
            if current is None:
                self.assign(unit)
        if not self.propagate():
            return None

        decisions: list[tuple[int, bool]] = []
        while True:
            var = self.next_unassigned()
            if var is None:
                return list(self.values)
            self.trail_lim.append(len(self.trail))
            decisions.append((var, False))
            self.assign(-var)
            while not self.propagate():
                while True:
                    if not decisions:
                        return None
                    var, flipped = decisions.pop()
                    self.cancel(len(decisions))
                    if not flipped:
                        break
                self.trail_lim.append(len(self.trail))
                decisions.append((var, True))
                self.assign(var)


class ModelEnumerator:
    """
    增量模型枚举器：每次求解后由调用方加入阻断子句

    模型是 atoms(f) 上的全赋值。
    """

    def __init__(self, f: Formula) -> None:
        originals = sorted(atoms(f), key=literal_key)
        encoder = _Encoder(originals)
        encoder.require(f)
        self.literals: list[Literal] = originals
        self._var_of = encoder.var_of
        self._solver = _Dpll(encoder.num_vars, encoder.clauses)
        if encoder.unsat:
            self._solver.empty = True
        self.solves = 0

    def next(self) -> Optional[Model]:
        self.solves += 1
        values = self._solver.solve()
        if values is None:
            return None
        return {lit: bool(values[self._var_of[lit]]) for lit in self.literals}

    def block(self, model: Mapping[Literal, bool], over: Optional[Iterable[Literal]] = None) -> None:
        """排除 model 在给定文字（缺省为全部原始文字）上的取值组合"""
        scope = self.literals if over is None else list(over)
        clause = [-self._var_of[lit] if model[lit] else self._var_of[lit] for lit in scope]
        self._solver.add_clause(clause)


def sat(f: Formula) -> Optional[Model]:
    """返回一个模型；不可满足时返回 None"""
    return ModelEnumerator(f).next()


def all_models(f: Formula) -> list[Model]:
    """
    枚举 atoms(f) 上的全部满足赋值

    每找到一个模型即阻断该全赋值，直到不可满足。
    """
    enumerator = ModelEnumerator(f)
    models: list[Model] = []
    while (model := enumerator.next()) is not None:
        models.append(model)
        enumerator.block(model)
    logger.debug(f"全部模型枚举完成，共 {len(models)} 个模型")
    return models


def attack(m: Mapping[Literal, bool], universe: Iterable[str]) -> Attack:
    """模型中猜测文字为真的信道集合"""
    return frozenset(name for name in universe if m[Guess(name)])


def _holds(f: Formula, derived: set[Literal], m: Mapping[Literal, bool]) -> bool:
    # 正文字取已推导集合，否定文字与猜测文字取模型中的值
    if isinstance(f, Tt):
        return True
    if isinstance(f, Ff):
        return False
    if isinstance(f, Atom):
        if isinstance(f.lit, Guess):
            return bool(m[f.lit])
        return f.lit in derived
    if isinstance(f, Not):
        return not evaluate(f.arg, m)
    if isinstance(f, And):
        return all(_holds(arg, derived, m) for arg in f.args)
    return any(_holds(arg, derived, m) for arg in f.args)


def _grounder(sys: ConstraintSystem) -> Callable[[Mapping[Literal, bool]], bool]:
    antecedents = {lit: nnf(rule.antecedent) for lit, rule in sys.rules.items()}

    def grounded(m: Mapping[Literal, bool]) -> bool:
        derived: set[Literal] = set()
        changed = True
        while changed:
            changed = False
            for lit, antecedent in antecedents.items():
                if lit not in derived and _holds(antecedent, derived, m):
                    derived.add(lit)
                    changed = True
        return all(bool(m[lit]) == (lit in derived) for lit in antecedents)

    return grounded


def is_grounded(sys: ConstraintSystem, m: Mapping[Literal, bool]) -> bool:
    """
    模型是否有根据：非猜测文字的取值等于在该模型猜测下规则的最小不动点

    循环系统中自我支撑的模型（无猜测却令环上信道为真）不是有根据的。
    """
    return _grounder(sys)(m)


def enumerate_attacks(sys: ConstraintSystem, minimal_only: bool = False) -> Iterator[tuple[Model, Attack]]:
    """
    逐个产生有根据的模型及其攻击，每个攻击只产生一次

    有根据的模型之后阻断其猜测投影，无根据的模型之后阻断其全赋值。

    Args:
        sys: 约束系统
        minimal_only: 为真时阻断已得攻击的全部超集；产生的攻击仍可能不是 ⊆ 极小的，
            但每个 ⊆ 极小攻击都会产生
    """
    enumerator = ModelEnumerator(sys.formula())
    guesses = sys.guesses()
    grounded = _grounder(sys)
    while (model := enumerator.next()) is not None:
        if grounded(model):
            yield model, attack(model, sys.universe)
            if minimal_only:
                chosen = [g for g in guesses if model[g]]
                enumerator.block(model, chosen)
            else:
                enumerator.block(model, guesses)
        else:
            enumerator.block(model)
    logger.debug(f"攻击枚举完成，共求解 {enumerator.solves} 次")


def sort_attacks(attacks: Iterable[Attack]) -> list[Attack]:
    """按排序后的名字列表作字典序排列"""
    return sorted(set(attacks), key=lambda a: sorted(a))


def attack_sets(sys: ConstraintSystem) -> list[Attack]:
    """全部模型的攻击投影（仅取有根据的模型），去重后排序"""
    grounded = _grounder(sys)
    attacks = {
        attack(model, sys.universe)
        for model in all_models(sys.formula())
        if grounded(model)
    }
    logger.info(f"标签 {sys.query} 共发现 {len(attacks)} 个攻击")
    return sort_attacks(attacks)


def subset_minimal(attacks: Iterable[Attack]) -> list[Attack]:
    pool = set(attacks)
    return sort_attacks(a for a in pool if not any(other < a for other in pool))


def minimal_attack_sets(sys: ConstraintSystem) -> list[Attack]:
    """包含关系下极小的攻击"""
    return subset_minimal(a for _, a in enumerate_attacks(sys, minimal_only=True))


__all__ = [
    "Model",
    "Attack",
    "ModelEnumerator",
    "sat",
    "all_models",
    "attack",
    "is_grounded",
    "enumerate_attacks",
    "sort_attacks",
    "attack_sets",
    "subset_minimal",
    "minimal_attack_sets",
]
