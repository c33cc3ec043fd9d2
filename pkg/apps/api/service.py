# -*- coding: utf-8 -*-

from pathlib import Path
from typing import Iterable, Literal, Optional

from core.config import settings
from core.exceptions import ConfigError, UnknownLabelError, UnsatisfiableError, UsageError
from core.logger import logger
from apps.api.dependencies import (
    load_cost_map,
    load_lattice,
    load_level_map,
    load_process,
    load_security_map,
)
from apps.api.model import (
    AttackSetsOutSchema,
    CheckOutSchema,
    ConstraintsOutSchema,
    LabelReportSchema,
    LatticeOutSchema,
    ParseOutSchema,
    PricedAttackSchema,
    QuantifyOutSchema,
    RuleSchema,
    SimulateOutSchema,
    TreeOutSchema,
)
from apps.calculus.ast import labels, names
from apps.calculus.parser import pretty
from apps.calculus.semantics import check_underapprox, explore
from apps.analysis.cost import CostMap, PricedAttack, minimal_attacks, minimal_models_of_formula
from apps.analysis.lattice import validate_lattice
from apps.analysis.logic import Atom, render, to_prefix
from apps.analysis.security import check_architecture
from apps.analysis.solver import attack_sets, minimal_attack_sets
from apps.analysis.translate import build_system, implication_view, literal_count, translate
from apps.analysis.tree import parse_tree, synthesize, to_dot


def attack_text(attack: Iterable[str]) -> str:
    """攻击的文本形式：{a, b}"""
    return "{" + ", ".join(sorted(attack)) + "}"


def _priced(entries: Iterable[PricedAttack], m: CostMap) -> list[PricedAttackSchema]:
    return [
        PricedAttackSchema(attack=sorted(entry.attack), cost=m.structure.format(entry.cost))
        for entry in entries
    ]


def _priced_text(entries: list[PricedAttackSchema]) -> str:
    return "\n".join(f"{attack_text(entry.attack)}\t{entry.cost}" for entry in entries)


class AnalysisService:
    """
    Analysis Service
    """
    @classmethod
    def parse(cls, file: Path) -> tuple[ParseOutSchema, str]:
        """解析并校验进程文件，返回规范形式"""
        process = load_process(file)
        canonical = pretty(process)
        result = ParseOutSchema(canonical=canonical, labels=labels(process), names=sorted(names(process)))
        return result, canonical

    @classmethod
    def discover(cls, file: Path, label: int, all_attacks: bool = False) -> tuple[AttackSetsOutSchema, str]:
        """列出标签的攻击集合；默认只给出 ⊆ 极小攻击"""
        sys = build_system(load_process(file), label)
        found = attack_sets(sys) if all_attacks else minimal_attack_sets(sys)
        result = AttackSetsOutSchema(
            label=label,
            reachable=bool(found),
            minimal=not all_attacks,
            attacks=[sorted(attack) for attack in found],
        )
        if not found:
            logger.warning(f"标签 {label} 不可达")
            return result, "unreachable"
        logger.info(f"标签 {label} 共有 {len(found)} 个攻击")
        return result, "\n".join(attack_text(attack) for attack in found)

    @classmethod
    def quantify(
        cls,
        file: Path,
        label: int,
        costs: Path,
        lattice: Optional[Path] = None,
    ) -> tuple[QuantifyOutSchema, str]:
        """求标签的全部最小代价攻击"""
        process = load_process(file)
        m = load_cost_map(costs, lattice)
        try:
            minima = minimal_attacks(build_system(process, label), m)
        except UnsatisfiableError:
            logger.warning(f"标签 {label} 不可达")
            return QuantifyOutSchema(label=label, structure=m.structure.kind, reachable=False), "unreachable"
        entries = _priced(minima, m)
        result = QuantifyOutSchema(label=label, structure=m.structure.kind, minima=entries)
        return result, _priced_text(entries)

    @classmethod
    def check(
        cls,
        file: Path,
        queries: list[int],
        costs: Path,
        levels: Path,
        security: Path,
        security_lattice: Path,
        lattice: Optional[Path] = None,
    ) -> tuple[CheckOutSchema, str]:
        """检查保护倒置"""
        process = load_process(file)
        m = load_cost_map(costs, lattice)
        sigma = load_lattice(security_lattice)
        report = validate_lattice(sigma)
        if not report.ok:
            raise ConfigError(f"security lattice: {report.violation}", str(security_lattice))
        lm = load_level_map(levels, m.structure, sigma)
        sm = load_security_map(security, sigma)
        architecture = check_architecture(process, queries, m, lm, sm)

        entries: list[LabelReportSchema] = []
        lines: list[str] = []
        for entry in architecture.entries:
            minimal = _priced(entry.minimal, m)
            gap = m.structure.format(entry.gap) if entry.gap is not None else None
            entries.append(LabelReportSchema(
                label=entry.label,
                verdict=entry.verdict,
                required=entry.required,
                deployed=entry.deployed,
                unreachable=entry.unreachable,
                minimal=minimal,
                gap=gap,
            ))
            if entry.unreachable:
                lines.append(f"label {entry.label}: pass (unreachable)")
                continue
            line = f"label {entry.label}: {entry.verdict} (required {entry.required}, deployed {entry.deployed}"
            if gap is not None:
                line += f", gap {gap}"
            lines.append(line + ")")
        result = CheckOutSchema(entries=entries, inversions=[entry.label for entry in architecture.inversions])
        return result, "\n".join(lines)

    @classmethod
    def tree(
        cls,
        file: Path,
        label: int,
        via: Literal["direct", "constraints"] = "direct",
        dot: Optional[Path] = None,
        title: Optional[str] = None,
        costs: Optional[Path] = None,
        lattice: Optional[Path] = None,
    ) -> tuple[TreeOutSchema, str]:
        """
        合成攻击树公式 ⟦l⟧

        via 为 constraints 时在 ⟦l⟧ 上求最小代价模型，需要 costs。
        """
        if via == "constraints" and costs is None:
            raise UsageError("--via constraints requires --costs")
        process = load_process(file)
        sys = build_system(process, label)
        formula = synthesize(implication_view(sys), label)
        text = render(formula)

        if dot is not None:
            dot.write_text(to_dot(parse_tree(formula), title or settings.DOT_TITLE), encoding="utf-8")
            logger.info(f"攻击树已写入 {dot}")

        minima: list[PricedAttackSchema] = []
        if via == "constraints" and costs is not None:
            m = load_cost_map(costs, lattice)
            minima = _priced(minimal_models_of_formula(formula, m), m)
            text = text + "\n" + _priced_text(minima)
        result = TreeOutSchema(
            label=label,
            via=via,
            formula=to_prefix(formula),
            text=render(formula),
            dot=str(dot) if dot is not None else None,
            minima=minima,
        )
        return result, text

    @classmethod
    def simulate(
        cls,
        file: Path,
        label: int,
        know: list[str],
        depth: Optional[int] = None,
        unfold: Optional[int] = None,
    ) -> tuple[SimulateOutSchema, str]:
        """在最难攻击者下做有界执行，检验分析的欠近似性质"""
        process = load_process(file)
        if label not in labels(process):
            raise UnknownLabelError(label)
        depth = settings.SIMULATE_DEPTH if depth is None else depth
        unfold = settings.SIMULATE_UNFOLD if unfold is None else unfold
        if depth < 0 or unfold < 1:
            raise UsageError("--depth must be >= 0 and --unfold >= 1")

        verdict = check_underapprox(process, label, know, depth, unfold, settings.ATTACKER_PAYLOAD)
        reached = sorted(explore(process, know, depth, unfold, settings.ATTACKER_PAYLOAD))
        result = SimulateOutSchema(
            label=label,
            knowledge=sorted(know),
            depth=depth,
            unfold=unfold,
            verdict=verdict.status,
            witness=list(verdict.witness),
            attacker_channels=list(verdict.attacker_channels),
            support=sorted(verdict.support) if verdict.support is not None else None,
            reached=reached,
        )
        lines = [f"{verdict.status}: label {label} with knowledge {attack_text(know)}"]
        if verdict.witness:
            lines.append("witness: " + " ; ".join(verdict.witness))
        if verdict.support is not None:
            lines.append(f"attack: {attack_text(verdict.support)}")
        lines.append("reached: " + ", ".join(str(found) for found in reached))
        return result, "\n".join(lines)

    @classmethod
    def constraints(
        cls,
        file: Path,
        label: int,
        view: Literal["iff", "implies"] = "iff",
    ) -> tuple[ConstraintsOutSchema, str]:
        """输出 P⇔l 或 P⇒l"""
        process = load_process(file)
        sys = build_system(process, label)
        rules = sys.rules if view == "iff" else implication_view(sys)
        arrow = "<=>" if view == "iff" else "=>"
        schemas = [
            RuleSchema(consequent=str(consequent), antecedent=to_prefix(rule.antecedent))
            for consequent, rule in rules.items()
        ]
        lines = [f"{render(rule.antecedent)} {arrow} {render(Atom(consequent))}" for consequent, rule in rules.items()]
        result = ConstraintsOutSchema(
            label=label,
            view=view,
            rules=schemas,
            literal_count=literal_count(translate(process)),
        )
        return result, "\n".join(lines)

    @classmethod
    def lattice(cls, file: Path) -> tuple[LatticeOutSchema, str]:
        """校验格文件"""
        lattice = load_lattice(file)
        report = validate_lattice(lattice)
        if not report.ok:
            raise ConfigError(f"lattice violates {report.violation}", str(file))
        result = LatticeOutSchema(
            elements=list(lattice.elements),
            bottom=lattice.bottom,
            top=lattice.top,
            ok=report.ok,
            violation=report.violation,
        )
        return result, f"ok: {len(lattice.elements)} elements, bottom {lattice.bottom}"
