# -*- coding: utf-8 -*-

from enum import Enum
from typing import Literal, Optional

from pydantic import BaseModel, Field


class Via(str, Enum):
    """tree 命令的求值路径"""
    DIRECT = "direct"
    CONSTRAINTS = "constraints"


class View(str, Enum):
    """约束系统视图"""
    IFF = "iff"
    IMPLIES = "implies"


class ParseOutSchema(BaseModel):
    """parse 命令结果"""
    canonical: str = Field(default=..., description="规范化进程文本")
    labels: list[int] = Field(default_factory=list, description="标签（前序）")
    names: list[str] = Field(default_factory=list, description="出现的名字")


class AttackSetsOutSchema(BaseModel):
    """discover 命令结果"""
    label: int = Field(default=..., description="查询标签")
    reachable: bool = Field(default=True, description="标签是否可达")
    minimal: bool = Field(default=True, description="是否只列出 ⊆ 极小攻击")
    attacks: list[list[str]] = Field(default_factory=list, description="攻击集合（字典序）")


class PricedAttackSchema(BaseModel):
    """带代价的攻击"""
    attack: list[str] = Field(default_factory=list, description="信道名")
    cost: str = Field(default=..., description="代价")


class QuantifyOutSchema(BaseModel):
    """quantify 命令结果"""
    label: int = Field(default=..., description="查询标签")
    structure: Literal["numeric", "symbolic"] = Field(default="numeric", description="代价结构")
    reachable: bool = Field(default=True, description="标签是否可达")
    minima: list[PricedAttackSchema] = Field(default_factory=list, description="最小代价攻击")


class LabelReportSchema(BaseModel):
    """单个标签的检查结论"""
    label: int = Field(default=..., description="标签")
    verdict: Literal["pass", "inversion"] = Field(default=..., description="结论")
    required: str = Field(default=..., description="要求的安全级别")
    deployed: Optional[str] = Field(default=None, description="部署的保护级别")
    unreachable: bool = Field(default=False, description="标签不可达")
    minimal: list[PricedAttackSchema] = Field(default_factory=list, description="最小代价攻击")
    gap: Optional[str] = Field(default=None, description="倒置的代价差距（数值代价）")


class CheckOutSchema(BaseModel):
    """check 命令结果"""
    entries: list[LabelReportSchema] = Field(default_factory=list, description="逐标签结论")
    inversions: list[int] = Field(default_factory=list, description="存在倒置的标签")


class TreeOutSchema(BaseModel):
    """tree 命令结果"""
    label: int = Field(default=..., description="查询标签")
    via: Literal["direct", "constraints"] = Field(default="direct", description="求值路径")
    formula: str = Field(default=..., description="攻击树公式（前缀形式）")
    text: str = Field(default=..., description="攻击树公式（中缀形式）")
    dot: Optional[str] = Field(default=None, description="DOT 输出路径")
    minima: list[PricedAttackSchema] = Field(default_factory=list, description="由公式求得的最小代价攻击")


class RuleSchema(BaseModel):
    """流约束 φ ⇝ p"""
    consequent: str = Field(default=..., description="结论文字")
    antecedent: str = Field(default=..., description="前件（前缀形式）")


class ConstraintsOutSchema(BaseModel):
    """constraints 命令结果"""
    label: int = Field(default=..., description="查询标签")
    view: Literal["iff", "implies"] = Field(default="iff", description="双蕴含或蕴含视图")
    rules: list[RuleSchema] = Field(default_factory=list, description="规范化约束")
    literal_count: int = Field(default=0, description="原始翻译的文字数")


class SimulateOutSchema(BaseModel):
    """simulate 命令结果"""
    label: int = Field(default=..., description="目标标签")
    knowledge: list[str] = Field(default_factory=list, description="攻击者知识")
    depth: int = Field(default=..., description="步数上界")
    unfold: int = Field(default=..., description="复制展开预算")
    verdict: Literal["pass", "fail", "vacuous"] = Field(default=..., description="检验结论")
    witness: list[str] = Field(default_factory=list, description="见证迁移序列")
    attacker_channels: list[str] = Field(default_factory=list, description="攻击者广播的信道")
    support: Optional[list[str]] = Field(default=None, description="包含于知识的攻击")
    reached: list[int] = Field(default_factory=list, description="界内可达的标签")


class LatticeOutSchema(BaseModel):
    """lattice 命令结果"""
    elements: list[str] = Field(default_factory=list, description="元素")
    bottom: Optional[str] = Field(default=None, description="最小元")
    top: Optional[str] = Field(default=None, description="最大元")
    ok: bool = Field(default=True, description="是否满足格与幺半群公理")
    violation: Optional[str] = Field(default=None, description="第一个违反的公理")
