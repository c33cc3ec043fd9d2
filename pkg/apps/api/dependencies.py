# -*- coding: utf-8 -*-

from pathlib import Path
from typing import Annotated, Optional

import typer

from core.exceptions import ConfigError, ParseError, UsageError, ValidationError
from core.logger import logger
from apps.calculus.ast import Process
from apps.calculus.parser import parse_process
from apps.analysis.cost import CostMap, CostStructure, NumericCost, SymbolicCost, parse_cost_map, validate_lattice
from apps.analysis.lattice import FiniteLattice, parse_lattice
from apps.analysis.security import LevelMap, SecurityMap, parse_level_map, parse_security_map


def _read(path: Path, config: bool = True) -> str:
    if not path.is_file():
        if config:
            raise ConfigError(f"cannot read {path}", str(path))
        raise UsageError(f"cannot read {path}")
    return path.read_text(encoding="utf-8")


def load_process(path: Path) -> Process:
    """
    读取并解析进程文件

    Raises:
        UsageError: 文件不存在
        ParseError: 语法错误，details 中带有文件路径
        ValidationError: 良构性校验失败
    """
    text = _read(path, config=False)
    try:
        process = parse_process(text)
    except (ParseError, ValidationError) as exc:
        exc.details["source"] = str(path)
        raise
    logger.debug(f"已加载进程文件 {path}")
    return process


def load_lattice(path: Path) -> FiniteLattice:
    """读取格文件"""
    return parse_lattice(_read(path), source=str(path))


def load_cost_structure(lattice: Optional[Path]) -> CostStructure:
    """给出格文件时为符号代价（须满足格与幺半群公理），否则为数值代价"""
    if lattice is None:
        return NumericCost()
    structure = SymbolicCost(load_lattice(lattice))
    report = validate_lattice(structure)
    if not report.ok:
        raise ConfigError(f"cost lattice violates {report.violation}", str(lattice))
    return structure


def load_cost_map(path: Path, lattice: Optional[Path] = None) -> CostMap:
    """读取代价映射文件"""
    structure = load_cost_structure(lattice)
    return parse_cost_map(_read(path), structure, source=str(path))


def load_level_map(path: Path, structure: CostStructure, security_lattice: FiniteLattice) -> LevelMap:
    """读取级别映射文件"""
    return parse_level_map(_read(path), structure, security_lattice, source=str(path))


def load_security_map(path: Path, security_lattice: FiniteLattice) -> SecurityMap:
    """读取安全映射文件"""
    return parse_security_map(_read(path), security_lattice, source=str(path))


def parse_labels(text: str) -> list[int]:
    """解析逗号分隔的标签列表，空串为空列表"""
    labels: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if not part.isdigit():
            raise UsageError(f"not a label: {part!r}")
        labels.append(int(part))
    return labels


def parse_names(text: str) -> list[str]:
    """解析逗号分隔的名字列表"""
    return sorted({part.strip() for part in text.split(",") if part.strip()})


# 进程文件参数
ProcessFile = Annotated[Path, typer.Argument(help="进程源文件（.vqc）")]

# 查询标签
LabelOption = Annotated[int, typer.Option("--label", "-l", help="查询的程序点标签")]

# JSON 输出
JsonFlag = Annotated[bool, typer.Option("--json", help="以 JSON 信封输出")]

# 代价映射文件
CostsOption = Annotated[Path, typer.Option("--costs", help="代价映射文件")]

# 符号代价格文件
LatticeOption = Annotated[Optional[Path], typer.Option("--lattice", help="符号代价格文件；省略时为数值代价")]
