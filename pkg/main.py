#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import sys
from pathlib import Path
from typing import Annotated, Optional

import typer

from core.config import settings
from core.exceptions import exception_handler
from core.logger import setup_logging
from core.response import SuccessResponse
from apps.api.dependencies import (
    CostsOption,
    JsonFlag,
    LabelOption,
    LatticeOption,
    ProcessFile,
    parse_labels,
    parse_names,
)
from apps.api.model import Via, View
from apps.api.service import AnalysisService

cli = typer.Typer(help=settings.SERVICE_SUMMARY, no_args_is_help=True, add_completion=False)

# 标签不可达时的退出码
EXIT_UNREACHABLE = 3


def _version(value: bool) -> None:
    if value:
        typer.echo(f"{settings.SERVICE_NAME} {settings.SERVICE_VERSION}")
        raise typer.Exit()


@cli.callback()
def bootstrap(
    version: Annotated[bool, typer.Option("--version", callback=_version, is_eager=True, help="显示版本")] = False,
    verbose: Annotated[bool, typer.Option("--verbose", "-v", help="输出调试日志")] = False,
) -> None:
    """
    初始化日志配置
    """
    setup_logging(verbose)


@cli.command()
@exception_handler("parse")
def parse(file: ProcessFile, as_json: JsonFlag = False) -> None:
    """
    解析并校验进程，输出规范形式。
    """
    result, text = AnalysisService.parse(file)
    SuccessResponse("parse", {"file": file}, result, text).emit(as_json)


@cli.command()
@exception_handler("discover")
def discover(
    file: ProcessFile,
    label: LabelOption,
    all_attacks: Annotated[bool, typer.Option("--all", help="列出全部攻击而非 ⊆ 极小攻击")] = False,
    as_json: JsonFlag = False,
) -> None:
    """
    列出到达标签的攻击集合。
    """
    result, text = AnalysisService.discover(file, label, all_attacks)
    SuccessResponse("discover", {"file": file, "label": label, "all": all_attacks}, result, text).emit(as_json)
    if not result.reachable:
        raise typer.Exit(code=EXIT_UNREACHABLE)


@cli.command()
@exception_handler("quantify")
def quantify(
    file: ProcessFile,
    label: LabelOption,
    costs: CostsOption,
    lattice: LatticeOption = None,
    as_json: JsonFlag = False,
) -> None:
    """
    求最小代价攻击。
    """
    result, text = AnalysisService.quantify(file, label, costs, lattice)
    params = {"file": file, "label": label, "costs": costs, "lattice": lattice}
    SuccessResponse("quantify", params, result, text).emit(as_json)
    if not result.reachable:
        raise typer.Exit(code=EXIT_UNREACHABLE)


@cli.command()
@exception_handler("check")
def check(
    file: ProcessFile,
    costs: CostsOption,
    levels: Annotated[Path, typer.Option("--levels", help="级别映射文件")],
    security: Annotated[Path, typer.Option("--security", help="安全映射文件")],
    security_lattice: Annotated[Path, typer.Option("--security-lattice", help="安全格文件")],
    labels: Annotated[str, typer.Option("--labels", help="逗号分隔的标签")] = "",
    lattice: LatticeOption = None,
    as_json: JsonFlag = False,
) -> None:
    """
    检查安全架构中的保护倒置。
    """
    result, text = AnalysisService.check(
        file, parse_labels(labels), costs, levels, security, security_lattice, lattice
    )
    params = {
        "file": file,
        "labels": parse_labels(labels),
        "costs": costs,
        "levels": levels,
        "security": security,
        "security_lattice": security_lattice,
        "lattice": lattice,
    }
    SuccessResponse("check", params, result, text).emit(as_json)


@cli.command()
@exception_handler("tree")
def tree(
    file: ProcessFile,
    label: LabelOption,
    via: Annotated[Via, typer.Option("--via", help="direct 输出公式；constraints 在公式上求最小代价")] = Via.DIRECT,
    dot: Annotated[Optional[Path], typer.Option("--dot", help="DOT 输出文件")] = None,
    title: Annotated[Optional[str], typer.Option("--title", help="攻击树标题")] = None,
    costs: Annotated[Optional[Path], typer.Option("--costs", help="代价映射文件")] = None,
    lattice: LatticeOption = None,
    as_json: JsonFlag = False,
) -> None:
    """
    合成攻击树 ⟦l⟧，可选输出 DOT。
    """
    result, text = AnalysisService.tree(file, label, via.value, dot, title, costs, lattice)
    params = {"file": file, "label": label, "via": via.value, "dot": dot, "costs": costs, "lattice": lattice}
    SuccessResponse("tree", params, result, text).emit(as_json)


@cli.command()
@exception_handler("simulate")
def simulate(
    file: ProcessFile,
    label: LabelOption,
    know: Annotated[str, typer.Option("--know", help="攻击者知道的名字，逗号分隔")] = "",
    depth: Annotated[Optional[int], typer.Option("--depth", help="步数上界")] = None,
    unfold: Annotated[Optional[int], typer.Option("--unfold", help="复制展开预算")] = None,
    as_json: JsonFlag = False,
) -> None:
    """
    在最难攻击者下有界执行，检验分析结果。
    """
    knowledge = parse_names(know)
    result, text = AnalysisService.simulate(file, label, knowledge, depth, unfold)
    params = {"file": file, "label": label, "know": knowledge, "depth": result.depth, "unfold": result.unfold}
    SuccessResponse("simulate", params, result, text).emit(as_json)


@cli.command()
@exception_handler("constraints")
def constraints(
    file: ProcessFile,
    label: LabelOption,
    view: Annotated[View, typer.Option("--view", help="iff 为 P⇔l，implies 为 P⇒l")] = View.IFF,
    as_json: JsonFlag = False,
) -> None:
    """
    输出增广后的流约束。
    """
    result, text = AnalysisService.constraints(file, label, view.value)
    SuccessResponse("constraints", {"file": file, "label": label, "view": view.value}, result, text).emit(as_json)


@cli.command()
@exception_handler("lattice")
def lattice(
    file: Annotated[Path, typer.Argument(help="格文件")],
    as_json: JsonFlag = False,
) -> None:
    """
    校验格文件的格与幺半群公理。
    """
    result, text = AnalysisService.lattice(file)
    SuccessResponse("lattice", {"file": file}, result, text).emit(as_json)


def main(argv: Optional[list[str]] = None) -> int:
    """
    命令行入口，返回退出码；参数错误的退出码为 1

    typer 可能使用自带的 click 副本，这里按异常协议（show 与 exit_code）识别参数错误，
    不直接依赖 click 的异常类。
    """
    try:
        code = cli(args=argv, prog_name="qpa", standalone_mode=False)
    except typer.Abort:
        return 1
    except Exception as exc:
        if not (callable(getattr(exc, "show", None)) and isinstance(getattr(exc, "exit_code", None), int)):
            raise
        exc.show()
        return 1
    return code if isinstance(code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
