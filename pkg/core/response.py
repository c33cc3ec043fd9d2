# -*- coding: utf-8 -*-

from pathlib import Path
from typing import Any, Mapping

import typer

from core.base import BaseResponse, Diagnostic
from core.exceptions import AppException


def _plain(value: Any) -> Any:
    """把命令参数转换为可序列化的值"""
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(item) for item in value]
    return value


def _input_of(params: Mapping[str, Any]) -> dict[str, Any]:
    return {key: _plain(value) for key, value in params.items() if key != "as_json"}


class SuccessResponse:
    """成功响应类"""

    def __init__(
        self,
        command: str,
        params: Mapping[str, Any],
        result: Any = None,
        text: str = "",
        diagnostics: list[Diagnostic] | None = None,
    ) -> None:
        self.content = BaseResponse(
            command=command,
            input=_input_of(params),
            result=result,
            diagnostics=diagnostics or [],
        )
        self.text = text

    def emit(self, as_json: bool = False) -> None:
        """输出到标准输出"""
        if as_json:
            typer.echo(self.content.model_dump_json(indent=2))
            return
        for diagnostic in self.content.diagnostics:
            typer.echo(f"{diagnostic.level}: {diagnostic.message}")
        if self.text:
            typer.echo(self.text)


class ErrorResponse:
    """错误响应类"""

    def __init__(self, command: str, params: Mapping[str, Any], exc: AppException) -> None:
        diagnostic = Diagnostic(
            level="error",
            code=exc.error_code,
            message=exc.message,
            line=exc.details.get("line"),
            column=exc.details.get("column"),
        )
        self.content = BaseResponse(
            command=command,
            input=_input_of(params),
            result=None,
            diagnostics=[diagnostic],
        )
        self.source = exc.details.get("source")

    def emit(self, as_json: bool = False) -> None:
        """输出诊断；文本模式下采用 `文件:行:列: error: 消息` 格式"""
        if as_json:
            typer.echo(self.content.model_dump_json(indent=2))
            return
        for diagnostic in self.content.diagnostics:
            location = [str(part) for part in (self.source, diagnostic.line, diagnostic.column) if part is not None]
            prefix = ":".join(location) + ": " if location else ""
            typer.echo(f"{prefix}error: {diagnostic.message}")
