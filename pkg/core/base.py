# -*- coding: utf-8 -*-

from typing import Any, Literal
from pydantic import BaseModel, Field


class Diagnostic(BaseModel):
    """诊断信息"""
    level: Literal["error", "warning", "info"] = Field(default="error", description="级别")
    code: str = Field(default="", description="错误代码")
    message: str = Field(default="", description="诊断消息")
    line: int | None = Field(default=None, description="行号（从 1 开始）")
    column: int | None = Field(default=None, description="列号（从 1 开始）")


class BaseResponse(BaseModel):
    """基础响应类：所有命令的 JSON 输出信封"""
    command: str = Field(default=..., description="命令名称")
    input: dict[str, Any] = Field(default_factory=dict, description="命令输入")
    result: Any = Field(default=None, description="命令结果")
    diagnostics: list[Diagnostic] = Field(default_factory=list, description="诊断列表")
