# -*- coding: utf-8 -*-

import functools
from typing import Any, Callable, Dict, List, Optional, TypeVar

import typer

from core.logger import get_logger

logger = get_logger("exceptions")

F = TypeVar("F", bound=Callable[..., Any])


class AppException(Exception):
    """应用程序基础异常类"""
    
    def __init__(
        self, 
        message: str = "应用程序异常", 
        exit_code: int = 1,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        """
        初始化应用程序异常
        
        Args:
            message: 异常消息
            exit_code: 进程退出码
            error_code: 错误代码
            details: 详细信息
        """
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or f"EXIT_{exit_code}"
        self.details = details or {}
        super().__init__(self.message)
    
    def to_dict(self) -> Dict[str, Any]:
        """
        转换为字典格式
        
        Returns:
            Dict: 异常信息字典
        """
        return {
            "message": self.message,
            "exit_code": self.exit_code,
            "error_code": self.error_code,
            "details": self.details,
        }


class UsageError(AppException):
    """命令参数错误"""

    def __init__(self, message: str = "命令参数错误"):
        super().__init__(message=message, exit_code=1, error_code="USAGE_ERROR")


class UnknownLabelError(AppException):
    """查询的标签不在进程中"""

    def __init__(self, label: int):
        super().__init__(
            message=f"unknown label {label}",
            exit_code=1,
            error_code="UNKNOWN_LABEL",
            details={"label": label},
        )


class ParseError(AppException):
    """语法错误，携带源码位置与期望的记号"""

    def __init__(self, message: str, line: int, column: int, expected: Optional[str] = None):
        self.line = line
        self.column = column
        self.expected = expected
        super().__init__(
            message=message,
            exit_code=2,
            error_code="PARSE_ERROR",
            details={"line": line, "column": column, "expected": expected},
        )


class ValidationError(AppException):
    """进程良构性校验失败"""
    
    def __init__(self, violations: List[str], message: str = "进程校验失败"):
        self.violations = list(violations)
        super().__init__(
            message=f"{message}: {'; '.join(self.violations)}",
            exit_code=2,
            error_code="VALIDATION_ERROR",
            details={"violations": self.violations},
        )


class UnsatisfiableError(AppException):
    """约束系统不可满足，即程序点不可达"""

    def __init__(self, message: str = "unreachable"):
        super().__init__(message=message, exit_code=3, error_code="UNSATISFIABLE")


class ConfigError(AppException):
    """代价、格、级别或安全映射文件错误"""

    def __init__(self, message: str, source: Optional[str] = None, line: Optional[int] = None):
        super().__init__(
            message=message,
            exit_code=4,
            error_code="CONFIG_ERROR",
            details={"source": source, "line": line},
        )


class MissingLiteralError(AppException):
    """赋值未覆盖公式中的文字"""

    def __init__(self, literal: Any):
        super().__init__(
            message=f"assignment has no value for {literal}",
            error_code="MISSING_LITERAL",
        )


class DomainTooLargeError(AppException):
    """穷举等价判定的原子数超过上限"""

    def __init__(self, size: int, cap: int):
        super().__init__(
            message=f"{size} atoms exceed the exhaustive cap of {cap}",
            error_code="DOMAIN_TOO_LARGE",
            details={"size": size, "cap": cap},
        )


class MissingRuleError(AppException):
    """回溯合成时找不到输入变量的定义规则"""

    def __init__(self, literal: Any):
        super().__init__(
            message=f"no defining rule for {literal}",
            error_code="MISSING_RULE",
        )


class NonChannelAtomError(AppException):
    """攻击树只能包含信道文字"""

    def __init__(self, literal: Any):
        super().__init__(
            message=f"attack tree leaf {literal} is not a channel literal",
            error_code="NON_CHANNEL_ATOM",
        )


def exception_handler(command: str) -> Callable[[F], F]:
    """
    命令异常处理装饰器

    捕获 AppException，输出错误响应并以异常对应的退出码结束。

    Args:
        command: 命令名称
    """
    def decorator(func: F) -> F:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except AppException as exc:
                from core.response import ErrorResponse

                logger.error(f"命令 {command} 失败: [{exc.error_code}] {exc.message}")
                ErrorResponse(command=command, params=kwargs, exc=exc).emit(
                    as_json=bool(kwargs.get("as_json", False))
                )
                raise typer.Exit(code=exc.exit_code)
        return wrapper  # type: ignore[return-value]
    return decorator


__all__ = [
    "AppException",
    "UsageError",
    "UnknownLabelError",
    "ParseError",
    "ValidationError",
    "UnsatisfiableError",
    "ConfigError",
    "MissingLiteralError",
    "DomainTooLargeError",
    "MissingRuleError",
    "NonChannelAtomError",
    "exception_handler",
]
