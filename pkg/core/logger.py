# -*- coding: utf-8 -*-

import sys
import logging
from typing import Optional

from loguru import logger

from core.config import Settings, settings as default_settings

_CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> - "
    "<level>{message}</level>"
)


class InterceptHandler(logging.Handler):
    """
    把标准库日志（例如 graphviz 的日志）转交给 Loguru
    """

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        frame, depth = logging.currentframe(), 2
        while frame and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logging(verbose: bool = False, config: Optional[Settings] = None) -> str:
    """
    按配置初始化日志

    控制台日志写入标准错误，标准输出只留给命令结果；LOG_DIR 设置时
    另写 analysis.log 与 error.log 两个按日轮转的文件。

    Args:
        verbose: 为真时级别降为 DEBUG
        config: 配置对象，缺省为全局 settings

    Returns:
        str: 实际生效的日志级别
    """
    config = config or default_settings
    level = "DEBUG" if verbose else config.LOG_LEVEL.upper()
    log_format = config.LOG_FORMAT or _CONSOLE_FORMAT

    logger.remove()
    logger.add(sys.stderr, format=log_format, level=level, backtrace=True, diagnose=False, colorize=config.LOG_COLORIZE)

    if config.LOG_DIR is not None:
        config.LOG_DIR.mkdir(parents=True, exist_ok=True)
        for filename, file_level in (("analysis.log", level), ("error.log", "ERROR")):
            logger.add(
                str(config.LOG_DIR / filename),
                format=log_format,
                level=file_level,
                rotation=config.LOG_ROTATION,
                retention=config.LOG_RETENTION,
                encoding="utf-8",
                backtrace=True,
                diagnose=False,
                colorize=False,
            )

    logging.basicConfig(handlers=[InterceptHandler()], level=getattr(logging, level), force=True)
    logger.debug(f"日志级别 {level}，日志目录 {config.LOG_DIR}")
    return level


def get_logger(name: Optional[str] = None):
    """
    获取绑定了组件名的记录器

    Args:
        name: 组件名
    """
    if name:
        return logger.bind(component=name)
    return logger


__all__ = ["setup_logging", "get_logger", "logger", "InterceptHandler"]
