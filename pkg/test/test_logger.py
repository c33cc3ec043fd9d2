# -*- coding: utf-8 -*-

import logging

import pytest

from core.config import Settings
from core.logger import logger, setup_logging


@pytest.fixture(autouse=True)
def restore_sinks():
    yield
    # 关闭测试中打开的文件 sink
    logger.remove()
    setup_logging(config=Settings(LOG_LEVEL="CRITICAL", LOG_DIR=None))


def test_level_comes_from_settings():
    assert setup_logging(config=Settings(LOG_LEVEL="error", LOG_DIR=None)) == "ERROR"


def test_verbose_overrides_level():
    assert setup_logging(verbose=True, config=Settings(LOG_LEVEL="WARNING", LOG_DIR=None)) == "DEBUG"


def test_log_dir_gets_rotating_files(tmp_path):
    setup_logging(config=Settings(LOG_LEVEL="INFO", LOG_DIR=tmp_path / "logs"))
    logger.info("analysis milestone")
    logger.error("broken cost map")
    logger.remove()

    analysis = (tmp_path / "logs" / "analysis.log").read_text(encoding="utf-8")
    errors = (tmp_path / "logs" / "error.log").read_text(encoding="utf-8")
    assert "analysis milestone" in analysis
    assert "broken cost map" in analysis
    assert "broken cost map" in errors
    assert "analysis milestone" not in errors


def test_custom_format_and_stdlib_redirect(tmp_path):
    setup_logging(config=Settings(LOG_LEVEL="INFO", LOG_DIR=tmp_path, LOG_FORMAT="{level}|{message}"))
    logging.getLogger("graphviz").info("rendered through stdlib")
    logger.remove()

    lines = (tmp_path / "analysis.log").read_text(encoding="utf-8").splitlines()
    assert "INFO|rendered through stdlib" in lines
