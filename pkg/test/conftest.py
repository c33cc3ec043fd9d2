# -*- coding: utf-8 -*-

import pytest
from collections.abc import Callable
from pathlib import Path
from typer.testing import CliRunner

from core.config import settings
from apps.calculus.ast import Process
from apps.calculus.parser import parse_process

CORPUS_DIR: Path = settings.STATIC_DIR.joinpath("corpus")
CONFIG_DIR: Path = settings.STATIC_DIR.joinpath("config")


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS_DIR


@pytest.fixture(scope="session")
def config_dir() -> Path:
    return CONFIG_DIR


@pytest.fixture(scope="session")
def load() -> Callable[[str], Process]:
    """按文件名读取并解析语料中的进程"""
    def _load(name: str) -> Process:
        return parse_process(CORPUS_DIR.joinpath(name).read_text(encoding="utf-8"))
    return _load


@pytest.fixture(scope="session")
def nemid(load) -> Process:
    return load("nemid.vqc")


@pytest.fixture(scope="session")
def cyclic(load) -> Process:
    return load("cyclic.vqc")


@pytest.fixture(scope="session")
def restriction(load) -> Process:
    return load("restriction.vqc")


@pytest.fixture(scope="session")
def two_paths(load) -> Process:
    return load("two_paths.vqc")


@pytest.fixture(scope="module")
def runner() -> CliRunner:
    return CliRunner()
