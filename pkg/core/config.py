# -*- coding: utf-8 -*-

from functools import lru_cache
from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """主配置类"""
    
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
    )
    
    # 项目根目录
    BASE_DIR: Path = Path(__file__).parent.parent

    SERVICE_NAME: str = "quality-protection"
    SERVICE_VERSION: str = "v1"
    SERVICE_SUMMARY: str = "质量演算进程的静态保护分析器"

    # CLI 的标准输出用于结果，日志默认只保留警告以上
    LOG_LEVEL: str = "WARNING"
    LOG_DIR: Path | None = None
    LOG_FORMAT: str | None = None
    LOG_COLORIZE: bool = False
    LOG_ROTATION: str = "00:00"
    LOG_RETENTION: str = "30 days"

    # 穷举等价判定的原子数上限
    EQUIVALENCE_MAX_ATOMS: int = 24

    # 有界语义搜索的默认边界
    SIMULATE_DEPTH: int = 12
    SIMULATE_UNFOLD: int = 2
    ATTACKER_PAYLOAD: str = "_atk"

    DOT_TITLE: str = "attack tree"

    @property
    def STATIC_DIR(self) -> Path:
        return self.BASE_DIR.joinpath("static")


@lru_cache(maxsize=16)
def get_settings(**kwargs) -> Settings:
    return Settings(**kwargs)

# 提供向后兼容的settings变量
settings = get_settings()
