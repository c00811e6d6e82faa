"""Конфигурация через переменные окружения (pydantic-settings), префикс ADELAB_."""
import os
from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

_REPO_ROOT = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    """Настройки из env. См. .env.example."""

    model_config = SettingsConfigDict(
        env_prefix="ADELAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Число процессов для сканирования простых; None: по числу ядер
    threads: Optional[int] = None
    # Сколько простых отдаётся воркеру за раз
    scan_chunksize: int = 1

    log_level: str = "INFO"

    # Эталонные таблицы для `repro`
    golden_dir: Path = _REPO_ROOT / "tests" / "golden"

    # HTTP
    host: str = "0.0.0.0"
    port: int = 8000
    cors_origins: str = "http://localhost:5173"


def resolve_threads(flag: Optional[int], settings: Optional[Settings] = None) -> int:
    """--threads, иначе ADELAB_THREADS, иначе число ядер; всегда >= 1."""
    if flag is not None:
        return max(1, flag)
    settings = settings or Settings()
    if settings.threads is not None:
        return max(1, settings.threads)
    return max(1, os.cpu_count() or 1)


def get_cors_origins_list(origins: str) -> list[str]:
    """Парсит CORS_ORIGINS в список строк (без пробелов)."""
    return [o.strip() for o in origins.split(",") if o.strip()]
