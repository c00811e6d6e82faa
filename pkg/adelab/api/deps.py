"""Зависимости FastAPI: настройки и сборка конверта отчёта, общего с CLI."""
from functools import lru_cache
from typing import Any

from pydantic import BaseModel

from adelab.config import Settings, resolve_threads
from adelab.reports import ReportEnvelope, to_jsonable


@lru_cache
def get_settings() -> Settings:
    return Settings()


def workers(settings: Settings) -> int:
    return resolve_threads(None, settings)


def make_report(command: str, request: BaseModel | dict[str, Any], result: dict[str, Any]) -> ReportEnvelope:
    """Конверт с эхо-параметрами запроса; тот же payload, что печатает CLI."""
    params = request.model_dump(exclude_none=True) if isinstance(request, BaseModel) else {k: v for k, v in request.items() if v is not None}
    return ReportEnvelope(command=command, params=to_jsonable(params), result=to_jsonable(result))
