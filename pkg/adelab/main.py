"""Точка входа FastAPI. CORS из env, префикс /api задают роутеры."""
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from adelab import __version__
from adelab.config import Settings, get_cors_origins_list
from adelab.core.errors import AdelabError

_settings = Settings()

app = FastAPI(
    title="adelab API",
    description="Точные проверки по модулю простых для дифференциальных уравнений",
    version=__version__,
)

_cors_origins = get_cors_origins_list(_settings.cors_origins)
app.add_middleware(
    CORSMiddleware,
    allow_origins=_cors_origins,
    allow_credentials=True,
    allow_methods=["GET", "POST", "OPTIONS"],
    allow_headers=["*"],
)


@app.exception_handler(AdelabError)
async def adelab_error_handler(request: Request, exc: AdelabError) -> JSONResponse:
    """Ошибка предметной области (некорректный ввод) -> 400."""
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/")
async def root():
    """Корень API (здоровье/инфо)."""
    return {"service": "adelab API", "docs": "/docs"}


from adelab.api import algfun, ec, hodge, mf, pcurv, vf

app.include_router(pcurv.router)
app.include_router(vf.router)
app.include_router(mf.router)
app.include_router(ec.router)
app.include_router(hodge.router)
app.include_router(algfun.router)


def _run_uvicorn() -> None:
    """Точка входа для запуска сервера: python -m adelab.main. Хост и порт из config."""
    import uvicorn
    uvicorn.run(
        "adelab.main:app",
        host=_settings.host,
        port=_settings.port,
        reload=False,
    )


if __name__ == "__main__":
    try:
        _run_uvicorn()
    except Exception as e:
        import sys
        print(f"[adelab.main] Startup failed: {e}", file=sys.stderr)
        raise
