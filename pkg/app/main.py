from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
import logging

from .config import get_settings
from .routers import engine
from .state import runtime

app = FastAPI(title="mbset engine")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Routers
app.include_router(engine.router)

logger = logging.getLogger(__name__)


@app.on_event("startup")
def on_startup():
    settings = get_settings()
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    runtime.reset_from_settings(settings)
    logger.info("engine ready: cap=%d budget=%d workers=%d", runtime.cap, runtime.budget, runtime.workers)


@app.get("/api/runtime")
async def get_runtime_config():
    return runtime.to_dict()


@app.post("/api/runtime")
async def set_runtime_config(payload: dict):
    runtime.set_from_dict(payload)
    return runtime.to_dict()
