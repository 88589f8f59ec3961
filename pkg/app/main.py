from contextlib import asynccontextmanager
import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app.config import get_settings
from app.routes import oracles, positivity, roots, triangles

logger = logging.getLogger(__name__)


# Lifespan context manager for startup/shutdown events
@asynccontextmanager
async def lifespan(app: FastAPI):
    settings = get_settings()
    logger.info(f"Workbench API started (precision {settings.precision_bits} bits)")
    yield
    logger.info("Workbench API stopped")


app = FastAPI(
    title="Stirling Workbench API",
    description="Read-only access to exact triangles, positivity tests, root certificates and combinatorial oracles",
    version="1.0.0",
    lifespan=lifespan,
)

# CORS settings
origins = ["*"]

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_methods=["GET"],
    allow_headers=["*"],
)

# Include routes
app.include_router(triangles.router, prefix="/api")
app.include_router(positivity.router, prefix="/api")
app.include_router(roots.router, prefix="/api")
app.include_router(oracles.router, prefix="/api")


@app.get("/")
def root():
    return {"message": "Welcome to the Stirling Workbench API"}
