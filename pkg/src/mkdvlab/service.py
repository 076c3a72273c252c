"""FastAPI service exposing the experiment runners.

Each endpoint takes one experiment config in the request body, executes it
synchronously on the server, and returns the structured report. Outputs are
written under the service's output root; requests may name a subdirectory.
"""

from __future__ import annotations

import os
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .config import (
    AttractorConfig,
    AttractorReport,
    CounterexampleConfig,
    CounterexampleExperimentReport,
    DiagnoseConfig,
    DiagnoseReport,
    SimulateConfig,
    SimulateReport,
    SlopeConfig,
    SlopeExperimentReport,
    StrichartzConfig,
    StrichartzReport,
    TrilinearConfig,
    TrilinearReport,
)
from .errors import BlowupError, ConfigurationError
from .runner import (
    run_attractor,
    run_counterexample,
    run_diagnose,
    run_simulation,
    run_slope,
    run_strichartz,
    run_trilinear,
)

DEFAULT_OUTPUT_ROOT = os.environ.get("MKDVLAB_OUTPUT_ROOT", "runs")


def create_app(output_root: str | None = None) -> FastAPI:
    root = Path(output_root or DEFAULT_OUTPUT_ROOT)
    app = FastAPI(title="mkdvlab", version=__version__)

    def new_dir(label: str) -> Path:
        path = root / f"{label}-{uuid.uuid4().hex[:8]}"
        path.mkdir(parents=True, exist_ok=True)
        return path

    @app.exception_handler(ConfigurationError)
    async def _config_error(request: Request, exc: ConfigurationError):
        return JSONResponse(status_code=422,
                            content={"error": "config", "detail": str(exc)})

    @app.exception_handler(BlowupError)
    async def _blowup_error(request: Request, exc: BlowupError):
        return JSONResponse(status_code=409,
                            content={"error": "blowup", "detail": str(exc),
                                     "t_last": exc.t_last})

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/experiments/simulate", response_model=SimulateReport)
    def simulate(cfg: SimulateConfig):
        return run_simulation(cfg, new_dir(cfg.label)).report

    @app.post("/experiments/diagnose", response_model=DiagnoseReport)
    def diagnose(cfg: DiagnoseConfig):
        return run_diagnose(cfg, new_dir("diagnose"))

    @app.post("/experiments/slope", response_model=SlopeExperimentReport)
    def slope(cfg: SlopeConfig):
        return run_slope(cfg, new_dir(cfg.label))

    @app.post("/experiments/trilinear", response_model=TrilinearReport)
    def trilinear(cfg: TrilinearConfig):
        return run_trilinear(cfg, new_dir(cfg.label))

    @app.post("/experiments/strichartz", response_model=StrichartzReport)
    def strichartz(cfg: StrichartzConfig):
        return run_strichartz(cfg, new_dir(cfg.label))

    @app.post("/experiments/counterexample", response_model=CounterexampleExperimentReport)
    def counterexample(cfg: CounterexampleConfig):
        return run_counterexample(cfg, new_dir(cfg.label))

    @app.post("/experiments/attractor", response_model=AttractorReport)
    def attractor(cfg: AttractorConfig):
        return run_attractor(cfg, new_dir(cfg.label))

    return app
