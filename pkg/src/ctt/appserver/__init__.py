"""Pipeline orchestration, HTTP service and CLI."""

from ctt.appserver.pipeline import BuildResult, StageError, run_pipeline
from ctt.appserver.navigation import navigation_payload
from ctt.appserver.api import create_app

__all__ = [
    "BuildResult",
    "StageError",
    "create_app",
    "navigation_payload",
    "run_pipeline",
]
