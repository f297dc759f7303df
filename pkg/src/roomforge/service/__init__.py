from .session import Session, replay_events
from .pipeline import PipelineRun, run_pipeline
from .app import create_app

__all__ = ["Session", "replay_events", "PipelineRun", "run_pipeline", "create_app"]
