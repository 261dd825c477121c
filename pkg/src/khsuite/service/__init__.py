"""FastAPI service exposing the homology and detection toolkit."""

from .app import app, create_app
from .models import diagram_from_spec

__all__ = ["app", "create_app", "diagram_from_spec"]
