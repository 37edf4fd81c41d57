"""FastAPI service wrapping the core library."""

from .app import app, create_app

__all__ = ["app", "create_app"]
