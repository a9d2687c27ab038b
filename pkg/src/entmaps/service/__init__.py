"""HTTP service exposing scans, analysis, thresholds, and verification."""

from .app import app, create_app

__all__ = ["app", "create_app"]
