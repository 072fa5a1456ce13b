"""HTTP service wrapping the mining and planning pipeline."""

from .app import DEFAULT_PORT, create_app

__all__ = ["DEFAULT_PORT", "create_app"]
