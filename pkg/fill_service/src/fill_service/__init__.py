"""Mask-fill HTTP service with a deterministic built-in language model."""

from .app import FillRequest, FillResponse, Settings, create_app
from .model import BigramFiller, load_filler

__version__ = "0.1.0"

__all__ = [
    "BigramFiller",
    "FillRequest",
    "FillResponse",
    "Settings",
    "create_app",
    "load_filler",
]
