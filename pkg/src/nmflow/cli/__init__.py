"""Configuration-driven runner."""

from .main import main
from .scenarios import ScenarioConfig, build_model, load_config

__all__ = ["main", "ScenarioConfig", "build_model", "load_config"]
