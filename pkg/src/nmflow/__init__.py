"""nmflow: open-quantum-system dynamics and non-Markovianity diagnostics."""

from .config import DEFAULT, Tolerances

__version__ = "0.1.0"

__all__ = ["DEFAULT", "Tolerances", "__version__"]
