"""Three-curve network flow with triple-junction drag."""

from ._tjdrag import *  # noqa: F401,F403
from ._tjdrag import Error, Network, TensionModel

__all__ = [name for name in dir() if not name.startswith("_")]
