from .log_setup import configure_logging
from .pool import map_in_pool

__all__ = ["configure_logging", "map_in_pool"]
