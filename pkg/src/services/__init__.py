"""Services package for sweep orchestration"""

from .cache_service import CacheService
from .phase_service import PhaseService
from .plotdata_service import PlotDataService
from .prediction_service import PredictionService
from .simulation_service import SimulationService

__all__ = [
    "CacheService",
    "PhaseService",
    "PlotDataService",
    "PredictionService",
    "SimulationService",
]
