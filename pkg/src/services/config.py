"""
Service Configuration and Initialization

This module sets up the dependency injection container and configures
the solution cache, the result repositories and the sweep services.
"""

from src.config.app_config import get_app_config
from src.core.cache import SolutionCache, solution_cache
from src.core.container import container
from src.repositories.result_repository import ResultRepository, repository_for
from src.services.cache_service import CacheService
from src.services.phase_service import PhaseService
from src.services.plotdata_service import PlotDataService
from src.services.prediction_service import PredictionService
from src.services.simulation_service import SimulationService


def configure_services():
    """Configure all application services and repositories in the DI container"""
    config = get_app_config()
    solution_cache.max_size = config.cache.max_size

    container.register_singleton(SolutionCache, solution_cache)

    container.register_factory(
        ResultRepository,
        lambda: repository_for("csv", get_app_config().deterministic),
    )

    container.register_factory(
        CacheService,
        lambda: CacheService(container.get(SolutionCache)),
    )

    container.register_factory(
        PredictionService,
        lambda: PredictionService(container.get(CacheService), get_app_config()),
    )

    container.register_factory(
        SimulationService,
        lambda: SimulationService(container.get(CacheService), get_app_config()),
    )

    container.register_factory(
        PhaseService,
        lambda: PhaseService(get_app_config()),
    )

    container.register_factory(
        PlotDataService,
        lambda: PlotDataService(container.get(ResultRepository)),
    )


def get_service(service_type):
    """Get a service instance from the container"""
    return container.get(service_type)


# Initialize services on module import
configure_services()
