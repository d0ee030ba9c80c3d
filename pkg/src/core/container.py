"""
Service Container

Resolves the sweep services and their collaborators by type. Singletons
(the process-wide solution cache) are shared; factories are re-run on
every lookup so services pick up the current AppConfig.
"""

import logging
from typing import Any, Callable, Dict, Optional, Type, TypeVar

T = TypeVar("T")

logger = logging.getLogger(__name__)


class ServiceResolutionError(LookupError):
    """No registration exists for a type and it cannot be built bare"""


class Container:
    """Type-keyed registry of singletons and factories"""

    def __init__(self):
        self._factories: Dict[str, Callable[[], Any]] = {}
        self._singletons: Dict[str, Any] = {}

    def register_singleton(self, service_type: Type[T], instance: T) -> None:
        self._singletons[self._get_key(service_type)] = instance

    def register_factory(self, service_type: Type[T], factory: Callable[[], T]) -> None:
        self._factories[self._get_key(service_type)] = factory

    def is_registered(self, service_type: Type) -> bool:
        key = self._get_key(service_type)
        return key in self._singletons or key in self._factories

    def get(self, service_type: Type[T]) -> T:
        """Singleton first, then factory, then a no-argument constructor"""
        key = self._get_key(service_type)
        if key in self._singletons:
            return self._singletons[key]
        if key in self._factories:
            return self._factories[key]()

        try:
            return service_type()
        except TypeError as exc:
            raise ServiceResolutionError(f"cannot resolve {service_type.__name__}: {exc}") from exc

    def get_or_none(self, service_type: Type[T]) -> Optional[T]:
        try:
            return self.get(service_type)
        except ServiceResolutionError:
            logger.debug("no registration for %s", service_type.__name__)
            return None

    @staticmethod
    def _get_key(service_type: Type) -> str:
        return f"{service_type.__module__}.{service_type.__qualname__}"

    def clear(self) -> None:
        self._factories.clear()
        self._singletons.clear()


container = Container()
