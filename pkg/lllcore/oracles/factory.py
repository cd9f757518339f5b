"""Factory for building model instances from JSON descriptions.

The description's ``type`` key selects a registered builder. Further types
(the rainbow package registers ``rainbow``) are added with
``register_instance_type``.
"""

import logging
from typing import Any, Callable, Dict, List

from lllcore.config.constants import EnumerationConfig
from lllcore.core.errors import InputError
from lllcore.core.instance import ModelInstance
from lllcore.oracles.explicit import ExplicitInstance
from lllcore.oracles.matchings import build_matching_instance, host_from_dict
from lllcore.oracles.variable import build_variable_model

logger = logging.getLogger(__name__)

Builder = Callable[[Dict[str, Any], int], ModelInstance]


def _build_explicit(description: Dict[str, Any], max_states: int) -> ModelInstance:
    return ExplicitInstance.from_dict(description)


def _build_matching(description: Dict[str, Any], max_states: int) -> ModelInstance:
    host = host_from_dict(description.get("host", description))
    try:
        flaws = description["flaws"]
    except KeyError:
        raise InputError("Matching instance needs a 'flaws' list")
    return build_matching_instance(
        host, flaws,
        relation=description.get("relation", "standard"),
        names=description.get("names"),
        name=description.get("name", "matching"),
        max_states=max_states,
    )


class InstanceFactory:
    """Factory for creating instances based on the description type."""

    # Registry of available instance types
    _instance_types: Dict[str, Builder] = {
        'explicit': _build_explicit,
        'variable': build_variable_model,
        'matching': _build_matching,
    }

    @classmethod
    def create(cls, description: Dict[str, Any],
               max_states: int = EnumerationConfig.MAX_STATES) -> ModelInstance:
        """Create an instance from its description.

        Args:
            description: Parsed JSON description with a ``type`` key
            max_states: Enumeration cap handed to the builder

        Returns:
            The built instance

        Raises:
            InputError: When the type is missing or unknown, or the builder rejects the description
        """
        instance_type = description.get('type')

        if not instance_type:
            logger.error("No type specified for instance description")
            raise InputError("Instance description needs a 'type' key")

        if instance_type not in cls._instance_types:
            logger.error(f"Unknown instance type: {instance_type}")
            raise InputError(
                f"Unknown instance type {instance_type!r}; available: {', '.join(cls.get_available_types())}"
            )

        instance = cls._instance_types[instance_type](description, max_states)
        logger.info(f"Created {instance_type} instance '{instance.name}' with {instance.flaw_count} flaws")
        return instance

    @classmethod
    def register_instance_type(cls, type_name: str, builder: Builder):
        """Register a new instance type.

        Args:
            type_name: Value of the description's ``type`` key
            builder: Callable (description, max_states) -> ModelInstance
        """
        if not callable(builder):
            raise ValueError(f"{builder!r} is not callable")

        cls._instance_types[type_name] = builder
        logger.debug(f"Registered instance type: {type_name}")

    @classmethod
    def get_available_types(cls) -> List[str]:
        """Get list of available instance types.

        Returns:
            Sorted list of type names
        """
        return sorted(cls._instance_types.keys())

    @classmethod
    def is_type_supported(cls, instance_type: str) -> bool:
        """Check if an instance type is supported.

        Args:
            instance_type: Type name

        Returns:
            True if type is supported
        """
        return instance_type in cls._instance_types
