"""Common/shared components used across the toolkit."""

from rollscan.common.base import BaseModel, BaseCollection
from rollscan.common.validators import BaseValidator
from rollscan.common.exceptions import (
    RollscanError,
    ValidationError,
    ConfigError,
    DataValidationError,
    RowRangeError,
    NotFoundError,
    ImageIOError,
    UnsupportedFormatError,
    CorruptImageError,
    AnnotationFormatError,
    CoordinateRangeError,
    UnknownImageError,
)
from rollscan.common.log_config import configure_logging

__all__ = [
    # Base classes
    "BaseModel",
    "BaseCollection",
    # Validators
    "BaseValidator",
    # Exceptions
    "RollscanError",
    "ValidationError",
    "ConfigError",
    "DataValidationError",
    "RowRangeError",
    "NotFoundError",
    "ImageIOError",
    "UnsupportedFormatError",
    "CorruptImageError",
    "AnnotationFormatError",
    "CoordinateRangeError",
    "UnknownImageError",
    # Logging
    "configure_logging",
]
