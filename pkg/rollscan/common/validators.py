"""Base validator class and validation utilities for configs."""

from abc import ABC, abstractmethod
from typing import Tuple, Optional, Any, List, Sequence
import math


class BaseValidator(ABC):
    """Abstract base class for validators."""

    @abstractmethod
    def validate(self, value: Any) -> Tuple[bool, Optional[str]]:
        """
        Validate a value.

        Args:
            value: Value to validate

        Returns:
            Tuple of (is_valid, error_message)
        """
        pass


class NumberRangeValidator(BaseValidator):
    """Validator for numbers inside a closed or half-open range."""

    def __init__(
        self,
        minimum: Optional[float] = None,
        maximum: Optional[float] = None,
        integer: bool = False,
        exclusive_minimum: bool = False,
    ) -> None:
        """Initialize NumberRangeValidator."""
        self.minimum = minimum
        self.maximum = maximum
        self.integer = integer
        self.exclusive_minimum = exclusive_minimum

    def validate(self, value: Any) -> Tuple[bool, Optional[str]]:
        """Validate number type and range."""
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False, "Value must be a number"

        if self.integer and not isinstance(value, int):
            return False, "Value must be an integer"

        if not math.isfinite(value):
            return False, "Value must be finite"

        if self.minimum is not None:
            if self.exclusive_minimum and value <= self.minimum:
                return False, f"Must be greater than {self.minimum}"
            if not self.exclusive_minimum and value < self.minimum:
                return False, f"Must be at least {self.minimum}"

        if self.maximum is not None and value > self.maximum:
            return False, f"Cannot exceed {self.maximum}"

        return True, None


class RangePairValidator(BaseValidator):
    """Validator for [low, high] pairs."""

    def __init__(self, element: NumberRangeValidator) -> None:
        """Initialize RangePairValidator."""
        self.element = element

    def validate(self, value: Any) -> Tuple[bool, Optional[str]]:
        """Validate a two-element ordered range."""
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            return False, "Range must be a [low, high] pair"

        for bound in value:
            is_valid, error = self.element.validate(bound)
            if not is_valid:
                return False, error

        if value[0] > value[1]:
            return False, "Range low bound exceeds high bound"

        return True, None


class ChoiceValidator(BaseValidator):
    """Validator for predefined values."""

    def __init__(self, choices: Sequence[str]) -> None:
        """Initialize ChoiceValidator."""
        self.choices = list(choices)

    def validate(self, value: Any) -> Tuple[bool, Optional[str]]:
        """Validate choice."""
        if value not in self.choices:
            return False, f"Must be one of: {', '.join(self.choices)}"

        return True, None


class KeySetValidator(BaseValidator):
    """Validator rejecting unknown keys in a JSON object (fail-closed)."""

    def __init__(self, allowed: Sequence[str], required: Sequence[str] = ()) -> None:
        """Initialize KeySetValidator."""
        self.allowed = set(allowed)
        self.required = list(required)

    def validate(self, value: Any) -> Tuple[bool, Optional[str]]:
        """Validate object keys."""
        if not isinstance(value, dict):
            return False, "Value must be a JSON object"

        unknown: List[str] = sorted(set(value) - self.allowed)
        if unknown:
            return False, f"Unknown field(s): {', '.join(unknown)}"

        missing = [key for key in self.required if key not in value]
        if missing:
            return False, f"Missing required field(s): {', '.join(missing)}"

        return True, None


class RGBValidator(BaseValidator):
    """Validator for 8-bit RGB triples."""

    def validate(self, value: Any) -> Tuple[bool, Optional[str]]:
        """Validate RGB triple."""
        if not isinstance(value, (list, tuple)) or len(value) != 3:
            return False, "Color must be an [r, g, b] triple"

        for channel in value:
            if isinstance(channel, bool) or not isinstance(channel, int):
                return False, "Color channels must be integers"
            if not 0 <= channel <= 255:
                return False, "Color channels must be in 0..255"

        return True, None
