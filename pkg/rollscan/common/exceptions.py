"""Common exception classes used throughout rollscan."""

from typing import Optional, Dict, Any


class RollscanError(Exception):
    """Base exception for the toolkit."""

    def __init__(
        self,
        message: str,
        error_code: str = "ROLLSCAN_ERROR",
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        """
        Initialize RollscanError.

        Args:
            message: Exception message
            error_code: Error code identifier
            details: Additional error details
        """
        self.message = message
        self.error_code = error_code
        self.details = details or {}
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """Convert exception to dictionary."""
        return {
            "error_code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class ValidationError(RollscanError):
    """Raised when a model value fails validation."""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "VALIDATION_ERROR",
    ) -> None:
        """Initialize ValidationError."""
        super().__init__(message, error_code, details)


class ConfigError(ValidationError):
    """Raised when a run configuration is invalid."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        """Initialize ConfigError."""
        super().__init__(message, details, "CONFIG_ERROR")


class DataValidationError(ValidationError):
    """Raised when input data violates a precondition (burst length, dimensions...)."""

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        error_code: str = "DATA_VALIDATION_ERROR",
    ) -> None:
        """Initialize DataValidationError."""
        super().__init__(message, details, error_code)


class RowRangeError(DataValidationError, IndexError):
    """Raised when a raster row index is out of range."""

    def __init__(self, row: int, rows: int) -> None:
        """Initialize RowRangeError."""
        super().__init__(
            f"Row {row} out of range for {rows} rows",
            {"row": row, "rows": rows},
            "ROW_OUT_OF_RANGE",
        )


class NotFoundError(RollscanError):
    """Raised when an image id is not found in a collection."""

    def __init__(self, message: str, resource_type: str = "Image") -> None:
        """Initialize NotFoundError."""
        super().__init__(
            message,
            "NOT_FOUND",
            {"resource_type": resource_type},
        )


class ImageIOError(RollscanError):
    """Raised when an image or sidecar file cannot be read or written."""

    def __init__(self, message: str, path: str) -> None:
        """Initialize ImageIOError."""
        super().__init__(message, "IMAGE_IO_ERROR", {"path": path})


class UnsupportedFormatError(RollscanError):
    """Raised for file formats or pixel modes the toolkit does not accept."""

    def __init__(self, message: str, path: str) -> None:
        """Initialize UnsupportedFormatError."""
        super().__init__(message, "UNSUPPORTED_FORMAT", {"path": path})


class CorruptImageError(RollscanError):
    """Raised when a file with a supported extension cannot be decoded."""

    def __init__(self, message: str, path: str) -> None:
        """Initialize CorruptImageError."""
        super().__init__(message, "CORRUPT_IMAGE", {"path": path})


class AnnotationFormatError(RollscanError):
    """Raised for malformed annotation or detection files."""

    def __init__(
        self,
        message: str,
        file: str,
        line: Optional[int] = None,
        error_code: str = "ANNOTATION_FORMAT_ERROR",
    ) -> None:
        """
        Initialize AnnotationFormatError.

        Args:
            message: Exception message
            file: Offending file
            line: 1-based line number (or record index for JSON files)
            error_code: Error code identifier
        """
        location = f"{file}:{line}" if line is not None else file
        super().__init__(
            f"{location}: {message}",
            error_code,
            {"file": file, "line": line},
        )
        self.file = file
        self.line = line


class CoordinateRangeError(AnnotationFormatError):
    """Raised when a normalized coordinate lies outside [0, 1]."""

    def __init__(self, message: str, file: str, line: Optional[int] = None) -> None:
        """Initialize CoordinateRangeError."""
        super().__init__(message, file, line, "COORDINATE_OUT_OF_RANGE")


class UnknownImageError(AnnotationFormatError):
    """Raised when a record references an image outside the reference set."""

    def __init__(self, message: str, file: str, line: Optional[int] = None) -> None:
        """Initialize UnknownImageError."""
        super().__init__(message, file, line, "UNKNOWN_IMAGE")
