"""Base classes for models and image-keyed collections."""

from abc import ABC, abstractmethod
from typing import TypeVar, Generic, List, Optional, Dict, Any, Tuple, Iterator

from rollscan.common.exceptions import NotFoundError, ValidationError

T = TypeVar("T")


class BaseModel(ABC):
    """Abstract base class for all value models."""

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Convert model to dictionary."""
        pass

    @abstractmethod
    def validate(self) -> Tuple[bool, Optional[str]]:
        """
        Validate the model.

        Returns:
            Tuple of (is_valid, error_message)
        """
        pass

    def validate_or_raise(self) -> None:
        """
        Validate the model and raise on failure.

        Raises:
            ValidationError: If the model is invalid
        """
        is_valid, error = self.validate()
        if not is_valid:
            raise ValidationError(f"{self.__class__.__name__}: {error}")


class BaseCollection(Generic[T], ABC):
    """
    Abstract base class for collections keyed by image id.

    Iteration always follows sorted image id order so that every reduction
    over a collection is independent of insertion order.
    """

    def __init__(self) -> None:
        """Initialize collection."""
        self._items: Dict[str, List[T]] = {}

    @abstractmethod
    def add(self, image_id: str, item: T) -> None:
        """Add an item to an image."""
        pass

    def get(self, image_id: str) -> List[T]:
        """
        Get items for an image.

        Args:
            image_id: Image id

        Returns:
            Items (empty list if the image is unknown)
        """
        return list(self._items.get(image_id, []))

    def get_or_raise(self, image_id: str, resource_type: str = "Image") -> List[T]:
        """
        Get items for an image or raise NotFoundError.

        Args:
            image_id: Image id
            resource_type: Type of resource for error message

        Returns:
            Items

        Raises:
            NotFoundError: If the image is unknown
        """
        if image_id not in self._items:
            raise NotFoundError(f"{resource_type} '{image_id}' not found", resource_type)
        return self.get(image_id)

    def image_ids(self) -> List[str]:
        """Get all image ids in sorted order."""
        return sorted(self._items)

    def items(self) -> Iterator[Tuple[str, List[T]]]:
        """Iterate (image_id, items) pairs in sorted id order."""
        for image_id in self.image_ids():
            yield image_id, list(self._items[image_id])

    def all_items(self) -> List[T]:
        """Get every item, in sorted image order then insertion order."""
        return [item for _, items in self.items() for item in items]

    def count(self) -> int:
        """Get total number of items over all images."""
        return sum(len(items) for items in self._items.values())

    def exists(self, image_id: str) -> bool:
        """Check if an image is registered."""
        return image_id in self._items

    def __len__(self) -> int:
        """Number of registered images."""
        return len(self._items)
