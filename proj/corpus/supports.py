from typing import Protocol, TypeVar

T = TypeVar("T")


class SupportsInt(Protocol):
    def __int__(self) -> int: ...


class SupportsAbs(Protocol[T]):
    def __abs__(self) -> T: ...
