#ifndef PYTS_STUBS_HPP
#define PYTS_STUBS_HPP

// Typing-module interfaces that programs may name without defining them.
// Classes a program defines itself shadow these.

#include <string_view>

namespace pyts {

inline constexpr std::string_view stub_path = "<stubs>";

inline constexpr std::string_view stub_source = R"PY(
from abc import ABCMeta, abstractmethod
from typing import Protocol, TypeVar, runtime_checkable

T = TypeVar("T")


@runtime_checkable
class SupportsInt(Protocol):
    def __int__(self) -> int: ...


@runtime_checkable
class SupportsFloat(Protocol):
    def __float__(self) -> float: ...


@runtime_checkable
class SupportsIndex(Protocol):
    def __index__(self) -> int: ...


@runtime_checkable
class SupportsAbs(Protocol[T]):
    def __abs__(self) -> T: ...


class Sized(metaclass=ABCMeta):
    @abstractmethod
    def __len__(self) -> int: ...


class Hashable(metaclass=ABCMeta):
    @abstractmethod
    def __hash__(self) -> int: ...
)PY";

}  // namespace pyts

#endif
