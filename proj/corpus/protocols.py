from typing import Protocol, runtime_checkable


@runtime_checkable
class MyProtocol(Protocol):
    def foo(self, x: int) -> bool: ...


class Sub1:
    def foo(self, x: float) -> int:
        return 1


class Sub2:
    def foo(self, x: str) -> int:
        return 2


class Sub3:
    def foo(self, x: int) -> bool:
        return True


def f1(x: MyProtocol):
    return None
