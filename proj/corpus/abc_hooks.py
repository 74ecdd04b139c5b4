from abc import ABCMeta, abstractmethod


class MyABC(metaclass=ABCMeta):
    @abstractmethod
    def foo(self): ...


class MyABCHooked(metaclass=ABCMeta):
    @abstractmethod
    def foo(self): ...

    @classmethod
    def __subclasshook__(cls, subclass):
        if cls is MyABCHooked:
            if any("foo" in B.__dict__ for B in subclass.__mro__):
                return True
        return NotImplemented


class Sub1(MyABC):
    def foo(self):
        return 1


class Sub2:
    def foo(self):
        return 2


class Sub3:
    def foo(self):
        return 3


MyABC.register(Sub2)
