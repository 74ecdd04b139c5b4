from typing import Protocol


class Closer(Protocol):
    def close(self) -> None: ...


class File:
    def close(self) -> None:
        return None


class Socket:
    def shutdown(self) -> None:
        return None
