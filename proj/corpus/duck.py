class Duck:
    def quack(self):
        return "Quack!"


class Donald:
    def quack(self):
        return "Nobody knows more about quacking than me."


def do_quack(x):
    print(x.quack())


def add(x: int, y: int) -> int:
    return x + y


def spread(*args, **kwargs) -> None:
    return None


duck = Duck()
donald = Donald()
