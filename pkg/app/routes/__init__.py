from dataclasses import dataclass
from typing import Callable, Dict


@dataclass(frozen=True)
class Command:
    name: str
    summary: str
    handler: Callable


class CommandRouter:
    """Collects command handlers the way an API router collects endpoints."""

    def __init__(self):
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, summary: str = ""):
        def register(handler: Callable) -> Callable:
            self.commands[name] = Command(name, summary, handler)
            return handler
        return register

    def include_router(self, other: "CommandRouter") -> None:
        for name, command in other.commands.items():
            if name in self.commands:
                raise ValueError(f"command {name!r} registered twice")
            self.commands[name] = command
