"""
A small command router for the CLI, shaped like a web router: endpoint
modules register handlers on their own ``router`` and ``api.py`` mounts them.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Type

from pydantic import BaseModel

from threshold_lab.core.exceptions import EXIT_ASSERTION, EXIT_INCONCLUSIVE, EXIT_PASS


@dataclass(frozen=True)
class RunContext:
    master_seed: int
    trials: int
    threads: Optional[int] = None


@dataclass
class EndpointResult:
    summary: BaseModel
    records: List[Dict[str, Any]] = field(default_factory=list)
    status: int = EXIT_PASS


def verdict(passed: Optional[bool], vacuous: bool = False) -> int:
    """Exit status of a check: vacuous and undecided checks are inconclusive."""
    if vacuous or passed is None:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS if passed else EXIT_ASSERTION


Handler = Callable[[BaseModel, RunContext], EndpointResult]


@dataclass(frozen=True)
class Command:
    name: str
    params: Type[BaseModel]
    handler: Handler
    help: str = ""
    tags: tuple = ()


class CommandRouter:
    def __init__(self):
        self.commands: Dict[str, Command] = {}

    def command(self, name: str, params: Type[BaseModel], help: str = ""):
        def register(handler: Handler) -> Handler:
            if name in self.commands:
                raise ValueError(f"command {name!r} registered twice")
            self.commands[name] = Command(name, params, handler, help or (handler.__doc__ or "").strip())
            return handler

        return register

    def include_router(self, router: "CommandRouter", prefix: str = "", tags: Optional[List[str]] = None) -> None:
        for command in router.commands.values():
            name = f"{prefix}{command.name}"
            if name in self.commands:
                raise ValueError(f"command {name!r} registered twice")
            self.commands[name] = Command(name, command.params, command.handler, command.help, tuple(tags or ()))

    def get(self, name: str) -> Command:
        return self.commands[name]

    def __contains__(self, name: str) -> bool:
        return name in self.commands
