from .args import COMMANDS, build_parser, parse_args
from .commands import COMMAND_HANDLERS, dispatch

__all__ = ["COMMANDS", "build_parser", "parse_args", "COMMAND_HANDLERS", "dispatch"]
