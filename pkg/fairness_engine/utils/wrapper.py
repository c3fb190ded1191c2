from typing import Optional
from rich.console import Console
from rich.panel import Panel
from rich.text import Text


class VerboseConsoleWrapper:
    """Rich console that tags every message with the emitting role, e.g. ``[SIMULATOR]``.

    Args:
        console (Optional[Console]): the console to write to, a fresh one when omitted
        role (str): tag printed in front of each message
        role_color (str): rich color of the tag
        quiet (bool): suppress all output
    """
    def __init__(
            self,
            console: Optional[Console] = None,
            role: str = "",
            role_color: str = "bright_black",
            quiet: bool = False
            ):
        self.console = console if console is not None else Console(quiet=quiet)
        if quiet:
            self.console.quiet = True
        self.role = role
        self.role_color = role_color

    def _tag(self) -> str:
        return f"[bold {self.role_color}][{self.role}][/bold {self.role_color}] "

    def _format_content(self, content):
        if isinstance(content, Panel):
            if isinstance(content.renderable, str):
                panel_content = Text.from_markup(content.renderable)
            else:
                panel_content = content.renderable
            return Panel(
                Text.from_markup(self._tag()) + panel_content,
                title=content.title,
                subtitle=content.subtitle,
                border_style=content.border_style,
                expand=content.expand,
                padding=content.padding,
                style=content.style,
            )
        if isinstance(content, str):
            return self._tag() + content
        return content

    def child(self, role: str, role_color: Optional[str] = None) -> "VerboseConsoleWrapper":
        """Share the underlying console under another role tag."""
        return VerboseConsoleWrapper(self.console, role=role, role_color=role_color or self.role_color)

    def print(self, *args, **kwargs):
        verbose = kwargs.pop("verbose", True)
        if args and verbose:
            args = (self._format_content(args[0]),) + args[1:]
        self.console.print(*args, **kwargs)

    def log(self, *args, **kwargs):
        verbose = kwargs.pop("verbose", True)
        if args and verbose:
            args = (self._format_content(args[0]),) + args[1:]
        self.console.log(*args, **kwargs)

    def warn(self, message: str):
        self.print(f"[bold yellow]{message}")

    def error(self, message: str):
        self.print(f"[bold red]{message}")
