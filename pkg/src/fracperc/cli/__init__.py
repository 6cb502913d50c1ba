"""CLI entrypoints for fracperc."""

__all__ = ["main"]
