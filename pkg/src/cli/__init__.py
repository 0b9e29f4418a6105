"""
Command-line interface: one module per subcommand.
"""

from src.cli.router import build_parser

__all__ = ["build_parser"]
