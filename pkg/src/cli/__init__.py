"""
CLI Module

Typer application exposing the evaluation pipelines as subcommands.
"""

from src.cli.main import app, main, run

__all__ = ["app", "main", "run"]
