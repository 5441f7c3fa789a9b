"""Model files, checks and reports."""

from .main import main, run_command
from .model import ModelFile, ParseError, parse_model, print_model
from .report import emit_report

__all__ = ["ModelFile", "ParseError", "emit_report", "main", "parse_model", "print_model", "run_command"]
