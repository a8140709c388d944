"""Artefact rendering: CSV files."""

from .csv_renderer import CsvRenderer, emit_csv

__all__ = ["CsvRenderer", "emit_csv"]
