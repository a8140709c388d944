"""Template rendering for experiment reports."""

from .template_engine import TemplateEngine, get_template_engine

__all__ = ["TemplateEngine", "get_template_engine"]
