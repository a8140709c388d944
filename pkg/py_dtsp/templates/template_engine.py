"""Jinja2 template engine for human-readable experiment reports."""

import logging
from typing import Dict, Any, Optional
from pathlib import Path
from jinja2 import Environment, FileSystemLoader, StrictUndefined
from jinja2.exceptions import TemplateNotFound, TemplateSyntaxError
from ..config.settings import get_settings

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).parent


class TemplateEngine:
    """Renders Markdown reports from Jinja2 templates."""

    def __init__(self, templates_dir: Optional[str] = None, significant_digits: Optional[int] = None):
        self.templates_dir = Path(templates_dir) if templates_dir else TEMPLATES_DIR
        self.digits = significant_digits or get_settings().csv_significant_digits

        self.env = Environment(
            loader=FileSystemLoader(str(self.templates_dir)),
            undefined=StrictUndefined,
            trim_blocks=True,
            lstrip_blocks=True,
            keep_trailing_newline=True,
        )
        self.env.filters['sig'] = self._significant

    def _significant(self, value: float, digits: Optional[int] = None) -> str:
        """Format a float with the configured significant digits."""
        return f"{value:.{digits or self.digits}g}"

    def render_template(self, template_name: str, context: Dict[str, Any]) -> str:
        """
        Render a template with the given context.

        Args:
            template_name: Name of the template file
            context: Template context variables

        Returns:
            Rendered text
        """
        try:
            template = self.env.get_template(template_name)
            return template.render(**context)
        except TemplateNotFound:
            logger.error(f"Template not found: {template_name}")
            raise
        except TemplateSyntaxError as e:
            logger.error(f"Template syntax error in {template_name}: {e}")
            raise


# Global template engine instance
_template_engine: Optional[TemplateEngine] = None


def get_template_engine() -> TemplateEngine:
    """Get template engine instance."""
    global _template_engine
    if _template_engine is None:
        _template_engine = TemplateEngine()
    return _template_engine
