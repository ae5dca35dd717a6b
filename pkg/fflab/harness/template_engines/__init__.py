from .formatter import Formatter
from .jinja2 import Jinja2
from .template_engine import TemplateEngine

__all__ = ("Formatter", "Jinja2", "TemplateEngine")
