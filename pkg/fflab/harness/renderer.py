from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from .template_engines import Formatter, Jinja2, TemplateEngine

TEMPLATE_DIR = Path(__file__).parent / "templates"


class ReportFormat(Enum):
    """Output formats ``fflab table`` and the sweep summary can be rendered in."""

    TEXT = "text"
    MARKDOWN = "markdown"
    CSV = "csv"

    @classmethod
    def from_str(cls, value: str) -> Optional[ReportFormat]:
        for report_format in cls:
            if report_format.value == value.strip().lower():
                return report_format
        return None


class TemplateEngineFactory:
    @staticmethod
    def get_engine(filename: str) -> TemplateEngine:
        """Picks the template engine for a template by its extension.

        Args:
            filename (str): name of the template file

        Returns (TemplateEngine): Jinja2 for ``.j2`` files, the str.format engine for ``.fmt`` files
        """
        for engine in (Jinja2, Formatter):
            if filename.endswith(engine.extensions):
                return engine()
        raise ValueError(f"no template engine for {filename}")


class Renderer:
    """Renders one of the packaged report templates."""

    __slots__ = "_template_engine", "_filename", "_document"

    def __init__(self, filename: str, template_engine: Optional[TemplateEngine] = None):
        self._filename = filename
        self._template_engine = template_engine or TemplateEngineFactory.get_engine(filename)
        path = Path(filename) if Path(filename).is_absolute() else TEMPLATE_DIR / filename
        with open(path, "r", encoding="utf-8") as file:
            self._document = file.read()

    @property
    def filename(self) -> str:
        return self._filename

    def render(self, keywords: Optional[Dict[str, Any]] = None) -> str:
        """Renders the template.

        Args:
            keywords (Optional[Dict[str, Any]]): template variables

        Returns (str): rendered text
        """
        return self._template_engine.template(self._document, keywords or {})


class RendererFactory:
    _TABLES = {ReportFormat.TEXT: "table.txt.j2", ReportFormat.MARKDOWN: "table.md.j2"}

    @staticmethod
    def table(report_format: ReportFormat) -> Renderer:
        if report_format not in RendererFactory._TABLES:
            raise ValueError(f"the exponent table cannot be rendered as {report_format.value}")
        return Renderer(RendererFactory._TABLES[report_format])

    @staticmethod
    def summary() -> Renderer:
        return Renderer("summary.csv.j2")

    @staticmethod
    def listing() -> Renderer:
        return Renderer("listing.fmt")
