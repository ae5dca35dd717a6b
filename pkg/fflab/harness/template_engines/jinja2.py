from typing import Any, Dict, Optional, Tuple

from jinja2 import BaseLoader, Environment, StrictUndefined

from .template_engine import TemplateEngine, fraction


class Jinja2(TemplateEngine):
    extensions: Tuple[str, ...] = (".j2",)

    def __init__(self, environment: Optional[Environment] = None):
        self._environment = environment or Environment(
            loader=BaseLoader(),
            autoescape=False,
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self._environment.filters.setdefault("fraction", fraction)

    @property
    def environment(self) -> Environment:
        """The Jinja2 environment reports are rendered with.

        Returns (Environment): environment of the template engine
        """
        return self._environment

    def template(self, document: str, keywords: Dict[str, Any]) -> str:
        """Renders a Jinja2 document.

        Parameters:
            document (str): template source
            keywords (Dict[str, Any]): template variables

        Returns (str): rendered text
        """
        return self._environment.from_string(document).render(**keywords)
