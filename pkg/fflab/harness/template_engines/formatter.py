import string
from fractions import Fraction
from typing import Any, Dict, Mapping, Sequence, Tuple

from .template_engine import TemplateEngine, fraction


class _Unfilled:
    """Stands in for a field the keywords do not provide and formats back to its own replacement field."""

    __slots__ = ("path",)

    def __init__(self, path: str):
        self.path = path

    def __format__(self, spec: str) -> str:
        return f"{{{self.path}:{spec}}}" if spec else f"{{{self.path}}}"

    def __getitem__(self, index: Any) -> "_Unfilled":
        return _Unfilled(f"{self.path}[{index}]")

    def __getattr__(self, attr: str) -> "_Unfilled":
        return _Unfilled(f"{self.path}.{attr}")


class _ReportFormatter(string.Formatter):
    def get_value(self, key: Any, args: Sequence[Any], kwargs: Mapping[str, Any]) -> Any:
        if isinstance(key, int) or key in kwargs:
            return super().get_value(key, args, kwargs)
        return _Unfilled(key)

    def format_field(self, value: Any, format_spec: str) -> Any:
        if isinstance(value, Fraction):
            value = fraction(value)
        elif isinstance(value, (tuple, list)) and value and all(isinstance(v, int) for v in value):
            value = ",".join(str(v) for v in value)
        return super().format_field(value, format_spec)


class Formatter(TemplateEngine):
    extensions: Tuple[str, ...] = (".fmt",)

    def template(self, document: str, keywords: Dict[str, Any]) -> str:
        """Formats a one-line document with ``str.format`` semantics.

        Fields missing from ``keywords`` are left in place. Fractions render as ``a/b`` and integer tuples as a
        comma separated list, so parameter grids print the way the CLI accepts them.

        Parameters:
            document (str): format string
            keywords (Dict[str, Any]): replacement fields

        Returns (str): formatted string
        """
        return _ReportFormatter().vformat(document, (), keywords)
