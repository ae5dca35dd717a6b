from fractions import Fraction
from typing import Any, Dict, Tuple

from typing_extensions import Protocol


def fraction(value: Any) -> str:
    """Renders a Fraction as ``a/b`` and anything numeric with six significant digits."""
    if isinstance(value, Fraction) or hasattr(value, "denominator"):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if value is None:
        return "-"
    return f"{float(value):.6g}"


class TemplateEngine(Protocol):
    extensions: Tuple[str, ...]

    def template(self, document: str, keywords: Dict[str, Any]) -> str:
        """Templates a report document with the given keywords.

        Parameters:
            document (str): template source
            keywords (Dict[str, Any]): values made available to the template

        Returns (str): rendered text
        """
        raise NotImplementedError
