"""
Witness serialization for reports.

Dense complex arrays are stored as interleaved little-endian float64 (re, im) pairs, base64 encoded. Point sets are
stored as coordinate lists.
"""

from __future__ import annotations

import base64
from typing import Any, Dict, Optional

import numpy as np
import numpy.typing as npt

from ..combinatorics import PointSet
from ..field import FFunction, get_field
from ..qforms import QuadraticSpace
from ..surfaces import Surface, SurfaceFunction, SurfaceKind

_DTYPE = np.dtype("<c16")


def encode_complex(values: npt.ArrayLike) -> str:
    return base64.b64encode(np.ascontiguousarray(values, dtype=_DTYPE).tobytes()).decode("ascii")


def decode_complex(text: str) -> npt.NDArray[np.complex128]:
    return np.frombuffer(base64.b64decode(text.encode("ascii")), dtype=_DTYPE).astype(np.complex128)


def serialize_witness(witness: Any) -> Optional[Dict[str, Any]]:
    """JSON-ready form of a witness.

    Args:
        witness (Any): FFunction, SurfaceFunction, PointSet, a vector, a message, a sequence of these or None

    Returns (Optional[Dict[str, Any]]): a tagged dictionary, None for no witness
    """
    if witness is None:
        return None
    if isinstance(witness, FFunction):
        return {"type": "ffunction", "prime": witness.field.p, "dim": witness.dim, "data": encode_complex(witness.data)}
    if isinstance(witness, SurfaceFunction):
        surface = witness.surface
        return {
            "type": "surface_function",
            "prime": surface.field.p,
            "dim": surface.dim,
            "form": surface.form.matrix.tolist(),
            "kind": surface.kind.name.lower(),
            "data": encode_complex(witness.values),
        }
    if isinstance(witness, PointSet):
        return {
            "type": "point_set",
            "prime": witness.field.p,
            "dim": witness.dim,
            "points": witness.points.tolist(),
        }
    if isinstance(witness, str):
        return {"type": "message", "text": witness}
    if isinstance(witness, np.ndarray):
        return {"type": "vector", "values": witness.tolist()}
    if isinstance(witness, (list, tuple)):
        return {"type": "sequence", "items": [serialize_witness(item) for item in witness]}
    raise TypeError(f"cannot serialize witness of type {type(witness).__name__}")


def deserialize_witness(payload: Optional[Dict[str, Any]]) -> Any:
    """Inverse of :func:`serialize_witness`."""
    if payload is None:
        return None
    kind = payload["type"]
    if kind == "message":
        return payload["text"]
    if kind == "vector":
        return np.asarray(payload["values"])
    if kind == "sequence":
        return tuple(deserialize_witness(item) for item in payload["items"])
    field = get_field(payload["prime"])
    if kind == "ffunction":
        return FFunction(field, payload["dim"], decode_complex(payload["data"]))
    if kind == "surface_function":
        surface = Surface(
            QuadraticSpace(field, payload["form"]), SurfaceKind.from_str(payload["kind"]) or SurfaceKind.GENERAL
        )
        return SurfaceFunction(surface, decode_complex(payload["data"]))
    if kind == "point_set":
        return PointSet(field, payload["dim"], np.asarray(payload["points"], dtype=np.int64))
    raise ValueError(f"unknown witness type {kind!r}")
