"""Conversion of exact values into deterministic JSON-ready structures."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction

from .tower import TowerScalar


def jsonable(obj):
    from .forms import Form, form_to_json, scalar_to_json

    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (Fraction, TowerScalar)):
        return scalar_to_json(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Form):
        return form_to_json(obj)
    if isinstance(obj, Enum):
        return str(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)
