import json
import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel

from config import settings


def _round(x: float, digits: int) -> Any:
    if math.isnan(x) or math.isinf(x):
        return str(x)
    value = float(f"{x:.{digits}g}")
    return 0.0 if value == 0 else value


def normalize(value: Any, digits: Optional[int] = None) -> Any:
    """JSON-safe copy: floats at fixed precision, complex as [re, im]."""
    digits = settings.float_digits if digits is None else digits
    if isinstance(value, BaseModel):
        value = value.to_json() if hasattr(value, 'to_json') else value.model_dump(mode='json')
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return _round(float(value), digits)
    if isinstance(value, (complex, np.complexfloating)):
        return [_round(value.real, digits), _round(value.imag, digits)]
    if isinstance(value, np.ndarray):
        return normalize(value.tolist(), digits)
    if isinstance(value, dict):
        return {str(k): normalize(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [normalize(v, digits) for v in value]
        return sorted(items, key=json.dumps) if isinstance(value, (set, frozenset)) else items
    return value


def dumps(payload: Any) -> str:
    return json.dumps(normalize(payload), sort_keys=True, ensure_ascii=False)


def error_report(code: str, detail: str, context: Optional[dict] = None) -> str:
    error = {'code': code, 'detail': detail}
    if context:
        error['context'] = context
    return dumps({'error': error})
