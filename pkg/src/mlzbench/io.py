"""Model files and report serialization (JSON with 17-significant-digit floats, CSV)."""

import json
import math

import numpy as np

from .linalg import is_symmetric
from .models import DiabaticModel, TtauPartner


class ModelFileError(ValueError):
    pass


def _fmt_float(x):
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return f"{x:.17g}"


def _plain(obj):
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def _emit(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}"{k}": {_emit(v, indent, level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_emit(v, indent, level + 1) for v in obj) + "]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2):
    return _emit(_plain(obj), indent, 0) + "\n"


def model_to_dict(model, partner=None):
    doc = {
        "n": model.n,
        "slope": model.slope.tolist(),
        "tau_slope": model.tau_slope.tolist(),
        "coupling": model.coupling.tolist(),
        "tau": model.tau,
    }
    if model.name:
        doc["name"] = model.name
    if partner is not None:
        doc["partner"] = {"b11": partner.b11.tolist(), "a1": partner.a1.tolist(), "c": partner.c.tolist()}
    return doc


def dump_model(model, partner=None):
    return dumps(model_to_dict(model, partner))


def _array(doc, key, shape):
    if key not in doc:
        raise ModelFileError(f"missing field {key!r}")
    try:
        a = np.array(doc[key], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ModelFileError(f"field {key!r} is not numeric: {exc}") from None
    if a.shape != shape:
        raise ModelFileError(f"field {key!r} has shape {a.shape}, expected {shape}")
    if not np.all(np.isfinite(a)):
        raise ModelFileError(f"field {key!r} has non-finite entries")
    return a


def model_from_dict(doc):
    if not isinstance(doc, dict):
        raise ModelFileError("model file must be a JSON object")
    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise ModelFileError("field 'n' must be a positive integer")
    slope = _array(doc, "slope", (n,))
    tau_slope = _array(doc, "tau_slope", (n,))
    coupling = _array(doc, "coupling", (n, n))
    if not is_symmetric(coupling):
        raise ModelFileError("coupling is not symmetric within 1e-12")
    tau = doc.get("tau", 1.0)
    if not isinstance(tau, (int, float)) or isinstance(tau, bool):
        raise ModelFileError("field 'tau' must be a number")
    model = DiabaticModel(slope, tau_slope, coupling, float(tau), str(doc.get("name", "")))
    partner = None
    if "partner" in doc:
        p = doc["partner"]
        if not isinstance(p, dict):
            raise ModelFileError("partner must be an object")
        b11 = _array(p, "b11", (n,))
        a1 = _array(p, "a1", (n, n))
        c = _array(p, "c", (n, n))
        if not (is_symmetric(a1) and is_symmetric(c)):
            raise ModelFileError("partner a1/c not symmetric within 1e-12")
        partner = TtauPartner(b11, a1, c)
    return model, partner


def loads_model(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"invalid JSON: {exc}") from None
    return model_from_dict(doc)


def matrix_csv(p):
    p = np.asarray(p)
    return "".join(",".join(_fmt_float(v) for v in row) + "\n" for row in p)
