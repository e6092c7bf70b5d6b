"""JSON schemas for the CLI, with reals written to 17 significant digits.

Floats are emitted as ``format(x, ".17g")`` so every value round-trips and
the output text is a deterministic function of the data. Rationals are
written as strings ``"p/q"`` (integers stay integers); infinities use the
sentinels ``"-inf"`` and ``"inf"``.
"""
import csv
import io
import json
import math
from fractions import Fraction
from numbers import Integral, Rational, Real

import numpy as np

from .commutative_model import CharElement, DiscreteSpace, FnElement
from .errors import InputError
from .loomis_sikorski import GroundSet
from .matrix_model import DEFAULT_TOL, Projection, SymMatrix
from .states import BorelSetExpr, State


def fmt_real(x) -> str:
    """Decimal text of a float with 17 significant digits."""
    x = float(x)
    if math.isnan(x):
        raise InputError("NaN is not serializable")
    if math.isinf(x):
        return json.dumps("inf" if x > 0 else "-inf")
    text = format(x, ".17g")
    if x == 0:
        return "0.0"  # drops the sign of -0.0 so equal data gives equal text
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def _plain(obj):
    """Convert numpy and Fraction leaves to JSON-ready python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(_plain(v) for v in obj)
    if isinstance(obj, Integral):
        return int(obj)
    if isinstance(obj, Rational):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Real):
        return float(obj)
    return obj


def _emit(obj, indent, level, out):
    pad = " " * (indent * (level + 1)) if indent else ""
    end = " " * (indent * level) if indent else ""
    nl = "\n" if indent else ""
    sep = "," + nl if indent else ", "
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{" + nl)
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(sep)
            out.append(pad + json.dumps(k) + ": ")
            _emit(v, indent, level + 1, out)
        out.append(nl + end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list)) for v in obj)
        if flat or not indent:
            out.append("[")
            for i, v in enumerate(obj):
                if i:
                    out.append(", ")
                _emit(v, 0, 0, out)
            out.append("]")
            return
        out.append("[" + nl)
        for i, v in enumerate(obj):
            if i:
                out.append(sep)
            out.append(pad)
            _emit(v, indent, level + 1, out)
        out.append(nl + end + "]")
    elif isinstance(obj, float):
        out.append(fmt_real(obj))
    elif obj is None or isinstance(obj, (bool, int, str)):
        out.append(json.dumps(obj))
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent=2) -> str:
    """Deterministic JSON text; dict key order is preserved as given."""
    out = []
    _emit(_plain(obj), indent, 0, out)
    return "".join(out)


def parse_real(v):
    """Inverse of the writer: numbers, ``"p/q"`` strings and infinity sentinels."""
    if isinstance(v, bool):
        raise InputError(f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return v
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("inf", "+inf", "infinity"):
            return math.inf
        if s in ("-inf", "-infinity"):
            return -math.inf
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError):
            pass
    raise InputError(f"expected a number, got {v!r}")


def load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _require(doc, *keys):
    if not isinstance(doc, dict):
        raise InputError("expected a JSON object")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")


# ---------------------------------------------------------------- matrices


def matrix_to_json(a) -> dict:
    m = a.matrix if isinstance(a, Projection) else a
    doc = {"dim": m.dim, "entries": m.entries, "tol": m.tol}
    if isinstance(a, Projection):
        doc["rank"] = a.rank
    return doc


def matrix_from_json(doc, tol=None) -> SymMatrix:
    if isinstance(doc, list):
        doc = {"entries": doc}
    _require(doc, "entries")
    tol = doc.get("tol", DEFAULT_TOL) if tol is None else tol
    try:
        entries = np.array([[float(parse_real(x)) for x in row] for row in doc["entries"]], dtype=float)
    except TypeError:
        raise InputError("entries must be a list of rows") from None
    if "dim" in doc and entries.shape != (doc["dim"], doc["dim"]):
        raise InputError(f"declared dim {doc['dim']} does not match entries of shape {entries.shape}")
    return SymMatrix(entries, tol)


def projection_from_json(doc, tol=None) -> Projection:
    m = matrix_from_json(doc, tol)
    p = Projection(m)
    if "rank" in doc and doc["rank"] != p.rank:
        raise InputError(f"declared rank {doc['rank']} but the projection has rank {p.rank}")
    return p


# ------------------------------------------------------ commutative model


def fn_to_json(f) -> dict:
    if isinstance(f, CharElement):
        return {"space": list(f.space.labels), "values": list(f.underlying.values), "set": sorted(f.set)}
    return {"space": list(f.space.labels), "values": list(f.values)}


def fn_from_json(doc) -> FnElement:
    _require(doc, "space", "values")
    return FnElement(DiscreteSpace(tuple(doc["space"])), tuple(parse_real(v) for v in doc["values"]))


def ground_to_json(g: GroundSet) -> dict:
    return {"atoms": list(g.atoms), "null": list(g.null_part)}


def ground_from_json(doc) -> GroundSet:
    _require(doc, "atoms")
    return GroundSet(tuple(doc["atoms"]), tuple(doc.get("null", ())))


def labelled_fn_from_json(ground: GroundSet, mapping) -> FnElement:
    if not isinstance(mapping, dict):
        raise InputError("functions on a ground set are label -> value maps")
    return ground.function({k: parse_real(v) for k, v in mapping.items()})


# ------------------------------------------------------- states and sets


def state_to_json(rho: State) -> dict:
    if rho.kind == "trace":
        return {"kind": "trace", "w": matrix_to_json(rho.w)}
    return {"kind": "weights", "space": list(rho.space.labels), "p": list(rho.p)}


def state_from_json(doc) -> State:
    _require(doc, "kind")
    if doc["kind"] == "trace":
        _require(doc, "w")
        return State.trace(matrix_from_json(doc["w"]))
    if doc["kind"] == "weights":
        _require(doc, "space", "p")
        return State.weights(DiscreteSpace(tuple(doc["space"])), [parse_real(v) for v in doc["p"]])
    raise InputError(f"unknown state kind {doc['kind']!r}")


def borel_to_json(d: BorelSetExpr) -> dict:
    return {"intervals": [list(iv) for iv in d.intervals], "points": list(d.points)}


def borel_from_json(doc) -> BorelSetExpr:
    if not isinstance(doc, dict):
        raise InputError("a Borel set is a JSON object")
    intervals = doc.get("intervals", [])
    if not isinstance(intervals, list) or any(not isinstance(iv, list) for iv in intervals):
        raise InputError("intervals must be a list of [lo, hi] pairs")
    conv = [[float(parse_real(x)) for x in iv] for iv in intervals]
    points = [float(parse_real(x)) for x in doc.get("points", [])]
    return BorelSetExpr(tuple(tuple(iv) for iv in conv), tuple(points))


# -------------------------------------------------------------- formats


def flatten(obj, prefix=""):
    """``(dotted.key, scalar)`` rows in document order."""
    obj = _plain(obj)
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else k)
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def _cell(v):
    if isinstance(v, float):
        return json.loads(fmt_real(v)) if math.isinf(v) else fmt_real(v)
    if v is None:
        return ""
    return str(v)


def to_csv(obj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in flatten(obj):
        w.writerow([k, _cell(v)])
    return buf.getvalue()


def to_pretty(obj) -> str:
    rows = list(flatten(obj))
    width = max((len(k) for k, _ in rows), default=0)
    return "\n".join(f"{k.ljust(width)}  {_cell(v)}" for k, v in rows) + "\n"


def render(obj, fmt="json") -> str:
    if fmt == "json":
        return dumps(obj) + "\n"
    if fmt == "csv":
        return to_csv(obj)
    if fmt == "pretty":
        return to_pretty(obj)
    raise InputError(f"unknown format {fmt!r}")
