"""JSON documents for the library's value types.

Every document is ``{"schema_version", "field_config", "type", "data"}``.  Quadratic
field elements are written "a+b*sqrt(d)" and finite-field elements as little-endian
hex digit strings.  Malformed input raises :class:`SchemaError`; well-formed input
describing an invalid object raises whatever the constructor raises.
"""

from __future__ import annotations

import json
from typing import Any

from .arith import FieldConfig, QuadElem
from .eigen import EigenSystem
from .errors import SchemaError
from .ffield import FFElem
from .qexp import QExpansion
from .serre_oracle import Irreducible, Reducible
from .shifter import WeightSet
from .twistchar import TwistChar
from .weightlat import Weight

SCHEMA_VERSION = 1

QEXP = "qexp"
EIGENSYSTEM = "eigensystem"
CHARACTER = "character"
INERTIAL_TYPE = "inertial_type"
WEIGHT_SET = "weight_set"
DOCUMENT_TYPES = (QEXP, EIGENSYSTEM, CHARACTER, INERTIAL_TYPE, WEIGHT_SET)


# -- scalar encodings ------------------------------------------------------------

def config_to_json(cfg: FieldConfig | None):
    return None if cfg is None else {"d": cfg.d, "p": cfg.p, "k": cfg.k}


def config_from_json(obj) -> FieldConfig | None:
    if obj is None:
        return None
    _require_dict(obj, "field_config", ("d", "p", "k"))
    return FieldConfig(_int(obj["d"], "d"), _int(obj["p"], "p"), _int(obj["k"], "k"))


def weight_to_json(w: Weight) -> dict:
    return {"k": list(w.k), "l": list(w.l)}


def weight_from_json(obj) -> Weight:
    _require_dict(obj, "weight", ("k", "l"))
    return Weight(_pair(obj["k"], "k"), _pair(obj["l"], "l"))


def quad_to_json(x: QuadElem) -> str:
    return str(x)


def quad_from_json(text, cfg: FieldConfig) -> QuadElem:
    if not isinstance(text, str):
        raise SchemaError(f"expected a quadratic element string, got {text!r}")
    try:
        return cfg.parse(text)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def ff_to_json(x: FFElem | None):
    return None if x is None else x.hex()


def ff_from_json(text, cfg: FieldConfig) -> FFElem:
    if not isinstance(text, str):
        raise SchemaError(f"expected an ff-hex string, got {text!r}")
    try:
        return cfg.field.from_hex(text)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


# -- object encodings --------------------------------------------------------------

def _qexp_data(f: QExpansion) -> dict:
    coeffs = sorted(f.coeffs.items(), key=lambda kv: kv[0].sort_key())
    return {"weight": weight_to_json(f.weight), "bound": f.bound, "level": quad_to_json(f.level),
            "r0": ff_to_json(f.r0), "coeffs": [[quad_to_json(m), ff_to_json(c)] for m, c in coeffs]}


def _qexp_from(data, cfg: FieldConfig) -> QExpansion:
    _require_dict(data, QEXP, ("weight", "bound", "level", "r0", "coeffs"))
    coeffs = {}
    for entry in _list(data["coeffs"], "coeffs"):
        if not isinstance(entry, list) or len(entry) != 2:
            raise SchemaError(f"coefficient entry {entry!r} must be [index, value]")
        coeffs[quad_from_json(entry[0], cfg)] = ff_from_json(entry[1], cfg)
    return QExpansion(cfg, weight_from_json(data["weight"]), _int(data["bound"], "bound"), coeffs,
                      ff_from_json(data["r0"], cfg), quad_from_json(data["level"], cfg))


def _eigen_data(es: EigenSystem) -> dict:
    rows = sorted(es.table.items(), key=lambda kv: kv[0].sort_key())
    return {"weight": weight_to_json(es.weight), "level": quad_to_json(es.level),
            "ap": ff_to_json(es.ap),
            "stabilised": sorted((quad_to_json(g) for g in es.stabilised)),
            "table": [{"v": quad_to_json(g), "a": ff_to_json(a), "d": ff_to_json(d)}
                      for g, (a, d) in rows]}


def _eigen_from(data, cfg: FieldConfig) -> EigenSystem:
    _require_dict(data, EIGENSYSTEM, ("weight", "level", "ap", "stabilised", "table"))
    table = {}
    for row in _list(data["table"], "table"):
        _require_dict(row, "table row", ("v", "a", "d"))
        d = None if row["d"] is None else ff_from_json(row["d"], cfg)
        table[quad_from_json(row["v"], cfg)] = (ff_from_json(row["a"], cfg), d)
    ap = None if data["ap"] is None else ff_from_json(data["ap"], cfg)
    stab = frozenset(quad_from_json(g, cfg) for g in _list(data["stabilised"], "stabilised"))
    return EigenSystem(cfg, weight_from_json(data["weight"]), table,
                       quad_from_json(data["level"], cfg), ap, stab)


def _char_data(chi: TwistChar) -> dict:
    return {"modulus": quad_to_json(chi.modulus), "lprime": list(chi.lprime),
            "values": [ff_to_json(v) for v in chi.values]}


def _char_from(data, cfg: FieldConfig) -> TwistChar:
    _require_dict(data, CHARACTER, ("modulus", "lprime", "values"))
    values = [ff_from_json(v, cfg) for v in _list(data["values"], "values")]
    return TwistChar(cfg, quad_from_json(data["modulus"], cfg), values, _pair(data["lprime"], "lprime"))


def _type_data(sigma) -> dict:
    if isinstance(sigma, Reducible):
        return {"p": sigma.p, "reducible": {"e1": sigma.e1, "e2": sigma.e2, "ext": sigma.ext}}
    return {"p": sigma.p, "irreducible": {"c": sigma.c}}


def _type_from(data):
    if not isinstance(data, dict) or "p" not in data:
        raise SchemaError("inertial type must be an object with p")
    p = _int(data["p"], "p")
    kinds = [k for k in ("reducible", "irreducible") if k in data]
    if len(kinds) != 1:
        raise SchemaError("inertial type needs exactly one of 'reducible' or 'irreducible'")
    body = data[kinds[0]]
    if kinds[0] == "reducible":
        _require_dict(body, "reducible type", ("e1", "e2", "ext"))
        if not isinstance(body["ext"], str):
            raise SchemaError("ext must be a string")
        return Reducible(_int(body["e1"], "e1"), _int(body["e2"], "e2"), body["ext"], p)
    _require_dict(body, "irreducible type", ("c",))
    return Irreducible(_int(body["c"], "c"), p)


def _ws_data(ws: WeightSet) -> dict:
    return {"p": ws.p, "weights": [dict(weight_to_json(w), tag=t) for w, t in ws.items()]}


def _ws_from(data, cfg: FieldConfig | None) -> WeightSet:
    _require_dict(data, WEIGHT_SET, ("weights",))
    entries = {}
    for row in _list(data["weights"], "weights"):
        _require_dict(row, "weight entry", ("k", "l"))
        tag = row.get("tag", "initial")
        if not isinstance(tag, str):
            raise SchemaError("tag must be a string")
        entries[weight_from_json(row)] = tag
    if "p" in data:
        p = _int(data["p"], "p")
    elif cfg is not None:
        p = cfg.p
    else:
        raise SchemaError("weight set needs p or a field_config")
    return WeightSet(p, entries, cfg)


# -- documents ---------------------------------------------------------------------

def _doc_parts(obj) -> tuple[str, FieldConfig | None, dict]:
    if isinstance(obj, QExpansion):
        return QEXP, obj.cfg, _qexp_data(obj)
    if isinstance(obj, EigenSystem):
        return EIGENSYSTEM, obj.cfg, _eigen_data(obj)
    if isinstance(obj, TwistChar):
        return CHARACTER, obj.cfg, _char_data(obj)
    if isinstance(obj, (Reducible, Irreducible)):
        return INERTIAL_TYPE, None, _type_data(obj)
    if isinstance(obj, WeightSet):
        return WEIGHT_SET, obj.cfg, _ws_data(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_document(obj) -> dict:
    kind, cfg, data = _doc_parts(obj)
    return {"schema_version": SCHEMA_VERSION, "field_config": config_to_json(cfg),
            "type": kind, "data": data}


def from_document(doc) -> Any:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    _require_dict(doc, "document", ("schema_version", "field_config", "type", "data"))
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {doc['schema_version']!r}")
    kind = doc["type"]
    if kind not in DOCUMENT_TYPES:
        raise SchemaError(f"unknown document type {kind!r}")
    cfg = config_from_json(doc["field_config"])
    data = doc["data"]
    if kind == INERTIAL_TYPE:
        return _type_from(data)
    if kind == WEIGHT_SET:
        ws = _ws_from(data, cfg)
        if cfg is not None and ws.p != cfg.p:
            raise SchemaError("weight set p disagrees with field_config")
        return ws
    if cfg is None:
        raise SchemaError(f"a {kind} document needs a field_config")
    return {QEXP: _qexp_from, EIGENSYSTEM: _eigen_from, CHARACTER: _char_from}[kind](data, cfg)


def dumps(obj) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_document(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return from_document(doc)


# -- validation helpers ------------------------------------------------------------

def _require_dict(obj, what: str, keys) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{what} must be a JSON object")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise SchemaError(f"{what} is missing {', '.join(missing)}")


def _int(x, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{what} must be an integer, got {x!r}")
    return x


def _list(x, what: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(f"{what} must be a list")
    return x


def _pair(x, what: str) -> tuple[int, int]:
    if not isinstance(x, list) or len(x) != 2:
        raise SchemaError(f"{what} must be a list of two integers")
    return (_int(x[0], what), _int(x[1], what))
