"""JSON exchange format ``blc-ast/1`` for types and objects of both calculi."""

from __future__ import annotations

import dataclasses
import json

from .syntax import NODE_CLASSES, And, Base, BlcError, Gets, Imp, Neg, Node, Or, Ty

VERSION = "blc-ast/1"

_TYPE_TAGS = {"base": Base, "imp": Imp, "gets": Gets, "and": And, "or": Or, "neg": Neg}
_TYPE_NAMES = {cls: tag for tag, cls in _TYPE_TAGS.items()}


class SchemaError(BlcError):
    pass


def _enc(x):
    if isinstance(x, Ty):
        out = {"node": _TYPE_NAMES[type(x)]}
        for f in dataclasses.fields(x):
            v = getattr(x, f.name)
            out[f.name] = v if isinstance(v, str) else _enc(v)
        return out
    if isinstance(x, Node):
        out = {"node": x.tag}
        for f in dataclasses.fields(x):
            v = getattr(x, f.name)
            if v is None:
                continue
            out[f.name] = v if isinstance(v, str) else _enc(v)
        return out
    raise SchemaError(f"cannot encode {x!r}")


def to_json(obj) -> dict:
    """Encode a type or object as a JSON-ready dict carrying the schema version."""
    return {"v": VERSION, **_enc(obj)}


def dumps(obj, **kw) -> str:
    return json.dumps(to_json(obj), ensure_ascii=False, **kw)


def _dec(d):
    if not isinstance(d, dict) or "node" not in d:
        raise SchemaError(f"expected a tagged node, got {d!r}")
    tag = d["node"]
    cls = _TYPE_TAGS.get(tag) or NODE_CLASSES.get(tag)
    if cls is None:
        raise SchemaError(f"unknown node tag {tag!r}")
    kwargs = {}
    for f in dataclasses.fields(cls):
        if f.name not in d:
            if f.default is not dataclasses.MISSING:
                continue
            raise SchemaError(f"node {tag!r} lacks field {f.name!r}")
        v = d[f.name]
        if (f.type == "str") != isinstance(v, str):
            raise SchemaError(f"field {f.name!r} of {tag!r} has the wrong shape")
        if isinstance(v, str):
            kwargs[f.name] = v
        elif v is None and f.default is None:
            kwargs[f.name] = None
        else:
            kwargs[f.name] = _dec(v)
    extra = set(d) - {f.name for f in dataclasses.fields(cls)} - {"node", "v"}
    if extra:
        raise SchemaError(f"node {tag!r} has unexpected fields {sorted(extra)}")
    return cls(**kwargs)


def from_json(doc):
    """Decode a document produced by :func:`to_json` (dict or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    if doc.get("v") != VERSION:
        raise SchemaError(f"unsupported schema version {doc.get('v')!r}")
    return _dec(doc)
