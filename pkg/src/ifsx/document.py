"""Reading and writing ``.ifs`` documents.

A document is JSON::

    {
      "dimension": 1,
      "mode": "exact",
      "name": "F5",
      "maps": [
        {"ratio": "1/5", "orthogonal": [[1]], "translation": ["0"]},
        ...
      ],
      "attributes": {"osc": "declared", "notes": "..."}
    }

Exact documents hold rationals as ``"p/q"`` strings or integer literals.
Interval documents may also use decimal strings, which are enclosed.
"""
from __future__ import annotations

import json

import yaml

from . import scalar as sc
from .core import IFS, OrthogonalMap, Similitude
from .errors import IfsError, ValidationError

OSC_VALUES = ("declared", "witnessed", "ssc", "inherited")


class DocumentError(ValidationError):
    """A parse or validation problem, located in the source text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 path: tuple = ()):
        self.line, self.column, self.path = line, column, tuple(path)
        where = f"line {line}, column {column}: " if line is not None else ""
        at = "/".join(str(p) for p in path)
        super().__init__(f"{where}{message}" + (f" (at {at})" if at else ""))


def _locate(text: str, path) -> tuple[int | None, int | None]:
    """1-based (line, column) of the node at ``path``; JSON is valid YAML flow."""
    try:
        node = yaml.compose(text)
    except yaml.YAMLError:
        return None, None
    for key in path:
        if isinstance(node, yaml.MappingNode):
            node = next((v for k, v in node.value if k.value == key), None)
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
        else:
            node = None
        if node is None:
            return None, None
    return node.start_mark.line + 1, node.start_mark.column + 1


def _scalar(value, mode, text, path):
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise DocumentError(f"expected a rational, got {json.dumps(value)}", *_locate(text, path), path)
    try:
        if mode == sc.EXACT:
            if isinstance(value, float):
                raise ValueError(f"floating literal {value!r} in an exact document")
            return sc.parse_rational(value)
        if isinstance(value, str) and "/" in value:
            return sc.to_interval(sc.parse_rational(value))
        return sc.to_interval(value if isinstance(value, (int, float)) else value.strip())
    except (ValueError, TypeError) as exc:
        raise DocumentError(str(exc), *_locate(text, path), path) from None


def _fail(msg, text, path):
    raise DocumentError(msg, *_locate(text, path), path)


def parse_document(text: str) -> IFS:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object", 1, 1)
    mode = doc.get("mode", sc.EXACT)
    if mode not in (sc.EXACT, sc.INTERVAL):
        _fail(f"mode must be 'exact' or 'interval', got {mode!r}", text, ("mode",))
    d = doc.get("dimension")
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        _fail("dimension must be an integer >= 1", text, ("dimension",))
    maps = doc.get("maps")
    if not isinstance(maps, list):
        _fail("maps must be a list", text, ("maps",))
    if len(maps) < 2:
        _fail(f"an IFS needs at least two maps, got {len(maps)}", text, ("maps",))
    built = []
    for n, m in enumerate(maps):
        base = ("maps", n)
        if not isinstance(m, dict):
            _fail("each map must be an object", text, base)
        if "ratio" not in m or "translation" not in m:
            _fail("each map needs 'ratio' and 'translation'", text, base)
        ratio = _scalar(m["ratio"], mode, text, base + ("ratio",))
        if not (sc.lo(ratio) > 0 and sc.hi(ratio) < 1):
            _fail(f"ratio {m['ratio']} is not inside (0, 1)", text, base + ("ratio",))
        trans = m["translation"]
        if not isinstance(trans, list):
            trans = [trans] if d == 1 else _fail("translation must be a list", text, base + ("translation",))
        if len(trans) != d:
            _fail(f"translation has {len(trans)} entries, expected {d}", text, base + ("translation",))
        t = tuple(_scalar(v, mode, text, base + ("translation", k)) for k, v in enumerate(trans))
        rows = m.get("orthogonal")
        try:
            if rows is None:
                ortho = OrthogonalMap.identity(d, mode)
            else:
                if (not isinstance(rows, list) or len(rows) != d
                        or any(not isinstance(r, list) or len(r) != d for r in rows)):
                    _fail(f"orthogonal part must be a {d}x{d} matrix", text, base + ("orthogonal",))
                vals = [[_scalar(v, mode, text, base + ("orthogonal", r, c)) for c, v in enumerate(row)]
                        for r, row in enumerate(rows)]
                ortho = OrthogonalMap.from_rows(vals, mode)
            built.append(Similitude(ratio, ortho, t))
        except DocumentError:
            raise
        except IfsError as exc:
            _fail(str(exc), text, base + ("orthogonal",))
    attrs = doc.get("attributes") or {}
    if not isinstance(attrs, dict):
        _fail("attributes must be an object", text, ("attributes",))
    osc = attrs.get("osc")
    if osc is not None and osc not in OSC_VALUES:
        _fail(f"osc must be one of {OSC_VALUES}", text, ("attributes", "osc"))
    return IFS(built, osc=osc, name=doc.get("name"))


def read_document(path) -> IFS:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def _fmt(x) -> str:
    return sc.format_rational(x)


def to_document(ifs: IFS, notes: str | None = None) -> dict:
    if ifs.mode != sc.EXACT:
        raise ValidationError("only exact systems serialise losslessly")
    doc = {"dimension": ifs.dimension, "mode": sc.EXACT}
    if ifs.name:
        doc["name"] = ifs.name
    doc["maps"] = [
        {
            "ratio": _fmt(f.ratio),
            "orthogonal": [[_fmt(v) for v in row] for row in f.orthogonal.rows],
            "translation": [_fmt(v) for v in f.translation],
        }
        for f in ifs.maps
    ]
    attrs = {}
    if ifs.osc in ("declared", "witnessed"):
        attrs["osc"] = ifs.osc
    if notes:
        attrs["notes"] = notes
    if attrs:
        doc["attributes"] = attrs
    return doc


def serialize(ifs: IFS, notes: str | None = None) -> str:
    return json.dumps(to_document(ifs, notes), indent=2) + "\n"
