"""Loading, validating and serializing module documents.

Two input forms are accepted:

* a single JSON document with top-level keys ``nodes``, ``edges``, ``sets``
  and ``categories``;
* a directory of four tab-separated tables (``nodes.tsv``, ``edges.tsv``,
  ``sets.tsv``, ``memberships.tsv``) merged by the loader.

Both are UTF-8.  Duplicate memberships are deduplicated with a warning.
"""

from __future__ import annotations

import json
import warnings
from pathlib import Path
from typing import Any

from .errors import ParseError, ValidationError
from .model import AnnotatedModule, AnnotationSet, Interaction, Node


class ModuleDataWarning(UserWarning):
    """Recoverable data issue in an input document (e.g. duplicates)."""


def _require(obj: dict, key: str, where: str) -> Any:
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _opt_str(obj: dict, key: str) -> str | None:
    value = obj.get(key)
    if value is None:
        return None
    return str(value)


def parse_module(text: str) -> AnnotatedModule:
    """Parse a JSON module document into a validated AnnotatedModule."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ParseError("module document must be a JSON object")

    nodes = []
    for i, raw in enumerate(_require(doc, "nodes", "document")):
        where = f"nodes[{i}]"
        try:
            score = float(raw.get("score", 0.0))
        except (TypeError, ValueError):
            raise ParseError(f"{where}: score must be a number") from None
        nodes.append(Node(id=str(_require(raw, "id", where)),
                          label=str(_require(raw, "label", where)),
                          score=score,
                          info_url=_opt_str(raw, "url")))

    edges = []
    for i, raw in enumerate(_require(doc, "edges", "document")):
        where = f"edges[{i}]"
        edges.append(Interaction(source=str(_require(raw, "source", where)),
                                 target=str(_require(raw, "target", where))))

    sets = []
    for i, raw in enumerate(_require(doc, "sets", "document")):
        where = f"sets[{i}]"
        members = _require(raw, "members", where)
        if not isinstance(members, list):
            raise ParseError(f"{where}: members must be a list of node ids")
        member_ids = [str(m) for m in members]
        if len(set(member_ids)) != len(member_ids):
            warnings.warn(f"{where}: duplicate members deduplicated",
                          ModuleDataWarning, stacklevel=2)
        try:
            p_value = float(_require(raw, "p", where))
        except (TypeError, ValueError):
            raise ParseError(f"{where}: p must be a number") from None
        sets.append(AnnotationSet(id=str(_require(raw, "id", where)),
                                  label=str(_require(raw, "label", where)),
                                  category=str(_require(raw, "category", where)),
                                  p_value=p_value,
                                  members=frozenset(member_ids),
                                  info_url=_opt_str(raw, "url")))

    categories = [str(c) for c in _require(doc, "categories", "document")]
    return AnnotatedModule(tuple(nodes), tuple(edges), tuple(sets),
                           tuple(categories))


def _read_tsv(path: Path) -> list[dict[str, str]]:
    if not path.is_file():
        raise ParseError(f"missing table {path.name}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ParseError(f"{path.name}: empty table")
    header = lines[0].rstrip("\n").split("\t")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) < len([h for h in header if h not in ("url",)]):
            raise ParseError(f"{path.name} line {lineno}: expected "
                             f"{len(header)} columns, got {len(cells)}")
        rows.append({h: cells[k] if k < len(cells) else ""
                     for k, h in enumerate(header)})
    return rows


def load_module_tables(directory: str | Path) -> AnnotatedModule:
    """Load a module from four TSV tables in one directory."""
    directory = Path(directory)
    node_rows = _read_tsv(directory / "nodes.tsv")
    edge_rows = _read_tsv(directory / "edges.tsv")
    set_rows = _read_tsv(directory / "sets.tsv")
    member_rows = _read_tsv(directory / "memberships.tsv")

    members: dict[str, list[str]] = {}
    for i, row in enumerate(member_rows):
        where = f"memberships.tsv row {i + 1}"
        sid = _require(row, "set_id", where)
        nid = _require(row, "node_id", where)
        bucket = members.setdefault(sid, [])
        if nid in bucket:
            warnings.warn(f"{where}: duplicate membership ({sid}, {nid})",
                          ModuleDataWarning, stacklevel=2)
        else:
            bucket.append(nid)

    doc = {
        "nodes": [{"id": r["id"], "label": r["label"],
                   "score": float(r.get("score") or 0.0),
                   **({"url": r["url"]} if r.get("url") else {})}
                  for r in node_rows],
        "edges": [{"source": r["source"], "target": r["target"]}
                  for r in edge_rows],
        "sets": [{"id": r["id"], "label": r["label"], "category": r["category"],
                  "p": float(r["p"]), "members": members.get(r["id"], []),
                  **({"url": r["url"]} if r.get("url") else {})}
                 for r in set_rows],
        "categories": [],
    }
    seen: list[str] = []
    for r in set_rows:
        if r["category"] not in seen:
            seen.append(r["category"])
    doc["categories"] = seen
    return parse_module(json.dumps(doc))


def load_module(path: str | Path) -> AnnotatedModule:
    """Load a JSON document file or a TSV table directory."""
    path = Path(path)
    if path.is_dir():
        return load_module_tables(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_module(text)


def serialize_module(module: AnnotatedModule) -> str:
    """Canonical JSON for a module; parse(serialize(m)) == m."""
    doc = {
        "nodes": [{"id": n.id, "label": n.label, "score": n.score,
                   **({"url": n.info_url} if n.info_url else {})}
                  for n in module.nodes],
        "edges": [{"source": e.source, "target": e.target}
                  for e in module.interactions],
        "sets": [{"id": s.id, "label": s.label, "category": s.category,
                  "p": s.p_value,
                  "members": sorted(s.members),
                  **({"url": s.info_url} if s.info_url else {})}
                 for s in module.annotation_sets],
        "categories": list(module.categories),
    }
    return json.dumps(doc, indent=2, sort_keys=True)
