"""Typed property graph, tweet ingestion and basic traversal.

Node ids are opaque strings namespaced by type (``user:alice``,
``hashtag:ados``) so that entities of different types never collide.
Edges are stored directed; repeated edges with the same endpoints and
label are collapsed into one edge whose ``weight`` property counts the
multiplicity. Every metric works on the undirected projection returned by
:meth:`PropertyGraph.projection`.
"""
from __future__ import annotations

import json
import logging
from collections import deque
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from typing import Any, Iterable, Iterator, NamedTuple

import numpy as np

from .errors import DataError, GraphError

logger = logging.getLogger(__name__)

TWEET, USER, HASHTAG, URL = "tweet", "user", "hashtag", "url"
AUTHORS, MENTIONS, USES, CONTAINS = "authors", "mentions", "uses", "contains"


class Node(NamedTuple):
    label: str
    props: dict


class Edge(NamedTuple):
    source: str
    target: str
    label: str
    props: dict


class Projection(NamedTuple):
    """Simple undirected view of a graph in CSR form.

    ``ids[i]`` is the node id of row ``i``. Self loops are dropped and
    parallel or antiparallel edges collapse into one undirected edge.
    ``pairs`` lists every undirected edge once as ``(i, j)`` with ``i < j``.
    """

    ids: list
    indptr: np.ndarray
    indices: np.ndarray
    pairs: list

    @property
    def n(self) -> int:
        return len(self.ids)

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)


def node_id(label: str, key: str) -> str:
    return f"{label}:{key}"


class PropertyGraph:
    """Directed multigraph-free property graph with typed nodes and edges.

    Build it with :meth:`add_node` / :meth:`add_edge`; once handed to the
    analysis code it is treated as read-only.
    """

    def __init__(self):
        self.nodes: dict[str, Node] = {}
        self.edges: dict[str, Edge] = {}
        self._out: dict[str, list[str]] = {}
        self._in: dict[str, list[str]] = {}
        self._by_type: dict[str, list[str]] = {}
        self._projection: Projection | None = None

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, n):
        return n in self.nodes

    def __repr__(self):
        return f"PropertyGraph(nodes={len(self.nodes)}, edges={len(self.edges)})"

    # -- construction -------------------------------------------------------

    def add_node(self, nid: str, label: str, props: dict | None = None) -> None:
        """Add a node; re-adding an existing id merges the property maps."""
        if nid in self.nodes:
            node = self.nodes[nid]
            if node.label != label:
                raise GraphError(f"node {nid!r} already exists with label {node.label!r}")
            if props:
                node.props.update(props)
            return
        self.nodes[nid] = Node(label, dict(props or {}))
        self._out[nid] = []
        self._in[nid] = []
        self._projection = None

    def add_edge(self, source: str, target: str, label: str, props: dict | None = None,
                 edge_id: str | None = None) -> str:
        """Add an edge and return its id.

        An edge with the same endpoints and label as an existing one bumps
        that edge's ``weight`` instead of creating a parallel edge.
        """
        for end in (source, target):
            if end not in self.nodes:
                raise GraphError(f"edge endpoint {end!r} is not a node")
        eid = edge_id or f"{label}|{source}|{target}"
        if eid in self.edges:
            existing = self.edges[eid]
            if (existing.source, existing.target, existing.label) != (source, target, label):
                raise GraphError(f"duplicate edge id {eid!r}")
            add = (props or {}).get("weight", 1)
            existing.props["weight"] = existing.props.get("weight", 1) + add
            return eid
        p = {"weight": 1}
        p.update(props or {})
        self.edges[eid] = Edge(source, target, label, p)
        self._out[source].append(eid)
        self._in[target].append(eid)
        self._by_type.setdefault(label, []).append(eid)
        self._projection = None
        return eid

    # -- queries ------------------------------------------------------------

    def label(self, n: str) -> str:
        return self._node(n).label

    def props(self, n: str) -> dict:
        return self._node(n).props

    def nodes_of(self, label: str) -> list[str]:
        return [n for n, node in self.nodes.items() if node.label == label]

    def edges_of(self, label: str) -> list[str]:
        return list(self._by_type.get(label, ()))

    def node_labels(self) -> set[str]:
        return {node.label for node in self.nodes.values()}

    def edge_labels(self) -> set[str]:
        return set(self._by_type)

    def out_edges(self, n: str) -> list[str]:
        self._node(n)
        return self._out[n]

    def in_edges(self, n: str) -> list[str]:
        self._node(n)
        return self._in[n]

    def incident(self, n: str, edge_type: str | None = None,
                 direction: str = "both") -> Iterator[tuple[str, str]]:
        """Yield ``(edge_id, other_endpoint)`` for edges incident to ``n``."""
        self._node(n)
        if direction not in ("out", "in", "both"):
            raise ValueError(f"direction must be out, in or both, not {direction!r}")
        if direction in ("out", "both"):
            for eid in self._out[n]:
                e = self.edges[eid]
                if edge_type is None or e.label == edge_type:
                    yield eid, e.target
        if direction in ("in", "both"):
            for eid in self._in[n]:
                e = self.edges[eid]
                if edge_type is None or e.label == edge_type:
                    yield eid, e.source

    def neighbors(self, n: str, edge_type: str | None = None,
                  direction: str = "both") -> set[str]:
        return {other for _, other in self.incident(n, edge_type, direction)}

    def degree(self, n: str) -> int:
        """Degree of ``n`` in the simple undirected projection."""
        return len(self.neighbors(n) - {n})

    def _node(self, n):
        try:
            return self.nodes[n]
        except KeyError:
            raise GraphError(f"unknown node id {n!r}") from None

    # -- derived views ------------------------------------------------------

    def projection(self) -> Projection:
        """Undirected simple projection, cached until the graph changes."""
        if self._projection is None:
            ids = list(self.nodes)
            index = {n: i for i, n in enumerate(ids)}
            nbrs: list[set[int]] = [set() for _ in ids]
            for e in self.edges.values():
                i, j = index[e.source], index[e.target]
                if i != j:
                    nbrs[i].add(j)
                    nbrs[j].add(i)
            indptr = np.zeros(len(ids) + 1, dtype=np.int64)
            for i, s in enumerate(nbrs):
                indptr[i + 1] = indptr[i] + len(s)
            indices = np.empty(indptr[-1], dtype=np.int64)
            pairs = []
            for i, s in enumerate(nbrs):
                row = sorted(s)
                indices[indptr[i]:indptr[i + 1]] = row
                pairs.extend((i, j) for j in row if j > i)
            self._projection = Projection(ids, indptr, indices, pairs)
        return self._projection

    def copy(self) -> "PropertyGraph":
        return induced_subgraph(self, self.nodes)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "nodes": [{"id": n, "label": node.label, "props": node.props}
                      for n, node in self.nodes.items()],
            "edges": [{"id": eid, "source": e.source, "target": e.target,
                       "label": e.label, "props": e.props}
                      for eid, e in self.edges.items()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PropertyGraph":
        g = cls()
        try:
            for item in data["nodes"]:
                g.add_node(item["id"], item["label"], item.get("props"))
            for item in data["edges"]:
                eid = item.get("id")
                if eid in g.edges:
                    raise GraphError(f"duplicate edge id {eid!r}")
                g.add_edge(item["source"], item["target"], item["label"],
                           item.get("props"), edge_id=eid)
        except (KeyError, TypeError) as exc:
            raise DataError(f"malformed graph snapshot: {exc}") from exc
        return g

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True))

    @classmethod
    def load(cls, path) -> "PropertyGraph":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise DataError(f"graph snapshot is not JSON: {exc}") from exc


@dataclass
class TweetRecord:
    id: str
    author: str
    text: str = ""
    created_at: str = ""
    hashtags: list = field(default_factory=list)
    mentions: list = field(default_factory=list)
    urls: list = field(default_factory=list)
    popularity: int = 0
    author_followers: int = 0

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("tweet id must be a non-empty string")
        if not isinstance(self.author, str) or not self.author:
            raise ValueError("author must be a non-empty string")
        for name in ("popularity", "author_followers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer")
        if self.text is None:
            self.text = ""
        if self.created_at:
            parse_date(self.created_at)
        self.hashtags = [h.lstrip("#").lower() for h in self.hashtags]
        self.mentions = [m.lstrip("@") for m in self.mentions]
        self.urls = list(self.urls)

    @property
    def date(self) -> str:
        return parse_date(self.created_at).isoformat() if self.created_at else ""

    @classmethod
    def from_dict(cls, data: dict) -> "TweetRecord":
        known = cls.__dataclass_fields__
        unknown = set(data) - set(known)
        if unknown:
            raise ValueError(f"unknown fields {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__}


def parse_date(text: str) -> date:
    try:
        return datetime.fromisoformat(text.replace("Z", "+00:00")).date()
    except (ValueError, AttributeError):
        try:
            return date.fromisoformat(text)
        except (ValueError, TypeError):
            raise ValueError(f"not an ISO-8601 date: {text!r}") from None


def read_jsonl(path) -> list[TweetRecord]:
    """Read one :class:`TweetRecord` per line; blank lines are skipped."""
    records = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(TweetRecord.from_dict(json.loads(line)))
            except (ValueError, TypeError) as exc:
                raise DataError(f"malformed record: {exc}", line=lineno) from exc
    return records


def write_jsonl(records: Iterable[TweetRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict(), sort_keys=True) + "\n")


def ingest_tweets(records: Iterable[TweetRecord | dict[str, Any]]) -> PropertyGraph:
    """Build the tweet/user/hashtag/url graph from tweet records.

    Raises :class:`DataError` (with the 1-based record position) on a
    malformed or duplicate record.
    """
    g = PropertyGraph()
    seen = set()
    for pos, rec in enumerate(records, 1):
        if isinstance(rec, dict):
            try:
                rec = TweetRecord.from_dict(rec)
            except (ValueError, TypeError) as exc:
                raise DataError(f"malformed record: {exc}", line=pos) from exc
        if rec.id in seen:
            raise DataError(f"duplicate tweet id {rec.id!r}", line=pos)
        seen.add(rec.id)

        t = node_id(TWEET, rec.id)
        g.add_node(t, TWEET, {"text": rec.text, "date": rec.date,
                              "popularity": rec.popularity})
        author = node_id(USER, rec.author)
        g.add_node(author, USER, {"name": rec.author, "followers": rec.author_followers})
        g.add_edge(author, t, AUTHORS)
        for m in rec.mentions:
            u = node_id(USER, m)
            g.add_node(u, USER, {"name": m})
            g.add_edge(t, u, MENTIONS)
        for h in rec.hashtags:
            hid = node_id(HASHTAG, h)
            g.add_node(hid, HASHTAG, {"text": h})
            g.add_edge(t, hid, USES)
        for url in rec.urls:
            uid = node_id(URL, url)
            g.add_node(uid, URL, {"url": url})
            g.add_edge(t, uid, CONTAINS)
    logger.debug("ingested %d tweets into %r", len(seen), g)
    return g


def neighbors(g: PropertyGraph, n: str, edge_type: str | None = None,
              direction: str = "both") -> set[str]:
    return g.neighbors(n, edge_type, direction)


def induced_subgraph(g: PropertyGraph, ns: Iterable[str]) -> PropertyGraph:
    """Subgraph on ``ns`` with every edge of ``g`` whose endpoints are both in ``ns``.

    Node and edge order follow ``g``; property maps are copied.
    """
    keep = set(ns)
    missing = [n for n in keep if n not in g.nodes]
    if missing:
        raise GraphError(f"unknown node id {sorted(missing)[0]!r}")
    sub = PropertyGraph()
    ordered = [n for n in g.nodes if n in keep] if len(keep) * 4 > len(g.nodes) else \
        sorted(keep, key=_position(g).__getitem__)
    for n in ordered:
        node = g.nodes[n]
        sub.add_node(n, node.label, dict(node.props))
    eids = sorted({eid for n in ordered for eid in g._out[n] if g.edges[eid].target in keep},
                  key=_edge_position(g).__getitem__)
    for eid in eids:
        e = g.edges[eid]
        sub.edges[eid] = Edge(e.source, e.target, e.label, dict(e.props))
        sub._out[e.source].append(eid)
        sub._in[e.target].append(eid)
        sub._by_type.setdefault(e.label, []).append(eid)
    return sub


def _position(g):
    pos = getattr(g, "_node_pos", None)
    if pos is None or len(pos) != len(g.nodes):
        pos = {n: i for i, n in enumerate(g.nodes)}
        g._node_pos = pos
    return pos


def _edge_position(g):
    pos = getattr(g, "_edge_pos", None)
    if pos is None or len(pos) != len(g.edges):
        pos = {e: i for i, e in enumerate(g.edges)}
        g._edge_pos = pos
    return pos


def connected_components(g: PropertyGraph) -> list[set[str]]:
    """Components of the undirected view, largest first (ties by first node)."""
    seen: set[str] = set()
    comps = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for _, w in g.incident(v):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        comps.append(comp)
    # sort is stable, so equal-size components keep discovery order
    comps.sort(key=len, reverse=True)
    return comps


def largest_component(g: PropertyGraph) -> PropertyGraph:
    comps = connected_components(g)
    if len(comps) <= 1:
        return g
    return induced_subgraph(g, comps[0])


def is_connected(g: PropertyGraph) -> bool:
    return len(g.nodes) > 0 and len(connected_components(g)) == 1
