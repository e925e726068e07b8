"""Generate step: background query, soft grouping, candidate construction, C1/C2 filtering."""
from __future__ import annotations

import json
import logging
import operator
from dataclasses import dataclass, field
from typing import Iterable

from .errors import ConfigError, DataError, GraphError
from .graph import (AUTHORS, CONTAINS, HASHTAG, MENTIONS, TWEET, USER, USES, PropertyGraph,
                    connected_components, induced_subgraph, parse_date)
from .metrics import tokenize
from .patterns import GroupPattern

logger = logging.getLogger(__name__)

RULES = ("G1", "G2", "G3")
# edge types that tie a tweet to its "directly associated" nodes, with the
# direction in which the associated node is reached from the tweet
ASSOCIATIONS = ((AUTHORS, "in"), (MENTIONS, "out"), (USES, "out"), (CONTAINS, "out"))
NULL = None


@dataclass
class NodeGroup:
    key: dict
    members: set

    def tweets(self, g: PropertyGraph) -> list[str]:
        return [n for n in sorted(self.members) if g.nodes[n].label == TWEET]


@dataclass
class CandidateSubgraph:
    cid: str
    graph: PropertyGraph
    group_key: dict
    rule: str
    corpus: list = field(default_factory=list)

    @property
    def provenance(self) -> dict:
        return {"group_key": self.group_key, "rule": self.rule}


_COMPARATORS = {
    "<": operator.lt, "<=": operator.le, "≤": operator.le,
    "=": operator.eq, "==": operator.eq,
    ">=": operator.ge, "≥": operator.ge, ">": operator.gt,
    "!=": operator.ne, "≠": operator.ne,
}


@dataclass(frozen=True)
class Predicate:
    label: str  # node or edge label the predicate applies to; "*" for all
    prop: str
    op: str
    value: object

    def __post_init__(self):
        if self.op not in _COMPARATORS:
            raise ConfigError(f"unknown comparator {self.op!r}")
        if not self.prop:
            raise ConfigError("predicate property name must be non-empty")

    def applies(self, label: str) -> bool:
        return self.label in ("*", label)

    def holds(self, props: dict) -> bool:
        if self.prop not in props:
            return False
        try:
            return bool(_COMPARATORS[self.op](props[self.prop], self.value))
        except TypeError:
            return False


@dataclass
class PredicateSpec:
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    @classmethod
    def from_config(cls, items: Iterable) -> "PredicateSpec":
        """Build from ``[scope, property, comparator, value]`` entries.

        ``scope`` is ``node``, ``edge``, ``node:<label>`` or ``edge:<label>``.
        """
        spec = cls()
        for item in items or ():
            try:
                scope, prop, op, value = item
            except (TypeError, ValueError):
                raise ConfigError(f"predicate must be [scope, property, comparator, value]: {item!r}")
            kind, _, label = str(scope).partition(":")
            if kind not in ("node", "edge"):
                raise ConfigError(f"predicate scope must start with node or edge: {scope!r}")
            pred = Predicate(label or "*", prop, op, value)
            (spec.nodes if kind == "node" else spec.edges).append(pred)
        return spec

    def check(self, g: PropertyGraph) -> str | None:
        """Name of the first violated predicate family, or None if all hold."""
        for p in self.nodes:
            for node in g.nodes.values():
                if p.applies(node.label) and not p.holds(node.props):
                    return "node predicate"
        for p in self.edges:
            for e in g.edges.values():
                if p.applies(e.label) and not p.holds(e.props):
                    return "edge predicate"
        return None


def _normalize_keyword(k: str) -> str:
    return k.strip().lstrip("#").lower()


def tweet_matches(g: PropertyGraph, t: str, keywords: list[str]) -> bool:
    """Hashtags: case-insensitive substring; text: whole lowercased tokens."""
    hashtags = [g.nodes[h].props.get("text", "") for _, h in g.incident(t, USES, "out")]
    tokens = tokenize(g.nodes[t].props.get("text") or "")
    for kw in keywords:
        if any(kw in h.lower() for h in hashtags):
            return True
        kw_tokens = tokenize(kw)
        if not kw_tokens:
            continue
        width = len(kw_tokens)
        if any(tokens[i:i + width] == kw_tokens for i in range(len(tokens) - width + 1)):
            return True
    return False


def associated(g: PropertyGraph, t: str) -> list[str]:
    out = []
    for label, direction in ASSOCIATIONS:
        out.extend(w for _, w in g.incident(t, label, direction))
    return out


def initial_query(g: PropertyGraph, keywords: list[str], date_from=None) -> PropertyGraph:
    """Background graph: matching tweets plus their authors, mentions, hashtags and urls."""
    if not keywords:
        raise ConfigError("initial query needs at least one keyword")
    kws = [_normalize_keyword(k) for k in keywords if _normalize_keyword(k)]
    if isinstance(date_from, str):
        date_from = parse_date(date_from)
    keep = set()
    for t, node in g.nodes.items():
        if node.label != TWEET:
            continue
        if date_from is not None:
            d = node.props.get("date")
            if not d or parse_date(d) < date_from:
                continue
        if tweet_matches(g, t, kws):
            keep.add(t)
            keep.update(associated(g, t))
    if not keep:
        raise DataError("empty background graph: no tweet matches the query")
    return induced_subgraph(g, keep)


def _key_value(props: dict, key: str):
    value = props.get(key, NULL)
    if isinstance(value, (list, dict)):
        value = json.dumps(value, sort_keys=True)
    return value


def _sort_token(key: tuple):
    return tuple((v is None, type(v).__name__, v if v is not None else 0) for v in key)


def group_nodes(g: PropertyGraph, pattern: GroupPattern) -> list[NodeGroup]:
    """One group per distinct combination of grouping-key values.

    A node matched with several key combinations lands in several groups.
    Missing properties group under ``None``.
    """
    names = [f"{pattern.left.label}.{k}" for k in pattern.left.keys]
    if pattern.right is not None:
        right_names = [f"{pattern.right.label}.{k}" for k in pattern.right.keys]
        if set(names) & set(right_names):
            names = [f"left.{n}" for n in names]
            right_names = [f"right.{n}" for n in right_names]
        names += right_names

    groups: dict[tuple, set] = {}
    if pattern.edge is None:
        for n in g.nodes_of(pattern.left.label):
            props = g.nodes[n].props
            key = tuple(_key_value(props, k) for k in pattern.left.keys)
            groups.setdefault(key, set()).add(n)
    else:
        for eid in g.edges_of(pattern.edge.label):
            e = g.edges[eid]
            a, b = (e.source, e.target) if pattern.edge.direction == "out" else (e.target, e.source)
            if g.nodes[a].label != pattern.left.label or g.nodes[b].label != pattern.right.label:
                continue
            key = tuple(_key_value(g.nodes[a].props, k) for k in pattern.left.keys) + \
                tuple(_key_value(g.nodes[b].props, k) for k in pattern.right.keys)
            groups.setdefault(key, set()).update((a, b))
    return [NodeGroup(dict(zip(names, key)), members)
            for key, members in sorted(groups.items(), key=lambda kv: _sort_token(kv[0]))]


def _g1_nodes(g, tweets):
    nodes = set(tweets)
    for t in tweets:
        nodes.update(associated(g, t))
    return nodes


def _g2_graph(g, tweets):
    seed = [t for t in tweets if any(True for _ in g.incident(t, MENTIONS, "out"))]
    nodes = _g1_nodes(g, seed)
    sub = induced_subgraph(g, nodes)
    allowed = {AUTHORS, MENTIONS, USES, CONTAINS}
    out = PropertyGraph()
    for n, node in sub.nodes.items():
        out.add_node(n, node.label, node.props)
    for eid, e in sub.edges.items():
        if e.label in allowed:
            out.add_edge(e.source, e.target, e.label, dict(e.props), edge_id=eid)
    return out


def construct_candidate(g: PropertyGraph, grp: NodeGroup, rule: str, hop_budget: int = 1,
                        cid: str = "", g3_base: str = "G1") -> CandidateSubgraph:
    """Expand a node group into a candidate subgraph.

    G1 takes the group's tweets with every directly associated node. G2 keeps
    only tweets that mention someone, with the mention/authorship network
    plus the hashtags and urls of those tweets. G3 grows the G1 (or G2)
    result by ``hop_budget`` hops around its mentioned users and hashtags.
    """
    if rule not in RULES:
        raise ConfigError(f"unknown construction rule {rule!r}; expected one of {RULES}")
    if g3_base not in ("G1", "G2"):
        raise ConfigError("G3 must build on G1 or G2")
    missing = [n for n in grp.members if n not in g.nodes]
    if missing:
        raise GraphError(f"group member {sorted(missing)[0]!r} not in background graph")
    tweets = grp.tweets(g)
    base = rule if rule != "G3" else g3_base
    if base == "G1":
        sub = induced_subgraph(g, _g1_nodes(g, tweets))
    else:
        sub = _g2_graph(g, tweets)
    if rule == "G3":
        if hop_budget < 1:
            raise ConfigError("hop_budget must be positive")
        frontier = set()
        for t in sub.nodes:
            if sub.nodes[t].label == TWEET:
                frontier.update(w for _, w in sub.incident(t, MENTIONS, "out")
                                if g.nodes[w].label == USER)
        frontier.update(n for n, node in sub.nodes.items() if node.label == HASHTAG)
        reached = set(sub.nodes)
        for _ in range(hop_budget):
            nxt = set()
            for v in frontier:
                nxt.update(w for _, w in g.incident(v) if w not in reached)
            reached |= nxt
            frontier = nxt
        sub = induced_subgraph(g, reached)
    return CandidateSubgraph(cid, sub, dict(grp.key), rule, corpus_of(sub))


def corpus_of(g: PropertyGraph) -> list[str]:
    return [node.props.get("text") or "" for node in g.nodes.values() if node.label == TWEET]


def filter_candidates_with_reasons(cs, theta_n: int, preds: PredicateSpec | None = None):
    """Like :func:`filter_candidates` but also returns ``(cid, reason)`` for drops."""
    if theta_n < 1:
        raise ConfigError("theta_n must be positive")
    kept, dropped = [], []
    for c in cs:
        comps = connected_components(c.graph)
        if not comps:
            dropped.append((c.cid, "empty"))
            continue
        if len(comps) > 1:
            g = induced_subgraph(c.graph, comps[0])
            c = CandidateSubgraph(c.cid, g, c.group_key, c.rule, corpus_of(g))
        if len(c.graph.nodes) < theta_n:
            dropped.append((c.cid, f"size {len(c.graph.nodes)} < {theta_n}"))
            continue
        reason = preds.check(c.graph) if preds else None
        if reason:
            dropped.append((c.cid, reason))
            continue
        kept.append(c)
    for cid, reason in dropped:
        logger.debug("dropped candidate %s: %s", cid, reason)
    return kept, dropped


def filter_candidates(cs, theta_n: int, preds: PredicateSpec | None = None):
    """C1/C2: keep the largest component of each candidate if it is big enough
    and every node and edge satisfies the predicates."""
    return filter_candidates_with_reasons(cs, theta_n, preds)[0]
